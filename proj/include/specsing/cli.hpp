#pragma once

#include <CLI11.hpp>

#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "specsing/io.hpp"
#include "specsing/pseudoherm.hpp"
#include "specsing/slablaser.hpp"
#include "specsing/spectral.hpp"

namespace specsing::cli {

enum ExitCode : int { Ok = 0, ParseFailure = 2, SolverFailure = 3 };

/// Parses `lo:hi` or `lo:hi:n`.
inline Window parse_window(const std::string& text, std::size_t default_n) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  for (std::string p; std::getline(ss, p, ':');) parts.push_back(p);
  if (parts.size() != 2 && parts.size() != 3) throw ParseError("window", 0, "expected lo:hi[:n], got '" + text + "'");
  const auto lo = detail::parse_number(parts[0]), hi = detail::parse_number(parts[1]);
  if (!lo || !hi || !std::isfinite(*lo) || !std::isfinite(*hi) || !(*lo < *hi))
    throw ParseError("window", 0, "expected finite lo < hi, got '" + text + "'");
  Window w{*lo, *hi, default_n};
  if (parts.size() == 3) {
    const auto n = detail::parse_number(parts[2]);
    if (!n || *n < 2 || *n != std::floor(*n) || *n > 1e7)
      throw ParseError("window", 0, "sample count must be an integer >= 2, got '" + parts[2] + "'");
    w.n = static_cast<std::size_t>(*n);
  }
  return w;
}

/// Parses `NAME=VALUE` bindings.
inline Parameters parse_bindings(const std::vector<std::string>& items) {
  Parameters out;
  for (const auto& item : items) {
    const auto eq = item.find('=');
    const auto value = eq == std::string::npos ? std::nullopt : detail::parse_number(item.substr(eq + 1));
    if (!value || !std::isfinite(*value) || !detail::is_identifier(item.substr(0, eq)))
      throw ParseError("--set", 0, "expected NAME=VALUE, got '" + item + "'");
    out[item.substr(0, eq)] = *value;
  }
  return out;
}

inline nlohmann::json window_json(const Window& w) { return {{"lo", w.lo}, {"hi", w.hi}, {"n", w.n}}; }

namespace detail {

struct Common {
  std::string format = "csv";
  std::string output;
};

inline void require_bound(const Description& d, const Parameters& params, const std::string& free = {}) {
  for (const auto& name : d.parameters())
    if (name != free && !params.count(name))
      throw ParseError("--set", 0, "parameter '" + name + "' appears in the input but is not bound");
}

inline void add_complex(std::vector<Cell>& row, cplx z) {
  row.emplace_back(z.real());
  row.emplace_back(z.imag());
}

inline std::vector<std::string> complex_columns(const std::string& name) { return {name + "_re", name + "_im"}; }

inline void add_columns(Report& r, const std::vector<std::string>& names) {
  r.columns.insert(r.columns.end(), names.begin(), names.end());
}

}  // namespace detail

/// Entry point of the command-line tool. Returns the process exit status.
inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Spectral singularities, resonances and slab lasers for 1D complex scattering potentials; "
               "pseudo-Hermitian matrix toolkit.",
               "specsing"};
  app.set_version_flag("--version", std::string(version));
  app.require_subcommand(1);
  app.footer("Threads: set SPECSING_THREADS (default: hardware concurrency). Output is identical for any thread count.\n"
             "Negative window bounds must be attached with '=', e.g. --im=-2:2.");

  detail::Common common;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--format", common.format, "Output format")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
    sub->add_option("--output,-o", common.output, "Output file (default: standard output)");
  };

  std::string input, k_window = "0.5:10:400", param;
  std::vector<std::string> sets;
  double tol = 1e-8;
  std::size_t theta_points = 400;

  auto* scan_cmd = app.add_subcommand("scan", "Transfer matrix, amplitudes and unitarity defect along a k grid");
  scan_cmd->add_option("--input,-i", input, "Medium or potential file")->required()->check(CLI::ExistingFile);
  scan_cmd->add_option("--k", k_window, "Wavenumber window lo:hi[:n]")->capture_default_str();
  scan_cmd->add_option("--set", sets, "Bind a file parameter, NAME=VALUE (repeatable)");
  add_common(scan_cmd);

  auto add_search = [&](CLI::App* sub) {
    sub->add_option("--input,-i", input, "Medium or potential file")->required()->check(CLI::ExistingFile);
    sub->add_option("--k", k_window, "Wavenumber window lo:hi[:n]")->capture_default_str();
    sub->add_option("--param", param, "Tuned parameter NAME=lo:hi[:n]")->required();
    sub->add_option("--set", sets, "Bind another file parameter, NAME=VALUE (repeatable)");
    sub->add_option("--tol", tol, "Residual tolerance on |M22| (|M11| for cpa)")->check(CLI::PositiveNumber)->capture_default_str();
    sub->add_option("--theta-points", theta_points, "Parameter samples when n is not given")->check(CLI::Range(2, 100000))->capture_default_str();
    add_common(sub);
  };
  auto* ss_cmd = app.add_subcommand("ss", "Spectral singularities: real (k, parameter) with M22 = 0");
  add_search(ss_cmd);
  auto* cpa_cmd = app.add_subcommand("cpa", "Coherent perfect absorption points: real (k, parameter) with M11 = 0");
  add_search(cpa_cmd);

  std::string re_window = "0.1:5", im_window = "-2:2";
  int edge_samples = 32;
  auto* res_cmd = app.add_subcommand("resonances", "Complex zeros of M22 in a k-plane rectangle (potential files)");
  res_cmd->add_option("--input,-i", input, "Potential file")->required()->check(CLI::ExistingFile);
  res_cmd->add_option("--re", re_window, "Re k range lo:hi")->capture_default_str();
  res_cmd->add_option("--im", im_window, "Im k range lo:hi")->capture_default_str();
  res_cmd->add_option("--set", sets, "Bind a file parameter, NAME=VALUE (repeatable)");
  res_cmd->add_option("--tol", tol, "Residual tolerance on |M22|")->check(CLI::PositiveNumber)->capture_default_str();
  res_cmd->add_option("--edge-samples", edge_samples, "Initial samples per contour edge")->check(CLI::Range(4, 4096))->capture_default_str();
  add_common(res_cmd);

  double eta = 3.0, length = 1.0;
  auto* thr_cmd = app.add_subcommand("threshold", "Threshold gain of a homogeneous slab laser");
  thr_cmd->add_option("--eta", eta, "Real refractive index")->check(CLI::PositiveNumber)->capture_default_str();
  thr_cmd->add_option("--L", length, "Slab length")->check(CLI::PositiveNumber)->capture_default_str();
  add_common(thr_cmd);

  std::string mode_window = "1:50";
  double mode_tol = 1e-12;
  auto* modes_cmd = app.add_subcommand("modes", "Lasing modes (k_m, kappa_m) of a homogeneous slab");
  modes_cmd->add_option("--eta", eta, "Real refractive index")->check(CLI::PositiveNumber)->capture_default_str();
  modes_cmd->add_option("--L", length, "Slab length")->check(CLI::PositiveNumber)->capture_default_str();
  modes_cmd->add_option("--k", mode_window, "Wavenumber window lo:hi")->capture_default_str();
  modes_cmd->add_option("--tol", mode_tol, "Residual tolerance")->check(CLI::PositiveNumber)->capture_default_str();
  add_common(modes_cmd);

  double sigma = 0.01;
  int mode_index = 10;
  std::string ratios = "1.01:1.1:10";
  auto* int_cmd = app.add_subcommand("intensity", "Output intensity versus gain for a Kerr slab laser");
  int_cmd->add_option("--eta", eta, "Real refractive index")->check(CLI::PositiveNumber)->capture_default_str();
  int_cmd->add_option("--L", length, "Slab length")->check(CLI::PositiveNumber)->capture_default_str();
  int_cmd->add_option("--sigma", sigma, "Kerr coefficient")->check(CLI::PositiveNumber)->capture_default_str();
  int_cmd->add_option("--mode", mode_index, "Linear mode index m seeding the branch")->check(CLI::PositiveNumber)->capture_default_str();
  int_cmd->add_option("--ratio", ratios, "Gain window as multiples of g_th, lo:hi[:n], within (1, 1.2]")->capture_default_str();
  add_common(int_cmd);

  std::string matrix_path;
  auto* metric_cmd = app.add_subcommand("metric", "Biorthonormal system, metric, and Hermitization of a matrix");
  metric_cmd->add_option("--matrix,-m", matrix_path, "Matrix file (dense text or JSON)")->required()->check(CLI::ExistingFile);
  add_common(metric_cmd);

  std::string family_path, t_window = "-1:1:41";
  auto* ep_cmd = app.add_subcommand("ep-scan", "Exceptional points along a matrix family H(t) = sum t^j M_j");
  ep_cmd->add_option("--family,-f", family_path, "Family JSON file with a \"terms\" array")->required()->check(CLI::ExistingFile);
  ep_cmd->add_option("--t", t_window, "Parameter window lo:hi[:n]")->capture_default_str();
  add_common(ep_cmd);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? Ok : ParseFailure;
  }

  const Format format = common.format == "json" ? Format::Json : Format::Csv;
  Report report;
  int status = Ok;
  try {
    const Parameters bound = parse_bindings(sets);
    nlohmann::json& cfg = report.config;
    cfg["subcommand"] = app.get_subcommands().front()->get_name();

    if (scan_cmd->parsed()) {
      const Description d = load_description(input);
      detail::require_bound(d, bound);
      const Window w = parse_window(k_window, 400);
      cfg["input"] = input;
      cfg["k"] = window_json(w);
      cfg["set"] = bound;
      const auto ks = w.points();
      const auto rows = scan([&](double k) { return d.at(k, bound); }, ks);
      report.columns = {"k"};
      for (const char* e : {"m11", "m12", "m21", "m22", "T", "R_left", "R_right"})
        detail::add_columns(report, detail::complex_columns(e));
      detail::add_columns(report, {"defect_left", "defect_right"});
      for (const auto& r : rows) {
        std::vector<Cell> row{r.k};
        detail::add_complex(row, r.m.m11);
        detail::add_complex(row, r.m.m12);
        detail::add_complex(row, r.m.m21);
        detail::add_complex(row, r.m.m22);
        const double nan = std::numeric_limits<double>::quiet_NaN();
        const Amplitudes a = r.amplitudes.value_or(Amplitudes{{nan, nan}, {nan, nan}, {nan, nan}});
        detail::add_complex(row, a.transmission);
        detail::add_complex(row, a.reflection_left);
        detail::add_complex(row, a.reflection_right);
        row.emplace_back(r.amplitudes ? r.defect.first : nan);
        row.emplace_back(r.amplitudes ? r.defect.second : nan);
        report.add(std::move(row));
      }
    } else if (ss_cmd->parsed() || cpa_cmd->parsed()) {
      const bool cpa = cpa_cmd->parsed();
      const Description d = load_description(input);
      const auto eq = param.find('=');
      if (eq == std::string::npos) throw ParseError("--param", 0, "expected NAME=lo:hi[:n]");
      const std::string name = param.substr(0, eq);
      if (!d.parameters().count(name))
        throw ParseError("--param", 0, "parameter '" + name + "' does not appear in " + input);
      detail::require_bound(d, bound, name);
      const Window kw = parse_window(k_window, 400);
      const Window tw = parse_window(param.substr(eq + 1), theta_points);
      SearchOptions opt;
      opt.tol = tol;
      opt.k_points = kw.n;
      opt.theta_points = tw.n;
      cfg["input"] = input;
      cfg["k"] = window_json(kw);
      cfg["param"] = {{"name", name}, {"window", window_json(tw)}};
      cfg["set"] = bound;
      cfg["tol"] = tol;
      const Family family{name, [&](double k, double theta) {
                            Parameters p = bound;
                            p[name] = theta;
                            return d.at(k, p);
                          }};
      const SearchResult res = cpa ? find_cpa(family, kw, tw, opt) : find_ss(family, kw, tw, opt);
      report.columns = {"k_star", name + "_star", "residual", "kind"};
      for (const auto& r : res.roots)
        report.add({r.k_star.real(), r.tuned ? r.tuned->value : 0.0, r.residual, std::string(to_string(r.kind))});
      if (!res.unconverged.empty()) {
        for (const auto& r : res.unconverged)
          err << "specsing: Newton stalled near k = " << specsing::detail::format_double(r.k_star.real()) << ", "
              << name << " = " << specsing::detail::format_double(r.tuned ? r.tuned->value : 0.0)
              << " (residual " << specsing::detail::format_double(r.residual) << ")\n";
        status = SolverFailure;
      }
    } else if (res_cmd->parsed()) {
      const Description d = load_description(input);
      if (d.is_medium())
        throw ParseError(input, 0, "resonances need a k-independent potential ('type potential', deltas or samples)");
      detail::require_bound(d, bound);
      const Window re = parse_window(re_window, 2), im = parse_window(im_window, 2);
      ResonanceOptions opt;
      opt.tol = tol;
      opt.edge_samples = edge_samples;
      cfg["input"] = input;
      cfg["re"] = window_json(re);
      cfg["im"] = window_json(im);
      cfg["set"] = bound;
      cfg["tol"] = tol;
      const auto roots = find_resonances(d.potential(bound), {re.lo, re.hi, im.lo, im.hi}, opt);
      report.columns = {"k_re", "k_im", "residual", "kind", "multiplicity"};
      for (const auto& r : roots)
        report.add({r.k_star.real(), r.k_star.imag(), r.residual, std::string(to_string(r.kind)),
                    static_cast<long long>(r.multiplicity)});
    } else if (thr_cmd->parsed()) {
      cfg["eta"] = eta;
      cfg["L"] = length;
      report.columns = {"eta", "L", "reflectivity", "g_th"};
      report.add({eta, length, reflectivity(cplx{eta, 0.0}).real(), threshold_gain(eta, length)});
    } else if (modes_cmd->parsed()) {
      const Window w = parse_window(mode_window, 2);
      cfg["eta"] = eta;
      cfg["L"] = length;
      cfg["k"] = {{"lo", w.lo}, {"hi", w.hi}};
      cfg["tol"] = mode_tol;
      const auto modes = lasing_modes(eta, length, w, mode_tol);
      report.columns = {"index", "k", "kappa", "gain", "residual"};
      for (const auto& m : modes) {
        if (!m.converged) {
          err << "specsing: mode " << m.index << " did not converge (residual "
              << specsing::detail::format_double(m.residual) << ")\n";
          status = SolverFailure;
          continue;
        }
        report.add({static_cast<long long>(m.index), m.k, m.kappa, m.gain, m.residual});
      }
    } else if (int_cmd->parsed()) {
      const Window rw = parse_window(ratios, 10);
      cfg["eta"] = eta;
      cfg["L"] = length;
      cfg["sigma"] = sigma;
      cfg["mode"] = mode_index;
      cfg["ratio"] = window_json(rw);
      const double g_th = threshold_gain(eta, length);
      if (!std::isfinite(g_th)) throw InvalidArgument("intensity: eta = 1 has no threshold");
      const double spacing = pi / (eta * length);
      const double k_seed = spacing * mode_index;
      const auto modes = lasing_modes(eta, length, {k_seed - 0.5 * spacing, k_seed + 0.5 * spacing, 2});
      if (modes.size() != 1 || !modes.front().converged)
        throw ConvergenceError("intensity: linear mode " + std::to_string(mode_index) + " not found");
      SlabSpec spec{eta, 0.0, length, 2.0 * pi / modes.front().k, sigma};
      std::vector<double> gains;
      for (double r : rw.points()) gains.push_back(r * g_th);
      const IntensityCurve curve = intensity_curve(spec, modes.front(), gains);
      report.summary = {{"g_th", g_th},
                        {"slope", curve.slope},
                        {"threshold_fit", curve.threshold_fit},
                        {"r_squared", curve.r_squared}};
      report.columns = {"gain", "gain_ratio", "intensity", "k"};
      for (const auto& p : curve.points) report.add({p.gain, p.gain / g_th, p.intensity, p.k});
    } else if (metric_cmd->parsed()) {
      const Matrix h = load_matrix(matrix_path);
      cfg["matrix"] = matrix_path;
      const BiorthSystem sys = biorth(h);
      const MetricOperator mo = metric(sys);
      const Hermitized herm = hermitize(h, mo);
      report.columns = {"quantity", "row", "col", "re", "im"};
      for (Eigen::Index i = 0; i < sys.dimension(); ++i)
        report.add({std::string("eigenvalue"), static_cast<long long>(i), 0LL, sys.eigenvalues(i).real(),
                    sys.eigenvalues(i).imag()});
      auto dump = [&](const char* what, const Matrix& m) {
        for (Eigen::Index r = 0; r < m.rows(); ++r)
          for (Eigen::Index c = 0; c < m.cols(); ++c)
            report.add({std::string(what), static_cast<long long>(r), static_cast<long long>(c), m(r, c).real(),
                        m(r, c).imag()});
      };
      dump("right", sys.right);
      dump("left", sys.left);
      dump("eta", mo.eta);
      dump("rho", mo.rho);
      dump("h", herm.h);
      auto scalar = [&](const char* what, double v) {
        report.add({std::string(what), 0LL, 0LL, v, 0.0});
      };
      scalar("biorth_residual", sys.residual());
      scalar("intertwine_residual", intertwine_residual(h, mo));
      scalar("hermiticity_defect", herm.hermiticity_defect);
      scalar("rho_condition", herm.rho_condition);
      if (herm.ill_conditioned)
        err << "specsing: warning: rho is ill-conditioned (condition number "
            << specsing::detail::format_double(herm.rho_condition) << ")\n";
    } else if (ep_cmd->parsed()) {
      const MatrixFamily fam = load_family(family_path);
      const Window w = parse_window(t_window, 41);
      cfg["family"] = family_path;
      cfg["t"] = window_json(w);
      const auto ts = w.points();
      const ExceptionalScan res = exceptional_scan(fam, ts);
      report.columns = {"t", "type", "eigenvalue_re", "eigenvalue_im", "algebraic", "geometric"};
      struct Row {
        double t;
        std::vector<Cell> cells;
      };
      std::vector<Row> rows;
      for (const auto& e : res.exceptional)
        rows.push_back({e.t, {e.t, std::string("exceptional"), e.eigenvalue.real(), e.eigenvalue.imag(),
                              static_cast<long long>(e.algebraic), static_cast<long long>(e.geometric)}});
      for (const auto& dg : res.degeneracies)
        rows.push_back({dg.t, {dg.t, std::string("degeneracy"), dg.eigenvalue.real(), dg.eigenvalue.imag(),
                               static_cast<long long>(dg.multiplicity), static_cast<long long>(dg.multiplicity)}});
      std::stable_sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) { return a.t < b.t; });
      for (auto& r : rows) report.add(std::move(r.cells));
    }
  } catch (const ParseError& e) {
    err << "specsing: " << e.what() << '\n';
    return ParseFailure;
  } catch (const InvalidArgument& e) {
    err << "specsing: invalid input: " << e.what() << '\n';
    return ParseFailure;
  } catch (const DefectiveMatrixError& e) {
    err << "specsing: " << e.what() << '\n';
    return SolverFailure;
  } catch (const ComplexSpectrumError& e) {
    err << "specsing: " << e.what() << " (eigenvalue " << specsing::detail::format_double(e.eigenvalue.real())
        << (e.eigenvalue.imag() < 0 ? " - " : " + ")
        << specsing::detail::format_double(std::abs(e.eigenvalue.imag())) << "i)\n";
    return SolverFailure;
  } catch (const ConvergenceError& e) {
    err << "specsing: " << e.what() << '\n';
    return SolverFailure;
  }

  try {
    if (common.output.empty()) write_report(report, format, out);
    else write_report(report, format, common.output);
  } catch (const std::exception& e) {
    err << "specsing: " << e.what() << '\n';
    return 1;
  }
  return status;
}

}  // namespace specsing::cli
