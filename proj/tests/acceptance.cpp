// Acceptance suite: one PASS/FAIL line per criterion. Exit status is the number of failures.
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "fixtures.hpp"
#include "specsing/cli.hpp"
#include "specsing/specsing.hpp"

using namespace specsing;

namespace {

int failures = 0;

void report(int id, const char* what, bool ok, const std::string& detail) {
  std::printf("[%s] %2d %s: %s\n", ok ? "PASS" : "FAIL", id, what, detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

template <typename F>
void criterion(int id, const char* what, F&& body) {
  try {
    std::string detail;
    const bool ok = body(detail);
    report(id, what, ok, detail);
  } catch (const std::exception& e) {
    report(id, what, false, std::string("exception: ") + e.what());
  }
}

const std::vector<double> k_grid = Window{0.1, 10.0, 400}.points();

}  // namespace

int main() {
  const auto potentials = test::bundled_potentials();

  criterion(1, "det M = 1", [&](std::string& d) {
    double worst = 0.0;
    for (const auto& [name, source] : potentials)
      for (double k : k_grid) worst = std::max(worst, std::abs(transfer_matrix(source(k), k).det() - 1.0));
    d = fmt("max |det M - 1| = %.2e over ", worst) + std::to_string(potentials.size()) + " potentials x 400 k";
    return worst < 1e-9;
  });

  criterion(2, "unitarity", [&](std::string& d) {
    const std::vector<std::function<Potential(double)>> real = {
        [](double) { return Potential::layers({{-1.0, 1.0, 2.0}}); },
        [](double) { return Potential::deltas({{0.0, 1.5}}); },
        [](double) { return double_delta(1.0, -0.5, 0.75); },
        [](double) { return test::gaussian_samples(1.0); },
        [](double k) { return from_medium(slab_medium(3.0, 1.0), k); },
    };
    double worst = 0.0;
    for (const auto& src : real)
      for (const auto& row : scan(src, k_grid))
        worst = std::max({worst, std::abs(row.defect.first), std::abs(row.defect.second)});
    double least_gain = INFINITY;
    for (const auto& row : scan(slab_medium({3.0, -0.05}, 1.0), k_grid))
      least_gain = std::min({least_gain, row.defect.first, row.defect.second});
    d = fmt("real max defect %.2e", worst) + fmt(", gain slab min defect %.3e", least_gain);
    return worst < 1e-9 && least_gain > 0.0;
  });

  criterion(3, "delta oracle", [&](std::string& d) {
    double worst_m = 0.0;
    for (cplx z : {cplx{1.0}, cplx{-2.0}, cplx{0.0, 3.0}, cplx{0.5, -0.7}})
      for (double k : k_grid) {
        const Mat2 M = transfer_matrix(Potential::deltas({{0.0, z}}), k).matrix();
        const cplx s = z / (2.0 * I * k);
        worst_m = std::max(worst_m, M.max_abs_diff({1.0 + s, s, -s, 1.0 - s}));
      }
    const auto fam = potential_family("alpha", [](double a) { return Potential::deltas({{0.0, cplx{0.0, a}}}); });
    const SearchResult ss = find_ss(fam, {0.5, 3.0}, {0.0, 8.0});
    double worst_a = 0.0, k_lo = INFINITY, k_hi = 0.0;
    for (const auto& r : ss.roots) {
      worst_a = std::max(worst_a, std::abs(r.tuned->value - 2.0 * r.k_star.real()));
      k_lo = std::min(k_lo, r.k_star.real());
      k_hi = std::max(k_hi, r.k_star.real());
    }
    const auto bound = find_resonances(Potential::deltas({{0.0, -2.0}}), {-1.0, 1.0, 0.5, 1.5});
    const double bound_err = bound.size() == 1 ? std::abs(bound[0].k_star - I) : INFINITY;
    d = fmt("|M - closed form| %.1e", worst_m) + ", " + std::to_string(ss.roots.size()) +
        fmt(" SS with max |alpha - 2k| %.1e", worst_a) + fmt(" spanning k in [%.3f, ", k_lo) +
        fmt("%.3f]", k_hi) + fmt(", bound state |k - i| %.1e", bound_err);
    return worst_m < 1e-12 && !ss.roots.empty() && ss.unconverged.empty() && worst_a < 1e-8 && k_lo < 0.6 &&
           k_hi > 2.9 && bound_err < 1e-8 && bound[0].kind == Kind::BoundState;
  });

  criterion(4, "real potentials have no SS", [&](std::string& d) {
    struct Pair {
      const char* name;
      Family real, complex;
      Window k, theta_real, theta_complex;
    };
    const std::vector<Pair> pairs = {
        {"delta", potential_family("z", [](double z) { return Potential::deltas({{0.0, z}}); }),
         potential_family("z", [](double z) { return Potential::deltas({{0.0, cplx{0.0, z}}}); }),
         {0.5, 3.0}, {-8.0, 8.0}, {0.0, 8.0}},
        {"slab", medium_family("eta", [](double eta) { return slab_medium(eta, 1.0); }), slab_family(3.0, 1.0),
         {1.0, 6.0}, {1.5, 4.0}, {-0.3, -0.01}},
        {"barrier", potential_family("h", [](double h) { return Potential::layers({{-1.0, 1.0, h}}); }),
         potential_family("h", [](double h) { return Potential::layers({{-1.0, 1.0, cplx{2.0, h}}}); }),
         {0.5, 5.0}, {-5.0, 5.0}, {-5.0, 5.0}},
    };
    bool ok = true;
    for (const auto& p : pairs) {
      const auto r = find_ss(p.real, p.k, p.theta_real);
      const auto c = find_ss(p.complex, p.k, p.theta_complex);
      d += std::string(d.empty() ? "" : "; ") + p.name + ": real " + std::to_string(r.roots.size()) + ", complex " +
           std::to_string(c.roots.size());
      ok = ok && r.roots.empty() && r.unconverged.empty() && !c.roots.empty();
    }
    return ok;
  });

  criterion(5, "duality", [&](std::string& d) {
    double worst_p = 0.0, worst_t = 0.0;
    for (const auto& [name, source] : potentials)
      for (double k : k_grid) {
        const Potential p = source(k);
        const Mat2 M = transfer_matrix(p, k).matrix();
        worst_p = std::max(worst_p, transfer_matrix(parity_transform(p), k).matrix().max_abs_diff(M.inverse().flipped()));
        worst_t = std::max(worst_t, transfer_matrix(time_reverse(p), k).matrix().max_abs_diff(M.conj().flipped()));
      }
    const Family gain = slab_family(3.0, 1.0);
    const Family conjugated =
        medium_family("kappa", [](double kappa) { return time_reverse(slab_medium({3.0, kappa}, 1.0)); });
    const auto ss = find_ss(gain, {1.0, 20.0}, {-0.4, -0.02});
    const auto cpa = find_cpa(conjugated, {1.0, 20.0}, {-0.4, -0.02});
    double worst_c = ss.roots.size() == cpa.roots.size() && !ss.roots.empty() ? 0.0 : INFINITY;
    for (std::size_t i = 0; std::isfinite(worst_c) && i < ss.roots.size(); ++i)
      worst_c = std::max({worst_c, std::abs(ss.roots[i].k_star.real() - cpa.roots[i].k_star.real()),
                          std::abs(ss.roots[i].tuned->value - cpa.roots[i].tuned->value)});
    d = fmt("parity %.1e", worst_p) + fmt(", time reversal %.1e", worst_t) + ", " + std::to_string(ss.roots.size()) +
        fmt(" SS vs CPA max diff %.1e", worst_c);
    return worst_p < 1e-8 && worst_t < 1e-8 && worst_c < 1e-8;
  });

  criterion(6, "slab laser modes", [&](std::string& d) {
    const double g_th = threshold_gain(3.0, 1.0);
    const auto modes = lasing_modes(3.0, 1.0, {1.0, 100.0});
    double worst_res = 0.0, worst_exact = 0.0, worst_spacing = 0.0;
    for (const auto& m : modes) {
      worst_res = std::max(worst_res, std::abs(ss_residual({3.0, m.kappa}, m.k, 1.0)));
      worst_exact = std::max(worst_exact, std::abs(m.gain / threshold_gain(cplx{3.0, m.kappa}, 1.0) - 1.0));
    }
    for (std::size_t i = 1; i < modes.size(); ++i)
      if (modes[i - 1].index >= 20)
        worst_spacing = std::max(worst_spacing, std::abs((modes[i].k - modes[i - 1].k) / (pi / 3.0) - 1.0));
    // gain of modes with index >= 300 against the real-index value 2 ln 2
    double worst_far = 0.0;
    for (const auto& m : lasing_modes(3.0, 1.0, {300.0 * pi / 3.0 - 0.5, 310.0 * pi / 3.0}))
      worst_far = std::max(worst_far, std::abs(m.gain / g_th - 1.0));
    const double m10 = std::abs(modes.at(9).gain / g_th - 1.0);
    d = std::to_string(modes.size()) + fmt(" modes, max residual %.1e", worst_res) +
        fmt(", gain vs complex-index threshold %.1e", worst_exact) +
        fmt(", vs g_th = %.6f: ", g_th) + fmt("%.1e at m >= 300", worst_far) + fmt(" (%.1e at m = 10)", m10) +
        fmt(", spacing deviation %.1e for m >= 20", worst_spacing);
    return !modes.empty() && worst_res < 1e-10 && worst_exact < 1e-6 && worst_far < 1e-6 && worst_spacing < 5e-3 &&
           std::abs(g_th - 1.386294) < 1e-6;
  });

  criterion(7, "find_ss reproduces lasing_modes", [&](std::string& d) {
    const auto modes = lasing_modes(3.0, 1.0, {2.0, 20.0});
    const auto ss = find_ss(slab_family(3.0, 1.0), {2.0, 20.0}, {-0.4, -0.02});
    if (ss.roots.size() != modes.size()) {
      d = std::to_string(ss.roots.size()) + " SS vs " + std::to_string(modes.size()) + " modes";
      return false;
    }
    double worst = 0.0;
    for (std::size_t i = 0; i < modes.size(); ++i)
      worst = std::max({worst, std::abs(ss.roots[i].k_star.real() / modes[i].k - 1.0),
                        std::abs(ss.roots[i].tuned->value / modes[i].kappa - 1.0)});
    d = std::to_string(modes.size()) + fmt(" modes, max relative difference %.1e", worst);
    return worst < 1e-6;
  });

  criterion(8, "nonlinear SS intensity curve", [&](std::string& d) {
    const double g_th = threshold_gain(3.0, 1.0);
    const LasingMode mode = lasing_modes(3.0, 1.0, {10.0, 10.6}).at(0);
    const SlabSpec spec{3.0, 0.0, 1.0, 2.0 * pi / mode.k, 0.01};
    std::vector<double> gains;
    for (int i = 1; i <= 10; ++i) gains.push_back(g_th * (1.0 + 0.01 * i));
    const IntensityCurve c = intensity_curve(spec, mode, gains);
    auto at = [&](double g) {
      SlabSpec s = spec;
      s.kappa = -g * spec.wavelength / (4.0 * pi);
      return s;
    };
    SlabSpec threshold = spec;
    threshold.kappa = mode.kappa;
    const NonlinearResult zero = nonlinear_outgoing_solve(threshold, mode);
    const NonlinearResult below = nonlinear_outgoing_solve(at(0.99 * g_th), mode);
    const NonlinearResult mid = nonlinear_outgoing_solve(at(1.05 * g_th), mode);
    const bool frozen = std::abs(mid.intensity - 127.300942363) < 1e-5;
    d = fmt("R^2 %.6f", c.r_squared) + fmt(", intercept/g_th - 1 = %.2e", c.threshold_fit / g_th - 1.0) +
        fmt(", I at mode threshold %.1e", zero.intensity) +
        std::string(", below threshold: ") + (below.status == NonlinearStatus::NoSolution ? "no solution" : "solution") +
        fmt(", I(1.05 g_th) = %.9f", mid.intensity);
    return c.r_squared > 0.99 && std::abs(c.threshold_fit / g_th - 1.0) < 0.02 &&
           zero.status == NonlinearStatus::Lasing && zero.intensity < 1e-6 &&
           below.status == NonlinearStatus::NoSolution && frozen;
  });

  criterion(9, "pseudo-Hermitian toolkit", [&](std::string& d) {
    const double x = 2.0;
    const Matrix h = two_level_hamiltonian(x);
    const BiorthSystem sys = biorth_with_right(h, two_level_right_eigenvectors(x));
    const MetricOperator mo = metric(sys);
    Matrix expected = Matrix::Zero(2, 2);
    expected(0, 0) = 1.0;
    expected(1, 1) = 0.25;
    const double e_err = std::max(std::abs(sys.eigenvalues(0) + 2.0), std::abs(sys.eigenvalues(1) - 2.0));
    const double eta_err = (mo.eta - expected).cwiseAbs().maxCoeff();
    const double inter = intertwine_residual(h, mo);
    const Hermitized herm = hermitize(h, mo);
    Eigen::SelfAdjointEigenSolver<Matrix> es(herm.h);
    const double spec_err = std::max(std::abs(es.eigenvalues()(0) + 2.0), std::abs(es.eigenvalues()(1) - 2.0));

    std::vector<double> ts;
    for (int i = 0; i <= 40; ++i) ts.push_back(-1.0 + 0.05 * i);
    const ExceptionalScan eps = exceptional_scan(two_level_hamiltonian, ts);
    const bool ep_ok = eps.exceptional.size() == 1 && std::abs(eps.exceptional[0].t) <= 0.05;

    std::vector<double> grid;
    for (int i = 0; i <= 4000; ++i) grid.push_back(-8.0 + 16.0 * i / 4000.0);
    const double kappa = 0.5;
    const ParityMetricRecord pm = parity_metric_demo(
        kappa, grid, [](double y) { return cplx{std::exp(-y * y)}; },
        [](double y) { return cplx{y * std::exp(-y * y)}; });
    const double pm_err = std::abs(pm.difference - 2.0 * std::sinh(kappa) * -0.3133285343288750);

    d = fmt("E err %.1e", e_err) + fmt(", eta err %.1e", eta_err) + fmt(", intertwine %.1e", inter) +
        fmt(", h - h^dag %.1e", herm.hermiticity_defect) + fmt(", spectrum %.1e", spec_err) +
        (ep_ok ? fmt(", EP at x = %.1e", eps.exceptional[0].t) : std::string(", EP not found")) +
        fmt(", parity metric err %.1e", pm_err);
    return e_err < 1e-12 && eta_err < 1e-12 && inter < 1e-10 && herm.hermiticity_defect < 1e-9 && spec_err < 1e-9 &&
           ep_ok && pm_err < 1e-6;
  });

  criterion(10, "CLI determinism", [&](std::string& d) {
    const std::string data = SPECSING_DATA_DIR;
    const std::vector<std::vector<std::string>> commands = {
        {"scan", "--input", data + "/gaussian.pot", "--k", "0.5:5:200"},
        {"scan", "--input", data + "/empty.medium", "--k", "1:2:100", "--format", "json"},
        {"ss", "--input", data + "/slab.medium", "--k", "2:14:200", "--param", "kappa=-0.4:-0.02:100"},
        {"ss", "--input", data + "/delta_alpha.pot", "--k", "0.5:3:50", "--param", "alpha=0:8:50", "--format", "json"},
        {"cpa", "--input", data + "/pt_bilayer.medium", "--k", "1:6:100", "--param", "kappa=-2:2:100"},
        {"resonances", "--input", data + "/barrier.pot", "--re", "0.1:5", "--im=-2:-0.01"},
        {"resonances", "--input", data + "/attractive_delta.pot", "--re=-1:1", "--im", "0.5:1.5"},
        {"threshold", "--eta", "3", "--L", "1"},
        {"modes", "--eta", "3", "--L", "1", "--k", "1:30", "--format", "json"},
        {"intensity", "--eta", "3", "--L", "1", "--sigma", "0.01", "--ratio", "1.01:1.1:10"},
        {"metric", "--matrix", data + "/two_level.txt"},
        {"ep-scan", "--family", data + "/two_level_family.json", "--t=-1:1:41"},
    };
    auto run = [](std::vector<std::string> args, const char* threads) {
      setenv("SPECSING_THREADS", threads, 1);
      args.insert(args.begin(), "specsing");
      std::vector<const char*> argv;
      for (const auto& a : args) argv.push_back(a.c_str());
      std::ostringstream out, err;
      const int status = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
      return std::to_string(status) + "\n" + out.str();
    };
    int identical = 0;
    std::string mismatched;
    for (const auto& cmd : commands) {
      const std::string a = run(cmd, "1"), b = run(cmd, "1"), c = run(cmd, "4");
      if (a == b && a == c && a.rfind("0\n", 0) == 0) ++identical;
      else mismatched += " " + cmd[0];
    }
    unsetenv("SPECSING_THREADS");
    d = std::to_string(identical) + "/" + std::to_string(commands.size()) +
        " runs byte-identical across repeats and thread counts" + (mismatched.empty() ? "" : "; differ:" + mismatched);
    return identical == static_cast<int>(commands.size());
  });

  std::printf("%d of 10 criteria failed\n", failures);
  return failures;
}
