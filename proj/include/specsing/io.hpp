#pragma once

#include <nlohmann/json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "specsing/potentials.hpp"
#include "specsing/pseudoherm.hpp"

namespace specsing {

inline constexpr const char* version = "0.1.0";

/// Malformed input file; `line` is 1-based, 0 when the error is not tied to a line.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& source, int line, const std::string& message)
      : std::runtime_error(source + (line > 0 ? ":" + std::to_string(line) : std::string()) + ": " + message),
        source(source),
        line(line) {}
  std::string source;
  int line;
};

using Parameters = std::map<std::string, double>;

/// A real number or `scale * name`, where name is bound later. Written as `1.5`, `kappa`,
/// `-kappa` or `2*kappa`.
struct Term {
  double constant = 0.0;
  double scale = 0.0;
  std::string parameter;

  double eval(const Parameters& params) const {
    if (parameter.empty()) return constant;
    const auto it = params.find(parameter);
    require(it != params.end(), "parameter '" + parameter + "' is not bound");
    return scale * it->second;
  }
};

struct ComplexTerm {
  Term re;
  Term im;
  cplx eval(const Parameters& params) const { return {re.eval(params), im.eval(params)}; }
};

/// Parsed medium/potential description, possibly depending on named parameters.
///
/// File format (line oriented, `#` starts a comment):
///
///     type medium            # optional; `potential` reads [layers] as potential values
///     [layers]
///     x_left x_right Re Im   # refractive index for a medium, v for a potential
///     [deltas]
///     x Re(z) Im(z)
///     [samples]
///     x Re(v) Im(v)          # uniform grid, increasing x
///
/// Deltas and samples always describe a potential and cannot be mixed with each other or
/// with medium layers.
struct Description {
  enum class Type { Medium, Potential };
  struct LayerRow {
    double x_left, x_right;
    ComplexTerm value;
  };
  struct PointRow {
    double x;
    ComplexTerm value;
  };

  Type type = Type::Medium;
  std::vector<LayerRow> layers;
  std::vector<PointRow> deltas;
  std::vector<PointRow> samples;

  bool is_medium() const { return type == Type::Medium; }

  std::set<std::string> parameters() const {
    std::set<std::string> out;
    auto add = [&](const ComplexTerm& c) {
      if (!c.re.parameter.empty()) out.insert(c.re.parameter);
      if (!c.im.parameter.empty()) out.insert(c.im.parameter);
    };
    for (const auto& l : layers) add(l.value);
    for (const auto& d : deltas) add(d.value);
    for (const auto& s : samples) add(s.value);
    return out;
  }

  Medium medium(const Parameters& params = {}) const {
    require(is_medium(), "description is a potential, not a medium");
    std::vector<MediumLayer> out;
    for (const auto& l : layers) out.push_back({l.x_left, l.x_right, l.value.eval(params)});
    return Medium(std::move(out));
  }

  Potential potential(const Parameters& params = {}) const {
    require(!is_medium(), "description is a medium; materialize it with from_medium");
    if (!deltas.empty()) {
      std::vector<Delta> out;
      for (const auto& d : deltas) out.push_back({d.x, d.value.eval(params)});
      return Potential::deltas(std::move(out));
    }
    if (!samples.empty()) {
      std::vector<cplx> values;
      for (const auto& s : samples) values.push_back(s.value.eval(params));
      return Potential::sampled(samples.front().x, samples.back().x, std::move(values));
    }
    std::vector<Layer> out;
    for (const auto& l : layers) out.push_back({l.x_left, l.x_right, l.value.eval(params)});
    return Potential::layers(std::move(out));
  }

  /// Potential at wavenumber k (media are materialized, potentials returned as is).
  Potential at(double k, const Parameters& params = {}) const {
    return is_medium() ? from_medium(medium(params), k) : potential(params);
  }
};

namespace detail {

inline std::optional<double> parse_number(const std::string& s) {
  if (s.empty()) return std::nullopt;
  std::size_t used = 0;
  try {
    const double v = std::stod(s, &used);
    if (used != s.size()) return std::nullopt;
    return v;
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

inline bool is_identifier(const std::string& s) {
  if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
  for (char c : s)
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_')) return false;
  return !parse_number(s).has_value();
}

inline std::optional<Term> parse_term(const std::string& tok) {
  if (auto v = parse_number(tok)) {
    if (!std::isfinite(*v)) return std::nullopt;
    return Term{*v, 0.0, {}};
  }
  if (const auto star = tok.find('*'); star != std::string::npos) {
    const auto scale = parse_number(tok.substr(0, star));
    const std::string name = tok.substr(star + 1);
    if (!scale || !std::isfinite(*scale) || !is_identifier(name)) return std::nullopt;
    return Term{0.0, *scale, name};
  }
  if (!tok.empty() && (tok[0] == '-' || tok[0] == '+')) {
    const std::string name = tok.substr(1);
    if (!is_identifier(name)) return std::nullopt;
    return Term{0.0, tok[0] == '-' ? -1.0 : 1.0, name};
  }
  if (is_identifier(tok)) return Term{0.0, 1.0, tok};
  return std::nullopt;
}

inline std::vector<std::string> split_ws(const std::string& line) {
  std::istringstream is(line);
  std::vector<std::string> out;
  for (std::string t; is >> t;) out.push_back(t);
  return out;
}

inline std::string strip_comment(const std::string& line) {
  const auto hash = line.find('#');
  return hash == std::string::npos ? line : line.substr(0, hash);
}

}  // namespace detail

inline Description parse_description(std::istream& in, const std::string& source = "<input>") {
  Description d;
  bool type_given = false;
  enum class Section { None, Layers, Deltas, Samples } section = Section::None;
  int lineno = 0;
  for (std::string raw; std::getline(in, raw);) {
    ++lineno;
    const auto tokens = detail::split_ws(detail::strip_comment(raw));
    if (tokens.empty()) continue;
    auto fail = [&](const std::string& msg) { throw ParseError(source, lineno, msg); };

    if (tokens[0].front() == '[') {
      if (tokens.size() != 1) fail("unexpected text after section header");
      if (tokens[0] == "[layers]") section = Section::Layers;
      else if (tokens[0] == "[deltas]") section = Section::Deltas;
      else if (tokens[0] == "[samples]") section = Section::Samples;
      else fail("unknown section " + tokens[0]);
      continue;
    }
    if (tokens[0] == "type") {
      if (section != Section::None || type_given) fail("'type' must appear once, before any section");
      if (tokens.size() != 2) fail("expected 'type medium' or 'type potential'");
      if (tokens[1] == "medium") d.type = Description::Type::Medium;
      else if (tokens[1] == "potential") d.type = Description::Type::Potential;
      else fail("unknown type '" + tokens[1] + "'");
      type_given = true;
      continue;
    }
    if (section == Section::None) fail("data outside of a section");

    auto number = [&](const std::string& t, const char* what) {
      const auto v = detail::parse_number(t);
      if (!v || !std::isfinite(*v)) fail(std::string("invalid ") + what + " '" + t + "'");
      return *v;
    };
    auto term = [&](const std::string& t, const char* what) {
      const auto v = detail::parse_term(t);
      if (!v) fail(std::string("invalid ") + what + " '" + t + "'");
      return *v;
    };

    if (section == Section::Layers) {
      if (tokens.size() != 4) fail("layer rows need 4 columns: x_left x_right re im");
      Description::LayerRow row{number(tokens[0], "x_left"), number(tokens[1], "x_right"),
                                {term(tokens[2], "real part"), term(tokens[3], "imaginary part")}};
      if (!(row.x_left < row.x_right)) fail("layer needs x_left < x_right");
      if (!d.layers.empty() && d.layers.back().x_right > row.x_left) fail("layers must be sorted and disjoint");
      d.layers.push_back(row);
    } else {
      if (tokens.size() != 3) fail("rows need 3 columns: x re im");
      Description::PointRow row{number(tokens[0], "position"),
                                {term(tokens[1], "real part"), term(tokens[2], "imaginary part")}};
      auto& rows = section == Section::Deltas ? d.deltas : d.samples;
      if (!rows.empty() && !(rows.back().x < row.x)) fail("positions must be strictly increasing");
      rows.push_back(row);
    }
  }

  const int kinds = !d.layers.empty() + !d.deltas.empty() + !d.samples.empty();
  if (kinds > 1) throw ParseError(source, 0, "layers, deltas and samples cannot be mixed in one file");
  if (!d.deltas.empty() || !d.samples.empty()) {
    if (type_given && d.type == Description::Type::Medium)
      throw ParseError(source, 0, "deltas and samples describe a potential, not a medium");
    d.type = Description::Type::Potential;
  }
  if (!d.samples.empty()) {
    if (d.samples.size() < 2) throw ParseError(source, 0, "[samples] needs at least two rows");
    const double x0 = d.samples.front().x, x1 = d.samples.back().x;
    const double dx = (x1 - x0) / static_cast<double>(d.samples.size() - 1);
    for (std::size_t i = 0; i < d.samples.size(); ++i)
      if (std::abs(d.samples[i].x - (x0 + dx * static_cast<double>(i))) > 1e-9 * std::max(1.0, std::abs(x1 - x0)))
        throw ParseError(source, 0, "[samples] grid must be uniform (row " + std::to_string(i + 1) + ")");
  }
  if (d.is_medium()) {
    for (std::size_t i = 0; i < d.layers.size(); ++i) {
      const Term& re = d.layers[i].value.re;
      if (re.parameter.empty() && !(re.constant > 0.0))
        throw ParseError(source, 0, "medium layer " + std::to_string(i + 1) + " needs Re n > 0");
    }
  }
  return d;
}

inline Description load_description(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path, 0, "cannot open file");
  return parse_description(in, path);
}

// ---------------------------------------------------------------------------------------
// Matrices: dense text (one row per line, Re Im pairs) or JSON [[[re, im], ...], ...]

namespace detail {

inline Matrix matrix_from_json(const nlohmann::json& j, const std::string& source) {
  if (!j.is_array() || j.empty()) throw ParseError(source, 0, "matrix must be a non-empty array of rows");
  const auto n = static_cast<Eigen::Index>(j.size());
  Matrix m(n, n);
  for (Eigen::Index r = 0; r < n; ++r) {
    const auto& row = j[static_cast<std::size_t>(r)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != n)
      throw ParseError(source, 0, "matrix must be square (row " + std::to_string(r + 1) + ")");
    for (Eigen::Index c = 0; c < n; ++c) {
      const auto& e = row[static_cast<std::size_t>(c)];
      if (e.is_number()) {
        m(r, c) = e.get<double>();
      } else if (e.is_array() && e.size() == 2 && e[0].is_number() && e[1].is_number()) {
        m(r, c) = cplx{e[0].get<double>(), e[1].get<double>()};
      } else {
        throw ParseError(source, 0,
                         "entry (" + std::to_string(r + 1) + "," + std::to_string(c + 1) + ") must be [re, im]");
      }
    }
  }
  return m;
}

inline nlohmann::json matrix_to_json(const Matrix& m) {
  nlohmann::json out = nlohmann::json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back({m(r, c).real(), m(r, c).imag()});
    out.push_back(row);
  }
  return out;
}

inline nlohmann::json parse_json(std::istream& in, const std::string& source) {
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(source, 0, e.what());
  }
}

inline bool starts_json(std::istream& in) {
  in >> std::ws;
  return in.peek() == '[' || in.peek() == '{';
}

}  // namespace detail

inline Matrix parse_matrix(std::istream& in, const std::string& source = "<input>") {
  if (detail::starts_json(in)) return detail::matrix_from_json(detail::parse_json(in, source), source);
  std::vector<std::vector<cplx>> rows;
  int lineno = 0;
  for (std::string raw; std::getline(in, raw);) {
    ++lineno;
    const auto tokens = detail::split_ws(detail::strip_comment(raw));
    if (tokens.empty()) continue;
    if (tokens.size() % 2 != 0) throw ParseError(source, lineno, "rows need Re Im pairs");
    std::vector<cplx> row;
    for (std::size_t i = 0; i < tokens.size(); i += 2) {
      const auto re = detail::parse_number(tokens[i]), im = detail::parse_number(tokens[i + 1]);
      if (!re || !im || !std::isfinite(*re) || !std::isfinite(*im))
        throw ParseError(source, lineno, "invalid number in '" + tokens[i] + " " + tokens[i + 1] + "'");
      row.emplace_back(*re, *im);
    }
    if (!rows.empty() && row.size() != rows.front().size())
      throw ParseError(source, lineno, "row length differs from the first row");
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw ParseError(source, 0, "empty matrix");
  if (rows.size() != rows.front().size()) throw ParseError(source, 0, "matrix must be square");
  const auto n = static_cast<Eigen::Index>(rows.size());
  Matrix m(n, n);
  for (Eigen::Index r = 0; r < n; ++r)
    for (Eigen::Index c = 0; c < n; ++c) m(r, c) = rows[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)];
  return m;
}

inline Matrix load_matrix(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path, 0, "cannot open file");
  return parse_matrix(in, path);
}

/// Polynomial matrix family H(t) = sum_j t^j M_j, stored as {"terms": [M0, M1, ...]}.
struct MatrixFamily {
  std::vector<Matrix> terms;

  Matrix operator()(double t) const {
    Matrix out = Matrix::Zero(terms.front().rows(), terms.front().cols());
    double power = 1.0;
    for (const Matrix& m : terms) {
      out += power * m;
      power *= t;
    }
    return out;
  }
};

inline MatrixFamily parse_family(std::istream& in, const std::string& source = "<input>") {
  const auto j = detail::parse_json(in, source);
  if (!j.is_object() || !j.contains("terms") || !j["terms"].is_array() || j["terms"].empty())
    throw ParseError(source, 0, "family file needs a non-empty \"terms\" array");
  MatrixFamily f;
  for (const auto& t : j["terms"]) {
    f.terms.push_back(detail::matrix_from_json(t, source));
    if (f.terms.back().rows() != f.terms.front().rows())
      throw ParseError(source, 0, "all terms must have the same dimension");
  }
  return f;
}

inline MatrixFamily load_family(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path, 0, "cannot open file");
  return parse_family(in, path);
}

// ---------------------------------------------------------------------------------------
// Reports

enum class Format { Csv, Json };

using Cell = std::variant<double, long long, std::string>;

struct Report {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
  /// Echo of the run configuration, written to meta.config in JSON output.
  nlohmann::json config = nlohmann::json::object();
  /// Additional summary values, written to meta.summary in JSON output.
  nlohmann::json summary = nlohmann::json::object();

  void add(std::vector<Cell> row) {
    require(row.size() == columns.size(), "report row has the wrong number of cells");
    rows.push_back(std::move(row));
  }
};

namespace detail {

inline std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v == 0.0 ? 0.0 : v);
  return buf;
}

inline std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

inline nlohmann::json cell_to_json(const Cell& c) {
  if (const auto* d = std::get_if<double>(&c)) {
    if (!std::isfinite(*d)) return format_double(*d);
    return std::stod(format_double(*d));
  }
  if (const auto* i = std::get_if<long long>(&c)) return *i;
  return std::get<std::string>(c);
}

}  // namespace detail

inline void write_report(const Report& report, Format format, std::ostream& out) {
  if (format == Format::Csv) {
    for (std::size_t i = 0; i < report.columns.size(); ++i)
      out << (i ? "," : "") << detail::csv_escape(report.columns[i]);
    out << '\n';
    for (const auto& row : report.rows) {
      for (std::size_t i = 0; i < row.size(); ++i) {
        out << (i ? "," : "");
        std::visit(
            [&](const auto& v) {
              using T = std::decay_t<decltype(v)>;
              if constexpr (std::is_same_v<T, double>) out << detail::format_double(v);
              else if constexpr (std::is_same_v<T, long long>) out << v;
              else out << detail::csv_escape(v);
            },
            row[i]);
      }
      out << '\n';
    }
    return;
  }
  nlohmann::ordered_json doc;
  doc["meta"]["version"] = version;
  doc["meta"]["config"] = report.config;
  if (!report.summary.empty()) doc["meta"]["summary"] = report.summary;
  doc["columns"] = report.columns;
  doc["rows"] = nlohmann::ordered_json::array();
  for (const auto& row : report.rows) {
    nlohmann::ordered_json r;
    for (std::size_t i = 0; i < row.size(); ++i) r[report.columns[i]] = detail::cell_to_json(row[i]);
    doc["rows"].push_back(r);
  }
  out << doc.dump(2) << '\n';
}

inline void write_report(const Report& report, Format format, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  write_report(report, format, out);
  if (!out) throw std::runtime_error("failed writing '" + path + "'");
}

/// Reads a report written in JSON format. Doubles come back rounded to 12 significant digits.
inline Report read_report_json(std::istream& in, const std::string& source = "<input>") {
  const auto j = detail::parse_json(in, source);
  if (!j.contains("columns") || !j.contains("rows") || !j.contains("meta"))
    throw ParseError(source, 0, "report needs meta, columns and rows");
  Report r;
  r.columns = j["columns"].get<std::vector<std::string>>();
  r.config = j["meta"].value("config", nlohmann::json::object());
  r.summary = j["meta"].value("summary", nlohmann::json::object());
  for (const auto& row : j["rows"]) {
    std::vector<Cell> cells;
    for (const auto& name : r.columns) {
      const auto& v = row.at(name);
      if (v.is_number_integer()) cells.emplace_back(v.get<long long>());
      else if (v.is_number()) cells.emplace_back(v.get<double>());
      else {
        const auto s = v.get<std::string>();
        if (s == "nan") cells.emplace_back(std::numeric_limits<double>::quiet_NaN());
        else if (s == "inf") cells.emplace_back(std::numeric_limits<double>::infinity());
        else if (s == "-inf") cells.emplace_back(-std::numeric_limits<double>::infinity());
        else cells.emplace_back(s);
      }
    }
    r.rows.push_back(std::move(cells));
  }
  return r;
}

}  // namespace specsing
