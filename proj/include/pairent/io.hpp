#pragma once

// State files, CSV and SVG emission for the command-line tool.
//
// A state file is a JSON object:
//   {"kind": "pure",  "dim": d, "coeffs_re": [...], "coeffs_im": [...]}
//   {"kind": "mixed", "dim": d, "entries_re": [[...], ...], "entries_im": [[...], ...]}
// The imaginary arrays are optional and default to zero.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "pairent/error.hpp"
#include "pairent/linalg.hpp"
#include "pairent/pairstate.hpp"

namespace pairent::io {

/// File-system failures, as opposed to malformed content.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using State = std::variant<PurePairState, PairDensityMatrix>;

inline std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw IoError("cannot read " + path);
  return ss.str();
}

inline void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out << text;
  if (!out) throw IoError("cannot write " + path);
}

namespace detail {

inline std::vector<double> number_array(const nlohmann::json& j, const char* field) {
  if (!j.is_array()) throw Error(ErrorKind::parse_error, std::string(field) + " must be an array");
  std::vector<double> out;
  out.reserve(j.size());
  for (const auto& v : j) {
    if (!v.is_number()) throw Error(ErrorKind::parse_error, std::string(field) + " must hold numbers");
    out.push_back(v.get<double>());
  }
  return out;
}

inline std::vector<std::vector<double>> number_matrix(const nlohmann::json& j, const char* field, std::size_t d) {
  if (!j.is_array() || j.size() != d)
    throw Error(ErrorKind::dimension_mismatch, std::string(field) + " must have " + std::to_string(d) + " rows");
  std::vector<std::vector<double>> out;
  for (const auto& row : j) {
    out.push_back(number_array(row, field));
    if (out.back().size() != d)
      throw Error(ErrorKind::dimension_mismatch, std::string(field) + " rows must have " + std::to_string(d) + " entries");
  }
  return out;
}

}  // namespace detail

/// Parses and validates a state document. Malformed JSON or schema errors
/// raise parse_error; content that fails the state validators raises the
/// validator's own kind.
inline State parse_state(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorKind::parse_error, e.what());
  }
  if (!doc.is_object()) throw Error(ErrorKind::parse_error, "state file must be a JSON object");
  if (!doc.contains("kind") || !doc["kind"].is_string()) throw Error(ErrorKind::parse_error, "missing \"kind\"");
  if (!doc.contains("dim") || !doc["dim"].is_number_unsigned())
    throw Error(ErrorKind::parse_error, "\"dim\" must be a non-negative integer");
  const auto kind = doc["kind"].get<std::string>();
  const auto d = doc["dim"].get<std::size_t>();
  if (d < 2) throw Error(ErrorKind::dimension_mismatch, "dim must be at least 2");

  if (kind == "pure") {
    if (!doc.contains("coeffs_re")) throw Error(ErrorKind::parse_error, "missing \"coeffs_re\"");
    const auto re = detail::number_array(doc["coeffs_re"], "coeffs_re");
    std::vector<double> im(re.size(), 0.0);
    if (doc.contains("coeffs_im")) im = detail::number_array(doc["coeffs_im"], "coeffs_im");
    if (re.size() != d || im.size() != d)
      throw Error(ErrorKind::dimension_mismatch, "coefficient arrays must have dim entries");
    std::vector<complex> c(d);
    for (std::size_t i = 0; i < d; ++i) c[i] = complex(re[i], im[i]);
    return make_pure(d, std::move(c));
  }
  if (kind == "mixed") {
    if (!doc.contains("entries_re")) throw Error(ErrorKind::parse_error, "missing \"entries_re\"");
    const auto re = detail::number_matrix(doc["entries_re"], "entries_re", d);
    std::vector<std::vector<double>> im(d, std::vector<double>(d, 0.0));
    if (doc.contains("entries_im")) im = detail::number_matrix(doc["entries_im"], "entries_im", d);
    CMatrix m(d, d);
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j) {
        if (!std::isfinite(re[i][j]) || !std::isfinite(im[i][j]))
          throw Error(ErrorKind::domain_error, "non-finite matrix entry");
        m(i, j) = complex(re[i][j], im[i][j]);
      }
    return PairDensityMatrix::validated(std::move(m));
  }
  throw Error(ErrorKind::parse_error, "kind must be \"pure\" or \"mixed\"");
}

inline State load_state(const std::string& path) { return parse_state(read_text(path)); }

inline PairDensityMatrix as_density(const State& s) {
  if (const auto* p = std::get_if<PurePairState>(&s)) return density_of_pure(*p);
  return std::get<PairDensityMatrix>(s);
}

inline std::size_t dim_of(const State& s) {
  return std::visit([](const auto& v) { return v.dim(); }, s);
}

/// Locale-independent, round-trippable number formatting for CSV.
inline std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

class CsvWriter {
 public:
  explicit CsvWriter(const std::vector<std::string>& header) { row_strings(header); }

  template <typename... Ts>
  void row(const Ts&... fields) {
    std::vector<std::string> cells{cell(fields)...};
    row_strings(cells);
  }

  const std::string& str() const noexcept { return text_; }

 private:
  static std::string cell(double v) { return fmt(v); }
  static std::string cell(std::size_t v) { return std::to_string(v); }
  static std::string cell(unsigned long long v) { return std::to_string(v); }
  static std::string cell(const std::string& v) { return v; }

  void row_strings(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) text_ += ',';
      text_ += cells[i];
    }
    text_ += '\n';
  }

  std::string text_;
};

struct Series {
  std::string label;
  std::string color;
  std::vector<std::pair<double, double>> points;
  bool line = false;
};

/// Minimal scatter / line plot. Axis ranges cover all series.
inline std::string render_svg(const std::vector<Series>& series, const std::string& x_label,
                              const std::string& y_label, bool bisector = false) {
  constexpr double W = 640, H = 480, L = 70, R = 20, T = 20, B = 60;
  double x0 = 0, x1 = 0, y0 = 0, y1 = 0;
  bool first = true;
  for (const auto& s : series)
    for (const auto& [x, y] : s.points) {
      if (first) {
        x0 = x1 = x;
        y0 = y1 = y;
        first = false;
      }
      x0 = std::min(x0, x);
      x1 = std::max(x1, x);
      y0 = std::min(y0, y);
      y1 = std::max(y1, y);
    }
  if (bisector) {
    x0 = y0 = std::min(x0, y0);
    x1 = y1 = std::max(x1, y1);
  }
  if (x1 <= x0) x1 = x0 + 1;
  if (y1 <= y0) y1 = y0 + 1;
  auto px = [&](double x) { return L + (x - x0) / (x1 - x0) * (W - L - R); };
  auto py = [&](double y) { return H - B - (y - y0) / (y1 - y0) * (H - T - B); };

  std::ostringstream o;
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\">\n";
  o << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  o << "<rect x=\"" << L << "\" y=\"" << T << "\" width=\"" << W - L - R << "\" height=\"" << H - T - B
    << "\" fill=\"none\" stroke=\"black\"/>\n";
  o << "<text x=\"" << (W + L - R) / 2 << "\" y=\"" << H - 15 << "\" text-anchor=\"middle\">" << x_label << "</text>\n";
  o << "<text x=\"15\" y=\"" << (H - B + T) / 2 << "\" transform=\"rotate(-90 15 " << (H - B + T) / 2
    << ")\" text-anchor=\"middle\">" << y_label << "</text>\n";
  o << "<text x=\"" << L << "\" y=\"" << H - B + 18 << "\" font-size=\"11\">" << fmt(x0) << "</text>\n";
  o << "<text x=\"" << W - R << "\" y=\"" << H - B + 18 << "\" font-size=\"11\" text-anchor=\"end\">" << fmt(x1)
    << "</text>\n";
  o << "<text x=\"" << L - 5 << "\" y=\"" << H - B << "\" font-size=\"11\" text-anchor=\"end\">" << fmt(y0)
    << "</text>\n";
  o << "<text x=\"" << L - 5 << "\" y=\"" << T + 10 << "\" font-size=\"11\" text-anchor=\"end\">" << fmt(y1)
    << "</text>\n";
  if (bisector)
    o << "<line x1=\"" << px(x0) << "\" y1=\"" << py(y0) << "\" x2=\"" << px(x1) << "\" y2=\"" << py(y1)
      << "\" stroke=\"gray\" stroke-dasharray=\"4 4\"/>\n";
  double legend_y = T + 15;
  for (const auto& s : series) {
    if (s.line) {
      o << "<polyline fill=\"none\" stroke=\"" << s.color << "\" points=\"";
      for (const auto& [x, y] : s.points) o << px(x) << ',' << py(y) << ' ';
      o << "\"/>\n";
    } else {
      for (const auto& [x, y] : s.points)
        o << "<circle cx=\"" << px(x) << "\" cy=\"" << py(y) << "\" r=\"1.5\" fill=\"" << s.color << "\"/>\n";
    }
    o << "<text x=\"" << L + 10 << "\" y=\"" << legend_y << "\" fill=\"" << s.color << "\" font-size=\"12\">"
      << s.label << "</text>\n";
    legend_y += 15;
  }
  o << "</svg>\n";
  return o.str();
}

}  // namespace pairent::io
