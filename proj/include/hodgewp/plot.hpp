#pragma once

// Sweep tables (CSV) and hand-written SVG line plots.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "hodgewp/error.hpp"

namespace hodgewp {

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;

  int column(const std::string& name) const {
    auto it = std::find(header.begin(), header.end(), name);
    return it == header.end() ? -1 : static_cast<int>(it - header.begin());
  }
  std::vector<double> values(int c) const {
    std::vector<double> v;
    for (const auto& r : rows) v.push_back(r[c]);
    return v;
  }
};

inline std::string format_g17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

inline std::string csv_text(const CsvTable& t) {
  std::string out;
  for (size_t c = 0; c < t.header.size(); ++c) out += (c ? "," : "") + t.header[c];
  out += "\n";
  for (const auto& r : t.rows) {
    for (size_t c = 0; c < r.size(); ++c) out += (c ? "," : "") + format_g17(r[c]);
    out += "\n";
  }
  return out;
}

inline CsvTable parse_csv(const std::string& text) {
  CsvTable t;
  std::stringstream in(text);
  std::string line;
  auto split = [](const std::string& s) {
    std::vector<std::string> f;
    std::stringstream ss(s);
    std::string x;
    while (std::getline(ss, x, ',')) f.push_back(x);
    return f;
  };
  if (!std::getline(in, line)) throw Error(ErrorKind::Input, "empty CSV");
  t.header = split(line);
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    auto f = split(line);
    if (f.size() != t.header.size())
      throw Error(ErrorKind::Input, "CSV line " + std::to_string(lineno) + ": expected " +
                                        std::to_string(t.header.size()) + " fields, got " + std::to_string(f.size()));
    std::vector<double> r;
    for (const auto& x : f) {
      try {
        r.push_back(std::stod(x));
      } catch (const std::exception&) {
        r.push_back(NAN);
      }
    }
    t.rows.push_back(std::move(r));
  }
  return t;
}

inline CsvTable read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Input, "cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_csv(ss.str());
}

struct PlotOptions {
  std::string x_column = "log_inv_r";
  bool log_y = false;  // used only when every value is positive
  int width = 640;
  int height = 400;
};

namespace detail {

inline std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

inline std::string xml_escape(const std::string& s) {
  std::string o;
  for (char c : s) {
    if (c == '<') o += "&lt;";
    else if (c == '>') o += "&gt;";
    else if (c == '&') o += "&amp;";
    else o += c;
  }
  return o;
}

}  // namespace detail

// Deterministic SVG of one column against x_column.
inline std::string plot_svg(const CsvTable& t, const std::string& column, const PlotOptions& opt = {}) {
  auto names = [&] {
    std::string s;
    for (size_t c = 0; c < t.header.size(); ++c) s += (c ? ", " : "") + t.header[c];
    return s;
  };
  int cy = t.column(column);
  if (cy < 0) throw Error(ErrorKind::Input, "no column '" + column + "'; available: " + names());
  int cx = t.column(opt.x_column);
  if (cx < 0) throw Error(ErrorKind::Input, "no x column '" + opt.x_column + "'; available: " + names());
  std::vector<double> xs, ys;
  for (const auto& r : t.rows)
    if (std::isfinite(r[cx]) && std::isfinite(r[cy])) {
      xs.push_back(r[cx]);
      ys.push_back(r[cy]);
    }
  if (xs.size() < 2) throw Error(ErrorKind::Input, "plot needs at least 2 rows with finite values");

  const bool logy = opt.log_y && *std::min_element(ys.begin(), ys.end()) > 0;
  std::vector<double> yv = ys;
  if (logy)
    for (auto& y : yv) y = std::log10(y);
  double x0 = *std::min_element(xs.begin(), xs.end()), x1 = *std::max_element(xs.begin(), xs.end());
  double y0 = *std::min_element(yv.begin(), yv.end()), y1 = *std::max_element(yv.begin(), yv.end());
  if (x1 == x0) x1 = x0 + 1;
  if (y1 - y0 < 1e-12 * std::max(1.0, std::abs(y0))) {
    double pad = std::max(std::abs(y0) * 0.1, 1e-3);
    y0 -= pad;
    y1 += pad;
  }
  const double L = 70, R = 20, T = 30, B = 50;
  const double w = opt.width - L - R, h = opt.height - T - B;
  auto px = [&](double x) { return L + (x - x0) / (x1 - x0) * w; };
  auto py = [&](double y) { return T + (y1 - y) / (y1 - y0) * h; };

  std::string s;
  s += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(opt.width) + "\" height=\"" +
       std::to_string(opt.height) + "\" viewBox=\"0 0 " + std::to_string(opt.width) + " " +
       std::to_string(opt.height) + "\">\n";
  s += "<rect x=\"0\" y=\"0\" width=\"" + std::to_string(opt.width) + "\" height=\"" + std::to_string(opt.height) +
       "\" fill=\"white\"/>\n";
  s += "<rect x=\"" + detail::fmt(L) + "\" y=\"" + detail::fmt(T) + "\" width=\"" + detail::fmt(w) + "\" height=\"" +
       detail::fmt(h) + "\" fill=\"none\" stroke=\"black\"/>\n";
  if (!logy && y0 < 0 && y1 > 0)
    s += "<line x1=\"" + detail::fmt(L) + "\" y1=\"" + detail::fmt(py(0)) + "\" x2=\"" + detail::fmt(L + w) +
         "\" y2=\"" + detail::fmt(py(0)) + "\" stroke=\"gray\" stroke-dasharray=\"4 3\"/>\n";
  for (int k = 0; k <= 4; ++k) {
    double xv = x0 + (x1 - x0) * k / 4, yvk = y0 + (y1 - y0) * k / 4;
    s += "<text x=\"" + detail::fmt(px(xv)) + "\" y=\"" + detail::fmt(T + h + 18) +
         "\" font-size=\"11\" text-anchor=\"middle\">" + detail::fmt(xv) + "</text>\n";
    std::string lab = logy ? "1e" + detail::fmt(yvk) : detail::fmt(yvk);
    s += "<text x=\"" + detail::fmt(L - 6) + "\" y=\"" + detail::fmt(py(yvk) + 4) +
         "\" font-size=\"11\" text-anchor=\"end\">" + lab + "</text>\n";
  }
  s += "<text x=\"" + detail::fmt(L + w / 2) + "\" y=\"" + detail::fmt(opt.height - 10.0) +
       "\" font-size=\"12\" text-anchor=\"middle\">" + detail::xml_escape(opt.x_column) + "</text>\n";
  s += "<text x=\"" + detail::fmt(L + w / 2) + "\" y=\"18\" font-size=\"13\" text-anchor=\"middle\">" +
       detail::xml_escape(column) + (logy ? " (log scale)" : "") + "</text>\n";
  s += "<polyline fill=\"none\" stroke=\"#1f5fa8\" stroke-width=\"1.5\" points=\"";
  for (size_t k = 0; k < xs.size(); ++k) s += (k ? " " : "") + detail::fmt(px(xs[k])) + "," + detail::fmt(py(yv[k]));
  s += "\"/>\n</svg>\n";
  return s;
}

inline void emit_plot(const CsvTable& t, const std::string& column, const std::string& path,
                      const PlotOptions& opt = {}) {
  std::string svg = plot_svg(t, column, opt);
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::Input, "cannot write " + path);
  out << svg;
}

}  // namespace hodgewp
