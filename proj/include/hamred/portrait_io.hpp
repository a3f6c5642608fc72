#pragma once

// Portrait output: SVG 1.1 drawings and a flat vertex CSV.

#include "hamred/csv.hpp"
#include "hamred/portrait.hpp"

#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

namespace hamred::portrait {

struct SvgStyle {
  int width = 640, height = 640;
  int margin = 60;
  std::string stroke = "#1f4e8c";
  std::string emphasis = "#c0392b";
  double stroke_width = 1.0;
  std::string title;
};

namespace detail {

inline std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", x);
  return buf;
}

inline std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace detail

inline std::string emit_svg(const ContourSet& cs, const SvgStyle& style = {}) {
  const Rect& r = cs.chart.domain;
  const double pw = style.width - 2.0 * style.margin, ph = style.height - 2.0 * style.margin;
  auto X = [&](double x) { return style.margin + (x - r.x0) / (r.x1 - r.x0) * pw; };
  auto Y = [&](double y) { return style.height - style.margin - (y - r.y0) / (r.y1 - r.y0) * ph; };
  using detail::fmt;

  std::ostringstream os;
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
     << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << style.width << "\" height=\""
     << style.height << "\" viewBox=\"0 0 " << style.width << ' ' << style.height << "\">\n";
  if (!style.title.empty()) os << "<title>" << detail::escape(style.title) << "</title>\n";
  os << "<rect x=\"0\" y=\"0\" width=\"" << style.width << "\" height=\"" << style.height
     << "\" fill=\"white\"/>\n";

  // axes
  os << "<g id=\"axes\" stroke=\"black\" stroke-width=\"1\" fill=\"none\">\n"
     << "<rect x=\"" << fmt(X(r.x0)) << "\" y=\"" << fmt(Y(r.y1)) << "\" width=\"" << fmt(pw) << "\" height=\""
     << fmt(ph) << "\"/>\n";
  for (int t = 0; t <= 4; ++t) {
    const double xv = r.x0 + (r.x1 - r.x0) * t / 4.0, yv = r.y0 + (r.y1 - r.y0) * t / 4.0;
    os << "<line x1=\"" << fmt(X(xv)) << "\" y1=\"" << fmt(Y(r.y0)) << "\" x2=\"" << fmt(X(xv)) << "\" y2=\""
       << fmt(Y(r.y0) + 5) << "\"/>\n";
    os << "<line x1=\"" << fmt(X(r.x0) - 5) << "\" y1=\"" << fmt(Y(yv)) << "\" x2=\"" << fmt(X(r.x0))
       << "\" y2=\"" << fmt(Y(yv)) << "\"/>\n";
  }
  os << "</g>\n<g id=\"labels\" font-family=\"sans-serif\" font-size=\"12\" fill=\"black\">\n";
  for (int t = 0; t <= 4; ++t) {
    const double xv = r.x0 + (r.x1 - r.x0) * t / 4.0, yv = r.y0 + (r.y1 - r.y0) * t / 4.0;
    os << "<text x=\"" << fmt(X(xv)) << "\" y=\"" << fmt(Y(r.y0) + 18) << "\" text-anchor=\"middle\">"
       << fmt(xv) << "</text>\n";
    os << "<text x=\"" << fmt(X(r.x0) - 8) << "\" y=\"" << fmt(Y(yv) + 4) << "\" text-anchor=\"end\">" << fmt(yv)
       << "</text>\n";
  }
  os << "<text x=\"" << fmt(style.width / 2.0) << "\" y=\"" << fmt(style.height - 12.0)
     << "\" text-anchor=\"middle\">" << detail::escape(cs.chart.x_name()) << "</text>\n"
     << "<text x=\"16\" y=\"" << fmt(style.height / 2.0) << "\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
     << fmt(style.height / 2.0) << ")\">" << detail::escape(cs.chart.y_name()) << "</text>\n</g>\n";

  // contours
  os << "<g id=\"contours\" fill=\"none\" stroke-linejoin=\"round\">\n";
  for (std::size_t l = 0; l < cs.levels.size(); ++l) {
    const auto& lv = cs.levels[l];
    const std::string colour = lv.emphasized ? style.emphasis : style.stroke;
    const double width = lv.emphasized ? 2.5 * style.stroke_width : style.stroke_width;
    for (const auto& pl : lv.polylines) {
      os << "<path data-level=\"" << csv::format_real(lv.value) << "\" stroke=\"" << colour
         << "\" stroke-width=\"" << fmt(width) << "\" d=\"";
      for (std::size_t i = 0; i < pl.uv.size(); ++i)
        os << (i ? " L" : "M") << fmt(X(pl.uv[i][0])) << ',' << fmt(Y(pl.uv[i][1]));
      if (pl.closed) os << " Z";
      os << "\"/>\n";
    }
  }
  os << "</g>\n<g id=\"markers\">\n";
  for (const auto& m : cs.markers) {
    const double x = X(m.uv[0]), y = Y(m.uv[1]);
    if (m.tag == "saddle") {
      os << "<path d=\"M" << fmt(x - 5) << ',' << fmt(y - 5) << " L" << fmt(x + 5) << ',' << fmt(y + 5) << " M"
         << fmt(x - 5) << ',' << fmt(y + 5) << " L" << fmt(x + 5) << ',' << fmt(y - 5)
         << "\" stroke=\"black\" stroke-width=\"2\" data-tag=\"saddle\"/>\n";
    } else {
      const char* fill = m.tag == "center" ? "black" : "white";
      os << "<circle cx=\"" << fmt(x) << "\" cy=\"" << fmt(y) << "\" r=\"4\" fill=\"" << fill
         << "\" stroke=\"black\" data-tag=\"" << detail::escape(m.tag) << "\"/>\n";
    }
  }
  os << "</g>\n</svg>\n";
  return os.str();
}

/// Columns level, polyline_id, u, v, w1, w2, w3 (u, v are chart coordinates).
inline std::string emit_csv(const ContourSet& cs) {
  std::ostringstream os;
  csv::write_header(os, {"level", "polyline_id", "u", "v", "w1", "w2", "w3"});
  int id = 0;
  for (const auto& lv : cs.levels)
    for (const auto& pl : lv.polylines) {
      for (std::size_t i = 0; i < pl.uv.size(); ++i)
        csv::write_row(os, {lv.value, static_cast<double>(id), pl.uv[i][0], pl.uv[i][1], pl.w[i][0], pl.w[i][1],
                            pl.w[i][2]});
      ++id;
    }
  return os.str();
}

struct ContourVertex {
  double level = 0.0;
  int polyline_id = 0;
  Point2 uv = Point2::Zero();
  Vec3 w = Vec3::Zero();
};

inline std::vector<ContourVertex> read_contour_csv(std::istream& is) {
  const auto t = csv::read_table(is);
  require(t.header == std::vector<std::string>{"level", "polyline_id", "u", "v", "w1", "w2", "w3"},
          "contour csv: unexpected header");
  std::vector<ContourVertex> out;
  for (const auto& r : t.rows) out.push_back({r[0], static_cast<int>(r[1]), Point2(r[2], r[3]), Vec3(r[4], r[5], r[6])});
  return out;
}

}  // namespace hamred::portrait
