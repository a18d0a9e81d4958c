#include "svg.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>
#include <sstream>

namespace slip::lab {

namespace {

struct Box {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  void add(double v) {
    if (!std::isfinite(v)) return;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  void finish() {
    if (!(lo <= hi)) {
      lo = 0.0;
      hi = 1.0;
    }
    if (hi - lo < 1e-12) {
      lo -= 0.5;
      hi += 0.5;
    }
    const double pad = 0.05 * (hi - lo);
    lo -= pad;
    hi += pad;
  }
};

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string fmt(double v) {
  std::ostringstream s;
  s << std::setprecision(4) << v;
  return s.str();
}

// Roughly five ticks on a 1-2-5 grid.
std::vector<double> ticks(double lo, double hi) {
  const double raw = (hi - lo) / 5.0;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  double step = mag;
  for (double m : {1.0, 2.0, 5.0, 10.0}) {
    step = m * mag;
    if (step >= raw) break;
  }
  std::vector<double> out;
  for (double v = std::ceil(lo / step) * step; v <= hi + 1e-9 * step; v += step) {
    out.push_back(std::abs(v) < 1e-12 * step ? 0.0 : v);
  }
  return out;
}

}  // namespace

void write_svg(std::ostream& out, const std::vector<Panel>& panels, double width, double panel_height) {
  const double left = 70, right = 20, top = 30, bottom = 45;
  const double height = panel_height * static_cast<double>(panels.size());
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
      << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

  for (std::size_t i = 0; i < panels.size(); ++i) {
    const Panel& p = panels[i];
    const double y_off = panel_height * static_cast<double>(i);
    Box bx, by;
    for (const auto& s : p.series) {
      for (double v : s.x) bx.add(v);
      for (double v : s.y) by.add(v);
    }
    for (const auto& g : p.segments) {
      bx.add(g.x0);
      bx.add(g.x1);
      by.add(g.y0);
      by.add(g.y1);
    }
    for (const auto& m : p.markers) bx.add(m.x);
    bx.finish();
    by.finish();

    const double pw = width - left - right;
    const double ph = panel_height - top - bottom;
    if (p.equal_aspect) {
      // Widen whichever range is short so one metre spans the same pixels on both axes.
      const double sx = pw / (bx.hi - bx.lo), sy = ph / (by.hi - by.lo);
      if (sx > sy) {
        const double c = 0.5 * (bx.lo + bx.hi), half = 0.5 * pw / sy;
        bx.lo = c - half;
        bx.hi = c + half;
      } else {
        const double c = 0.5 * (by.lo + by.hi), half = 0.5 * ph / sx;
        by.lo = c - half;
        by.hi = c + half;
      }
    }
    auto X = [&](double v) { return left + (v - bx.lo) / (bx.hi - bx.lo) * pw; };
    auto Y = [&](double v) { return y_off + top + ph - (v - by.lo) / (by.hi - by.lo) * ph; };

    out << "<g>\n<text x=\"" << left << "\" y=\"" << y_off + 18 << "\" font-size=\"13\">"
        << escape(p.title) << "</text>\n";
    out << "<rect x=\"" << left << "\" y=\"" << y_off + top << "\" width=\"" << pw << "\" height=\"" << ph
        << "\" fill=\"none\" stroke=\"#444\"/>\n";
    for (double t : ticks(bx.lo, bx.hi)) {
      out << "<line x1=\"" << X(t) << "\" x2=\"" << X(t) << "\" y1=\"" << y_off + top + ph << "\" y2=\""
          << y_off + top + ph + 4 << "\" stroke=\"#444\"/><text x=\"" << X(t) << "\" y=\""
          << y_off + top + ph + 16 << "\" text-anchor=\"middle\">" << fmt(t) << "</text>\n";
    }
    for (double t : ticks(by.lo, by.hi)) {
      out << "<line x1=\"" << left - 4 << "\" x2=\"" << left << "\" y1=\"" << Y(t) << "\" y2=\"" << Y(t)
          << "\" stroke=\"#444\"/><text x=\"" << left - 6 << "\" y=\"" << Y(t) + 4
          << "\" text-anchor=\"end\">" << fmt(t) << "</text>\n";
    }
    out << "<text x=\"" << left + pw / 2 << "\" y=\"" << y_off + panel_height - 8
        << "\" text-anchor=\"middle\">" << escape(p.x_label) << "</text>\n";
    out << "<text transform=\"translate(14," << y_off + top + ph / 2
        << ") rotate(-90)\" text-anchor=\"middle\">" << escape(p.y_label) << "</text>\n";

    for (std::size_t k = 0; k < p.markers.size(); ++k) {
      const Marker& m = p.markers[k];
      out << "<line x1=\"" << X(m.x) << "\" x2=\"" << X(m.x) << "\" y1=\"" << y_off + top << "\" y2=\""
          << y_off + top + ph << "\" stroke=\"#999\" stroke-dasharray=\"3,3\"/>";
      const double label_y = y_off + top + 11 + 12 * static_cast<double>(k % 2);
      out << "<text x=\"" << X(m.x) + 3 << "\" y=\"" << label_y << "\" fill=\"#666\">"
          << escape(m.label) << "</text>\n";
    }
    for (const auto& g : p.segments) {
      out << "<line x1=\"" << X(g.x0) << "\" y1=\"" << Y(g.y0) << "\" x2=\"" << X(g.x1) << "\" y2=\""
          << Y(g.y1) << "\" stroke=\"" << g.color << "\" stroke-width=\"0.8\"/>\n";
    }
    double legend_y = y_off + top + 12;
    for (const auto& s : p.series) {
      out << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"1.5\""
          << (s.dashed ? " stroke-dasharray=\"6,4\"" : "") << " points=\"";
      const std::size_t n = std::min(s.x.size(), s.y.size());
      for (std::size_t k = 0; k < n; ++k) {
        if (std::isfinite(s.x[k]) && std::isfinite(s.y[k])) out << X(s.x[k]) << ',' << Y(s.y[k]) << ' ';
      }
      out << "\"/>\n";
      if (s.markers) {
        for (std::size_t k = 0; k < n; ++k) {
          if (!std::isfinite(s.x[k]) || !std::isfinite(s.y[k])) continue;
          out << "<circle cx=\"" << X(s.x[k]) << "\" cy=\"" << Y(s.y[k]) << "\" r=\"2.5\" fill=\"" << s.color
              << "\"/>";
        }
        out << "\n";
      }
      if (!s.label.empty()) {
        out << "<text x=\"" << left + pw - 6 << "\" y=\"" << legend_y << "\" text-anchor=\"end\" fill=\""
            << s.color << "\">" << escape(s.label) << "</text>\n";
        legend_y += 13;
      }
    }
    out << "</g>\n";
  }
  out << "</svg>\n";
}

}  // namespace slip::lab
