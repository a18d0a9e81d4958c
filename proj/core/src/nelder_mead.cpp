#include "slip/nelder_mead.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "slip/error.hpp"

namespace slip {

std::string_view to_string(NelderMeadStop s) noexcept {
  switch (s) {
    case NelderMeadStop::XTolerance: return "x_tol";
    case NelderMeadStop::FTolerance: return "f_tol";
    case NelderMeadStop::MaxIterations: return "max_iterations";
  }
  return "";
}

namespace {

using Point = std::vector<double>;

struct Vertex {
  Point x;
  double f;
};

// x + t (y - x)
Point along(const Point& x, const Point& y, double t) {
  Point out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = x[i] + t * (y[i] - x[i]);
  return out;
}

double distance_inf(const Point& a, const Point& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

// Mean of the first count vertices.
Point centroid_of(const std::vector<Vertex>& s, std::size_t count) {
  Point c(s[0].x.size(), 0.0);
  for (std::size_t i = 0; i < count; ++i) {
    for (std::size_t j = 0; j < c.size(); ++j) c[j] += s[i].x[j] / static_cast<double>(count);
  }
  return c;
}

}  // namespace

NelderMeadResult nelder_mead(const Objective& f, const std::vector<double>& x0,
                             const NelderMeadOptions& opts) {
  const std::size_t n = x0.size();
  if (n == 0) throw Error(ErrorKind::InvalidArgument, "nelder_mead needs at least one dimension");
  if (opts.initial_step.empty() ||
      (opts.initial_step.size() != 1 && opts.initial_step.size() != n)) {
    throw Error(ErrorKind::InvalidArgument, "initial_step must have 1 or n entries");
  }

  NelderMeadResult res;
  auto eval = [&](const Point& x) {
    ++res.evaluations;
    const double v = f(x);
    return std::isfinite(v) ? v : std::numeric_limits<double>::infinity();
  };

  std::vector<Vertex> s;
  s.reserve(n + 1);
  s.push_back({x0, eval(x0)});
  if (!std::isfinite(s[0].f)) throw Error(ErrorKind::InvalidArgument, "objective not finite at x0");
  for (std::size_t i = 0; i < n; ++i) {
    Point x = x0;
    const double h = opts.initial_step.size() == 1 ? opts.initial_step[0] : opts.initial_step[i];
    x[i] += h;
    s.push_back({x, eval(x)});
  }

  // Stable sort keeps the older vertex first among ties, so the best point
  // never moves to a vertex with an equal value.
  auto order = [&s] {
    std::stable_sort(s.begin(), s.end(), [](const Vertex& a, const Vertex& b) { return a.f < b.f; });
  };
  order();

  while (true) {
    double diameter = 0.0;
    for (std::size_t i = 1; i <= n; ++i) diameter = std::max(diameter, distance_inf(s[i].x, s[0].x));
    if (diameter < opts.x_tol) {
      res.stop = NelderMeadStop::XTolerance;
      break;
    }
    // Vertices straddling a minimum can tie in value while the simplex is
    // still wide, so a flat vertex spread is confirmed at the centroid.
    if (s[n].f - s[0].f < opts.f_tol) {
      const double fc = eval(centroid_of(s, n + 1));
      if (std::max(fc, s[n].f) - std::min(fc, s[0].f) < opts.f_tol) {
        res.stop = NelderMeadStop::FTolerance;
        break;
      }
    }
    if (res.iterations >= opts.max_iterations) {
      res.stop = NelderMeadStop::MaxIterations;
      break;
    }
    ++res.iterations;

    const Point centroid = centroid_of(s, n);

    Vertex& worst = s[n];
    const Vertex reflected{along(centroid, worst.x, -1.0), 0.0};
    const double fr = eval(reflected.x);

    if (fr < s[0].f) {
      Point xe = along(centroid, worst.x, -2.0);
      const double fe = eval(xe);
      worst = fe < fr ? Vertex{std::move(xe), fe} : Vertex{reflected.x, fr};
    } else if (fr < s[n - 1].f) {
      worst = {reflected.x, fr};
    } else {
      // Outside contraction when the reflected point beats the worst vertex,
      // inside contraction otherwise.
      const bool outside = fr < worst.f;
      Point xc = outside ? along(centroid, reflected.x, 0.5) : along(centroid, worst.x, 0.5);
      const double fc = eval(xc);
      if (fc < (outside ? fr : worst.f)) {
        worst = {std::move(xc), fc};
      } else {
        for (std::size_t i = 1; i <= n; ++i) {
          s[i].x = along(s[0].x, s[i].x, 0.5);
          s[i].f = eval(s[i].x);
        }
      }
    }
    order();
  }

  res.x = s[0].x;
  res.f = s[0].f;
  return res;
}

}  // namespace slip
