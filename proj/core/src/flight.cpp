#include "slip/flight.hpp"

#include <cmath>

#include "slip/error.hpp"

namespace slip {

namespace {

// (1 - e^{-a t}) / a, exact at a = 0.
double decay_integral(double a, double t) {
  if (a == 0.0) return t;
  return -std::expm1(-a * t) / a;
}

// (e^{-a t} - 1 + a t) / a^2, i.e. the double integral of e^{-a s}.
double decay_double_integral(double a, double t) {
  const double x = a * t;
  if (std::abs(x) < 0.05) {
    // t^2 * sum_{n>=0} (-x)^n / (n+2)!
    double term = 0.5;
    double sum = 0.0;
    for (int n = 0; n < 12; ++n) {
      sum += term;
      term *= -x / static_cast<double>(n + 3);
    }
    return t * t * sum;
  }
  return (std::expm1(-x) + x) / (a * a);
}

double touchdown_height(const SystemParams& p, double theta_td, double ground_offset) {
  return p.rho_0 * std::cos(theta_td) + ground_offset;
}

}  // namespace

CartesianState flight_state_at(const CartesianState& x0, const SystemParams& p, double t) {
  if (t == 0.0) return x0;
  return {
      x0.y + x0.y_dot * decay_integral(p.d_h_f, t),
      x0.z + x0.z_dot * decay_integral(p.d_v_f, t) - p.g * decay_double_integral(p.d_v_f, t),
      x0.y_dot * std::exp(-p.d_h_f * t),
      x0.z_dot * std::exp(-p.d_v_f * t) - p.g * decay_integral(p.d_v_f, t),
  };
}

FlightEvent apex_event(const CartesianState& x0, const SystemParams& p) {
  if (x0.z_dot < 0.0) throw Error(ErrorKind::NotAscending, "apex requested from a descending state");
  if (x0.z_dot == 0.0) return {FlightEventKind::Apex, 0.0, x0};
  const double t_a = p.d_v_f > 0.0 ? std::log1p(p.d_v_f * x0.z_dot / p.g) / p.d_v_f : x0.z_dot / p.g;
  CartesianState s = flight_state_at(x0, p, t_a);
  s.z_dot = 0.0;
  return {FlightEventKind::Apex, t_a, s};
}

FlightEvent touchdown_event(const CartesianState& x0, const SystemParams& p, double theta_td,
                            double ground_offset) {
  double t_start = 0.0;
  CartesianState start = x0;
  if (x0.z_dot > 0.0) {
    const FlightEvent apex = apex_event(x0, p);
    t_start = apex.t;
    start = apex.state;
  }
  const double h = touchdown_height(p, theta_td, ground_offset);
  const double drop = start.z - h;
  if (drop < 0.0) {
    throw Error(ErrorKind::NoTouchdown, "apex height is below the touchdown height");
  }
  if (drop == 0.0) return {FlightEventKind::Touchdown, t_start, start};

  auto height_above = [&](double t) { return flight_state_at(start, p, t).z - h; };

  // Ballistic estimate, widened until the trajectory is below the touchdown height.
  double hi = (-start.z_dot + std::sqrt(start.z_dot * start.z_dot + 2.0 * p.g * drop)) / p.g;
  hi = std::max(hi, 1e-9);
  int widen = 0;
  while (height_above(hi) > 0.0) {
    hi *= 2.0;
    if (++widen > 60) throw Error(ErrorKind::NoTouchdown, "touchdown bracket not found");
  }
  double lo = 0.0;
  while (hi - lo > 1e-13) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (height_above(mid) > 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  // Newton polish inside the bracket.
  double t = 0.5 * (lo + hi);
  for (int i = 0; i < 3; ++i) {
    const CartesianState s = flight_state_at(start, p, t);
    if (s.z_dot == 0.0) break;
    const double next = t - (s.z - h) / s.z_dot;
    if (!(next >= lo && next <= hi)) break;
    t = next;
  }
  return {FlightEventKind::Touchdown, t_start + t, flight_state_at(start, p, t)};
}

Touchdown descent_map(const ApexState& apex, double theta_td, const SystemParams& p,
                      double ground_offset) {
  const FlightEvent ev = touchdown_event(apex.cartesian(), p, theta_td, ground_offset);
  const double st = std::sin(theta_td);
  const double ct = std::cos(theta_td);
  const CartesianState& c = ev.state;
  Touchdown td;
  td.cartesian = c;
  td.toe_y = c.y + p.rho_0 * st;
  td.t = apex.t_a + ev.t;
  td.state = {p.rho_0, theta_td, -c.y_dot * st + c.z_dot * ct,
              (-c.y_dot * ct - c.z_dot * st) / p.rho_0};
  return td;
}

ApexState ascent_map(const PolarStanceState& liftoff, const SystemParams& p, double toe_y,
                     double ground_offset, double t_liftoff) {
  CartesianState c = polar_to_cartesian(liftoff, toe_y);
  c.z += ground_offset;
  const double scale = p.collision_scale();
  c.y_dot *= scale;
  c.z_dot *= scale;
  if (!(c.z_dot > 0.0)) {
    throw Error(ErrorKind::NotAscending, "post-collision vertical velocity is not positive");
  }
  const FlightEvent apex = apex_event(c, p);
  return {apex.state.z, apex.state.y_dot, apex.state.y, t_liftoff + apex.t};
}

}  // namespace slip
