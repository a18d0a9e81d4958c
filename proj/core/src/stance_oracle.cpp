#include "slip/stance_oracle.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <ostream>

#include "slip/error.hpp"

namespace slip {

namespace {

// The integrator accumulates in extended precision with compensated updates so
// that the truncation error at the default step stays above the rounding floor.
using Real = long double;
using Vec = std::array<Real, 4>;  // rho, theta, rho_dot, theta_dot

struct Dynamics {
  Real m, g, k, d, rho_0;
  RampTorque torque;

  Real hip_torque(Real t) const {
    if (t < 0.0L || t > static_cast<Real>(torque.t_f)) return 0.0L;
    if (std::isinf(torque.t_f)) return torque.tau_0;
    return torque.tau_0 * (1.0L - t / static_cast<Real>(torque.t_f));
  }

  Vec operator()(Real t, const Vec& x) const {
    const Real rho = x[0];
    const Real theta = x[1];
    const Real rho_dot = x[2];
    const Real theta_dot = x[3];
    const Real tau = static_cast<Real>(kHipTorqueSign) * hip_torque(t);
    const Real rho_dd = rho * theta_dot * theta_dot - g * std::cos(theta) - (k / m) * (rho - rho_0) -
                        (d / m) * rho_dot;
    const Real theta_dd =
        (g * rho * std::sin(theta) + tau / m - 2.0L * rho * rho_dot * theta_dot) / (rho * rho);
    return {rho_dot, theta_dot, rho_dd, theta_dd};
  }
};

Vec axpy(const Vec& x, Real a, const Vec& k) {
  return {x[0] + a * k[0], x[1] + a * k[1], x[2] + a * k[2], x[3] + a * k[3]};
}

Vec rk4_increment(const Dynamics& f, Real t, const Vec& x, Real h) {
  const Vec k1 = f(t, x);
  const Vec k2 = f(t + 0.5L * h, axpy(x, 0.5L * h, k1));
  const Vec k3 = f(t + 0.5L * h, axpy(x, 0.5L * h, k2));
  const Vec k4 = f(t + h, axpy(x, h, k3));
  Vec dx;
  for (std::size_t i = 0; i < 4; ++i) dx[i] = h / 6.0L * (k1[i] + 2.0L * k2[i] + 2.0L * k3[i] + k4[i]);
  return dx;
}

Vec rk4_step(const Dynamics& f, Real t, const Vec& x, Real h) {
  return axpy(x, 1.0L, rk4_increment(f, t, x, h));
}

// Compensated update x + dx: comp carries the low-order bits lost by the
// previous additions, so rounding does not grow with the number of steps.
Vec add_compensated(const Vec& x, const Vec& dx, Vec& comp) {
  Vec out;
  for (std::size_t i = 0; i < 4; ++i) {
    const Real y = dx[i] - comp[i];
    out[i] = x[i] + y;
    comp[i] = (out[i] - x[i]) - y;
  }
  return out;
}

Real guard(const Vec& x, const Dynamics& f) { return f.k * (f.rho_0 - x[0]) - f.d * x[2]; }

PolarStanceState to_state(const Vec& x) {
  return {static_cast<double>(x[0]), static_cast<double>(x[1]), static_cast<double>(x[2]),
          static_cast<double>(x[3])};
}

// Bisects the sub-step length s in (0, h] on which value(rk4_step(x, s)) changes
// sign, and returns the step length at the crossing. value(x) must be
// positive and value(rk4_step(x, h)) non-positive.
template <typename Value>
Real locate_crossing(const Dynamics& f, Real t, const Vec& x, Real h, Value value) {
  Real lo = 0.0L;
  Real hi = h;
  for (int i = 0; i < 200; ++i) {
    const Real mid = 0.5L * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const Real v = value(rk4_step(f, t, x, mid));
    if (v == 0.0L) return mid;
    if (v > 0.0L) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return hi;
}

}  // namespace

double liftoff_guard(const PolarStanceState& s, const SystemParams& p) {
  return p.k * (p.rho_0 - s.rho) - p.d * s.rho_dot;
}

StanceTrajectory integrate_stance(const PolarStanceState& td, const SystemParams& p,
                                  const RampTorque& torque, const OracleOptions& opts) {
  p.validate();
  if (!(opts.step > 0.0)) throw Error(ErrorKind::InvalidArgument, "integration step must be > 0");
  if (!(td.rho > 0.0)) throw Error(ErrorKind::NonPositiveLength, "touchdown leg length must be > 0");
  if (!(std::abs(td.theta) < std::numbers::pi / 2)) {
    throw Error(ErrorKind::Fall, "touchdown angle outside (-pi/2, pi/2)");
  }

  const Dynamics f{p.stance_mass(), p.g, p.k, p.d, p.rho_0, torque};
  const Real step = opts.step;
  const Real cutoff = std::isfinite(torque.t_f) ? static_cast<Real>(torque.t_f) : -1.0L;

  StanceTrajectory traj;
  traj.step = opts.step;
  traj.samples.reserve(static_cast<std::size_t>(0.2 / opts.step) + 16);

  Vec x{td.rho, td.theta, td.rho_dot, td.theta_dot};
  Real t = 0.0L;
  traj.samples.push_back({0.0, td, ramp_torque_at(torque, 0.0)});
  Real g_prev = guard(x, f);
  Vec comp{};
  std::size_t n = 0;

  auto sample = [&](Real ts, const Vec& xs) {
    traj.samples.push_back(
        {static_cast<double>(ts), to_state(xs), ramp_torque_at(torque, static_cast<double>(ts))});
  };

  while (true) {
    // Step boundaries sit on the integer grid n * step, with the torque cutoff
    // inserted as an extra boundary.
    Real t_next = static_cast<Real>(n + 1) * step;
    const bool hits_cutoff = cutoff > t && cutoff < t_next;
    if (hits_cutoff) t_next = cutoff;
    const Real h = t_next - t;
    Vec comp_next = comp;
    const Vec x_next = add_compensated(x, rk4_increment(f, t, x, h), comp_next);

    if (!(x_next[0] > 0.0L)) throw Error(ErrorKind::NonPositiveLength, "leg length reached zero");
    if (!(std::abs(x_next[1]) < std::numbers::pi_v<Real> / 2)) {
      throw Error(ErrorKind::Fall, "leg angle reached +-pi/2 before lift-off");
    }

    if (!traj.has_bottom && x[2] < 0.0L && x_next[2] >= 0.0L) {
      const Real s =
          locate_crossing(f, t, x, h, [](const Vec& v) { return -v[2]; });
      traj.has_bottom = true;
      traj.t_bottom = static_cast<double>(t + s);
    }

    const Real g_next = guard(x_next, f);
    if (g_prev > 0.0L && g_next <= 0.0L && x_next[2] > 0.0L) {
      const Real s = locate_crossing(f, t, x, h, [&f](const Vec& v) { return guard(v, f); });
      Vec comp_lo = comp;
      const Vec x_lo = add_compensated(x, rk4_increment(f, t, x, s), comp_lo);
      traj.t_liftoff = static_cast<double>(t + s);
      traj.t_liftoff_ext = t + s;
      traj.liftoff_ext = x_lo;
      sample(t + s, x_lo);
      return traj;
    }

    t = t_next;
    x = x_next;
    comp = comp_next;
    g_prev = g_next;
    if (!hits_cutoff) ++n;
    sample(t, x);
    if (t > static_cast<Real>(opts.horizon)) {
      throw Error(ErrorKind::NoLiftoff, "no lift-off within the integration horizon");
    }
  }
}

GrfSample grf_at(const PolarStanceState& s, const SystemParams& p, double tau) {
  const double st = std::sin(s.theta);
  const double ct = std::cos(s.theta);
  const double f_r = liftoff_guard(s, p);
  const double f_t = generalized_torque(tau) / s.rho;
  GrfSample out;
  out.f_y = -f_r * st - f_t * ct;
  out.f_z = f_r * ct - f_t * st;
  if (out.f_z != 0.0) {
    out.cop_offset = -s.rho * st - s.rho * ct * out.f_y / out.f_z;
  } else {
    out.cop_offset = out.f_y == 0.0 ? 0.0 : std::nan("");
  }
  return out;
}

std::vector<GrfSample> grf_series(const StanceTrajectory& traj, const SystemParams& p) {
  std::vector<GrfSample> out;
  out.reserve(traj.samples.size());
  for (const auto& smp : traj.samples) out.push_back(grf_at(smp.state, p, smp.tau));
  return out;
}

GrfSummary summarize_grf(const StanceTrajectory& traj, const SystemParams& p, const GrfWindows& w) {
  GrfSummary out;
  if (traj.samples.empty()) return out;
  const std::vector<GrfSample> f = grf_series(traj, p);
  for (const auto& g : f) out.peak_f_z = std::max(out.peak_f_z, g.f_z);
  const double duration = traj.samples.back().t;
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (!(f[i].f_z > w.min_vertical * out.peak_f_z)) continue;
    const double t = traj.samples[i].t;
    out.max_abs_cop = std::max(out.max_abs_cop, std::abs(f[i].cop_offset));
    if (t <= w.early * duration) {
      out.early_cop += f[i].cop_offset;
      ++out.early_count;
    }
    if (t >= (1.0 - w.late) * duration) {
      out.late_cop += f[i].cop_offset;
      ++out.late_count;
    }
  }
  if (out.early_count > 0) out.early_cop /= out.early_count;
  if (out.late_count > 0) out.late_cop /= out.late_count;
  return out;
}

double stance_mechanical_energy(const PolarStanceState& s, const SystemParams& p) {
  const double m = p.stance_mass();
  const double stretch = s.rho - p.rho_0;
  return 0.5 * m * (s.rho_dot * s.rho_dot + s.rho * s.rho * s.theta_dot * s.theta_dot) +
         m * p.g * s.rho * std::cos(s.theta) + 0.5 * p.k * stretch * stretch;
}

EnergyLedger stance_energy_audit(const StanceTrajectory& traj, const SystemParams& p) {
  EnergyLedger ledger;
  if (traj.samples.empty()) return ledger;
  ledger.e_mech_start = stance_mechanical_energy(traj.samples.front().state, p);
  ledger.e_mech_end = stance_mechanical_energy(traj.samples.back().state, p);
  auto torque_power = [](const StanceSample& s) {
    return generalized_torque(s.tau) * s.state.theta_dot;
  };
  auto damper_power = [&p](const StanceSample& s) {
    return p.d * s.state.rho_dot * s.state.rho_dot;
  };
  for (std::size_t i = 1; i < traj.samples.size(); ++i) {
    const auto& a = traj.samples[i - 1];
    const auto& b = traj.samples[i];
    const double dt = b.t - a.t;
    ledger.w_torque += 0.5 * dt * (torque_power(a) + torque_power(b));
    ledger.w_damping += 0.5 * dt * (damper_power(a) + damper_power(b));
  }
  return ledger;
}

MomentumLedger stance_momentum_audit(const StanceTrajectory& traj, const SystemParams& p) {
  MomentumLedger ledger;
  if (traj.samples.empty()) return ledger;
  const double m = p.stance_mass();
  auto momentum = [m](const PolarStanceState& s) { return m * s.rho * s.rho * s.theta_dot; };
  auto moment = [&](const StanceSample& s) {
    return m * p.g * s.state.rho * std::sin(s.state.theta) + generalized_torque(s.tau);
  };
  ledger.l_start = momentum(traj.samples.front().state);
  ledger.l_end = momentum(traj.samples.back().state);
  for (std::size_t i = 1; i < traj.samples.size(); ++i) {
    const auto& a = traj.samples[i - 1];
    const auto& b = traj.samples[i];
    ledger.impulse += 0.5 * (b.t - a.t) * (moment(a) + moment(b));
  }
  return ledger;
}

void write_stance_csv(std::ostream& out, const StanceTrajectory& traj, const SystemParams& p) {
  const auto old = out.precision(12);
  out << "t,rho,theta,rho_dot,theta_dot,tau,f_y,f_z\n";
  for (const auto& s : traj.samples) {
    const GrfSample f = grf_at(s.state, p, s.tau);
    out << s.t << ',' << s.state.rho << ',' << s.state.theta << ',' << s.state.rho_dot << ','
        << s.state.theta_dot << ',' << s.tau << ',' << f.f_y << ',' << f.f_z << '\n';
  }
  out.precision(old);
}

}  // namespace slip
