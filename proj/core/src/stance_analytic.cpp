#include "slip/stance_analytic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "slip/error.hpp"

namespace slip {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

}  // namespace

StanceCoefficients stance_coefficients(const PolarStanceState& td, const SystemParams& p,
                                       double p_theta_eff, bool clamp_liftoff) {
  p.validate();
  const double m = p.stance_mass();
  StanceCoefficients c;
  c.rho_0 = p.rho_0;
  c.p_theta = m * td.rho * td.rho * td.theta_dot;
  c.p_theta_hat = p_theta_eff;
  c.omega = p_theta_eff / (m * p.rho_0 * p.rho_0);
  c.omega_0 = std::sqrt(p.k / m);
  c.omega_hat_0 = std::sqrt(c.omega_0 * c.omega_0 + 3.0 * c.omega * c.omega);
  c.zeta = p.d / (2.0 * m * c.omega_hat_0);
  if (!(c.zeta < 1.0)) throw Error(ErrorKind::Overdamped, "stance damping ratio >= 1");
  const double root = std::sqrt(1.0 - c.zeta * c.zeta);
  c.omega_d = c.omega_hat_0 * root;
  c.F = -p.g + p.rho_0 * c.omega_0 * c.omega_0 + 4.0 * p.rho_0 * c.omega * c.omega;

  const double w2 = c.omega_hat_0 * c.omega_hat_0;
  c.A = td.rho - c.F / w2;
  c.B = (td.rho_dot + c.zeta * c.omega_hat_0 * c.A) / c.omega_d;
  c.M_amp = std::hypot(c.A, c.B);
  c.phi_1 = std::atan2(-c.B, c.A);
  c.phi_2 = std::atan2(-root, c.zeta);
  c.X = 3.0 * c.omega - 2.0 * c.omega * c.F / (p.rho_0 * w2);
  c.Y = 2.0 * c.omega * c.M_amp / (p.rho_0 * c.omega_hat_0);

  const double dw = p.d * c.omega_hat_0;
  c.M_bar = std::sqrt(p.k * p.k - 2.0 * p.k * dw * std::cos(c.phi_2) + dw * dw);
  c.phi_3 = std::atan2(dw * std::sin(c.phi_2), dw * std::cos(c.phi_2) - p.k);

  c.t_b = bottom_time(c);
  c.t_lo = liftoff_time(c, p, clamp_liftoff);
  return c;
}

PolarStanceState analytic_stance_at(const StanceCoefficients& c, const PolarStanceState& td, double t) {
  if (t < 0.0 || t > c.t_lo) throw Error(ErrorKind::OutOfWindow, "time outside [0, t_lo]");
  const double env = c.M_amp * std::exp(-c.decay() * t);
  const double x = c.omega_d * t + c.phi_1;
  PolarStanceState s;
  s.rho = env * std::cos(x) + c.F / (c.omega_hat_0 * c.omega_hat_0);
  s.rho_dot = -c.omega_hat_0 * env * std::cos(x + c.phi_2);
  s.theta = td.theta + c.X * t +
            c.Y * (std::exp(-c.decay() * t) * std::cos(x - c.phi_2) - std::cos(c.phi_1 - c.phi_2));
  s.theta_dot = c.X - 2.0 * c.omega * env * std::cos(x) / c.rho_0;
  return s;
}

double bottom_time(const StanceCoefficients& c) {
  if (!(c.M_amp > 0.0) || !(c.omega_d > 0.0)) {
    throw Error(ErrorKind::NoBottom, "no radial oscillation");
  }
  // rho_dot turns from negative to positive where w_d t + phi_1 + phi_2 = pi/2 (mod 2 pi).
  const double period = kTwoPi / c.omega_d;
  double t = std::fmod((std::numbers::pi / 2 - c.phi_1 - c.phi_2) / c.omega_d, period);
  if (t <= 0.0) t += period;
  if (!(t > 0.0 && t <= period)) throw Error(ErrorKind::NoBottom, "bottom not found in one period");
  return t;
}

double liftoff_time(const StanceCoefficients& c, const SystemParams& p, bool clamp) {
  const double envelope = c.M_bar * c.M_amp * std::exp(-c.decay() * 2.0 * c.t_b);
  double arg = -p.k * (p.rho_0 - c.F / (c.omega_hat_0 * c.omega_hat_0)) / envelope;
  if (!(arg >= -1.0 && arg <= 1.0)) {
    if (!clamp || std::isnan(arg)) {
      throw Error(ErrorKind::NoLiftoffSolution, "lift-off arccos argument outside [-1, 1]");
    }
    arg = std::clamp(arg, -1.0, 1.0);
  }
  // The guard decreases through zero where w_d t + phi_1 + phi_3 = acos(arg) (mod 2 pi).
  const double base = (std::acos(arg) - c.phi_1 - c.phi_3) / c.omega_d;
  const double period = kTwoPi / c.omega_d;
  const double n = std::floor((c.t_b - base) / period) + 1.0;
  double t = base + n * period;
  if (t <= c.t_b) t += period;
  return t;
}

MomentumCorrections momentum_corrections(const SystemParams& p, const RampTorque& torque, double t_lo,
                                         double theta_td, double theta_lo, double rho_lo) {
  if (!(t_lo > 0.0)) throw Error(ErrorKind::InvalidArgument, "t_lo must be > 0");
  MomentumCorrections out;
  const double tau0 = torque.tau_0;
  const double tf = torque.t_f;
  if (tf >= t_lo) {
    // int_0^T (tau0 (s - s^2 / (2 tf))) ds / T
    out.dp_tau = std::isinf(tf) ? tau0 * t_lo / 2.0 : tau0 * (t_lo / 2.0 - t_lo * t_lo / (6.0 * tf));
  } else {
    out.dp_tau = tau0 * (tf * tf / 3.0 + tf * (t_lo - tf) / 2.0) / t_lo;
  }
  out.dp_g = p.stance_mass() * p.g * t_lo / 6.0 *
             (2.0 * p.rho_0 * std::sin(theta_td) + rho_lo * std::sin(theta_lo));
  return out;
}

AnalyticStance analytic_stance_map(const PolarStanceState& td, const SystemParams& p,
                                   const RampTorque& torque, const AnalyticOptions& opts) {
  if (opts.passes < 1) throw Error(ErrorKind::InvalidArgument, "at least one pass is required");
  const double m = p.stance_mass();
  const double p0 = m * td.rho * td.rho * td.theta_dot;

  AnalyticStance out;
  out.coefficients = stance_coefficients(td, p, p0, opts.clamp_liftoff);
  out.t_lo_uncorrected = out.coefficients.t_lo;
  out.t_lo = out.coefficients.t_lo;
  out.liftoff = analytic_stance_at(out.coefficients, td, out.t_lo);

  for (int pass = 1; pass < opts.passes; ++pass) {
    out.corrections = momentum_corrections(p, torque, out.t_lo, td.theta, out.liftoff.theta,
                                           out.liftoff.rho);
    const double p_hat = p0 + kHipTorqueSign * out.corrections.dp_tau + out.corrections.dp_g;
    out.coefficients = stance_coefficients(td, p, p_hat, opts.clamp_liftoff);
    out.t_lo = out.coefficients.t_lo;
    out.liftoff = analytic_stance_at(out.coefficients, td, out.t_lo);
  }
  return out;
}

double predicted_liftoff_time(const PolarStanceState& td, const SystemParams& p, bool clamp) {
  const double p0 = p.stance_mass() * td.rho * td.rho * td.theta_dot;
  return stance_coefficients(td, p, p0, clamp).t_lo;
}

}  // namespace slip
