#pragma once

#include "slip/model.hpp"

namespace slip {

/// Derived quantities of the approximate analytical stance solution.
///
/// The radial motion is a damped linear oscillator about F / omega_hat_0^2,
/// obtained by linearizing the centrifugal term around the rest length with
/// a constant (effective) angular momentum p_theta_hat:
///   rho(t)       = M e^{-zeta w t} cos(w_d t + phi_1) + F / w^2
///   rho_dot(t)   = -M w e^{-zeta w t} cos(w_d t + phi_1 + phi_2)
///   theta(t)     = theta_td + X t + Y (e^{-zeta w t} cos(w_d t + phi_1 - phi_2) - cos(phi_1 - phi_2))
///   theta_dot(t) = X - 2 omega M e^{-zeta w t} cos(w_d t + phi_1) / rho_0
/// with w = omega_hat_0.
struct StanceCoefficients {
  double p_theta = 0.0;      // touchdown angular momentum m rho_td^2 theta_dot_td [kg m^2/s]
  double p_theta_hat = 0.0;  // effective angular momentum used by the solution
  double omega = 0.0;        // p_theta_hat / (m rho_0^2) [rad/s]
  double omega_0 = 0.0;      // sqrt(k/m)
  double omega_hat_0 = 0.0;  // sqrt(omega_0^2 + 3 omega^2)
  double zeta = 0.0;         // d / (2 m omega_hat_0)
  double omega_d = 0.0;      // omega_hat_0 sqrt(1 - zeta^2)
  double F = 0.0;            // -g + rho_0 omega_0^2 + 4 rho_0 omega^2 [m/s^2]
  double M_amp = 0.0;        // sqrt(A^2 + B^2) [m]
  double phi_1 = 0.0;
  double phi_2 = 0.0;
  double phi_3 = 0.0;
  double X = 0.0;      // mean angular rate [rad/s]
  double Y = 0.0;      // angular oscillation amplitude [rad]
  double A = 0.0;      // rho_td - F / omega_hat_0^2 [m]
  double B = 0.0;      // [m]
  double M_bar = 0.0;  // guard amplitude factor [N/m]
  double rho_0 = 0.0;
  double t_b = 0.0;   // bottom time [s]
  double t_lo = 0.0;  // lift-off time [s]

  double decay() const { return zeta * omega_hat_0; }
};

struct AnalyticOptions {
  int passes = 2;              // 1 = uncorrected momentum; each extra pass re-applies the correction
  bool clamp_liftoff = false;  // clamp the lift-off arccos argument into [-1, 1] instead of failing
};

/// Builds all coefficients for the given effective angular momentum and fills
/// t_b and t_lo. Throws Overdamped (zeta >= 1), NoBottom or NoLiftoffSolution.
StanceCoefficients stance_coefficients(const PolarStanceState& td, const SystemParams& p,
                                       double p_theta_eff, bool clamp_liftoff = false);

/// Evaluates the solution at 0 <= t <= c.t_lo; throws OutOfWindow otherwise.
PolarStanceState analytic_stance_at(const StanceCoefficients& c, const PolarStanceState& td, double t);

/// First compression-to-decompression crossing of rho_dot.
double bottom_time(const StanceCoefficients& c);

/// Lift-off time from the guard k (rho_0 - rho) - d rho_dot = 0, with the
/// envelope decay frozen at 2 t_b (symmetric stance). Selects the first guard
/// root after t_b on the decreasing branch. c.t_b must be set.
double liftoff_time(const StanceCoefficients& c, const SystemParams& p, bool clamp = false);

struct MomentumCorrections {
  double dp_tau = 0.0;  // hip torque correction, in hip-torque sign [kg m^2/s]
  double dp_g = 0.0;    // gravity asymmetry correction [kg m^2/s]
};

/// dp_tau is the stance-averaged torque impulse (1/t_lo) int_0^t_lo int_0^s tau,
/// which is tau_0 t_lo / 3 when the ramp ends at t_lo.
/// dp_g = m g t_lo / 6 (2 rho_0 sin(theta_td) + rho_lo sin(theta_lo)).
MomentumCorrections momentum_corrections(const SystemParams& p, const RampTorque& torque, double t_lo,
                                         double theta_td, double theta_lo, double rho_lo);

struct AnalyticStance {
  PolarStanceState liftoff;
  double t_lo = 0.0;
  double t_lo_uncorrected = 0.0;  // first-pass prediction, used as the ramp cutoff
  StanceCoefficients coefficients;
  MomentumCorrections corrections;
};

/// Approximate stance map touchdown -> lift-off with momentum corrections.
AnalyticStance analytic_stance_map(const PolarStanceState& td, const SystemParams& p,
                                   const RampTorque& torque, const AnalyticOptions& opts = {});

/// First-pass (uncorrected) lift-off time prediction at touchdown.
double predicted_liftoff_time(const PolarStanceState& td, const SystemParams& p, bool clamp = false);

}  // namespace slip
