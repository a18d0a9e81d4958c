#pragma once

#include <array>
#include <iosfwd>
#include <vector>

#include "slip/model.hpp"

namespace slip {

struct StanceSample {
  double t = 0.0;  // time since touchdown [s]
  PolarStanceState state;
  double tau = 0.0;  // hip torque [N m]
};

/// Numerically integrated stance phase, touchdown to lift-off.
struct StanceTrajectory {
  std::vector<StanceSample> samples;  // strictly increasing t; last sample is lift-off
  double step = 0.0;                  // integrator step used [s]
  bool has_bottom = false;
  double t_bottom = 0.0;   // first compression-to-decompression crossing of rho_dot
  double t_liftoff = 0.0;  // guard zero crossing
  /// Lift-off time and state (rho, theta, rho_dot, theta_dot) as accumulated
  /// by the integrator, before rounding to double.
  long double t_liftoff_ext = 0.0L;
  std::array<long double, 4> liftoff_ext{};

  const PolarStanceState& touchdown() const { return samples.front().state; }
  const PolarStanceState& liftoff() const { return samples.back().state; }
  double tau_at_liftoff() const { return samples.back().tau; }
};

struct OracleOptions {
  double step = 1e-5;     // fixed RK4 step [s]
  double horizon = 2.0;   // NoLiftoff past this stance duration [s]
};

/// Fixed-step RK4 integration of the stance dynamics
///   rho''            = rho theta'^2 - g cos(theta) - (k/m)(rho - rho_0) - (d/m) rho'
///   d/dt(m rho^2 theta') = m g rho sin(theta) + kHipTorqueSign * tau(t)
/// Steps are split at the torque cutoff so the forcing is smooth inside every
/// step. Lift-off is the first zero crossing of liftoff_guard from the
/// compressed side with rho' > 0, refined by bisection on the step length.
///
/// Throws Fall (|theta| >= pi/2), NonPositiveLength (rho <= 0) or NoLiftoff
/// (horizon exceeded).
StanceTrajectory integrate_stance(const PolarStanceState& td, const SystemParams& p,
                                  const RampTorque& torque, const OracleOptions& opts = {});

/// Net radial leg force k (rho_0 - rho) - d rho_dot; lift-off when it reaches zero.
double liftoff_guard(const PolarStanceState& s, const SystemParams& p);

/// Ground reaction force transmitted through the massless leg.
struct GrfSample {
  double f_y = 0.0;         // horizontal [N]
  double f_z = 0.0;         // vertical [N]
  double cop_offset = 0.0;  // ground intercept of the line of action through the body, minus toe [m]
};

/// Radial spring-damper force along the leg plus the hip torque as a tangential
/// force tau/rho. cop_offset is 0 when the force vanishes and NaN when the line
/// of action is horizontal.
GrfSample grf_at(const PolarStanceState& s, const SystemParams& p, double tau);

std::vector<GrfSample> grf_series(const StanceTrajectory& traj, const SystemParams& p);

struct GrfWindows {
  double early = 0.25;        // leading fraction of the stance duration
  double late = 0.25;         // trailing fraction
  double min_vertical = 0.05; // samples with f_z below this fraction of the peak are skipped
};

/// Mean line-of-action offsets over the early and late stance windows. Samples
/// with a small vertical force carry an ill-conditioned intercept and are
/// excluded; a window without valid samples reports 0 with count 0.
struct GrfSummary {
  double early_cop = 0.0;  // [m], negative behind the toe
  double late_cop = 0.0;   // [m]
  double max_abs_cop = 0.0;
  double peak_f_z = 0.0;   // [N]
  int early_count = 0;
  int late_count = 0;
};

GrfSummary summarize_grf(const StanceTrajectory& traj, const SystemParams& p, const GrfWindows& w = {});

/// Mechanical energy of the stance state including spring potential.
double stance_mechanical_energy(const PolarStanceState& s, const SystemParams& p);

struct EnergyLedger {
  double e_mech_start = 0.0;  // [J]
  double e_mech_end = 0.0;    // [J]
  double w_torque = 0.0;      // work of the hip torque on theta [J]
  double w_damping = 0.0;     // dissipated in the leg damper, >= 0 [J]

  /// e_end - e_start - (w_torque - w_damping)
  double residual() const { return e_mech_end - e_mech_start - (w_torque - w_damping); }
};

/// Trapezoidal audit of the stance energy balance.
EnergyLedger stance_energy_audit(const StanceTrajectory& traj, const SystemParams& p);

struct MomentumLedger {
  double l_start = 0.0;  // m rho^2 theta' at touchdown [kg m^2/s]
  double l_end = 0.0;
  double impulse = 0.0;  // trapezoidal integral of m g rho sin(theta) + generalized torque
};

MomentumLedger stance_momentum_audit(const StanceTrajectory& traj, const SystemParams& p);

/// CSV with header t,rho,theta,rho_dot,theta_dot,tau,f_y,f_z.
void write_stance_csv(std::ostream& out, const StanceTrajectory& traj, const SystemParams& p);

}  // namespace slip
