#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "slip/return_map.hpp"

namespace slip {

struct ApexGoal {
  double z_star = 0.35;      // desired apex height [m]
  double y_dot_star = 2.0;   // desired apex horizontal velocity [m/s]
};

/// Energy bookkeeping of one controlled stride [J].
struct EnergyBudget {
  double e_tau = 0.0;         // energy the hip must inject
  double e_d = 0.0;           // stance damping loss
  double e_k = 0.0;           // spring energy left at lift-off
  double e_loss = 0.0;        // e_d + e_k
  double e_transition = 0.0;  // lift-off collision plus flight damping (optional term)
};

struct ControlAction {
  double tau_0 = 0.0;     // [N m]
  double t_f = 0.0;       // ramp cutoff, the predicted lift-off time [s]
  double theta_td = 0.0;  // [rad]
};

/// Simpson quadrature of d rho_dot^2 over [0, c.t_lo] using the analytic
/// radial velocity. nodes must be odd and >= 3.
double damping_loss(const StanceCoefficients& c, const SystemParams& p, int nodes = 129);

/// Closed-form integral of the same damping power; a cross-check for damping_loss.
double damping_loss_closed_form(const StanceCoefficients& c, const SystemParams& p);

/// k (rho_lo - rho_0)^2 / 2.
double spring_residual_energy(double rho_lo, const SystemParams& p);

/// m (y'*^2 - y'^2) / 2 + m g (z* - z) + e_loss.
double required_torque_energy(const ApexState& apex, const ApexGoal& goal, const SystemParams& p,
                              double e_loss);

struct Tau0Options {
  int max_passes = 30;
  double tolerance = 1e-6;  // [N m] between successive iterates
  int nodes = 129;
  bool clamp_liftoff = false;
};

struct Tau0Solution {
  double tau_0 = 0.0;
  int passes = 0;
  double sweep = 0.0;  // integral of (1 - t/t_lo) |theta_dot| at the last pass [rad]
};

/// Solves e_tau = tau_0 * int_0^t_lo (1 - t/t_lo) |theta_dot(t)| dt, where
/// theta_dot is the analytic solution carrying the tau_0 dependent momentum
/// correction. Fixed-point iteration from the torque-free trajectory, with
/// secant acceleration from the second pass on; when the corrected stance ends
/// before t_lo the sweep integral stops at its lift-off.
/// Throws NonConvergent or ZeroSweep.
Tau0Solution solve_tau0(double e_tau, const PolarStanceState& td, const SystemParams& p, double t_lo,
                        const Tau0Options& opts = {});

struct TouchdownSearchOptions {
  double theta_min = -1.45;  // [rad]
  double theta_max = 1.45;   // [rad]
  int probes = 64;           // uniformly spaced starting angles (at least 32)
  double x_tol = 1e-10;      // [rad]
  double tie_tolerance = 1e-14;  // objective values closer than this count as ties [m^2]
  StrideOptions stride;
};

struct TouchdownSolution {
  double theta_td = 0.0;
  double objective = 0.0;  // (z* - z_next)^2 [m^2]
  double z_next = 0.0;
  double y_dot_next = 0.0;
};

/// argmin over theta of (z* - z_next(theta))^2 through the analytic return map
/// with the ramp ending at the predicted lift-off. Probes the bounds, refines
/// every local probe minimum with a one-dimensional simplex (fold-back
/// transform for the bounds) and breaks ties towards smaller |theta|.
/// Throws NoMinimum when every probe fails.
TouchdownSolution solve_touchdown_angle(const ApexState& apex, const ApexGoal& goal, double tau_0,
                                        const SystemParams& p,
                                        const TouchdownSearchOptions& opts = {});

/// (z* - z_next)^2 for one candidate angle, +inf when the stride fails.
double touchdown_objective(const ApexState& apex, const ApexGoal& goal, double tau_0, double theta,
                           const SystemParams& p, const StrideOptions& stride = {});

struct DeadbeatOptions {
  int outer_passes = 3;             // re-linearizations of the stance prediction
  bool transition_losses = true;    // budget collision and flight damping losses too
  bool closed_form_damping = false; // use the closed-form damping integral
  bool joint_search = false;        // experimental: optimize (tau_0, theta_td) jointly
  std::optional<double> fixed_tau0; // bypass the energy law (open-loop torque)
  double tau_min = -50.0;           // [N m]
  double tau_max = 50.0;            // [N m]
  Tau0Options tau;
  TouchdownSearchOptions angle;
};

/// Intermediate values of one controller evaluation.
struct DeadbeatTrace {
  double theta_guess = 0.0;  // angle used for the stance prediction
  double t_lo_pred = 0.0;
  double rho_lo = 0.0;
  int tau_passes = 0;
  double objective = 0.0;
  double z_pred = 0.0;
  double y_dot_pred = 0.0;
};

struct DeadbeatResult {
  ControlAction action;
  EnergyBudget budget;
  DeadbeatTrace trace;
};

/// One controller evaluation at an apex: stance prediction, energy budget,
/// tau_0, touchdown angle and cutoff. Errors keep their kind and name the
/// failing stage in the message. previous seeds the stance prediction when
/// its touchdown angle can reach the ground from this apex.
DeadbeatResult deadbeat_step(const ApexState& apex, const ApexGoal& goal, const SystemParams& p,
                             const DeadbeatOptions& opts = {},
                             const std::optional<ControlAction>& previous = std::nullopt);

struct GoalChange {
  std::size_t stride = 0;  // first stride using this goal
  ApexGoal goal;
};

/// Goal active at a stride: the last change whose index is <= stride.
ApexGoal goal_at(const std::vector<GoalChange>& schedule, std::size_t stride);

struct RunStride {
  std::size_t index = 0;
  ApexState apex;  // apex the stride starts from
  ApexGoal goal;
  ControlAction action;
  EnergyBudget budget;
  StrideOutcome outcome;  // next_apex is the apex this stride reaches
  std::string error;      // controller failure, empty otherwise
};

struct RunLog {
  std::vector<RunStride> strides;
  bool completed = false;
  std::string status;  // "completed" or the failure description
};

struct ClosedLoopOptions {
  StanceBackend plant = StanceBackend::Oracle;
  std::optional<SystemParams> plant_params;  // defaults to the controller model
  StrideOptions plant_stride;
  DeadbeatOptions controller;
};

/// Apex-triggered control loop: at every apex evaluate the controller for the
/// active goal, run one plant stride and continue until n strides or the
/// first failure. Throws InvalidArgument when n == 0 or stride 0 has no goal.
RunLog run_closed_loop(const ApexState& apex0, const std::vector<GoalChange>& schedule,
                       const SystemParams& p, std::size_t n, const ClosedLoopOptions& opts = {});

/// Columns: stride,z_a_m,y_dot_a_mps,z_star_m,y_dot_star_mps,tau_0_Nm,theta_td_deg,t_lo_s,status.
/// z_a and y_dot_a are the apex reached by the stride.
void write_run_csv(std::ostream& out, const RunLog& log);

}  // namespace slip
