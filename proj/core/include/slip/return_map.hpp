#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "slip/flight.hpp"
#include "slip/model.hpp"
#include "slip/stance_analytic.hpp"
#include "slip/stance_oracle.hpp"

namespace slip {

enum class StanceBackend { Oracle, Analytic };

enum class StrideStatus { Success, Fall, NoTouchdown, NoLiftoff };

std::string_view to_string(StanceBackend b) noexcept;
std::string_view to_string(StrideStatus s) noexcept;

enum class TorqueMode { Ramp, Constant };

/// Hip torque request for one stride. Without an explicit cutoff the ramp ends
/// at the lift-off time predicted at touchdown (first analytic pass), which is
/// how the hopper schedules its torque.
struct TorqueCommand {
  double tau_0 = 0.0;
  std::optional<double> t_f;
  TorqueMode mode = TorqueMode::Ramp;

  static TorqueCommand ramp(double tau0) { return {tau0, std::nullopt, TorqueMode::Ramp}; }
  static TorqueCommand ramp(double tau0, double t_f) { return {tau0, t_f, TorqueMode::Ramp}; }
  static TorqueCommand constant(double tau0) { return {tau0, std::nullopt, TorqueMode::Constant}; }

  /// Concrete profile for a stance whose predicted lift-off time is t_lo_pred.
  RampTorque resolve(double t_lo_pred) const;
};

struct StrideOptions {
  double ground_offset = 0.0;
  OracleOptions oracle;
  AnalyticOptions analytic;
};

struct StrideOutcome {
  ApexState next_apex;
  double t_apex = 0.0;  // absolute time of the next apex [s]
  StrideStatus status = StrideStatus::Success;
  std::string reason;  // empty on success

  // Intermediate quantities, valid as far as the stride progressed.
  Touchdown touchdown;
  RampTorque torque;            // profile applied during stance
  double stance_duration = 0.0;  // t_lo measured from touchdown [s]
  double t_bottom = 0.0;         // from touchdown [s]
  PolarStanceState liftoff;      // pre-collision stance state
  CartesianState liftoff_pre;
  CartesianState liftoff_post;

  bool ok() const { return status == StrideStatus::Success; }
};

/// Inelastic body-toe collision at lift-off: velocities scale by m_b / (m_b + m_t).
CartesianState liftoff_collision(const CartesianState& pre, const SystemParams& p);

/// Apex-to-apex return map: descent, stance (selected backend), lift-off
/// collision and ascent. Failures are reported through the status, never thrown.
StrideOutcome apex_return_map(const ApexState& apex, double theta_td, const TorqueCommand& torque,
                              const SystemParams& p, StanceBackend backend,
                              const StrideOptions& opts = {});

enum class StridePhase { Descent, Stance, Ascent };

enum class StrideEvent { None, Apex, Touchdown, Bottom, Liftoff };

std::string_view to_string(StridePhase p) noexcept;
std::string_view to_string(StrideEvent e) noexcept;

struct StrideLogRow {
  double t = 0.0;
  CartesianState state;
  double theta = 0.0;
  double theta_dot = 0.0;
  double tau = 0.0;
  StridePhase phase = StridePhase::Descent;
  StrideEvent event = StrideEvent::None;
};

/// Sampled single stride from the initial apex to the next apex.
/// The lift-off event row carries the pre-collision state.
struct StrideLog {
  ApexState apex0;
  double theta_td = 0.0;
  TorqueCommand command;
  StanceBackend backend = StanceBackend::Oracle;
  double ground_offset = 0.0;
  StrideOutcome outcome;
  std::vector<StrideLogRow> rows;
};

/// Idealized single-stride experiment: the leg is held at theta_td during
/// descent and at the lift-off angle during ascent. Rows are sampled every
/// sample_dt (absolute time grid) with event rows inserted at the exact event
/// times. A failed stride keeps the rows up to the failure.
StrideLog simulate_stride(const ApexState& apex, double theta_td, const TorqueCommand& torque,
                          const SystemParams& p, StanceBackend backend = StanceBackend::Oracle,
                          const StrideOptions& opts = {}, double sample_dt = 1e-3);

/// Columns: t_s,y_m,z_m,ydot_mps,zdot_mps,theta_rad,thetadot_radps,tau_Nm,phase,event
void write_stride_csv(std::ostream& out, const StrideLog& log);

}  // namespace slip
