#pragma once

#include <iosfwd>
#include <limits>
#include <string>

namespace slip {

/// Physical parameters of the extended TD-SLIP model, SI units throughout.
///
/// Stance and flight dynamics use the body mass only; the toe mass enters
/// exclusively through the lift-off collision. The flight dampings are rates
/// (the flight equations carry no mass division).
struct SystemParams {
  double m_b = 2.20;     // body mass [kg]
  double m_t = 0.03;     // toe mass [kg]
  double k = 4696.0;     // leg spring stiffness [N/m]
  double d = 9.87;       // leg damping [N s/m]
  double d_v_f = 0.23;   // vertical flight damping [1/s]
  double d_h_f = 0.01;   // horizontal flight damping [1/s]
  double g = 11.42;      // effective gravity [m/s^2]
  double rho_0 = 0.205;  // leg rest length [m]

  /// Identified hopper parameters (mean values) with a 0.205 m rest length.
  static SystemParams reference() { return {}; }

  /// Mass used by the stance and flight equations.
  double stance_mass() const { return m_b; }

  /// Velocity ratio across the lift-off collision, m_b / (m_b + m_t).
  double collision_scale() const { return m_b / (m_b + m_t); }

  /// Throws InvalidArgument naming the first violated bound.
  void validate() const;

  bool operator==(const SystemParams&) const = default;
};

struct CartesianState {
  double y = 0.0;      // horizontal position [m]
  double z = 0.0;      // vertical position [m]
  double y_dot = 0.0;  // [m/s]
  double z_dot = 0.0;  // [m/s]
};

/// Stance coordinates about the toe. theta is measured from the vertical and
/// is positive while the body is behind the toe, so it decreases through a
/// forward stance.
struct PolarStanceState {
  double rho = 0.0;        // leg length [m]
  double theta = 0.0;      // leg angle [rad]
  double rho_dot = 0.0;    // [m/s]
  double theta_dot = 0.0;  // [rad/s]
};

/// Decreasing ramp hip torque tau_0 (1 - t/t_f) on [0, t_f], zero afterwards.
/// A positive tau_0 propels the body forward (towards +y).
struct RampTorque {
  double tau_0 = 0.0;  // [N m]
  double t_f = 1.0;    // cutoff [s]

  static RampTorque none() { return {0.0, 1.0}; }
  /// Constant torque over the whole stance (infinite cutoff).
  static RampTorque constant(double tau) {
    return {tau, std::numeric_limits<double>::infinity()};
  }
};

double ramp_torque_at(const RampTorque& profile, double t);

/// Sign relating the hip torque to the generalized torque acting on theta.
/// Forward running sweeps theta downwards, so a propulsive hip torque acts
/// along -theta.
inline constexpr double kHipTorqueSign = -1.0;

inline double generalized_torque(double hip_torque) { return kHipTorqueSign * hip_torque; }

CartesianState polar_to_cartesian(const PolarStanceState& s, double toe_y);

/// Inverse of polar_to_cartesian. Throws DegenerateGeometry when z <= 0.
PolarStanceState cartesian_to_polar(const CartesianState& s, double toe_y);

/// Static boom model: the robot rides on the tip of a boom of mass m_boom.
struct BoomParams {
  double L_boom = 1.0;   // [m]
  double m_boom = 0.39;  // [kg]
  double M_tip = 2.22;   // leg structure mass at the tip [kg]
  double g_0 = 9.81;     // [m/s^2]

  void validate() const;
};

/// Vertical acceleration of the boom tip under gravity, with the boom treated
/// as a uniform rod pivoting at its base (I_boom = m_boom L^2 / 3).
double boom_corrected_gravity(const BoomParams& b);

/// Reads a flat "key = value" parameter file. Unknown keys, missing keys and
/// bad numbers throw MalformedFile; '#' starts a comment.
SystemParams parse_params(const std::string& text);
SystemParams load_params(const std::string& path);
void write_params(std::ostream& out, const SystemParams& p);

}  // namespace slip
