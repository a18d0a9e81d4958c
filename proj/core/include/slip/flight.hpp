#pragma once

#include "slip/model.hpp"

namespace slip {

/// Apex of a flight phase. The vertical velocity is zero by definition.
struct ApexState {
  double z_a = 0.0;      // apex height [m]
  double y_dot_a = 0.0;  // apex horizontal velocity [m/s]
  double y_a = 0.0;      // apex horizontal position [m]
  double t_a = 0.0;      // apex time [s]

  CartesianState cartesian() const { return {y_a, z_a, y_dot_a, 0.0}; }
};

enum class FlightEventKind { Apex, Touchdown };

/// Event located along a flight trajectory; t is measured from the initial state.
struct FlightEvent {
  FlightEventKind kind = FlightEventKind::Apex;
  double t = 0.0;
  CartesianState state;
};

/// Closed-form flight with linear velocity damping (y'' = -d_h y', z'' = -g - d_v z').
/// Reduces to ballistic flight when either damping is zero.
CartesianState flight_state_at(const CartesianState& x0, const SystemParams& p, double t);

/// Apex reached from an ascending state. Throws NotAscending when z_dot < 0.
FlightEvent apex_event(const CartesianState& x0, const SystemParams& p);

/// First time the body reaches the touchdown height rho_0 cos(theta_td) + ground_offset.
/// Ascending initial states are first propagated to their apex.
/// Throws NoTouchdown when the apex is below the touchdown height.
FlightEvent touchdown_event(const CartesianState& x0, const SystemParams& p, double theta_td,
                            double ground_offset);

/// Touchdown configuration produced by the descent map.
struct Touchdown {
  PolarStanceState state;    // rho == rho_0 and theta == theta_td exactly
  CartesianState cartesian;  // body state at touchdown
  double toe_y = 0.0;        // toe contact position [m]
  double t = 0.0;            // absolute touchdown time [s]
};

/// Descent map: apex -> touchdown for a leg held at theta_td.
Touchdown descent_map(const ApexState& apex, double theta_td, const SystemParams& p,
                      double ground_offset);

/// Ascent map: (pre-collision) lift-off state -> next apex. Applies the lift-off
/// collision, then flies to the apex. Times are measured from t_liftoff.
/// Throws NotAscending when the post-collision vertical velocity is not positive.
ApexState ascent_map(const PolarStanceState& liftoff, const SystemParams& p, double toe_y,
                     double ground_offset = 0.0, double t_liftoff = 0.0);

}  // namespace slip
