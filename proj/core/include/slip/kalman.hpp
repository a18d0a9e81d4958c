#pragma once

#include <array>
#include <vector>

namespace slip {

/// Constant-jerk velocity estimator settings. sigma_w is the continuous jerk
/// noise intensity and sigma_v the measurement noise density, so the discrete
/// measurement variance is sigma_v^2 / dt (a white position error of standard
/// deviation s sampled at dt corresponds to sigma_v = s sqrt(dt)).
struct KalmanConfig {
  double sigma_w = 50.0;     // [m/s^3 /sqrt(Hz)]
  double sigma_v = 3.16e-5;  // [m sqrt(s)]
  double dt = 1e-3;          // [s]
  /// Start from finite differences of the first three samples with a wide
  /// prior instead of the zero state and zero covariance.
  bool init_from_first = false;

  void validate() const;
};

using Mat3 = std::array<std::array<double, 3>, 3>;

/// Discrete model: x = [pos, vel, acc], F_d, H_d = [1 0 0], Q_d and R_d.
struct KalmanModel {
  Mat3 F;
  Mat3 Q;
  std::array<double, 3> H;
  double R;
};

KalmanModel kalman_model(const KalmanConfig& cfg);

struct KalmanEstimate {
  double pos = 0.0;
  double vel = 0.0;
  double acc = 0.0;
};

/// Causal filter over uniformly sampled positions, one estimate per sample.
/// With the default configuration the state starts at zero with zero
/// covariance. Throws EmptySeries for an empty input.
std::vector<KalmanEstimate> kalman_smooth(const std::vector<double>& positions,
                                          const KalmanConfig& cfg);

/// Forward filter followed by a Rauch-Tung-Striebel backward pass. Offline
/// use only; removes the filter lag around events.
std::vector<KalmanEstimate> kalman_rts_smooth(const std::vector<double>& positions,
                                              const KalmanConfig& cfg);

/// Forward difference (x[i+1]-x[i])/dt, with the last sample repeating the
/// previous value. Used as the unfiltered baseline.
std::vector<double> finite_difference_velocity(const std::vector<double>& positions, double dt);

}  // namespace slip
