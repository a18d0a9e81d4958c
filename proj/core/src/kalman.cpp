#include "slip/kalman.hpp"

#include <Eigen/Dense>
#include <cmath>

#include "slip/error.hpp"

namespace slip {

namespace {

using M3 = Eigen::Matrix3d;
using V3 = Eigen::Vector3d;

M3 to_eigen(const Mat3& m) {
  M3 out;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) out(i, j) = m[i][j];
  }
  return out;
}

struct Pass {
  std::vector<V3> x_prior, x_post;
  std::vector<M3> P_prior, P_post;
};

Pass forward(const std::vector<double>& z, const KalmanConfig& cfg) {
  if (z.empty()) throw Error(ErrorKind::EmptySeries, "no samples to filter");
  cfg.validate();
  const KalmanModel km = kalman_model(cfg);
  const M3 F = to_eigen(km.F);
  const M3 Q = to_eigen(km.Q);
  const Eigen::RowVector3d H(km.H[0], km.H[1], km.H[2]);

  V3 x = V3::Zero();
  M3 P = M3::Zero();
  if (cfg.init_from_first) {
    // Difference-based prior at the first sample, stepped back one interval
    // because every update is preceded by a prediction.
    const double dt = cfg.dt;
    const double v = z.size() > 1 ? (z[1] - z[0]) / dt : 0.0;
    const double a = z.size() > 2 ? (z[2] - 2.0 * z[1] + z[0]) / (dt * dt) : 0.0;
    x << z.front() - v * dt + 0.5 * a * dt * dt, v - a * dt, a;
    P.diagonal() << km.R, 1e2, 1e4;
  }

  Pass pass;
  pass.x_prior.reserve(z.size());
  pass.x_post.reserve(z.size());
  pass.P_prior.reserve(z.size());
  pass.P_post.reserve(z.size());
  for (double zi : z) {
    const V3 xp = F * x;
    const M3 Pp = F * P * F.transpose() + Q;
    const double S = (H * Pp * H.transpose())(0, 0) + km.R;
    const V3 K = Pp * H.transpose() / S;
    x = xp + K * (zi - (H * xp)(0, 0));
    P = (M3::Identity() - K * H) * Pp;
    pass.x_prior.push_back(xp);
    pass.P_prior.push_back(Pp);
    pass.x_post.push_back(x);
    pass.P_post.push_back(P);
  }
  return pass;
}

KalmanEstimate from(const V3& x) { return {x(0), x(1), x(2)}; }

}  // namespace

void KalmanConfig::validate() const {
  if (!(sigma_w > 0.0) || !(sigma_v > 0.0) || !(dt > 0.0)) {
    throw Error(ErrorKind::InvalidArgument, "Kalman sigma_w, sigma_v and dt must be > 0");
  }
}

KalmanModel kalman_model(const KalmanConfig& cfg) {
  cfg.validate();
  const double t = cfg.dt;
  const double t2 = t * t, t3 = t2 * t, t4 = t3 * t, t5 = t4 * t;
  const double q = cfg.sigma_w * cfg.sigma_w;
  KalmanModel m;
  m.F = {{{1.0, t, t2 / 2.0}, {0.0, 1.0, t}, {0.0, 0.0, 1.0}}};
  m.Q = {{{q * t5 / 20.0, q * t4 / 8.0, q * t3 / 6.0},
          {q * t4 / 8.0, q * t3 / 3.0, q * t2 / 2.0},
          {q * t3 / 6.0, q * t2 / 2.0, q * t}}};
  m.H = {1.0, 0.0, 0.0};
  m.R = cfg.sigma_v * cfg.sigma_v / t;
  return m;
}

std::vector<KalmanEstimate> kalman_smooth(const std::vector<double>& positions,
                                          const KalmanConfig& cfg) {
  const Pass pass = forward(positions, cfg);
  std::vector<KalmanEstimate> out;
  out.reserve(pass.x_post.size());
  for (const V3& x : pass.x_post) out.push_back(from(x));
  return out;
}

std::vector<KalmanEstimate> kalman_rts_smooth(const std::vector<double>& positions,
                                              const KalmanConfig& cfg) {
  const Pass pass = forward(positions, cfg);
  const M3 F = to_eigen(kalman_model(cfg).F);
  const std::size_t n = pass.x_post.size();
  std::vector<V3> xs(pass.x_post);
  for (std::size_t i = n - 1; i-- > 0;) {
    // The pseudo-inverse covers the rank-deficient priors that follow a
    // zero-covariance start.
    const M3 C = pass.P_post[i] * F.transpose() *
                 pass.P_prior[i + 1].completeOrthogonalDecomposition().pseudoInverse();
    xs[i] = pass.x_post[i] + C * (xs[i + 1] - pass.x_prior[i + 1]);
  }
  std::vector<KalmanEstimate> out;
  out.reserve(n);
  for (const V3& x : xs) out.push_back(from(x));
  return out;
}

std::vector<double> finite_difference_velocity(const std::vector<double>& positions, double dt) {
  if (positions.empty()) throw Error(ErrorKind::EmptySeries, "no samples to differentiate");
  if (!(dt > 0.0)) throw Error(ErrorKind::InvalidArgument, "dt must be > 0");
  std::vector<double> v(positions.size(), 0.0);
  for (std::size_t i = 0; i + 1 < positions.size(); ++i) v[i] = (positions[i + 1] - positions[i]) / dt;
  if (positions.size() > 1) v.back() = v[v.size() - 2];
  return v;
}

}  // namespace slip
