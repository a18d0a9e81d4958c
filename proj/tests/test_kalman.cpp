#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "slip/error.hpp"
#include "slip/kalman.hpp"

using namespace slip;
using doctest::Approx;

TEST_CASE("discrete model matrices") {
  const double dt = 1e-3, sw = 50.0, sv = 3.16e-5;
  const KalmanModel m = kalman_model({sw, sv, dt, false});
  const double F[3][3] = {{1, dt, dt * dt / 2}, {0, 1, dt}, {0, 0, 1}};
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) CHECK(m.F[i][j] == Approx(F[i][j]).epsilon(1e-15));
  }
  CHECK(m.H[0] == 1.0);
  CHECK(m.H[1] == 0.0);
  CHECK(m.H[2] == 0.0);
  CHECK(m.R == Approx(sv * sv / dt).epsilon(1e-15));

  // Q_d = int_0^dt e^{A s} G G^T e^{A^T s} ds with white jerk of intensity sw^2.
  auto phi = [](double s) { return std::array<double, 3>{s * s / 2, s, 1.0}; };
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      const double q = sw * sw * oracle::simpson([&](double s) { return phi(s)[i] * phi(s)[j]; }, 0.0, dt, 200);
      CHECK(m.Q[i][j] == Approx(q).epsilon(1e-10));
    }
  }
  CHECK(m.Q[0][0] == Approx(sw * sw * std::pow(dt, 5) / 20).epsilon(1e-14));
  CHECK(m.Q[1][1] == Approx(sw * sw * std::pow(dt, 3) / 3).epsilon(1e-14));

  CHECK_THROWS_AS(kalman_model({sw, sv, 0.0, false}), Error);
  CHECK_THROWS_AS(kalman_smooth({}, {}), Error);
}

TEST_CASE("steady inputs") {
  const KalmanConfig cfg;
  const auto still = kalman_smooth(std::vector<double>(3000, 0.3), cfg);
  CHECK(std::abs(still.back().vel) < 1e-6);
  CHECK(still.back().pos == Approx(0.3).epsilon(1e-6));

  std::vector<double> ramp;
  for (int i = 0; i < 3000; ++i) ramp.push_back(1.7 * i * cfg.dt);
  const auto est = kalman_smooth(ramp, cfg);
  for (std::size_t i = 500; i < est.size(); ++i) CHECK(est[i].vel == Approx(1.7).epsilon(0.01));

  KalmanConfig warm = cfg;
  warm.init_from_first = true;
  const auto rts = kalman_rts_smooth(ramp, warm);
  CHECK(rts.front().vel == Approx(1.7).epsilon(1e-9));
  CHECK(rts.back().vel == Approx(1.7).epsilon(1e-9));
}

TEST_CASE("noise reduction against finite differences") {
  const double dt = 1e-3, noise = 1e-3;
  std::mt19937_64 rng(2);
  std::normal_distribution<double> n(0.0, noise);
  std::vector<double> z, v;
  for (int i = 0; i < 4000; ++i) {
    const double t = i * dt;
    z.push_back(0.05 * std::sin(2 * std::numbers::pi * 2 * t) + n(rng));
    v.push_back(0.05 * 2 * std::numbers::pi * 2 * std::cos(2 * std::numbers::pi * 2 * t));
  }
  const KalmanConfig cfg{50.0, noise * std::sqrt(dt), dt, false};
  const auto kf = kalman_smooth(z, cfg);
  const auto fd = finite_difference_velocity(z, dt);
  double e_kf = 0, e_fd = 0;
  for (std::size_t i = 500; i + 1 < z.size(); ++i) {
    e_kf += std::pow(kf[i].vel - v[i], 2);
    // The forward difference estimates the midpoint velocity.
    e_fd += std::pow(fd[i] - 0.05 * 4 * std::numbers::pi * std::cos(4 * std::numbers::pi * (i + 0.5) * dt), 2);
  }
  CHECK(std::sqrt(e_fd / e_kf) > 5.0);

  const auto rts = kalman_rts_smooth(z, cfg);
  double e_rts = 0;
  for (std::size_t i = 500; i + 500 < z.size(); ++i) e_rts += std::pow(rts[i].vel - v[i], 2);
  double e_kf_mid = 0;
  for (std::size_t i = 500; i + 500 < z.size(); ++i) e_kf_mid += std::pow(kf[i].vel - v[i], 2);
  CHECK(e_rts < e_kf_mid);

  const auto fd2 = finite_difference_velocity({0.0, 1.0, 3.0}, 0.5);
  CHECK(fd2 == std::vector<double>{2.0, 4.0, 4.0});
}
