#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "doctest.h"
#include "slip/error.hpp"
#include "slip/model.hpp"

using namespace slip;
using doctest::Approx;

TEST_CASE("ramp torque profile") {
  const RampTorque r{6.0, 0.2};
  CHECK(ramp_torque_at(r, 0.0) == 6.0);
  CHECK(ramp_torque_at(r, 0.1) == Approx(3.0));
  CHECK(ramp_torque_at(r, 0.2) == Approx(0.0).epsilon(1e-15));
  CHECK(ramp_torque_at(r, 0.3) == 0.0);
  CHECK(ramp_torque_at(RampTorque::constant(2.5), 10.0) == 2.5);
}

TEST_CASE("polar to cartesian") {
  const CartesianState up = polar_to_cartesian({0.205, 0.0, 0.0, 0.0}, 0.0);
  CHECK(up.y == Approx(0.0));
  CHECK(up.z == Approx(0.205));
  const CartesianState tilted = polar_to_cartesian({0.205, std::numbers::pi / 6, 0.0, 0.0}, 0.0);
  CHECK(tilted.y == Approx(-0.1025).epsilon(1e-12));
  CHECK(tilted.z == Approx(0.205 * std::sqrt(3.0) / 2).epsilon(1e-12));
  CHECK(tilted.z == Approx(0.17754).epsilon(1e-4));
}

TEST_CASE("cartesian to polar") {
  const PolarStanceState s = cartesian_to_polar({0.0, 0.205, 0.0, 0.0}, 0.0);
  CHECK(s.rho == Approx(0.205));
  CHECK(s.theta == Approx(0.0));
  const PolarStanceState v = cartesian_to_polar({0.0, 0.205, 1.0, 0.0}, 0.0);
  CHECK(v.rho_dot == Approx(0.0));
  CHECK(v.theta_dot == Approx(-1.0 / 0.205).epsilon(1e-12));
  CHECK_THROWS_AS(cartesian_to_polar({0.0, 0.0, 0.0, 0.0}, 0.0), Error);
}

TEST_CASE("polar and cartesian maps are inverse") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int i = 0; i < 200; ++i) {
    const PolarStanceState s{0.15 + 0.05 * u(rng), 1.2 * u(rng), 2.0 * u(rng), 10.0 * u(rng)};
    const double toe = u(rng);
    const PolarStanceState back = cartesian_to_polar(polar_to_cartesian(s, toe), toe);
    CHECK(back.rho == Approx(s.rho).epsilon(1e-12));
    CHECK(back.theta == Approx(s.theta).epsilon(1e-12));
    CHECK(back.rho_dot == Approx(s.rho_dot).epsilon(1e-12));
    CHECK(back.theta_dot == Approx(s.theta_dot).epsilon(1e-12));
  }
}

TEST_CASE("boom gravity correction") {
  CHECK(boom_corrected_gravity({1.0, 0.0, 2.22, 9.81}) == Approx(9.81));
  const BoomParams b{1.0, 0.39, 2.22, 9.81};
  // Rod of mass m pivoting at its base with a tip mass M: the tip sees
  // g0 (M + m/2) / (M + m/3).
  const double expected = 9.81 * (2.22 + 0.39 / 2) / (2.22 + 0.39 / 3);
  CHECK(boom_corrected_gravity(b) == Approx(expected).epsilon(1e-12));
  CHECK(boom_corrected_gravity(b) == Approx(10.08).epsilon(2e-3));
}

TEST_CASE("parameter validation and files") {
  SystemParams p;
  CHECK_NOTHROW(p.validate());
  p.k = -1.0;
  CHECK_THROWS_AS(p.validate(), Error);

  std::ostringstream out;
  write_params(out, SystemParams::reference());
  CHECK(parse_params(out.str()) == SystemParams::reference());
  CHECK(parse_params("# hopper\n" + out.str() + "\n").k == 4696.0);
  CHECK_THROWS_AS(parse_params("k = 1\n"), Error);
  CHECK_THROWS_AS(parse_params(out.str() + "unknown = 3\n"), Error);
  CHECK_THROWS_AS(load_params("/nonexistent/robot.params"), Error);
}

TEST_CASE("collision scale") {
  const SystemParams p;
  CHECK(p.collision_scale() == Approx(2.20 / 2.23).epsilon(1e-15));
}
