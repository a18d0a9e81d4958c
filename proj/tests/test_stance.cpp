#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "slip/error.hpp"
#include "slip/flight.hpp"
#include "slip/stance_analytic.hpp"
#include "slip/stance_oracle.hpp"

using namespace slip;
using doctest::Approx;

namespace {

constexpr double kDeg = std::numbers::pi / 180.0;

PolarStanceState touchdown(double z, double yd, double th_deg, const SystemParams& p = {}) {
  return descent_map({z, yd, 0.0, 0.0}, th_deg * kDeg, p, 0.0).state;
}

// Stance equations written out independently: returns (rho'', theta'').
std::array<double, 2> stance_accel(const PolarStanceState& s, const SystemParams& p, double tau) {
  const double m = p.m_b;
  const double rdd = s.rho * s.theta_dot * s.theta_dot - p.g * std::cos(s.theta) - p.k / m * (s.rho - p.rho_0) -
                     p.d / m * s.rho_dot;
  const double tdd = (p.g * s.rho * std::sin(s.theta) - tau / m - 2 * s.rho * s.rho_dot * s.theta_dot) /
                     (s.rho * s.rho);
  return {rdd, tdd};
}

}  // namespace

TEST_CASE("lift-off guard") {
  const SystemParams p;
  CHECK(liftoff_guard({p.rho_0, 0.0, 0.0, 0.0}, p) == 0.0);
  CHECK(liftoff_guard({p.rho_0 - 0.01, 0.0, 0.0, 0.0}, p) == Approx(46.96).epsilon(1e-12));
  SystemParams q = p;
  q.d = 0.0;
  CHECK(liftoff_guard({q.rho_0, 0.1, 3.0, 1.0}, q) == 0.0);
}

TEST_CASE("ground reaction force") {
  const SystemParams p;
  const GrfSample rest = grf_at({p.rho_0, 0.2, 0.0, 0.0}, p, 0.0);
  CHECK(rest.f_y == 0.0);
  CHECK(rest.f_z == 0.0);
  CHECK(rest.cop_offset == 0.0);

  const PolarStanceState compressed{0.18, 0.3, -0.4, -5.0};
  const GrfSample central = grf_at(compressed, p, 0.0);
  // Parallel to the leg, which points from the toe to the body along (-sin, cos).
  CHECK(central.f_y * std::cos(0.3) + central.f_z * std::sin(0.3) == Approx(0.0).scale(1.0).epsilon(1e-12));
  CHECK(std::abs(central.cop_offset) < 1e-12);

  // Newton: the leg force equals m (body acceleration) + m g z_hat.
  const PolarStanceState s{0.17, 0.1, 0.3, -8.0};
  const double tau = 6.0;
  const auto [rdd, tdd] = stance_accel(s, p, tau);
  const double st = std::sin(s.theta), ct = std::cos(s.theta);
  const double ydd = -(rdd * st + 2 * s.rho_dot * s.theta_dot * ct + s.rho * tdd * ct -
                       s.rho * s.theta_dot * s.theta_dot * st);
  const double zdd = rdd * ct - 2 * s.rho_dot * s.theta_dot * st - s.rho * tdd * st -
                     s.rho * s.theta_dot * s.theta_dot * ct;
  const GrfSample f = grf_at(s, p, tau);
  CHECK(f.f_y == Approx(p.m_b * ydd).epsilon(1e-9));
  CHECK(f.f_z == Approx(p.m_b * (zdd + p.g)).epsilon(1e-9));
}

TEST_CASE("oracle: lossless vertical bounce is symmetric") {
  SystemParams p;
  p.d = 0.0;
  const StanceTrajectory tr = integrate_stance({p.rho_0, 0.0, -1.5, 0.0}, p, RampTorque::none());
  CHECK(tr.liftoff().rho_dot == Approx(1.5).epsilon(1e-6));
  CHECK(tr.liftoff().theta == 0.0);
  CHECK(tr.has_bottom);
  CHECK(tr.t_liftoff == Approx(2 * tr.t_bottom).epsilon(1e-6));
}

TEST_CASE("oracle: step halving and torque cutoff") {
  const SystemParams p;
  const PolarStanceState td = touchdown(0.35, 2.0, 20.0, p);
  const RampTorque ramp{6.0, predicted_liftoff_time(td, p)};
  const StanceTrajectory a = integrate_stance(td, p, ramp, {1e-5, 2.0});
  const StanceTrajectory b = integrate_stance(td, p, ramp, {5e-6, 2.0});
  CHECK(std::abs(a.t_liftoff - b.t_liftoff) < 1e-8);
  CHECK(std::abs(a.liftoff().rho - b.liftoff().rho) < 1e-8);
  CHECK(std::abs(a.liftoff().theta - b.liftoff().theta) < 1e-8);
  CHECK(std::abs(a.liftoff().theta_dot - b.liftoff().theta_dot) < 1e-6);
  CHECK(liftoff_guard(a.liftoff(), p) == Approx(0.0).scale(1.0).epsilon(1e-8));
  CHECK(a.liftoff().rho_dot > 0.0);

  const RampTorque early{6.0, 0.5 * a.t_liftoff};
  CHECK(integrate_stance(td, p, early).tau_at_liftoff() == 0.0);
  CHECK(a.samples.front().tau == 6.0);
}

TEST_CASE("oracle: failure modes") {
  const SystemParams p;
  CHECK_THROWS_AS(integrate_stance({p.rho_0, 1.6, -1.0, 0.0}, p, RampTorque::none()), Error);
  CHECK_THROWS_AS(integrate_stance({p.rho_0, 0.2, -1.0, 0.0}, p, RampTorque::none(), {0.0, 1.0}), Error);
  try {
    integrate_stance({p.rho_0, 1.2, -0.5, 8.0}, p, RampTorque::none());
    FAIL("expected a fall");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Fall);
  }
}

TEST_CASE("oracle: energy and momentum audits") {
  SystemParams lossless;
  lossless.d = 0.0;
  const PolarStanceState td = touchdown(0.35, 2.0, 20.0, lossless);
  const EnergyLedger cons = stance_energy_audit(integrate_stance(td, lossless, RampTorque::none()), lossless);
  CHECK(std::abs(cons.e_mech_end - cons.e_mech_start) / cons.e_mech_start < 1e-6);

  const SystemParams p;
  const PolarStanceState td2 = touchdown(0.35, 2.0, 20.0, p);
  const EnergyLedger damped = stance_energy_audit(integrate_stance(td2, p, RampTorque::none()), p);
  CHECK(damped.e_mech_end < damped.e_mech_start);

  const StanceTrajectory tr = integrate_stance(td2, p, {6.0, predicted_liftoff_time(td2, p)});
  const EnergyLedger e = stance_energy_audit(tr, p);
  CHECK(std::abs(e.residual()) / e.e_mech_start < 1e-5);
  CHECK(e.w_torque > 0.0);
  const MomentumLedger m = stance_momentum_audit(tr, p);
  CHECK(m.l_end - m.l_start == Approx(m.impulse).epsilon(1e-6));
}

TEST_CASE("analytic: coefficients") {
  const SystemParams p;
  const PolarStanceState td{p.rho_0, 0.0, -1.5, 0.0};
  const StanceCoefficients c = stance_coefficients(td, p, 0.0);
  CHECK(c.omega_hat_0 == Approx(std::sqrt(4696.0 / 2.2)).epsilon(1e-14));
  CHECK(c.omega_hat_0 == c.omega_0);
  CHECK(c.zeta == Approx(9.87 / (2 * 2.2 * std::sqrt(4696.0 / 2.2))).epsilon(1e-14));
  CHECK(c.zeta == Approx(0.0486).epsilon(1e-3));

  SystemParams heavy = p;
  heavy.d = 400.0;
  CHECK_THROWS_AS(stance_coefficients(td, heavy, 0.0), Error);
}

TEST_CASE("analytic: boundary values at touchdown") {
  const SystemParams p;
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 200; ++i) {
    const PolarStanceState td{p.rho_0, (10 + 35 * u(rng)) * kDeg, -0.5 - 1.5 * u(rng), -2.0 - 10.0 * u(rng)};
    const StanceCoefficients c = stance_coefficients(td, p, p.m_b * td.rho * td.rho * td.theta_dot, true);
    const PolarStanceState s = analytic_stance_at(c, td, 0.0);
    CHECK(std::abs(s.rho - td.rho) < 1e-12);
    CHECK(s.theta == td.theta);
    CHECK(std::abs(s.rho_dot - td.rho_dot) < 1e-9);
    CHECK(c.t_lo > c.t_b);
    CHECK(std::abs(analytic_stance_at(c, td, c.t_b).rho_dot) < 1e-10);
  }
  const StanceCoefficients c = stance_coefficients({p.rho_0, 0.2, -1.0, -5.0}, p, -0.05);
  CHECK_THROWS_AS(analytic_stance_at(c, {p.rho_0, 0.2, -1.0, -5.0}, c.t_lo * 1.01), Error);
}

TEST_CASE("analytic: undamped vertical bounce timing") {
  SystemParams p;
  p.d = 0.0;
  const double v0 = -1.5;
  const StanceCoefficients c = stance_coefficients({p.rho_0, 0.0, v0, 0.0}, p, 0.0);
  const double w = std::sqrt(p.k / p.m_b);
  const double amp = p.g / (w * w);
  // rho - c = A cos(wt) + (v0 / w) sin(wt); the bottom is the first zero of the derivative with rho'' > 0.
  const double t_b = (std::numbers::pi + std::atan(v0 / (w * amp))) / w;
  CHECK(c.t_b == Approx(t_b).epsilon(1e-12));
  CHECK(c.t_lo == Approx(2 * t_b).epsilon(1e-12));

  SystemParams weightless = p;
  weightless.g = 1e-12;
  const StanceCoefficients q = stance_coefficients({p.rho_0, 0.0, v0, 0.0}, weightless, 0.0);
  CHECK(q.t_b == Approx(std::numbers::pi / (2 * w)).epsilon(1e-9));
}

TEST_CASE("analytic: agreement with the oracle") {
  const SystemParams p;
  for (double th : {10.0, 20.0, 30.0}) {
    for (double yd : {1.0, 2.0}) {
      const PolarStanceState td = touchdown(0.35, yd, th, p);
      const AnalyticStance a = analytic_stance_map(td, p, RampTorque::none());
      const StanceTrajectory o = integrate_stance(td, p, RampTorque::none());
      CHECK(std::abs(a.coefficients.t_b - o.t_bottom) / o.t_bottom < 0.05);
      CHECK(std::abs(a.t_lo - o.t_liftoff) / o.t_liftoff < 0.06);
      CHECK(std::abs(o.t_liftoff - 2 * o.t_bottom) / o.t_liftoff < 0.15);
    }
  }

  SystemParams stiff = p;
  stiff.k = 10000.0;
  const PolarStanceState td = touchdown(0.3, 1.0, 8.0, stiff);
  const AnalyticStance a = analytic_stance_map(td, stiff, RampTorque::none());
  const StanceTrajectory o = integrate_stance(td, stiff, RampTorque::none());
  for (const auto& smp : o.samples) {
    if (smp.t > a.t_lo) break;
    const double rho = analytic_stance_at(a.coefficients, td, smp.t).rho;
    CHECK(std::abs(rho - smp.state.rho) / smp.state.rho < 0.02);
  }
}

TEST_CASE("analytic: momentum corrections") {
  const SystemParams p;
  CHECK(momentum_corrections(p, RampTorque::none(), 0.15, 0.3, -0.2, 0.2).dp_tau == 0.0);
  CHECK(momentum_corrections(p, {6.0, 0.15}, 0.15, 0.3, -0.2, 0.2).dp_tau == Approx(0.3).epsilon(1e-14));
  // Stance average of the ramp impulse, integrated numerically.
  const RampTorque r{6.0, 0.1};
  const double avg = oracle::simpson(
      [&](double t) { return oracle::simpson([&](double s) { return ramp_torque_at(r, s); }, 0.0, t, 200); }, 0.0,
      0.15, 200) / 0.15;
  CHECK(momentum_corrections(p, r, 0.15, 0.3, -0.2, 0.2).dp_tau == Approx(avg).epsilon(1e-6));
  const double dp_g = p.m_b * p.g * 0.15 / 6 * (2 * p.rho_0 * std::sin(20 * kDeg) + p.rho_0 * std::sin(-15 * kDeg));
  CHECK(momentum_corrections(p, RampTorque::none(), 0.15, 20 * kDeg, -15 * kDeg, p.rho_0).dp_g ==
        Approx(dp_g).epsilon(1e-14));
}

TEST_CASE("analytic: stance map properties") {
  const SystemParams p;
  const PolarStanceState vertical{p.rho_0, 0.0, -1.5, 0.0};
  const AnalyticStance v = analytic_stance_map(vertical, p, RampTorque::none());
  CHECK(v.liftoff.theta == Approx(0.0).scale(1.0).epsilon(1e-15));
  // The radial motion is exactly linear here, so an integration of it is an oracle.
  const auto radial = [&](double, const oracle::State<2>& x) -> oracle::State<2> {
    return {x[1], -p.g - p.k / p.m_b * (x[0] - p.rho_0) - p.d / p.m_b * x[1]};
  };
  const auto x = oracle::rk4<2>(radial, {p.rho_0, -1.5}, 0.0, v.t_lo, 20000);
  CHECK(v.liftoff.rho == Approx(x[0]).epsilon(1e-10));
  CHECK(v.liftoff.rho_dot == Approx(x[1]).epsilon(1e-8));

  const PolarStanceState td = touchdown(0.35, 2.0, 20.0, p);
  const double t_pred = predicted_liftoff_time(td, p);
  const AnalyticStance free = analytic_stance_map(td, p, RampTorque::none());
  const AnalyticStance pushed = analytic_stance_map(td, p, {6.0, t_pred});
  CHECK(std::abs(pushed.liftoff.theta_dot) > std::abs(free.liftoff.theta_dot));
  const StanceTrajectory of = integrate_stance(td, p, RampTorque::none());
  const StanceTrajectory op = integrate_stance(td, p, {6.0, t_pred});
  CHECK(std::abs(op.liftoff().theta_dot) > std::abs(of.liftoff().theta_dot));
  CHECK(free.t_lo_uncorrected == Approx(t_pred));
  CHECK_THROWS_AS(analytic_stance_map(td, p, RampTorque::none(), {0, false}), Error);
}
