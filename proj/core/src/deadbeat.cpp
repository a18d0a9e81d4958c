#include "slip/deadbeat.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>

#include "slip/error.hpp"
#include "slip/nelder_mead.hpp"

namespace slip {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

template <typename F>
double simpson(F f, double a, double b, int nodes) {
  if (nodes < 3 || nodes % 2 == 0) {
    throw Error(ErrorKind::InvalidArgument, "Simpson quadrature needs an odd node count >= 3");
  }
  if (b <= a) return 0.0;
  const int intervals = nodes - 1;
  const double h = (b - a) / intervals;
  double sum = f(a) + f(b);
  for (int i = 1; i < intervals; ++i) sum += (i % 2 == 1 ? 4.0 : 2.0) * f(a + i * h);
  return sum * h / 3.0;
}

double radial_rate(const StanceCoefficients& c, double t) {
  return -c.omega_hat_0 * c.M_amp * std::exp(-c.decay() * t) *
         std::cos(c.omega_d * t + c.phi_1 + c.phi_2);
}

double angular_rate(const StanceCoefficients& c, double t) {
  return c.X - 2.0 * c.omega * c.M_amp * std::exp(-c.decay() * t) * std::cos(c.omega_d * t + c.phi_1) /
                   c.rho_0;
}

// Maps an unbounded coordinate into [lo, hi] by reflection at the bounds.
double fold_back(double u, double lo, double hi) {
  const double w = hi - lo;
  double r = std::fmod(u - lo, 2.0 * w);
  if (r < 0.0) r += 2.0 * w;
  return lo + (r <= w ? r : 2.0 * w - r);
}

double apex_energy(double z, double y_dot, double m, double g) {
  return 0.5 * m * y_dot * y_dot + m * g * z;
}

double kinetic(const CartesianState& s, double m) {
  return 0.5 * m * (s.y_dot * s.y_dot + s.z_dot * s.z_dot);
}

template <typename F>
auto at_stage(const char* stage, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const Error& e) {
    throw Error(e.kind(), std::string(stage) + ": " + e.what());
  }
}

}  // namespace

double damping_loss(const StanceCoefficients& c, const SystemParams& p, int nodes) {
  if (p.d == 0.0) return 0.0;
  return simpson(
      [&](double t) {
        const double v = radial_rate(c, t);
        return p.d * v * v;
      },
      0.0, c.t_lo, nodes);
}

double damping_loss_closed_form(const StanceCoefficients& c, const SystemParams& p) {
  // d M^2 w^2 int_0^T e^{-2 s t} (1 + cos(2 w_d t + 2 psi)) / 2 dt with psi = phi_1 + phi_2.
  if (p.d == 0.0) return 0.0;
  const double s2 = 2.0 * c.decay();
  const double wd2 = 2.0 * c.omega_d;
  const double psi2 = 2.0 * (c.phi_1 + c.phi_2);
  const double T = c.t_lo;
  const double e = std::exp(-s2 * T);
  const double mean_part = (1.0 - e) / s2;
  // int_0^T e^{-a t} cos(b t + c) dt = [e^{-a t}(b sin(b t + c) - a cos(b t + c))]_0^T / (a^2 + b^2)
  auto prim = [&](double t) {
    return std::exp(-s2 * t) * (wd2 * std::sin(wd2 * t + psi2) - s2 * std::cos(wd2 * t + psi2)) /
           (s2 * s2 + wd2 * wd2);
  };
  const double osc_part = prim(T) - prim(0.0);
  return p.d * c.M_amp * c.M_amp * c.omega_hat_0 * c.omega_hat_0 * 0.5 * (mean_part + osc_part);
}

double spring_residual_energy(double rho_lo, const SystemParams& p) {
  const double x = rho_lo - p.rho_0;
  return 0.5 * p.k * x * x;
}

double required_torque_energy(const ApexState& apex, const ApexGoal& goal, const SystemParams& p,
                              double e_loss) {
  const double m = p.stance_mass();
  return 0.5 * m * (goal.y_dot_star * goal.y_dot_star - apex.y_dot_a * apex.y_dot_a) +
         m * p.g * (goal.z_star - apex.z_a) + e_loss;
}

Tau0Solution solve_tau0(double e_tau, const PolarStanceState& td, const SystemParams& p, double t_lo,
                        const Tau0Options& opts) {
  if (!(t_lo > 0.0)) throw Error(ErrorKind::InvalidArgument, "t_lo must be > 0");
  if (opts.max_passes < 1) throw Error(ErrorKind::InvalidArgument, "max_passes must be >= 1");

  // Sweep integral for the stance predicted under tau_0.
  auto sweep = [&](double tau0) {
    const AnalyticStance st =
        analytic_stance_map(td, p, RampTorque{tau0, t_lo}, AnalyticOptions{2, opts.clamp_liftoff});
    const double end = std::min(t_lo, st.t_lo);
    const double I = simpson(
        [&](double t) { return (1.0 - t / t_lo) * std::abs(angular_rate(st.coefficients, t)); }, 0.0,
        end, opts.nodes);
    if (!(std::abs(I) >= 1e-12)) {
      throw Error(ErrorKind::ZeroSweep, "no angular sweep to inject energy into");
    }
    return I;
  };

  Tau0Solution sol;
  if (e_tau == 0.0) return sol;
  // Each pass is the linear solve tau' = e_tau / I(tau). The plain iteration
  // oscillates when the sweep depends strongly on tau_0, so passes after the
  // first take a secant step on the residual h(tau) = e_tau / I(tau) - tau.
  double x_prev = 0.0;
  double I = sweep(0.0);
  double h_prev = e_tau / I;
  double x = h_prev;
  for (int pass = 1; pass <= opts.max_passes; ++pass) {
    I = sweep(x);
    const double h = e_tau / I - x;
    if (std::abs(h) <= opts.tolerance) {
      sol.tau_0 = x + h;
      sol.passes = pass;
      sol.sweep = I;
      return sol;
    }
    double next = x - h * (x - x_prev) / (h - h_prev);
    if (!std::isfinite(next) || h == h_prev) next = x + 0.5 * h;
    x_prev = x;
    h_prev = h;
    x = next;
  }
  throw Error(ErrorKind::NonConvergent, "tau_0 fixed-point iteration did not settle");
}

double touchdown_objective(const ApexState& apex, const ApexGoal& goal, double tau_0, double theta,
                           const SystemParams& p, const StrideOptions& stride) {
  const StrideOutcome o =
      apex_return_map(apex, theta, TorqueCommand::ramp(tau_0), p, StanceBackend::Analytic, stride);
  if (!o.ok()) return kInf;
  const double e = goal.z_star - o.next_apex.z_a;
  return e * e;
}

TouchdownSolution solve_touchdown_angle(const ApexState& apex, const ApexGoal& goal, double tau_0,
                                        const SystemParams& p, const TouchdownSearchOptions& opts) {
  const double lo = opts.theta_min;
  const double hi = opts.theta_max;
  if (!(lo < hi) || !(lo > -std::numbers::pi / 2) || !(hi < std::numbers::pi / 2)) {
    throw Error(ErrorKind::InvalidArgument, "touchdown angle bounds must satisfy -pi/2 < min < max < pi/2");
  }
  if (opts.probes < 32) throw Error(ErrorKind::InvalidArgument, "at least 32 probe angles are required");

  auto J = [&](double th) { return touchdown_objective(apex, goal, tau_0, th, p, opts.stride); };

  const int n = opts.probes;
  const double spacing = (hi - lo) / (n - 1);
  std::vector<double> th(n), f(n);
  bool any = false;
  for (int i = 0; i < n; ++i) {
    th[i] = lo + i * spacing;
    f[i] = J(th[i]);
    any = any || std::isfinite(f[i]);
  }
  if (!any) throw Error(ErrorKind::NoMinimum, "every probed touchdown angle fails");

  struct Candidate {
    double theta, value;
  };
  std::vector<Candidate> found;
  for (int i = 0; i < n; ++i) {
    if (std::isfinite(f[i])) found.push_back({th[i], f[i]});
  }
  for (int i = 0; i < n; ++i) {
    const double left = i > 0 ? f[i - 1] : kInf;
    const double right = i + 1 < n ? f[i + 1] : kInf;
    if (!std::isfinite(f[i]) || f[i] > left || f[i] > right) continue;
    NelderMeadOptions nm;
    nm.x_tol = opts.x_tol;
    nm.f_tol = 0.0;
    nm.max_iterations = 200;
    nm.initial_step = {0.5 * spacing};
    const NelderMeadResult r = nelder_mead(
        [&](const std::vector<double>& u) { return J(fold_back(u[0], lo, hi)); }, {th[i]}, nm);
    found.push_back({fold_back(r.x[0], lo, hi), r.f});
  }

  auto better = [&opts](const Candidate& a, const Candidate& b) {
    if (std::abs(a.value - b.value) <= opts.tie_tolerance) {
      if (std::abs(a.theta) != std::abs(b.theta)) return std::abs(a.theta) < std::abs(b.theta);
      return a.theta > b.theta;
    }
    return a.value < b.value;
  };
  // Ties are judged against the overall minimum so that the preference for a
  // small angle cannot chain across values drifting apart.
  const double best_value =
      std::min_element(found.begin(), found.end(), [](const Candidate& a, const Candidate& b) {
        return a.value < b.value;
      })->value;
  Candidate best{0.0, kInf};
  for (const Candidate& c : found) {
    if (c.value - best_value > opts.tie_tolerance) continue;
    if (!std::isfinite(best.value) || better(c, best)) best = c;
  }

  TouchdownSolution sol;
  sol.theta_td = best.theta;
  sol.objective = best.value;
  const StrideOutcome o = apex_return_map(apex, best.theta, TorqueCommand::ramp(tau_0), p,
                                          StanceBackend::Analytic, opts.stride);
  sol.z_next = o.next_apex.z_a;
  sol.y_dot_next = o.next_apex.y_dot_a;
  return sol;
}

DeadbeatResult deadbeat_step(const ApexState& apex, const ApexGoal& goal, const SystemParams& p,
                             const DeadbeatOptions& opts, const std::optional<ControlAction>& previous) {
  if (opts.outer_passes < 1) throw Error(ErrorKind::InvalidArgument, "outer_passes must be >= 1");
  const double m = p.stance_mass();
  const double offset = opts.angle.stride.ground_offset;
  DeadbeatResult res;

  double tau = opts.fixed_tau0.value_or(previous ? previous->tau_0 : 0.0);
  // The previous angle seeds the prediction unless the leg could not reach
  // the ground from this apex at that angle.
  const bool reuse = previous && apex.z_a - offset > p.rho_0 * std::cos(previous->theta_td);
  double theta = reuse ? previous->theta_td
                       : at_stage("initial touchdown angle", [&] {
                           return solve_touchdown_angle(apex, goal, tau, p, opts.angle).theta_td;
                         });
  res.trace.theta_guess = theta;

  TouchdownSolution angle;
  for (int pass = 0; pass < opts.outer_passes; ++pass) {
    const Touchdown td = at_stage("descent prediction", [&] { return descent_map(apex, theta, p, offset); });
    const double t_lo_pred =
        at_stage("lift-off prediction", [&] { return predicted_liftoff_time(td.state, p); });
    const AnalyticStance st = at_stage("stance prediction", [&] {
      return analytic_stance_map(td.state, p, RampTorque{tau, t_lo_pred});
    });

    EnergyBudget b;
    b.e_d = opts.closed_form_damping ? damping_loss_closed_form(st.coefficients, p)
                                     : damping_loss(st.coefficients, p);
    b.e_k = spring_residual_energy(st.liftoff.rho, p);
    b.e_loss = b.e_d + b.e_k;
    if (opts.transition_losses) {
      const double descent = apex_energy(apex.z_a, apex.y_dot_a, m, p.g) -
                             (kinetic(td.cartesian, m) + m * p.g * td.cartesian.z);
      CartesianState pre = polar_to_cartesian(st.liftoff, td.toe_y);
      pre.z += offset;
      const CartesianState post = liftoff_collision(pre, p);
      double ascent = 0.0;
      if (post.z_dot > 0.0) {
        const FlightEvent top = apex_event(post, p);
        ascent = kinetic(post, m) + m * p.g * post.z - apex_energy(top.state.z, top.state.y_dot, m, p.g);
      }
      b.e_transition = descent + (kinetic(pre, m) - kinetic(post, m)) + ascent;
    }
    b.e_tau = required_torque_energy(apex, goal, p, b.e_loss) + b.e_transition;
    res.budget = b;
    res.trace.t_lo_pred = t_lo_pred;
    res.trace.rho_lo = st.liftoff.rho;

    if (opts.fixed_tau0) {
      tau = *opts.fixed_tau0;
    } else {
      const Tau0Solution ts = at_stage("torque magnitude", [&] {
        return solve_tau0(b.e_tau, td.state, p, t_lo_pred, opts.tau);
      });
      tau = std::clamp(ts.tau_0, opts.tau_min, opts.tau_max);
      res.trace.tau_passes = ts.passes;
    }
    angle = at_stage("touchdown angle", [&] {
      return solve_touchdown_angle(apex, goal, tau, p, opts.angle);
    });
    theta = angle.theta_td;
  }

  if (opts.joint_search) {
    auto cost = [&](const std::vector<double>& x) {
      const double th = fold_back(x[1], opts.angle.theta_min, opts.angle.theta_max);
      const StrideOutcome o = apex_return_map(apex, th, TorqueCommand::ramp(x[0]), p,
                                              StanceBackend::Analytic, opts.angle.stride);
      if (!o.ok()) return kInf;
      const double ez = (o.next_apex.z_a - goal.z_star) / goal.z_star;
      const double ev = (o.next_apex.y_dot_a - goal.y_dot_star) / std::max(std::abs(goal.y_dot_star), 1e-3);
      return ez * ez + ev * ev;
    };
    NelderMeadOptions nm;
    nm.x_tol = 1e-9;
    nm.f_tol = 1e-16;
    nm.max_iterations = 400;
    nm.initial_step = {0.5, 0.02};
    const NelderMeadResult r = nelder_mead(cost, {tau, theta}, nm);
    tau = std::clamp(r.x[0], opts.tau_min, opts.tau_max);
    theta = fold_back(r.x[1], opts.angle.theta_min, opts.angle.theta_max);
  }

  const Touchdown td = at_stage("cutoff prediction", [&] { return descent_map(apex, theta, p, offset); });
  res.action.tau_0 = tau;
  res.action.theta_td = theta;
  res.action.t_f = at_stage("cutoff prediction", [&] { return predicted_liftoff_time(td.state, p); });

  const StrideOutcome pred = apex_return_map(apex, theta, TorqueCommand::ramp(tau, res.action.t_f), p,
                                             StanceBackend::Analytic, opts.angle.stride);
  res.trace.objective = pred.ok() ? (goal.z_star - pred.next_apex.z_a) * (goal.z_star - pred.next_apex.z_a)
                                  : kInf;
  res.trace.z_pred = pred.next_apex.z_a;
  res.trace.y_dot_pred = pred.next_apex.y_dot_a;
  return res;
}

ApexGoal goal_at(const std::vector<GoalChange>& schedule, std::size_t stride) {
  const GoalChange* active = nullptr;
  for (const auto& g : schedule) {
    if (g.stride <= stride && (!active || g.stride >= active->stride)) active = &g;
  }
  if (!active) throw Error(ErrorKind::InvalidArgument, "no goal scheduled for this stride");
  return active->goal;
}

RunLog run_closed_loop(const ApexState& apex0, const std::vector<GoalChange>& schedule,
                       const SystemParams& p, std::size_t n, const ClosedLoopOptions& opts) {
  if (n == 0) throw Error(ErrorKind::InvalidArgument, "run needs at least one stride");
  (void)goal_at(schedule, 0);
  const SystemParams& plant = opts.plant_params ? *opts.plant_params : p;

  RunLog log;
  ApexState apex = apex0;
  std::optional<ControlAction> previous;
  for (std::size_t i = 0; i < n; ++i) {
    RunStride row;
    row.index = i;
    row.apex = apex;
    row.goal = goal_at(schedule, i);
    try {
      const DeadbeatResult r = deadbeat_step(apex, row.goal, p, opts.controller, previous);
      row.action = r.action;
      row.budget = r.budget;
    } catch (const Error& e) {
      row.error = e.what();
      row.outcome.status = StrideStatus::Fall;
      row.outcome.reason = "controller: " + row.error;
      log.status = "stride " + std::to_string(i) + ": controller: " + row.error;
      log.strides.push_back(std::move(row));
      return log;
    }
    row.outcome = apex_return_map(apex, row.action.theta_td,
                                  TorqueCommand::ramp(row.action.tau_0, row.action.t_f), plant,
                                  opts.plant, opts.plant_stride);
    const bool ok = row.outcome.ok();
    if (ok) {
      apex = row.outcome.next_apex;
      previous = row.action;
    } else {
      log.status = "stride " + std::to_string(i) + ": " + std::string(to_string(row.outcome.status)) +
                   ": " + row.outcome.reason;
    }
    log.strides.push_back(std::move(row));
    if (!ok) return log;
  }
  log.completed = true;
  log.status = "completed";
  return log;
}

void write_run_csv(std::ostream& out, const RunLog& log) {
  const auto old = out.precision(10);
  out << "stride,z_a_m,y_dot_a_mps,z_star_m,y_dot_star_mps,tau_0_Nm,theta_td_deg,t_lo_s,status\n";
  for (const auto& r : log.strides) {
    const bool ok = r.outcome.ok();
    const double nan = std::numeric_limits<double>::quiet_NaN();
    out << r.index << ',' << (ok ? r.outcome.next_apex.z_a : nan) << ','
        << (ok ? r.outcome.next_apex.y_dot_a : nan) << ',' << r.goal.z_star << ',' << r.goal.y_dot_star
        << ',' << r.action.tau_0 << ',' << r.action.theta_td * 180.0 / std::numbers::pi << ','
        << r.outcome.stance_duration << ',' << to_string(r.outcome.status) << '\n';
  }
  out.precision(old);
}

}  // namespace slip
