#include "slip/return_map.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>

#include "slip/error.hpp"

namespace slip {

std::string_view to_string(StanceBackend b) noexcept {
  return b == StanceBackend::Oracle ? "oracle" : "analytic";
}

std::string_view to_string(StrideStatus s) noexcept {
  switch (s) {
    case StrideStatus::Success: return "Success";
    case StrideStatus::Fall: return "Fall";
    case StrideStatus::NoTouchdown: return "NoTouchdown";
    case StrideStatus::NoLiftoff: return "NoLiftoff";
  }
  return "Unknown";
}

std::string_view to_string(StridePhase p) noexcept {
  switch (p) {
    case StridePhase::Descent: return "descent";
    case StridePhase::Stance: return "stance";
    case StridePhase::Ascent: return "ascent";
  }
  return "";
}

std::string_view to_string(StrideEvent e) noexcept {
  switch (e) {
    case StrideEvent::None: return "";
    case StrideEvent::Apex: return "apex";
    case StrideEvent::Touchdown: return "touchdown";
    case StrideEvent::Bottom: return "bottom";
    case StrideEvent::Liftoff: return "liftoff";
  }
  return "";
}

RampTorque TorqueCommand::resolve(double t_lo_pred) const {
  if (mode == TorqueMode::Constant) return RampTorque::constant(tau_0);
  return {tau_0, t_f.value_or(t_lo_pred)};
}

CartesianState liftoff_collision(const CartesianState& pre, const SystemParams& p) {
  const double scale = p.collision_scale();
  return {pre.y, pre.z, pre.y_dot * scale, pre.z_dot * scale};
}

namespace {

struct StanceCapture {
  std::optional<StanceTrajectory> oracle;
  std::optional<AnalyticStance> analytic;
};

StrideStatus status_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NoTouchdown:
    case ErrorKind::DegenerateGeometry: return StrideStatus::NoTouchdown;
    case ErrorKind::NoLiftoff:
    case ErrorKind::NoLiftoffSolution:
    case ErrorKind::Overdamped:
    case ErrorKind::NoBottom: return StrideStatus::NoLiftoff;
    default: return StrideStatus::Fall;
  }
}

bool finite(const ApexState& a) {
  return std::isfinite(a.z_a) && std::isfinite(a.y_dot_a) && std::isfinite(a.y_a) &&
         std::isfinite(a.t_a);
}

StrideOutcome run_stride(const ApexState& apex, double theta_td, const TorqueCommand& cmd,
                         const SystemParams& p, StanceBackend backend, const StrideOptions& opts,
                         StanceCapture* capture) {
  StrideOutcome out;
  auto fail = [&out](StrideStatus s, std::string why) {
    out.status = s;
    out.reason = std::move(why);
    return out;
  };
  if (!(std::abs(theta_td) < std::numbers::pi / 2)) {
    return fail(StrideStatus::Fall, "touchdown angle outside (-pi/2, pi/2)");
  }

  try {
    out.touchdown = descent_map(apex, theta_td, p, opts.ground_offset);
  } catch (const Error& e) {
    return fail(status_for(e.kind()) == StrideStatus::Fall ? StrideStatus::NoTouchdown
                                                            : status_for(e.kind()),
                e.what());
  }
  const PolarStanceState& td = out.touchdown.state;

  const bool needs_prediction = cmd.mode == TorqueMode::Ramp && !cmd.t_f.has_value();
  double t_pred = 0.0;
  if (needs_prediction) {
    try {
      t_pred = predicted_liftoff_time(td, p, opts.analytic.clamp_liftoff);
    } catch (const Error& e) {
      return fail(StrideStatus::NoLiftoff, std::string("torque schedule: ") + e.what());
    }
  }
  out.torque = cmd.resolve(t_pred);

  try {
    if (backend == StanceBackend::Oracle) {
      StanceTrajectory traj = integrate_stance(td, p, out.torque, opts.oracle);
      out.liftoff = traj.liftoff();
      out.stance_duration = traj.t_liftoff;
      out.t_bottom = traj.t_bottom;
      if (capture) capture->oracle = std::move(traj);
    } else {
      AnalyticStance sol = analytic_stance_map(td, p, out.torque, opts.analytic);
      out.liftoff = sol.liftoff;
      out.stance_duration = sol.t_lo;
      out.t_bottom = sol.coefficients.t_b;
      if (capture) capture->analytic = sol;
    }
  } catch (const Error& e) {
    return fail(status_for(e.kind()), e.what());
  }
  if (!(out.liftoff.rho > 0.0) || !(std::abs(out.liftoff.theta) < std::numbers::pi / 2)) {
    return fail(StrideStatus::Fall, "invalid lift-off configuration");
  }

  out.liftoff_pre = polar_to_cartesian(out.liftoff, out.touchdown.toe_y);
  out.liftoff_pre.z += opts.ground_offset;
  out.liftoff_post = liftoff_collision(out.liftoff_pre, p);
  if (!(out.liftoff_post.z_dot > 0.0)) {
    return fail(StrideStatus::Fall, "post-collision vertical velocity is not positive");
  }
  const FlightEvent ev = apex_event(out.liftoff_post, p);
  out.next_apex = {ev.state.z, ev.state.y_dot, ev.state.y,
                   out.touchdown.t + out.stance_duration + ev.t};
  out.t_apex = out.next_apex.t_a;
  if (!finite(out.next_apex)) return fail(StrideStatus::Fall, "non-finite apex state");
  return out;
}

PolarStanceState interpolate(const StanceTrajectory& traj, double t) {
  const auto& s = traj.samples;
  auto it = std::lower_bound(s.begin(), s.end(), t,
                             [](const StanceSample& a, double v) { return a.t < v; });
  if (it == s.begin()) return s.front().state;
  if (it == s.end()) return s.back().state;
  const auto& b = *it;
  const auto& a = *(it - 1);
  const double w = (t - a.t) / (b.t - a.t);
  auto lerp = [w](double x, double y) { return x + w * (y - x); };
  return {lerp(a.state.rho, b.state.rho), lerp(a.state.theta, b.state.theta),
          lerp(a.state.rho_dot, b.state.rho_dot), lerp(a.state.theta_dot, b.state.theta_dot)};
}

}  // namespace

StrideOutcome apex_return_map(const ApexState& apex, double theta_td, const TorqueCommand& torque,
                              const SystemParams& p, StanceBackend backend,
                              const StrideOptions& opts) {
  return run_stride(apex, theta_td, torque, p, backend, opts, nullptr);
}

StrideLog simulate_stride(const ApexState& apex, double theta_td, const TorqueCommand& torque,
                          const SystemParams& p, StanceBackend backend, const StrideOptions& opts,
                          double sample_dt) {
  if (!(sample_dt > 0.0)) throw Error(ErrorKind::InvalidArgument, "sample_dt must be > 0");
  StrideLog log;
  log.apex0 = apex;
  log.theta_td = theta_td;
  log.command = torque;
  log.backend = backend;
  log.ground_offset = opts.ground_offset;

  StanceCapture capture;
  log.outcome = run_stride(apex, theta_td, torque, p, backend, opts, &capture);
  const StrideOutcome& out = log.outcome;
  const bool reached_touchdown = out.status != StrideStatus::NoTouchdown;
  const bool complete = out.ok();

  const double t0 = apex.t_a;
  const double t_td = reached_touchdown ? out.touchdown.t : t0;
  const double t_lo = t_td + out.stance_duration;
  const double t_end = complete ? out.t_apex : t_td;
  const CartesianState apex_cart = apex.cartesian();

  auto descent_row = [&](double t) {
    StrideLogRow r;
    r.t = t;
    r.state = flight_state_at(apex_cart, p, t - t0);
    r.theta = theta_td;
    r.phase = StridePhase::Descent;
    return r;
  };
  auto stance_row = [&](double t) {
    const double ts = std::clamp(t - t_td, 0.0, out.stance_duration);
    const PolarStanceState s = capture.oracle ? interpolate(*capture.oracle, ts)
                                              : analytic_stance_at(capture.analytic->coefficients,
                                                                   out.touchdown.state, ts);
    StrideLogRow r;
    r.t = t;
    r.state = polar_to_cartesian(s, out.touchdown.toe_y);
    r.state.z += opts.ground_offset;
    r.theta = s.theta;
    r.theta_dot = s.theta_dot;
    r.tau = ramp_torque_at(out.torque, ts);
    r.phase = StridePhase::Stance;
    return r;
  };
  auto ascent_row = [&](double t) {
    StrideLogRow r;
    r.t = t;
    r.state = flight_state_at(out.liftoff_post, p, t - t_lo);
    r.theta = out.liftoff.theta;
    r.phase = StridePhase::Ascent;
    return r;
  };
  auto row_at = [&](double t) {
    if (t < t_td || !reached_touchdown) return descent_row(t);
    if (t < t_lo) return stance_row(t);
    return ascent_row(t);
  };

  std::vector<StrideLogRow> events;
  {
    StrideLogRow r = descent_row(t0);
    r.state.z_dot = 0.0;
    r.event = StrideEvent::Apex;
    events.push_back(r);
  }
  if (reached_touchdown) {
    StrideLogRow r = descent_row(t_td);
    r.state = out.touchdown.cartesian;
    r.event = StrideEvent::Touchdown;
    events.push_back(r);
  }
  if (complete) {
    StrideLogRow bottom = stance_row(t_td + out.t_bottom);
    bottom.event = StrideEvent::Bottom;
    if (out.t_bottom > 0.0 && out.t_bottom < out.stance_duration) events.push_back(bottom);
    StrideLogRow lo;
    lo.t = t_lo;
    lo.state = out.liftoff_pre;
    lo.theta = out.liftoff.theta;
    lo.theta_dot = out.liftoff.theta_dot;
    lo.tau = ramp_torque_at(out.torque, out.stance_duration);
    lo.phase = StridePhase::Stance;
    lo.event = StrideEvent::Liftoff;
    events.push_back(lo);
    StrideLogRow a = ascent_row(out.t_apex);
    a.state.z_dot = 0.0;
    a.event = StrideEvent::Apex;
    events.push_back(a);
  }

  constexpr double kCoincide = 1e-9;
  const auto first = static_cast<long long>(std::ceil(t0 / sample_dt - 1e-9));
  std::size_t next_event = 0;
  for (long long i = first;; ++i) {
    const double t = static_cast<double>(i) * sample_dt;
    if (t > t_end + kCoincide) break;
    while (next_event < events.size() && events[next_event].t <= t + kCoincide) {
      log.rows.push_back(events[next_event]);
      ++next_event;
    }
    if (!log.rows.empty() && t <= log.rows.back().t + kCoincide) continue;
    log.rows.push_back(row_at(t));
  }
  while (next_event < events.size()) log.rows.push_back(events[next_event++]);
  return log;
}

void write_stride_csv(std::ostream& out, const StrideLog& log) {
  const auto old = out.precision(12);
  out << "t_s,y_m,z_m,ydot_mps,zdot_mps,theta_rad,thetadot_radps,tau_Nm,phase,event\n";
  for (const auto& r : log.rows) {
    out << r.t << ',' << r.state.y << ',' << r.state.z << ',' << r.state.y_dot << ','
        << r.state.z_dot << ',' << r.theta << ',' << r.theta_dot << ',' << r.tau << ','
        << to_string(r.phase) << ',' << to_string(r.event) << '\n';
  }
  out.precision(old);
}

}  // namespace slip
