#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <ostream>
#include <sstream>

#include "slip/error.hpp"
#include "slip/identification.hpp"
#include "slip/ingest.hpp"
#include "slip/return_map.hpp"
#include "svg.hpp"

namespace slip::lab {

namespace fs = std::filesystem;

namespace {

constexpr double kDeg = std::numbers::pi / 180.0;

SystemParams load(const CommonArgs& c) {
  return c.params_file.empty() ? SystemParams::reference() : load_params(c.params_file);
}

StanceBackend backend_from(const std::string& name, const char* flag) {
  if (name == "oracle") return StanceBackend::Oracle;
  if (name == "analytic") return StanceBackend::Analytic;
  throw UsageError(std::string(flag) + " must be 'oracle' or 'analytic', got '" + name + "'");
}

void require(bool ok, const std::string& what) {
  if (!ok) throw UsageError(what);
}

fs::path prepare_out(const CommonArgs& c) {
  fs::path dir(c.out_dir);
  fs::create_directories(dir);
  return dir;
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::MalformedFile, "cannot write " + path.string());
  out.precision(10);
  return out;
}

void check_written(std::ofstream& out, const fs::path& path) {
  out.close();
  if (!out) throw Error(ErrorKind::MalformedFile, "failed writing " + path.string());
}

void validate_stride(const StrideArgs& a) {
  require(std::abs(a.theta_td_deg) < 90.0, "--theta-td must lie strictly between -90 and 90 degrees");
  require(a.z0 > 0.0, "--z0 must be > 0");
  require(std::isfinite(a.y_dot0) && std::isfinite(a.tau0), "--ydot0 and --tau0 must be finite");
  require(a.step > 0.0 && a.sample_dt > 0.0, "--step and --dt must be > 0");
  require(!a.t_f || *a.t_f > 0.0, "--tf must be > 0");
  require(a.torque_mode == "ramp" || a.torque_mode == "constant" || a.torque_mode == "none",
          "--torque-mode must be ramp, constant or none");
  backend_from(a.backend, "--backend");
}

TorqueCommand command_for(const StrideArgs& a, const std::string& mode) {
  if (mode == "none") return TorqueCommand::ramp(0.0);
  if (mode == "constant") return TorqueCommand::constant(a.tau0);
  return a.t_f ? TorqueCommand::ramp(a.tau0, *a.t_f) : TorqueCommand::ramp(a.tau0);
}

StrideOptions stride_options(const StrideArgs& a) {
  StrideOptions o;
  o.ground_offset = a.ground_offset;
  o.oracle.step = a.step;
  return o;
}

// GRF of a logged stance row, reconstructed from the Cartesian state about the toe.
GrfSample row_grf(const StrideLogRow& r, double toe_y, double ground, const SystemParams& p) {
  const double dy = r.state.y - toe_y;
  const double dz = r.state.z - ground;
  PolarStanceState s;
  s.rho = std::hypot(dy, dz);
  s.theta = r.theta;
  s.theta_dot = r.theta_dot;
  s.rho_dot = (dy * r.state.y_dot + dz * r.state.z_dot) / s.rho;
  return grf_at(s, p, r.tau);
}

std::vector<Segment> force_lines(const std::vector<std::pair<CartesianState, GrfSample>>& pts, double toe_y,
                                 double ground, std::size_t count) {
  std::vector<Segment> out;
  if (pts.empty()) return out;
  // Same vertical-force floor as summarize_grf: weak contacts have unstable intercepts.
  double peak = 0.0;
  for (const auto& pt : pts) peak = std::max(peak, pt.second.f_z);
  const double floor = GrfWindows{}.min_vertical * peak;
  const std::size_t every = std::max<std::size_t>(1, pts.size() / std::max<std::size_t>(1, count));
  for (std::size_t i = 0; i < pts.size(); i += every) {
    const auto& [c, g] = pts[i];
    if (!std::isfinite(g.cop_offset) || !(g.f_z > floor)) continue;
    out.push_back({c.y, c.z, toe_y + g.cop_offset, ground});
  }
  return out;
}

void write_stride_svg(const fs::path& path, const StrideLog& log, const SystemParams& p) {
  std::vector<double> t, y, z, yd, zd;
  std::vector<Marker> marks;
  std::vector<std::pair<CartesianState, GrfSample>> stance;
  for (const auto& r : log.rows) {
    t.push_back(r.t);
    y.push_back(r.state.y);
    z.push_back(r.state.z);
    yd.push_back(r.state.y_dot);
    zd.push_back(r.state.z_dot);
    if (r.event != StrideEvent::None) marks.push_back({r.t, std::string(to_string(r.event))});
    if (r.phase == StridePhase::Stance && log.outcome.status != StrideStatus::NoTouchdown) {
      stance.emplace_back(r.state, row_grf(r, log.outcome.touchdown.toe_y, log.ground_offset, p));
    }
  }
  std::vector<Panel> panels(5);
  panels[0] = {"apex-to-apex stride", "t [s]", "z [m]", {{"", t, z}}, marks, {}, false};
  panels[1] = {"", "t [s]", "y [m]", {{"", t, y}}, marks, {}, false};
  panels[2] = {"", "t [s]", "z' [m/s]", {{"", t, zd}}, marks, {}, false};
  panels[3] = {"", "t [s]", "y' [m/s]", {{"", t, yd}}, marks, {}, false};
  panels[4] = {"body path and ground reaction force lines", "y [m]", "z [m]", {{"", y, z}}, {},
               force_lines(stance, log.outcome.touchdown.toe_y, log.ground_offset, 25), true};
  fs::path tmp = path;
  std::ofstream out = open_out(tmp);
  write_svg(out, panels, 720.0, 190.0);
  check_written(out, tmp);
}

std::string fmt(double v) {
  std::ostringstream s;
  s.precision(10);
  s << v;
  return s.str();
}

// Stance trajectory for the GRF command, sampled from either backend.
struct StanceRun {
  Touchdown td;
  RampTorque torque;
  StanceTrajectory traj;
};

StanceRun run_stance(const StrideArgs& a, const std::string& mode, const SystemParams& p) {
  const ApexState apex{a.z0, a.y_dot0, 0.0, 0.0};
  StanceRun run;
  run.td = descent_map(apex, a.theta_td_deg * kDeg, p, a.ground_offset);
  const TorqueCommand cmd = command_for(a, mode);
  const bool predict = cmd.mode == TorqueMode::Ramp && !cmd.t_f;
  run.torque = cmd.resolve(predict ? predicted_liftoff_time(run.td.state, p) : 0.0);
  if (backend_from(a.backend, "--backend") == StanceBackend::Oracle) {
    run.traj = integrate_stance(run.td.state, p, run.torque, {a.step, 2.0});
    return run;
  }
  const AnalyticStance sol = analytic_stance_map(run.td.state, p, run.torque);
  const int n = std::max(2, static_cast<int>(std::ceil(sol.t_lo / a.step)));
  for (int i = 0; i <= n; ++i) {
    const double ts = sol.t_lo * i / n;
    run.traj.samples.push_back({ts, analytic_stance_at(sol.coefficients, run.td.state, ts),
                                ramp_torque_at(run.torque, ts)});
  }
  run.traj.step = sol.t_lo / n;
  run.traj.t_liftoff = sol.t_lo;
  run.traj.t_bottom = sol.coefficients.t_b;
  run.traj.has_bottom = true;
  return run;
}

ParamMask parse_free(const std::string& list) {
  ParamMask mask;
  std::stringstream ss(list);
  std::string name;
  while (std::getline(ss, name, ',')) {
    if (name.empty()) continue;
    const auto p = param_from_string(name);
    require(p.has_value(), "--free: unknown parameter '" + name + "'");
    mask.set(*p);
  }
  require(!mask.empty(), "--free must name at least one parameter");
  return mask;
}

void write_dataset_csv(std::ostream& out, const StrideDataset& ds) {
  out << "tag,z0_m,ydot0_mps,y0_m,t0_s,theta_td_rad,tau_0_Nm,t_f_s,z1_m,ydot1_mps,y1_m,t1_s\n";
  for (const auto& r : ds) {
    out << r.tag << ',' << r.apex0.z_a << ',' << r.apex0.y_dot_a << ',' << r.apex0.y_a << ',' << r.apex0.t_a
        << ',' << r.theta_td << ',' << r.torque.tau_0 << ',' << r.torque.t_f << ',' << r.apex1.z_a << ','
        << r.apex1.y_dot_a << ',' << r.apex1.y_a << ',' << r.apex1.t_a << '\n';
  }
}

}  // namespace

std::vector<GoalChange> parse_schedule(const std::string& text) {
  std::vector<GoalChange> out;
  std::string normalized = text;
  for (char& c : normalized) {
    if (c == ',' || c == ';') c = '\n';
  }
  std::stringstream lines(normalized);
  std::string line;
  while (std::getline(lines, line)) {
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line.erase(0, line.find_first_not_of(" \t\r"));
    line.erase(line.find_last_not_of(" \t\r") + 1);
    if (line.empty()) continue;
    std::stringstream entry(line);
    std::string a, b, c;
    if (!std::getline(entry, a, ':') || !std::getline(entry, b, ':') || !std::getline(entry, c)) {
      throw UsageError("schedule entry '" + line + "' is not stride:z:ydot");
    }
    try {
      std::size_t used = 0;
      const long stride = std::stol(a, &used);
      if (used != a.size() || stride < 0) throw std::invalid_argument("stride");
      GoalChange g;
      g.stride = static_cast<std::size_t>(stride);
      g.goal.z_star = std::stod(b);
      g.goal.y_dot_star = std::stod(c);
      if (!(g.goal.z_star > 0.0)) throw std::invalid_argument("height");
      if (!out.empty() && g.stride <= out.back().stride) throw std::invalid_argument("order");
      out.push_back(g);
    } catch (const std::exception&) {
      throw UsageError("schedule entry '" + line + "' is invalid (strides ascending, z > 0)");
    }
  }
  if (out.empty()) throw UsageError("schedule is empty");
  if (out.front().stride != 0) throw UsageError("schedule must start at stride 0");
  return out;
}

int cmd_stride(const CommonArgs& common, const StrideArgs& a, std::ostream& log) {
  validate_stride(a);
  const SystemParams p = load(common);
  const StanceBackend backend = backend_from(a.backend, "--backend");
  const ApexState apex{a.z0, a.y_dot0, 0.0, 0.0};
  const StrideLog stride = simulate_stride(apex, a.theta_td_deg * kDeg, command_for(a, a.torque_mode), p,
                                           backend, stride_options(a), a.sample_dt);
  const StrideOutcome& o = stride.outcome;

  const fs::path dir = prepare_out(common);
  {
    const fs::path path = dir / "stride.csv";
    std::ofstream out = open_out(path);
    write_stride_csv(out, stride);
    check_written(out, path);
  }
  {
    const fs::path path = dir / "stride_summary.txt";
    std::ofstream out = open_out(path);
    out << "status = " << to_string(o.status) << "\n";
    if (!o.ok()) out << "reason = " << o.reason << "\n";
    out << "backend = " << to_string(backend) << "\nseed = " << common.seed << "\n";
    out << "z0_m = " << a.z0 << "\nydot0_mps = " << a.y_dot0 << "\ntheta_td_deg = " << a.theta_td_deg << "\n";
    out << "tau_0_Nm = " << o.torque.tau_0 << "\nt_f_s = " << o.torque.t_f << "\n";
    if (o.ok()) {
      out << "t_touchdown_s = " << o.touchdown.t << "\nstance_duration_s = " << o.stance_duration
          << "\nz_next_m = " << o.next_apex.z_a << "\nydot_next_mps = " << o.next_apex.y_dot_a
          << "\ny_next_m = " << o.next_apex.y_a << "\nt_next_s = " << o.next_apex.t_a << "\n";
    }
    check_written(out, path);
  }
  if (common.svg) write_stride_svg(dir / "stride.svg", stride, p);

  log << "stride " << to_string(o.status);
  if (o.ok()) log << ": next apex z = " << fmt(o.next_apex.z_a) << " m, y' = " << fmt(o.next_apex.y_dot_a) << " m/s";
  else log << ": " << o.reason;
  log << "\nwrote " << (dir / "stride.csv").string() << "\n";
  return kExitOk;
}

int cmd_grf(const CommonArgs& common, const GrfArgs& args, std::ostream& log) {
  StrideArgs a = args.stride;
  validate_stride(a);
  std::vector<std::string> modes;
  if (args.mode == "all") modes = {"none", "ramp", "constant"};
  else if (args.mode == "none" || args.mode == "ramp" || args.mode == "constant") modes = {args.mode};
  else throw UsageError("--torque-mode must be none, ramp, constant or all");
  const SystemParams p = load(common);

  std::vector<StanceRun> runs;
  for (const auto& m : modes) runs.push_back(run_stance(a, m, p));

  const fs::path dir = prepare_out(common);
  const fs::path summary_path = dir / "grf_summary.txt";
  std::ofstream summary = open_out(summary_path);
  summary << "seed = " << common.seed << "\nbackend = " << a.backend << "\n";
  std::vector<Panel> panels;
  for (std::size_t i = 0; i < modes.size(); ++i) {
    const StanceRun& run = runs[i];
    const fs::path path = dir / ("grf_" + modes[i] + ".csv");
    std::ofstream out = open_out(path);
    out << "t_s,y_m,z_m,rho_m,theta_rad,tau_Nm,f_y_N,f_z_N,cop_offset_m\n";
    std::vector<std::pair<CartesianState, GrfSample>> pts;
    std::vector<double> ts, cop;
    double peak = 0.0;
    for (const auto& s : run.traj.samples) peak = std::max(peak, grf_at(s.state, p, s.tau).f_z);
    for (const auto& s : run.traj.samples) {
      const GrfSample g = grf_at(s.state, p, s.tau);
      CartesianState c = polar_to_cartesian(s.state, run.td.toe_y);
      c.z += a.ground_offset;
      out << s.t << ',' << c.y << ',' << c.z << ',' << s.state.rho << ',' << s.state.theta << ',' << s.tau << ','
          << g.f_y << ',' << g.f_z << ',' << g.cop_offset << '\n';
      pts.emplace_back(c, g);
      ts.push_back(s.t);
      cop.push_back(g.f_z > GrfWindows{}.min_vertical * peak ? g.cop_offset : std::nan(""));
    }
    check_written(out, path);

    const GrfSummary gs = summarize_grf(run.traj, p);
    const std::string& m = modes[i];
    summary << m << ".tau_0_Nm = " << run.torque.tau_0 << "\n"
            << m << ".t_f_s = " << run.torque.t_f << "\n"
            << m << ".stance_duration_s = " << run.traj.t_liftoff << "\n"
            << m << ".early_cop_offset_m = " << gs.early_cop << "\n"
            << m << ".late_cop_offset_m = " << gs.late_cop << "\n"
            << m << ".max_abs_cop_offset_m = " << gs.max_abs_cop << "\n";
    log << m << ": early cop " << fmt(gs.early_cop) << " m, late cop " << fmt(gs.late_cop) << " m\n";

    std::vector<double> y, z;
    for (const auto& [c, g] : pts) {
      y.push_back(c.y);
      z.push_back(c.z);
    }
    Panel lines{"force lines, torque mode " + m, "y [m]", "z [m]", {{"body", y, z}}, {}, {}, true};
    lines.segments = force_lines(pts, run.td.toe_y, a.ground_offset, 30);
    lines.series.push_back({"toe", {run.td.toe_y}, {a.ground_offset}, "#000000", false, true});
    panels.push_back(lines);
    panels.push_back({"line-of-action offset where f_z exceeds 5% of its peak", "t since touchdown [s]", "cop offset [m]", {{"", ts, cop}}, {}, {}, false});
  }
  check_written(summary, summary_path);
  if (common.svg) {
    const fs::path path = dir / "grf.svg";
    std::ofstream out = open_out(path);
    write_svg(out, panels, 720.0, 230.0);
    check_written(out, path);
  }
  log << "wrote " << summary_path.string() << "\n";
  return kExitOk;
}

int cmd_identify(const CommonArgs& common, const IdentifyArgs& a, std::ostream& log) {
  const ParamMask free = parse_free(a.free);
  const StanceBackend backend = backend_from(a.backend, "--backend");
  require(a.folds >= 2, "--folds must be >= 2");
  require(a.noise >= 0.0, "--noise must be >= 0");
  require(a.guess_scale > 0.0, "--guess-scale must be > 0");
  require(a.oracle_step > 0.0, "--oracle-step must be > 0");
  require(a.threads >= 1, "--threads must be >= 1");
  require(!a.input_dir.empty() || a.synthetic >= a.folds, "--synthetic must be at least --folds");

  const SystemParams p = load(common);
  StrideDataset ds;
  std::vector<std::pair<std::string, std::string>> rejected;
  if (a.input_dir.empty()) {
    SyntheticOptions so;
    so.count = a.synthetic;
    so.seed = common.seed;
    so.position_noise = a.noise;
    ds = synthesize_dataset(p, so);
  } else {
    require(fs::is_directory(a.input_dir), "--input must be a directory");
    std::vector<fs::path> files;
    for (const auto& e : fs::directory_iterator(a.input_dir)) {
      if (e.is_regular_file() && e.path().extension() == ".csv") files.push_back(e.path());
    }
    std::sort(files.begin(), files.end());
    IngestionConfig ic;
    ic.tau_c = a.tau_c;
    ic.G_r = a.gear_ratio;
    ic.conversion = a.current_multiply ? CurrentConversion::Multiply : CurrentConversion::Divide;
    ic.ground_offset = a.ground_offset;
    for (const auto& f : files) {
      try {
        StrideRecord r = ingest_stride_file(f.string(), ic).record;
        r.tag = f.filename().string();
        ds.push_back(std::move(r));
      } catch (const Error& e) {
        rejected.emplace_back(f.filename().string(), e.what());
      }
    }
  }

  SystemParams guess = p;
  if (!a.guess_file.empty()) {
    guess = load_params(a.guess_file);
  } else {
    // Alternate up and down so the search starts away from the generating values.
    bool up = true;
    for (Param q : free.list()) {
      set(guess, q, get(guess, q) * (up ? a.guess_scale : 1.0 / a.guess_scale));
      up = !up;
    }
  }

  IdentificationOptions io;
  io.backend = backend;
  io.stride.oracle.step = a.oracle_step;
  io.optimizer.max_iterations = a.max_iterations;
  CrossValidationOptions cvo;
  cvo.folds = a.folds;
  cvo.seed = common.seed;
  cvo.threads = a.threads;
  const CrossValidation cv = kfold_cross_validate(ds, guess, free, cvo, io);

  const fs::path dir = prepare_out(common);
  {
    const fs::path path = dir / "cv_folds.csv";
    std::ofstream out = open_out(path);
    write_cv_csv(out, cv, free);
    check_written(out, path);
  }
  {
    const fs::path path = dir / "dataset.csv";
    std::ofstream out = open_out(path);
    write_dataset_csv(out, ds);
    check_written(out, path);
  }
  {
    const fs::path path = dir / "cv_summary.txt";
    std::ofstream out = open_out(path);
    out << "strides = " << ds.size() << "\nbackend = " << to_string(backend) << "\n";
    out << "source = " << (a.input_dir.empty() ? "synthetic" : a.input_dir) << "\n";
    for (Param q : free.list()) out << "guess." << to_string(q) << " = " << get(guess, q) << "\n";
    write_cv_summary(out, cv, free);
    for (const auto& [file, why] : rejected) out << "rejected." << file << " = " << why << "\n";
    check_written(out, path);
  }
  if (common.svg) {
    std::vector<double> fold, train, test;
    for (std::size_t i = 0; i < cv.folds.size(); ++i) {
      fold.push_back(static_cast<double>(i));
      train.push_back(cv.folds[i].train.e_p);
      test.push_back(cv.folds[i].test.e_p);
    }
    Panel pe{"position error per fold", "fold", "e_p [%]", {}, {}, {}, false};
    pe.series.push_back({"train", fold, train, "#1f77b4", false, true});
    pe.series.push_back({"test", fold, test, "#d62728", true, true});
    const fs::path path = dir / "cv.svg";
    std::ofstream out = open_out(path);
    write_svg(out, {pe});
    check_written(out, path);
  }

  log << ds.size() << " strides, " << cv.folds.size() << " folds";
  if (!rejected.empty()) log << ", " << rejected.size() << " logs rejected";
  log << "\n";
  for (Param q : free.list()) {
    log << "  " << to_string(q) << " = " << fmt(get(cv.param_mean, q)) << " +- " << fmt(get(cv.param_std, q))
        << "\n";
  }
  log << "  test e_p/e_v/e_t = " << fmt(cv.test_mean.e_p) << " / " << fmt(cv.test_mean.e_v) << " / "
      << fmt(cv.test_mean.e_t) << " %\n";
  return kExitOk;
}

int cmd_closed_loop(const CommonArgs& common, const ClosedLoopArgs& a, std::ostream& log) {
  require(a.strides >= 1, "--strides must be >= 1");
  require(a.schedule.empty() || a.schedule_file.empty(), "--schedule and --schedule-file are exclusive");
  std::vector<GoalChange> schedule;
  if (!a.schedule_file.empty()) {
    std::ifstream in(a.schedule_file);
    require(static_cast<bool>(in), "cannot read schedule file " + a.schedule_file);
    std::stringstream text;
    text << in.rdbuf();
    schedule = parse_schedule(text.str());
  } else if (!a.schedule.empty()) {
    schedule = parse_schedule(a.schedule);
  } else {
    require(a.z_star > 0.0, "--z-star must be > 0");
    schedule = {{0, {a.z_star, a.y_dot_star}}};
  }
  ClosedLoopOptions opts;
  opts.plant = backend_from(a.plant, "--plant");
  opts.controller.joint_search = a.joint;
  const SystemParams p = load(common);
  const ApexState apex0{a.z0.value_or(schedule.front().goal.z_star),
                        a.y_dot0.value_or(schedule.front().goal.y_dot_star), 0.0, 0.0};
  require(apex0.z_a > 0.0, "--z0 must be > 0");

  const RunLog run = run_closed_loop(apex0, schedule, p, a.strides, opts);

  const fs::path dir = prepare_out(common);
  {
    const fs::path path = dir / "run.csv";
    std::ofstream out = open_out(path);
    write_run_csv(out, run);
    check_written(out, path);
  }
  double worst_tail = 0.0;
  {
    const fs::path path = dir / "run_summary.txt";
    std::ofstream out = open_out(path);
    out << "status = " << run.status << "\nplant = " << a.plant << "\nseed = " << common.seed << "\n";
    out << "strides_completed = " << run.strides.size() << "\n";
    const std::size_t tail = std::min<std::size_t>(10, run.strides.size());
    double sum_z = 0.0, sum_v = 0.0;
    for (std::size_t i = run.strides.size() - tail; i < run.strides.size(); ++i) {
      const RunStride& s = run.strides[i];
      if (!s.outcome.ok()) continue;
      const double ez = std::abs(s.outcome.next_apex.z_a - s.goal.z_star) / s.goal.z_star;
      sum_z += ez;
      sum_v += std::abs(s.outcome.next_apex.y_dot_a - s.goal.y_dot_star);
      worst_tail = std::max(worst_tail, ez);
    }
    if (tail > 0) {
      out << "tail_mean_height_error_rel = " << sum_z / static_cast<double>(tail) << "\n";
      out << "tail_mean_speed_error_mps = " << sum_v / static_cast<double>(tail) << "\n";
    }
    check_written(out, path);
  }
  if (common.svg) {
    std::vector<double> k, z, zs, v, vs;
    for (const auto& s : run.strides) {
      if (!s.outcome.ok()) continue;
      k.push_back(static_cast<double>(s.index + 1));
      z.push_back(s.outcome.next_apex.z_a);
      zs.push_back(s.goal.z_star);
      v.push_back(s.outcome.next_apex.y_dot_a);
      vs.push_back(s.goal.y_dot_star);
    }
    Panel pz{"apex height", "stride", "z_a [m]", {}, {}, {}, false};
    pz.series.push_back({"apex", k, z, "#1f77b4", false, true});
    pz.series.push_back({"goal", k, zs, "#d62728", true, false});
    Panel pv{"apex horizontal velocity", "stride", "y'_a [m/s]", {}, {}, {}, false};
    pv.series.push_back({"apex", k, v, "#1f77b4", false, true});
    pv.series.push_back({"goal", k, vs, "#d62728", true, false});
    const fs::path path = dir / "run.svg";
    std::ofstream out = open_out(path);
    write_svg(out, {pz, pv});
    check_written(out, path);
  }
  log << "closed loop " << run.status << " after " << run.strides.size() << " strides";
  if (!run.strides.empty()) log << ", worst recent height error " << fmt(100.0 * worst_tail) << " %";
  log << "\nwrote " << (dir / "run.csv").string() << "\n";
  return kExitOk;
}

}  // namespace slip::lab
