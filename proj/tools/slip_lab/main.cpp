#include <iostream>
#include <thread>

#include "CLI11.hpp"
#include "commands.hpp"
#include "slip/error.hpp"

using namespace slip::lab;

namespace {

void add_common(CLI::App* cmd, CommonArgs& c) {
  cmd->add_option("--params", c.params_file, "Parameter file (key = value); defaults to the reference hopper")
      ->check(CLI::ExistingFile);
  cmd->add_option("--out", c.out_dir, "Output directory")->capture_default_str();
  cmd->add_option("--seed", c.seed, "Random seed")->capture_default_str();
  cmd->add_flag("--svg", c.svg, "Also write SVG plots");
}

void add_stride(CLI::App* cmd, StrideArgs& s) {
  cmd->add_option("--z0", s.z0, "Initial apex height [m]")->capture_default_str();
  cmd->add_option("--ydot0", s.y_dot0, "Initial apex horizontal velocity [m/s]")->capture_default_str();
  cmd->add_option("--theta-td", s.theta_td_deg, "Touchdown leg angle [deg], positive behind the toe")
      ->capture_default_str();
  cmd->add_option("--tau0", s.tau0, "Hip torque amplitude [N m]")->capture_default_str();
  cmd->add_option("--tf", s.t_f, "Ramp cutoff [s]; defaults to the predicted lift-off time");
  cmd->add_option("--backend", s.backend, "Stance model: oracle or analytic")->capture_default_str();
  cmd->add_option("--step", s.step, "Integrator step [s]")->capture_default_str();
  cmd->add_option("--dt", s.sample_dt, "Output sampling interval [s]")->capture_default_str();
  cmd->add_option("--ground-offset", s.ground_offset, "Ground height [m]")->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"slip-lab: torque-driven dissipative SLIP hopper experiments"};
  app.require_subcommand(1);

  CommonArgs common;

  StrideArgs stride;
  auto* c_stride = app.add_subcommand("stride", "Simulate one apex-to-apex stride and export its log");
  add_common(c_stride, common);
  add_stride(c_stride, stride);
  c_stride->add_option("--torque-mode", stride.torque_mode, "ramp, constant or none")->capture_default_str();

  GrfArgs grf;
  auto* c_grf = app.add_subcommand("grf", "Ground reaction force lines over one stance");
  add_common(c_grf, common);
  add_stride(c_grf, grf.stride);
  c_grf->add_option("--torque-mode", grf.mode, "none, ramp, constant or all")->capture_default_str();

  IdentifyArgs ident;
  ident.threads = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  auto* c_id = app.add_subcommand("identify", "K-fold cross-validated parameter identification");
  add_common(c_id, common);
  c_id->add_option("--input", ident.input_dir, "Directory of stride log CSVs (default: synthetic data)");
  c_id->add_option("--synthetic", ident.synthetic, "Number of synthetic strides")->capture_default_str();
  c_id->add_option("--noise", ident.noise, "Synthetic apex position noise std [m]")->capture_default_str();
  c_id->add_option("--folds", ident.folds, "Cross-validation folds")->capture_default_str();
  c_id->add_option("--free", ident.free, "Comma-separated free parameters")->capture_default_str();
  c_id->add_option("--guess", ident.guess_file, "Initial parameter file")->check(CLI::ExistingFile);
  c_id->add_option("--guess-scale", ident.guess_scale, "Perturbation factor for the default guess")
      ->capture_default_str();
  c_id->add_option("--backend", ident.backend, "Prediction model: analytic or oracle")->capture_default_str();
  c_id->add_option("--oracle-step", ident.oracle_step, "Integrator step for the oracle backend [s]")
      ->capture_default_str();
  c_id->add_option("--threads", ident.threads, "Fold-level worker threads")->capture_default_str();
  c_id->add_option("--max-iterations", ident.max_iterations, "Simplex iteration cap")->capture_default_str();
  c_id->add_option("--tau-c", ident.tau_c, "Motor torque constant of the logs")->capture_default_str();
  c_id->add_option("--gear-ratio", ident.gear_ratio, "Gear reduction of the logs")->capture_default_str();
  c_id->add_flag("--current-multiply", ident.current_multiply, "Convert current as current * tau_c / G_r");
  c_id->add_option("--ground-offset", ident.ground_offset, "Ground height subtracted from logged z [m]")
      ->capture_default_str();

  ClosedLoopArgs loop;
  auto* c_loop = app.add_subcommand("closed-loop", "Deadbeat apex control over many strides");
  add_common(c_loop, common);
  c_loop->add_option("--strides", loop.strides, "Number of strides")->capture_default_str();
  c_loop->add_option("--z-star", loop.z_star, "Apex height goal [m]")->capture_default_str();
  c_loop->add_option("--ydot-star", loop.y_dot_star, "Apex velocity goal [m/s]")->capture_default_str();
  c_loop->add_option("--schedule", loop.schedule, "Goal schedule 'stride:z:ydot,...'");
  c_loop->add_option("--schedule-file", loop.schedule_file, "Goal schedule file")->check(CLI::ExistingFile);
  c_loop->add_option("--plant", loop.plant, "Plant model: oracle or analytic")->capture_default_str();
  c_loop->add_option("--z0", loop.z0, "Initial apex height [m] (default: first goal)");
  c_loop->add_option("--ydot0", loop.y_dot0, "Initial apex velocity [m/s] (default: first goal)");
  c_loop->add_flag("--joint", loop.joint, "Search torque and angle jointly (experimental)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (c_stride->parsed()) return cmd_stride(common, stride, std::cout);
    if (c_grf->parsed()) return cmd_grf(common, grf, std::cout);
    if (c_id->parsed()) return cmd_identify(common, ident, std::cout);
    if (c_loop->parsed()) return cmd_closed_loop(common, loop, std::cout);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n\n" << app.get_subcommands().front()->help();
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitUsage;
}
