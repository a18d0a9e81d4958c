#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "slip/deadbeat.hpp"

namespace slip::lab {

/// Bad flag values or schedule text; reported with exit code 2.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

struct CommonArgs {
  std::string params_file;  // empty: reference parameters
  std::string out_dir = ".";
  std::uint64_t seed = 1;
  bool svg = false;
};

struct StrideArgs {
  double z0 = 0.35;          // [m]
  double y_dot0 = 2.0;       // [m/s]
  double theta_td_deg = 20.0;
  double tau0 = 0.0;         // [N m]
  std::string torque_mode = "ramp";  // ramp | constant | none
  std::optional<double> t_f;         // ramp cutoff [s]; default predicted lift-off
  std::string backend = "oracle";
  double step = 1e-5;        // oracle step [s]
  double sample_dt = 1e-3;   // CSV sampling [s]
  double ground_offset = 0.0;
};

struct IdentifyArgs {
  std::string input_dir;        // stride logs; empty: synthetic data
  std::size_t synthetic = 120;
  double noise = 1e-3;          // synthetic apex position noise [m]
  std::size_t folds = 10;
  std::string free = "k,d,g";
  std::string guess_file;       // empty: perturbed --params
  double guess_scale = 1.25;
  std::string backend = "analytic";
  double oracle_step = 2e-4;
  int threads = 1;
  int max_iterations = 3000;
  double tau_c = 396.0;
  double gear_ratio = 26.0;
  bool current_multiply = false;
  double ground_offset = 0.0;
};

struct ClosedLoopArgs {
  std::size_t strides = 50;
  double z_star = 0.35;
  double y_dot_star = 2.0;
  std::string schedule;       // "stride:z:ydot,..." overrides the constant goal
  std::string schedule_file;
  std::string plant = "oracle";
  std::optional<double> z0, y_dot0;  // default: the first goal
  bool joint = false;
};

struct GrfArgs {
  StrideArgs stride;
  std::string mode = "ramp";  // none | ramp | constant | all
};

/// Each command validates its arguments before touching the file system, then
/// writes its outputs into common.out_dir and a short report to log.
int cmd_stride(const CommonArgs& common, const StrideArgs& args, std::ostream& log);
int cmd_identify(const CommonArgs& common, const IdentifyArgs& args, std::ostream& log);
int cmd_closed_loop(const CommonArgs& common, const ClosedLoopArgs& args, std::ostream& log);
int cmd_grf(const CommonArgs& common, const GrfArgs& args, std::ostream& log);

/// "stride:z:ydot" entries separated by commas, semicolons or newlines;
/// '#' starts a comment. Throws UsageError.
std::vector<GoalChange> parse_schedule(const std::string& text);

}  // namespace slip::lab
