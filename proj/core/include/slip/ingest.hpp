#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "slip/identification.hpp"
#include "slip/kalman.hpp"

namespace slip {

/// Column names looked up in the log header. An empty name marks the column
/// as absent.
struct ColumnMap {
  std::string time = "t_s";  // a missing time column falls back to "t_ms" in milliseconds
  std::string y = "y_m";
  std::string z = "z_m";
  std::string theta = "theta_rad";
  std::string torque = "tau_Nm";          // used when present
  std::string current = "motor_current";  // fallback when no torque column
  std::string event = "event";
  std::string phase = "phase";
};

enum class CurrentConversion {
  Divide,   // tau = current * G_r / tau_c
  Multiply  // tau = current * tau_c / G_r
};

struct IngestionConfig {
  double tau_c = 396.0;   // motor torque constant, in log current units per N m
  double G_r = 26.0;      // gear reduction
  CurrentConversion conversion = CurrentConversion::Divide;
  double ground_offset = 0.0;  // subtracted from z [m]
  double time_scale = 1.0;     // multiplies the time column into seconds (1e-3 for t_ms)
  double theta_scale = 1.0;    // multiplies the angle column into radians
  KalmanConfig kalman{50.0, 3.16e-5, 1e-3, true};
  bool smooth_backward = true;  // RTS pass after the causal filter
  ColumnMap columns;

  void validate() const;
};

/// Motor current to hip torque, with the sign normalized so that the stance
/// torque is propulsive (non-negative on average).
std::vector<double> current_to_torque(const std::vector<double>& current, const IngestionConfig& cfg);

struct IngestedStride {
  StrideRecord record;              // apex times and positions on the log's clock and origin
  std::vector<StrideLogRow> rows;   // apex-to-apex, smoothed velocities
  double t_touchdown = 0.0;
  double t_liftoff = 0.0;
};

/// Parses one stride log, smooths the velocities and extracts the apex pair,
/// touchdown angle and the ramp torque fitted over stance. Event rows are used
/// when present, and apex rows then supply the apex positions directly;
/// otherwise apexes are the interior maxima of the smoothed height on either
/// side of the first stance run in the phase column. Velocities always come
/// from the smoother. Throws MalformedFile or NoApexPair.
IngestedStride ingest_stride_log(std::istream& in, const IngestionConfig& cfg);
IngestedStride ingest_stride_file(const std::string& path, const IngestionConfig& cfg);

}  // namespace slip
