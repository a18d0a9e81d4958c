#include <cmath>
#include <numbers>
#include <sstream>

#include "doctest.h"
#include "slip/error.hpp"
#include "slip/ingest.hpp"

using namespace slip;
using doctest::Approx;

namespace {

constexpr double kDeg = std::numbers::pi / 180.0;

StrideLog nominal_log(double ground_offset = 0.0) {
  StrideOptions o;
  o.ground_offset = ground_offset;
  return simulate_stride({0.35 + ground_offset, 2.0, 0.0, 0.0}, 20 * kDeg, TorqueCommand::ramp(6.0), SystemParams{},
                         StanceBackend::Oracle, o);
}

std::string csv_of(const StrideLog& log) {
  std::ostringstream out;
  write_stride_csv(out, log);
  return out.str();
}

// Keeps the header and every row without an event marker.
std::string strip_events(const std::string& csv) {
  std::istringstream in(csv);
  std::ostringstream out;
  std::string line;
  std::getline(in, line);
  out << line << '\n';
  while (std::getline(in, line)) {
    if (line.back() == ',') out << line << '\n';
  }
  return out.str();
}

}  // namespace

TEST_CASE("round trip of an emitted stride") {
  const StrideLog log = nominal_log();
  std::istringstream in(csv_of(log));
  const IngestedStride got = ingest_stride_log(in, IngestionConfig{});
  const StrideRecord& r = got.record;
  CHECK(r.apex0.z_a == Approx(0.35).epsilon(1e-9));
  CHECK(r.apex0.y_dot_a == Approx(2.0).epsilon(1e-3));
  CHECK(r.apex0.t_a == 0.0);
  CHECK(r.apex1.z_a == Approx(log.outcome.next_apex.z_a).epsilon(1e-9));
  CHECK(r.apex1.y_a == Approx(log.outcome.next_apex.y_a).epsilon(1e-9));
  CHECK(r.apex1.t_a == Approx(log.outcome.t_apex).epsilon(1e-12));
  CHECK(r.apex1.y_dot_a == Approx(log.outcome.next_apex.y_dot_a).epsilon(0.01));
  CHECK(r.theta_td == Approx(20 * kDeg).epsilon(1e-9));
  CHECK(r.torque.tau_0 == Approx(6.0).epsilon(0.01));
  CHECK(r.torque.t_f == Approx(log.outcome.torque.t_f).epsilon(0.01));
  CHECK(got.t_touchdown == Approx(log.outcome.touchdown.t).epsilon(1e-12));
  CHECK(got.t_liftoff - got.t_touchdown == Approx(log.outcome.stance_duration).epsilon(1e-9));
  CHECK(got.rows.front().t == Approx(0.0).scale(1.0));
  CHECK(got.rows.back().t == Approx(log.outcome.t_apex));
}

TEST_CASE("apexes and stance without event rows") {
  // Three strides cropped from the first ascent to the last descent, so both
  // apexes around the middle stance are interior maxima.
  const SystemParams p;
  std::vector<StrideLog> strides{nominal_log()};
  for (int i = 0; i < 2; ++i) {
    strides.push_back(simulate_stride(strides.back().outcome.next_apex, 20 * kDeg, TorqueCommand::ramp(6.0), p));
  }
  const double from = strides[0].outcome.touchdown.t + strides[0].outcome.stance_duration + 0.01;
  const double to = strides[2].outcome.touchdown.t - 0.01;
  StrideLog joined;
  for (const StrideLog& s : strides) {
    for (const StrideLogRow& r : s.rows) {
      if (r.event != StrideEvent::None || r.t < from || r.t > to) continue;
      if (!joined.rows.empty() && r.t <= joined.rows.back().t + 1e-9) continue;
      joined.rows.push_back(r);
    }
  }
  std::istringstream in(csv_of(joined));
  const IngestedStride got = ingest_stride_log(in, IngestionConfig{});
  const StrideOutcome& middle = strides[1].outcome;
  CHECK(got.record.apex0.t_a == Approx(strides[0].outcome.t_apex).epsilon(1e-3));
  CHECK(got.record.apex0.z_a == Approx(strides[0].outcome.next_apex.z_a).epsilon(1e-4));
  CHECK(got.record.apex1.t_a == Approx(middle.t_apex).epsilon(1e-3));
  CHECK(got.record.apex1.z_a == Approx(middle.next_apex.z_a).epsilon(1e-4));
  CHECK(got.record.apex1.y_dot_a == Approx(middle.next_apex.y_dot_a).epsilon(0.01));
  // Stance edges are known to the sample period.
  CHECK(std::abs(got.t_touchdown - middle.touchdown.t) <= 1e-3);
  CHECK(got.record.theta_td == Approx(20 * kDeg).epsilon(0.02));
}

TEST_CASE("ground offset and time units") {
  const StrideLog raised = nominal_log(0.02);
  IngestionConfig cfg;
  cfg.ground_offset = 0.02;
  std::istringstream in(csv_of(raised));
  const IngestedStride got = ingest_stride_log(in, cfg);
  CHECK(got.record.apex0.z_a == Approx(0.35).epsilon(1e-9));
  CHECK(got.record.apex1.z_a == Approx(nominal_log().outcome.next_apex.z_a).epsilon(1e-9));

  // Milliseconds column.
  std::string ms = csv_of(nominal_log());
  std::istringstream src(ms);
  std::ostringstream dst;
  std::string line;
  std::getline(src, line);
  dst << "t_ms" << line.substr(3) << '\n';
  while (std::getline(src, line)) {
    const auto comma = line.find(',');
    dst << std::stod(line.substr(0, comma)) * 1e3 << line.substr(comma) << '\n';
  }
  std::istringstream ms_in(dst.str());
  const IngestedStride from_ms = ingest_stride_log(ms_in, IngestionConfig{});
  CHECK(from_ms.record.apex1.t_a == Approx(nominal_log().outcome.t_apex).epsilon(1e-6));
}

TEST_CASE("motor current") {
  IngestionConfig cfg;
  const auto tau = current_to_torque({396.0, 198.0, 0.0}, cfg);
  CHECK(tau[0] == Approx(26.0));
  CHECK(tau[1] == Approx(13.0));
  CHECK(tau[2] == 0.0);
  const auto flipped = current_to_torque({-396.0, -198.0}, cfg);
  CHECK(flipped[0] == Approx(26.0));
  cfg.conversion = CurrentConversion::Multiply;
  CHECK(current_to_torque({26.0}, cfg)[0] == Approx(396.0));

  // Logs with only a current column.
  std::string csv = csv_of(nominal_log());
  std::istringstream src(csv);
  std::ostringstream dst;
  std::string line;
  std::getline(src, line);
  const std::string header = line;
  dst << std::string(header).replace(header.find("tau_Nm"), 6, "motor_current") << '\n';
  while (std::getline(src, line)) dst << line << '\n';
  // The torque values are now read as current: amplitude scales by G_r / tau_c.
  std::istringstream in(dst.str());
  const IngestedStride got = ingest_stride_log(in, IngestionConfig{});
  CHECK(got.record.torque.tau_0 == Approx(6.0 * 26.0 / 396.0).epsilon(0.01));
}

TEST_CASE("malformed logs") {
  IngestionConfig cfg;
  std::istringstream empty("");
  CHECK_THROWS_AS(ingest_stride_log(empty, cfg), Error);

  std::istringstream no_z("t_s,y_m\n0,0\n0.001,0\n0.002,0\n");
  CHECK_THROWS_AS(ingest_stride_log(no_z, cfg), Error);

  std::istringstream backwards("t_s,y_m,z_m,theta_rad,tau_Nm\n0,0,0.3,0,0\n0.002,0,0.3,0,0\n0.001,0,0.3,0,0\n");
  CHECK_THROWS_AS(ingest_stride_log(backwards, cfg), Error);

  std::istringstream text("t_s,y_m,z_m,theta_rad,tau_Nm\n0,0,abc,0,0\n0.001,0,0.3,0,0\n0.002,0,0.3,0,0\n");
  CHECK_THROWS_AS(ingest_stride_log(text, cfg), Error);

  // A log of a single descent has no apex pair.
  std::ostringstream fall;
  fall << "t_s,y_m,z_m,theta_rad,tau_Nm,phase,event\n";
  for (int i = 0; i < 200; ++i) {
    const double t = i * 1e-3;
    fall << t << ',' << 2 * t << ',' << 0.35 - 0.5 * 11.42 * t * t << ",0.3,0," << (t < 0.1 ? "descent" : "stance")
         << ",\n";
  }
  std::istringstream fall_in(fall.str());
  try {
    ingest_stride_log(fall_in, cfg);
    FAIL("expected NoApexPair");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NoApexPair);
  }

  const StrideLog failed = simulate_stride({0.15, 1.0, 0.0, 0.0}, 0.2, TorqueCommand::ramp(0.0), SystemParams{});
  std::istringstream failed_in(csv_of(failed));
  CHECK_THROWS_AS(ingest_stride_log(failed_in, cfg), Error);

  CHECK_THROWS_AS(ingest_stride_file("/nonexistent/stride.csv", cfg), Error);
}

TEST_CASE("strided files without event rows use the phase column") {
  const StrideLog log = nominal_log();
  std::istringstream in(strip_events(csv_of(log)));
  // No apex events and the endpoints are the apexes: the series maxima sit on
  // the boundary, so no interior apex pair exists.
  CHECK_THROWS_AS(ingest_stride_log(in, IngestionConfig{}), Error);
}
