#include "slip/ingest.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <limits>
#include <map>
#include <sstream>

#include "slip/error.hpp"

namespace slip {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(trim(cell));
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double to_number(const std::string& s, std::size_t line) {
  const char* begin = s.c_str();
  char* end = nullptr;
  const double v = std::strtod(begin, &end);
  if (s.empty() || end != begin + s.size()) {
    throw Error(ErrorKind::MalformedFile, "line " + std::to_string(line) + ": bad number '" + s + "'");
  }
  return v;
}

struct Table {
  std::vector<double> t, y, z, theta, torque, current;
  std::vector<std::string> event, phase;
  bool has_theta = false, has_torque = false, has_current = false, has_event = false, has_phase = false;
};

Table read_table(std::istream& in, const IngestionConfig& cfg) {
  std::string line;
  std::size_t line_no = 0;
  std::vector<std::string> header;
  while (std::getline(in, line)) {
    ++line_no;
    if (!trim(line).empty()) {
      header = split(line);
      break;
    }
  }
  if (header.empty()) throw Error(ErrorKind::MalformedFile, "missing header row");

  std::map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < header.size(); ++i) index[header[i]] = i;
  auto find = [&index](const std::string& name) -> long {
    if (name.empty()) return -1;
    const auto it = index.find(name);
    return it == index.end() ? -1 : static_cast<long>(it->second);
  };
  const ColumnMap& c = cfg.columns;
  long it = find(c.time);
  double time_scale = cfg.time_scale;
  if (it < 0 && find("t_ms") >= 0) {
    it = find("t_ms");
    time_scale = 1e-3;
  }
  const long iy = find(c.y), iz = find(c.z);
  if (it < 0 || iy < 0 || iz < 0) {
    throw Error(ErrorKind::MalformedFile, "header must declare time, y and z columns");
  }
  const long ith = find(c.theta), itau = find(c.torque), icur = find(c.current), iev = find(c.event),
             iph = find(c.phase);

  Table tb;
  tb.has_theta = ith >= 0;
  tb.has_torque = itau >= 0;
  tb.has_current = icur >= 0;
  tb.has_event = iev >= 0;
  tb.has_phase = iph >= 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const std::vector<std::string> cells = split(line);
    if (cells.size() != header.size()) {
      throw Error(ErrorKind::MalformedFile, "line " + std::to_string(line_no) + ": expected " +
                                                std::to_string(header.size()) + " fields");
    }
    tb.t.push_back(to_number(cells[it], line_no) * time_scale);
    tb.y.push_back(to_number(cells[iy], line_no));
    tb.z.push_back(to_number(cells[iz], line_no) - cfg.ground_offset);
    if (tb.has_theta) tb.theta.push_back(to_number(cells[ith], line_no) * cfg.theta_scale);
    if (tb.has_torque) tb.torque.push_back(to_number(cells[itau], line_no));
    if (tb.has_current) tb.current.push_back(to_number(cells[icur], line_no));
    tb.event.push_back(tb.has_event ? cells[iev] : "");
    tb.phase.push_back(tb.has_phase ? cells[iph] : "");
    if (tb.t.size() > 1 && !(tb.t.back() > tb.t[tb.t.size() - 2])) {
      throw Error(ErrorKind::MalformedFile, "line " + std::to_string(line_no) + ": time not increasing");
    }
  }
  if (tb.t.size() < 3) throw Error(ErrorKind::MalformedFile, "fewer than three samples");
  return tb;
}

// Linear interpolation of v (sampled at ts) at time t, clamped to the ends.
double interp(const std::vector<double>& ts, const std::vector<double>& v, double t) {
  if (t <= ts.front()) return v.front();
  if (t >= ts.back()) return v.back();
  const auto it = std::upper_bound(ts.begin(), ts.end(), t);
  const std::size_t i = static_cast<std::size_t>(it - ts.begin());
  const double w = (t - ts[i - 1]) / (ts[i] - ts[i - 1]);
  return v[i - 1] + w * (v[i] - v[i - 1]);
}

std::optional<double> first_event(const Table& tb, const std::string& name, double after = -1e300) {
  for (std::size_t i = 0; i < tb.t.size(); ++i) {
    if (tb.event[i] == name && tb.t[i] >= after) return tb.t[i];
  }
  return std::nullopt;
}

std::optional<double> last_event(const Table& tb, const std::string& name) {
  for (std::size_t i = tb.t.size(); i-- > 0;) {
    if (tb.event[i] == name) return tb.t[i];
  }
  return std::nullopt;
}

// Touchdown and lift-off times from event rows, else from the phase column.
std::pair<double, double> stance_window(const Table& tb) {
  if (const auto td = first_event(tb, "touchdown")) {
    if (const auto lo = first_event(tb, "liftoff", *td)) return {*td, *lo};
  }
  std::size_t i = 0;
  while (i < tb.t.size() && tb.phase[i] != "stance") ++i;
  std::size_t j = i;
  while (j < tb.t.size() && tb.phase[j] == "stance") ++j;
  if (!tb.has_phase) throw Error(ErrorKind::MalformedFile, "no touchdown/liftoff events and no phase column");
  if (i == tb.t.size() || j == tb.t.size()) {
    throw Error(ErrorKind::NoApexPair, "log holds no complete stance");
  }
  return {tb.t[i], tb.t[j]};
}

StridePhase phase_from(const std::string& s, double t, double t_td, double t_lo) {
  if (s == "descent") return StridePhase::Descent;
  if (s == "stance") return StridePhase::Stance;
  if (s == "ascent") return StridePhase::Ascent;
  if (t < t_td) return StridePhase::Descent;
  return t < t_lo ? StridePhase::Stance : StridePhase::Ascent;
}

StrideEvent event_from(const std::string& s) {
  if (s == "apex") return StrideEvent::Apex;
  if (s == "touchdown") return StrideEvent::Touchdown;
  if (s == "bottom") return StrideEvent::Bottom;
  if (s == "liftoff") return StrideEvent::Liftoff;
  return StrideEvent::None;
}

// Apex time as the maximum of the smoothed height inside [lo, hi], refined by
// a parabola through the neighbouring samples. Requires an interior maximum.
std::optional<double> apex_between(const std::vector<double>& ts, const std::vector<double>& z, double lo,
                                   double hi) {
  std::size_t best = ts.size();
  for (std::size_t i = 0; i < ts.size(); ++i) {
    if (ts[i] < lo || ts[i] > hi) continue;
    if (best == ts.size() || z[i] > z[best]) best = i;
  }
  if (best == ts.size() || best == 0 || best + 1 >= ts.size()) return std::nullopt;
  if (ts[best - 1] < lo || ts[best + 1] > hi) return std::nullopt;
  const double a = z[best - 1], b = z[best], c = z[best + 1];
  const double denom = a - 2.0 * b + c;
  const double h = ts[best + 1] - ts[best];
  const double shift = denom < 0.0 ? 0.5 * (a - c) / denom : 0.0;
  return ts[best] + std::clamp(shift, -1.0, 1.0) * h;
}

}  // namespace

void IngestionConfig::validate() const {
  if (tau_c == 0.0 || !std::isfinite(tau_c)) throw Error(ErrorKind::InvalidArgument, "tau_c must be nonzero");
  if (!(G_r > 0.0)) throw Error(ErrorKind::InvalidArgument, "G_r must be > 0");
  if (!(time_scale > 0.0) || !(theta_scale != 0.0)) {
    throw Error(ErrorKind::InvalidArgument, "time and angle scales must be nonzero");
  }
}

std::vector<double> current_to_torque(const std::vector<double>& current, const IngestionConfig& cfg) {
  cfg.validate();
  const double gain = cfg.conversion == CurrentConversion::Divide ? cfg.G_r / cfg.tau_c : cfg.tau_c / cfg.G_r;
  double sum = 0.0;
  for (double c : current) sum += c;
  const double sign = sum < 0.0 ? -1.0 : 1.0;
  std::vector<double> out;
  out.reserve(current.size());
  for (double c : current) out.push_back(sign * gain * c);
  return out;
}

IngestedStride ingest_stride_log(std::istream& in, const IngestionConfig& cfg) {
  cfg.validate();
  const Table tb = read_table(in, cfg);
  if (!tb.has_theta) throw Error(ErrorKind::MalformedFile, "log has no leg angle column");
  if (!tb.has_torque && !tb.has_current) throw Error(ErrorKind::MalformedFile, "log has no torque or current column");
  const std::vector<double> torque = tb.has_torque ? tb.torque : current_to_torque(tb.current, cfg);

  // Uniform series: rows without events plus event rows lying on their grid.
  std::vector<std::size_t> grid_rows;
  for (std::size_t i = 0; i < tb.t.size(); ++i) {
    if (tb.event[i].empty()) grid_rows.push_back(i);
  }
  if (grid_rows.size() < 3) throw Error(ErrorKind::MalformedFile, "too few regularly sampled rows");
  std::vector<double> gaps;
  for (std::size_t k = 1; k < grid_rows.size(); ++k) gaps.push_back(tb.t[grid_rows[k]] - tb.t[grid_rows[k - 1]]);
  std::nth_element(gaps.begin(), gaps.begin() + gaps.size() / 2, gaps.end());
  const double dt = gaps[gaps.size() / 2];
  const double anchor = tb.t[grid_rows.front()];
  std::vector<std::size_t> series;
  for (std::size_t i = 0; i < tb.t.size(); ++i) {
    const double k = (tb.t[i] - anchor) / dt;
    if (tb.event[i].empty() || std::abs(k - std::round(k)) < 1e-6) series.push_back(i);
  }
  for (std::size_t k = 1; k < series.size(); ++k) {
    const double gap = tb.t[series[k]] - tb.t[series[k - 1]];
    if (std::abs(gap - dt) > 1e-6 * dt) throw Error(ErrorKind::MalformedFile, "non-uniform sampling");
  }

  std::vector<double> ts, ys, zs;
  for (std::size_t i : series) {
    ts.push_back(tb.t[i]);
    ys.push_back(tb.y[i]);
    zs.push_back(tb.z[i]);
  }
  KalmanConfig kc = cfg.kalman;
  kc.dt = dt;
  const auto ky = cfg.smooth_backward ? kalman_rts_smooth(ys, kc) : kalman_smooth(ys, kc);
  const auto kz = cfg.smooth_backward ? kalman_rts_smooth(zs, kc) : kalman_smooth(zs, kc);
  std::vector<double> z_s;
  for (const KalmanEstimate& e : kz) z_s.push_back(e.pos);

  // Stance window.
  const auto [td, lo] = stance_window(tb);

  // Apexes.
  std::optional<double> a0 = first_event(tb, "apex");
  std::optional<double> a1 = last_event(tb, "apex");
  if (!(a0 && a1 && *a0 < td && *a1 > lo)) {
    a0 = apex_between(ts, z_s, ts.front(), td);
    a1 = apex_between(ts, z_s, lo, ts.back());
  }
  if (!a0 || !a1) throw Error(ErrorKind::NoApexPair, "could not locate apexes before touchdown and after lift-off");

  IngestedStride out;
  out.t_touchdown = td;
  out.t_liftoff = lo;
  // Filter state carried from the closest earlier sample with the constant
  // acceleration model, so off-grid event times need no interpolation.
  auto state_at = [&](const std::vector<KalmanEstimate>& est, double t) {
    const auto it = std::upper_bound(ts.begin(), ts.end(), t);
    const std::size_t k = it == ts.begin() ? 0 : static_cast<std::size_t>(it - ts.begin()) - 1;
    const double h = t - ts[k];
    const KalmanEstimate& e = est[k];
    return KalmanEstimate{e.pos + e.vel * h + 0.5 * e.acc * h * h, e.vel + e.acc * h, e.acc};
  };
  auto apex_at = [&](double t) {
    ApexState a{state_at(kz, t).pos, state_at(ky, t).vel, state_at(ky, t).pos, t};
    // An apex row carries the logged position at the exact event time.
    for (std::size_t i = 0; i < tb.t.size(); ++i) {
      if (tb.event[i] == "apex" && tb.t[i] == t) {
        a.z_a = tb.z[i];
        a.y_a = tb.y[i];
      }
    }
    return a;
  };
  StrideRecord& rec = out.record;
  rec.apex0 = apex_at(*a0);
  rec.apex1 = apex_at(*a1);
  rec.theta_td = interp(tb.t, tb.theta, td);

  // Ramp fit over the stance samples carrying torque.
  double peak = 0.0;
  for (std::size_t i = 0; i < tb.t.size(); ++i) {
    if (tb.t[i] >= td && tb.t[i] <= lo) peak = std::max(peak, std::abs(torque[i]));
  }
  double n = 0, sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < tb.t.size(); ++i) {
    if (tb.t[i] < td || tb.t[i] > lo || std::abs(torque[i]) <= 0.01 * peak) continue;
    const double s = tb.t[i] - td;
    n += 1;
    sx += s;
    sy += torque[i];
    sxx += s * s;
    sxy += s * torque[i];
  }
  const double stance = lo - td;
  if (peak == 0.0 || n < 2) {
    rec.torque = {0.0, stance};
  } else {
    const double denom = n * sxx - sx * sx;
    const double b = denom != 0.0 ? (n * sxy - sx * sy) / denom : 0.0;
    const double a = (sy - b * sx) / n;
    if (b * a >= 0.0 || std::abs(b) * stance < 0.02 * std::abs(a)) {
      rec.torque = RampTorque::constant(sy / n);
    } else {
      rec.torque = {a, -a / b};
    }
  }

  for (std::size_t i = 0; i < tb.t.size(); ++i) {
    const double t = tb.t[i];
    if (t < *a0 - 1e-12 || t > *a1 + 1e-12) continue;
    StrideLogRow r;
    r.t = t;
    const KalmanEstimate ey = state_at(ky, t), ez = state_at(kz, t);
    r.state = {ey.pos, ez.pos, ey.vel, ez.vel};
    r.theta = tb.theta[i];
    r.tau = torque[i];
    r.phase = phase_from(tb.phase[i], t, td, lo);
    r.event = event_from(tb.event[i]);
    out.rows.push_back(r);
  }
  return out;
}

IngestedStride ingest_stride_file(const std::string& path, const IngestionConfig& cfg) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::MalformedFile, "cannot open " + path);
  IngestedStride s = ingest_stride_log(in, cfg);
  s.record.tag = path;
  return s;
}

}  // namespace slip
