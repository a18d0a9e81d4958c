#include "slip/model.hpp"

#include <array>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <map>
#include <sstream>

#include "slip/error.hpp"

namespace slip {

namespace {

void require(bool ok, const char* what) {
  if (!ok) throw Error(ErrorKind::InvalidArgument, what);
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

void SystemParams::validate() const {
  require(std::isfinite(m_b) && m_b > 0.0, "m_b must be > 0");
  require(std::isfinite(m_t) && m_t >= 0.0, "m_t must be >= 0");
  require(std::isfinite(k) && k > 0.0, "k must be > 0");
  require(std::isfinite(d) && d >= 0.0, "d must be >= 0");
  require(std::isfinite(d_v_f) && d_v_f >= 0.0, "d_v_f must be >= 0");
  require(std::isfinite(d_h_f) && d_h_f >= 0.0, "d_h_f must be >= 0");
  require(std::isfinite(g) && g > 0.0, "g must be > 0");
  require(std::isfinite(rho_0) && rho_0 > 0.0, "rho_0 must be > 0");
}

double ramp_torque_at(const RampTorque& profile, double t) {
  if (t < 0.0 || t > profile.t_f) return 0.0;
  if (std::isinf(profile.t_f)) return profile.tau_0;
  return profile.tau_0 * (1.0 - t / profile.t_f);
}

CartesianState polar_to_cartesian(const PolarStanceState& s, double toe_y) {
  const double st = std::sin(s.theta);
  const double ct = std::cos(s.theta);
  return {
      toe_y - s.rho * st,
      s.rho * ct,
      -s.rho_dot * st - s.rho * s.theta_dot * ct,
      s.rho_dot * ct - s.rho * s.theta_dot * st,
  };
}

PolarStanceState cartesian_to_polar(const CartesianState& s, double toe_y) {
  if (!(s.z > 0.0)) {
    throw Error(ErrorKind::DegenerateGeometry, "body must be above the toe (z > 0)");
  }
  const double dy = s.y - toe_y;
  const double rho = std::hypot(dy, s.z);
  const double theta = std::atan2(-dy, s.z);
  const double st = std::sin(theta);
  const double ct = std::cos(theta);
  // Project the velocity on the radial (-sin, cos) and tangential (-cos, -sin) axes.
  const double rho_dot = -s.y_dot * st + s.z_dot * ct;
  const double theta_dot = (-s.y_dot * ct - s.z_dot * st) / rho;
  return {rho, theta, rho_dot, theta_dot};
}

void BoomParams::validate() const {
  require(std::isfinite(L_boom) && L_boom > 0.0, "L_boom must be > 0");
  require(std::isfinite(m_boom) && m_boom >= 0.0, "m_boom must be >= 0");
  require(std::isfinite(M_tip) && M_tip > 0.0, "M_tip must be > 0");
  require(std::isfinite(g_0) && g_0 > 0.0, "g_0 must be > 0");
}

double boom_corrected_gravity(const BoomParams& b) {
  b.validate();
  return b.g_0 * (b.M_tip + b.m_boom / 2.0) / (b.M_tip + b.m_boom / 3.0);
}

SystemParams parse_params(const std::string& text) {
  static const std::array<const char*, 8> kKeys = {"m_b", "m_t", "k", "d",
                                                   "d_v_f", "d_h_f", "g", "rho_0"};
  std::map<std::string, double> values;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw Error(ErrorKind::MalformedFile, "line " + std::to_string(line_no) + ": expected key = value");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string raw = trim(line.substr(eq + 1));
    bool known = false;
    for (const char* k : kKeys) known = known || key == k;
    if (!known) {
      throw Error(ErrorKind::MalformedFile, "line " + std::to_string(line_no) + ": unknown key '" + key + "'");
    }
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(raw, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != raw.size()) {
      throw Error(ErrorKind::MalformedFile, "line " + std::to_string(line_no) + ": bad number '" + raw + "'");
    }
    values[key] = v;
  }
  for (const char* k : kKeys) {
    if (!values.contains(k)) throw Error(ErrorKind::MalformedFile, std::string("missing key '") + k + "'");
  }
  SystemParams p{values["m_b"], values["m_t"], values["k"],  values["d"],
                 values["d_v_f"], values["d_h_f"], values["g"], values["rho_0"]};
  p.validate();
  return p;
}

SystemParams load_params(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::MalformedFile, "cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_params(buf.str());
}

void write_params(std::ostream& out, const SystemParams& p) {
  const auto old = out.precision(17);
  out << "m_b = " << p.m_b << "\n"
      << "m_t = " << p.m_t << "\n"
      << "k = " << p.k << "\n"
      << "d = " << p.d << "\n"
      << "d_v_f = " << p.d_v_f << "\n"
      << "d_h_f = " << p.d_h_f << "\n"
      << "g = " << p.g << "\n"
      << "rho_0 = " << p.rho_0 << "\n";
  out.precision(old);
}

}  // namespace slip
