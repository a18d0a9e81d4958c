#include "slip/identification.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <ostream>
#include <random>
#include <thread>

#include "slip/error.hpp"

namespace slip {

ErrorMetrics apex_errors(const ApexState& measured, const ApexState& predicted) {
  const double pos_norm = std::hypot(measured.z_a, measured.y_a);
  if (pos_norm == 0.0) throw Error(ErrorKind::ZeroNorm, "measured apex position has zero norm");
  if (measured.y_dot_a == 0.0) throw Error(ErrorKind::ZeroNorm, "measured apex velocity is zero");
  if (measured.t_a == 0.0) throw Error(ErrorKind::ZeroNorm, "measured apex time is zero");
  ErrorMetrics e;
  e.e_p = 100.0 * std::hypot(measured.z_a - predicted.z_a, measured.y_a - predicted.y_a) / pos_norm;
  e.e_v = 100.0 * std::abs(measured.y_dot_a - predicted.y_dot_a) / std::abs(measured.y_dot_a);
  e.e_t = 100.0 * std::abs(measured.t_a - predicted.t_a) / std::abs(measured.t_a);
  return e;
}

ErrorMetrics stride_errors(const StrideRecord& rec, const ApexState& predicted) {
  auto relative = [&rec](ApexState a) {
    a.y_a -= rec.apex0.y_a;
    a.t_a -= rec.apex0.t_a;
    return a;
  };
  return apex_errors(relative(rec.apex1), relative(predicted));
}

std::string_view to_string(Param p) noexcept {
  switch (p) {
    case Param::m_b: return "m_b";
    case Param::m_t: return "m_t";
    case Param::k: return "k";
    case Param::d: return "d";
    case Param::d_v_f: return "d_v_f";
    case Param::d_h_f: return "d_h_f";
    case Param::g: return "g";
    case Param::rho_0: return "rho_0";
  }
  return "";
}

std::optional<Param> param_from_string(std::string_view name) {
  for (Param p : kAllParams) {
    if (to_string(p) == name) return p;
  }
  return std::nullopt;
}

double get(const SystemParams& p, Param which) {
  switch (which) {
    case Param::m_b: return p.m_b;
    case Param::m_t: return p.m_t;
    case Param::k: return p.k;
    case Param::d: return p.d;
    case Param::d_v_f: return p.d_v_f;
    case Param::d_h_f: return p.d_h_f;
    case Param::g: return p.g;
    case Param::rho_0: return p.rho_0;
  }
  return 0.0;
}

void set(SystemParams& p, Param which, double value) {
  switch (which) {
    case Param::m_b: p.m_b = value; break;
    case Param::m_t: p.m_t = value; break;
    case Param::k: p.k = value; break;
    case Param::d: p.d = value; break;
    case Param::d_v_f: p.d_v_f = value; break;
    case Param::d_h_f: p.d_h_f = value; break;
    case Param::g: p.g = value; break;
    case Param::rho_0: p.rho_0 = value; break;
  }
}

std::vector<Param> ParamMask::list() const {
  std::vector<Param> out;
  for (Param p : kAllParams) {
    if (has(p)) out.push_back(p);
  }
  return out;
}

namespace {

ErrorMetrics penalty_metrics(double penalty) { return {penalty, penalty, penalty}; }

// Runs body(i) for i in [0, n) on up to `threads` workers, each owning a
// contiguous block of indices.
template <typename Body>
void parallel_for(std::size_t n, int threads, Body body) {
  const std::size_t workers =
      std::clamp<std::size_t>(threads > 0 ? static_cast<std::size_t>(threads) : 1, 1, std::max<std::size_t>(n, 1));
  if (workers == 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::vector<std::thread> pool;
  const std::size_t chunk = (n + workers - 1) / workers;
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t lo = w * chunk;
    const std::size_t hi = std::min(n, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([lo, hi, &body] {
      for (std::size_t i = lo; i < hi; ++i) body(i);
    });
  }
  for (auto& t : pool) t.join();
}

ErrorMetrics mean_of(const std::vector<ErrorMetrics>& v) {
  ErrorMetrics m;
  if (v.empty()) return m;
  for (const auto& e : v) {
    m.e_p += e.e_p;
    m.e_v += e.e_v;
    m.e_t += e.e_t;
  }
  const double n = static_cast<double>(v.size());
  return {m.e_p / n, m.e_v / n, m.e_t / n};
}

ErrorMetrics std_of(const std::vector<ErrorMetrics>& v, const ErrorMetrics& mean) {
  ErrorMetrics s;
  if (v.size() < 2) return s;
  for (const auto& e : v) {
    s.e_p += (e.e_p - mean.e_p) * (e.e_p - mean.e_p);
    s.e_v += (e.e_v - mean.e_v) * (e.e_v - mean.e_v);
    s.e_t += (e.e_t - mean.e_t) * (e.e_t - mean.e_t);
  }
  const double n = static_cast<double>(v.size() - 1);
  return {std::sqrt(s.e_p / n), std::sqrt(s.e_v / n), std::sqrt(s.e_t / n)};
}

StrideDataset subset(const StrideDataset& ds, const std::vector<std::size_t>& idx) {
  StrideDataset out;
  out.reserve(idx.size());
  for (std::size_t i : idx) out.push_back(ds[i]);
  return out;
}

}  // namespace

DatasetMetrics dataset_metrics(const StrideDataset& ds, const SystemParams& p,
                               const IdentificationOptions& opts) {
  if (ds.empty()) throw Error(ErrorKind::TooFewStrides, "empty stride dataset");
  DatasetMetrics out;
  out.per_stride.assign(ds.size(), {});
  std::vector<char> failed(ds.size(), 0);
  bool valid = true;
  try {
    p.validate();
  } catch (const Error&) {
    valid = false;
  }

  parallel_for(ds.size(), opts.threads, [&](std::size_t i) {
    const StrideRecord& rec = ds[i];
    if (!valid) {
      failed[i] = 1;
      return;
    }
    StrideOptions so = opts.stride;
    so.ground_offset = rec.ground_offset;
    const StrideOutcome o = apex_return_map(rec.apex0, rec.theta_td,
                                            TorqueCommand::ramp(rec.torque.tau_0, rec.torque.t_f),
                                            p, opts.backend, so);
    if (!o.ok()) {
      failed[i] = 1;
      return;
    }
    const ErrorMetrics e = stride_errors(rec, o.next_apex);
    if (!std::isfinite(e.e_p) || !std::isfinite(e.e_v) || !std::isfinite(e.e_t)) {
      failed[i] = 1;
      return;
    }
    out.per_stride[i] = e;
  });

  out.failed.resize(ds.size());
  for (std::size_t i = 0; i < ds.size(); ++i) {
    out.failed[i] = failed[i] != 0;
    if (out.failed[i]) {
      out.per_stride[i] = penalty_metrics(opts.failure_penalty);
      ++out.failures;
    }
  }
  out.mean = mean_of(out.per_stride);
  return out;
}

double combined_cost(const ErrorMetrics& m) {
  return std::sqrt(m.e_p * m.e_p + m.e_v * m.e_v + m.e_t * m.e_t);
}

double identification_cost(const StrideDataset& ds, const SystemParams& p,
                           const IdentificationOptions& opts) {
  return combined_cost(dataset_metrics(ds, p, opts).mean);
}

StrideDataset reject_outliers(const StrideDataset& ds, const SystemParams& p, double max_error,
                              const IdentificationOptions& opts) {
  const DatasetMetrics m = dataset_metrics(ds, p, opts);
  StrideDataset out;
  for (std::size_t i = 0; i < ds.size(); ++i) {
    const ErrorMetrics& e = m.per_stride[i];
    if (!m.failed[i] && std::max({e.e_p, e.e_v, e.e_t}) <= max_error) out.push_back(ds[i]);
  }
  return out;
}

IdentificationResult identify_parameters(const StrideDataset& ds, const SystemParams& guess,
                                         const ParamMask& free, const IdentificationOptions& opts) {
  if (ds.empty()) throw Error(ErrorKind::TooFewStrides, "empty stride dataset");
  IdentificationResult res;
  res.params = guess;
  const std::vector<Param> names = free.list();
  if (names.empty()) {
    res.cost = identification_cost(ds, guess, opts);
    res.search.f = res.cost;
    res.search.stop = NelderMeadStop::XTolerance;
    return res;
  }

  std::vector<double> x0;
  for (Param p : names) {
    const double v = get(guess, p);
    if (!(v > 0.0)) {
      throw Error(ErrorKind::InvalidArgument,
                  "free parameter " + std::string(to_string(p)) + " must start positive");
    }
    x0.push_back(std::log(v));
  }
  auto unpack = [&](const std::vector<double>& x) {
    SystemParams p = guess;
    for (std::size_t i = 0; i < names.size(); ++i) set(p, names[i], std::exp(x[i]));
    return p;
  };
  res.search = nelder_mead([&](const std::vector<double>& x) { return identification_cost(ds, unpack(x), opts); },
                           x0, opts.optimizer);
  res.params = unpack(res.search.x);
  res.cost = res.search.f;
  return res;
}

std::vector<std::size_t> fold_assignment(std::size_t n, std::size_t folds, std::uint64_t seed) {
  if (folds < 2 || folds > n) {
    throw Error(ErrorKind::TooFewStrides, "need 2 <= folds <= number of strides");
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 rng(seed);
  std::shuffle(order.begin(), order.end(), rng);
  std::vector<std::size_t> fold_of(n);
  const std::size_t base = n / folds;
  const std::size_t extra = n % folds;
  std::size_t pos = 0;
  for (std::size_t f = 0; f < folds; ++f) {
    const std::size_t size = base + (f < extra ? 1 : 0);
    for (std::size_t j = 0; j < size; ++j) fold_of[order[pos++]] = f;
  }
  return fold_of;
}

CrossValidation kfold_cross_validate(const StrideDataset& ds, const SystemParams& guess,
                                     const ParamMask& free, const CrossValidationOptions& cv,
                                     const IdentificationOptions& opts) {
  const std::vector<std::size_t> fold_of = fold_assignment(ds.size(), cv.folds, cv.seed);
  CrossValidation out;
  out.seed = cv.seed;
  out.folds.resize(cv.folds);

  IdentificationOptions inner = opts;
  if (cv.threads > 1) inner.threads = 1;

  parallel_for(cv.folds, cv.threads, [&](std::size_t f) {
    std::vector<std::size_t> train_idx, test_idx;
    for (std::size_t i = 0; i < ds.size(); ++i) (fold_of[i] == f ? test_idx : train_idx).push_back(i);
    const StrideDataset train = subset(ds, train_idx);
    const StrideDataset test = subset(ds, test_idx);
    const IdentificationResult id = identify_parameters(train, guess, free, inner);
    FoldResult& r = out.folds[f];
    r.test_indices = test_idx;
    r.params = id.params;
    r.train_cost = id.cost;
    r.converged = id.search.converged();
    r.train = dataset_metrics(train, id.params, inner).mean;
    r.test = dataset_metrics(test, id.params, inner).mean;
  });

  std::vector<ErrorMetrics> train, test;
  for (const auto& f : out.folds) {
    train.push_back(f.train);
    test.push_back(f.test);
  }
  out.train_mean = mean_of(train);
  out.test_mean = mean_of(test);
  out.train_std = std_of(train, out.train_mean);
  out.test_std = std_of(test, out.test_mean);

  const double n = static_cast<double>(out.folds.size());
  for (Param p : kAllParams) {
    double mean = 0.0;
    for (const auto& f : out.folds) mean += get(f.params, p) / n;
    double var = 0.0;
    for (const auto& f : out.folds) var += (get(f.params, p) - mean) * (get(f.params, p) - mean);
    set(out.param_mean, p, mean);
    set(out.param_std, p, std::sqrt(var / (n - 1.0)));
  }
  return out;
}

StrideDataset synthesize_dataset(const SystemParams& p, const SyntheticOptions& opts) {
  p.validate();
  std::mt19937_64 rng(opts.seed);
  auto uniform = [&rng](const Range& r) { return std::uniform_real_distribution<double>(r.lo, r.hi)(rng); };
  std::normal_distribution<double> noise(0.0, 1.0);
  const double deg = std::numbers::pi / 180.0;

  StrideDataset ds;
  ds.reserve(opts.count);
  std::size_t draws = 0;
  while (ds.size() < opts.count) {
    if (draws++ >= opts.max_draws) {
      throw Error(ErrorKind::TooFewStrides, "synthetic generation exhausted its draw budget");
    }
    StrideRecord rec;
    rec.apex0 = {uniform(opts.ranges.z0), uniform(opts.ranges.y_dot0), 0.0, 0.0};
    const double tau0 = uniform(opts.ranges.tau0);
    rec.theta_td = uniform(opts.ranges.theta_deg) * deg;
    StrideOptions so = opts.stride;
    const StrideOutcome o = apex_return_map(rec.apex0, rec.theta_td, TorqueCommand::ramp(tau0), p,
                                            opts.backend, so);
    if (!o.ok() || !(o.next_apex.y_dot_a >= opts.min_next_speed)) continue;
    rec.torque = o.torque;
    rec.apex1 = o.next_apex;
    rec.ground_offset = so.ground_offset;
    if (opts.position_noise > 0.0) {
      rec.apex0.z_a += opts.position_noise * noise(rng);
      rec.apex0.y_a += opts.position_noise * noise(rng);
      rec.apex1.z_a += opts.position_noise * noise(rng);
      rec.apex1.y_a += opts.position_noise * noise(rng);
    }
    rec.tag = "synthetic-" + std::to_string(ds.size());
    ds.push_back(std::move(rec));
  }
  return ds;
}

void write_cv_csv(std::ostream& out, const CrossValidation& cv, const ParamMask& free) {
  const auto old = out.precision(10);
  out << "fold,n_test";
  for (Param p : free.list()) out << ',' << to_string(p);
  out << ",train_e_p_pct,train_e_v_pct,train_e_t_pct,test_e_p_pct,test_e_v_pct,test_e_t_pct,converged\n";
  for (std::size_t f = 0; f < cv.folds.size(); ++f) {
    const FoldResult& r = cv.folds[f];
    out << f << ',' << r.test_indices.size();
    for (Param p : free.list()) out << ',' << get(r.params, p);
    out << ',' << r.train.e_p << ',' << r.train.e_v << ',' << r.train.e_t << ',' << r.test.e_p << ','
        << r.test.e_v << ',' << r.test.e_t << ',' << (r.converged ? 1 : 0) << '\n';
  }
  out.precision(old);
}

void write_cv_summary(std::ostream& out, const CrossValidation& cv, const ParamMask& free) {
  const auto old = out.precision(10);
  out << "seed = " << cv.seed << '\n';
  out << "folds = " << cv.folds.size() << '\n';
  for (Param p : free.list()) {
    out << to_string(p) << "_mean = " << get(cv.param_mean, p) << '\n';
    out << to_string(p) << "_std = " << get(cv.param_std, p) << '\n';
  }
  auto metrics = [&out](const char* prefix, const ErrorMetrics& m, const ErrorMetrics& s) {
    out << prefix << "e_p_mean = " << m.e_p << '\n' << prefix << "e_p_std = " << s.e_p << '\n';
    out << prefix << "e_v_mean = " << m.e_v << '\n' << prefix << "e_v_std = " << s.e_v << '\n';
    out << prefix << "e_t_mean = " << m.e_t << '\n' << prefix << "e_t_std = " << s.e_t << '\n';
  };
  metrics("train_", cv.train_mean, cv.train_std);
  metrics("test_", cv.test_mean, cv.test_std);
  out.precision(old);
}

}  // namespace slip
