#pragma once

#include <cstdint>
#include <initializer_list>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "slip/nelder_mead.hpp"
#include "slip/return_map.hpp"

namespace slip {

/// Percentage apex prediction errors. e_v compares horizontal velocities only.
struct ErrorMetrics {
  double e_p = 0.0;
  double e_v = 0.0;
  double e_t = 0.0;
};

/// e_p = 100 |[z,y] - [z^,y^]| / |[z,y]|, e_v = 100 |y' - y'^| / |y'|,
/// e_t = 100 |t - t^| / |t|. Throws ZeroNorm when a denominator is zero.
ErrorMetrics apex_errors(const ApexState& measured, const ApexState& predicted);

/// One logged stride. apex1 shares the clock and horizontal origin of apex0;
/// errors are evaluated on positions and times relative to apex0.
struct StrideRecord {
  ApexState apex0;
  double theta_td = 0.0;  // [rad]
  RampTorque torque;      // applied profile, cutoff included
  ApexState apex1;
  double ground_offset = 0.0;
  std::string tag;
};

using StrideDataset = std::vector<StrideRecord>;

/// Errors of a predicted next apex against rec.apex1, both relative to rec.apex0.
ErrorMetrics stride_errors(const StrideRecord& rec, const ApexState& predicted);

enum class Param : unsigned { m_b, m_t, k, d, d_v_f, d_h_f, g, rho_0 };

inline constexpr Param kAllParams[] = {Param::m_b,   Param::m_t,   Param::k, Param::d,
                                       Param::d_v_f, Param::d_h_f, Param::g, Param::rho_0};

std::string_view to_string(Param p) noexcept;
std::optional<Param> param_from_string(std::string_view name);
double get(const SystemParams& p, Param which);
void set(SystemParams& p, Param which, double value);

/// Set of parameters left free during identification.
class ParamMask {
 public:
  ParamMask() = default;
  ParamMask(std::initializer_list<Param> ps) {
    for (Param p : ps) set(p);
  }
  ParamMask& set(Param p) {
    bits_ |= 1u << static_cast<unsigned>(p);
    return *this;
  }
  bool has(Param p) const { return (bits_ >> static_cast<unsigned>(p)) & 1u; }
  bool empty() const { return bits_ == 0; }
  std::vector<Param> list() const;

  /// Parameters estimated on the hardware: everything except rho_0.
  static ParamMask hardware() {
    return {Param::m_b, Param::m_t, Param::g, Param::k, Param::d, Param::d_v_f, Param::d_h_f};
  }

 private:
  unsigned bits_ = 0;
};

struct IdentificationOptions {
  StanceBackend backend = StanceBackend::Analytic;
  StrideOptions stride;
  double failure_penalty = 1000.0;  // percent, assigned to each metric of a failed stride
  int threads = 1;                  // stride-level workers inside one cost evaluation
  NelderMeadOptions optimizer{1e-7, 1e-10, 3000, {0.1}};
};

struct DatasetMetrics {
  std::vector<ErrorMetrics> per_stride;
  std::vector<bool> failed;
  ErrorMetrics mean;
  std::size_t failures = 0;
};

/// Per-stride errors of the return map under p. Failed predictions carry the
/// failure penalty in all three metrics.
DatasetMetrics dataset_metrics(const StrideDataset& ds, const SystemParams& p,
                               const IdentificationOptions& opts = {});

/// sqrt(mean e_p^2 + mean e_v^2 + mean e_t^2) over the dataset.
double identification_cost(const StrideDataset& ds, const SystemParams& p,
                           const IdentificationOptions& opts = {});

double combined_cost(const ErrorMetrics& mean);

/// Drops strides that fail or whose largest metric exceeds max_error percent.
StrideDataset reject_outliers(const StrideDataset& ds, const SystemParams& p, double max_error,
                              const IdentificationOptions& opts = {});

struct IdentificationResult {
  SystemParams params;
  double cost = 0.0;
  NelderMeadResult search;  // in log-parameter space
};

/// Minimizes the cost over the free parameters in log space, the others held
/// at the guess. An empty mask returns the guess with its cost.
IdentificationResult identify_parameters(const StrideDataset& ds, const SystemParams& guess,
                                         const ParamMask& free,
                                         const IdentificationOptions& opts = {});

struct FoldResult {
  std::vector<std::size_t> test_indices;
  SystemParams params;
  ErrorMetrics train;
  ErrorMetrics test;
  double train_cost = 0.0;
  bool converged = false;
};

struct CrossValidation {
  std::uint64_t seed = 0;
  std::vector<FoldResult> folds;
  ErrorMetrics train_mean, train_std, test_mean, test_std;
  SystemParams param_mean, param_std;
};

struct CrossValidationOptions {
  std::size_t folds = 10;
  std::uint64_t seed = 1;
  int threads = 1;  // fold-level workers
};

/// Seeded shuffle, contiguous split into folds, identification on each
/// training split and evaluation on both splits. Sample standard deviations.
/// Throws TooFewStrides unless 2 <= folds <= |ds|.
CrossValidation kfold_cross_validate(const StrideDataset& ds, const SystemParams& guess,
                                     const ParamMask& free, const CrossValidationOptions& cv,
                                     const IdentificationOptions& opts = {});

/// Fold membership: fold_of[i] is the fold of stride i.
std::vector<std::size_t> fold_assignment(std::size_t n, std::size_t folds, std::uint64_t seed);

struct Range {
  double lo = 0.0;
  double hi = 0.0;
};

/// Uniform sampling ranges for synthetic single-stride experiments, defaulting
/// to the operating ranges of the hopper tests.
struct SyntheticRanges {
  Range z0{0.2601, 0.4255};
  Range y_dot0{0.8631, 2.4868};
  Range tau0{3.0, 8.0};
  Range theta_deg{10.0, 45.0};
};

struct SyntheticOptions {
  std::size_t count = 120;
  std::uint64_t seed = 1;
  SyntheticRanges ranges;
  double position_noise = 0.0;  // std of Gaussian noise on apex z and y [m]
  double min_next_speed = 0.2;  // reject strides that end slower than this [m/s]
  StanceBackend backend = StanceBackend::Oracle;
  StrideOptions stride;
  std::size_t max_draws = 100000;
};

/// Draws single strides, keeps successful forward ones and records them with
/// optional position noise. Throws TooFewStrides when max_draws is exhausted.
StrideDataset synthesize_dataset(const SystemParams& p, const SyntheticOptions& opts);

/// Per-fold CSV: fold,n_test,<params>,train_e_p,...,test_e_t,converged.
void write_cv_csv(std::ostream& out, const CrossValidation& cv, const ParamMask& free);
/// Flat key=value summary of parameter means/stds and error means/stds.
void write_cv_summary(std::ostream& out, const CrossValidation& cv, const ParamMask& free);

}  // namespace slip
