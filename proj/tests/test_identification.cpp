#include <cmath>
#include <numbers>
#include <random>
#include <set>
#include <sstream>

#include "doctest.h"
#include "slip/error.hpp"
#include "slip/identification.hpp"

using namespace slip;
using doctest::Approx;

namespace {

SyntheticOptions analytic_synthetic(std::size_t n, std::uint64_t seed) {
  SyntheticOptions s;
  s.count = n;
  s.seed = seed;
  s.backend = StanceBackend::Analytic;
  return s;
}

}  // namespace

TEST_CASE("apex error metrics") {
  const ApexState m{0.3, 2.0, 0.4, 0.5};
  const ErrorMetrics same = apex_errors(m, m);
  CHECK(same.e_p == 0.0);
  CHECK(same.e_v == 0.0);
  CHECK(same.e_t == 0.0);

  const ErrorMetrics e = apex_errors(m, {0.3, 2.5, 0.3, 0.4});
  CHECK(e.e_p == Approx(20.0));
  CHECK(e.e_v == Approx(25.0));
  CHECK(e.e_t == Approx(20.0));

  // Scale reporting: doubling both states leaves the percentages alone.
  const ErrorMetrics d = apex_errors({0.6, 4.0, 0.8, 1.0}, {0.6, 5.0, 0.6, 0.8});
  CHECK(d.e_p == Approx(e.e_p));
  CHECK(d.e_v == Approx(e.e_v));
  CHECK(d.e_t == Approx(e.e_t));

  CHECK_THROWS_AS(apex_errors({0.0, 1.0, 0.0, 1.0}, m), Error);
  CHECK_THROWS_AS(apex_errors({0.3, 0.0, 0.4, 1.0}, m), Error);
  CHECK_THROWS_AS(apex_errors({0.3, 1.0, 0.4, 0.0}, m), Error);

  // Relative to the starting apex.
  StrideRecord rec{{0.3, 2.0, 1.0, 10.0}, 0.3, {5.0, 0.1}, {0.3, 2.0, 1.4, 10.5}};
  const ErrorMetrics r = stride_errors(rec, {0.3, 2.0, 1.3, 10.4});
  CHECK(r.e_p == Approx(20.0));
  CHECK(r.e_t == Approx(20.0));
}

TEST_CASE("combined cost and parameter access") {
  CHECK(combined_cost({5.0, 5.0, 5.0}) == Approx(5.0 * std::sqrt(3.0)));
  SystemParams p;
  for (Param q : kAllParams) {
    set(p, q, 1.5 * get(p, q));
    CHECK(param_from_string(to_string(q)) == q);
  }
  CHECK(p.k == Approx(1.5 * 4696.0));
  CHECK_FALSE(param_from_string("mass").has_value());
  const ParamMask mask{Param::k, Param::g};
  CHECK(mask.list() == std::vector<Param>{Param::k, Param::g});
  CHECK_FALSE(ParamMask::hardware().has(Param::rho_0));
}

TEST_CASE("synthetic datasets") {
  const SystemParams p;
  SyntheticOptions opts = analytic_synthetic(40, 3);
  const StrideDataset ds = synthesize_dataset(p, opts);
  REQUIRE(ds.size() == 40);
  const SyntheticRanges r;
  for (const StrideRecord& s : ds) {
    CHECK(s.apex0.z_a >= r.z0.lo);
    CHECK(s.apex0.z_a <= r.z0.hi);
    CHECK(s.apex0.y_dot_a >= r.y_dot0.lo);
    CHECK(s.apex0.y_dot_a <= r.y_dot0.hi);
    CHECK(s.torque.tau_0 >= r.tau0.lo);
    CHECK(s.torque.tau_0 <= r.tau0.hi);
    CHECK(s.theta_td * 180 / std::numbers::pi >= r.theta_deg.lo);
    CHECK(s.theta_td * 180 / std::numbers::pi <= r.theta_deg.hi);
    CHECK(s.apex1.y_dot_a >= opts.min_next_speed);
  }
  const StrideDataset again = synthesize_dataset(p, opts);
  CHECK(again[17].apex1.z_a == ds[17].apex1.z_a);

  // Same backend and parameters reproduce the data exactly.
  IdentificationOptions io;
  CHECK(identification_cost(ds, p, io) == Approx(0.0).scale(1.0).epsilon(1e-9));

  SystemParams stiff = p;
  stiff.k *= 1.2;
  CHECK(identification_cost(ds, stiff, io) > identification_cost(ds, p, io) + 0.1);

  // The generating parameters beat random perturbations.
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.8, 1.2);
  const double c0 = identification_cost(ds, p, io);
  for (int trial = 0; trial < 100; ++trial) {
    SystemParams q = p;
    for (Param which : ParamMask::hardware().list()) set(q, which, get(q, which) * u(rng));
    CHECK(identification_cost(ds, q, io) >= c0);
  }

  // A failure costs the penalty.
  SystemParams broken = p;
  broken.k = 5.0;
  const DatasetMetrics dm = dataset_metrics(ds, broken, io);
  CHECK(dm.failures > 0);
  CHECK(reject_outliers(ds, p, 1.0, io).size() == ds.size());
}

TEST_CASE("identification") {
  const SystemParams p;
  const StrideDataset ds = synthesize_dataset(p, analytic_synthetic(30, 5));
  SystemParams guess = p;
  guess.k *= 1.3;
  guess.d *= 0.7;
  guess.g *= 1.15;

  const IdentificationResult none = identify_parameters(ds, guess, ParamMask{});
  CHECK(none.params.k == guess.k);
  CHECK(none.params.d == guess.d);
  CHECK(none.cost == Approx(identification_cost(ds, guess)));

  const IdentificationResult r = identify_parameters(ds, guess, {Param::k, Param::d, Param::g});
  CHECK(r.search.converged());
  CHECK(r.params.k == Approx(p.k).epsilon(0.01));
  CHECK(r.params.d == Approx(p.d).epsilon(0.01));
  CHECK(r.params.g == Approx(p.g).epsilon(0.01));
  CHECK(r.params.m_b == guess.m_b);
  CHECK(r.cost <= none.cost);

  CHECK_THROWS_AS(identify_parameters({}, guess, {Param::k}), Error);
}

TEST_CASE("fold assignment and cross-validation") {
  const auto folds = fold_assignment(23, 5, 9);
  std::vector<int> counts(5, 0);
  for (auto f : folds) ++counts.at(f);
  for (int c : counts) {
    CHECK(c >= 4);
    CHECK(c <= 5);
  }
  CHECK(fold_assignment(23, 5, 9) == folds);
  CHECK(fold_assignment(23, 5, 10) != folds);

  const SystemParams p;
  const StrideDataset ds = synthesize_dataset(p, analytic_synthetic(10, 2));
  CrossValidationOptions cv;
  cv.folds = 10;
  cv.seed = 4;
  const CrossValidation loo = kfold_cross_validate(ds, p, {Param::k}, cv);
  REQUIRE(loo.folds.size() == 10);
  std::set<std::size_t> seen;
  for (const FoldResult& f : loo.folds) {
    CHECK(f.test_indices.size() == 1);
    seen.insert(f.test_indices[0]);
    CHECK(f.test.e_p < 1e-3);
    CHECK(f.train.e_p < 1e-3);
  }
  CHECK(seen.size() == 10);
  CHECK(loo.seed == 4);

  const CrossValidation again = kfold_cross_validate(ds, p, {Param::k}, cv);
  CHECK(again.param_mean.k == loo.param_mean.k);
  CHECK(again.test_mean.e_t == loo.test_mean.e_t);

  std::ostringstream csv, summary;
  write_cv_csv(csv, loo, {Param::k});
  write_cv_summary(summary, loo, {Param::k});
  CHECK(csv.str().rfind("fold,n_test,k,", 0) == 0);
  CHECK(summary.str().find("k_mean = ") != std::string::npos);

  cv.folds = 11;
  CHECK_THROWS_AS(kfold_cross_validate(ds, p, {Param::k}, cv), Error);
  cv.folds = 1;
  CHECK_THROWS_AS(kfold_cross_validate(ds, p, {Param::k}, cv), Error);
}
