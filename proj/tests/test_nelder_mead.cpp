#include <cmath>

#include "doctest.h"
#include "slip/error.hpp"
#include "slip/nelder_mead.hpp"

using namespace slip;
using doctest::Approx;

TEST_CASE("one-dimensional quadratic") {
  const auto r = nelder_mead([](const std::vector<double>& x) { return (x[0] - 3) * (x[0] - 3); }, {0.0});
  CHECK(r.converged());
  CHECK(r.x[0] == Approx(3.0).epsilon(1e-6));
}

TEST_CASE("Rosenbrock") {
  auto rosen = [](const std::vector<double>& x) {
    return 100 * std::pow(x[1] - x[0] * x[0], 2) + std::pow(1 - x[0], 2);
  };
  const auto r = nelder_mead(rosen, {-1.2, 1.0});
  CHECK(r.converged());
  CHECK(r.x[0] == Approx(1.0).epsilon(1e-4));
  CHECK(r.x[1] == Approx(1.0).epsilon(1e-4));
  CHECK(r.evaluations > r.iterations);
}

TEST_CASE("constant objective stops on the value tolerance") {
  const auto r = nelder_mead([](const std::vector<double>&) { return 2.0; }, {1.0, -1.0});
  CHECK(r.stop == NelderMeadStop::FTolerance);
  CHECK(std::abs(r.x[0] - 1.0) <= 0.1);
  CHECK(std::abs(r.x[1] + 1.0) <= 0.1);
}

TEST_CASE("infeasible regions and budget") {
  // NaN outside x > 0 acts as a wall.
  auto walled = [](const std::vector<double>& x) { return x[0] > 0 ? (x[0] - 0.5) * (x[0] - 0.5) : std::nan(""); };
  const auto r = nelder_mead(walled, {2.0}, {1e-10, 1e-14, 5000, {3.0}});
  CHECK(r.x[0] == Approx(0.5).epsilon(1e-6));

  NelderMeadOptions tiny;
  tiny.max_iterations = 3;
  const auto cut = nelder_mead([](const std::vector<double>& x) { return x[0] * x[0] + x[1] * x[1]; }, {5.0, 5.0},
                               tiny);
  CHECK_FALSE(cut.converged());
  CHECK(cut.iterations == 3);

  CHECK_THROWS_AS(nelder_mead([](const std::vector<double>&) { return 0.0; }, {}), Error);
  CHECK_THROWS_AS(nelder_mead([](const std::vector<double>&) { return INFINITY; }, {1.0}), Error);
}
