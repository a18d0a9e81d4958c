#pragma once

#include <functional>
#include <string_view>
#include <vector>

namespace slip {

struct NelderMeadOptions {
  double x_tol = 1e-10;  // stop when every vertex lies within x_tol of the best one
  double f_tol = 1e-14;  // stop when f_worst - f_best < f_tol
  int max_iterations = 5000;
  /// Edge length of the initial simplex along each axis. A single entry is
  /// broadcast to every dimension.
  std::vector<double> initial_step{0.1};
};

enum class NelderMeadStop { XTolerance, FTolerance, MaxIterations };

std::string_view to_string(NelderMeadStop s) noexcept;

struct NelderMeadResult {
  std::vector<double> x;
  double f = 0.0;
  int iterations = 0;
  int evaluations = 0;
  NelderMeadStop stop = NelderMeadStop::MaxIterations;

  /// False when the iteration budget ran out; x is then the best point seen.
  bool converged() const { return stop != NelderMeadStop::MaxIterations; }
};

using Objective = std::function<double(const std::vector<double>&)>;

/// Downhill simplex with reflection 1, expansion 2, contraction 0.5 and
/// shrink 0.5. The f_tol test covers the vertices and, once they agree, the
/// centroid of all n+1 vertices. Non-finite objective values are treated as
/// +infinity, so the objective may signal infeasible points with NaN or inf. Throws
/// InvalidArgument when x0 is empty or f(x0) is not finite.
NelderMeadResult nelder_mead(const Objective& f, const std::vector<double>& x0,
                             const NelderMeadOptions& opts = {});

}  // namespace slip
