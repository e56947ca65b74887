#pragma once

#include <functional>
#include <vector>

namespace fpreg {

struct SimplexOptions {
  int max_iterations = 4000;
  double size_tolerance = 1e-9;  ///< stop when the simplex characteristic size drops below
};

struct SimplexResult {
  std::vector<double> x;
  double value = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// Derivative-free Nelder-Mead minimization (GSL nmsimplex2).
SimplexResult minimize_simplex(const std::function<double(const std::vector<double>&)>& f,
                               const std::vector<double>& x0, const std::vector<double>& steps,
                               const SimplexOptions& options = {});

}  // namespace fpreg
