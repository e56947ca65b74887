#pragma once

#include "fpreg/tomography.hpp"

#include <cstdint>
#include <optional>

namespace fpreg::tomography {

struct OptimizeOptions {
  int restarts = 10;
  int iterations = 200;
  double step = 0.05;
  double fd_step = 1e-5;
  std::uint64_t seed = 1;
  /// Loss C(channel) when set, otherwise the channel-independent bound A.
  std::optional<Choi> channel;
};

struct OptimizeResult {
  RotationSet left;
  RotationSet right;
  double loss = 0.0;
  int restarts_converged = 0;
  std::vector<double> restart_losses;
};

/// Gradient descent with Armijo backtracking over (phi_i, alpha_i), theta fixed at pi/2.
/// Singular starting sets are redrawn; kOptimizationFailure if no restart finishes.
OptimizeResult optimize_sets(int left_size, int right_size, const OptimizeOptions& options = {});

}  // namespace fpreg::tomography
