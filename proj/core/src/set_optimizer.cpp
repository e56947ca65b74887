#include "fpreg/set_optimizer.hpp"

#include "fpreg/error.hpp"

#include <cmath>
#include <limits>
#include <random>

namespace fpreg::tomography {

namespace {

using Params = std::vector<double>;

std::pair<RotationSet, RotationSet> unpack(const Params& x, int nl, int nr) {
  RotationSet left(static_cast<std::size_t>(nl));
  RotationSet right(static_cast<std::size_t>(nr));
  for (int i = 0; i < nl; ++i) {
    left[i].phi = x[i];
    left[i].alpha = x[nl + i];
  }
  const std::size_t off = 2 * static_cast<std::size_t>(nl);
  for (int j = 0; j < nr; ++j) {
    right[j].phi = x[off + j];
    right[j].alpha = x[off + nr + j];
  }
  return {left, right};
}

double loss(const Params& x, int nl, int nr, const OptimizeOptions& o) {
  try {
    auto [left, right] = unpack(x, nl, nr);
    const ShadowEstimator est(std::move(left), std::move(right));
    return o.channel ? sample_complexity(est, *o.channel) : upper_bound_A(est);
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::kInformationallyIncomplete) return std::numeric_limits<double>::infinity();
    throw;
  }
}

}  // namespace

OptimizeResult optimize_sets(int left_size, int right_size, const OptimizeOptions& options) {
  if (left_size < 1 || right_size < 1 || options.restarts < 1 || options.iterations < 0) {
    throw Error(ErrorKind::kInvalidArgument, "optimize_sets needs positive set sizes and restarts");
  }
  const std::size_t n = 2 * static_cast<std::size_t>(left_size + right_size);
  std::mt19937_64 rng(options.seed);
  std::uniform_real_distribution<double> angle(-kPi, kPi);

  OptimizeResult best;
  best.loss = std::numeric_limits<double>::infinity();
  Params best_x;

  for (int restart = 0; restart < options.restarts; ++restart) {
    Params x(n);
    double f = std::numeric_limits<double>::infinity();
    for (int draw = 0; draw < 100 && !std::isfinite(f); ++draw) {
      for (auto& v : x) v = angle(rng);
      f = loss(x, left_size, right_size, options);
    }
    if (!std::isfinite(f)) {
      best.restart_losses.push_back(f);
      continue;
    }
    Params g(n);
    Params trial(n);
    for (int it = 0; it < options.iterations; ++it) {
      double g2 = 0.0;
      for (std::size_t k = 0; k < n; ++k) {
        Params xp = x;
        Params xm = x;
        xp[k] += options.fd_step;
        xm[k] -= options.fd_step;
        g[k] = (loss(xp, left_size, right_size, options) - loss(xm, left_size, right_size, options)) /
               (2.0 * options.fd_step);
        g2 += g[k] * g[k];
      }
      if (!std::isfinite(g2) || g2 == 0.0) break;
      bool accepted = false;
      for (double s = options.step; s > 1e-12; s *= 0.5) {
        for (std::size_t k = 0; k < n; ++k) trial[k] = x[k] - s * g[k];
        const double ft = loss(trial, left_size, right_size, options);
        if (ft <= f - 1e-4 * s * g2) {
          x = trial;
          f = ft;
          accepted = true;
          break;
        }
      }
      if (!accepted) break;
    }
    ++best.restarts_converged;
    best.restart_losses.push_back(f);
    if (f < best.loss) {
      best.loss = f;
      best_x = x;
    }
  }
  if (best.restarts_converged == 0) {
    throw Error(ErrorKind::kOptimizationFailure, "no restart produced an informationally complete set");
  }
  std::tie(best.left, best.right) = unpack(best_x, left_size, right_size);
  return best;
}

}  // namespace fpreg::tomography
