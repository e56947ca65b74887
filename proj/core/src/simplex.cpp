#include "fpreg/simplex.hpp"

#include "fpreg/error.hpp"
#include "gsl_guard.hpp"

#include <gsl/gsl_errno.h>
#include <gsl/gsl_multimin.h>

#include <cmath>
#include <limits>
#include <memory>

namespace fpreg {
namespace {

using Objective = std::function<double(const std::vector<double>&)>;

struct Context {
  const Objective* f;
  std::vector<double> scratch;
};

double trampoline(const gsl_vector* v, void* params) {
  auto* ctx = static_cast<Context*>(params);
  for (std::size_t i = 0; i < ctx->scratch.size(); ++i) ctx->scratch[i] = gsl_vector_get(v, i);
  const double y = (*ctx->f)(ctx->scratch);
  return std::isfinite(y) ? y : std::numeric_limits<double>::max();
}

struct VectorDeleter {
  void operator()(gsl_vector* v) const { gsl_vector_free(v); }
};
struct MinimizerDeleter {
  void operator()(gsl_multimin_fminimizer* m) const { gsl_multimin_fminimizer_free(m); }
};

}  // namespace

SimplexResult minimize_simplex(const Objective& f, const std::vector<double>& x0,
                               const std::vector<double>& steps, const SimplexOptions& options) {
  detail::quiet_gsl();
  const std::size_t n = x0.size();
  if (n == 0 || steps.size() != n) {
    throw Error(ErrorKind::kInvalidArgument, "simplex needs matching non-empty start and step vectors");
  }
  Context ctx{&f, std::vector<double>(n)};
  gsl_multimin_function fn{&trampoline, n, &ctx};

  std::unique_ptr<gsl_vector, VectorDeleter> x(gsl_vector_alloc(n));
  std::unique_ptr<gsl_vector, VectorDeleter> ss(gsl_vector_alloc(n));
  for (std::size_t i = 0; i < n; ++i) {
    gsl_vector_set(x.get(), i, x0[i]);
    gsl_vector_set(ss.get(), i, steps[i]);
  }
  std::unique_ptr<gsl_multimin_fminimizer, MinimizerDeleter> m(
      gsl_multimin_fminimizer_alloc(gsl_multimin_fminimizer_nmsimplex2, n));
  gsl_multimin_fminimizer_set(m.get(), &fn, x.get(), ss.get());

  SimplexResult r;
  int status = GSL_CONTINUE;
  while (status == GSL_CONTINUE && r.iterations < options.max_iterations) {
    ++r.iterations;
    if (gsl_multimin_fminimizer_iterate(m.get()) != GSL_SUCCESS) break;
    status = gsl_multimin_test_size(gsl_multimin_fminimizer_size(m.get()), options.size_tolerance);
  }
  r.converged = status == GSL_SUCCESS;
  r.value = m->fval;
  r.x.resize(n);
  for (std::size_t i = 0; i < n; ++i) r.x[i] = gsl_vector_get(m->x, i);
  return r;
}

}  // namespace fpreg
