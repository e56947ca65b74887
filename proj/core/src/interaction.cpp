#include "fpreg/interaction.hpp"

#include "fpreg/error.hpp"
#include "fpreg/types.hpp"
#include "gsl_guard.hpp"

#include <gsl/gsl_integration.h>
#include <gsl/gsl_sf_hermite.h>

#include <cmath>
#include <functional>
#include <memory>
#include <ostream>

namespace fpreg {
namespace {

struct FixedDeleter {
  void operator()(gsl_integration_fixed_workspace* w) const { gsl_integration_fixed_free(w); }
};

// Integral of f(x) exp(-b x^2) over the real line.
double gauss_hermite(const std::function<double(double)>& f, double b, int nodes) {
  detail::quiet_gsl();
  std::unique_ptr<gsl_integration_fixed_workspace, FixedDeleter> w(
      gsl_integration_fixed_alloc(gsl_integration_fixed_hermite, static_cast<std::size_t>(nodes),
                                  0.0, b, 0.0, 0.0));
  if (!w) throw Error(ErrorKind::kInvalidArgument, "quadrature allocation failed");
  const double* x = gsl_integration_fixed_nodes(w.get());
  const double* wt = gsl_integration_fixed_weights(w.get());
  double sum = 0.0;
  for (int i = 0; i < nodes; ++i) sum += wt[i] * f(x[i]);
  return sum;
}

// psi_n(x) exp(x^2/2): the normalized Hermite polynomial.
double hermite_normalized(int n, double x) {
  return gsl_sf_hermite(n, x) / std::sqrt(std::ldexp(std::tgamma(n + 1.0), n) * std::sqrt(kPi));
}

void check_level(int n) {
  if (n < 0) throw Error(ErrorKind::kInvalidArgument, "negative level index");
}

}  // namespace

double ho_wavefunction(int n, double x) {
  check_level(n);
  return gsl_sf_hermite_func(n, x);
}

double quartic_overlap(int i, int j, int k, int l, int nodes) {
  check_level(i);
  check_level(j);
  check_level(k);
  check_level(l);
  if ((i + j + k + l) % 2 != 0) return 0.0;
  return gauss_hermite(
      [&](double x) {
        return hermite_normalized(i, x) * hermite_normalized(j, x) * hermite_normalized(k, x) *
               hermite_normalized(l, x);
      },
      2.0, nodes);
}

double u_matrix_element(int i, int j, int k, int l, int nodes) {
  return 0.5 * kPi * quartic_overlap(i, j, k, l, nodes);
}

InteractionTable::InteractionTable(int n_levels, int nodes) : n_levels_(n_levels) {
  if (n_levels < 1) throw Error(ErrorKind::kInvalidArgument, "interaction table needs n_levels >= 1");
  const int n = n_levels;
  values_.resize(static_cast<std::size_t>(n) * n * n * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l)
          values_[((i * n + j) * n + k) * n + l] = u_matrix_element(i, j, k, l, nodes);
}

double InteractionTable::operator()(int i, int j, int k, int l) const {
  const int n = n_levels_;
  if (i < 0 || j < 0 || k < 0 || l < 0 || i >= n || j >= n || k >= n || l >= n) {
    throw Error(ErrorKind::kInvalidArgument, "interaction index outside truncation");
  }
  return values_[((i * n + j) * n + k) * n + l];
}

void InteractionTable::write_csv(std::ostream& out) const {
  const auto old = out.precision(17);
  out << "i,j,k,l,value\n";
  const int n = n_levels_;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l)
          out << i << ',' << j << ',' << k << ',' << l << ',' << (*this)(i, j, k, l) << '\n';
  out.precision(old);
}

double level_shift(int n, int nodes) {
  check_level(n);
  const double x4 = gauss_hermite(
      [&](double x) {
        const double h = hermite_normalized(n, x);
        return h * h * x * x * x * x;
      },
      1.0, nodes);
  return -x4 / 3.0;
}

double anharmonic_corrections(int qubit_state) {
  switch (qubit_state) {
    case 0: return 2.0 * level_shift(1);
    case 1: return level_shift(0) + level_shift(2);
    default: throw Error(ErrorKind::kInvalidArgument, "qubit state must be 0 or 1");
  }
}

}  // namespace fpreg
