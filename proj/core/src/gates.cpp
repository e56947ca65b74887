#include "fpreg/gates.hpp"

#include "fpreg/effective.hpp"
#include "fpreg/error.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <ostream>
#include <random>
#include <thread>

namespace fpreg {

LogicalMatrix polar_unitary(const LogicalMatrix& m) {
  Eigen::JacobiSVD<LogicalMatrix> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  return svd.matrixU() * svd.matrixV().adjoint();
}

double haar_fidelity_exact(const LogicalMatrix& m) {
  return ((m * m.adjoint()).trace().real() + std::norm(m.trace())) / 20.0;
}

HaarEstimate haar_fidelity_sampled(const LogicalMatrix& m, int samples, std::uint64_t seed) {
  if (samples < 2) throw Error(ErrorKind::kInvalidArgument, "need at least two Haar samples");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  double sum = 0.0;
  double sum_sq = 0.0;
  Eigen::Vector4cd psi;
  for (int s = 0; s < samples; ++s) {
    for (int i = 0; i < 4; ++i) psi(i) = Complex(normal(rng), normal(rng));
    psi.normalize();
    const double f = std::norm(psi.dot(m * psi));
    sum += f;
    sum_sq += f * f;
  }
  const double mean = sum / samples;
  const double var = std::max(0.0, (sum_sq / samples - mean * mean) * samples / (samples - 1.0));
  return {mean, std::sqrt(var / samples)};
}

double haar_fidelity(const ComplexMatrix& v_actual, const LogicalMatrix& target, const RealMatrix& p) {
  if (p.cols() != 4 || v_actual.rows() != p.rows() || v_actual.cols() != p.rows()) {
    throw Error(ErrorKind::kDimensionMismatch, "isometry and propagator dimensions differ");
  }
  const ComplexMatrix pc = p.cast<Complex>();
  const LogicalMatrix m = target.adjoint() * (pc.adjoint() * v_actual * pc);
  return haar_fidelity_exact(m);
}

LogicalMatrix cphase_target(const LogicalMatrix& raw, double phi) {
  const double a = std::arg(raw(0, 0));
  const double b = std::arg(raw(1, 1));
  const double c = std::arg(raw(2, 2));
  LogicalMatrix t = LogicalMatrix::Zero();
  t(0, 0) = std::polar(1.0, a);
  t(1, 1) = std::polar(1.0, b);
  t(2, 2) = std::polar(1.0, c);
  t(3, 3) = std::polar(1.0, b + c - a + phi);
  return t;
}

namespace {

LogicalMatrix logical_block(const RealMatrix& p, const ComplexMatrix& psi) {
  return p.transpose().cast<Complex>() * psi;
}

std::array<double, 4> column_leakage(const LogicalMatrix& m) {
  std::array<double, 4> out{};
  for (int s = 0; s < 4; ++s) out[static_cast<std::size_t>(s)] = std::max(0.0, 1.0 - m.col(s).squaredNorm());
  return out;
}

HamiltonianTerms model_terms(const HamiltonianTerms& terms, ModelKind model) {
  return model == ModelKind::kSecular ? secular_terms(terms) : terms;
}

}  // namespace

GateResult run_swap(double J, int m, ModelKind model) {
  if (J == 0.0) throw Error(ErrorKind::kDivisionByZero, "SWAP needs J != 0");
  if (m < 0) throw Error(ErrorKind::kInvalidArgument, "SWAP order m must be non-negative");
  const auto terms = model_terms(register_terms(), model);
  const RealMatrix p = build_logical_isometry(*terms.basis);
  const RealMatrix h = J * terms.hopping;
  GateResult r;
  r.duration = (2 * m + 1) * kPi / (2.0 * std::abs(J));
  r.steps = 1;
  const ComplexMatrix psi =
      propagate([&](double) { return h; }, p.cast<Complex>(), r.duration, r.duration);
  r.raw = logical_block(p, psi);
  r.unitary = polar_unitary(r.raw);
  r.leakage = column_leakage(r.raw);

  // SWAP up to a phase on each output.
  LogicalMatrix target = LogicalMatrix::Zero();
  const std::array<int, 4> image{0, 2, 1, 3};
  for (int s = 0; s < 4; ++s) {
    const Complex z = r.raw(image[static_cast<std::size_t>(s)], s);
    target(image[static_cast<std::size_t>(s)], s) = std::abs(z) > 0 ? z / std::abs(z) : Complex(1.0);
  }
  r.fidelity = haar_fidelity_exact(target.adjoint() * r.raw);
  return r;
}

double cphase_duration(const CPhaseSpec& spec) {
  if (!(spec.u0_over_j0 > 0.0)) throw Error(ErrorKind::kInvalidArgument, "U0/J0 must be positive");
  const double j0 = 1.0 / spec.u0_over_j0;
  const double g = ising_prefactor() * j0 * j0;
  const double factor = spec.adiabatic ? 1.0 - 1.25 * spec.eta : 1.0;
  return spec.target_phase / (factor * g);
}

GateResult run_cphase(const CPhaseSpec& spec, const HamiltonianTerms& base_terms) {
  const auto terms = model_terms(base_terms, spec.model);
  PulseSchedule sched;
  sched.U0 = 1.0;
  sched.J0 = spec.u0_over_j0 > 0.0 ? 1.0 / spec.u0_over_j0 : 0.0;
  sched.E_R = spec.er_over_u0;
  sched.eta = spec.eta;
  sched.adiabatic = spec.adiabatic;
  sched.T = spec.u0_over_j0 > 0.0 ? cphase_duration(spec) : 0.0;
  sched.validate();

  const RealMatrix base = sched.E_R * terms.orbital + sched.U0 * terms.interaction;
  const auto h = [&](double t) -> RealMatrix { return base + pulse_J(t, sched) * terms.hopping; };

  const RealMatrix p = build_logical_isometry(*terms.basis);
  const RealVector reference = sched.E_R * (p.transpose() * terms.orbital * p).diagonal();

  GateResult r;
  r.duration = sched.T;
  const double default_dt = spec.model == ModelKind::kSecular ? 0.05 : 0.02;
  r.steps = spec.steps > 0 ? spec.steps : std::max(2000, static_cast<int>(std::ceil(sched.T / default_dt)));

  DressedFrameTracker tracker(p);
  PhaseAccumulator phases(reference);
  std::array<double, 4> pop_change{};
  std::array<double, 4> bare_change{};
  const auto observe = [&](double t, const ComplexMatrix& psi) {
    const RealMatrix& f = tracker.update(h(t));
    ComplexVector ov(4);
    for (int j = 0; j < 4; ++j) {
      ov(j) = f.col(j).cast<Complex>().dot(psi.col(j));
      const auto js = static_cast<std::size_t>(j);
      const double bare = std::norm(p.col(j).cast<Complex>().dot(psi.col(j)));
      pop_change[js] = std::max(pop_change[js], 1.0 - std::norm(ov(j)));
      bare_change[js] = std::max(bare_change[js], 1.0 - bare);
    }
    phases.observe(t, ov);
  };

  const ComplexMatrix psi0 = p.cast<Complex>();
  observe(0.0, psi0);
  const int stride = std::max(1, spec.track_every);
  ComplexMatrix psi = psi0;
  if (sched.T > 0.0) {
    const double d = sched.T / r.steps;
    psi = propagate(h, psi0, sched.T, d, [&](int step, double t, const ComplexMatrix& state) {
      if (step % stride == 0 || step == r.steps) observe(t, state);
    });
  }

  const auto& ph = phases.phases();
  r.induced_phase = ph[0] + ph[3] - ph[1] - ph[2];
  r.raw = logical_block(p, psi);
  r.unitary = polar_unitary(r.raw);
  r.leakage = column_leakage(r.raw);
  r.population_change = pop_change;
  r.bare_population_change = bare_change;
  r.fidelity = haar_fidelity_exact(cphase_target(r.raw, spec.target_phase).adjoint() * r.raw);
  return r;
}

GateResult run_cphase(const CPhaseSpec& spec) { return run_cphase(spec, register_terms()); }

std::vector<ScanPoint> infidelity_scan(const std::vector<double>& ratios, double er_over_u0,
                                       bool adiabatic, ModelKind model, int threads, int steps) {
  const auto terms = register_terms();
  std::vector<ScanPoint> out(ratios.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  const auto worker = [&] {
    for (std::size_t i = next++; i < ratios.size(); i = next++) {
      try {
        CPhaseSpec spec;
        spec.u0_over_j0 = ratios[i];
        spec.er_over_u0 = er_over_u0;
        spec.adiabatic = adiabatic;
        spec.model = model;
        spec.steps = steps;
        const GateResult g = run_cphase(spec, terms);
        ScanPoint& pt = out[i];
        pt.u0_over_j0 = ratios[i];
        pt.er_over_u0 = er_over_u0;
        pt.adiabatic = adiabatic;
        pt.phase_exact = g.induced_phase;
        pt.phase_theory = spec.target_phase;
        pt.leakage = *std::max_element(g.leakage.begin(), g.leakage.end());
        pt.infidelity = 1.0 - g.fidelity;
        pt.exchange_amplitude = std::abs(g.raw(2, 1));
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  const int n = std::max(1, std::min<int>(threads, static_cast<int>(ratios.size())));
  std::vector<std::thread> pool;
  for (int t = 1; t < n; ++t) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
  return out;
}

SlopeFit loglog_slope(const std::vector<double>& x, const std::vector<double>& y, double lo, double hi) {
  if (x.size() != y.size()) throw Error(ErrorKind::kDimensionMismatch, "x and y lengths differ");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(y[i] >= lo && y[i] <= hi) || !(x[i] > 0.0)) continue;
    const double lx = std::log(x[i]);
    const double ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    ++n;
  }
  SlopeFit fit;
  fit.points = n;
  if (n < 2) return fit;
  const double den = n * sxx - sx * sx;
  if (den == 0.0) return fit;
  fit.slope = (n * sxy - sx * sy) / den;
  fit.intercept = (sy - fit.slope * sx) / n;
  return fit;
}

void write_scan_csv(std::ostream& out, const std::vector<ScanPoint>& points) {
  const auto old = out.precision(10);
  out << "U0_over_J0,E_R_over_U0,adiabatic,phase_exact,phase_theory,leakage,infidelity\n";
  for (const auto& p : points) {
    out << p.u0_over_j0 << ',' << p.er_over_u0 << ',' << (p.adiabatic ? 1 : 0) << ','
        << p.phase_exact << ',' << p.phase_theory << ',' << p.leakage << ',' << p.infidelity << '\n';
  }
  out.precision(old);
}

}  // namespace fpreg
