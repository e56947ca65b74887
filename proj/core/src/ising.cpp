#include "fpreg/ising.hpp"

#include "fpreg/effective.hpp"
#include "fpreg/error.hpp"
#include "fpreg/simplex.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <ostream>
#include <random>
#include <thread>

namespace fpreg {

double single_qubit_coupling() { return std::sqrt(kPi / 128.0); }

Eigen::Matrix2d single_qubit_effective(double /*U0*/, double U1, double delta, double /*E_R*/) {
  const double w = 0.5 * single_qubit_coupling() * U1;
  Eigen::Matrix2d h;
  h << -0.5 * delta, w, w, 0.5 * delta;
  return h;
}

Eigen::Matrix2d single_qubit_lab(double t, double U0, double U1, double delta, double E_R) {
  const double c = single_qubit_coupling() * (U0 + U1 * std::cos((E_R + delta) * t));
  Eigen::Matrix2d h;
  h << 0.5 * E_R, c, c, -0.5 * E_R;
  return h;
}

RabiMeasurement measure_rabi_frequency(double U0, double U1, double delta, double E_R, int periods,
                                       int steps_per_drive_period) {
  if (U1 == 0.0) throw Error(ErrorKind::kInvalidArgument, "Rabi measurement needs U1 != 0");
  RabiMeasurement m;
  const double omega = single_qubit_coupling() * U1;
  m.predicted = std::hypot(delta, omega);
  const double T = (periods + 0.75) * 2.0 * kPi / m.predicted;
  const double dt = 2.0 * kPi / (E_R + delta) / steps_per_drive_period;

  ComplexMatrix psi = ComplexMatrix::Zero(2, 1);
  psi(0, 0) = 1.0;
  std::vector<double> ups;
  double prev_t = 0.0;
  double prev_p = 0.0;
  propagate([&](double t) -> RealMatrix { return single_qubit_lab(t, U0, U1, delta, E_R); }, psi, T,
            dt, [&](int, double t, const ComplexMatrix& s) {
              const double p = std::norm(s(1, 0));
              const double mid = 0.5 * (omega * omega) / (m.predicted * m.predicted);
              if (prev_p < mid && p >= mid) ups.push_back(prev_t + (mid - prev_p) / (p - prev_p) * (t - prev_t));
              prev_t = t;
              prev_p = p;
            });
  if (ups.size() < 2) throw Error(ErrorKind::kInvalidArgument, "too few Rabi cycles resolved");
  m.periods = static_cast<int>(ups.size()) - 1;
  m.frequency = 2.0 * kPi * m.periods / (ups.back() - ups.front());
  return m;
}

PulseSchedule IsingConfig::schedule() const {
  PulseSchedule s;
  s.J0 = J0;
  s.U0 = U0;
  s.U1 = U1;
  s.delta = delta;
  s.E_R = E_R;
  s.T = T;
  s.eta = eta;
  return s;
}

namespace {

HamiltonianTerms ising_terms(const HamiltonianTerms& terms, ModelKind model) {
  return model == ModelKind::kSecular ? secular_terms(terms) : terms;
}

// Qubit-0 phase convention: |0> has sigma_z = +1.
constexpr std::array<double, 4> kSzSum{1.0, 0.0, 0.0, -1.0};

}  // namespace

IsingTrajectory simulate_ising_pair(const IsingConfig& cfg, const HamiltonianTerms& base) {
  const auto terms = ising_terms(base, cfg.model);
  const PulseSchedule sched = cfg.schedule();
  sched.validate();
  const double t_on = cfg.modulation_start();
  const RealMatrix fixed = cfg.E_R * terms.orbital + cfg.U0 * terms.interaction;
  const auto h_static = [&](double t) -> RealMatrix { return fixed + pulse_J(t, sched) * terms.hopping; };
  const auto h = [&](double t) -> RealMatrix {
    RealMatrix m = h_static(t);
    if (t >= t_on) m += cfg.U1 * std::cos((cfg.E_R + cfg.delta) * t) * terms.interaction;
    return m;
  };

  const RealMatrix p = build_logical_isometry(*terms.basis);
  DressedFrameTracker tracker(p);
  const ComplexMatrix psi0 = tracker.update(h_static(0.0)).cast<Complex>();

  const int per_checkpoint = std::max(1, static_cast<int>(std::lround(cfg.checkpoint / cfg.step)));
  const int n_steps = std::max(1, static_cast<int>(std::lround(cfg.T / cfg.step)));
  const double dt = cfg.T / n_steps;

  IsingTrajectory out;
  const double w = cfg.E_R + cfg.delta;
  propagate(h, psi0, cfg.T, dt, [&](int step, double t, const ComplexMatrix& psi) {
    if (step % per_checkpoint != 0 && step != n_steps) return;
    const RealMatrix& f = tracker.update(h_static(t));
    LogicalMatrix m = f.transpose().cast<Complex>() * psi;
    for (int r = 0; r < 4; ++r) m.row(r) *= std::polar(1.0, w * t * kSzSum[static_cast<std::size_t>(r)]);
    out.times.push_back(t);
    out.logical.push_back(m);
    out.populations.push_back(psi.col(0).cwiseAbs2());
  });
  return out;
}

IsingTrajectory simulate_ising_pair(const IsingConfig& config) {
  return simulate_ising_pair(config, register_terms());
}

IsingFitParams initial_fit_guess(const IsingConfig& cfg) {
  IsingFitParams p;
  p.alpha = -0.5 * omega_hopping_prefactor();
  p.beta = 0.5 * (kPi * cfg.U0 * cfg.U0 / (16.0 * cfg.E_R) - cfg.delta);
  p.gamma_x = single_qubit_coupling();
  p.gamma_x2 = 0.0;
  p.gamma_y = 0.0;
  p.kappa = -0.25 * ising_prefactor();
  return p;
}

std::vector<LogicalMatrix> ising_model_evolution(const IsingFitParams& p, const IsingConfig& cfg,
                                                 const std::vector<double>& times, double model_step) {
  const PulseSchedule sched = cfg.schedule();
  const double t_on = cfg.modulation_start();

  const Eigen::Matrix2cd sx{{0, 1}, {1, 0}};
  const Eigen::Matrix2cd sy{{0, Complex(0, -1)}, {Complex(0, 1), 0}};
  const Eigen::Matrix2cd sz{{1, 0}, {0, -1}};
  const Eigen::Matrix2cd id = Eigen::Matrix2cd::Identity();
  const auto kron = [](const Eigen::Matrix2cd& a, const Eigen::Matrix2cd& b) {
    LogicalMatrix k;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) k.block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
    return k;
  };
  const LogicalMatrix SX = kron(sx, id) + kron(id, sx);
  const LogicalMatrix SY = kron(sy, id) + kron(id, sy);
  const LogicalMatrix SZ = kron(sz, id) + kron(id, sz);
  const LogicalMatrix ZZ = kron(sz, sz);

  std::vector<LogicalMatrix> out;
  out.reserve(times.size());
  LogicalMatrix u = LogicalMatrix::Identity();
  LogicalMatrix step_u = LogicalMatrix::Identity();
  double cached_j = -1.0;
  bool cached_on = false;
  Eigen::SelfAdjointEigenSolver<LogicalMatrix> eig;
  long k = 0;
  for (double target : times) {
    const long n = std::lround(target / model_step);
    for (; k < n; ++k) {
      const double t = (k + 0.5) * model_step;
      const double j = pulse_J(t, sched);
      const bool on = t >= t_on;
      if (j != cached_j || on != cached_on) {
        const double j2u = j * j / cfg.U0;
        const double cx = on ? (p.gamma_x + p.gamma_x2 * j * j / (cfg.U0 * cfg.U0)) * cfg.U1 : 0.0;
        const double cy = on ? p.gamma_y * cfg.U1 : 0.0;
        const double cz = p.alpha * j2u + p.beta;
        const LogicalMatrix h = cx * SX + cy * SY + cz * SZ + (p.kappa * j2u) * ZZ;
        eig.compute(h);
        const Eigen::Vector4cd ph =
            (eig.eigenvalues() * (-model_step)).unaryExpr([](double x) { return std::polar(1.0, x); });
        step_u = eig.eigenvectors() * ph.asDiagonal() * eig.eigenvectors().adjoint();
        cached_j = j;
        cached_on = on;
      }
      u = step_u * u;
    }
    out.push_back(u);
  }
  return out;
}

double ising_fit_fidelity(const IsingFitParams& p, const IsingConfig& cfg, const IsingTrajectory& data,
                          double model_step) {
  if (data.times.empty()) throw Error(ErrorKind::kInvalidArgument, "empty Ising trajectory");
  const auto model = ising_model_evolution(p, cfg, data.times, model_step);
  double sum = 0.0;
  for (std::size_t i = 0; i < model.size(); ++i) {
    sum += haar_fidelity_exact(model[i].adjoint() * data.logical[i]);
  }
  return sum / static_cast<double>(model.size());
}

IsingFitResult fit_effective_ising(const IsingTrajectory& data, const IsingConfig& cfg,
                                   const IsingFitParams& start, const IsingFitOptions& opt) {
  const std::vector<double> steps{0.2, 0.01, 0.01, 0.5, 0.005, 0.2};
  IsingFitResult best;
  best.params = start;
  best.fidelity = ising_fit_fidelity(start, cfg, data, opt.model_step);
  std::mt19937_64 rng(opt.seed);
  std::normal_distribution<double> normal;
  int evaluations = 1;
  const auto objective = [&](const std::vector<double>& x) {
    ++evaluations;
    std::array<double, 6> a{};
    std::copy(x.begin(), x.end(), a.begin());
    return -ising_fit_fidelity(IsingFitParams::from_array(a), cfg, data, opt.model_step);
  };
  for (int r = 0; r < std::max(1, opt.restarts); ++r) {
    const auto base = best.params.to_array();
    std::vector<double> x0(base.begin(), base.end());
    if (r > 0) {
      for (std::size_t i = 0; i < x0.size(); ++i) x0[i] += 0.5 * steps[i] * normal(rng);
    }
    SimplexOptions so;
    so.max_iterations = opt.max_iterations;
    so.size_tolerance = 1e-8;
    const auto res = minimize_simplex(objective, x0, steps, so);
    if (-res.value > best.fidelity) {
      std::array<double, 6> a{};
      std::copy(res.x.begin(), res.x.end(), a.begin());
      best.params = IsingFitParams::from_array(a);
      best.fidelity = -res.value;
      best.converged = res.converged;
    }
  }
  best.evaluations = evaluations;
  const auto model = ising_model_evolution(best.params, cfg, {data.times.back()}, opt.model_step);
  best.final_fidelity = haar_fidelity_exact(model.back().adjoint() * data.logical.back());
  return best;
}

IsingFitResult fit_effective_ising(const IsingTrajectory& data, const IsingConfig& cfg,
                                   const IsingFitOptions& options) {
  return fit_effective_ising(data, cfg, initial_fit_guess(cfg), options);
}

std::vector<DetuningPoint> detuning_scan(const IsingConfig& base, const std::vector<double>& deltas,
                                         const IsingFitOptions& options, int threads) {
  const auto terms = register_terms();
  std::vector<DetuningPoint> out(deltas.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  const auto worker = [&] {
    for (std::size_t i = next++; i < deltas.size(); i = next++) {
      try {
        IsingConfig cfg = base;
        cfg.delta = deltas[i];
        const auto traj = simulate_ising_pair(cfg, terms);
        const auto fit = fit_effective_ising(traj, cfg, options);
        const double j2u = cfg.J0 * cfg.J0 / cfg.U0;
        const auto& p = fit.params;
        out[i] = {deltas[i], (p.gamma_x + p.gamma_x2 * j2u / cfg.U0) * cfg.U1, p.gamma_y * cfg.U1,
                  p.alpha * j2u + p.beta, p.g_prefactor() * j2u, fit.fidelity};
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  const int n = std::max(1, std::min<int>(threads, static_cast<int>(deltas.size())));
  std::vector<std::thread> pool;
  for (int t = 1; t < n; ++t) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
  return out;
}

void write_detuning_csv(std::ostream& out, const std::vector<DetuningPoint>& points) {
  const auto old = out.precision(10);
  out << "Delta,c_x,c_y,c_z,g,fidelity\n";
  for (const auto& p : points) {
    out << p.delta << ',' << p.c_x << ',' << p.c_y << ',' << p.c_z << ',' << p.g << ',' << p.fidelity << '\n';
  }
  out.precision(old);
}

}  // namespace fpreg
