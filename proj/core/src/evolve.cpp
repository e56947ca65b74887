#include "fpreg/evolve.hpp"

#include "fpreg/error.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <ostream>
#include <string>

namespace fpreg {

void PulseSchedule::validate() const {
  if (!(T >= 0.0)) throw Error(ErrorKind::kInvalidArgument, "pulse duration must be non-negative");
  if (adiabatic && !(eta > 0.0 && eta <= 0.5)) {
    throw Error(ErrorKind::kInvalidArgument, "ramp fraction eta must lie in (0, 0.5]");
  }
}

double pulse_J(double t, const PulseSchedule& s) {
  if (t < 0.0 || t >= s.T) return 0.0;
  if (!s.adiabatic) return s.J0;
  const double ramp = s.eta * s.T;
  if (t < ramp) {
    const double x = std::sin(kPi * t / (2.0 * ramp));
    return s.J0 * x * x;
  }
  if (t < s.T - ramp) return s.J0;
  const double x = std::sin(0.5 * kPi * (1.0 - (t - (s.T - ramp)) / ramp));
  return s.J0 * x * x;
}

double pulse_U(double t, const PulseSchedule& s) {
  return s.U0 + s.U1 * std::cos((s.E_R + s.delta) * t);
}

namespace {

void check_symmetric(const RealMatrix& h) {
  if (h.rows() != h.cols()) throw Error(ErrorKind::kDimensionMismatch, "Hamiltonian is not square");
  const double scale = 1.0 + h.cwiseAbs().maxCoeff();
  if ((h - h.transpose()).cwiseAbs().maxCoeff() > 1e-10 * scale) {
    throw Error(ErrorKind::kNonHermitian, "Hamiltonian is not Hermitian");
  }
}

// psi <- V exp(-i w d) V^T psi, with the real and imaginary parts kept apart.
void apply_step(const Eigen::SelfAdjointEigenSolver<RealMatrix>& eig, double d, ComplexMatrix& psi) {
  const RealMatrix& v = eig.eigenvectors();
  const RealMatrix re = v.transpose() * psi.real();
  const RealMatrix im = v.transpose() * psi.imag();
  RealMatrix new_re(re.rows(), re.cols());
  RealMatrix new_im(re.rows(), re.cols());
  for (Eigen::Index n = 0; n < re.rows(); ++n) {
    const double c = std::cos(eig.eigenvalues()(n) * d);
    const double s = -std::sin(eig.eigenvalues()(n) * d);
    new_re.row(n) = c * re.row(n) - s * im.row(n);
    new_im.row(n) = s * re.row(n) + c * im.row(n);
  }
  psi.real() = v * new_re;
  psi.imag() = v * new_im;
}

int step_count(double T, double step) {
  if (T == 0.0) return 0;
  if (!(step > 0.0)) throw Error(ErrorKind::kInvalidArgument, "time step must be positive");
  return std::max(1, static_cast<int>(std::ceil(T / step - 1e-9)));
}

double mean_state_fidelity(const ComplexMatrix& a, const ComplexMatrix& b) {
  double f = 0.0;
  for (Eigen::Index j = 0; j < a.cols(); ++j) f += std::norm(a.col(j).dot(b.col(j)));
  return f / static_cast<double>(a.cols());
}

double wrap(double x) { return std::remainder(x, 2.0 * kPi); }

}  // namespace

Trajectory evolve(const HamiltonianFn& h, const ComplexMatrix& psi0, double T, double step,
                  const EvolveOptions& options) {
  if (T < 0.0) throw Error(ErrorKind::kInvalidArgument, "duration must be non-negative");
  const int n = step_count(T, step);
  const double d = n > 0 ? T / n : 0.0;
  Trajectory traj;
  traj.times.push_back(0.0);
  traj.states.push_back(psi0);
  ComplexMatrix psi = psi0;
  Eigen::SelfAdjointEigenSolver<RealMatrix> eig;
  for (int k = 0; k < n; ++k) {
    const RealMatrix hk = h((k + 0.5) * d);
    check_symmetric(hk);
    if (hk.rows() != psi.rows()) {
      throw Error(ErrorKind::kDimensionMismatch, "Hamiltonian and state dimensions differ");
    }
    eig.compute(hk);
    apply_step(eig, d, psi);
    const double t = (k + 1) * d;
    if (options.observer) options.observer(k + 1, t, psi);
    const bool last = k + 1 == n;
    if (last || (options.store_every > 0 && (k + 1) % options.store_every == 0)) {
      traj.times.push_back(t);
      traj.states.push_back(psi);
    }
  }
  return traj;
}

ComplexMatrix propagate(const HamiltonianFn& h, const ComplexMatrix& psi0, double T, double step,
                        const StepObserver& observer) {
  EvolveOptions opt;
  opt.observer = observer;
  return evolve(h, psi0, T, step, opt).final_states();
}

StepChoice choose_step(const HamiltonianFn& h, const ComplexMatrix& psi0, double T, double tolerance,
                       int grid, int max_halvings) {
  if (!(tolerance > 0.0)) throw Error(ErrorKind::kInvalidArgument, "tolerance must be positive");
  StepChoice out;
  if (T == 0.0) return out;
  const double eps = T / (16.0 * grid);
  for (int g = 0; g < grid; ++g) {
    const double t = T * (g + 0.5) / grid;
    const RealMatrix dh = (h(t + eps) - h(t - eps)) / (2.0 * eps);
    Eigen::SelfAdjointEigenSolver<RealMatrix> eig(dh, Eigen::EigenvaluesOnly);
    out.max_slew = std::max(out.max_slew, eig.eigenvalues().cwiseAbs().maxCoeff());
  }
  out.step = out.max_slew > 0.0 ? std::min(T, std::sqrt(tolerance / out.max_slew)) : T;
  ComplexMatrix coarse = propagate(h, psi0, T, out.step);
  for (;;) {
    ComplexMatrix fine = propagate(h, psi0, T, out.step / 2.0);
    out.halving_gap = 1.0 - mean_state_fidelity(coarse, fine);
    if (out.halving_gap <= tolerance || out.halvings >= max_halvings) break;
    out.step /= 2.0;
    ++out.halvings;
    coarse = std::move(fine);
  }
  return out;
}

DressedFrameTracker::DressedFrameTracker(RealMatrix initial_frame, double cluster_tol,
                                         double min_overlap)
    : frame_(std::move(initial_frame)),
      energies_(RealVector::Zero(frame_.cols())),
      cluster_tol_(cluster_tol),
      min_overlap_(min_overlap) {
  for (Eigen::Index j = 0; j < frame_.cols(); ++j) frame_.col(j).normalize();
}

const RealMatrix& DressedFrameTracker::update(const RealMatrix& h) {
  check_symmetric(h);
  if (h.rows() != frame_.rows()) {
    throw Error(ErrorKind::kDimensionMismatch, "frame and Hamiltonian dimensions differ");
  }
  Eigen::SelfAdjointEigenSolver<RealMatrix> eig(h);
  const RealVector& e = eig.eigenvalues();
  const RealMatrix& v = eig.eigenvectors();
  const Eigen::Index dim = e.size();
  const double tol = cluster_tol_ * std::max(e(dim - 1) - e(0), 1e-300);

  // Chain consecutive eigenvalues closer than tol into clusters.
  std::vector<Eigen::Index> cluster_of(static_cast<std::size_t>(dim));
  std::vector<std::pair<Eigen::Index, Eigen::Index>> clusters;
  for (Eigen::Index n = 0; n < dim; ++n) {
    if (n == 0 || e(n) - e(n - 1) > tol) clusters.push_back({n, n});
    clusters.back().second = n;
    cluster_of[static_cast<std::size_t>(n)] = static_cast<Eigen::Index>(clusters.size() - 1);
  }

  const RealMatrix overlaps = v.transpose() * frame_;
  std::vector<std::vector<Eigen::Index>> members(clusters.size());
  for (Eigen::Index j = 0; j < frame_.cols(); ++j) {
    Eigen::Index best = 0;
    overlaps.col(j).cwiseAbs().maxCoeff(&best);
    members[static_cast<std::size_t>(cluster_of[static_cast<std::size_t>(best)])].push_back(j);
  }

  RealMatrix next = frame_;
  for (std::size_t c = 0; c < clusters.size(); ++c) {
    const auto& tracked = members[c];
    if (tracked.empty()) continue;
    const auto [lo, hi] = clusters[c];
    const Eigen::Index size = hi - lo + 1;
    if (static_cast<Eigen::Index>(tracked.size()) > size) {
      throw Error(ErrorKind::kAdiabaticityFailure,
                  "several tracked states collapsed onto one dressed level");
    }
    RealMatrix a(size, static_cast<Eigen::Index>(tracked.size()));
    for (std::size_t m = 0; m < tracked.size(); ++m) {
      a.col(static_cast<Eigen::Index>(m)) = overlaps.col(tracked[m]).segment(lo, size);
      const double weight = a.col(static_cast<Eigen::Index>(m)).squaredNorm();
      if (weight < min_overlap_) {
        throw Error(ErrorKind::kAdiabaticityFailure,
                    "tracked state lost its dressed eigenstate (weight " + std::to_string(weight) + ")");
      }
    }
    Eigen::JacobiSVD<RealMatrix> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const RealMatrix q = svd.matrixU() * svd.matrixV().transpose();
    const RealMatrix moved = v.middleCols(lo, size) * q;
    for (std::size_t m = 0; m < tracked.size(); ++m) {
      next.col(tracked[m]) = moved.col(static_cast<Eigen::Index>(m));
    }
  }
  frame_ = std::move(next);
  for (Eigen::Index j = 0; j < frame_.cols(); ++j) energies_(j) = frame_.col(j).dot(h * frame_.col(j));
  return frame_;
}

PhaseAccumulator::PhaseAccumulator(RealVector reference_energies, double min_overlap)
    : reference_(std::move(reference_energies)), min_overlap_(min_overlap) {
  phases_.assign(static_cast<std::size_t>(reference_.size()), 0.0);
  last_raw_ = phases_;
}

void PhaseAccumulator::observe(double t, const ComplexVector& overlaps) {
  if (overlaps.size() != reference_.size()) {
    throw Error(ErrorKind::kDimensionMismatch, "overlap count differs from tracked state count");
  }
  for (Eigen::Index j = 0; j < overlaps.size(); ++j) {
    if (std::abs(overlaps(j)) < min_overlap_) {
      throw Error(ErrorKind::kAdiabaticityFailure,
                  "overlap with dressed state fell to " + std::to_string(std::abs(overlaps(j))));
    }
    const auto js = static_cast<std::size_t>(j);
    const double raw = std::arg(overlaps(j)) + reference_(j) * t;
    phases_[js] = started_ ? phases_[js] + wrap(raw - last_raw_[js]) : wrap(raw);
    last_raw_[js] = raw;
  }
  started_ = true;
}

std::vector<std::vector<double>> accumulated_phase(const Trajectory& traj, const HamiltonianFn& frame_h,
                                                   const RealMatrix& initial_frame,
                                                   const RealVector& reference_energies) {
  DressedFrameTracker tracker(initial_frame);
  PhaseAccumulator acc(reference_energies);
  std::vector<std::vector<double>> out;
  out.reserve(traj.times.size());
  for (std::size_t i = 0; i < traj.times.size(); ++i) {
    const RealMatrix& f = tracker.update(frame_h(traj.times[i]));
    const ComplexMatrix& psi = traj.states[i];
    ComplexVector ov(f.cols());
    for (Eigen::Index j = 0; j < f.cols(); ++j) ov(j) = f.col(j).cast<Complex>().dot(psi.col(j));
    acc.observe(traj.times[i], ov);
    out.push_back(acc.phases());
  }
  return out;
}

void write_trajectory_csv(std::ostream& out, const Trajectory& traj, int column) {
  if (traj.states.empty()) return;
  const Eigen::Index dim = traj.states.front().rows();
  const auto old = out.precision(12);
  out << "time";
  for (Eigen::Index i = 0; i < dim; ++i) out << ",pop_" << i;
  const std::size_t n_phase = traj.phases.empty() ? 0 : traj.phases.front().size();
  for (std::size_t j = 0; j < n_phase; ++j) out << ",phase_" << j;
  out << '\n';
  for (std::size_t k = 0; k < traj.times.size(); ++k) {
    out << traj.times[k];
    for (Eigen::Index i = 0; i < dim; ++i) out << ',' << std::norm(traj.states[k](i, column));
    if (k < traj.phases.size()) {
      for (double p : traj.phases[k]) out << ',' << p;
    }
    out << '\n';
  }
  out.precision(old);
}

}  // namespace fpreg
