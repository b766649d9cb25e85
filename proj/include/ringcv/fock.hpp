// Copyright 2026 The ringcv Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Truncated number-basis oracle. Everything here is an independent,
// brute-force route to the same physics as the covariance-matrix code:
// operators are built as sparse matrices on a truncated tensor product of
// number bases, density matrices evolve under the full master equation
// with an adaptive embedded Runge-Kutta pair, and moments are read off by
// explicit traces. It is deliberately small (at most three modes) and
// slow; its only job is to cross-check the exact Gaussian route.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include "ringcv/core.hpp"
#include "ringcv/ladder.hpp"

namespace ringcv {

using SparseOperator = Eigen::SparseMatrix<Complex>;

/// Raised when probability leaks into the top retained number state, i.e.
/// the truncation is too small for the dynamics being simulated.
class TruncationError : public Error {
  using Error::Error;
};

/// A truncated tensor product of number bases. `cutoffs[m]` is the local
/// dimension of mode m (states |0..cutoffs[m]-1>). Basis states are
/// enumerated with the first registered mode slowest.
class FockSpace {
 public:
  static constexpr std::size_t kMaxModes = 3;
  static constexpr int kMaxCutoff = 30;
  static constexpr long kMaxDimension = 1800;

  FockSpace(ModeRegistry registry, std::vector<int> cutoffs)
      : registry_(std::move(registry)), cutoffs_(std::move(cutoffs)) {
    if (registry_.size() == 0 || registry_.size() > kMaxModes) {
      throw ModeError("number-basis oracle supports 1 to 3 modes, got " +
                      std::to_string(registry_.size()));
    }
    if (cutoffs_.size() != registry_.size()) {
      throw ModeError("need one cutoff per mode");
    }
    long dim = 1;
    for (int c : cutoffs_) {
      if (c < 2 || c > kMaxCutoff) {
        throw Error("cutoffs must lie in [2, " + std::to_string(kMaxCutoff) +
                    "]");
      }
      dim *= c;
    }
    if (dim > kMaxDimension) {
      throw Error("truncated dimension " + std::to_string(dim) +
                  " exceeds the oracle cap of " +
                  std::to_string(kMaxDimension));
    }
    dim_ = dim;
  }

  FockSpace(const ModeRegistry& registry, int uniform_cutoff)
      : FockSpace(registry,
                  std::vector<int>(registry.size(), uniform_cutoff)) {}

  const ModeRegistry& registry() const { return registry_; }
  const std::vector<int>& cutoffs() const { return cutoffs_; }
  long dim() const { return dim_; }

  /// Occupation of mode m in basis state `index`.
  int occupation(long index, std::size_t mode) const {
    long rest = index;
    for (std::size_t m = registry_.size(); m-- > mode + 1;) {
      rest /= cutoffs_[m];
    }
    return static_cast<int>(rest % cutoffs_[mode]);
  }

  /// Flat index of the basis state with the given occupations.
  long index_of(const std::vector<int>& occupations) const {
    if (occupations.size() != registry_.size()) {
      throw ModeError("need one occupation per mode");
    }
    long index = 0;
    for (std::size_t m = 0; m < registry_.size(); ++m) {
      if (occupations[m] < 0 || occupations[m] >= cutoffs_[m]) {
        throw Error("occupation out of range for mode " +
                    registry_.label(m).str());
      }
      index = index * cutoffs_[m] + occupations[m];
    }
    return index;
  }

  bool operator==(const FockSpace& other) const {
    return registry_ == other.registry_ && cutoffs_ == other.cutoffs_;
  }
  bool operator!=(const FockSpace& other) const { return !(*this == other); }

 private:
  ModeRegistry registry_;
  std::vector<int> cutoffs_;
  long dim_ = 0;
};

/// Annihilation operator of `mode` on the truncated space.
inline SparseOperator annihilation_operator(const FockSpace& space,
                                            const ModeLabel& mode) {
  const std::size_t m = space.registry().index_of(mode);
  std::vector<Eigen::Triplet<Complex>> triplets;
  triplets.reserve(static_cast<std::size_t>(space.dim()));
  // Stride of one quantum of mode m in the flat index.
  long stride = 1;
  for (std::size_t k = space.registry().size(); k-- > m + 1;) {
    stride *= space.cutoffs()[k];
  }
  for (long i = 0; i < space.dim(); ++i) {
    const int n = space.occupation(i, m);
    if (n > 0) {
      triplets.emplace_back(i - stride, i, Complex(std::sqrt(double(n)), 0));
    }
  }
  SparseOperator op(space.dim(), space.dim());
  op.setFromTriplets(triplets.begin(), triplets.end());
  return op;
}

/// Compile a ladder-operator expression to a sparse matrix. Factors in a
/// term multiply left to right, i.e. the first factor acts last on kets.
inline SparseOperator sparse_operator(const FockSpace& space,
                                      const OperatorExpr& expr) {
  SparseOperator total(space.dim(), space.dim());
  for (const auto& term : expr.terms()) {
    SparseOperator product(space.dim(), space.dim());
    product.setIdentity();
    for (auto it = term.factors.rbegin(); it != term.factors.rend(); ++it) {
      SparseOperator op = annihilation_operator(space, it->mode);
      if (it->dagger) op = SparseOperator(op.adjoint());
      product = (op * product).pruned();
    }
    total += term.coeff * product;
  }
  total.makeCompressed();
  return total;
}

/// Dense density matrix on a truncated space.
class FockDensity {
 public:
  FockDensity(FockSpace space, ComplexMatrix rho)
      : space_(std::move(space)), rho_(std::move(rho)) {
    if (rho_.rows() != space_.dim() || rho_.cols() != space_.dim()) {
      throw Error("density matrix does not match the space dimension");
    }
  }

  static FockDensity vacuum(const FockSpace& space) {
    ComplexMatrix rho = ComplexMatrix::Zero(space.dim(), space.dim());
    rho(0, 0) = 1.0;
    return FockDensity(space, std::move(rho));
  }

  static FockDensity basis_state(const FockSpace& space,
                                 const std::vector<int>& occupations) {
    ComplexMatrix rho = ComplexMatrix::Zero(space.dim(), space.dim());
    const long i = space.index_of(occupations);
    rho(i, i) = 1.0;
    return FockDensity(space, std::move(rho));
  }

  static FockDensity from_pure(const FockSpace& space,
                               const ComplexVector& amplitudes) {
    if (amplitudes.size() != space.dim()) {
      throw Error("amplitude vector does not match the space dimension");
    }
    const double norm = amplitudes.norm();
    if (std::abs(norm - 1.0) > 1e-9) {
      throw Error("pure-state amplitudes are not normalized (|psi| = " +
                  std::to_string(norm) + ")");
    }
    return FockDensity(space, amplitudes * amplitudes.adjoint());
  }

  const FockSpace& space() const { return space_; }
  const ComplexMatrix& matrix() const { return rho_; }

  double trace() const { return rho_.trace().real(); }
  double purity() const { return (rho_ * rho_).trace().real(); }

  /// Population of the top retained number state of `mode`.
  double top_level_population(std::size_t mode) const {
    double pop = 0.0;
    for (long i = 0; i < space_.dim(); ++i) {
      if (space_.occupation(i, mode) == space_.cutoffs()[mode] - 1) {
        pop += rho_(i, i).real();
      }
    }
    return pop;
  }

  void hermitize() { rho_ = 0.5 * (rho_ + rho_.adjoint()).eval(); }

 private:
  FockSpace space_;
  ComplexMatrix rho_;
};

/// tr(M rho) without forming the dense product.
inline Complex trace_product(const SparseOperator& op,
                             const ComplexMatrix& rho) {
  Complex sum = 0.0;
  for (int k = 0; k < op.outerSize(); ++k) {
    for (SparseOperator::InnerIterator it(op, k); it; ++it) {
      sum += it.value() * rho(it.col(), it.row());
    }
  }
  return sum;
}

/// Expectation <M> = tr(M rho).
inline Complex fock_expectation(const FockDensity& rho,
                                const SparseOperator& op) {
  return trace_product(op, rho.matrix());
}

/// Amplitudes of a single-mode squeezed vacuum, exp[(xi/2)(a^2 -
/// a^dag^2)]|0>, on a `cutoff`-dimensional number basis: only even levels
/// are populated, c_{2n} = (-tanh xi)^n sqrt((2n)!) / (2^n n! sqrt(cosh
/// xi)). The truncated vector is renormalized; the missing tail must be
/// negligible or the normalization check in from_pure will fail.
inline ComplexVector squeezed_vacuum_amplitudes(int cutoff, double xi) {
  ComplexVector psi = ComplexVector::Zero(cutoff);
  double amp = 1.0 / std::sqrt(std::cosh(xi));
  const double tau = std::tanh(xi);
  for (int n = 0; 2 * n < cutoff; ++n) {
    psi[2 * n] = amp;
    amp *= -tau * std::sqrt(double(2 * n + 1) * double(2 * n + 2)) /
           (2.0 * (n + 1));
  }
  return psi / psi.norm();
}

/// Amplitudes of a two-mode squeezed vacuum, exp[xi(a^dag b^dag - ab)]|00>,
/// on cutoffs (da, db): c_{nn} = tanh(xi)^n / cosh(xi). As above, the
/// truncated vector is renormalized.
inline ComplexVector two_mode_squeezed_amplitudes(int cutoff_a, int cutoff_b,
                                                  double xi) {
  ComplexVector psi = ComplexVector::Zero(long(cutoff_a) * cutoff_b);
  double amp = 1.0 / std::cosh(xi);
  const double tau = std::tanh(xi);
  for (int n = 0; n < std::min(cutoff_a, cutoff_b); ++n) {
    psi[long(n) * cutoff_b + n] = amp;
    amp *= tau;
  }
  return psi / psi.norm();
}

/// Adaptive integration controls for evolve_fock.
struct FockEvolveOptions {
  double local_tolerance = 1e-10;    // per-step max-norm error target
  double truncation_threshold = 1e-8;  // allowed top-level population
  long max_steps = 200000;
};

namespace detail {

/// Right-hand side of the master equation with photon loss on `damped`.
class MasterEquationRhs {
 public:
  MasterEquationRhs(const FockSpace& space, const OperatorExpr& hamiltonian,
                    const std::vector<ModeLabel>& damped, double kappa)
      : kappa_(kappa), h_(sparse_operator(space, hamiltonian)) {
    for (const auto& mode : damped) {
      SparseOperator a = annihilation_operator(space, mode);
      number_.emplace_back((SparseOperator(a.adjoint()) * a).pruned());
      jump_.push_back(std::move(a));
    }
  }

  ComplexMatrix operator()(const ComplexMatrix& rho) const {
    const Complex i_unit(0.0, 1.0);
    ComplexMatrix out = -i_unit * (h_ * rho - rho * h_);
    for (std::size_t d = 0; d < jump_.size(); ++d) {
      out.noalias() += kappa_ * (jump_[d] * rho * jump_[d].adjoint());
      out.noalias() -= 0.5 * kappa_ * (number_[d] * rho);
      out.noalias() -= 0.5 * kappa_ * (rho * number_[d]);
    }
    return out;
  }

 private:
  double kappa_;
  SparseOperator h_;
  std::vector<SparseOperator> jump_;
  std::vector<SparseOperator> number_;
};

}  // namespace detail

/// Integrate the master equation for `time` with the Dormand-Prince 5(4)
/// embedded pair and per-step truncation checks. The trace is *not*
/// renormalized: trace preservation is a property the tests verify, not
/// one this routine enforces.
inline FockDensity evolve_fock(const FockDensity& initial,
                               const OperatorExpr& hamiltonian,
                               const std::vector<ModeLabel>& damped,
                               double kappa, double time,
                               const FockEvolveOptions& options = {}) {
  if (time < 0.0) throw Error("evolution time must be nonnegative");
  const FockSpace& space = initial.space();
  const detail::MasterEquationRhs rhs(space, hamiltonian, damped, kappa);

  // Dormand-Prince 5(4) tableau.
  static constexpr double kA[6][6] = {
      {1.0 / 5, 0, 0, 0, 0, 0},
      {3.0 / 40, 9.0 / 40, 0, 0, 0, 0},
      {44.0 / 45, -56.0 / 15, 32.0 / 9, 0, 0, 0},
      {19372.0 / 6561, -25360.0 / 2187, 64448.0 / 6561, -212.0 / 729, 0, 0},
      {9017.0 / 3168, -355.0 / 33, 46732.0 / 5247, 49.0 / 176,
       -5103.0 / 18656, 0},
      {35.0 / 384, 0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784, 11.0 / 84}};
  static constexpr double kB5[7] = {35.0 / 384,      0, 500.0 / 1113,
                                    125.0 / 192,     -2187.0 / 6784,
                                    11.0 / 84,       0};
  static constexpr double kB4[7] = {5179.0 / 57600,  0, 7571.0 / 16695,
                                    393.0 / 640,     -92097.0 / 339200,
                                    187.0 / 2100,    1.0 / 40};

  ComplexMatrix rho = initial.matrix();
  double t = 0.0;
  double dt = std::min(time, std::max(time * 1e-3, 1e-12));
  long steps = 0;
  std::array<ComplexMatrix, 7> k;

  while (t < time) {
    if (++steps > options.max_steps) {
      throw Error("master-equation integrator exceeded " +
                  std::to_string(options.max_steps) + " steps");
    }
    dt = std::min(dt, time - t);

    k[0] = rhs(rho);
    for (int s = 1; s < 7; ++s) {
      ComplexMatrix stage = rho;
      if (s < 6) {
        for (int j = 0; j < s; ++j) {
          if (kA[s - 1][j] != 0.0) stage.noalias() += (dt * kA[s - 1][j]) * k[j];
        }
      } else {
        // Seventh stage evaluates at the fifth-order solution (FSAL form).
        for (int j = 0; j < 6; ++j) {
          if (kB5[j] != 0.0) stage.noalias() += (dt * kB5[j]) * k[j];
        }
      }
      k[s] = rhs(stage);
    }

    ComplexMatrix next = rho;
    ComplexMatrix error = ComplexMatrix::Zero(rho.rows(), rho.cols());
    for (int j = 0; j < 7; ++j) {
      if (kB5[j] != 0.0) next.noalias() += (dt * kB5[j]) * k[j];
      const double diff = kB5[j] - kB4[j];
      if (diff != 0.0) error.noalias() += (dt * diff) * k[j];
    }
    const double err = error.cwiseAbs().maxCoeff();

    if (err <= options.local_tolerance) {
      rho = 0.5 * (next + next.adjoint()).eval();
      t += dt;
      // Reject runs whose support has reached the truncation edge.
      for (std::size_t m = 0; m < space.registry().size(); ++m) {
        double pop = 0.0;
        for (long i = 0; i < space.dim(); ++i) {
          if (space.occupation(i, m) == space.cutoffs()[m] - 1) {
            pop += rho(i, i).real();
          }
        }
        if (pop > options.truncation_threshold) {
          throw TruncationError(
              "top number level of mode " + space.registry().label(m).str() +
              " holds population " + std::to_string(pop) +
              "; raise the cutoff");
        }
      }
    }
    const double ratio =
        err > 0.0 ? options.local_tolerance / err : 1e4;
    dt *= std::clamp(0.9 * std::pow(ratio, 0.2), 0.2, 5.0);
  }
  return FockDensity(space, std::move(rho));
}

/// First and symmetrized second moments read from a density matrix.
struct FockMoments {
  Vector mean;
  Matrix covariance;
};

/// Quadrature moments of rho by explicit traces: mean_i = <R_i> and
/// cov_ij = <{R_i - mean_i, R_j - mean_j}>/2 in the same ordering as the
/// covariance-matrix route.
inline FockMoments covariance_from_density(const FockDensity& rho) {
  const FockSpace& space = rho.space();
  const std::size_t n_modes = space.registry().size();
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);

  std::vector<SparseOperator> quads(2 * n_modes);
  for (std::size_t m = 0; m < n_modes; ++m) {
    const SparseOperator a =
        annihilation_operator(space, space.registry().label(m));
    const SparseOperator adag(a.adjoint());
    quads[2 * m] = inv_sqrt2 * (a + adag);                        // x
    quads[2 * m + 1] = Complex(0, -1) * inv_sqrt2 * (a - adag);   // p
  }

  const long dim = static_cast<long>(2 * n_modes);
  Vector mean(dim);
  for (long i = 0; i < dim; ++i) {
    mean[i] = trace_product(quads[static_cast<std::size_t>(i)], rho.matrix())
                  .real();
  }
  Matrix cov(dim, dim);
  for (long i = 0; i < dim; ++i) {
    for (long j = i; j < dim; ++j) {
      const SparseOperator sym =
          quads[static_cast<std::size_t>(i)] * quads[static_cast<std::size_t>(j)] +
          quads[static_cast<std::size_t>(j)] * quads[static_cast<std::size_t>(i)];
      const double moment = 0.5 * trace_product(sym, rho.matrix()).real();
      cov(i, j) = cov(j, i) = moment - mean[i] * mean[j];
    }
  }
  return FockMoments{std::move(mean), std::move(cov)};
}

/// Reduce rho to the modes in `keep` (in registry order).
inline FockDensity partial_trace_fock(const FockDensity& rho,
                                      const std::vector<ModeLabel>& keep) {
  const FockSpace& space = rho.space();
  std::vector<std::size_t> kept;
  std::vector<int> kept_cutoffs;
  std::vector<ModeLabel> kept_labels;
  for (std::size_t m = 0; m < space.registry().size(); ++m) {
    const ModeLabel& label = space.registry().label(m);
    if (std::find(keep.begin(), keep.end(), label) != keep.end()) {
      kept.push_back(m);
      kept_cutoffs.push_back(space.cutoffs()[m]);
      kept_labels.push_back(label);
    }
  }
  if (kept.size() != keep.size()) {
    throw ModeError("partial trace: some requested modes are not present");
  }
  FockSpace reduced(ModeRegistry(std::move(kept_labels)), kept_cutoffs);

  ComplexMatrix out = ComplexMatrix::Zero(reduced.dim(), reduced.dim());
  std::vector<int> occ_row(space.registry().size());
  std::vector<int> occ_col(space.registry().size());
  std::vector<int> red_row(kept.size());
  std::vector<int> red_col(kept.size());
  for (long i = 0; i < space.dim(); ++i) {
    for (std::size_t m = 0; m < space.registry().size(); ++m) {
      occ_row[m] = space.occupation(i, m);
    }
    for (long j = 0; j < space.dim(); ++j) {
      bool traced_match = true;
      for (std::size_t m = 0; m < space.registry().size() && traced_match;
           ++m) {
        occ_col[m] = space.occupation(j, m);
        if (std::find(kept.begin(), kept.end(), m) == kept.end() &&
            occ_col[m] != occ_row[m]) {
          traced_match = false;
        }
      }
      if (!traced_match) continue;
      for (std::size_t s = 0; s < kept.size(); ++s) {
        red_row[s] = occ_row[kept[s]];
        red_col[s] = occ_col[kept[s]];
      }
      out(reduced.index_of(red_row), reduced.index_of(red_col)) +=
          rho.matrix()(i, j);
    }
  }
  return FockDensity(std::move(reduced), std::move(out));
}

/// Overlap tr(rho |psi><psi|) with a pure reference state given by its
/// amplitudes; validates normalization of the reference.
inline double fock_overlap(const FockDensity& rho,
                           const ComplexVector& reference) {
  if (reference.size() != rho.space().dim()) {
    throw Error("reference amplitudes do not match the space dimension");
  }
  const double norm = reference.norm();
  if (std::abs(norm - 1.0) > 1e-8) {
    throw Error("overlap reference is not normalized (|psi| = " +
                std::to_string(norm) + ")");
  }
  return (reference.adjoint() * rho.matrix() * reference)(0, 0).real();
}

}  // namespace ringcv
