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

// Gaussian-state core: mode bookkeeping, covariance matrices, symplectic maps.
//
// Conventions (used consistently across the library):
//  * hbar = 1, annihilation a = (x + i p)/sqrt(2), so vacuum Var(x) = 1/2.
//  * Quadrature ordering R = (x_1, p_1, ..., x_M, p_M); mode i owns rows
//    2i (x) and 2i+1 (p).
//  * Commutators [R_i, R_j] = i Omega_ij with Omega block-diagonal in
//    [[0, 1], [-1, 0]] blocks.
//  * Covariance sigma_ij = (1/2) <{R_i - <R_i>, R_j - <R_j>}>; vacuum is
//    sigma = I/2.
//  * A Gaussian unitary U acts on states as rho -> U rho U^dag. Its
//    phase-space matrix S is defined through U^dag R U = S R, so means map
//    as <R> -> S <R> and covariances as sigma -> S sigma S^T. Applying U
//    then V corresponds to the single matrix S_V * S_U.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

namespace ringcv {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using Complex = std::complex<double>;

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// A covariance matrix failed the uncertainty-principle check.
class PhysicalityError : public Error {
 public:
  explicit PhysicalityError(const std::string& what) : Error(what) {}
};

/// Thrown when an operation receives modes that are not in the registry,
/// duplicated, or otherwise malformed.
class ModeError : public Error {
 public:
  explicit ModeError(const std::string& what) : Error(what) {}
};

// ---------------------------------------------------------------------------
// Mode labels and registries
// ---------------------------------------------------------------------------

/// Identity of one bosonic mode: a ring-cavity field running in one of the
/// two directions, or a collective atomic mode of momentum order m in
/// {0, +2, -2} (units of the cavity wave number k) belonging to ensemble 1
/// or 2.
struct ModeLabel {
  enum class Kind { CavityPlus, CavityMinus, Collective };

  Kind kind = Kind::CavityPlus;
  int ensemble = 0;  // 1 or 2, Collective only
  int order = 0;     // 0, +2 or -2, Collective only

  static ModeLabel cavity_plus() { return {Kind::CavityPlus, 0, 0}; }
  static ModeLabel cavity_minus() { return {Kind::CavityMinus, 0, 0}; }
  static ModeLabel collective(int ensemble, int order) {
    if (ensemble != 1 && ensemble != 2) {
      throw ModeError("collective mode ensemble must be 1 or 2, got " +
                      std::to_string(ensemble));
    }
    if (order != 0 && order != 2 && order != -2) {
      throw ModeError("collective mode order must be 0, +2 or -2, got " +
                      std::to_string(order));
    }
    return {Kind::Collective, ensemble, order};
  }

  bool is_cavity() const { return kind != Kind::Collective; }

  friend bool operator==(const ModeLabel& a, const ModeLabel& b) {
    return a.kind == b.kind && a.ensemble == b.ensemble && a.order == b.order;
  }
  friend bool operator!=(const ModeLabel& a, const ModeLabel& b) {
    return !(a == b);
  }

  std::string str() const {
    switch (kind) {
      case Kind::CavityPlus:
        return "a+";
      case Kind::CavityMinus:
        return "a-";
      case Kind::Collective:
        break;
    }
    std::string m = order == 0 ? "C0k" : (order > 0 ? "C2k" : "C-2k");
    return m + "(" + std::to_string(ensemble) + ")";
  }
};

/// Ordered list of the modes a state or transform acts on. The canonical
/// ordering interleaves nothing: cavities first, then each ensemble's
/// collective modes in order (0, +2, -2).
class ModeRegistry {
 public:
  ModeRegistry() = default;

  explicit ModeRegistry(std::vector<ModeLabel> labels)
      : labels_(std::move(labels)) {
    for (std::size_t i = 0; i < labels_.size(); ++i) {
      for (std::size_t j = i + 1; j < labels_.size(); ++j) {
        if (labels_[i] == labels_[j]) {
          throw ModeError("duplicate mode label " + labels_[i].str());
        }
      }
    }
  }

  /// Full ring-cavity registry: [a+, a-, C0k(1), C2k(1), C-2k(1), ...],
  /// truncated to `n_ensembles` in {1, 2}.
  static ModeRegistry canonical(int n_ensembles) {
    if (n_ensembles != 1 && n_ensembles != 2) {
      throw ModeError("ensemble count must be 1 or 2, got " +
                      std::to_string(n_ensembles));
    }
    std::vector<ModeLabel> labels{ModeLabel::cavity_plus(),
                                  ModeLabel::cavity_minus()};
    for (int n = 1; n <= n_ensembles; ++n) {
      labels.push_back(ModeLabel::collective(n, 0));
      labels.push_back(ModeLabel::collective(n, 2));
      labels.push_back(ModeLabel::collective(n, -2));
    }
    return ModeRegistry(std::move(labels));
  }

  std::size_t size() const { return labels_.size(); }
  std::size_t dim() const { return 2 * labels_.size(); }
  const std::vector<ModeLabel>& labels() const { return labels_; }
  const ModeLabel& label(std::size_t i) const { return labels_.at(i); }

  bool contains(const ModeLabel& label) const {
    return find(label).has_value();
  }

  /// Index of `label`; throws ModeError if absent.
  std::size_t index_of(const ModeLabel& label) const {
    if (auto idx = find(label)) return *idx;
    throw ModeError("mode " + label.str() + " is not in the registry");
  }

  std::size_t x_index(const ModeLabel& label) const {
    return 2 * index_of(label);
  }
  std::size_t p_index(const ModeLabel& label) const {
    return 2 * index_of(label) + 1;
  }

  friend bool operator==(const ModeRegistry& a, const ModeRegistry& b) {
    return a.labels_ == b.labels_;
  }
  friend bool operator!=(const ModeRegistry& a, const ModeRegistry& b) {
    return !(a == b);
  }

  std::string str() const {
    std::string out = "[";
    for (std::size_t i = 0; i < labels_.size(); ++i) {
      if (i) out += ", ";
      out += labels_[i].str();
    }
    return out + "]";
  }

 private:
  std::optional<std::size_t> find(const ModeLabel& label) const {
    for (std::size_t i = 0; i < labels_.size(); ++i) {
      if (labels_[i] == label) return i;
    }
    return std::nullopt;
  }

  std::vector<ModeLabel> labels_;
};

// ---------------------------------------------------------------------------
// Symplectic form and eigenvalues
// ---------------------------------------------------------------------------

/// Block-diagonal symplectic form for `n_modes` modes.
inline Matrix symplectic_form(std::size_t n_modes) {
  Matrix omega = Matrix::Zero(2 * n_modes, 2 * n_modes);
  for (std::size_t i = 0; i < n_modes; ++i) {
    omega(2 * i, 2 * i + 1) = 1.0;
    omega(2 * i + 1, 2 * i) = -1.0;
  }
  return omega;
}

/// Symplectic spectrum of a covariance matrix: the M nonnegative numbers
/// nu_i such that the eigenvalues of i*Omega*sigma are {+-nu_i}. Returned
/// ascending. A physical state has every nu_i >= 1/2.
inline std::vector<double> symplectic_eigenvalues(const Matrix& cov) {
  if (cov.rows() != cov.cols() || cov.rows() % 2 != 0) {
    throw Error("covariance must be square with even dimension");
  }
  const std::size_t n_modes = static_cast<std::size_t>(cov.rows()) / 2;
  // With R = sqrt(sigma), the matrix M = R * Omega * R is antisymmetric and
  // similar to Omega * sigma, so its singular values are the symplectic
  // eigenvalues, each appearing twice. This stays on symmetric/SVD solves
  // throughout: a general nonsymmetric solve of Omega * sigma can fail to
  // converge outright on the near-degenerate spectra that steady states
  // produce (many modes sitting at exactly nu = 1/2).
  Eigen::SelfAdjointEigenSolver<Matrix> sym(0.5 * (cov + cov.transpose()));
  if (sym.info() != Eigen::Success) {
    throw Error("eigendecomposition of the covariance failed to converge");
  }
  // Clamp rounding-level negatives; truly indefinite input loses rank here
  // and surfaces as a symplectic eigenvalue near zero, which callers reject.
  const Vector clamped = sym.eigenvalues().cwiseMax(0.0);
  const Matrix root = sym.eigenvectors() * clamped.cwiseSqrt().asDiagonal() *
                      sym.eigenvectors().transpose();
  const Matrix skew = root * symplectic_form(n_modes) * root;
  Eigen::JacobiSVD<Matrix> svd(skew);
  // Singular values arrive in descending order, the i-th value twice.
  std::vector<double> nus(n_modes);
  for (std::size_t i = 0; i < n_modes; ++i) {
    nus[i] = 0.5 * (svd.singularValues()[static_cast<long>(2 * i)] +
                    svd.singularValues()[static_cast<long>(2 * i + 1)]);
  }
  std::reverse(nus.begin(), nus.end());
  return nus;
}

// ---------------------------------------------------------------------------
// Gaussian states
// ---------------------------------------------------------------------------

namespace detail {

inline void check_covariance(const Matrix& cov, std::size_t n_modes,
                             double symmetry_rtol = 1e-12,
                             double physicality_atol = 1e-9) {
  if (static_cast<std::size_t>(cov.rows()) != 2 * n_modes ||
      static_cast<std::size_t>(cov.cols()) != 2 * n_modes) {
    throw Error("covariance dimension does not match the registry");
  }
  const double scale = std::max(1.0, cov.cwiseAbs().maxCoeff());
  const double asym = (cov - cov.transpose()).cwiseAbs().maxCoeff();
  if (asym > symmetry_rtol * scale) {
    throw PhysicalityError("covariance is not symmetric (max asymmetry " +
                           std::to_string(asym) + ")");
  }
  const auto nus = symplectic_eigenvalues(cov);
  if (!nus.empty() && nus.front() < 0.5 - physicality_atol) {
    throw PhysicalityError(
        "covariance violates the uncertainty principle: min symplectic "
        "eigenvalue " +
        std::to_string(nus.front()) + " < 1/2");
  }
}

}  // namespace detail

/// Zero-mean-capable Gaussian state: mode registry, mean vector and
/// covariance matrix. Construction validates symmetry and physicality.
class GaussianState {
 public:
  GaussianState(ModeRegistry registry, Vector mean, Matrix cov)
      : registry_(std::move(registry)),
        mean_(std::move(mean)),
        cov_(0.5 * (cov + cov.transpose())) {
    if (static_cast<std::size_t>(mean_.size()) != registry_.dim()) {
      throw Error("mean dimension does not match the registry");
    }
    detail::check_covariance(cov, registry_.size());
  }

  const ModeRegistry& registry() const { return registry_; }
  const Vector& mean() const { return mean_; }
  const Matrix& covariance() const { return cov_; }
  std::size_t n_modes() const { return registry_.size(); }

  /// Symmetrized second moment Var(q) = <q^2> - <q>^2 for the quadrature at
  /// row `index`.
  double variance(std::size_t index) const {
    return cov_(static_cast<long>(index), static_cast<long>(index));
  }

  /// Mean photon number of one mode: (<x^2> + <p^2> - 1)/2 for zero mean.
  double photon_number(const ModeLabel& mode) const {
    const auto x = static_cast<long>(registry_.x_index(mode));
    const auto p = static_cast<long>(registry_.p_index(mode));
    return 0.5 * (cov_(x, x) + cov_(p, p) + mean_[x] * mean_[x] +
                  mean_[p] * mean_[p] - 1.0);
  }

 private:
  ModeRegistry registry_;
  Vector mean_;
  Matrix cov_;
};

/// Vacuum on every registered mode: zero mean, covariance I/2.
inline GaussianState vacuum_state(const ModeRegistry& registry) {
  const auto dim = static_cast<long>(registry.dim());
  return GaussianState(registry, Vector::Zero(dim),
                       0.5 * Matrix::Identity(dim, dim));
}

// ---------------------------------------------------------------------------
// Symplectic transforms
// ---------------------------------------------------------------------------

/// Linear phase-space map S (with S Omega S^T = Omega) over a fixed
/// registry. See the header comment for the direction convention.
class SymplecticTransform {
 public:
  SymplecticTransform(ModeRegistry registry, Matrix matrix)
      : registry_(std::move(registry)), matrix_(std::move(matrix)) {
    if (static_cast<std::size_t>(matrix_.rows()) != registry_.dim() ||
        static_cast<std::size_t>(matrix_.cols()) != registry_.dim()) {
      throw Error("transform dimension does not match the registry");
    }
  }

  static SymplecticTransform identity(const ModeRegistry& registry) {
    const auto dim = static_cast<long>(registry.dim());
    return SymplecticTransform(registry, Matrix::Identity(dim, dim));
  }

  const ModeRegistry& registry() const { return registry_; }
  const Matrix& matrix() const { return matrix_; }

  /// Deviation from the symplectic condition, max |S Omega S^T - Omega|.
  double symplectic_residual() const {
    const Matrix omega = symplectic_form(registry_.size());
    return (matrix_ * omega * matrix_.transpose() - omega)
        .cwiseAbs()
        .maxCoeff();
  }

  /// Composition: (b * a) is "apply a first, then b".
  friend SymplecticTransform operator*(const SymplecticTransform& b,
                                       const SymplecticTransform& a) {
    if (a.registry_ != b.registry_) {
      throw ModeError("cannot compose transforms over different registries");
    }
    return SymplecticTransform(a.registry_, b.matrix_ * a.matrix_);
  }

  SymplecticTransform inverse() const {
    // S^{-1} = Omega^T S^T Omega for symplectic S; cheaper and more stable
    // than a generic inverse.
    const Matrix omega = symplectic_form(registry_.size());
    return SymplecticTransform(registry_,
                               omega.transpose() * matrix_.transpose() * omega);
  }

 private:
  ModeRegistry registry_;
  Matrix matrix_;
};

/// Apply a symplectic map to a state: mean -> S mean, sigma -> S sigma S^T.
/// Validates the symplectic condition and the registries' compatibility.
inline GaussianState apply_symplectic(const GaussianState& state,
                                      const SymplecticTransform& transform,
                                      double symplectic_atol = 1e-12) {
  if (state.registry() != transform.registry()) {
    throw ModeError("state and transform registries differ: " +
                    state.registry().str() + " vs " +
                    transform.registry().str());
  }
  const double residual = transform.symplectic_residual();
  if (residual > symplectic_atol) {
    throw Error("matrix is not symplectic: |S Omega S^T - Omega| = " +
                std::to_string(residual));
  }
  const Matrix& s = transform.matrix();
  return GaussianState(state.registry(), s * state.mean(),
                       s * state.covariance() * s.transpose());
}

/// Reduced state on `keep` (in the order given): principal submatrix of the
/// covariance plus matching mean entries. Partial trace of a Gaussian state
/// is again Gaussian, so nothing else is needed.
inline GaussianState partial_state(const GaussianState& state,
                                   const std::vector<ModeLabel>& keep) {
  if (keep.empty()) throw ModeError("cannot reduce to zero modes");
  std::vector<std::size_t> rows;
  rows.reserve(2 * keep.size());
  for (const auto& label : keep) {
    rows.push_back(state.registry().x_index(label));
    rows.push_back(state.registry().p_index(label));
  }
  const auto dim = static_cast<long>(rows.size());
  Vector mean(dim);
  Matrix cov(dim, dim);
  for (long i = 0; i < dim; ++i) {
    mean[i] = state.mean()[static_cast<long>(rows[static_cast<std::size_t>(i)])];
    for (long j = 0; j < dim; ++j) {
      cov(i, j) = state.covariance()(
          static_cast<long>(rows[static_cast<std::size_t>(i)]),
          static_cast<long>(rows[static_cast<std::size_t>(j)]));
    }
  }
  return GaussianState(ModeRegistry(keep), std::move(mean), std::move(cov));
}

/// Purity tr(rho^2) = 1 / (2^M sqrt(det sigma)).
inline double purity(const GaussianState& state) {
  const double det = state.covariance().determinant();
  if (det <= 0.0) {
    throw PhysicalityError("covariance determinant is not positive: " +
                           std::to_string(det));
  }
  return 1.0 /
         (std::pow(2.0, static_cast<double>(state.n_modes())) * std::sqrt(det));
}

/// Symplectic spectrum of a state's covariance, ascending.
inline std::vector<double> symplectic_eigenvalues(const GaussianState& state) {
  return symplectic_eigenvalues(state.covariance());
}

}  // namespace ringcv
