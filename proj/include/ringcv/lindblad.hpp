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

// Exact Gaussian dynamics of a bilinear Hamiltonian with cavity photon
// loss. The master equation
//   drho/dt = -i[H, rho] + (kappa/2) sum_d (2 a_d rho a_d^dag
//             - a_d^dag a_d rho - rho a_d^dag a_d)
// closes on first and second moments:
//   d<R>/dt  = A <R>,
//   dsigma/dt = A sigma + sigma A^T + D,
// with A = Omega G - (kappa/2) P_damped and D = (kappa/2) P_damped, where
// P_damped projects onto the damped modes' quadratures. Finite-time
// propagation uses one matrix exponential of the stacked block system; the
// stationary covariance solves the Lyapunov equation A sigma + sigma A^T
// + D = 0.

#include <algorithm>
#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include <unsupported/Eigen/KroneckerProduct>
#include <unsupported/Eigen/MatrixFunctions>

#include "ringcv/core.hpp"
#include "ringcv/ladder.hpp"

namespace ringcv {

/// Moment dynamics of one damped bilinear system.
struct DriftDiffusion {
  ModeRegistry registry;
  Matrix drift;      // A
  Matrix diffusion;  // D
  double kappa = 0.0;
};

/// Raised by steady_state / convergence_time when the drift has an
/// eigenvalue at or right of the imaginary axis; carries the offending
/// eigenvalue and the modes its eigenvector lives on.
class NotHurwitzError : public Error {
 public:
  NotHurwitzError(const std::string& what, Complex eigenvalue,
                  std::vector<ModeLabel> modes)
      : Error(what),
        eigenvalue_(eigenvalue),
        implicated_modes_(std::move(modes)) {}

  Complex eigenvalue() const { return eigenvalue_; }
  const std::vector<ModeLabel>& implicated_modes() const {
    return implicated_modes_;
  }

 private:
  Complex eigenvalue_;
  std::vector<ModeLabel> implicated_modes_;
};

/// Assemble A and D for `hamiltonian` with photon loss at rate kappa on
/// each mode in `damped`.
inline DriftDiffusion drift_diffusion(const QuadraticHamiltonian& hamiltonian,
                                      const std::vector<ModeLabel>& damped,
                                      double kappa) {
  if (kappa < 0.0) throw Error("kappa must be nonnegative");
  const auto dim = static_cast<long>(hamiltonian.registry.dim());
  Matrix projector = Matrix::Zero(dim, dim);
  for (const auto& mode : damped) {
    const auto x = static_cast<long>(hamiltonian.registry.x_index(mode));
    projector(x, x) = 1.0;
    projector(x + 1, x + 1) = 1.0;
  }
  const Matrix omega = symplectic_form(hamiltonian.registry.size());
  return DriftDiffusion{hamiltonian.registry,
                        omega * hamiltonian.form - 0.5 * kappa * projector,
                        0.5 * kappa * projector, kappa};
}

namespace detail {

/// Eigen-decompose the (nonsymmetric) drift without silently returning
/// garbage: the real QR iteration can fail to converge on the degenerate
/// spectra these drifts routinely have, so fall back to the complex Schur
/// route and throw only if both give up.
struct DriftEigensystem {
  Eigen::VectorXcd values;
  Eigen::MatrixXcd vectors;  // empty unless requested
};

inline DriftEigensystem drift_eigensystem(const Matrix& drift,
                                          bool with_vectors) {
  Eigen::EigenSolver<Matrix> real_solver(drift, with_vectors);
  if (real_solver.info() == Eigen::Success) {
    DriftEigensystem out;
    out.values = real_solver.eigenvalues();
    if (with_vectors) out.vectors = real_solver.eigenvectors();
    return out;
  }
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> complex_solver(
      drift.cast<Complex>(), with_vectors);
  if (complex_solver.info() != Eigen::Success) {
    throw Error("drift eigendecomposition failed to converge");
  }
  DriftEigensystem out;
  out.values = complex_solver.eigenvalues();
  if (with_vectors) out.vectors = complex_solver.eigenvectors();
  return out;
}

}  // namespace detail

/// Drift eigenvalues sorted by descending real part (then imaginary part,
/// for a deterministic order).
inline std::vector<Complex> drift_spectrum(const DriftDiffusion& dd) {
  const detail::DriftEigensystem eigensystem =
      detail::drift_eigensystem(dd.drift, false);
  std::vector<Complex> eigs(static_cast<std::size_t>(dd.drift.rows()));
  for (long i = 0; i < dd.drift.rows(); ++i) {
    eigs[static_cast<std::size_t>(i)] = eigensystem.values[i];
  }
  std::sort(eigs.begin(), eigs.end(), [](const Complex& a, const Complex& b) {
    if (a.real() != b.real()) return a.real() > b.real();
    return a.imag() > b.imag();
  });
  return eigs;
}

/// Largest real part over the drift spectrum.
inline double spectral_abscissa(const DriftDiffusion& dd) {
  return drift_spectrum(dd).front().real();
}

namespace detail {

/// Modes carrying at least 10% of an eigenvector's weight.
inline std::vector<ModeLabel> eigenvector_modes(const ModeRegistry& registry,
                                                const Eigen::VectorXcd& v) {
  std::vector<double> weights(registry.size(), 0.0);
  double total = 0.0;
  for (std::size_t m = 0; m < registry.size(); ++m) {
    const double w = std::norm(v[static_cast<long>(2 * m)]) +
                     std::norm(v[static_cast<long>(2 * m + 1)]);
    weights[m] = w;
    total += w;
  }
  std::vector<ModeLabel> modes;
  for (std::size_t m = 0; m < registry.size(); ++m) {
    if (total > 0.0 && weights[m] >= 0.1 * total) {
      modes.push_back(registry.label(m));
    }
  }
  return modes;
}

inline void require_hurwitz(const DriftDiffusion& dd) {
  const double scale =
      dd.kappa > 0.0
          ? dd.kappa
          : std::max(1.0, dd.drift.cwiseAbs().maxCoeff());
  const double threshold = -1e-12 * scale;
  const DriftEigensystem eigensystem = drift_eigensystem(dd.drift, true);
  long worst = -1;
  for (long i = 0; i < dd.drift.rows(); ++i) {
    if (eigensystem.values[i].real() >= threshold &&
        (worst < 0 || eigensystem.values[i].real() >
                          eigensystem.values[worst].real())) {
      worst = i;
    }
  }
  if (worst >= 0) {
    const Complex eig = eigensystem.values[worst];
    const auto modes =
        eigenvector_modes(dd.registry, eigensystem.vectors.col(worst));
    std::string names;
    for (const auto& m : modes) {
      if (!names.empty()) names += ", ";
      names += m.str();
    }
    throw NotHurwitzError(
        "drift is not Hurwitz: eigenvalue " + std::to_string(eig.real()) +
            (eig.imag() >= 0 ? "+" : "") + std::to_string(eig.imag()) +
            "i with undamped weight on {" + names + "}",
        eig, modes);
  }
}

}  // namespace detail

/// sigma(t) = e^{At} sigma e^{A^T t} + int_0^t e^{As} D e^{A^T s} ds via
/// one matrix exponential of the stacked system [[-A, D], [0, A^T]]
/// (top-right block of its exponential is e^{-At} times the integral).
/// Long horizons are split into chunks to keep the exponential's dynamic
/// range small; exactness is preserved by the semigroup property.
inline GaussianState evolve(const GaussianState& state,
                            const DriftDiffusion& dd, double time) {
  if (state.registry() != dd.registry) {
    throw ModeError("state and dynamics registries differ");
  }
  if (time < 0.0) throw Error("evolution time must be nonnegative");
  if (time == 0.0) return state;

  const long n = dd.drift.rows();
  const double scale =
      std::max({dd.kappa, dd.drift.cwiseAbs().maxCoeff(), 1e-300});
  const int chunks = std::max(1, static_cast<int>(std::ceil(scale * time / 10.0)));
  const double dt = time / chunks;

  Matrix stacked = Matrix::Zero(2 * n, 2 * n);
  stacked.topLeftCorner(n, n) = -dd.drift;
  stacked.topRightCorner(n, n) = dd.diffusion;
  stacked.bottomRightCorner(n, n) = dd.drift.transpose();
  const Matrix big = (stacked * dt).exp();
  const Matrix propagator = big.bottomRightCorner(n, n).transpose();  // e^{A dt}
  const Matrix noise = propagator * big.topRightCorner(n, n);

  Matrix cov = state.covariance();
  Vector mean = state.mean();
  for (int c = 0; c < chunks; ++c) {
    cov = propagator * cov * propagator.transpose() + noise;
    cov = 0.5 * (cov + cov.transpose());
    mean = propagator * mean;
  }
  return GaussianState(state.registry(), std::move(mean), std::move(cov));
}

/// Residual of the moment flow, max |A sigma + sigma A^T + D|; zero at the
/// stationary state.
inline double stationarity_residual(const DriftDiffusion& dd,
                                    const GaussianState& state) {
  return (dd.drift * state.covariance() +
          state.covariance() * dd.drift.transpose() + dd.diffusion)
      .cwiseAbs()
      .maxCoeff();
}

/// Stationary covariance: solves A sigma + sigma A^T + D = 0 after
/// verifying the drift is Hurwitz (throws NotHurwitzError otherwise,
/// naming the undamped modes). The Kronecker-vectorized solve is checked
/// against the residual bound 1e-10 * ||D||.
inline GaussianState steady_state(const DriftDiffusion& dd) {
  detail::require_hurwitz(dd);
  const long n = dd.drift.rows();
  const Matrix identity = Matrix::Identity(n, n);
  const Matrix system = Eigen::kroneckerProduct(identity, dd.drift).eval() +
                        Eigen::kroneckerProduct(dd.drift, identity).eval();
  const Eigen::Map<const Vector> d_vec(dd.diffusion.data(), n * n);
  Vector solution = system.partialPivLu().solve(-d_vec);
  Matrix cov = Eigen::Map<Matrix>(solution.data(), n, n);
  cov = 0.5 * (cov + cov.transpose());

  const double d_norm = dd.diffusion.norm();
  const double residual =
      (dd.drift * cov + cov * dd.drift.transpose() + dd.diffusion).norm();
  if (residual > 1e-10 * std::max(d_norm, 1e-300)) {
    throw Error("Lyapunov solve residual " + std::to_string(residual) +
                " exceeds 1e-10 * ||D||");
  }
  return GaussianState(dd.registry, Vector::Zero(2 * dd.registry.size()),
                       std::move(cov));
}

/// Time for transients to decay by `tolerance`: ln(1/tol) / |abscissa|.
/// Requires a Hurwitz drift.
inline double convergence_time(const DriftDiffusion& dd,
                               double tolerance = 1e-6) {
  if (tolerance <= 0.0 || tolerance >= 1.0) {
    throw Error("tolerance must lie in (0, 1)");
  }
  detail::require_hurwitz(dd);
  return std::log(1.0 / tolerance) / std::abs(spectral_abscissa(dd));
}

}  // namespace ringcv
