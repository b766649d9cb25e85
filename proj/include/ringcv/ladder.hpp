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

// Ladder-operator expressions and their compilation to quadrature form.
//
// An OperatorExpr is a sum of scalar-weighted products of annihilation /
// creation operators. It is the single source of truth for a Hamiltonian:
// the Gaussian pipeline compiles it to a real quadratic form, while the
// Fock oracle builds the same expression as an explicit matrix, so the two
// evolution routes never share numerical machinery beyond this description.

#include <complex>
#include <string>
#include <utility>
#include <vector>

#include <unsupported/Eigen/MatrixFunctions>

#include "ringcv/core.hpp"

namespace ringcv {

/// One ladder operator: a_mode or a_mode^dag.
struct LadderFactor {
  ModeLabel mode;
  bool dagger = false;
};

/// coeff * factor_1 * factor_2 * ... (operator order preserved).
struct LadderTerm {
  Complex coeff{0.0, 0.0};
  std::vector<LadderFactor> factors;
};

/// Sum of ladder terms.
class OperatorExpr {
 public:
  OperatorExpr() = default;

  OperatorExpr& add(Complex coeff, std::vector<LadderFactor> factors) {
    terms_.push_back(LadderTerm{coeff, std::move(factors)});
    return *this;
  }

  /// Convenience for the ubiquitous two-operator products.
  OperatorExpr& add2(Complex coeff, ModeLabel m1, bool dag1, ModeLabel m2,
                     bool dag2) {
    return add(coeff, {LadderFactor{m1, dag1}, LadderFactor{m2, dag2}});
  }

  const std::vector<LadderTerm>& terms() const { return terms_; }
  bool empty() const { return terms_.empty(); }

  /// Hermitian conjugate: conjugate coefficients, reverse factor order,
  /// flip daggers.
  OperatorExpr dagger() const {
    OperatorExpr out;
    for (const auto& term : terms_) {
      std::vector<LadderFactor> factors(term.factors.rbegin(),
                                        term.factors.rend());
      for (auto& f : factors) f.dagger = !f.dagger;
      out.add(std::conj(term.coeff), std::move(factors));
    }
    return out;
  }

  /// this + dagger(this); the standard "... + H.c." completion.
  OperatorExpr plus_hermitian_conjugate() const {
    OperatorExpr out = *this;
    for (const auto& term : dagger().terms_) out.terms_.push_back(term);
    return out;
  }

  OperatorExpr scaled(Complex factor) const {
    OperatorExpr out = *this;
    for (auto& term : out.terms_) term.coeff *= factor;
    return out;
  }

  friend OperatorExpr operator+(OperatorExpr a, const OperatorExpr& b) {
    for (const auto& term : b.terms_) a.terms_.push_back(term);
    return a;
  }

 private:
  std::vector<LadderTerm> terms_;
};

/// Hermitian bilinear Hamiltonian in quadrature form, H = (1/2) R^T G R up
/// to a scalar offset (irrelevant for dynamics). Keeps the originating
/// ladder expression so the Fock oracle can rebuild the identical operator.
struct QuadraticHamiltonian {
  ModeRegistry registry;
  Matrix form;  // G, real symmetric, dim 2M x 2M
  OperatorExpr terms;
};

namespace detail {

/// Complex row embedding of one ladder operator in the quadrature basis:
/// a = (x + i p)/sqrt(2).
inline Eigen::VectorXcd ladder_row(const ModeRegistry& registry,
                                   const LadderFactor& factor) {
  Eigen::VectorXcd row =
      Eigen::VectorXcd::Zero(static_cast<long>(registry.dim()));
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  const Complex ip = factor.dagger ? Complex(0.0, -inv_sqrt2)
                                   : Complex(0.0, inv_sqrt2);
  row[static_cast<long>(registry.x_index(factor.mode))] = inv_sqrt2;
  row[static_cast<long>(registry.p_index(factor.mode))] = ip;
  return row;
}

}  // namespace detail

/// Compile a Hermitian, purely bilinear ladder expression into its real
/// quadratic form G (H = (1/2) R^T G R + const; the constant from operator
/// reordering is dropped). Throws if a term is not bilinear or if the
/// expression fails the Hermiticity check.
inline QuadraticHamiltonian compile_quadratic(const ModeRegistry& registry,
                                              const OperatorExpr& expr,
                                              double hermiticity_rtol = 1e-12) {
  const auto dim = static_cast<long>(registry.dim());
  ComplexMatrix k = ComplexMatrix::Zero(dim, dim);
  for (const auto& term : expr.terms()) {
    if (term.factors.size() != 2) {
      throw Error(
          "quadratic compilation requires exactly two ladder factors per "
          "term, got " +
          std::to_string(term.factors.size()));
    }
    const auto f1 = detail::ladder_row(registry, term.factors[0]);
    const auto f2 = detail::ladder_row(registry, term.factors[1]);
    k += term.coeff * f1 * f2.transpose();
  }
  const ComplexMatrix sym = k + k.transpose();
  const double scale = std::max(1.0, sym.cwiseAbs().maxCoeff());
  const double imag_norm = sym.imag().cwiseAbs().maxCoeff();
  if (imag_norm > hermiticity_rtol * scale) {
    throw Error("ladder expression is not Hermitian (imaginary residue " +
                std::to_string(imag_norm) + "); did you forget + H.c.?");
  }
  return QuadraticHamiltonian{registry, sym.real(), expr};
}

/// Phase-space matrix of the Gaussian unitary U = exp(A) for an
/// anti-Hermitian bilinear generator A: with H = iA Hermitian and
/// H = (1/2) R^T G R, the Heisenberg map U^dag R U equals exp(Omega G) R.
inline SymplecticTransform exp_antihermitian(const ModeRegistry& registry,
                                             const OperatorExpr& generator) {
  const auto quad = compile_quadratic(registry, generator.scaled(Complex(0, 1)));
  const Matrix arg = symplectic_form(registry.size()) * quad.form;
  return SymplecticTransform(registry, arg.exp());
}

}  // namespace ringcv
