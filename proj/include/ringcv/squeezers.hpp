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

// Squeezing unitaries as phase-space maps, plus the two-ensemble mixer that
// factorizes the four-mode squeezer into independent pair squeezers.
//
// Sign conventions (operational, verified against the Fock oracle):
//  * single_mode_squeezer(xi > 0) squeezes position:   Var(x) = e^{-2 xi}/2.
//  * two_mode_squeezer(xi > 0) squeezes the EPR pair:  Var((x_A - x_B)/sqrt 2)
//    = Var((p_A + p_B)/sqrt 2) = e^{-2 xi}/2. The opposite-signed map
//    two_mode_squeezer(-xi) produces the state annihilated by
//    A + tanh(xi) B^dag, which is what the dissipative protocols prepare.

#include <cmath>
#include <vector>

#include "ringcv/core.hpp"
#include "ringcv/ladder.hpp"

namespace ringcv {

/// Golden ratio (1 + sqrt 5)/2: the mixing weight that decouples the
/// nearest-neighbour four-mode squeezer.
inline const double kGoldenRatio = 0.5 * (1.0 + std::sqrt(5.0));

/// U = exp[(xi/2)(a^2 - a^dag^2)]; phase-space diag(e^-xi, e^xi) on the
/// mode's (x, p) block.
inline SymplecticTransform single_mode_squeezer(const ModeRegistry& registry,
                                                ModeLabel mode, double xi) {
  OperatorExpr gen;
  gen.add2(0.5 * xi, mode, false, mode, false);
  gen.add2(-0.5 * xi, mode, true, mode, true);
  return exp_antihermitian(registry, gen);
}

/// U = exp[xi (a^dag b^dag - a b)]: EPR squeezer in the convention above.
inline SymplecticTransform two_mode_squeezer(const ModeRegistry& registry,
                                             ModeLabel mode_a,
                                             ModeLabel mode_b, double xi) {
  if (mode_a == mode_b) {
    throw ModeError("two-mode squeezer needs two distinct modes");
  }
  OperatorExpr gen;
  gen.add2(xi, mode_a, true, mode_b, true);
  gen.add2(-xi, mode_a, false, mode_b, false);
  return exp_antihermitian(registry, gen);
}

namespace detail {

/// The four +-2k modes in their conventional order:
/// (C2k(1), C-2k(1), C2k(2), C-2k(2)).
inline std::vector<ModeLabel> pair_sector_modes() {
  return {ModeLabel::collective(1, 2), ModeLabel::collective(1, -2),
          ModeLabel::collective(2, 2), ModeLabel::collective(2, -2)};
}

}  // namespace detail

/// Nearest-neighbour four-mode squeezer over the +-2k sector of both
/// ensembles, U = exp[-xi (c1^dag c2^dag + c2^dag c3^dag + c3^dag c4^dag
/// - H.c.)] with (c1, c2, c3, c4) = (C2k(1), C-2k(1), C2k(2), C-2k(2)).
/// Conjugation by ensemble_mixer splits it into two independent two-mode
/// squeezers on the cross pairs (c1, c4) and (c3, c2) with parameters
/// scaled by the golden ratio; see the tests for the exact identity.
inline SymplecticTransform four_mode_squeezer(const ModeRegistry& registry,
                                              double xi) {
  const auto c = detail::pair_sector_modes();
  OperatorExpr gen;
  for (int i = 0; i < 3; ++i) {
    gen.add2(-xi, c[static_cast<std::size_t>(i)], true,
             c[static_cast<std::size_t>(i) + 1], true);
    gen.add2(xi, c[static_cast<std::size_t>(i)], false,
             c[static_cast<std::size_t>(i) + 1], false);
  }
  return exp_antihermitian(registry, gen);
}

/// Passive two-ensemble mixer T: a real orthogonal involution on the +-2k
/// modes (identity elsewhere) mixing equal momentum orders of the two
/// ensembles with golden-ratio weights,
///   d+(1) = (C2k(1) + lam C2k(2))  / sqrt(1 + lam^2)
///   d+(2) = (lam C2k(1) - C2k(2))  / sqrt(1 + lam^2)
///   d-(1) = (lam C-2k(2) - C-2k(1))/ sqrt(1 + lam^2)
///   d-(2) = (C-2k(2) + lam C-2k(1))/ sqrt(1 + lam^2).
/// Because the map is real and symmetric, it is its own inverse and its
/// phase-space matrix acts identically on x and p.
inline SymplecticTransform ensemble_mixer(const ModeRegistry& registry) {
  const auto c = detail::pair_sector_modes();
  for (const auto& m : c) registry.index_of(m);
  const double lam = kGoldenRatio;
  const double norm = std::sqrt(1.0 + lam * lam);

  const auto dim = static_cast<long>(registry.dim());
  Matrix s = Matrix::Identity(dim, dim);
  // Mode-space mixing matrix O (annihilation operators d = O c); applied to
  // both quadratures since all weights are real.
  Eigen::Matrix4d o = Eigen::Matrix4d::Zero();
  o(0, 0) = 1.0 / norm;   // d+(1) <- C2k(1)
  o(0, 2) = lam / norm;   // d+(1) <- C2k(2)
  o(2, 0) = lam / norm;   // d+(2) <- C2k(1)
  o(2, 2) = -1.0 / norm;  // d+(2) <- C2k(2)
  o(1, 3) = lam / norm;   // d-(1) <- C-2k(2)
  o(1, 1) = -1.0 / norm;  // d-(1) <- C-2k(1)
  o(3, 3) = 1.0 / norm;   // d-(2) <- C-2k(2)
  o(3, 1) = lam / norm;   // d-(2) <- C-2k(1)

  for (int i = 0; i < 4; ++i) {
    const auto xi_row = static_cast<long>(
        registry.x_index(c[static_cast<std::size_t>(i)]));
    s(xi_row, xi_row) = 0.0;
    s(xi_row + 1, xi_row + 1) = 0.0;
  }
  for (int i = 0; i < 4; ++i) {
    const auto row = static_cast<long>(
        registry.x_index(c[static_cast<std::size_t>(i)]));
    for (int j = 0; j < 4; ++j) {
      const auto col = static_cast<long>(
          registry.x_index(c[static_cast<std::size_t>(j)]));
      s(row, col) = o(i, j);          // x block
      s(row + 1, col + 1) = o(i, j);  // p block
    }
  }
  return SymplecticTransform(registry, s);
}

/// Quadratic form of U H U^dag where S is the phase-space matrix of U
/// (defined via U^dag R U = S R): G -> S^-T G S^-1. Only the quadrature
/// form survives conjugation; the ladder-term description is dropped.
inline QuadraticHamiltonian conjugate_hamiltonian(
    const QuadraticHamiltonian& ham, const SymplecticTransform& transform) {
  if (ham.registry != transform.registry()) {
    throw ModeError("Hamiltonian and transform registries differ");
  }
  const Matrix s_inv = transform.inverse().matrix();
  Matrix form = s_inv.transpose() * ham.form * s_inv;
  form = 0.5 * (form + form.transpose());
  return QuadraticHamiltonian{ham.registry, std::move(form), OperatorExpr{}};
}

}  // namespace ringcv
