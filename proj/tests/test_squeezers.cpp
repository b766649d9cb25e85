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

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "ringcv/hamiltonian.hpp"
#include "ringcv/protocol.hpp"
#include "ringcv/squeezers.hpp"

using Catch::Approx;
using namespace ringcv;

namespace {

const ModeLabel kAPlus = ModeLabel::cavity_plus();
const ModeLabel kAMinus = ModeLabel::cavity_minus();
const ModeLabel kC0 = ModeLabel::collective(1, 0);
const ModeLabel kC2 = ModeLabel::collective(1, 2);
const ModeLabel kCm2 = ModeLabel::collective(1, -2);

/// Quadrature variance of a symplectic image of the vacuum, restricted to
/// two named modes in a larger registry when needed.
constexpr double kXiStar = 0.5493061443340549;  // (1/2) ln 3

Matrix mode_block(const SymplecticTransform& s, const ModeLabel& row,
                  const ModeLabel& col) {
  const auto r = static_cast<long>(s.registry().x_index(row));
  const auto c = static_cast<long>(s.registry().x_index(col));
  return s.matrix().block(r, c, 2, 2);
}

}  // namespace

TEST_CASE("single-mode squeezer", "[squeezers]") {
  const ModeRegistry reg({kC0});
  const double xi = 0.4;
  const auto s = single_mode_squeezer(reg, kC0, xi);

  SECTION("phase-space matrix is diag(e^-xi, e^xi)") {
    CHECK(s.matrix()(0, 0) == Approx(std::exp(-xi)).epsilon(1e-12));
    CHECK(s.matrix()(1, 1) == Approx(std::exp(xi)).epsilon(1e-12));
    CHECK(std::abs(s.matrix()(0, 1)) <= 1e-14);
    CHECK(s.symplectic_residual() <= 1e-13);
  }

  SECTION("position variance shrinks to e^-2xi / 2") {
    const GaussianState squeezed = apply_symplectic(vacuum_state(reg), s);
    CHECK(quadrature_variance(squeezed, kC0, Quadrature::X) ==
          Approx(0.5 * std::exp(-2.0 * xi)).epsilon(1e-12));
    CHECK(quadrature_variance(squeezed, kC0, Quadrature::P) ==
          Approx(0.5 * std::exp(2.0 * xi)).epsilon(1e-12));
    CHECK(purity(squeezed) == Approx(1.0).epsilon(1e-10));
  }

  SECTION("xi = (1/2) ln 3 hits variance 1/6") {
    const GaussianState squeezed = apply_symplectic(
        vacuum_state(reg), single_mode_squeezer(reg, kC0, kXiStar));
    CHECK(quadrature_variance(squeezed, kC0, Quadrature::X) ==
          Approx(1.0 / 6.0).epsilon(1e-12));
  }

  SECTION("inverse is the opposite squeeze") {
    const auto inv = single_mode_squeezer(reg, kC0, -xi);
    CHECK((s.matrix() * inv.matrix() - Matrix::Identity(2, 2))
              .cwiseAbs()
              .maxCoeff() <= 1e-13);
  }
}

TEST_CASE("two-mode squeezer", "[squeezers]") {
  const ModeRegistry reg({kC2, kCm2});
  const double xi = 0.5;
  const auto s = two_mode_squeezer(reg, kC2, kCm2, xi);
  const GaussianState state = apply_symplectic(vacuum_state(reg), s);

  SECTION("EPR quadratures squeeze at e^-2xi / 2") {
    CHECK(pair_quadrature_variance(state, kC2, kCm2, Quadrature::X, -1.0) ==
          Approx(0.18393972058572117).epsilon(1e-12));
    CHECK(pair_quadrature_variance(state, kC2, kCm2, Quadrature::P, 1.0) ==
          Approx(0.18393972058572117).epsilon(1e-12));
    // The conjugate combinations anti-squeeze.
    CHECK(pair_quadrature_variance(state, kC2, kCm2, Quadrature::X, 1.0) ==
          Approx(0.5 * std::exp(2.0 * xi)).epsilon(1e-12));
  }

  SECTION("cross-correlations follow sinh(2 xi)/2") {
    const auto x_a = static_cast<long>(reg.x_index(kC2));
    const auto x_b = static_cast<long>(reg.x_index(kCm2));
    CHECK(state.covariance()(x_a, x_b) ==
          Approx(0.5876005968219006).epsilon(1e-12));
    CHECK(state.covariance()(x_a + 1, x_b + 1) ==
          Approx(-0.5876005968219006).epsilon(1e-12));
    CHECK(state.covariance()(x_a, x_a) ==
          Approx(0.5 * std::cosh(2.0 * xi)).epsilon(1e-12));
  }

  SECTION("negative xi prepares the opposite EPR pair") {
    const GaussianState flipped = apply_symplectic(
        vacuum_state(reg), two_mode_squeezer(reg, kC2, kCm2, -xi));
    CHECK(pair_quadrature_variance(flipped, kC2, kCm2, Quadrature::X, 1.0) ==
          Approx(0.18393972058572117).epsilon(1e-12));
    CHECK(pair_quadrature_variance(flipped, kC2, kCm2, Quadrature::P, -1.0) ==
          Approx(0.18393972058572117).epsilon(1e-12));
  }

  SECTION("identical modes are rejected") {
    CHECK_THROWS_AS(two_mode_squeezer(reg, kC2, kC2, xi), ModeError);
  }
}

TEST_CASE("ensemble mixer", "[squeezers]") {
  const ModeRegistry reg = ModeRegistry::canonical(2);
  const auto t = ensemble_mixer(reg);

  SECTION("involution, orthogonal, symplectic, passive") {
    const Matrix m = t.matrix();
    const auto dim = static_cast<long>(reg.dim());
    CHECK((m * m - Matrix::Identity(dim, dim)).cwiseAbs().maxCoeff() <= 1e-13);
    CHECK((m * m.transpose() - Matrix::Identity(dim, dim))
              .cwiseAbs()
              .maxCoeff() <= 1e-13);
    CHECK(t.symplectic_residual() <= 1e-13);
    // Passive: the vacuum is a fixed point.
    const GaussianState mixed = apply_symplectic(vacuum_state(reg), t);
    CHECK((mixed.covariance() -
           0.5 * Matrix::Identity(dim, dim)).cwiseAbs().maxCoeff() <= 1e-13);
  }

  SECTION("acts only on the +-2k sector") {
    CHECK((mode_block(t, kAPlus, kAPlus) - Matrix::Identity(2, 2))
              .cwiseAbs()
              .maxCoeff() <= 1e-14);
    CHECK((mode_block(t, kC0, kC0) - Matrix::Identity(2, 2))
              .cwiseAbs()
              .maxCoeff() <= 1e-14);
    CHECK(mode_block(t, kC2, kC0).cwiseAbs().maxCoeff() <= 1e-14);
  }

  SECTION("golden-ratio weights") {
    const double lam = kGoldenRatio;
    const double norm = std::sqrt(1.0 + lam * lam);
    CHECK(kGoldenRatio == Approx(1.6180339887498949).epsilon(1e-15));
    // lambda^2 = lambda + 1 pins the ratio.
    CHECK(lam * lam == Approx(lam + 1.0).epsilon(1e-14));
    CHECK(mode_block(t, kC2, kC2)(0, 0) == Approx(1.0 / norm).epsilon(1e-12));
    CHECK(mode_block(t, kC2, ModeLabel::collective(2, 2))(0, 0) ==
          Approx(lam / norm).epsilon(1e-12));
    CHECK(mode_block(t, kCm2, kCm2)(0, 0) ==
          Approx(-1.0 / norm).epsilon(1e-12));
  }

  SECTION("requires both ensembles") {
    CHECK_THROWS_AS(ensemble_mixer(ModeRegistry::canonical(1)), ModeError);
  }
}

TEST_CASE("four-mode squeezer factorizes through the mixer",
          "[squeezers][functional]") {
  const ModeRegistry reg = ModeRegistry::canonical(2);
  const ModeLabel c1 = ModeLabel::collective(1, 2);
  const ModeLabel c2 = ModeLabel::collective(1, -2);
  const ModeLabel c3 = ModeLabel::collective(2, 2);
  const ModeLabel c4 = ModeLabel::collective(2, -2);
  const double lam = kGoldenRatio;

  for (const double xi : {0.1, 0.3, 0.6}) {
    CAPTURE(xi);
    const auto s4 = four_mode_squeezer(reg, xi);
    REQUIRE(s4.symplectic_residual() <= 1e-12);
    const auto t = ensemble_mixer(reg);
    // T S4(xi) T = TMS(c1, c4; -lam xi) * TMS(c3, c2; +xi/lam): the mixer
    // splits the nearest-neighbour chain into independent cross pairs.
    const Matrix conjugated = (t * (s4 * t)).matrix();
    const Matrix split = (two_mode_squeezer(reg, c1, c4, -lam * xi) *
                          two_mode_squeezer(reg, c3, c2, xi / lam))
                             .matrix();
    CHECK((conjugated - split).cwiseAbs().maxCoeff() <= 1e-10);
  }

  SECTION("target state entangles the cross pairs") {
    const GaussianState target =
        apply_symplectic(vacuum_state(reg), four_mode_squeezer(reg, 0.3));
    CHECK(purity(target) == Approx(1.0).epsilon(1e-10));
    // Cavity and C0 modes stay in vacuum.
    CHECK(quadrature_variance(target, kAPlus, Quadrature::X) ==
          Approx(0.5).epsilon(1e-12));
    CHECK(quadrature_variance(target, kC0, Quadrature::X) ==
          Approx(0.5).epsilon(1e-12));
  }
}

TEST_CASE("hamiltonian conjugation by symplectic frames",
          "[squeezers][functional]") {
  SECTION("single-mode frame turns the Bogoliubov drive into a mixer") {
    const ModeRegistry reg({kAPlus, kC0});
    for (const auto& [bu, bs] :
         std::vector<std::pair<double, double>>{{1.0, 0.0},
                                                {1.2, 0.6},
                                                {2.0, 1.0},
                                                {0.8, 0.79},
                                                {3.0, 0.3}}) {
      CAPTURE(bu, bs);
      const auto ham = squeezer_mixer_hamiltonian(reg, kAPlus, kC0, bu, bs);
      const double xi = std::atanh(bs / bu);
      const auto frame = single_mode_squeezer(reg, kC0, -xi);
      const auto mixed = conjugate_hamiltonian(ham, frame);
      const double expected = std::sqrt(bu * bu - bs * bs);
      const Matrix block = mixed.form.block(0, 2, 2, 2);
      CHECK(block(0, 0) == Approx(expected).epsilon(1e-10));
      CHECK(block(1, 1) == Approx(expected).epsilon(1e-10));
      CHECK(std::abs(block(0, 1)) <= 1e-10);
      // No residual squeezing terms anywhere.
      CHECK(mixed.form.block(2, 2, 2, 2).cwiseAbs().maxCoeff() <= 1e-10);
      CHECK(mixed.form.block(0, 0, 2, 2).cwiseAbs().maxCoeff() <= 1e-10);
    }
  }

  SECTION("pair frame decouples the idle partner mode") {
    const ModeRegistry reg({kAMinus, kC2, kCm2});
    const double bu = 1.2;
    const double bs = 0.6;
    // Clockwise pair line: (bu C2 + bs C-2^dag) a-^dag + H.c.
    OperatorExpr half;
    half.add2(bu, kC2, false, kAMinus, true);
    half.add2(bs, kCm2, true, kAMinus, true);
    const auto ham = compile_quadratic(reg, half.plus_hermitian_conjugate());
    const double xi = std::atanh(bs / bu);
    const auto frame = two_mode_squeezer(reg, kC2, kCm2, xi);
    const auto mixed = conjugate_hamiltonian(ham, frame);

    const auto ax = static_cast<long>(reg.x_index(kAMinus));
    const auto c2x = static_cast<long>(reg.x_index(kC2));
    const auto cm2x = static_cast<long>(reg.x_index(kCm2));
    const double expected = std::sqrt(bu * bu - bs * bs);
    CHECK(mixed.form(ax, c2x) == Approx(expected).epsilon(1e-10));
    CHECK(mixed.form(ax + 1, c2x + 1) == Approx(expected).epsilon(1e-10));
    // The partner mode drops out entirely.
    CHECK(mixed.form.block(ax, cm2x, 2, 2).cwiseAbs().maxCoeff() <= 1e-10);
    CHECK(mixed.form.block(c2x, cm2x, 2, 2).cwiseAbs().maxCoeff() <= 1e-10);
    CHECK(mixed.form.block(cm2x, cm2x, 2, 2).cwiseAbs().maxCoeff() <= 1e-10);
  }

  SECTION("registry mismatch is rejected") {
    const ModeRegistry reg({kAPlus, kC0});
    const ModeRegistry other({kAMinus, kC0});
    const auto ham = squeezer_mixer_hamiltonian(reg, kAPlus, kC0, 1.0, 0.2);
    CHECK_THROWS_AS(
        conjugate_hamiltonian(ham, single_mode_squeezer(other, kC0, 0.1)),
        ModeError);
  }
}
