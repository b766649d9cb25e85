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

#include "ringcv/fock.hpp"

using Catch::Approx;
using namespace ringcv;

namespace {

const ModeLabel kA = ModeLabel::cavity_plus();
const ModeLabel kB = ModeLabel::cavity_minus();
const ModeLabel kC2 = ModeLabel::collective(1, 2);

ModeRegistry one_mode() { return ModeRegistry({kA}); }
ModeRegistry two_modes() { return ModeRegistry({kA, kB}); }

OperatorExpr number_operator(const ModeLabel& mode) {
  OperatorExpr expr;
  expr.add2(Complex(1.0, 0.0), mode, true, mode, false);
  return expr;
}

}  // namespace

TEST_CASE("fock space indexing", "[fock]") {
  const FockSpace space(two_modes(), std::vector<int>{2, 3});
  REQUIRE(space.dim() == 6);

  SECTION("first mode varies slowest") {
    CHECK(space.index_of({0, 0}) == 0);
    CHECK(space.index_of({0, 2}) == 2);
    CHECK(space.index_of({1, 0}) == 3);
    CHECK(space.index_of({1, 2}) == 5);
  }

  SECTION("occupation round-trips every index") {
    for (long i = 0; i < space.dim(); ++i) {
      const std::vector<int> occ{space.occupation(i, 0),
                                 space.occupation(i, 1)};
      CHECK(space.index_of(occ) == i);
    }
  }

  SECTION("uniform cutoff constructor") {
    const FockSpace uniform(two_modes(), 4);
    CHECK(uniform.dim() == 16);
    CHECK(uniform.cutoffs() == std::vector<int>{4, 4});
    CHECK(uniform != space);
    CHECK(space == FockSpace(two_modes(), std::vector<int>{2, 3}));
  }

  SECTION("limits are enforced") {
    CHECK_THROWS_AS(FockSpace(one_mode(), 1), Error);
    CHECK_THROWS_AS(FockSpace(one_mode(), 31), Error);
    CHECK_THROWS_AS(FockSpace(ModeRegistry::canonical(1), 3), ModeError);
    // 30^3 = 27000 basis states is past the density-matrix budget.
    CHECK_THROWS_AS(FockSpace(ModeRegistry({kA, kB, kC2}), 30), Error);
  }
}

TEST_CASE("ladder operators on the number basis", "[fock]") {
  const FockSpace space(one_mode(), 4);
  const ComplexMatrix a = ComplexMatrix(annihilation_operator(space, kA));

  SECTION("matrix elements are sqrt(n)") {
    for (int n = 1; n < 4; ++n) {
      CHECK(a(n - 1, n).real() == Approx(std::sqrt(double(n))).margin(1e-14));
    }
    CHECK(a.cwiseAbs().sum() ==
          Approx(std::sqrt(1.0) + std::sqrt(2.0) + std::sqrt(3.0))
              .margin(1e-12));
  }

  SECTION("operator products keep written order") {
    OperatorExpr lower_raise;  // a a^dag: raises first, then lowers
    lower_raise.add2(Complex(1.0, 0.0), kA, false, kA, true);
    const ComplexMatrix aad = ComplexMatrix(sparse_operator(space, lower_raise));
    const ComplexMatrix ada =
        ComplexMatrix(sparse_operator(space, number_operator(kA)));
    for (int n = 0; n < 3; ++n) {
      CHECK(aad(n, n).real() == Approx(double(n + 1)).margin(1e-14));
      CHECK(ada(n, n).real() == Approx(double(n)).margin(1e-14));
    }
    // At the truncation edge a^dag annihilates the ket.
    CHECK(std::abs(aad(3, 3)) == Approx(0.0).margin(1e-14));
  }

  SECTION("multi-mode operators act on their own factor") {
    const FockSpace pair(two_modes(), std::vector<int>{2, 3});
    const ComplexMatrix a1 = ComplexMatrix(annihilation_operator(pair, kA));
    const ComplexMatrix a2 = ComplexMatrix(annihilation_operator(pair, kB));
    // a1 |1,0> = |0,0>; a2 |0,2> = sqrt(2) |0,1>.
    CHECK(a1(pair.index_of({0, 0}), pair.index_of({1, 0})).real() ==
          Approx(1.0).margin(1e-14));
    CHECK(a2(pair.index_of({0, 1}), pair.index_of({0, 2})).real() ==
          Approx(std::sqrt(2.0)).margin(1e-14));
  }
}

TEST_CASE("density matrices", "[fock]") {
  const FockSpace space(one_mode(), 5);

  SECTION("vacuum and basis states") {
    const FockDensity vac = FockDensity::vacuum(space);
    CHECK(vac.trace() == Approx(1.0).margin(1e-14));
    CHECK(vac.purity() == Approx(1.0).margin(1e-14));
    const FockDensity one = FockDensity::basis_state(space, {1});
    CHECK(fock_expectation(one, sparse_operator(space, number_operator(kA)))
              .real() == Approx(1.0).margin(1e-12));
  }

  SECTION("from_pure rejects unnormalized amplitudes") {
    ComplexVector psi = ComplexVector::Zero(space.dim());
    psi[0] = 0.9;
    CHECK_THROWS_AS(FockDensity::from_pure(space, psi), Error);
  }

  SECTION("overlap with pure references") {
    const FockDensity vac = FockDensity::vacuum(space);
    ComplexVector ground = ComplexVector::Zero(space.dim());
    ground[0] = 1.0;
    CHECK(fock_overlap(vac, ground) == Approx(1.0).margin(1e-12));
    ComplexVector excited = ComplexVector::Zero(space.dim());
    excited[1] = 1.0;
    CHECK(fock_overlap(vac, excited) == Approx(0.0).margin(1e-12));
    CHECK_THROWS_AS(fock_overlap(vac, 0.5 * ground), Error);
    CHECK_THROWS_AS(fock_overlap(vac, ComplexVector::Zero(3)), Error);
  }
}

TEST_CASE("squeezed vacuum amplitudes", "[fock]") {
  const double xi = 0.5;

  SECTION("single mode closed form") {
    const ComplexVector psi = squeezed_vacuum_amplitudes(20, xi);
    CHECK(psi.norm() == Approx(1.0).margin(1e-12));
    CHECK(std::abs(psi[1]) == Approx(0.0).margin(1e-15));
    CHECK(std::abs(psi[3]) == Approx(0.0).margin(1e-15));
    // c2/c0 = -tanh(xi)/sqrt(2), c4/c2 = -tanh(xi) sqrt(3)/2.
    CHECK((psi[2] / psi[0]).real() ==
          Approx(-std::tanh(xi) / std::sqrt(2.0)).epsilon(1e-12));
    CHECK((psi[4] / psi[2]).real() ==
          Approx(-std::tanh(xi) * std::sqrt(3.0) / 2.0).epsilon(1e-12));
  }

  SECTION("single mode quadrature variances") {
    const FockSpace space(one_mode(), 20);
    const FockDensity rho =
        FockDensity::from_pure(space, squeezed_vacuum_amplitudes(20, xi));
    const FockMoments moments = covariance_from_density(rho);
    CHECK(moments.mean.cwiseAbs().maxCoeff() <= 1e-10);
    // Var(x) = e^{-2 xi}/2, Var(p) = e^{+2 xi}/2, up to the residue of the
    // renormalized level-20 truncation (relative ~5e-6).
    CHECK(moments.covariance(0, 0) ==
          Approx(0.18393972058572117).epsilon(1e-4));
    CHECK(moments.covariance(1, 1) ==
          Approx(0.5 * std::exp(2.0 * xi)).epsilon(1e-4));
    CHECK(moments.covariance(0, 1) == Approx(0.0).margin(1e-10));
  }

  SECTION("two mode closed form and EPR correlations") {
    const ComplexVector psi = two_mode_squeezed_amplitudes(14, 14, xi);
    CHECK(psi.norm() == Approx(1.0).margin(1e-12));
    // Only |nn> components; geometric ratio tanh(xi).
    CHECK(std::abs(psi[1]) == Approx(0.0).margin(1e-15));
    CHECK((psi[14 + 1] / psi[0]).real() == Approx(std::tanh(xi)).epsilon(1e-12));
    CHECK((psi[2 * 14 + 2] / psi[14 + 1]).real() ==
          Approx(std::tanh(xi)).epsilon(1e-12));

    const FockSpace space(two_modes(), 14);
    const FockDensity rho = FockDensity::from_pure(space, psi);
    const FockMoments moments = covariance_from_density(rho);
    // <x_a x_b> = +sinh(2 xi)/2 for exp[xi(a^dag b^dag - a b)] |00>.
    CHECK(moments.covariance(0, 2) == Approx(0.5876005968219006).epsilon(1e-7));
    CHECK(moments.covariance(1, 3) ==
          Approx(-0.5876005968219006).epsilon(1e-7));
    CHECK(moments.covariance(0, 0) ==
          Approx(0.5 * std::cosh(2.0 * xi)).epsilon(1e-7));

    SECTION("partial trace leaves a thermal mode") {
      const FockDensity reduced = partial_trace_fock(rho, {kA});
      CHECK(reduced.trace() == Approx(1.0).margin(1e-10));
      CHECK(reduced.purity() == Approx(0.6480542736638853).epsilon(1e-6));
      CHECK(fock_expectation(
                reduced,
                sparse_operator(reduced.space(), number_operator(kA)))
                .real() ==
            Approx(std::sinh(xi) * std::sinh(xi)).epsilon(1e-6));
      CHECK_THROWS_AS(partial_trace_fock(rho, {kC2}), ModeError);
    }
  }

  SECTION("number state covariance") {
    const FockSpace space(one_mode(), 5);
    const FockMoments moments =
        covariance_from_density(FockDensity::basis_state(space, {1}));
    CHECK(moments.covariance(0, 0) == Approx(1.5).margin(1e-12));
    CHECK(moments.covariance(1, 1) == Approx(1.5).margin(1e-12));
  }
}

TEST_CASE("master equation integrator", "[fock][functional]") {
  SECTION("damped cavity decays exponentially") {
    const FockSpace space(one_mode(), 6);
    const FockDensity initial = FockDensity::basis_state(space, {1});
    const double kappa = 1.0;
    const double time = 0.7;
    const FockDensity evolved =
        evolve_fock(initial, OperatorExpr{}, {kA}, kappa, time);
    CHECK(evolved.trace() == Approx(1.0).margin(1e-9));
    const double n_mean =
        fock_expectation(evolved,
                         sparse_operator(space, number_operator(kA)))
            .real();
    CHECK(n_mean == Approx(std::exp(-kappa * time)).epsilon(1e-8));
  }

  SECTION("coherent dynamics preserve purity") {
    // Detuning-like rotation: H = n, pure state stays pure.
    const FockSpace space(one_mode(), 6);
    const ComplexVector psi = squeezed_vacuum_amplitudes(6, 0.2);
    const FockDensity initial = FockDensity::from_pure(space, psi);
    const FockDensity evolved =
        evolve_fock(initial, number_operator(kA), {}, 0.0, 1.3);
    CHECK(evolved.purity() == Approx(1.0).margin(1e-8));
    CHECK(evolved.trace() == Approx(1.0).margin(1e-9));
  }

  SECTION("population reaching the cutoff raises TruncationError") {
    // Undamped two-mode squeezing from vacuum climbs the ladder without
    // bound; a cutoff of 3 must trip the truncation watchdog quickly.
    const FockSpace space(two_modes(), 3);
    OperatorExpr squeezer;
    squeezer.add2(Complex(0.0, 1.0), kA, true, kB, true);
    squeezer.add2(Complex(0.0, -1.0), kA, false, kB, false);
    const FockDensity vac = FockDensity::vacuum(space);
    CHECK_THROWS_AS(evolve_fock(vac, squeezer, {}, 0.0, 2.0),
                    TruncationError);
    CHECK_THROWS_WITH(evolve_fock(vac, squeezer, {}, 0.0, 2.0),
                      Catch::Matchers::ContainsSubstring("raise the cutoff"));
  }

  SECTION("negative time is rejected") {
    const FockSpace space(one_mode(), 4);
    CHECK_THROWS_AS(
        evolve_fock(FockDensity::vacuum(space), OperatorExpr{}, {kA}, 1.0,
                    -0.1),
        Error);
  }
}
