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

// Cross-validation of the two independent dynamics routes: the exact
// covariance-matrix propagator against the truncated-Fock master-equation
// integrator. Both see the same Hamiltonian terms; agreement of the first
// and second moments is the strongest end-to-end check the library has.

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "ringcv/fock.hpp"
#include "ringcv/hamiltonian.hpp"
#include "ringcv/lindblad.hpp"
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

double max_covariance_gap(const GaussianState& gauss,
                          const FockDensity& fock) {
  const FockMoments moments = covariance_from_density(fock);
  const double cov_gap =
      (moments.covariance - gauss.covariance()).cwiseAbs().maxCoeff();
  const double mean_gap = (moments.mean - gauss.mean()).cwiseAbs().maxCoeff();
  return std::max(cov_gap, mean_gap);
}

}  // namespace

TEST_CASE("mixer dynamics agree between the two routes",
          "[oracle][functional]") {
  const ModeRegistry reg({kAMinus, kC2});
  const double g = 1.5;
  const double kappa = 1.0;
  const auto terms = mixer_terms(reg, kAMinus, kC2, g);
  const auto dd =
      drift_diffusion(mixer_hamiltonian(reg, kAMinus, kC2, g), {kAMinus},
                      kappa);

  // Initial state: vacuum cavity, squeezed collective mode. The mixer
  // conserves photon number, so cutoffs covering the initial support are
  // exact and the truncation watchdog stays silent.
  const double xi = 0.4;
  const int cutoff = 12;
  const FockSpace space(reg, cutoff);
  const ComplexVector atom = squeezed_vacuum_amplitudes(cutoff, xi);
  ComplexVector psi = ComplexVector::Zero(space.dim());
  for (int n = 0; n < cutoff; ++n) {
    psi[space.index_of({0, n})] = atom[n];
  }
  const FockDensity fock0 = FockDensity::from_pure(space, psi);
  const GaussianState gauss0 = apply_symplectic(
      vacuum_state(reg), single_mode_squeezer(reg, kC2, xi));

  for (const double time : {0.5, 1.0, 2.0}) {
    CAPTURE(time);
    const GaussianState gauss = evolve(gauss0, dd, time);
    const FockDensity fock = evolve_fock(fock0, terms, {kAMinus}, kappa, time);
    CHECK(fock.trace() == Approx(1.0).margin(1e-8));
    CHECK(max_covariance_gap(gauss, fock) <= 1e-3);
  }
}

TEST_CASE("squeezer-mixer dynamics agree between the two routes",
          "[oracle][functional]") {
  const ModeRegistry reg({kAPlus, kC0});
  const double bu = 1.2;
  const double bs = 0.6;
  const double kappa = 1.0;
  const auto terms = squeezer_mixer_terms(reg, kAPlus, kC0, bu, bs);
  const auto dd = drift_diffusion(
      squeezer_mixer_hamiltonian(reg, kAPlus, kC0, bu, bs), {kAPlus}, kappa);

  // Pair creation climbs the ladder hard: the collective mode heads for a
  // squeezed vacuum with tanh(xi) = 1/2 whose even-level tail falls only
  // like C(n, n/2) 16^{-n/2} (about 8e-9 at n = 24), and the transient
  // cavity marginal inherits a similarly heavy squeezed tail, so both
  // cutoffs sit well above the watchdog threshold crossing.
  const FockSpace space(reg, std::vector<int>{22, 28});
  FockDensity fock = FockDensity::vacuum(space);
  GaussianState gauss = vacuum_state(reg);

  double previous = 0.0;
  for (const double time : {0.5, 1.0, 2.0}) {
    CAPTURE(time);
    gauss = evolve(gauss, dd, time - previous);
    fock = evolve_fock(fock, terms, {kAPlus}, kappa, time - previous);
    previous = time;
    CHECK(fock.trace() == Approx(1.0).margin(1e-8));
    CHECK(max_covariance_gap(gauss, fock) <= 1e-3);
  }
}

TEST_CASE("pair line builds oppositely correlated positions",
          "[oracle][functional]") {
  // One damped cavity drives both +-2k modes: (bu C2 + bs C-2^dag) a^dag +
  // H.c. The stationary state is the two-mode squeezed vacuum prepared by
  // the negative-parameter squeezer, whose x-x correlation is negative.
  const ModeRegistry reg({kAMinus, kC2, kCm2});
  const double bu = 1.2;
  const double bs = 0.6;
  const double kappa = 2.5;  // strong damping keeps the cavity nearly empty
  OperatorExpr half;
  half.add2(bu, kC2, false, kAMinus, true);
  half.add2(bs, kCm2, true, kAMinus, true);
  const auto terms = half.plus_hermitian_conjugate();
  const auto ham = compile_quadratic(reg, terms);
  const auto dd = drift_diffusion(ham, {kAMinus}, kappa);

  SECTION("fock route reproduces the gaussian transient") {
    const FockSpace space(reg, std::vector<int>{8, 13, 13});
    FockEvolveOptions options;
    options.local_tolerance = 1e-8;
    options.truncation_threshold = 1e-7;
    const double time = 1.2;
    const FockDensity fock = evolve_fock(FockDensity::vacuum(space), terms,
                                         {kAMinus}, kappa, time, options);
    const GaussianState gauss = evolve(vacuum_state(reg), dd, time);
    CHECK(max_covariance_gap(gauss, fock) <= 1e-3);

    const FockMoments moments = covariance_from_density(fock);
    const auto x2 = static_cast<long>(reg.x_index(kC2));
    const auto xm2 = static_cast<long>(reg.x_index(kCm2));
    CHECK(moments.covariance(x2, xm2) < -0.05);
    CHECK(gauss.covariance()(x2, xm2) < -0.05);
  }

  SECTION("one line squeezes the pair but cannot purify it") {
    // The cavity damps only the combination (bu C2 + bs C-2^dag)/g with
    // g = sqrt(bu^2 - bs^2); the orthogonal combination D is untouched,
    // so there is no unique steady state and the Lyapunov solve refuses.
    CHECK_THROWS_AS(steady_state(dd), NotHurwitzError);
    CHECK_THROWS_WITH(steady_state(dd),
                      Catch::Matchers::ContainsSubstring("C-2k(1)"));

    // From vacuum the reachable stationary state is mixed: the damped
    // combination empties while D keeps its initial 1/3 of a quantum.
    // For bu/bs = 2 the limits are exact rationals.
    const GaussianState late = evolve(vacuum_state(reg), dd, 40.0);
    const auto x2 = static_cast<long>(reg.x_index(kC2));
    const auto xm2 = static_cast<long>(reg.x_index(kCm2));
    CHECK(late.covariance()(x2, xm2) == Approx(-8.0 / 9.0).epsilon(1e-9));
    CHECK(late.covariance()(x2 + 1, xm2 + 1) ==
          Approx(8.0 / 9.0).epsilon(1e-9));
    CHECK(late.covariance()(x2, x2) == Approx(17.0 / 18.0).epsilon(1e-9));
    CHECK(late.covariance()(xm2, xm2) == Approx(23.0 / 18.0).epsilon(1e-9));
    // The joint quadratures dip below vacuum noise, but stop short of the
    // pure two-mode-squeezed floor of 1/6 that the full protocols reach.
    CHECK(pair_quadrature_variance(late, kC2, kCm2, Quadrature::X, 1.0) ==
          Approx(2.0 / 9.0).epsilon(1e-9));
    CHECK(pair_quadrature_variance(late, kC2, kCm2, Quadrature::P, -1.0) ==
          Approx(2.0 / 9.0).epsilon(1e-9));
    // The cavity empties; the leftover quantum in D caps the purity at 3/5.
    CHECK(quadrature_variance(late, kAMinus, Quadrature::X) ==
          Approx(0.5).epsilon(1e-9));
    CHECK(purity(late) == Approx(0.6).epsilon(1e-9));
    // Doubling the horizon changes nothing: the state is stationary.
    const GaussianState later = evolve(vacuum_state(reg), dd, 80.0);
    CHECK((later.covariance() - late.covariance()).cwiseAbs().maxCoeff() <=
          1e-9);
  }
}
