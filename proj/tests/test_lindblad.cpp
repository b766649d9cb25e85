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

#include <algorithm>
#include <cmath>

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

QuadraticHamiltonian free_hamiltonian(const ModeRegistry& reg) {
  const auto dim = static_cast<long>(reg.dim());
  return QuadraticHamiltonian{reg, Matrix::Zero(dim, dim), OperatorExpr{}};
}

GaussianState thermal_state(const ModeRegistry& registry, double occupation) {
  const auto dim = static_cast<long>(registry.dim());
  return GaussianState(registry, Vector::Zero(dim),
                       (occupation + 0.5) * Matrix::Identity(dim, dim));
}

}  // namespace

TEST_CASE("damped empty cavity", "[lindblad]") {
  const ModeRegistry reg({kAPlus});
  const double kappa = 1.3;
  const auto dd = drift_diffusion(free_hamiltonian(reg), {kAPlus}, kappa);

  SECTION("drift and diffusion blocks") {
    CHECK((dd.drift + 0.5 * kappa * Matrix::Identity(2, 2))
              .cwiseAbs()
              .maxCoeff() <= 1e-14);
    CHECK((dd.diffusion - 0.5 * kappa * Matrix::Identity(2, 2))
              .cwiseAbs()
              .maxCoeff() <= 1e-14);
  }

  SECTION("thermal occupation decays exponentially") {
    const double time = 0.7;
    const GaussianState evolved =
        evolve(thermal_state(reg, 2.0), dd, time);
    const double expected = 0.5 + 2.0 * std::exp(-kappa * time);
    CHECK(evolved.variance(0) == Approx(expected).epsilon(1e-10));
    CHECK(evolved.variance(1) == Approx(expected).epsilon(1e-10));
    CHECK(evolved.photon_number(kAPlus) ==
          Approx(2.0 * std::exp(-kappa * time)).epsilon(1e-9));
  }

  SECTION("coherent amplitude decays at kappa/2") {
    Vector mean(2);
    mean << 1.0, -0.5;
    const GaussianState displaced(reg, mean, 0.5 * Matrix::Identity(2, 2));
    const GaussianState evolved = evolve(displaced, dd, 0.9);
    CHECK(evolved.mean()[0] ==
          Approx(std::exp(-0.5 * kappa * 0.9)).epsilon(1e-10));
    CHECK(evolved.mean()[1] ==
          Approx(-0.5 * std::exp(-0.5 * kappa * 0.9)).epsilon(1e-10));
  }

  SECTION("spectrum and convergence time") {
    const auto eigs = drift_spectrum(dd);
    REQUIRE(eigs.size() == 2);
    for (const auto& eig : eigs) {
      CHECK(eig.real() == Approx(-0.5 * kappa).margin(1e-12));
      CHECK(eig.imag() == Approx(0.0).margin(1e-12));
    }
    CHECK(spectral_abscissa(dd) == Approx(-0.5 * kappa).margin(1e-12));
    CHECK(convergence_time(dd, 1e-6) ==
          Approx(2.0 * std::log(1e6) / kappa).epsilon(1e-10));
  }

  SECTION("long-time limit is vacuum") {
    const GaussianState late = evolve(thermal_state(reg, 3.0), dd, 60.0);
    CHECK((late.covariance() - 0.5 * Matrix::Identity(2, 2))
              .cwiseAbs()
              .maxCoeff() <= 1e-12);
  }
}

TEST_CASE("mixer relaxation", "[lindblad]") {
  const ModeRegistry reg({kAMinus, kC2});
  const double kappa = 1.0;

  SECTION("overdamped-oscillatory spectrum at strong coupling") {
    const auto dd =
        drift_diffusion(mixer_hamiltonian(reg, kAMinus, kC2, 2.0), {kAMinus},
                        kappa);
    const auto eigs = drift_spectrum(dd);
    REQUIRE(eigs.size() == 4);
    const double expected_imag = std::sqrt(4.0 - 1.0 / 16.0);
    for (const auto& eig : eigs) {
      CHECK(eig.real() == Approx(-0.25 * kappa).margin(1e-10));
      CHECK(std::abs(eig.imag()) == Approx(expected_imag).epsilon(1e-10));
    }
    CHECK(convergence_time(dd) == Approx(std::log(1e6) / 0.25).epsilon(1e-9));
  }

  SECTION("weak coupling splits the real rates") {
    const double g = 0.1;
    const auto dd = drift_diffusion(mixer_hamiltonian(reg, kAMinus, kC2, g),
                                    {kAMinus}, kappa);
    const auto eigs = drift_spectrum(dd);
    const double root = std::sqrt(0.0625 - g * g);
    // Sorted by descending real part: the slow pair first.
    CHECK(eigs.front().real() == Approx(-0.25 + root).epsilon(1e-9));
    CHECK(eigs.back().real() == Approx(-0.25 - root).epsilon(1e-9));
    CHECK(spectral_abscissa(dd) == Approx(-0.25 + root).epsilon(1e-9));
  }

  SECTION("steady state is vacuum and the ODE flow reaches it") {
    const auto dd =
        drift_diffusion(mixer_hamiltonian(reg, kAMinus, kC2, 2.0), {kAMinus},
                        kappa);
    const GaussianState steady = steady_state(dd);
    CHECK((steady.covariance() -
           0.5 * Matrix::Identity(4, 4)).cwiseAbs().maxCoeff() <= 1e-10);
    CHECK(stationarity_residual(dd, steady) <= 1e-12);

    const GaussianState squeezed = apply_symplectic(
        vacuum_state(reg), single_mode_squeezer(reg, kC2, 0.6));
    const GaussianState relaxed = evolve(squeezed, dd, 80.0);
    CHECK((relaxed.covariance() - steady.covariance())
              .cwiseAbs()
              .maxCoeff() <= 1e-8);
  }
}

TEST_CASE("squeezer-mixer steady state", "[lindblad][functional]") {
  const ModeRegistry reg({kAPlus, kC0});
  const double bu = 1.2;
  const double bs = 0.6;
  const auto dd = drift_diffusion(
      squeezer_mixer_hamiltonian(reg, kAPlus, kC0, bu, bs), {kAPlus}, 1.0);
  const GaussianState steady = steady_state(dd);

  SECTION("atom mode lands in the squeezed vacuum") {
    // tanh(xi) = bs/bu = 1/2 gives Var(x) = e^{-2 xi}/2 = 1/6 exactly.
    CHECK(quadrature_variance(steady, kC0, Quadrature::X) ==
          Approx(1.0 / 6.0).epsilon(1e-9));
    CHECK(quadrature_variance(steady, kC0, Quadrature::P) ==
          Approx(1.5).epsilon(1e-9));
    CHECK(quadrature_variance(steady, kAPlus, Quadrature::X) ==
          Approx(0.5).epsilon(1e-9));
    CHECK(purity(steady) == Approx(1.0).epsilon(1e-8));
    CHECK(stationarity_residual(dd, steady) <= 1e-11);
  }

  SECTION("finite-time evolution converges to the same state") {
    const GaussianState relaxed = evolve(vacuum_state(reg), dd, 60.0);
    CHECK((relaxed.covariance() - steady.covariance())
              .cwiseAbs()
              .maxCoeff() <= 1e-8);
  }
}

TEST_CASE("semigroup property of the propagator", "[lindblad]") {
  const ModeRegistry reg({kAPlus, kC0});
  const auto dd = drift_diffusion(
      squeezer_mixer_hamiltonian(reg, kAPlus, kC0, 1.1, 0.4), {kAPlus}, 0.8);
  const GaussianState start = apply_symplectic(
      vacuum_state(reg), single_mode_squeezer(reg, kC0, -0.5));
  const GaussianState direct = evolve(start, dd, 3.7);
  const GaussianState stepped = evolve(evolve(start, dd, 1.3), dd, 2.4);
  CHECK((direct.covariance() - stepped.covariance()).cwiseAbs().maxCoeff() <=
        1e-10);
  CHECK((direct.mean() - stepped.mean()).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("undamped sectors are detected", "[lindblad]") {
  const ModeRegistry reg({kAMinus, kC2});

  SECTION("a decoupled mode names itself") {
    const auto dd = drift_diffusion(mixer_hamiltonian(reg, kAMinus, kC2, 0.0),
                                    {kAMinus}, 1.0);
    CHECK_THROWS_AS(steady_state(dd), NotHurwitzError);
    try {
      steady_state(dd);
      FAIL("expected NotHurwitzError");
    } catch (const NotHurwitzError& e) {
      CHECK(std::abs(e.eigenvalue()) <= 1e-10);
      REQUIRE_FALSE(e.implicated_modes().empty());
      CHECK(std::find(e.implicated_modes().begin(),
                      e.implicated_modes().end(),
                      kC2) != e.implicated_modes().end());
      CHECK(std::string(e.what()).find("not Hurwitz") != std::string::npos);
      CHECK(std::string(e.what()).find("C2k(1)") != std::string::npos);
    }
    CHECK_THROWS_AS(convergence_time(dd), NotHurwitzError);
  }

  SECTION("the stability boundary beta_s = beta_u is marginal") {
    const ModeRegistry pair({kAPlus, kC0});
    const auto dd = drift_diffusion(
        squeezer_mixer_hamiltonian(pair, kAPlus, kC0, 1.0, 1.0), {kAPlus},
        1.0);
    CHECK(spectral_abscissa(dd) >= -1e-9);
    CHECK_THROWS_AS(steady_state(dd), NotHurwitzError);
    // evolve itself never gates on the spectrum: marginal dynamics are
    // legitimate for finite times.
    CHECK_NOTHROW(evolve(vacuum_state(pair), dd, 1.0));
  }
}

TEST_CASE("dynamics input validation", "[lindblad]") {
  const ModeRegistry reg({kAPlus});
  const auto dd = drift_diffusion(free_hamiltonian(reg), {kAPlus}, 1.0);

  SECTION("negative rates and times") {
    CHECK_THROWS_AS(drift_diffusion(free_hamiltonian(reg), {kAPlus}, -1.0),
                    Error);
    CHECK_THROWS_AS(evolve(vacuum_state(reg), dd, -0.1), Error);
  }

  SECTION("zero time is the identity") {
    const GaussianState state = thermal_state(reg, 1.0);
    const GaussianState same = evolve(state, dd, 0.0);
    CHECK((same.covariance() - state.covariance()).cwiseAbs().maxCoeff() ==
          0.0);
  }

  SECTION("registry mismatch") {
    const ModeRegistry other({kAMinus});
    CHECK_THROWS_AS(evolve(vacuum_state(other), dd, 1.0), ModeError);
  }

  SECTION("tolerance bounds") {
    CHECK_THROWS_AS(convergence_time(dd, 0.0), Error);
    CHECK_THROWS_AS(convergence_time(dd, 1.5), Error);
  }
}
