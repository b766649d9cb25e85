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

// Collective-mode bookkeeping: bosonic modes C_{mk} built from an atomic
// ensemble are only independent (canonically commuting) when the position
// overlap sums between different momentum orders vanish. This module
// quantifies how close a given geometry comes to that ideal.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include "ringcv/core.hpp"

namespace ringcv {

/// Momentum orders (units of the cavity wave number) carried by the
/// collective modes used throughout the library.
inline constexpr std::array<int, 3> kCollectiveOrders{0, 2, -2};

/// Atom positions of one ensemble along the cavity axis.
struct EnsembleGeometry {
  double wavenumber = 0.0;         // cavity-field wave number k
  std::vector<double> positions;   // atom coordinates x_j

  /// Evenly spaced chain x_j = j * spacing, j = 0 .. n_atoms-1.
  static EnsembleGeometry regular_chain(std::size_t n_atoms, double wavenumber,
                                        double spacing) {
    if (n_atoms == 0) throw Error("ensemble needs at least one atom");
    if (wavenumber <= 0.0) throw Error("wavenumber must be positive");
    if (spacing < 0.0) throw Error("spacing must be nonnegative");
    EnsembleGeometry g;
    g.wavenumber = wavenumber;
    g.positions.resize(n_atoms);
    for (std::size_t j = 0; j < n_atoms; ++j) {
      g.positions[j] = static_cast<double>(j) * spacing;
    }
    return g;
  }

  std::size_t n_atoms() const { return positions.size(); }

  /// Spatial extent of the ensemble.
  double length() const {
    if (positions.empty()) return 0.0;
    auto [lo, hi] = std::minmax_element(positions.begin(), positions.end());
    return *hi - *lo;
  }
};

/// 3x3 matrix of normalized overlap sums over the orders (0, +2, -2):
/// entry (m, m') = (1/N) sum_j exp(i (m - m') k x_j). Diagonal entries are
/// exactly 1; off-diagonal magnitudes measure non-orthogonality of the
/// collective modes.
inline Eigen::Matrix3cd overlap_matrix(const EnsembleGeometry& geometry) {
  if (geometry.positions.empty()) {
    throw Error("ensemble needs at least one atom");
  }
  Eigen::Matrix3cd overlap;
  const double n = static_cast<double>(geometry.n_atoms());
  for (std::size_t a = 0; a < kCollectiveOrders.size(); ++a) {
    for (std::size_t b = 0; b < kCollectiveOrders.size(); ++b) {
      const double delta =
          static_cast<double>(kCollectiveOrders[a] - kCollectiveOrders[b]) *
          geometry.wavenumber;
      Complex sum{0.0, 0.0};
      for (const double x : geometry.positions) {
        sum += std::exp(Complex(0.0, delta * x));
      }
      overlap(static_cast<long>(a), static_cast<long>(b)) = sum / n;
    }
  }
  return overlap;
}

/// Continuum (uniform-density chain of length L) limit of an overlap entry:
/// (1/L) int_0^L exp(i (m - m') k x) dx. Equals 1 on the diagonal and
/// (e^{i d kL} - 1)/(i d kL) with d = m - m' otherwise, so its magnitude is
/// bounded by 2 / (|m - m'| kL).
inline Complex chain_overlap(double k_times_length, int m, int m_prime) {
  if (m == m_prime) return Complex(1.0, 0.0);
  if (k_times_length <= 0.0) {
    throw Error("kL must be positive for the continuum overlap");
  }
  const double theta = static_cast<double>(m - m_prime) * k_times_length;
  const Complex i_theta(0.0, theta);
  return (std::exp(i_theta) - Complex(1.0, 0.0)) / i_theta;
}

/// Largest off-diagonal overlap magnitude: 0 for perfectly independent
/// collective modes, 1 when two orders coincide (kL -> 0).
inline double orthogonality_deficit(const Eigen::Matrix3cd& overlap) {
  double deficit = 0.0;
  for (long a = 0; a < 3; ++a) {
    for (long b = 0; b < 3; ++b) {
      if (a == b) continue;
      deficit = std::max(deficit, std::abs(overlap(a, b)));
    }
  }
  return deficit;
}

/// Default deficit above which reports carry a non-orthogonality warning.
inline constexpr double kDeficitWarnThreshold = 0.05;

}  // namespace ringcv
