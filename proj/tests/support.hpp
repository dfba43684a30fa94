// SPDX-License-Identifier: Apache-2.0
//
// Shared test helpers: seeded random states, observables and channels, plus
// the independent oracles the suites check the implementation against. The
// oracles deliberately avoid the library code paths they validate.
#pragma once

#include "qres/qcore.hpp"
#include "qres/rng.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

namespace testsupport {

using qres::qcore::Complex;
using qres::qcore::DensityMatrix;
using qres::qcore::Matrix;
using qres::qcore::Vector;

inline Matrix random_ginibre(int rows, int cols, qres::rng::Philox& gen) {
  Matrix g(rows, cols);
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) {
      g(i, j) = Complex(gen.next_gaussian(), gen.next_gaussian());
    }
  }
  return g;
}

inline Matrix random_hermitian(int dim, qres::rng::Philox& gen) {
  const Matrix g = random_ginibre(dim, dim, gen);
  return 0.5 * (g + g.adjoint().eval());
}

/// Full-rank random state GG^dag / tr (optionally mixed towards uniform).
inline DensityMatrix random_density(int dim, qres::rng::Philox& gen,
                                    double uniform_mix = 0.0) {
  const Matrix g = random_ginibre(dim, dim, gen);
  Matrix rho = g * g.adjoint();
  rho /= rho.trace().real();
  if (uniform_mix > 0.0) {
    rho = (1.0 - uniform_mix) * rho +
          uniform_mix * Matrix::Identity(dim, dim) / dim;
  }
  return DensityMatrix(rho);
}

inline qres::qcore::PureState random_pure(int dim, qres::rng::Philox& gen) {
  Vector v = random_ginibre(dim, 1, gen).col(0);
  v /= v.norm();
  return qres::qcore::PureState(v);
}

/// Random CPTP channel from a Haar isometry with `kraus_count` environments.
inline qres::qcore::QuantumChannel random_channel(int dim, int kraus_count,
                                                  qres::rng::Philox& gen) {
  const Matrix g = random_ginibre(dim * kraus_count, dim, gen);
  const Eigen::HouseholderQR<Matrix> qr(g);
  Matrix iso = Matrix(qr.householderQ()).leftCols(dim);
  std::vector<Matrix> kraus;
  for (int k = 0; k < kraus_count; ++k) {
    kraus.push_back(iso.middleRows(k * dim, dim));
  }
  return qres::qcore::QuantumChannel::from_kraus(std::move(kraus), dim, dim);
}

/// Random diagonal state (commuting-pair building block).
inline DensityMatrix random_diagonal_density(int dim, qres::rng::Philox& gen) {
  Eigen::VectorXd p(dim);
  double sum = 0.0;
  for (int i = 0; i < dim; ++i) {
    p[i] = 0.05 + gen.next_double();
    sum += p[i];
  }
  p /= sum;
  Matrix rho = Matrix::Zero(dim, dim);
  for (int i = 0; i < dim; ++i) rho(i, i) = p[i];
  return DensityMatrix(rho);
}

// --- oracles ---------------------------------------------------------------

/// Classical Neyman-Pearson oracle on eigenvalue pairs (p_i, q_i): exhausts
/// all thresholds with fractional weights and returns the minimal type-II
/// error at type-I error <= eps, as -log2.
inline double np_oracle_bits(std::vector<double> p, std::vector<double> q,
                             double eps) {
  std::vector<size_t> order(p.size());
  std::iota(order.begin(), order.end(), size_t{0});
  // Likelihood ratio descending; q = 0 entries (infinite ratio) first.
  std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    const bool inf_a = q[a] <= 0.0, inf_b = q[b] <= 0.0;
    if (inf_a != inf_b) return inf_a;
    if (inf_a && inf_b) return p[a] > p[b];
    return p[a] * q[b] > p[b] * q[a];
  });
  const double target = 1.0 - eps;
  double acc_p = 0.0, acc_q = 0.0;
  for (size_t k = 0; k < order.size() && acc_p < target; ++k) {
    const double pk = p[order[k]], qk = q[order[k]];
    if (pk <= 0.0) continue;  // contributes only type-II error
    const double c = std::min(1.0, (target - acc_p) / pk);
    acc_p += c * pk;
    acc_q += c * qk;
  }
  if (acc_q <= 0.0) return std::numeric_limits<double>::infinity();
  return -std::log2(acc_q);
}

/// Dense grid-scan oracle for the information spectrum quantity on
/// commuting (diagonal) pairs.
inline double info_spectrum_grid_oracle(const std::vector<double>& p,
                                        const std::vector<double>& q,
                                        double delta, double k_lo, double k_hi,
                                        int grid) {
  double best = k_lo;
  for (int i = 0; i <= grid; ++i) {
    const double k = k_lo + (k_hi - k_lo) * i / grid;
    const double scale = std::exp2(k);
    double mass = 0.0;
    for (size_t j = 0; j < p.size(); ++j) {
      if (scale * q[j] - p[j] >= 0.0) mass += p[j];
    }
    if (mass <= delta) best = k;
  }
  return best;
}

}  // namespace testsupport
