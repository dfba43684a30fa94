// SPDX-License-Identifier: Apache-2.0
//
// Entropic functionals: von Neumann and Shannon entropies, relative entropy
// and its variance, collision relative entropy, information spectrum relative
// entropy, hypothesis testing relative entropy, covariance, and the inverse
// normal CDF. All logarithms are base 2 and all results are in bits.
#pragma once

#include "qres/qcore.hpp"

#include <optional>

namespace qres::entropy {

using qcore::DensityMatrix;
using qcore::HermitianObservable;
using qcore::Matrix;

/// A real value extended with an explicit infinity tag. Infinite divergences
/// (disjoint supports) are values, not exceptions and not sentinel floats.
struct ExtReal {
  double value = 0.0;
  bool infinite = false;

  static ExtReal finite(double v) { return {v, false}; }
  static ExtReal infinity() { return {0.0, true}; }
  bool is_finite() const { return !infinite; }
};

enum class Quantity { S, D, V, D2, Ds, DH, h, cov };

/// A tagged entropic value as reported by the CLI and bound evaluators.
struct EntropicValue {
  ExtReal value;                    // bits (or bits^2 for variances)
  Quantity quantity;
  std::optional<double> parameter;  // delta for Ds, epsilon for DH
};

/// Validates the sign invariants (variances and relative entropies are
/// nonnegative up to 1e-9) and assembles the tagged value.
EntropicValue make_entropic(Quantity quantity, ExtReal value,
                            std::optional<double> parameter = std::nullopt);

/// S(rho) = -tr(rho log rho) in bits.
double von_neumann_entropy(const DensityMatrix& rho);

/// h(p) = -sum p_k log p_k for a probability vector.
double shannon_entropy(const Eigen::VectorXd& p);

/// D(rho||sigma) = tr(rho(log rho - log sigma)); infinite when the support
/// of rho is not contained in the support of sigma.
ExtReal relative_entropy(const DensityMatrix& rho, const DensityMatrix& sigma);

/// V(rho||sigma) = tr(rho(log rho - log sigma)^2) - D^2. Requires support
/// containment.
double relative_entropy_variance(const DensityMatrix& rho,
                                 const DensityMatrix& sigma);

/// V(rho) = tr(rho(S(rho) + log rho)^2); coincides with V(rho || 1/d).
double entropy_variance(const DensityMatrix& rho);

/// cov_rho(A,B) = Re tr(rho A B) - tr(rho A) tr(rho B). The real symmetric
/// form is the one entering the variance decomposition.
double matrix_covariance(const DensityMatrix& rho,
                         const HermitianObservable& a,
                         const HermitianObservable& b);

/// D2(rho||sigma) = log tr[(sigma^{-1/4} rho sigma^{-1/4})^2] with inverse
/// powers on the support of sigma. Requires support containment.
double collision_relative_entropy(const DensityMatrix& rho,
                                  const DensityMatrix& sigma);

struct InfoSpectrumOptions {
  double resolution_bits = 1e-6;
  /// Dense-scan guard: verifies that tr(rho P_{rho <= 2^K sigma}) is
  /// nondecreasing over the bracket and raises a diagnostic if not. The
  /// bisection assumes monotonicity; this converts the assumption into an
  /// observable. Intended for test builds.
  bool validate_monotone = false;
  int validation_grid = 400;
};

/// D_s^delta(rho||sigma) = sup{ K : tr(rho P_{rho <= 2^K sigma}) <= delta },
/// located by bracketing plus bisection to `resolution_bits`. P is the
/// projector onto the nonnegative eigenspaces of 2^K sigma - rho. Infinite
/// when the trace never exceeds delta (support-limited plateau); a failed
/// lower bracket is reported as an error, never clamped.
///
/// A closed-form secular-equation path handles the pure-state-versus-diagonal
/// case at any dimension; the dense path is limited to dim <= 256.
ExtReal info_spectrum_relative_entropy(const DensityMatrix& rho,
                                       const DensityMatrix& sigma,
                                       double delta,
                                       const InfoSpectrumOptions& opts = {});

/// D_H^eps(rho||sigma) = -log inf{ tr(Q sigma) : 0 <= Q <= 1,
/// tr(Q rho) >= 1-eps }, solved by quantum Neyman-Pearson: Q(mu) is the
/// projector onto the strictly positive eigenspace of rho - mu*sigma plus a
/// fractional weight on the crossing eigenspace chosen so tr(Q rho) = 1-eps
/// exactly; mu is found by monotone bisection on tr(Q(mu) rho). Infinite when
/// a test with tr(Q sigma) = 0 and tr(Q rho) >= 1-eps exists.
ExtReal hypothesis_testing_relative_entropy(const DensityMatrix& rho,
                                            const DensityMatrix& sigma,
                                            double eps);

/// Standard normal CDF, evaluated through the complementary error function.
double normal_cdf(double x);

/// Inverse of the standard normal CDF on (0,1); |Phi(Phi^-1(eps)) - eps|
/// stays below 1e-9.
double inverse_normal_cdf(double eps);

/// rho-mass outside the support of sigma (0 when supports are nested).
double support_violation_mass(const DensityMatrix& rho,
                              const DensityMatrix& sigma);

}  // namespace qres::entropy
