// SPDX-License-Identifier: Apache-2.0
//
// Message-count bounds. Everything is reported as log2 M in bits:
//   * the hypothesis-testing upper bound for arbitrary idempotent resource
//     destroying maps,
//   * the two-sided information-spectrum sandwich for twirling channels,
//     log2 M between D_s^{eps-delta} + log2(delta) and
//     D_s^{eps+delta} + log2(1/delta),
//   * the second-order asymptotic rate D + Phi^-1(eps) sqrt(V/N),
// plus the coherence, super-dense-coding, thermodynamic and clock
// specialisations.
#pragma once

#include "qres/entropy.hpp"
#include "qres/qcore.hpp"
#include "qres/twirl.hpp"

#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace qres::bounds {

using entropy::ExtReal;
using qcore::DensityMatrix;
using qcore::HermitianObservable;
using qcore::PureState;

/// Upper bound on log2 M for encodings destroyed by an arbitrary idempotent
/// map: D_H^eps(rho || rdm(rho)).
ExtReal upper_bound_log_messages(const DensityMatrix& rho,
                                 const qcore::QuantumChannel& rdm, double eps);
ExtReal upper_bound_log_messages(const DensityMatrix& rho,
                                 const twirl::TwirlChannel& rdm, double eps);

struct SandwichRow {
  double delta;
  ExtReal lower;  // D_s^{eps-delta} + log2(delta)
  ExtReal upper;  // D_s^{eps+delta} + log2(1/delta)
};

struct BoundReport {
  ExtReal log2_upper;  // hypothesis-testing upper bound
  std::vector<SandwichRow> sandwich;
  ExtReal best_lower;  // max over the delta grid
  ExtReal best_upper;  // min over the grid, including log2_upper
  double epsilon = 0.0;
  int state_dim = 0;
  std::string rdm_tag;
};

/// Two-sided single-shot bounds for a twirling channel over the given delta
/// grid; every delta must lie in (0, min{eps, 1-eps}).
BoundReport sandwich_bounds(const DensityMatrix& rho,
                            const twirl::TwirlChannel& g, double eps,
                            const std::vector<double>& delta_grid);

/// Same bounds for N i.i.d. copies: the pair (rho^(x N), (G rho)^(x N)) is
/// formed explicitly, so N is limited by what the information spectrum
/// evaluator can handle (any N with a pure state and a diagonal twirl
/// output, dim <= 256 otherwise).
BoundReport sandwich_bounds_iid(const DensityMatrix& rho,
                                const twirl::TwirlChannel& g, double eps,
                                const std::vector<double>& delta_grid, int copies);

struct Rate {
  double first_order;   // D(rho || G rho), bits per copy
  double second_order;  // D + Phi^-1(eps) sqrt(V/N), bits per copy
};

/// Second-order asymptotic encoding rate; returns the first order exactly
/// when the relative entropy variance vanishes.
Rate asymptotic_rate(const DensityMatrix& rho, const twirl::TwirlChannel& g,
                     double eps, long long copies);

/// Residual of the additive rate splitting
/// [log2 d - S(rho)] = [S(G rho) - S(rho)] + [log2 d - S(G rho)].
double splitting_check(const DensityMatrix& rho, const twirl::TwirlChannel& g);

/// Rate for encoding into coherences: asymptotic_rate with the dephasing
/// twirl in the computational basis.
Rate coherence_rate(const DensityMatrix& rho, double eps, long long copies);

/// S(A|B) = S(rho_AB) - S(rho_B) in bits.
double conditional_entropy(const DensityMatrix& rho_ab, int dim_a, int dim_b);

/// V(A|B) = V(rho_AB || 1_A (x) rho_B); evaluated against the normalised
/// reference 1_A/d_A (x) rho_B, which leaves V unchanged.
double conditional_entropy_variance(const DensityMatrix& rho_ab, int dim_a,
                                    int dim_b);

/// exp(-beta H)/Z through the eigendecomposition of H.
DensityMatrix gibbs_state(const HermitianObservable& h, double beta);

/// N D(rho||gamma) + sqrt(N V(rho||gamma)) Phi^-1(eps) in bits, gamma the
/// Gibbs state of (h, beta). Errors out when rho's support escapes gamma's.
double thermo_bound(const DensityMatrix& rho, const HermitianObservable& h,
                    double beta, double eps, long long copies);

/// N h(p) bits with p the energy distribution of psi; eigenvalues closer
/// than 1e-9 (relative) are merged into one level before forming p.
double clock_bound(const PureState& psi, const HermitianObservable& h,
                   long long copies);

struct RateCurveRow {
  long long copies;
  double first_order;
  double second_order;
  std::optional<double> lower_per_copy;  // sandwich lower / N, when feasible
  std::optional<double> upper_per_copy;
};

/// Rate curve over a list of copy counts; sandwich columns are filled for
/// rows where the i.i.d. pair is within reach of the evaluator.
std::vector<RateCurveRow> rate_curve(const DensityMatrix& rho,
                                     const twirl::TwirlChannel& g, double eps,
                                     double delta,
                                     const std::vector<long long>& copies);

/// CSV with header N,first_order,second_order,lower,upper; missing sandwich
/// entries are left blank.
void write_rate_curve_csv(std::ostream& out,
                          const std::vector<RateCurveRow>& rows);

}  // namespace qres::bounds
