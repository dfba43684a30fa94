// SPDX-License-Identifier: Apache-2.0
//
// Random-codebook achievability at desk scale: unitary encodings over a
// finite group, pretty-good-measurement decoding, the collision-entropy route
// to the success probability, Monte-Carlo estimation of achievable message
// counts, and the operational privacy check.
#pragma once

#include "qres/bounds.hpp"
#include "qres/qcore.hpp"
#include "qres/twirl.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace qres::codesim {

using qcore::DensityMatrix;
using twirl::FiniteUnitaryGroup;

// Desk-scale guards.
inline constexpr int kMaxDim = 64;
inline constexpr int kMaxMessages = 256;
inline constexpr int kMaxCollisionDim = 2048;

/// Map from messages {1..M} to 1-based group-element indices; repeated
/// indices are allowed (random coding).
class Codebook {
 public:
  Codebook(std::vector<int> assignment, int group_order);
  static Codebook all_distinct(int messages);

  int messages() const { return static_cast<int>(assignment_.size()); }
  int index(int message) const { return assignment_.at(message); }  // 0-based message
  const std::vector<int>& assignment() const { return assignment_; }

 private:
  std::vector<int> assignment_;
};

/// sigma_m = U_{g_m} rho U_{g_m}^dag for every message of the codebook.
std::vector<DensityMatrix> encode(const DensityMatrix& rho,
                                  const FiniteUnitaryGroup& group,
                                  const Codebook& codebook);

struct PgmDecoder {
  qcore::Povm povm;  // M message elements plus one off-support abstain element
  int support_dim = 0;
};

/// Pretty good measurement E_m = S sigma_m S with S the inverse square root
/// of the state sum on its support; the residual off-support projector is a
/// dedicated abstain outcome counted as an error.
PgmDecoder build_pgm(const std::vector<DensityMatrix>& states);

/// (1/M) sum_m tr(sigma_m E_m).
double success_probability_direct(const std::vector<DensityMatrix>& states,
                                  const PgmDecoder& decoder);

/// Same probability through the collision relative entropy of the joint
/// message/classical-register/quantum state against the product of its
/// marginals: (1/M) 2^{D2}.
double success_probability_via_collision(const DensityMatrix& rho,
                                         const FiniteUnitaryGroup& group,
                                         const Codebook& codebook);

struct SimulationResult {
  double mean_success = 0.0;
  std::vector<double> per_codebook;
  double stderr_mean = 0.0;
  std::uint64_t seed = 0;
  int messages = 0;
  double eps_target = 0.0;
  // Existence witness within the sample: the random-coding argument runs
  // through the mean but concludes through a best codebook.
  double best_success = 0.0;
  int best_index = 0;
};

/// Exact per-codebook success probabilities over `trials` i.i.d.-uniform
/// random codebooks; only the codebook draw is random. Deterministic per
/// seed, independent of the thread count.
SimulationResult monte_carlo_achievability(const DensityMatrix& rho,
                                           const FiniteUnitaryGroup& group,
                                           int messages, int trials,
                                           std::uint64_t seed,
                                           double eps_target = 0.0,
                                           int threads = 1);

struct AchievabilityReport {
  int m_best = 1;          // largest M certified by a tested codebook
  double log2_m_best = 0;  // (the all-distinct codebook joins the candidates
                           //  whenever M <= |G|)
  int m_mean = 1;          // largest M with sampled-mean error <= eps
  double log2_m_mean = 0;
  bounds::BoundReport sandwich;  // single-shot bound comparison at the same eps
};

/// Largest achievable log2 M at average decoding error eps, searched by
/// doubling followed by bisection over integer M. Success probabilities per
/// codebook are exact; randomness enters only through codebook sampling.
AchievabilityReport find_achievable_log_m(const DensityMatrix& rho,
                                          const FiniteUnitaryGroup& group,
                                          double eps, int trials,
                                          std::uint64_t seed,
                                          std::vector<double> delta_grid = {},
                                          int threads = 1);

/// Operational privacy: max_m || G(sigma_m) - G(rho) ||_max. Encodings into
/// resources destroyed by G look identical after G.
double check_privacy(const DensityMatrix& rho, const FiniteUnitaryGroup& group,
                     const Codebook& codebook, const twirl::TwirlChannel& g);

}  // namespace qres::codesim
