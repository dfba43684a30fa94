// SPDX-License-Identifier: Apache-2.0
//
// Schur-Weyl machinery on (C^d)^(x n): integer partitions, standard tableau
// counts, Schur polynomial dimensions, symmetric-group characters, Young
// projectors, the exact collective twirl over U(d) acting identically on all
// factors, a Monte-Carlo Haar twirl as an independent stochastic oracle, and
// the construction of pure states that twirl to the maximally mixed state.
//
// Combinatorial quantities use exact integer arithmetic; floating point
// enters only through operators.
#pragma once

#include "qres/qcore.hpp"
#include "qres/twirl.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace qres::schurweyl {

using qcore::DensityMatrix;
using qcore::Matrix;
using qcore::PureState;
using qcore::Vector;

/// Integer partition lambda |- n with weakly decreasing positive parts.
class Partition {
 public:
  explicit Partition(std::vector<int> parts);
  static Partition empty() { return Partition(); }

  int n() const { return n_; }
  const std::vector<int>& parts() const { return parts_; }
  bool operator==(const Partition& other) const { return parts_ == other.parts_; }

 private:
  Partition() : n_(0) {}
  std::vector<int> parts_;
  int n_;
};

/// All partitions of n in reverse lexicographic order ({n} first).
std::vector<Partition> partitions(int n);

/// Permutation of {0..n-1}.
class Permutation {
 public:
  explicit Permutation(std::vector<int> mapping);
  static Permutation identity(int n);
  static std::vector<Permutation> all(int n);  // guarded to n <= 8

  int n() const { return static_cast<int>(mapping_.size()); }
  int operator()(int i) const { return mapping_.at(i); }
  const std::vector<int>& mapping() const { return mapping_; }
  Permutation inverse() const;
  Permutation compose(const Permutation& then) const;  // this after `then`
  Partition cycle_type() const;
  int cycle_count() const;

 private:
  std::vector<int> mapping_;
};

/// Number of standard Young tableaux of shape lambda (hook length formula).
std::int64_t syt_count(const Partition& lambda);

/// Schur polynomial s_lambda at d ones (hook content formula); zero when the
/// shape has more than d rows.
std::int64_t schur_at_ones(const Partition& lambda, int d);

/// Irreducible character chi^lambda on the class of the given cycle type
/// (Murnaghan-Nakayama over beta-sets).
std::int64_t character(const Partition& lambda, const Partition& cycle_type);

/// Size of the conjugacy class with the given cycle type.
std::int64_t conjugacy_class_size(const Partition& cycle_type);

/// Operator permuting n d-dimensional tensor factors; P_pi P_sigma equals
/// P_{pi o sigma} and tr P_pi = d^{#cycles(pi)}.
Matrix permutation_operator(const Permutation& pi, int d);

/// Basis index map m with P_pi e_j = e_{m[j]}.
std::vector<int> permutation_index_map(const Permutation& pi, int d);

/// Central Young projector P^lambda = (f^lambda/n!) sum_pi chi^lambda(pi) P_pi.
Matrix young_projector(const Partition& lambda, int n, int d);

struct SchurWeylRecord {
  Partition lambda;
  std::int64_t syt;         // f^lambda
  std::int64_t schur_dim;   // s_lambda(1^d)
  Matrix projector;         // P^lambda on (C^d)^(x n)
};

struct SchurWeylTable {
  int n, d;
  std::vector<SchurWeylRecord> records;
};

SchurWeylTable schur_weyl_table(int n, int d);

/// Exact twirl over all collective unitaries U^(x n), built as the
/// Hilbert-Schmidt orthogonal projection onto span{P_pi} through the Gram
/// matrix W[s,p] = d^{#cycles(s^-1 p)} and its pseudo-inverse. The twirl is
/// the unique self-adjoint idempotent onto that commutant, so the projection
/// form is forced; singular values below 1e-10 of the largest are discarded,
/// which handles the linear dependencies that appear for d < n. Guarded to
/// n <= 5 and d^n <= 256.
twirl::TwirlChannel collective_twirl(int n, int d);

/// Average of U^(x n) rho U^(x n)^dag over `samples` Haar unitaries drawn by
/// QR of a complex Gaussian matrix with the R-diagonal phase fix.
/// Deterministic for a given seed; sample i draws from stream i, so any
/// sharding of the sample range reproduces the sequential result.
DensityMatrix haar_twirl_mc(const DensityMatrix& rho, int n, int d,
                            int samples, std::uint64_t seed);

struct MaximallyTwirledResult {
  std::optional<PureState> state;  // empty = NotFound within the budget
  double residual = 0.0;           // max-entry deviation of the twirl from 1/d^n
};

/// Searches for a pure state mapped to the maximally mixed state by the
/// collective twirl: per Schur-Weyl block a vector maximally entangled
/// across the hidden unitary/permutation factors, combined with weights
/// sqrt(tr P^lambda / d^n). Returns NotFound when some contributing block
/// cannot support the required Schmidt rank or the residual check fails.
MaximallyTwirledResult maximally_twirled_state(int n, int d,
                                               std::uint64_t seed = 7);

struct ThreeQubitDemo {
  Matrix p21, p3;        // Young projectors for {2,1} and {3}, d = 2
  Vector x21, x3, x;     // canonical block states and their combination
  Matrix twirled;        // collective twirl of |x><x|
  double residual_fixed_x21;   // ||P21 x21 - x21||
  double residual_fixed_x3;    // ||P3 x3 - x3||
  double residual_block_x21;   // ||G(x21 x21+) - P21/4||_max
  double residual_block_x3;    // ||G(x3 x3+) - P3/4||_max
  double residual_final;       // ||G(x x+) - 1_8/8||_max
};

/// Three-qubit worked example: emits both nonzero Young projectors, the
/// canonical block states, their combination, the twirl of the combined
/// state, and all residuals.
ThreeQubitDemo three_qubit_demo();

}  // namespace qres::schurweyl
