// SPDX-License-Identifier: Apache-2.0
//
// Resource destroying maps: twirls over finite unitary groups, dephasing,
// depolarizing, local unital twirls, two-party collective and permutation
// twirls in closed form, and the distinguished states attached to them.
#pragma once

#include "qres/qcore.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace qres::twirl {

using qcore::DensityMatrix;
using qcore::Matrix;
using qcore::PureState;

inline constexpr int kMaxGroupOrder = 4096;
inline constexpr int kClosureCheckLimit = 64;

/// Explicit list of unitaries defining a twirl and an encoding alphabet.
/// Validates unitarity of each element (1e-9), presence of the identity and
/// closure under multiplication up to a global phase (1e-8); the closure
/// check is skipped with a warning for orders above 64.
class FiniteUnitaryGroup {
 public:
  FiniteUnitaryGroup(int dim, std::vector<Matrix> elements,
                     std::vector<std::string> labels = {});

  int dim() const { return dim_; }
  int order() const { return static_cast<int>(elements_.size()); }
  const Matrix& element(int i) const { return elements_.at(i); }
  const std::vector<Matrix>& elements() const { return elements_; }
  const std::vector<std::string>& labels() const { return labels_; }

 private:
  int dim_;
  std::vector<Matrix> elements_;
  std::vector<std::string> labels_;
};

enum class TwirlKind {
  dephasing,
  depolarizing,
  local,
  finite_group,
  permutation,
  collective,
  custom,
};

std::string to_string(TwirlKind kind);

/// Idempotent self-adjoint channel projecting onto the fixed-point algebra of
/// a group action. Carries a structured fast path usable at any dimension;
/// the dense superoperator is materialised (and the idempotency and
/// self-adjointness invariants verified) for dim <= 32.
class TwirlChannel {
 public:
  /// `superoperator_hint` supplies a prebuilt dense form when the caller can
  /// assemble one more cheaply than probing the action on matrix units.
  TwirlChannel(int dim, TwirlKind kind, std::string tag,
               std::function<Matrix(const Matrix&)> action,
               std::optional<Matrix> superoperator_hint = std::nullopt);

  /// Wraps an existing channel, verifying idempotency and self-adjointness.
  static TwirlChannel from_channel(qcore::QuantumChannel channel,
                                   TwirlKind kind, std::string tag);

  int dim() const { return dim_; }
  TwirlKind kind() const { return kind_; }
  const std::string& tag() const { return tag_; }

  DensityMatrix apply(const DensityMatrix& rho) const;
  Matrix apply_raw(const Matrix& op) const;

  bool has_superoperator() const { return dense_.has_value(); }
  const qcore::QuantumChannel& channel() const;

 private:
  int dim_;
  TwirlKind kind_;
  std::string tag_;
  std::function<Matrix(const Matrix&)> action_;
  std::optional<qcore::QuantumChannel> dense_;
};

// Group constructors. heisenberg_weyl_group(d) holds the d^2 shift/clock
// products X^a Z^b (a unitary 1-design); z_group(d) the d clock powers;
// pauli_group_on_A places the Heisenberg-Weyl group on the first factor.
FiniteUnitaryGroup z_group(int d);
FiniteUnitaryGroup heisenberg_weyl_group(int d);
FiniteUnitaryGroup pauli_group_on_A(int dim_a, int dim_b);
/// The n! permutation operators of n qudits of dimension d.
FiniteUnitaryGroup symmetric_group_unitaries(int n, int d);
FiniteUnitaryGroup tensor_product(const FiniteUnitaryGroup& a,
                                  const FiniteUnitaryGroup& b);
FiniteUnitaryGroup tensor_power(const FiniteUnitaryGroup& g, int n);

/// Uniform average of conjugations over the group elements.
TwirlChannel finite_group_twirl(const FiniteUnitaryGroup& group);

/// Zeroes off-diagonal entries in the computational basis.
TwirlChannel dephasing_channel(int dim);

/// Sends every state to the maximally mixed state.
TwirlChannel depolarizing_channel(int dim);

/// rho_AB -> 1_A/d_A (x) tr_A rho_AB.
TwirlChannel local_unital_twirl(int dim_a, int dim_b);

/// Average over all n! subsystem permutations of n qudits of dimension d.
/// For n = 2 this equals the pinching onto the symmetric/antisymmetric
/// blocks. Guarded to n <= 5 and d^n <= 256.
TwirlChannel permutation_twirl(int n, int d);

/// Projector onto the symmetric subspace of two qudits; trace d(d+1)/2.
Matrix symmetric_projector(int d);

/// Closed-form two-party collective twirl:
/// p_s Pi_s/d_s + (1-p_s)(1-Pi_s)/(d^2-d_s) with p_s = tr(rho Pi_s).
DensityMatrix collective_twirl_two_party(const DensityMatrix& rho, int d);

/// sqrt((d+1)/2d)|psi_s> + sqrt((d-1)/2d)|psi_a> with deterministic subspace
/// representatives (|00> and the first antisymmetric basis vector); twirls
/// collectively to the maximally mixed state.
PureState optimal_bipartite_state(int d);

/// Basis state whose permutations are mutually orthogonal when d >= n
/// (|0,1,...,n-1>); for d < n the block ansatz |0..d-1>^(floor(n/d)) (x)
/// |0..r-1>. Orthogonality of the permuted family is not guaranteed below
/// d = n; see permutation_overlap_matrix.
PureState permutation_coding_state(int n, int d);

/// Gram matrix <P_pi psi | P_sigma psi> of the permuted family.
Matrix permutation_overlap_matrix(const PureState& psi, int n, int d);

}  // namespace qres::twirl
