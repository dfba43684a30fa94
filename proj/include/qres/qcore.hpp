// SPDX-License-Identifier: Apache-2.0
//
// Complex Hermitian linear algebra for finite-dimensional quantum states and
// channels: density matrices, pure states, observables, POVMs, superoperator
// channels, tensor products, partial traces, spectral matrix functions, and
// the commutation test for encoding maps against a resource destroying map.
#pragma once

#include <Eigen/Dense>

#include <complex>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace qres::qcore {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

// Validation tolerances. States are held to 1e-10, channels to 1e-9, and
// channel-algebra identities (idempotency, commutation) to 1e-8.
inline constexpr double kHermitianTol = 1e-10;
inline constexpr double kTraceTol = 1e-10;
inline constexpr double kEigFloor = 1e-10;
inline constexpr double kChannelTol = 1e-9;
inline constexpr double kAlgebraTol = 1e-8;
// Relative spectral cutoff below which eigenvalues count as zero when taking
// functions on the support.
inline constexpr double kSupportCutoff = 1e-12;
// Largest dimension for which a dense superoperator is materialised.
inline constexpr int kMaxSuperoperatorDim = 32;

/// Numerical-domain failure (bad state, support violation, size guard, ...).
/// The CLI maps this to exit code 1.
class DomainError : public std::runtime_error {
 public:
  explicit DomainError(const std::string& what) : std::runtime_error(what) {}
};

inline double max_abs(const Matrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

inline bool is_hermitian(const Matrix& m, double tol = kHermitianTol) {
  return m.rows() == m.cols() && max_abs(m - m.adjoint()) <= tol;
}

/// Positive semidefinite unit-trace Hermitian matrix; the information carrier.
class DensityMatrix {
 public:
  /// Validates Hermiticity (1e-10 entrywise), unit trace (1e-10) and
  /// positivity (min eigenvalue >= -1e-10).
  explicit DensityMatrix(Matrix entries);

  /// Constructs without the spectral positivity check, for matrices that are
  /// valid by construction (pure-state projectors, tensor products of valid
  /// states, structured twirl outputs). Hermiticity and trace are still
  /// verified since those checks are O(dim^2).
  static DensityMatrix trusted(Matrix entries);

  int dim() const { return static_cast<int>(entries_.rows()); }
  const Matrix& entries() const { return entries_; }

  /// Frobenius purity tr(rho^2); equals 1 exactly on pure states.
  double purity() const { return entries_.squaredNorm(); }

 private:
  struct Trusted {};
  DensityMatrix(Matrix entries, Trusted);
  Matrix entries_;
};

/// Unit-norm state vector.
class PureState {
 public:
  explicit PureState(Vector amplitudes);
  int dim() const { return static_cast<int>(amplitudes_.size()); }
  const Vector& amplitudes() const { return amplitudes_; }
  DensityMatrix to_density() const;

  static PureState basis_state(int dim, int k);

 private:
  Vector amplitudes_;
};

/// Hermitian matrix with an optional unit label (energies for Hamiltonians).
class HermitianObservable {
 public:
  explicit HermitianObservable(Matrix entries, std::string units = "");
  int dim() const { return static_cast<int>(entries_.rows()); }
  const Matrix& entries() const { return entries_; }
  const std::string& units() const { return units_; }

 private:
  Matrix entries_;
  std::string units_;
};

/// Completely positive trace-preserving map stored canonically as a
/// superoperator on column-stacked operators, with optional Kraus form.
class QuantumChannel {
 public:
  static QuantumChannel from_superoperator(Matrix superoperator, int dim_in,
                                           int dim_out);
  static QuantumChannel from_kraus(std::vector<Matrix> kraus, int dim_in,
                                   int dim_out);
  static QuantumChannel identity(int dim);
  static QuantumChannel unitary(const Matrix& u);

  int dim_in() const { return dim_in_; }
  int dim_out() const { return dim_out_; }
  const Matrix& superoperator() const { return superoperator_; }
  const std::optional<std::vector<Matrix>>& kraus() const { return kraus_; }

  /// Linear action on an arbitrary operator (no state validation).
  Matrix apply_raw(const Matrix& op) const;

  /// this after `inner`: rho -> this(inner(rho)).
  QuantumChannel compose(const QuantumChannel& inner) const;

  /// Choi matrix sum_ij |i><j| (x) Channel(|i><j|).
  Matrix choi() const;

 private:
  QuantumChannel(Matrix superoperator, int dim_in, int dim_out,
                 std::optional<std::vector<Matrix>> kraus);
  void validate() const;

  int dim_in_, dim_out_;
  Matrix superoperator_;
  std::optional<std::vector<Matrix>> kraus_;
};

/// Measurement: PSD elements summing to the identity (both within 1e-9).
class Povm {
 public:
  Povm(int dim, std::vector<Matrix> elements);
  int dim() const { return dim_; }
  const std::vector<Matrix>& elements() const { return elements_; }

 private:
  int dim_;
  std::vector<Matrix> elements_;
};

// Kronecker products. The first factor owns the most significant index:
// (A (x) B)[i*dB + k, j*dB + l] = A[i,j] * B[k,l].
Matrix tensor_product(const Matrix& a, const Matrix& b);
Vector tensor_product(const Vector& a, const Vector& b);
Matrix tensor_power(const Matrix& a, int n);
Vector tensor_power(const Vector& a, int n);
DensityMatrix tensor_product(const DensityMatrix& a, const DensityMatrix& b);
DensityMatrix tensor_power(const DensityMatrix& a, int n);
PureState tensor_product(const PureState& a, const PureState& b);
PureState tensor_power(const PureState& a, int n);

/// Reduced operator on the kept factors (in their original order) of a
/// composite space with the given factor dimensions.
Matrix partial_trace(const Matrix& op, const std::vector<int>& dims,
                     const std::vector<int>& keep);
DensityMatrix partial_trace(const DensityMatrix& state,
                            const std::vector<int>& dims,
                            const std::vector<int>& keep);

struct EigenSystem {
  RealVector values;  // ascending
  Matrix vectors;     // unitary, columns are eigenvectors
};

/// Eigendecomposition of a Hermitian matrix; rejects non-Hermitian input.
EigenSystem hermitian_eig(const Matrix& a);
EigenSystem hermitian_eig(const HermitianObservable& a);

/// Applies a scalar function to the spectrum of a PSD matrix, mapping
/// eigenvalues below 1e-12 (relative to the largest) to zero. Rejects input
/// that is not PSD within 1e-9 and functions that return non-finite values
/// on a retained eigenvalue.
Matrix matrix_fn_on_support(const Matrix& a,
                            const std::function<double(double)>& fn);
Matrix log2_on_support(const Matrix& a);
Matrix inv_sqrt_on_support(const Matrix& a);
Matrix inv_quartic_root_on_support(const Matrix& a);

/// Projector onto the support (eigenvalues above the relative cutoff).
Matrix support_projector(const Matrix& a);

DensityMatrix apply_channel(const QuantumChannel& channel,
                            const DensityMatrix& state);

struct ConstraintCheck {
  bool satisfied;
  double residual_enc_after;   // max entry of Enc∘Rdm − Rdm
  double residual_enc_before;  // max entry of Rdm∘Enc − Rdm
};

/// Tests whether `enc` is an encoding into the resources destroyed by `rdm`:
/// Enc∘Rdm = Rdm and Rdm∘Enc = Rdm, both within 1e-8 in max-entry norm on
/// superoperators. Rejects a non-idempotent `rdm`.
ConstraintCheck verify_encoding_constraint(const QuantumChannel& enc,
                                           const QuantumChannel& rdm);

// Column-stacking vectorisation helpers shared by channel code.
Vector vectorize(const Matrix& m);
Matrix unvectorize(const Vector& v, int rows, int cols);

}  // namespace qres::qcore
