// SPDX-License-Identifier: Apache-2.0

#include "qres/qcore.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <set>
#include <sstream>

namespace qres::qcore {

namespace {

void require(bool cond, const std::string& msg) {
  if (!cond) throw DomainError(msg);
}

double min_eigenvalue(const Matrix& m) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(m,
                                               Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

}  // namespace

DensityMatrix::DensityMatrix(Matrix entries) {
  require(entries.rows() == entries.cols() && entries.rows() > 0,
          "density matrix must be square and non-empty");
  require(is_hermitian(entries, kHermitianTol),
          "density matrix is not Hermitian within 1e-10");
  require(std::abs(entries.trace() - Complex(1.0, 0.0)) <= kTraceTol,
          "density matrix trace differs from 1 by more than 1e-10");
  require(min_eigenvalue(entries) >= -kEigFloor,
          "density matrix has an eigenvalue below -1e-10");
  entries_ = std::move(entries);
}

DensityMatrix::DensityMatrix(Matrix entries, Trusted) {
  require(entries.rows() == entries.cols() && entries.rows() > 0,
          "density matrix must be square and non-empty");
  require(is_hermitian(entries, 1e-9),
          "trusted density matrix is not Hermitian");
  entries_ = std::move(entries);
}

DensityMatrix DensityMatrix::trusted(Matrix entries) {
  return DensityMatrix(std::move(entries), Trusted{});
}

PureState::PureState(Vector amplitudes) {
  require(amplitudes.size() > 0, "pure state must be non-empty");
  require(std::abs(amplitudes.norm() - 1.0) <= kTraceTol,
          "pure state norm differs from 1 by more than 1e-10");
  amplitudes_ = std::move(amplitudes);
}

DensityMatrix PureState::to_density() const {
  return DensityMatrix::trusted(amplitudes_ * amplitudes_.adjoint());
}

PureState PureState::basis_state(int dim, int k) {
  require(dim > 0 && k >= 0 && k < dim, "basis state index out of range");
  Vector v = Vector::Zero(dim);
  v[k] = 1.0;
  return PureState(std::move(v));
}

HermitianObservable::HermitianObservable(Matrix entries, std::string units)
    : units_(std::move(units)) {
  require(entries.rows() == entries.cols() && entries.rows() > 0,
          "observable must be square and non-empty");
  require(is_hermitian(entries, kHermitianTol),
          "observable is not Hermitian within 1e-10");
  entries_ = std::move(entries);
}

Vector vectorize(const Matrix& m) {
  return Eigen::Map<const Vector>(m.data(), m.size());
}

Matrix unvectorize(const Vector& v, int rows, int cols) {
  return Eigen::Map<const Matrix>(v.data(), rows, cols);
}

QuantumChannel::QuantumChannel(Matrix superoperator, int dim_in, int dim_out,
                               std::optional<std::vector<Matrix>> kraus)
    : dim_in_(dim_in),
      dim_out_(dim_out),
      superoperator_(std::move(superoperator)),
      kraus_(std::move(kraus)) {
  validate();
}

QuantumChannel QuantumChannel::from_superoperator(Matrix superoperator,
                                                  int dim_in, int dim_out) {
  return QuantumChannel(std::move(superoperator), dim_in, dim_out,
                        std::nullopt);
}

QuantumChannel QuantumChannel::from_kraus(std::vector<Matrix> kraus,
                                          int dim_in, int dim_out) {
  require(!kraus.empty(), "channel needs at least one Kraus operator");
  Matrix s = Matrix::Zero(static_cast<Eigen::Index>(dim_out) * dim_out,
                          static_cast<Eigen::Index>(dim_in) * dim_in);
  for (const Matrix& k : kraus) {
    require(k.rows() == dim_out && k.cols() == dim_in,
            "Kraus operator has wrong shape");
    s += tensor_product(k.conjugate(), k);
  }
  return QuantumChannel(std::move(s), dim_in, dim_out, std::move(kraus));
}

QuantumChannel QuantumChannel::identity(int dim) {
  const Eigen::Index d2 = static_cast<Eigen::Index>(dim) * dim;
  return QuantumChannel(Matrix::Identity(d2, d2), dim, dim,
                        std::vector<Matrix>{Matrix::Identity(dim, dim)});
}

QuantumChannel QuantumChannel::unitary(const Matrix& u) {
  const int d = static_cast<int>(u.rows());
  require(u.cols() == d, "unitary must be square");
  require(max_abs(u * u.adjoint() - Matrix::Identity(d, d)) <= kChannelTol,
          "matrix is not unitary within 1e-9");
  return from_kraus({u}, d, d);
}

void QuantumChannel::validate() const {
  require(dim_in_ > 0 && dim_out_ > 0, "channel dimensions must be positive");
  require(dim_in_ <= kMaxSuperoperatorDim && dim_out_ <= kMaxSuperoperatorDim,
          "channel dimension exceeds the dense superoperator limit");
  require(superoperator_.rows() ==
                  static_cast<Eigen::Index>(dim_out_) * dim_out_ &&
              superoperator_.cols() ==
                  static_cast<Eigen::Index>(dim_in_) * dim_in_,
          "superoperator has wrong shape");
  // Trace preservation: the adjoint map must send the identity to identity.
  const Matrix id_out = Matrix::Identity(dim_out_, dim_out_);
  const Matrix back =
      unvectorize(superoperator_.adjoint() * vectorize(id_out), dim_in_,
                  dim_in_);
  require(max_abs(back - Matrix::Identity(dim_in_, dim_in_)) <= kChannelTol,
          "channel is not trace-preserving within 1e-9");
  // Complete positivity via the Choi matrix.
  require(min_eigenvalue(choi()) >= -kChannelTol,
          "channel is not completely positive within 1e-9");
  if (kraus_) {
    Matrix acc = Matrix::Zero(dim_in_, dim_in_);
    Matrix s = Matrix::Zero(superoperator_.rows(), superoperator_.cols());
    for (const Matrix& k : *kraus_) {
      acc += k.adjoint() * k;
      s += tensor_product(k.conjugate(), k);
    }
    require(max_abs(acc - Matrix::Identity(dim_in_, dim_in_)) <= kChannelTol,
            "Kraus operators do not resolve the identity within 1e-9");
    require(max_abs(s - superoperator_) <= kChannelTol,
            "Kraus form is inconsistent with the superoperator");
  }
}

Matrix QuantumChannel::apply_raw(const Matrix& op) const {
  require(op.rows() == dim_in_ && op.cols() == dim_in_,
          "operator dimension does not match the channel input");
  return unvectorize(superoperator_ * vectorize(op), dim_out_, dim_out_);
}

QuantumChannel QuantumChannel::compose(const QuantumChannel& inner) const {
  require(inner.dim_out_ == dim_in_, "channel composition dimension mismatch");
  return QuantumChannel(superoperator_ * inner.superoperator_, inner.dim_in_,
                        dim_out_, std::nullopt);
}

Matrix QuantumChannel::choi() const {
  const Eigen::Index d_in = dim_in_;
  const Eigen::Index d_out = dim_out_;
  Matrix c = Matrix::Zero(d_in * d_out, d_in * d_out);
  for (Eigen::Index i = 0; i < d_in; ++i) {
    for (Eigen::Index j = 0; j < d_in; ++j) {
      // Channel(|i><j|): column j*d_in + i of the superoperator, unstacked.
      const auto col = superoperator_.col(j * d_in + i);
      for (Eigen::Index k = 0; k < d_out; ++k) {
        for (Eigen::Index l = 0; l < d_out; ++l) {
          c(i * d_out + k, j * d_out + l) = col(l * d_out + k);
        }
      }
    }
  }
  return c;
}

Povm::Povm(int dim, std::vector<Matrix> elements) : dim_(dim) {
  require(dim > 0, "POVM dimension must be positive");
  require(!elements.empty(), "POVM needs at least one element");
  Matrix sum = Matrix::Zero(dim, dim);
  for (const Matrix& e : elements) {
    require(e.rows() == dim && e.cols() == dim, "POVM element has wrong shape");
    require(is_hermitian(e, kChannelTol), "POVM element is not Hermitian");
    require(min_eigenvalue(e) >= -kChannelTol,
            "POVM element is not PSD within 1e-9");
    sum += e;
  }
  require(max_abs(sum - Matrix::Identity(dim, dim)) <= kChannelTol,
          "POVM elements do not sum to the identity within 1e-9");
  elements_ = std::move(elements);
}

Matrix tensor_product(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

Vector tensor_product(const Vector& a, const Vector& b) {
  Vector out(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    out.segment(i * b.size(), b.size()) = a[i] * b;
  }
  return out;
}

Matrix tensor_power(const Matrix& a, int n) {
  require(n >= 1, "tensor power requires n >= 1");
  Matrix out = a;
  for (int i = 1; i < n; ++i) out = tensor_product(out, a);
  return out;
}

Vector tensor_power(const Vector& a, int n) {
  require(n >= 1, "tensor power requires n >= 1");
  Vector out = a;
  for (int i = 1; i < n; ++i) out = tensor_product(out, a);
  return out;
}

DensityMatrix tensor_product(const DensityMatrix& a, const DensityMatrix& b) {
  return DensityMatrix::trusted(tensor_product(a.entries(), b.entries()));
}

DensityMatrix tensor_power(const DensityMatrix& a, int n) {
  return DensityMatrix::trusted(tensor_power(a.entries(), n));
}

PureState tensor_product(const PureState& a, const PureState& b) {
  return PureState(tensor_product(a.amplitudes(), b.amplitudes()));
}

PureState tensor_power(const PureState& a, int n) {
  return PureState(tensor_power(a.amplitudes(), n));
}

Matrix partial_trace(const Matrix& op, const std::vector<int>& dims,
                     const std::vector<int>& keep) {
  require(op.rows() == op.cols(), "partial trace input must be square");
  Eigen::Index total = 1;
  for (int d : dims) {
    require(d >= 1, "factor dimensions must be positive");
    total *= d;
  }
  require(total == op.rows(),
          "product of factor dimensions does not match the operator");
  const std::set<int> keep_set(keep.begin(), keep.end());
  require(keep_set.size() == keep.size(), "duplicate kept factor");
  for (int k : keep_set) {
    require(k >= 0 && k < static_cast<int>(dims.size()),
            "kept factor index out of range");
  }

  Eigen::Index dim_keep = 1, dim_trace = 1;
  for (size_t f = 0; f < dims.size(); ++f) {
    (keep_set.count(static_cast<int>(f)) ? dim_keep : dim_trace) *= dims[f];
  }

  // Global basis index of (kept multi-index, traced multi-index), honouring
  // the original factor order with the first factor most significant.
  std::vector<Eigen::Index> global(
      static_cast<size_t>(dim_keep) * static_cast<size_t>(dim_trace));
  for (Eigen::Index k = 0; k < dim_keep; ++k) {
    for (Eigen::Index t = 0; t < dim_trace; ++t) {
      Eigen::Index g = 0, kk = k, tt = t;
      Eigen::Index krem = dim_keep, trem = dim_trace;
      for (size_t f = 0; f < dims.size(); ++f) {
        Eigen::Index digit;
        if (keep_set.count(static_cast<int>(f))) {
          krem /= dims[f];
          digit = kk / krem;
          kk %= krem;
        } else {
          trem /= dims[f];
          digit = tt / trem;
          tt %= trem;
        }
        g = g * dims[f] + digit;
      }
      global[static_cast<size_t>(k) * dim_trace + t] = g;
    }
  }

  Matrix out = Matrix::Zero(dim_keep, dim_keep);
  for (Eigen::Index r = 0; r < dim_keep; ++r) {
    for (Eigen::Index c = 0; c < dim_keep; ++c) {
      Complex acc = 0.0;
      for (Eigen::Index t = 0; t < dim_trace; ++t) {
        acc += op(global[static_cast<size_t>(r) * dim_trace + t],
                  global[static_cast<size_t>(c) * dim_trace + t]);
      }
      out(r, c) = acc;
    }
  }
  return out;
}

DensityMatrix partial_trace(const DensityMatrix& state,
                            const std::vector<int>& dims,
                            const std::vector<int>& keep) {
  return DensityMatrix::trusted(partial_trace(state.entries(), dims, keep));
}

EigenSystem hermitian_eig(const Matrix& a) {
  if (!is_hermitian(a, 1e-9)) {
    throw DomainError("hermitian_eig: input is not Hermitian");
  }
  Eigen::SelfAdjointEigenSolver<Matrix> solver(a);
  if (solver.info() == Eigen::Success) {
    return {solver.eigenvalues(), solver.eigenvectors()};
  }
  // The QL iteration occasionally stalls on matrices with exactly clustered
  // eigenvalues. A tiny diagonal shift leaves the eigenvectors unchanged
  // and is subtracted from the returned eigenvalues.
  const Matrix symmetrized = 0.5 * (a + a.adjoint().eval());
  const double scale = std::max(max_abs(symmetrized), 1e-300);
  for (double relative : {1e-14, 1e-13, 1e-12}) {
    const double shift = relative * scale;
    Eigen::SelfAdjointEigenSolver<Matrix> retry(
        symmetrized + shift * Matrix::Identity(a.rows(), a.cols()));
    if (retry.info() == Eigen::Success) {
      return {retry.eigenvalues().array() - shift, retry.eigenvectors()};
    }
  }
  throw DomainError("hermitian_eig: eigensolver failed to converge");
}

EigenSystem hermitian_eig(const HermitianObservable& a) {
  return hermitian_eig(a.entries());
}

Matrix matrix_fn_on_support(const Matrix& a,
                            const std::function<double(double)>& fn) {
  const EigenSystem es = hermitian_eig(a);
  const double top = es.values.cwiseAbs().maxCoeff();
  if (es.values.minCoeff() < -1e-9 * std::max(1.0, top)) {
    throw DomainError("matrix_fn_on_support: input is not PSD");
  }
  const double cutoff = kSupportCutoff * std::max(top, 0.0);
  RealVector mapped(es.values.size());
  for (Eigen::Index i = 0; i < es.values.size(); ++i) {
    if (es.values[i] <= cutoff) {
      mapped[i] = 0.0;
    } else {
      mapped[i] = fn(es.values[i]);
      if (!std::isfinite(mapped[i])) {
        std::ostringstream msg;
        msg << "matrix_fn_on_support: function undefined on retained "
            << "eigenvalue " << es.values[i];
        throw DomainError(msg.str());
      }
    }
  }
  return es.vectors * mapped.cast<Complex>().asDiagonal() *
         es.vectors.adjoint();
}

Matrix log2_on_support(const Matrix& a) {
  return matrix_fn_on_support(a, [](double x) { return std::log2(x); });
}

Matrix inv_sqrt_on_support(const Matrix& a) {
  return matrix_fn_on_support(a, [](double x) { return 1.0 / std::sqrt(x); });
}

Matrix inv_quartic_root_on_support(const Matrix& a) {
  return matrix_fn_on_support(
      a, [](double x) { return 1.0 / std::pow(x, 0.25); });
}

Matrix support_projector(const Matrix& a) {
  const EigenSystem es = hermitian_eig(a);
  const double top = es.values.cwiseAbs().maxCoeff();
  const double cutoff = kSupportCutoff * std::max(top, 0.0);
  Matrix p = Matrix::Zero(a.rows(), a.cols());
  for (Eigen::Index i = 0; i < es.values.size(); ++i) {
    if (es.values[i] > cutoff) {
      p += es.vectors.col(i) * es.vectors.col(i).adjoint();
    }
  }
  return p;
}

DensityMatrix apply_channel(const QuantumChannel& channel,
                            const DensityMatrix& state) {
  if (channel.dim_in() != state.dim()) {
    throw DomainError("apply_channel: dimension mismatch");
  }
  return DensityMatrix(channel.apply_raw(state.entries()));
}

ConstraintCheck verify_encoding_constraint(const QuantumChannel& enc,
                                           const QuantumChannel& rdm) {
  require(enc.dim_in() == enc.dim_out() && rdm.dim_in() == rdm.dim_out() &&
              enc.dim_in() == rdm.dim_in(),
          "verify_encoding_constraint: dimension mismatch");
  const Matrix& d = rdm.superoperator();
  require(max_abs(d * d - d) <= kAlgebraTol,
          "resource destroying map is not idempotent within 1e-8");
  const Matrix& e = enc.superoperator();
  ConstraintCheck out{};
  out.residual_enc_after = max_abs(e * d - d);
  out.residual_enc_before = max_abs(d * e - d);
  out.satisfied = out.residual_enc_after < kAlgebraTol &&
                  out.residual_enc_before < kAlgebraTol;
  return out;
}

}  // namespace qres::qcore
