// SPDX-License-Identifier: Apache-2.0

#include "qres/twirl.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <iostream>
#include <memory>
#include <numeric>
#include <sstream>

namespace qres::twirl {

using qcore::Complex;
using qcore::DomainError;
using qcore::Vector;

namespace {

void require(bool cond, const std::string& msg) {
  if (!cond) throw DomainError(msg);
}

bool matches_up_to_phase(const Matrix& a, const Matrix& b, double tol) {
  // |tr(A^dag B)| / d = 1 exactly when A = e^{i phi} B for unitaries.
  const double overlap = std::abs((a.adjoint() * b).trace());
  return std::abs(overlap / a.rows() - 1.0) <= tol;
}

// All permutations of {0..n-1} as index maps m with P e_J = e_{m(J)} on the
// tensor basis of n d-dimensional factors, first factor most significant.
std::vector<std::vector<int>> permutation_index_maps(int n, int d) {
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  Eigen::Index dim = 1;
  for (int i = 0; i < n; ++i) dim *= d;

  std::vector<std::vector<int>> maps;
  do {
    // perm[k] = pi(k); the permuted word has digit pi^{-1}(k) at slot k.
    std::vector<int> inv(n);
    for (int k = 0; k < n; ++k) inv[perm[k]] = k;
    std::vector<int> map(dim);
    std::vector<int> digits(n);
    for (Eigen::Index j = 0; j < dim; ++j) {
      Eigen::Index rest = j;
      for (int k = n - 1; k >= 0; --k) {
        digits[k] = static_cast<int>(rest % d);
        rest /= d;
      }
      Eigen::Index out = 0;
      for (int k = 0; k < n; ++k) out = out * d + digits[inv[k]];
      map[j] = static_cast<int>(out);
    }
    maps.push_back(std::move(map));
  } while (std::next_permutation(perm.begin(), perm.end()));
  return maps;
}

Matrix conjugate_by_index_map(const Matrix& x, const std::vector<int>& map) {
  Matrix out(x.rows(), x.cols());
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    for (Eigen::Index j = 0; j < x.cols(); ++j) {
      out(map[i], map[j]) = x(i, j);
    }
  }
  return out;
}

}  // namespace

FiniteUnitaryGroup::FiniteUnitaryGroup(int dim, std::vector<Matrix> elements,
                                       std::vector<std::string> labels)
    : dim_(dim), labels_(std::move(labels)) {
  require(dim > 0, "group dimension must be positive");
  require(!elements.empty(), "group needs at least one element");
  require(static_cast<int>(elements.size()) <= kMaxGroupOrder,
          "group order exceeds the guard of 4096");
  require(labels_.empty() || labels_.size() == elements.size(),
          "label count does not match element count");
  const Matrix id = Matrix::Identity(dim, dim);
  bool has_identity = false;
  for (const Matrix& u : elements) {
    require(u.rows() == dim && u.cols() == dim, "group element has wrong shape");
    require(qcore::max_abs(u * u.adjoint() - id) <= qcore::kChannelTol,
            "group element is not unitary within 1e-9");
    has_identity = has_identity || matches_up_to_phase(u, id, qcore::kAlgebraTol);
  }
  require(has_identity, "group does not contain the identity");

  if (static_cast<int>(elements.size()) <= kClosureCheckLimit) {
    for (const Matrix& a : elements) {
      for (const Matrix& b : elements) {
        const Matrix prod = a * b;
        bool found = false;
        for (const Matrix& c : elements) {
          if (matches_up_to_phase(c, prod, qcore::kAlgebraTol)) {
            found = true;
            break;
          }
        }
        require(found, "group is not closed under multiplication "
                       "(up to global phase, 1e-8)");
      }
    }
  } else {
    std::cerr << "qres: skipping closure check for group of order "
              << elements.size() << " (limit " << kClosureCheckLimit << ")\n";
  }
  elements_ = std::move(elements);
}

std::string to_string(TwirlKind kind) {
  switch (kind) {
    case TwirlKind::dephasing: return "dephasing";
    case TwirlKind::depolarizing: return "depolarizing";
    case TwirlKind::local: return "local";
    case TwirlKind::finite_group: return "finite_group";
    case TwirlKind::permutation: return "permutation";
    case TwirlKind::collective: return "collective";
    case TwirlKind::custom: return "custom";
  }
  return "custom";
}

TwirlChannel::TwirlChannel(int dim, TwirlKind kind, std::string tag,
                           std::function<Matrix(const Matrix&)> action,
                           std::optional<Matrix> superoperator_hint)
    : dim_(dim), kind_(kind), tag_(std::move(tag)), action_(std::move(action)) {
  require(dim_ > 0, "twirl dimension must be positive");
  if (dim_ <= qcore::kMaxSuperoperatorDim) {
    const Eigen::Index d = dim_;
    Matrix super;
    if (superoperator_hint) {
      super = std::move(*superoperator_hint);
      require(super.rows() == d * d && super.cols() == d * d,
              "superoperator hint has wrong shape");
    } else {
      super.resize(d * d, d * d);
      Matrix unit = Matrix::Zero(d, d);
      for (Eigen::Index j = 0; j < d; ++j) {
        for (Eigen::Index i = 0; i < d; ++i) {
          unit(i, j) = 1.0;
          super.col(j * d + i) = qcore::vectorize(action_(unit));
          unit(i, j) = 0.0;
        }
      }
    }
    const Matrix& s = super;
    require(qcore::max_abs(s * s - s) <= qcore::kAlgebraTol,
            "twirl channel is not idempotent within 1e-8");
    require(qcore::max_abs(s - s.adjoint()) <= qcore::kAlgebraTol,
            "twirl channel is not self-adjoint within 1e-8");
    dense_ = qcore::QuantumChannel::from_superoperator(std::move(super), dim_,
                                                       dim_);
  }
}

TwirlChannel TwirlChannel::from_channel(qcore::QuantumChannel channel,
                                        TwirlKind kind, std::string tag) {
  require(channel.dim_in() == channel.dim_out(),
          "a twirl must preserve the dimension");
  const Matrix& s = channel.superoperator();
  require(qcore::max_abs(s * s - s) <= qcore::kAlgebraTol,
          "twirl channel is not idempotent within 1e-8");
  require(qcore::max_abs(s - s.adjoint()) <= qcore::kAlgebraTol,
          "twirl channel is not self-adjoint within 1e-8");
  TwirlChannel out(channel.dim_in(), kind, std::move(tag),
                   [s](const Matrix& x) {
                     return qcore::unvectorize(s * qcore::vectorize(x),
                                               static_cast<int>(x.rows()),
                                               static_cast<int>(x.cols()));
                   });
  out.dense_ = std::move(channel);
  return out;
}

DensityMatrix TwirlChannel::apply(const DensityMatrix& rho) const {
  require(rho.dim() == dim_, "twirl dimension mismatch");
  Matrix out = action_(rho.entries());
  out = 0.5 * (out + out.adjoint().eval());
  return DensityMatrix::trusted(std::move(out));
}

Matrix TwirlChannel::apply_raw(const Matrix& op) const {
  require(op.rows() == dim_ && op.cols() == dim_, "twirl dimension mismatch");
  return action_(op);
}

const qcore::QuantumChannel& TwirlChannel::channel() const {
  if (!dense_) {
    throw DomainError("no dense superoperator at dimension " +
                      std::to_string(dim_) + " (limit " +
                      std::to_string(qcore::kMaxSuperoperatorDim) + ")");
  }
  return *dense_;
}

FiniteUnitaryGroup z_group(int d) {
  require(d >= 1, "z_group requires d >= 1");
  std::vector<Matrix> elements;
  std::vector<std::string> labels;
  for (int j = 0; j < d; ++j) {
    Matrix z = Matrix::Zero(d, d);
    for (int k = 0; k < d; ++k) {
      const double angle = 2.0 * M_PI * j * k / d;
      z(k, k) = Complex(std::cos(angle), std::sin(angle));
    }
    elements.push_back(std::move(z));
    labels.push_back("Z^" + std::to_string(j));
  }
  return FiniteUnitaryGroup(d, std::move(elements), std::move(labels));
}

FiniteUnitaryGroup heisenberg_weyl_group(int d) {
  require(d >= 1, "heisenberg_weyl_group requires d >= 1");
  Matrix shift = Matrix::Zero(d, d);
  for (int k = 0; k < d; ++k) shift((k + 1) % d, k) = 1.0;
  Matrix clock = Matrix::Zero(d, d);
  for (int k = 0; k < d; ++k) {
    const double angle = 2.0 * M_PI * k / d;
    clock(k, k) = Complex(std::cos(angle), std::sin(angle));
  }
  std::vector<Matrix> elements;
  std::vector<std::string> labels;
  Matrix xa = Matrix::Identity(d, d);
  for (int a = 0; a < d; ++a) {
    Matrix u = xa;
    for (int b = 0; b < d; ++b) {
      elements.push_back(u);
      labels.push_back("X^" + std::to_string(a) + "Z^" + std::to_string(b));
      u = u * clock;
    }
    xa = shift * xa;
  }
  return FiniteUnitaryGroup(d, std::move(elements), std::move(labels));
}

FiniteUnitaryGroup pauli_group_on_A(int dim_a, int dim_b) {
  const FiniteUnitaryGroup base = heisenberg_weyl_group(dim_a);
  const Matrix id_b = Matrix::Identity(dim_b, dim_b);
  std::vector<Matrix> elements;
  std::vector<std::string> labels;
  for (int i = 0; i < base.order(); ++i) {
    elements.push_back(qcore::tensor_product(base.element(i), id_b));
    labels.push_back(base.labels()[i] + " (x) 1");
  }
  return FiniteUnitaryGroup(dim_a * dim_b, std::move(elements),
                            std::move(labels));
}

FiniteUnitaryGroup symmetric_group_unitaries(int n, int d) {
  require(n >= 1 && n <= 5, "symmetric group guard: n <= 5");
  Eigen::Index dim = 1;
  for (int i = 0; i < n; ++i) dim *= d;
  require(dim <= 256, "symmetric group guard: d^n <= 256");
  std::vector<Matrix> elements;
  for (const auto& map : permutation_index_maps(n, d)) {
    Matrix p = Matrix::Zero(dim, dim);
    for (Eigen::Index j = 0; j < dim; ++j) p(map[j], j) = 1.0;
    elements.push_back(std::move(p));
  }
  return FiniteUnitaryGroup(static_cast<int>(dim), std::move(elements));
}

FiniteUnitaryGroup tensor_product(const FiniteUnitaryGroup& a,
                                  const FiniteUnitaryGroup& b) {
  require(static_cast<long long>(a.order()) * b.order() <= kMaxGroupOrder,
          "tensor product group order exceeds the guard of 4096");
  std::vector<Matrix> elements;
  for (const Matrix& ua : a.elements()) {
    for (const Matrix& ub : b.elements()) {
      elements.push_back(qcore::tensor_product(ua, ub));
    }
  }
  return FiniteUnitaryGroup(a.dim() * b.dim(), std::move(elements));
}

FiniteUnitaryGroup tensor_power(const FiniteUnitaryGroup& g, int n) {
  require(n >= 1, "tensor power requires n >= 1");
  FiniteUnitaryGroup out = g;
  for (int i = 1; i < n; ++i) out = tensor_product(out, g);
  return out;
}

TwirlChannel finite_group_twirl(const FiniteUnitaryGroup& group) {
  auto elements = std::make_shared<std::vector<Matrix>>(group.elements());
  const double weight = 1.0 / group.order();
  std::optional<Matrix> hint;
  if (group.dim() <= qcore::kMaxSuperoperatorDim) {
    const Eigen::Index d2 = static_cast<Eigen::Index>(group.dim()) * group.dim();
    Matrix super = Matrix::Zero(d2, d2);
    for (const Matrix& u : *elements) {
      super += qcore::tensor_product(u.conjugate(), u);
    }
    hint = Matrix(weight * super);
  }
  return TwirlChannel(
      group.dim(), TwirlKind::finite_group,
      "finite_group(|G|=" + std::to_string(group.order()) + ")",
      [elements, weight](const Matrix& x) {
        Matrix acc = Matrix::Zero(x.rows(), x.cols());
        for (const Matrix& u : *elements) acc += u * x * u.adjoint();
        return Matrix(weight * acc);
      },
      std::move(hint));
}

TwirlChannel dephasing_channel(int dim) {
  require(dim >= 1, "dephasing_channel requires dim >= 1");
  return TwirlChannel(dim, TwirlKind::dephasing,
                      "dephasing(" + std::to_string(dim) + ")",
                      [](const Matrix& x) {
                        return Matrix(x.diagonal().asDiagonal());
                      });
}

TwirlChannel depolarizing_channel(int dim) {
  require(dim >= 1, "depolarizing_channel requires dim >= 1");
  return TwirlChannel(dim, TwirlKind::depolarizing,
                      "depolarizing(" + std::to_string(dim) + ")",
                      [dim](const Matrix& x) {
                        return Matrix(x.trace() / static_cast<double>(dim) *
                                      Matrix::Identity(dim, dim));
                      });
}

TwirlChannel local_unital_twirl(int dim_a, int dim_b) {
  require(dim_a >= 1 && dim_b >= 1, "local twirl dimensions must be positive");
  const int dim = dim_a * dim_b;
  std::ostringstream tag;
  tag << "local(" << dim_a << "," << dim_b << ")";
  return TwirlChannel(dim, TwirlKind::local, tag.str(),
                      [dim_a, dim_b](const Matrix& x) {
                        const Matrix reduced =
                            qcore::partial_trace(x, {dim_a, dim_b}, {1});
                        const Matrix unif =
                            Matrix::Identity(dim_a, dim_a) / dim_a;
                        return qcore::tensor_product(unif, reduced);
                      });
}

TwirlChannel permutation_twirl(int n, int d) {
  require(n >= 1 && n <= 5, "permutation twirl guard: n <= 5");
  Eigen::Index dim = 1;
  for (int i = 0; i < n; ++i) dim *= d;
  require(dim <= 256, "permutation twirl guard: d^n <= 256");
  auto maps = std::make_shared<std::vector<std::vector<int>>>(
      permutation_index_maps(n, d));
  const double weight = 1.0 / maps->size();
  std::ostringstream tag;
  tag << "permutation(" << n << "," << d << ")";
  return TwirlChannel(static_cast<int>(dim), TwirlKind::permutation, tag.str(),
                      [maps, weight](const Matrix& x) {
                        Matrix acc = Matrix::Zero(x.rows(), x.cols());
                        for (const auto& map : *maps) {
                          acc += conjugate_by_index_map(x, map);
                        }
                        return Matrix(weight * acc);
                      });
}

Matrix symmetric_projector(int d) {
  require(d >= 1, "symmetric_projector requires d >= 1");
  const Eigen::Index dim = static_cast<Eigen::Index>(d) * d;
  Matrix p = Matrix::Zero(dim, dim);
  for (int k = 0; k < d; ++k) {
    const Eigen::Index kk = static_cast<Eigen::Index>(k) * d + k;
    p(kk, kk) += 1.0;
  }
  for (int k = 0; k < d; ++k) {
    for (int l = k + 1; l < d; ++l) {
      Vector v = Vector::Zero(dim);
      v[static_cast<Eigen::Index>(k) * d + l] = 1.0 / std::sqrt(2.0);
      v[static_cast<Eigen::Index>(l) * d + k] = 1.0 / std::sqrt(2.0);
      p += v * v.adjoint();
    }
  }
  return p;
}

DensityMatrix collective_twirl_two_party(const DensityMatrix& rho, int d) {
  require(d >= 2, "two-party collective twirl requires d >= 2");
  require(rho.dim() == d * d, "state dimension must equal d^2");
  const Matrix pi_s = symmetric_projector(d);
  const double d_s = d * (d + 1) / 2.0;
  const double p_s = (rho.entries() * pi_s).trace().real();
  const Matrix pi_a = Matrix::Identity(d * d, d * d) - pi_s;
  Matrix out = (p_s / d_s) * pi_s + ((1.0 - p_s) / (d * d - d_s)) * pi_a;
  return DensityMatrix::trusted(std::move(out));
}

PureState optimal_bipartite_state(int d) {
  require(d >= 2, "optimal_bipartite_state requires d >= 2");
  const Eigen::Index dim = static_cast<Eigen::Index>(d) * d;
  Vector v = Vector::Zero(dim);
  const double w_s = std::sqrt((d + 1.0) / (2.0 * d));
  const double w_a = std::sqrt((d - 1.0) / (2.0 * d));
  // Symmetric representative |00>; antisymmetric (|01>-|10>)/sqrt(2).
  v[0] += w_s;
  v[1] += w_a / std::sqrt(2.0);
  v[d] -= w_a / std::sqrt(2.0);
  return PureState(std::move(v));
}

PureState permutation_coding_state(int n, int d) {
  require(n >= 1 && d >= 1, "permutation_coding_state: bad parameters");
  std::vector<int> word(n);
  if (d >= n) {
    std::iota(word.begin(), word.end(), 0);
  } else {
    const int whole = n / d;
    const int rest = n % d;
    int pos = 0;
    for (int block = 0; block < whole; ++block) {
      for (int k = 0; k < d; ++k) word[pos++] = k;
    }
    for (int k = 0; k < rest; ++k) word[pos++] = k;
  }
  Eigen::Index dim = 1, index = 0;
  for (int i = 0; i < n; ++i) {
    dim *= d;
    index = index * d + word[i];
  }
  Vector v = Vector::Zero(dim);
  v[index] = 1.0;
  return PureState(std::move(v));
}

Matrix permutation_overlap_matrix(const PureState& psi, int n, int d) {
  Eigen::Index dim = 1;
  for (int i = 0; i < n; ++i) dim *= d;
  require(psi.dim() == dim, "state dimension must equal d^n");
  const auto maps = permutation_index_maps(n, d);
  std::vector<Vector> permuted;
  permuted.reserve(maps.size());
  for (const auto& map : maps) {
    Vector v(dim);
    for (Eigen::Index j = 0; j < dim; ++j) v[map[j]] = psi.amplitudes()[j];
    permuted.push_back(std::move(v));
  }
  Matrix overlaps(maps.size(), maps.size());
  for (size_t a = 0; a < maps.size(); ++a) {
    for (size_t b = 0; b < maps.size(); ++b) {
      overlaps(a, b) = permuted[a].dot(permuted[b]);
    }
  }
  return overlaps;
}

}  // namespace qres::twirl
