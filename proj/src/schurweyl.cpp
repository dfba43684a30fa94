// SPDX-License-Identifier: Apache-2.0

#include "qres/schurweyl.hpp"

#include "qres/rng.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <numeric>

namespace qres::schurweyl {

using qcore::Complex;
using qcore::DomainError;
using qcore::EigenSystem;

namespace {

void require(bool cond, const std::string& msg) {
  if (!cond) throw DomainError(msg);
}

Eigen::Index pow_ll(int d, int n) {
  Eigen::Index out = 1;
  for (int i = 0; i < n; ++i) out *= d;
  return out;
}

void check_size_guard(int n, int d) {
  require(n >= 1 && n <= 5, "Schur-Weyl guard: n <= 5");
  require(d >= 1, "Schur-Weyl guard: d >= 1");
  require(pow_ll(d, n) <= 256, "Schur-Weyl guard: d^n <= 256");
}

std::int64_t factorial(int n) {
  std::int64_t out = 1;
  for (int i = 2; i <= n; ++i) out *= i;
  return out;
}

}  // namespace

Partition::Partition(std::vector<int> parts) : parts_(std::move(parts)) {
  n_ = 0;
  for (size_t i = 0; i < parts_.size(); ++i) {
    require(parts_[i] >= 1, "partition parts must be positive");
    require(i == 0 || parts_[i - 1] >= parts_[i],
            "partition parts must be weakly decreasing");
    n_ += parts_[i];
  }
}

std::vector<Partition> partitions(int n) {
  require(n >= 0, "partitions: n must be nonnegative");
  std::vector<Partition> out;
  std::vector<int> current;
  const std::function<void(int, int)> descend = [&](int remaining, int cap) {
    if (remaining == 0) {
      out.push_back(current.empty() ? Partition::empty()
                                    : Partition(current));
      return;
    }
    for (int next = std::min(cap, remaining); next >= 1; --next) {
      current.push_back(next);
      descend(remaining - next, next);
      current.pop_back();
    }
  };
  descend(n, n);
  return out;
}

Permutation::Permutation(std::vector<int> mapping) : mapping_(std::move(mapping)) {
  std::vector<bool> seen(mapping_.size(), false);
  for (int v : mapping_) {
    require(v >= 0 && v < static_cast<int>(mapping_.size()) && !seen[v],
            "permutation mapping is not a bijection");
    seen[v] = true;
  }
}

Permutation Permutation::identity(int n) {
  std::vector<int> m(n);
  std::iota(m.begin(), m.end(), 0);
  return Permutation(std::move(m));
}

std::vector<Permutation> Permutation::all(int n) {
  require(n >= 1 && n <= 8, "permutation enumeration guarded to n <= 8");
  std::vector<int> m(n);
  std::iota(m.begin(), m.end(), 0);
  std::vector<Permutation> out;
  do {
    out.push_back(Permutation(m));
  } while (std::next_permutation(m.begin(), m.end()));
  return out;
}

Permutation Permutation::inverse() const {
  std::vector<int> inv(mapping_.size());
  for (size_t i = 0; i < mapping_.size(); ++i) inv[mapping_[i]] = static_cast<int>(i);
  return Permutation(std::move(inv));
}

Permutation Permutation::compose(const Permutation& then) const {
  require(n() == then.n(), "permutation size mismatch");
  std::vector<int> m(mapping_.size());
  for (size_t i = 0; i < mapping_.size(); ++i) m[i] = mapping_[then.mapping_[i]];
  return Permutation(std::move(m));
}

Partition Permutation::cycle_type() const {
  std::vector<bool> seen(mapping_.size(), false);
  std::vector<int> lengths;
  for (size_t i = 0; i < mapping_.size(); ++i) {
    if (seen[i]) continue;
    int len = 0;
    size_t j = i;
    while (!seen[j]) {
      seen[j] = true;
      j = static_cast<size_t>(mapping_[j]);
      ++len;
    }
    lengths.push_back(len);
  }
  std::sort(lengths.rbegin(), lengths.rend());
  return Partition(std::move(lengths));
}

int Permutation::cycle_count() const {
  return static_cast<int>(cycle_type().parts().size());
}

std::int64_t syt_count(const Partition& lambda) {
  if (lambda.parts().empty()) return 1;
  const auto& parts = lambda.parts();
  const int rows = static_cast<int>(parts.size());
  // Column lengths (conjugate partition).
  std::vector<int> conj(parts[0], 0);
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < parts[i]; ++j) ++conj[j];
  }
  // f = n! / prod(hooks), accumulated with running gcd reduction.
  std::int64_t num = 1, den = 1;
  for (int k = 2; k <= lambda.n(); ++k) {
    num *= k;
    const std::int64_t g = std::gcd(num, den);
    num /= g;
    den /= g;
  }
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < parts[i]; ++j) {
      den *= (parts[i] - j) + (conj[j] - i) - 1;
      const std::int64_t g = std::gcd(num, den);
      num /= g;
      den /= g;
    }
  }
  require(den == 1, "hook length formula did not divide exactly");
  return num;
}

std::int64_t schur_at_ones(const Partition& lambda, int d) {
  require(d >= 1, "schur_at_ones: d must be positive");
  if (lambda.parts().empty()) return 1;
  if (static_cast<int>(lambda.parts().size()) > d) return 0;
  const auto& parts = lambda.parts();
  const int rows = static_cast<int>(parts.size());
  std::vector<int> conj(parts[0], 0);
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < parts[i]; ++j) ++conj[j];
  }
  // prod over cells of (d + j - i) / hook(i,j).
  std::int64_t num = 1, den = 1;
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < parts[i]; ++j) {
      num *= d + j - i;
      den *= (parts[i] - j) + (conj[j] - i) - 1;
      const std::int64_t g = std::gcd(num, den);
      num /= g;
      den /= g;
    }
  }
  require(den == 1, "hook content formula did not divide exactly");
  return num;
}

namespace {

// Murnaghan-Nakayama on beta-sets: removing a border strip of length t from
// lambda lifts to subtracting t from one beta number, with sign given by the
// number of beta numbers jumped over.
std::int64_t mn_character(std::vector<int> beta, std::vector<int> cycles) {
  if (cycles.empty()) return 1;
  const int t = cycles.back();
  cycles.pop_back();
  std::int64_t total = 0;
  for (size_t i = 0; i < beta.size(); ++i) {
    const int target = beta[i] - t;
    if (target < 0) continue;
    bool occupied = false;
    int jumped = 0;
    for (size_t j = 0; j < beta.size(); ++j) {
      if (j == i) continue;
      if (beta[j] == target) occupied = true;
      if (beta[j] > target && beta[j] < beta[i]) ++jumped;
    }
    if (occupied) continue;
    std::vector<int> next = beta;
    next[i] = target;
    std::sort(next.rbegin(), next.rend());
    const std::int64_t sub = mn_character(std::move(next), cycles);
    total += (jumped % 2 == 0) ? sub : -sub;
  }
  return total;
}

std::vector<int> beta_set(const Partition& lambda) {
  const auto& parts = lambda.parts();
  const int k = static_cast<int>(parts.size());
  std::vector<int> beta(k);
  for (int i = 0; i < k; ++i) beta[i] = parts[i] + (k - 1 - i);
  return beta;
}

}  // namespace

std::int64_t character(const Partition& lambda, const Partition& cycle_type) {
  require(lambda.n() == cycle_type.n(),
          "character: partition sizes must agree");
  if (lambda.n() == 0) return 1;
  std::vector<int> cycles = cycle_type.parts();
  std::sort(cycles.begin(), cycles.end());  // remove the largest strip first
  return mn_character(beta_set(lambda), std::move(cycles));
}

std::int64_t conjugacy_class_size(const Partition& cycle_type) {
  // n! / prod_k k^{m_k} m_k! with m_k the multiplicity of cycle length k.
  std::map<int, int> mult;
  for (int part : cycle_type.parts()) ++mult[part];
  std::int64_t z = 1;
  for (const auto& [len, count] : mult) {
    for (int c = 0; c < count; ++c) z *= len;
    z *= factorial(count);
  }
  return factorial(cycle_type.n()) / z;
}

std::vector<int> permutation_index_map(const Permutation& pi, int d) {
  const int n = pi.n();
  const Eigen::Index dim = pow_ll(d, n);
  const Permutation inv = pi.inverse();
  std::vector<int> map(dim);
  std::vector<int> digits(n);
  for (Eigen::Index j = 0; j < dim; ++j) {
    Eigen::Index rest = j;
    for (int k = n - 1; k >= 0; --k) {
      digits[k] = static_cast<int>(rest % d);
      rest /= d;
    }
    Eigen::Index out = 0;
    for (int k = 0; k < n; ++k) out = out * d + digits[inv(k)];
    map[j] = static_cast<int>(out);
  }
  return map;
}

Matrix permutation_operator(const Permutation& pi, int d) {
  const Eigen::Index dim = pow_ll(d, pi.n());
  const auto map = permutation_index_map(pi, d);
  Matrix p = Matrix::Zero(dim, dim);
  for (Eigen::Index j = 0; j < dim; ++j) p(map[j], j) = 1.0;
  return p;
}

Matrix young_projector(const Partition& lambda, int n, int d) {
  check_size_guard(n, d);
  require(lambda.n() == n, "young_projector: partition does not sum to n");
  const Eigen::Index dim = pow_ll(d, n);
  // Characters depend only on the cycle type; cache per class.
  std::map<std::vector<int>, std::int64_t> chi;
  Matrix acc = Matrix::Zero(dim, dim);
  for (const Permutation& pi : Permutation::all(n)) {
    const Partition type = pi.cycle_type();
    auto it = chi.find(type.parts());
    if (it == chi.end()) {
      it = chi.emplace(type.parts(), character(lambda, type)).first;
    }
    if (it->second == 0) continue;
    const double weight = static_cast<double>(it->second);
    const auto map = permutation_index_map(pi, d);
    for (Eigen::Index j = 0; j < dim; ++j) acc(map[j], j) += weight;
  }
  const double scale =
      static_cast<double>(syt_count(lambda)) / static_cast<double>(factorial(n));
  return scale * acc;
}

SchurWeylTable schur_weyl_table(int n, int d) {
  check_size_guard(n, d);
  SchurWeylTable table{n, d, {}};
  for (const Partition& lambda : partitions(n)) {
    table.records.push_back(SchurWeylRecord{lambda, syt_count(lambda),
                                            schur_at_ones(lambda, d),
                                            young_projector(lambda, n, d)});
  }
  return table;
}

twirl::TwirlChannel collective_twirl(int n, int d) {
  check_size_guard(n, d);
  const Eigen::Index dim = pow_ll(d, n);
  const auto perms = Permutation::all(n);
  const int order = static_cast<int>(perms.size());

  auto maps = std::make_shared<std::vector<std::vector<int>>>();
  maps->reserve(order);
  std::vector<std::vector<int>> inverse_maps;
  for (const Permutation& pi : perms) {
    maps->push_back(permutation_index_map(pi, d));
    inverse_maps.push_back(permutation_index_map(pi.inverse(), d));
  }

  // Hilbert-Schmidt Gram matrix W[s,p] = tr(P_s^dag P_p) = d^{#cycles(s^-1 p)}.
  Eigen::MatrixXd gram(order, order);
  for (int s = 0; s < order; ++s) {
    const Permutation s_inv = perms[s].inverse();
    for (int p = 0; p < order; ++p) {
      gram(s, p) = std::pow(static_cast<double>(d),
                            s_inv.compose(perms[p]).cycle_count());
    }
  }
  // Pseudo-inverse with a relative spectral cutoff; {P_pi} becomes linearly
  // dependent once d < n.
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gram);
  const double cutoff = 1e-10 * es.eigenvalues().cwiseAbs().maxCoeff();
  Eigen::VectorXd inv_vals(order);
  for (int i = 0; i < order; ++i) {
    inv_vals[i] =
        es.eigenvalues()[i] > cutoff ? 1.0 / es.eigenvalues()[i] : 0.0;
  }
  auto pinv = std::make_shared<Eigen::MatrixXd>(
      es.eigenvectors() * inv_vals.asDiagonal() * es.eigenvectors().transpose());
  auto inv_maps = std::make_shared<std::vector<std::vector<int>>>(
      std::move(inverse_maps));

  std::ostringstream tag;
  tag << "collective(" << n << "," << d << ")";
  return twirl::TwirlChannel(
      static_cast<int>(dim), twirl::TwirlKind::collective, tag.str(),
      [maps, inv_maps, pinv, dim, order](const Matrix& x) {
        // Overlaps t_s = tr(P_{s^-1} x) = sum_j x(j, m_{s^-1}[j]).
        Eigen::VectorXcd t(order);
        for (int s = 0; s < order; ++s) {
          Complex acc = 0.0;
          const auto& map = (*inv_maps)[s];
          for (Eigen::Index j = 0; j < dim; ++j) acc += x(j, map[j]);
          t[s] = acc;
        }
        const Eigen::VectorXcd coeff = (*pinv) * t;
        Matrix out = Matrix::Zero(dim, dim);
        for (int p = 0; p < order; ++p) {
          const auto& map = (*maps)[p];
          for (Eigen::Index j = 0; j < dim; ++j) out(map[j], j) += coeff[p];
        }
        return out;
      });
}

DensityMatrix haar_twirl_mc(const DensityMatrix& rho, int n, int d,
                            int samples, std::uint64_t seed) {
  require(samples >= 1, "haar_twirl_mc: need at least one sample");
  const Eigen::Index dim = pow_ll(d, n);
  require(rho.dim() == dim, "haar_twirl_mc: state dimension must be d^n");
  Matrix acc = Matrix::Zero(dim, dim);
  for (int i = 0; i < samples; ++i) {
    rng::Philox gen(seed, static_cast<std::uint64_t>(i));
    Matrix g(d, d);
    for (int r = 0; r < d; ++r) {
      for (int c = 0; c < d; ++c) {
        g(r, c) = Complex(gen.next_gaussian(), gen.next_gaussian());
      }
    }
    const Eigen::HouseholderQR<Matrix> qr(g);
    Matrix q = qr.householderQ();
    const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int c = 0; c < d; ++c) {
      const Complex rc = r(c, c);
      const double mag = std::abs(rc);
      q.col(c) *= (mag > 0.0) ? rc / mag : Complex(1.0, 0.0);
    }
    const Matrix u = qcore::tensor_power(Matrix(q), n);
    acc += u * rho.entries() * u.adjoint();
  }
  Matrix out = acc / static_cast<double>(samples);
  out = 0.5 * (out + out.adjoint().eval());
  return DensityMatrix::trusted(std::move(out));
}

namespace {

// Orthonormal basis of the eigenvalue-1 eigenspace of a projector.
Matrix projector_range_basis(const Matrix& projector) {
  const EigenSystem es = qcore::hermitian_eig(projector);
  int rank = 0;
  for (Eigen::Index i = 0; i < es.values.size(); ++i) {
    if (es.values[i] > 0.5) ++rank;
  }
  return es.vectors.rightCols(rank);
}

// Eigenvectors of a compressed Hermitian operator, grouped into runs of
// equal multiplicity. Returns column blocks of the given width.
std::vector<Matrix> multiplet_blocks(const Matrix& op, int width) {
  const EigenSystem es = qcore::hermitian_eig(op);
  require(es.values.size() % width == 0,
          "unexpected block dimension in multiplet split");
  std::vector<Matrix> blocks;
  for (Eigen::Index start = 0; start < es.values.size(); start += width) {
    blocks.push_back(es.vectors.middleCols(start, width));
  }
  return blocks;
}

}  // namespace

MaximallyTwirledResult maximally_twirled_state(int n, int d,
                                               std::uint64_t seed) {
  check_size_guard(n, d);
  const Eigen::Index dim = pow_ll(d, n);
  const twirl::TwirlChannel g_col = collective_twirl(n, d);
  const twirl::TwirlChannel g_per = twirl::permutation_twirl(n, d);
  const auto perms = Permutation::all(n);

  const SchurWeylTable table = schur_weyl_table(n, d);
  struct Block {
    const SchurWeylRecord* rec;
    Matrix basis;  // dim x (s*f)
  };
  std::vector<Block> blocks;
  for (const auto& rec : table.records) {
    if (rec.schur_dim == 0) continue;
    // A maximally mixed twirl output needs Schmidt rank f^lambda inside the
    // block, which requires s_lambda >= f^lambda.
    if (rec.schur_dim < rec.syt) return MaximallyTwirledResult{std::nullopt, 0.0};
    blocks.push_back(Block{&rec, projector_range_basis(rec.projector)});
  }

  const int restarts = 24;
  for (int attempt = 0; attempt < restarts; ++attempt) {
    rng::Philox gen(seed, static_cast<std::uint64_t>(attempt));
    Vector x = Vector::Zero(dim);
    bool ok = true;

    for (const Block& block : blocks) {
      const int f = static_cast<int>(block.rec->syt);
      const int s = static_cast<int>(block.rec->schur_dim);
      Vector block_state;

      if (f == 1) {
        // One-dimensional permutation factor: any unit vector in the block
        // twirls to the normalised projector.
        block_state = block.basis.col(0);
      } else {
        // Generic element of the permutation-commutant algebra restricted to
        // the block: eigenspaces are Q (x) r_j with multiplicity s.
        Matrix a = Matrix::Zero(dim, dim);
        for (const Permutation& pi : perms) {
          const double w = gen.next_double() - 0.5;
          const Matrix p = permutation_operator(pi, d);
          a += w * (p + p.adjoint());
        }
        // Generic element of the collective-unitary algebra: permutation
        // twirl of a random Hermitian matrix; eigenspaces are q_i (x) R with
        // multiplicity f.
        Matrix h(dim, dim);
        for (Eigen::Index r = 0; r < dim; ++r) {
          for (Eigen::Index c = 0; c < dim; ++c) {
            h(r, c) = Complex(gen.next_gaussian(), gen.next_gaussian());
          }
        }
        h = 0.5 * (h + h.adjoint().eval());
        const Matrix b = g_per.apply_raw(h);

        const Matrix a_c = block.basis.adjoint() * a * block.basis;
        const Matrix b_c = block.basis.adjoint() * b * block.basis;
        const auto e_blocks = multiplet_blocks(0.5 * (a_c + a_c.adjoint().eval()), s);
        const auto f_blocks = multiplet_blocks(0.5 * (b_c + b_c.adjoint().eval()), f);
        if (static_cast<int>(e_blocks.size()) != f ||
            static_cast<int>(f_blocks.size()) != s) {
          ok = false;
          break;
        }
        // y_j = E_j intersect F_j is one-dimensional (q_j (x) r_j); summing
        // with equal weights gives a maximally entangled block vector.
        Vector combined = Vector::Zero(block.basis.cols());
        for (int j = 0; j < f && ok; ++j) {
          const Matrix pf = f_blocks[j] * f_blocks[j].adjoint();
          const Matrix overlap =
              e_blocks[j].adjoint() * pf * e_blocks[j];
          const EigenSystem ov = qcore::hermitian_eig(overlap);
          if (ov.values[ov.values.size() - 1] < 0.99) {
            ok = false;
            break;
          }
          combined += e_blocks[j] * ov.vectors.col(ov.values.size() - 1) /
                      std::sqrt(static_cast<double>(f));
        }
        if (!ok) break;
        block_state = block.basis * combined;
      }

      const double trace_p = static_cast<double>(block.rec->syt) *
                             static_cast<double>(block.rec->schur_dim);
      x += std::sqrt(trace_p / static_cast<double>(dim)) * block_state;
    }

    if (!ok) continue;
    const double norm = x.norm();
    if (std::abs(norm - 1.0) > 1e-8) continue;
    x /= norm;
    const PureState candidate{Vector(x)};
    const Matrix twirled = g_col.apply_raw(candidate.to_density().entries());
    const double residual = qcore::max_abs(
        twirled - Matrix::Identity(dim, dim) / static_cast<double>(dim));
    if (residual <= 1e-8) {
      return MaximallyTwirledResult{candidate, residual};
    }
  }
  return MaximallyTwirledResult{std::nullopt, 0.0};
}

ThreeQubitDemo three_qubit_demo() {
  ThreeQubitDemo demo;
  demo.p21 = young_projector(Partition({2, 1}), 3, 2);
  demo.p3 = young_projector(Partition({3}), 3, 2);

  const double s3 = std::sqrt(3.0);
  demo.x21 = Vector(8);
  demo.x21 << 0.0, -2.0, 1.0, -s3, 1.0, s3, 0.0, 0.0;
  demo.x21 /= 2.0 * s3;
  demo.x3 = Vector(8);
  demo.x3 << 0.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 0.0;
  demo.x3 /= std::sqrt(6.0);
  demo.x = (demo.x21 + demo.x3) / std::sqrt(2.0);

  const twirl::TwirlChannel g_col = collective_twirl(3, 2);
  const auto block_residual = [&](const Vector& v, const Matrix& p) {
    const Matrix twirled = g_col.apply_raw(v * v.adjoint());
    return qcore::max_abs(twirled - p / p.trace().real());
  };
  demo.residual_fixed_x21 = (demo.p21 * demo.x21 - demo.x21).norm();
  demo.residual_fixed_x3 = (demo.p3 * demo.x3 - demo.x3).norm();
  demo.residual_block_x21 = block_residual(demo.x21, demo.p21);
  demo.residual_block_x3 = block_residual(demo.x3, demo.p3);
  demo.twirled = g_col.apply_raw(demo.x * demo.x.adjoint());
  demo.residual_final =
      qcore::max_abs(demo.twirled - Matrix::Identity(8, 8) / 8.0);
  return demo;
}

}  // namespace qres::schurweyl
