// SPDX-License-Identifier: Apache-2.0

#include "qres/codesim.hpp"

#include "qres/entropy.hpp"
#include "qres/rng.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <thread>

namespace qres::codesim {

using qcore::Complex;
using qcore::DomainError;
using qcore::EigenSystem;
using qcore::Matrix;
using qcore::Vector;

namespace {

void require(bool cond, const std::string& msg) {
  if (!cond) throw DomainError(msg);
}

void run_sharded(int items, int threads, const std::function<void(int)>& work) {
  threads = std::max(1, std::min(threads, items));
  if (threads == 1) {
    for (int i = 0; i < items; ++i) work(i);
    return;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(threads);
  for (int t = 0; t < threads; ++t) {
    pool.emplace_back([&, t] {
      try {
        for (int i = t; i < items; i += threads) work(i);
      } catch (...) {
        errors[t] = std::current_exception();
      }
    });
  }
  for (std::thread& th : pool) th.join();
  for (const std::exception_ptr& error : errors) {
    if (error) std::rethrow_exception(error);
  }
}

}  // namespace

Codebook::Codebook(std::vector<int> assignment, int group_order)
    : assignment_(std::move(assignment)) {
  require(!assignment_.empty(), "codebook must carry at least one message");
  require(static_cast<int>(assignment_.size()) <= kMaxMessages,
          "codebook exceeds the message guard of 256");
  for (int g : assignment_) {
    require(g >= 1 && g <= group_order,
            "codebook index outside {1..|G|}");
  }
}

Codebook Codebook::all_distinct(int messages) {
  std::vector<int> assignment(messages);
  for (int m = 0; m < messages; ++m) assignment[m] = m + 1;
  return Codebook(std::move(assignment), messages);
}

std::vector<DensityMatrix> encode(const DensityMatrix& rho,
                                  const FiniteUnitaryGroup& group,
                                  const Codebook& codebook) {
  require(rho.dim() == group.dim(), "state and group dimensions differ");
  require(rho.dim() <= kMaxDim, "encode exceeds the dimension guard of 64");
  std::vector<DensityMatrix> states;
  states.reserve(codebook.messages());
  for (int m = 0; m < codebook.messages(); ++m) {
    const Matrix& u = group.element(codebook.index(m) - 1);
    states.push_back(DensityMatrix::trusted(u * rho.entries() * u.adjoint()));
  }
  return states;
}

PgmDecoder build_pgm(const std::vector<DensityMatrix>& states) {
  require(!states.empty(), "build_pgm: no states");
  const int dim = states.front().dim();
  Matrix sum = Matrix::Zero(dim, dim);
  for (const DensityMatrix& s : states) {
    require(s.dim() == dim, "build_pgm: inconsistent dimensions");
    sum += s.entries();
  }
  const EigenSystem es = qcore::hermitian_eig(sum);
  const double cutoff =
      qcore::kSupportCutoff * std::max(es.values.cwiseAbs().maxCoeff(), 0.0);
  Matrix inv_sqrt = Matrix::Zero(dim, dim);
  Matrix support = Matrix::Zero(dim, dim);
  int rank = 0;
  for (Eigen::Index i = 0; i < es.values.size(); ++i) {
    if (es.values[i] > cutoff) {
      const Matrix vv = es.vectors.col(i) * es.vectors.col(i).adjoint();
      inv_sqrt += vv / std::sqrt(es.values[i]);
      support += vv;
      ++rank;
    }
  }
  std::vector<Matrix> elements;
  elements.reserve(states.size() + 1);
  for (const DensityMatrix& s : states) {
    Matrix e = inv_sqrt * s.entries() * inv_sqrt;
    e = 0.5 * (e + e.adjoint().eval());
    elements.push_back(std::move(e));
  }
  elements.push_back(Matrix::Identity(dim, dim) - support);  // abstain
  return PgmDecoder{qcore::Povm(dim, std::move(elements)), rank};
}

double success_probability_direct(const std::vector<DensityMatrix>& states,
                                  const PgmDecoder& decoder) {
  require(decoder.povm.elements().size() == states.size() + 1,
          "decoder does not match the number of states");
  double acc = 0.0;
  for (size_t m = 0; m < states.size(); ++m) {
    acc += (states[m].entries() * decoder.povm.elements()[m]).trace().real();
  }
  return acc / static_cast<double>(states.size());
}

double success_probability_via_collision(const DensityMatrix& rho,
                                         const FiniteUnitaryGroup& group,
                                         const Codebook& codebook) {
  const int m_count = codebook.messages();
  const int g_count = group.order();
  const int dim = rho.dim();
  const long long joint_dim =
      static_cast<long long>(m_count) * g_count * dim;
  require(joint_dim <= kMaxCollisionDim,
          "collision route guard: M * |G| * dim too large");

  const std::vector<DensityMatrix> states = encode(rho, group, codebook);
  const Eigen::Index jd = static_cast<Eigen::Index>(joint_dim);
  Matrix joint = Matrix::Zero(jd, jd);
  for (int m = 0; m < m_count; ++m) {
    const Eigen::Index base =
        (static_cast<Eigen::Index>(m) * g_count + (codebook.index(m) - 1)) *
        dim;
    joint.block(base, base, dim, dim) = states[m].entries() / m_count;
  }
  const DensityMatrix tau_mcq = DensityMatrix::trusted(std::move(joint));
  const std::vector<int> dims{m_count, g_count, dim};
  const DensityMatrix tau_mc = qcore::partial_trace(tau_mcq, dims, {0, 1});
  const DensityMatrix tau_q = qcore::partial_trace(tau_mcq, dims, {2});
  const DensityMatrix product = qcore::tensor_product(tau_mc, tau_q);
  const double d2 = entropy::collision_relative_entropy(tau_mcq, product);
  return std::exp2(d2) / static_cast<double>(m_count);
}

namespace {

// For a pure carrier the decoder overlap collapses to a scalar:
// tr(sigma_m E_m) = (psi_m^dag S psi_m)^2 with psi_m = U_{g_m} psi.
double exact_success_pure(const Vector& psi, const FiniteUnitaryGroup& group,
                          const Codebook& codebook) {
  const int dim = static_cast<int>(psi.size());
  const int m_count = codebook.messages();
  Matrix encoded(dim, m_count);
  for (int m = 0; m < m_count; ++m) {
    encoded.col(m) = group.element(codebook.index(m) - 1) * psi;
  }
  Matrix sum(dim, dim);
  sum.noalias() = encoded * encoded.adjoint();
  const EigenSystem es = qcore::hermitian_eig(sum);
  const double cutoff =
      qcore::kSupportCutoff * std::max(es.values.cwiseAbs().maxCoeff(), 0.0);
  Matrix inv_sqrt = Matrix::Zero(dim, dim);
  for (Eigen::Index i = 0; i < es.values.size(); ++i) {
    if (es.values[i] > cutoff) {
      inv_sqrt += es.vectors.col(i) * es.vectors.col(i).adjoint() /
                  std::sqrt(es.values[i]);
    }
  }
  const Matrix transformed = inv_sqrt * encoded;
  double acc = 0.0;
  for (int m = 0; m < m_count; ++m) {
    const double overlap = encoded.col(m).dot(transformed.col(m)).real();
    acc += overlap * overlap;
  }
  return acc / m_count;
}

double exact_success(const DensityMatrix& rho, const FiniteUnitaryGroup& group,
                     const Codebook& codebook) {
  if (std::abs(rho.purity() - 1.0) <= 1e-12) {
    // Extract the state vector; exact for a rank-one density matrix.
    Eigen::Index seed = 0;
    rho.entries().diagonal().cwiseAbs().maxCoeff(&seed);
    Vector psi = Vector::Zero(rho.dim());
    psi[seed] = 1.0;
    for (int it = 0; it < 4; ++it) {
      psi = rho.entries() * psi;
      psi /= psi.norm();
    }
    return exact_success_pure(psi, group, codebook);
  }
  const std::vector<DensityMatrix> states = encode(rho, group, codebook);
  return success_probability_direct(states, build_pgm(states));
}

}  // namespace

SimulationResult monte_carlo_achievability(const DensityMatrix& rho,
                                           const FiniteUnitaryGroup& group,
                                           int messages, int trials,
                                           std::uint64_t seed,
                                           double eps_target, int threads) {
  require(messages >= 1 && messages <= kMaxMessages,
          "messages outside the guard range");
  require(trials >= 1, "need at least one trial");
  require(rho.dim() <= kMaxDim, "dimension guard of 64 exceeded");

  SimulationResult result;
  result.seed = seed;
  result.messages = messages;
  result.eps_target = eps_target;
  result.per_codebook.assign(trials, 0.0);

  run_sharded(trials, threads, [&](int t) {
    rng::Philox gen(seed, static_cast<std::uint64_t>(t));
    std::vector<int> assignment(messages);
    for (int m = 0; m < messages; ++m) {
      assignment[m] =
          1 + static_cast<int>(gen.next_below(
                  static_cast<std::uint64_t>(group.order())));
    }
    result.per_codebook[t] =
        exact_success(rho, group, Codebook(std::move(assignment), group.order()));
  });

  for (double p : result.per_codebook) {
    require(p >= -1e-9 && p <= 1.0 + 1e-9,
            "success probability escaped [0,1]");
  }
  double mean = 0.0;
  for (double p : result.per_codebook) mean += p;
  mean /= trials;
  double var = 0.0;
  for (double p : result.per_codebook) var += (p - mean) * (p - mean);
  var = trials > 1 ? var / (trials - 1) : 0.0;
  result.mean_success = mean;
  result.stderr_mean = std::sqrt(var / trials);
  const auto best =
      std::max_element(result.per_codebook.begin(), result.per_codebook.end());
  result.best_index = static_cast<int>(best - result.per_codebook.begin());
  result.best_success = *best;
  return result;
}

AchievabilityReport find_achievable_log_m(const DensityMatrix& rho,
                                          const FiniteUnitaryGroup& group,
                                          double eps, int trials,
                                          std::uint64_t seed,
                                          std::vector<double> delta_grid,
                                          int threads) {
  require(eps > 0.0 && eps < 1.0, "eps must lie in (0,1)");

  struct Outcome {
    bool best_ok;
    bool mean_ok;
  };
  std::map<int, Outcome> cache;
  const auto evaluate = [&](int m) -> Outcome {
    const auto it = cache.find(m);
    if (it != cache.end()) return it->second;
    const SimulationResult sim = monte_carlo_achievability(
        rho, group, m, trials, rng::derive_seed(seed, m), eps, threads);
    double best = sim.best_success;
    if (m <= group.order()) {
      best = std::max(best, exact_success(rho, group, Codebook::all_distinct(m)));
    }
    const Outcome out{best >= 1.0 - eps - 1e-12,
                      sim.mean_success >= 1.0 - eps - 1e-12};
    cache[m] = out;
    return out;
  };

  // Doubling then bisection for the largest M certified by some codebook.
  int low = 1;
  int high = 0;  // first failing M once known
  (void)evaluate(1);
  while (low * 2 <= kMaxMessages) {
    if (evaluate(low * 2).best_ok) {
      low *= 2;
    } else {
      high = low * 2;
      break;
    }
  }
  if (high == 0) {
    high = kMaxMessages + 1;
  }
  while (high - low > 1) {
    const int mid = (low + high) / 2;
    if (evaluate(mid).best_ok) {
      low = mid;
    } else {
      high = mid;
    }
  }

  AchievabilityReport report;
  report.m_best = low;
  report.log2_m_best = std::log2(static_cast<double>(low));

  // Same search under the sampled-mean criterion (never above m_best).
  int mean_low = 1, mean_high = low + 1;
  while (mean_low * 2 < mean_high) {
    if (evaluate(mean_low * 2).mean_ok) {
      mean_low *= 2;
    } else {
      mean_high = mean_low * 2;
      break;
    }
  }
  while (mean_high - mean_low > 1) {
    const int mid = (mean_low + mean_high) / 2;
    if (evaluate(mid).mean_ok) {
      mean_low = mid;
    } else {
      mean_high = mid;
    }
  }
  report.m_mean = mean_low;
  report.log2_m_mean = std::log2(static_cast<double>(mean_low));

  if (delta_grid.empty()) {
    const double cap = std::min(eps, 1.0 - eps);
    for (double frac : {0.2, 0.4, 0.6, 0.8}) {
      delta_grid.push_back(frac * cap);
    }
  }
  report.sandwich = bounds::sandwich_bounds(rho, twirl::finite_group_twirl(group),
                                            eps, delta_grid);
  return report;
}

double check_privacy(const DensityMatrix& rho, const FiniteUnitaryGroup& group,
                     const Codebook& codebook, const twirl::TwirlChannel& g) {
  require(g.dim() == rho.dim(), "check_privacy: dimension mismatch");
  const Matrix twirled_rho = g.apply(rho).entries();
  double residual = 0.0;
  for (const DensityMatrix& s : encode(rho, group, codebook)) {
    residual = std::max(residual,
                        qcore::max_abs(g.apply(s).entries() - twirled_rho));
  }
  return residual;
}

}  // namespace qres::codesim
