// SPDX-License-Identifier: Apache-2.0

#include "qres/entropy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace qres::entropy {

using qcore::Complex;
using qcore::DomainError;
using qcore::EigenSystem;
using qcore::RealVector;
using qcore::Vector;

namespace {

constexpr double kSupportMassTol = 1e-9;

void require(bool cond, const std::string& msg) {
  if (!cond) throw DomainError(msg);
}

}  // namespace

EntropicValue make_entropic(Quantity quantity, ExtReal value,
                            std::optional<double> parameter) {
  if (value.is_finite()) {
    const bool sign_constrained =
        quantity == Quantity::S || quantity == Quantity::D ||
        quantity == Quantity::V || quantity == Quantity::h;
    if (sign_constrained && value.value < -1e-9) {
      throw DomainError("entropic value violates its sign invariant");
    }
  }
  return EntropicValue{value, quantity, parameter};
}

double von_neumann_entropy(const DensityMatrix& rho) {
  const EigenSystem es = qcore::hermitian_eig(rho.entries());
  const double cutoff = qcore::kSupportCutoff *
                        std::max(es.values.cwiseAbs().maxCoeff(), 0.0);
  double s = 0.0;
  for (Eigen::Index i = 0; i < es.values.size(); ++i) {
    const double p = es.values[i];
    if (p > cutoff) s -= p * std::log2(p);
  }
  return std::max(s, 0.0);
}

double shannon_entropy(const Eigen::VectorXd& p) {
  require(p.size() > 0, "shannon_entropy: empty distribution");
  double sum = 0.0;
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    require(p[i] >= -1e-12, "shannon_entropy: negative probability");
    sum += p[i];
  }
  require(std::abs(sum - 1.0) <= qcore::kTraceTol,
          "shannon_entropy: probabilities do not sum to 1 within 1e-10");
  double h = 0.0;
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    if (p[i] > 0.0) h -= p[i] * std::log2(p[i]);
  }
  return std::max(h, 0.0);
}

double support_violation_mass(const DensityMatrix& rho,
                              const DensityMatrix& sigma) {
  require(rho.dim() == sigma.dim(), "dimension mismatch");
  const Matrix kernel =
      Matrix::Identity(sigma.dim(), sigma.dim()) -
      qcore::support_projector(sigma.entries());
  const double mass = (rho.entries() * kernel).trace().real();
  return std::max(mass, 0.0);
}

ExtReal relative_entropy(const DensityMatrix& rho,
                         const DensityMatrix& sigma) {
  require(rho.dim() == sigma.dim(), "relative_entropy: dimension mismatch");
  if (support_violation_mass(rho, sigma) > kSupportMassTol) {
    return ExtReal::infinity();
  }
  const Matrix diff = qcore::log2_on_support(rho.entries()) -
                      qcore::log2_on_support(sigma.entries());
  return ExtReal::finite((rho.entries() * diff).trace().real());
}

double relative_entropy_variance(const DensityMatrix& rho,
                                 const DensityMatrix& sigma) {
  require(rho.dim() == sigma.dim(),
          "relative_entropy_variance: dimension mismatch");
  require(support_violation_mass(rho, sigma) <= kSupportMassTol,
          "relative_entropy_variance: support violation");
  const Matrix diff = qcore::log2_on_support(rho.entries()) -
                      qcore::log2_on_support(sigma.entries());
  const double d = (rho.entries() * diff).trace().real();
  const double second = (rho.entries() * diff * diff).trace().real();
  return second - d * d;
}

double entropy_variance(const DensityMatrix& rho) {
  const EigenSystem es = qcore::hermitian_eig(rho.entries());
  const double cutoff = qcore::kSupportCutoff *
                        std::max(es.values.cwiseAbs().maxCoeff(), 0.0);
  double s = 0.0;
  for (Eigen::Index i = 0; i < es.values.size(); ++i) {
    if (es.values[i] > cutoff) s -= es.values[i] * std::log2(es.values[i]);
  }
  double v = 0.0;
  for (Eigen::Index i = 0; i < es.values.size(); ++i) {
    const double p = es.values[i];
    if (p > cutoff) {
      const double t = s + std::log2(p);
      v += p * t * t;
    }
  }
  return v;
}

double matrix_covariance(const DensityMatrix& rho,
                         const HermitianObservable& a,
                         const HermitianObservable& b) {
  require(rho.dim() == a.dim() && rho.dim() == b.dim(),
          "matrix_covariance: dimension mismatch");
  const double joint = (rho.entries() * a.entries() * b.entries())
                           .trace()
                           .real();
  const double mean_a = (rho.entries() * a.entries()).trace().real();
  const double mean_b = (rho.entries() * b.entries()).trace().real();
  return joint - mean_a * mean_b;
}

double collision_relative_entropy(const DensityMatrix& rho,
                                  const DensityMatrix& sigma) {
  require(rho.dim() == sigma.dim(),
          "collision_relative_entropy: dimension mismatch");
  require(support_violation_mass(rho, sigma) <= kSupportMassTol,
          "collision_relative_entropy: support violation");
  const Matrix w = qcore::inv_quartic_root_on_support(sigma.entries());
  const Matrix x = w * rho.entries() * w;
  // tr(X^2) = ||X||_F^2 for Hermitian X.
  return std::log2(x.squaredNorm());
}

namespace {

// --- information spectrum relative entropy -------------------------------

// tr(rho P) with P the projector onto nonnegative eigenspaces of
// 2^K sigma - rho, evaluated by dense eigendecomposition.
double spectrum_trace_dense(const Matrix& rho, const Matrix& sigma,
                            double k_bits) {
  const Matrix a = std::exp2(k_bits) * sigma - rho;
  const EigenSystem es = qcore::hermitian_eig(a);
  const double tol =
      -1e-13 * std::max(es.values.cwiseAbs().maxCoeff(), 1e-300);
  double mass = 0.0;
  for (Eigen::Index i = 0; i < es.values.size(); ++i) {
    if (es.values[i] >= tol) {
      mass += (es.vectors.col(i).adjoint() * rho * es.vectors.col(i))(0, 0)
                  .real();
    }
  }
  return mass;
}

// Same trace for rho = |psi><psi| and diagonal sigma. 2^K diag(s) - psi psi*
// has at most one negative eigenvalue; it is the root of the secular
// equation sum_i |psi_i|^2 / (d_i - lambda) = 1 below zero, and the trace is
// 1 - 1/g'(lambda).
double spectrum_trace_rank_one(const Eigen::VectorXd& weights,
                               const Eigen::VectorXd& diag, double k_bits) {
  const Eigen::Index n = weights.size();
  const double scale = std::exp2(k_bits);
  Eigen::VectorXd d(n);
  for (Eigen::Index i = 0; i < n; ++i) d[i] = scale * diag[i];

  const auto g = [&](double lambda) {
    double acc = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      if (weights[i] > 0.0) acc += weights[i] / (d[i] - lambda);
    }
    return acc;
  };

  // Negative eigenvalue exists iff g(0^-) > 1; g is increasing on (-inf, 0).
  double at_zero = 0.0;
  bool kernel_mass = false;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (weights[i] <= 0.0) continue;
    if (d[i] <= 0.0) {
      kernel_mass = true;
      break;
    }
    at_zero += weights[i] / d[i];
  }
  if (!kernel_mass && at_zero <= 1.0) return 1.0;
  if (g(-1.0) >= 1.0) return 0.0;  // only possible when every d_i underflows

  double lo = -1.0, hi = 0.0;  // g(lo) < 1 <= g(hi^-)
  for (int it = 0; it < 120; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    (g(mid) < 1.0 ? lo : hi) = mid;
  }
  const double lambda = lo;
  double gprime = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (weights[i] > 0.0) {
      const double t = d[i] - lambda;
      gprime += weights[i] / (t * t);
    }
  }
  return std::clamp(1.0 - 1.0 / gprime, 0.0, 1.0);
}

struct SpectrumEvaluator {
  std::function<double(double)> trace_at;
  double k_max;
};

SpectrumEvaluator make_spectrum_evaluator(const DensityMatrix& rho,
                                          const DensityMatrix& sigma) {
  const int dim = rho.dim();
  const Matrix& r = rho.entries();
  const Matrix& s = sigma.entries();

  double max_diag = 0.0, max_off = 0.0;
  for (int i = 0; i < dim; ++i) {
    max_diag = std::max(max_diag, std::abs(s(i, i)));
    for (int j = 0; j < dim; ++j) {
      if (i != j) max_off = std::max(max_off, std::abs(s(i, j)));
    }
  }
  const bool sigma_diagonal = max_off <= 1e-12 * std::max(max_diag, 1e-300);
  const bool rho_pure = std::abs(rho.purity() - 1.0) <= 1e-10;

  if (sigma_diagonal && rho_pure) {
    // Extract the state vector by power iteration (exact for rank one).
    Eigen::Index seed = 0;
    r.diagonal().cwiseAbs().maxCoeff(&seed);
    Vector v = Vector::Zero(dim);
    v[seed] = 1.0;
    for (int it = 0; it < 4; ++it) {
      v = r * v;
      const double norm = v.norm();
      if (norm <= 0.0) throw DomainError("info spectrum: zero state");
      v /= norm;
    }
    Eigen::VectorXd weights(dim), diag(dim);
    double min_pos = std::numeric_limits<double>::infinity();
    for (int i = 0; i < dim; ++i) {
      weights[i] = std::norm(v[i]);
      diag[i] = std::max(s(i, i).real(), 0.0);
      if (diag[i] > qcore::kSupportCutoff * max_diag) {
        min_pos = std::min(min_pos, diag[i]);
      } else {
        diag[i] = 0.0;
      }
    }
    const double k_max =
        2.0 * (std::log2(static_cast<double>(dim)) +
               std::abs(std::log2(std::max(min_pos, 1e-300)))) +
        8.0;
    return {[weights, diag](double k) {
              return spectrum_trace_rank_one(weights, diag, k);
            },
            k_max};
  }

  if (dim > 256) {
    throw DomainError(
        "info spectrum: dense path limited to dim <= 256 (the closed-form "
        "path requires a pure state against a diagonal reference)");
  }
  double min_pos = std::numeric_limits<double>::infinity();
  for (const Matrix* m : {&r, &s}) {
    const EigenSystem es = qcore::hermitian_eig(*m);
    const double cutoff =
        qcore::kSupportCutoff * std::max(es.values.cwiseAbs().maxCoeff(), 0.0);
    for (Eigen::Index i = 0; i < es.values.size(); ++i) {
      if (es.values[i] > cutoff) {
        min_pos = std::min(min_pos, es.values[i]);
        break;  // ascending order: first retained eigenvalue is the smallest
      }
    }
  }
  const double k_max =
      2.0 * (std::log2(static_cast<double>(dim)) +
             std::abs(std::log2(std::max(min_pos, 1e-300)))) +
      8.0;
  return {[r, s](double k) { return spectrum_trace_dense(r, s, k); }, k_max};
}

}  // namespace

ExtReal info_spectrum_relative_entropy(const DensityMatrix& rho,
                                       const DensityMatrix& sigma,
                                       double delta,
                                       const InfoSpectrumOptions& opts) {
  require(rho.dim() == sigma.dim(),
          "info_spectrum_relative_entropy: dimension mismatch");
  require(delta > 0.0 && delta < 1.0,
          "info_spectrum_relative_entropy: delta must lie in (0,1)");

  const SpectrumEvaluator ev = make_spectrum_evaluator(rho, sigma);
  double lo = -ev.k_max;
  double hi = ev.k_max;

  if (opts.validate_monotone) {
    double prev = -1.0;
    for (int i = 0; i <= opts.validation_grid; ++i) {
      const double k = lo + (hi - lo) * i / opts.validation_grid;
      const double f = ev.trace_at(k);
      if (f < prev - 1e-9) {
        std::ostringstream msg;
        msg << "info spectrum trace is not monotone near K=" << k
            << " (drop " << prev - f << "); bisection result is unreliable";
        throw DomainError(msg.str());
      }
      prev = std::max(prev, f);
    }
  }

  if (ev.trace_at(lo) > delta) {
    throw DomainError(
        "info_spectrum_relative_entropy: lower bracket failed; the trace "
        "exceeds delta over the whole search interval");
  }
  if (ev.trace_at(hi) <= delta) {
    // The trace plateaus at the rho-mass inside supp(sigma); when that
    // plateau stays below delta the supremum is unbounded.
    return ExtReal::infinity();
  }
  while (hi - lo > opts.resolution_bits) {
    const double mid = 0.5 * (lo + hi);
    (ev.trace_at(mid) <= delta ? lo : hi) = mid;
  }
  return ExtReal::finite(0.5 * (lo + hi));
}

ExtReal hypothesis_testing_relative_entropy(const DensityMatrix& rho,
                                            const DensityMatrix& sigma,
                                            double eps) {
  require(rho.dim() == sigma.dim(),
          "hypothesis_testing_relative_entropy: dimension mismatch");
  require(eps > 0.0 && eps < 1.0,
          "hypothesis_testing_relative_entropy: eps must lie in (0,1)");
  const double target = 1.0 - eps;

  // A test supported on ker(sigma) already passes: zero type-II error.
  if (support_violation_mass(rho, sigma) >= target - 1e-12) {
    return ExtReal::infinity();
  }

  const Matrix& r = rho.entries();
  const Matrix& s = sigma.entries();

  struct Split {
    double rho_pos = 0.0, rho_zero = 0.0;
    double sigma_pos = 0.0, sigma_zero = 0.0;
  };
  const auto split_at = [&](double mu, double zero_tol) {
    const EigenSystem es = qcore::hermitian_eig(r - mu * s);
    Split out;
    for (Eigen::Index i = 0; i < es.values.size(); ++i) {
      const auto v = es.vectors.col(i);
      const double rm = (v.adjoint() * r * v)(0, 0).real();
      const double sm = (v.adjoint() * s * v)(0, 0).real();
      if (es.values[i] > zero_tol) {
        out.rho_pos += rm;
        out.sigma_pos += sm;
      } else if (es.values[i] >= -zero_tol) {
        out.rho_zero += rm;
        out.sigma_zero += sm;
      }
    }
    return out;
  };
  // Strictly positive eigenspace only; the crossing eigenspace is resolved
  // after the bisection so the zero band there can dominate the bracket
  // width.
  const auto positive_mass = [&](double mu) {
    return split_at(mu, 0.0).rho_pos;
  };

  // Bracket the threshold: tr(Q(mu) rho) decreases from 1 towards the
  // rho-mass outside supp(sigma).
  double mu_lo = 0.0;
  double mu_hi = 1.0;
  int guard = 0;
  while (positive_mass(mu_hi) >= target) {
    mu_hi *= 2.0;
    if (++guard > 200) return ExtReal::infinity();
  }
  for (int it = 0; it < 200; ++it) {
    if (mu_hi - mu_lo <= 1e-15 * mu_hi) break;
    const double mid = 0.5 * (mu_lo + mu_hi);
    (positive_mass(mid) >= target ? mu_lo : mu_hi) = mid;
  }

  // Fractional weight on the crossing eigenspace. Any eigenvalue that flips
  // sign inside the final bracket has magnitude below (mu_hi-mu_lo)*||sigma||,
  // plus eigensolver noise at the scale of ||rho - mu sigma||.
  const double sigma_norm = qcore::max_abs(s) * sigma.dim();
  const double zero_tol = 8.0 * (mu_hi - mu_lo) * sigma_norm +
                          1e-13 * (1.0 + mu_lo * sigma_norm);
  const Split sp = split_at(mu_lo, zero_tol);
  double c = 0.0;
  if (sp.rho_zero > 0.0) {
    c = std::clamp((target - sp.rho_pos) / sp.rho_zero, 0.0, 1.0);
  }
  const double beta = sp.sigma_pos + c * sp.sigma_zero;
  if (beta <= 0.0) return ExtReal::infinity();
  return ExtReal::finite(-std::log2(beta));
}

double normal_cdf(double x) {
  return 0.5 * std::erfc(-x / std::sqrt(2.0));
}

double inverse_normal_cdf(double eps) {
  require(eps > 0.0 && eps < 1.0,
          "inverse_normal_cdf: argument must lie in (0,1)");
  double lo = -40.0, hi = 40.0;
  for (int it = 0; it < 80; ++it) {
    const double mid = 0.5 * (lo + hi);
    (normal_cdf(mid) < eps ? lo : hi) = mid;
  }
  double x = 0.5 * (lo + hi);
  // Newton refinement against the density.
  for (int it = 0; it < 4; ++it) {
    const double density =
        std::exp(-0.5 * x * x) / std::sqrt(2.0 * M_PI);
    if (density <= 0.0) break;
    x -= (normal_cdf(x) - eps) / density;
  }
  require(std::abs(normal_cdf(x) - eps) < 1e-9,
          "inverse_normal_cdf: refinement failed");
  return x;
}

}  // namespace qres::entropy
