// SPDX-License-Identifier: Apache-2.0

#include "qres/bounds.hpp"

#include "qres/entropy.hpp"
#include "qres/qcore.hpp"
#include "qres/rng.hpp"
#include "qres/twirl.hpp"

#include <doctest.h>

#include "support.hpp"

#include <cmath>
#include <sstream>

using namespace qres;
using entropy::ExtReal;
using qcore::DensityMatrix;
using qcore::HermitianObservable;
using qcore::Matrix;
using qcore::Vector;

namespace {

DensityMatrix bell_state() {
  Vector v = Vector::Zero(4);
  v[0] = v[3] = 1.0 / std::sqrt(2.0);
  return qcore::PureState(v).to_density();
}

DensityMatrix plus_state() {
  Vector v = Vector::Constant(2, 1.0 / std::sqrt(2.0));
  return qcore::PureState(v).to_density();
}

DensityMatrix tilted_qubit() {
  Vector v(2);
  v << std::cos(M_PI / 8.0), std::sin(M_PI / 8.0);
  return qcore::PureState(v).to_density();
}

}  // namespace

TEST_SUITE("bounds") {

TEST_CASE("hypothesis-testing upper bound") {
  SUBCASE("free states decode to -log2(1-eps)") {
    const DensityMatrix mixed{Matrix(Matrix::Identity(2, 2) / 2.0)};
    const auto g = twirl::dephasing_channel(2);
    for (double eps : {0.05, 0.3}) {
      CHECK(bounds::upper_bound_log_messages(mixed, g, eps).value ==
            doctest::Approx(-std::log2(1.0 - eps)).epsilon(1e-9));
    }
  }

  SUBCASE("Bell pair against the local twirl") {
    // Neyman-Pearson closed form for a maximally entangled state against
    // the maximally mixed reference: all likelihood mass sits on the Bell
    // vector, so beta = (1-eps)/4 and the bound is 2 - log2(1-eps) -> 2.
    const auto g = twirl::local_unital_twirl(2, 2);
    for (double eps : {0.2, 0.05, 0.004, 0.0005}) {
      CHECK(bounds::upper_bound_log_messages(bell_state(), g, eps).value ==
            doctest::Approx(2.0 - std::log2(1.0 - eps)).epsilon(1e-9));
    }
  }

  SUBCASE("plus state against dephasing stays above the lower bridge") {
    const double eps = 0.05, delta = 0.01;
    const auto g = twirl::dephasing_channel(2);
    const double dh =
        bounds::upper_bound_log_messages(plus_state(), g, eps).value;
    const DensityMatrix sigma = g.apply(plus_state());
    const double ds = entropy::info_spectrum_relative_entropy(
                          plus_state(), sigma, eps - delta)
                          .value;
    CHECK(dh >= ds - std::log2(1.0 / delta) - 1e-9);
  }

  SUBCASE("non-idempotent map is rejected") {
    Matrix k0(2, 2), k1(2, 2);
    k0 << 1, 0, 0, std::sqrt(0.5);
    k1 << 0, std::sqrt(0.5), 0, 0;
    const auto damping = qcore::QuantumChannel::from_kraus({k0, k1}, 2, 2);
    CHECK_THROWS_AS(
        bounds::upper_bound_log_messages(plus_state(), damping, 0.1),
        qcore::DomainError);
  }
}

TEST_CASE("sandwich bounds") {
  SUBCASE("free state rows are the pure log-delta envelope") {
    const DensityMatrix mixed{Matrix(Matrix::Identity(2, 2) / 2.0)};
    const auto report = bounds::sandwich_bounds(
        mixed, twirl::dephasing_channel(2), 0.2, {0.05, 0.1, 0.15});
    for (const auto& row : report.sandwich) {
      CHECK(row.lower.value ==
            doctest::Approx(std::log2(row.delta)).epsilon(1e-5));
      CHECK(row.upper.value ==
            doctest::Approx(-std::log2(row.delta)).epsilon(1e-5));
      CHECK(row.lower.value <= row.upper.value + 1e-6);
    }
  }

  SUBCASE("four plus qubits against the product dephasing") {
    const DensityMatrix rho = qcore::tensor_power(plus_state(), 4);
    const DensityMatrix sigma{Matrix(Matrix::Identity(16, 16) / 16.0)};
    const auto report = bounds::sandwich_bounds_iid(
        plus_state(), twirl::dephasing_channel(2), 0.1, {0.02}, 4);
    const double lower_direct =
        entropy::info_spectrum_relative_entropy(rho, sigma, 0.08).value +
        std::log2(0.02);
    const double upper_direct =
        entropy::info_spectrum_relative_entropy(rho, sigma, 0.12).value +
        std::log2(50.0);
    CHECK(report.sandwich[0].lower.value ==
          doctest::Approx(lower_direct).epsilon(1e-9));
    CHECK(report.sandwich[0].upper.value ==
          doctest::Approx(upper_direct).epsilon(1e-9));
    CHECK(report.sandwich[0].lower.value <= report.sandwich[0].upper.value);
  }

  SUBCASE("best row tracks the grid maximum") {
    std::vector<double> grid;
    for (double d = 0.01; d < 0.095; d += 0.01) grid.push_back(d);
    const auto report = bounds::sandwich_bounds(
        bell_state(), twirl::local_unital_twirl(2, 2), 0.1, grid);
    double best = -1e300;
    for (const auto& row : report.sandwich) {
      best = std::max(best, row.lower.value);
    }
    CHECK(report.best_lower.value == doctest::Approx(best));
    CHECK(report.best_upper.value <= report.log2_upper.value + 1e-12);
  }

  SUBCASE("delta outside (0, min{eps,1-eps}) is rejected") {
    CHECK_THROWS_AS(bounds::sandwich_bounds(
                        plus_state(), twirl::dephasing_channel(2), 0.1, {0.2}),
                    qcore::DomainError);
  }
}

TEST_CASE("asymptotic rate") {
  SUBCASE("plus state has zero variance and rate one") {
    const auto rate =
        bounds::asymptotic_rate(plus_state(), twirl::dephasing_channel(2),
                                0.17, 5);
    CHECK(rate.first_order == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(rate.second_order == rate.first_order);  // exact V = 0 branch
  }

  SUBCASE("Bell pair encodes two bits per copy at any error") {
    for (double eps : {0.01, 0.4}) {
      const auto rate = bounds::asymptotic_rate(
          bell_state(), twirl::local_unital_twirl(2, 2), eps, 7);
      CHECK(rate.first_order == doctest::Approx(2.0).epsilon(1e-12));
      CHECK(rate.second_order == rate.first_order);
    }
  }

  SUBCASE("tilted qubit assembles D + Phi^-1 sqrt(V/N)") {
    const auto g = twirl::dephasing_channel(2);
    const DensityMatrix rho = tilted_qubit();
    const DensityMatrix sigma = g.apply(rho);
    const double d = entropy::relative_entropy(rho, sigma).value;
    const double v = entropy::relative_entropy_variance(rho, sigma);
    const auto rate = bounds::asymptotic_rate(rho, g, 0.05, 100);
    CHECK(rate.first_order == doctest::Approx(d));
    CHECK(rate.second_order ==
          doctest::Approx(d + entropy::inverse_normal_cdf(0.05) *
                                  std::sqrt(v / 100.0))
              .epsilon(1e-12));
    CHECK(rate.second_order < rate.first_order);  // Phi^-1(0.05) < 0
  }

  SUBCASE("second-order gap closes like 1/sqrt(N)") {
    const auto g = twirl::dephasing_channel(2);
    const DensityMatrix rho = tilted_qubit();
    double sum_x = 0, sum_y = 0, sum_xx = 0, sum_xy = 0;
    int count = 0;
    for (long long n : {4LL, 16LL, 64LL, 256LL, 1024LL}) {
      const auto rate = bounds::asymptotic_rate(rho, g, 0.05, n);
      const double x = std::log2(static_cast<double>(n));
      const double y = std::log2(rate.first_order - rate.second_order);
      sum_x += x;
      sum_y += y;
      sum_xx += x * x;
      sum_xy += x * y;
      ++count;
    }
    const double slope = (count * sum_xy - sum_x * sum_y) /
                         (count * sum_xx - sum_x * sum_x);
    CHECK(std::abs(slope + 0.5) < 0.05);
  }
}

TEST_CASE("rate splitting") {
  rng::Philox gen(61);
  SUBCASE("dephasing on random states") {
    for (int trial = 0; trial < 5; ++trial) {
      const DensityMatrix rho = testsupport::random_density(4, gen);
      CHECK(bounds::splitting_check(rho, twirl::dephasing_channel(4)) < 1e-9);
    }
  }

  SUBCASE("super-dense splitting for the Bell pair") {
    const DensityMatrix rho = bell_state();
    const auto g = twirl::local_unital_twirl(2, 2);
    CHECK(bounds::splitting_check(rho, g) < 1e-9);
    // R_U(rho_AB) = R_loc(rho_AB) + R_U(rho_B) term by term.
    const DensityMatrix rho_b = qcore::partial_trace(rho, {2, 2}, {1});
    const double full = 2.0 - entropy::von_neumann_entropy(rho);
    const double local = 1.0 - bounds::conditional_entropy(rho, 2, 2);
    const double rest = 1.0 - entropy::von_neumann_entropy(rho_b);
    CHECK(full == doctest::Approx(local + rest).epsilon(1e-9));
  }

  SUBCASE("random two-qutrit states under the permutation twirl") {
    for (int trial = 0; trial < 5; ++trial) {
      const DensityMatrix rho = testsupport::random_density(9, gen);
      CHECK(bounds::splitting_check(rho, twirl::permutation_twirl(2, 3)) <
            1e-9);
    }
  }
}

TEST_CASE("coherence rate") {
  CHECK(bounds::coherence_rate(plus_state(), 0.1, 3).first_order ==
        doctest::Approx(1.0).epsilon(1e-12));

  Matrix diag = Matrix::Zero(3, 3);
  diag(0, 0) = 0.5;
  diag(1, 1) = 0.3;
  diag(2, 2) = 0.2;
  const auto rate = bounds::coherence_rate(DensityMatrix(diag), 0.1, 3);
  CHECK(rate.first_order == 0.0);
  CHECK(rate.second_order == 0.0);

  rng::Philox gen(62);
  const DensityMatrix rho = testsupport::random_pure(3, gen).to_density();
  const auto direct = bounds::asymptotic_rate(rho, twirl::dephasing_channel(3),
                                              0.2, 11);
  const auto named = bounds::coherence_rate(rho, 0.2, 11);
  CHECK(named.first_order == direct.first_order);
  CHECK(named.second_order == direct.second_order);
}

TEST_CASE("conditional entropy and its variance") {
  SUBCASE("Bell pair") {
    CHECK(bounds::conditional_entropy(bell_state(), 2, 2) ==
          doctest::Approx(-1.0).epsilon(1e-10));
    CHECK(bounds::conditional_entropy_variance(bell_state(), 2, 2) ==
          doctest::Approx(0.0).epsilon(1e-9));
  }

  SUBCASE("pure product state") {
    rng::Philox gen(63);
    const DensityMatrix ab = qcore::tensor_product(
        testsupport::random_pure(2, gen).to_density(),
        testsupport::random_pure(3, gen).to_density());
    CHECK(bounds::conditional_entropy(ab, 2, 3) ==
          doctest::Approx(0.0).epsilon(1e-9));
    CHECK(bounds::conditional_entropy_variance(ab, 2, 3) ==
          doctest::Approx(0.0).epsilon(1e-9));
  }

  SUBCASE("maximally mixed two qubits") {
    const DensityMatrix mixed{Matrix(Matrix::Identity(4, 4) / 4.0)};
    CHECK(bounds::conditional_entropy(mixed, 2, 2) ==
          doctest::Approx(1.0).epsilon(1e-10));
  }
}

TEST_CASE("gibbs state") {
  Matrix h(2, 2);
  h << 0, 0, 0, 1;
  const HermitianObservable ham{h, "energy"};

  const DensityMatrix flat = bounds::gibbs_state(ham, 0.0);
  CHECK(qcore::max_abs(flat.entries() - Matrix::Identity(2, 2) / 2.0) < 1e-12);

  const DensityMatrix cold = bounds::gibbs_state(ham, 500.0);
  Matrix ground = Matrix::Zero(2, 2);
  ground(0, 0) = 1.0;
  CHECK(qcore::max_abs(cold.entries() - ground) < 1e-12);

  const DensityMatrix warm = bounds::gibbs_state(ham, 1.0);
  CHECK(warm.entries()(0, 0).real() ==
        doctest::Approx(0.7310585786300049).epsilon(1e-12));
  CHECK(warm.entries()(1, 1).real() ==
        doctest::Approx(0.2689414213699951).epsilon(1e-12));
}

TEST_CASE("thermodynamic bound") {
  Matrix h(2, 2);
  h << 0, 0, 0, 1;
  const HermitianObservable ham{h, "energy"};

  SUBCASE("the Gibbs state itself encodes nothing") {
    const DensityMatrix gamma = bounds::gibbs_state(ham, 1.3);
    CHECK(bounds::thermo_bound(gamma, ham, 1.3, 0.1, 50) == 0.0);
  }

  SUBCASE("infinite temperature reduces to the purity bound") {
    rng::Philox gen(64);
    const DensityMatrix rho = testsupport::random_density(2, gen);
    const long long n = 20;
    const double eps = 0.07;
    const double direct = bounds::thermo_bound(rho, ham, 0.0, eps, n);
    const double purity =
        n * (1.0 - entropy::von_neumann_entropy(rho)) +
        std::sqrt(n * entropy::entropy_variance(rho)) *
            entropy::inverse_normal_cdf(eps);
    CHECK(direct == doctest::Approx(purity).epsilon(1e-9));
    // Also agrees with the depolarizing-twirl rate scaled by n.
    const auto rate =
        bounds::asymptotic_rate(rho, twirl::depolarizing_channel(2), eps, n);
    CHECK(direct == doctest::Approx(n * rate.second_order).epsilon(1e-9));
  }

  SUBCASE("excited qubit at unit inverse temperature") {
    Matrix excited = Matrix::Zero(2, 2);
    excited(1, 1) = 1.0;
    const DensityMatrix rho{excited};
    const DensityMatrix gamma = bounds::gibbs_state(ham, 1.0);
    const double d = entropy::relative_entropy(rho, gamma).value;
    const double v = entropy::relative_entropy_variance(rho, gamma);
    const double expected =
        10 * d + std::sqrt(10 * v) * entropy::inverse_normal_cdf(0.25);
    CHECK(bounds::thermo_bound(rho, ham, 1.0, 0.25, 10) ==
          doctest::Approx(expected).epsilon(1e-12));
  }
}

TEST_CASE("clock bound") {
  Matrix h(2, 2);
  h << 0, 0, 0, 1;
  const HermitianObservable ham{h, "energy"};

  CHECK(bounds::clock_bound(qcore::PureState::basis_state(2, 1), ham, 9) ==
        doctest::Approx(0.0));

  Vector plus = Vector::Constant(2, 1.0 / std::sqrt(2.0));
  CHECK(bounds::clock_bound(qcore::PureState(plus), ham, 12) ==
        doctest::Approx(12.0).epsilon(1e-12));

  Vector tilted(2);
  tilted << std::sqrt(0.75), std::sqrt(0.25);
  CHECK(bounds::clock_bound(qcore::PureState(tilted), ham, 10) ==
        doctest::Approx(8.112781244591329).epsilon(1e-12));

  // Degenerate levels are merged before forming the distribution.
  Matrix h3 = Matrix::Zero(3, 3);
  h3(0, 0) = 1.0;
  h3(1, 1) = 1.0;
  h3(2, 2) = 2.0;
  Vector spread(3);
  spread << std::sqrt(0.375), std::sqrt(0.375), std::sqrt(0.25);
  CHECK(bounds::clock_bound(qcore::PureState(spread),
                            HermitianObservable{h3, "energy"}, 10) ==
        doctest::Approx(8.112781244591329).epsilon(1e-12));
}

TEST_CASE("rate curve emission") {
  const auto rows = bounds::rate_curve(
      plus_state(), twirl::dephasing_channel(2), 0.1, 0.02, {1, 2, 4, 400});
  REQUIRE(rows.size() == 4);
  for (const auto& row : rows) {
    CHECK(row.first_order == doctest::Approx(1.0).epsilon(1e-12));
  }
  CHECK(rows[1].lower_per_copy.has_value());
  CHECK(rows[1].upper_per_copy.has_value());
  CHECK_FALSE(rows[3].lower_per_copy.has_value());  // dim 2^400 is out of reach

  std::ostringstream csv;
  bounds::write_rate_curve_csv(csv, rows);
  CHECK(csv.str().rfind("N,first_order,second_order,lower,upper\n", 0) == 0);
  // The last row has no sandwich columns: "400,<first>,<second>,,".
  const auto tail_pos = csv.str().find("\n400,");
  REQUIRE(tail_pos != std::string::npos);
  const std::string tail = csv.str().substr(tail_pos + 1);
  CHECK(tail.substr(tail.size() - 3) == ",,\n");
}

}  // TEST_SUITE
