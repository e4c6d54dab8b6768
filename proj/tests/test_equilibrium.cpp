/*
   Copyright 2026 The ibmfg Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <limits>
#include <random>

#include "fixtures.h"
#include "ibmfg/equilibrium.h"
#include "ibmfg/error.h"
#include "ibmfg/riccati_ode.h"
#include "oracles.h"

using namespace ibmfg;

namespace {

ModelParams unit_lambda(int n) {
  return testing::with(testing::fig1_raw(n), [](RawParams& r) {
    r.intensity = 1.0;
    r.incentive = 1.0;
    r.running_penalty = 10.0;
  });
}

struct Instance {
  Eigen::VectorXd x, gamma, y;
  Eigen::MatrixXd q, r;
  int i;
};

Instance random_instance(std::mt19937_64& rng, int n) {
  std::normal_distribution<double> z(0.0, 1.0);
  auto vec = [&](double s) {
    Eigen::VectorXd v(n);
    for (int k = 0; k < n; ++k) v(k) = s * z(rng);
    return v;
  };
  auto mat = [&](double s) {
    Eigen::MatrixXd m(n, n);
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) m(a, b) = s * z(rng);
    return m;
  };
  return Instance{vec(1.0), vec(1.0), vec(0.5), mat(0.5), mat(0.5),
                  std::uniform_int_distribution<int>(0, n - 1)(rng)};
}

// Brute-force minimizer of the Hamiltonian over gamma_i on a uniform grid.
double grid_argmin(Instance inst, const ModelParams& p, double lo, double hi,
                   double step) {
  double best = std::numeric_limits<double>::infinity();
  double arg = lo;
  const auto count = static_cast<long>(std::llround((hi - lo) / step));
  for (long j = 0; j <= count; ++j) {
    inst.gamma(inst.i) = lo + static_cast<double>(j) * step;
    const double h =
        hamiltonian(0.0, inst.x, inst.gamma, inst.y, inst.q, inst.r, inst.i, p);
    if (h < best) {
      best = h;
      arg = inst.gamma(inst.i);
    }
  }
  return arg;
}

}  // namespace

TEST_CASE("gain_from_phi") {
  const TimeGrid grid(2.0, 200);
  SUBCASE("c = 0 gives psi(T) = theta") {
    const auto p = testing::fig1(10);
    CHECK(gain_from_phi(solve_phi(p, grid), p).psi.back() == 1.0);
  }
  SUBCASE("phi identically zero gives psi identically theta") {
    const auto p = testing::with(testing::fig1_raw(10), [](RawParams& r) {
      r.running_penalty = 1.0;
    });
    const auto gain = gain_from_phi(solve_phi(p, grid), p);
    for (double v : gain.psi) CHECK(std::abs(v - 1.0) <= 1e-12);
    CHECK(gain.mode == GainMode::kFiniteN);
  }
  SUBCASE("limit formula at phi_T = c = 1") {
    const auto p = limit_of(testing::sweep(10, 1.0, 0.7));
    const auto gain = gain_from_phi(solve_phi(p, grid), p);
    CHECK(gain.mode == GainMode::kLimit);
    CHECK(gain.psi.back() == doctest::Approx(2.0 / (1.0 + 1.0 / 0.7)).epsilon(1e-15));
    CHECK(gain.psi.back() == doctest::Approx(0.82353).epsilon(1e-5));
  }
  SUBCASE("kind must match n") {
    const auto finite = testing::fig1(10);
    const auto sol = solve_phi(finite, grid);
    CHECK_THROWS_AS(gain_from_phi(sol, limit_of(finite)), Error);
  }
  SUBCASE("denominator guard") {
    const double k = riccati_coefficients(testing::fig1(10)).k;
    try {
      gain_factor(-1.0 / k, testing::fig1(10));
      FAIL("expected SINGULARITY");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::kSingularity);
    }
  }
}

TEST_CASE("hamiltonian values") {
  const auto p = unit_lambda(5);
  const int n = 5;
  const Eigen::VectorXd zero = Eigen::VectorXd::Zero(n);
  const Eigen::MatrixXd zm = Eigen::MatrixXd::Zero(n, n);
  CHECK(hamiltonian(0.0, zero, zero, zero, zm, zm, 0, p) == 0.0);

  // xbar - x_0 = 1 with mean 0.
  Eigen::VectorXd x(n);
  x << -1.0, 0.25, 0.25, 0.25, 0.25;
  Eigen::VectorXd gamma = zero;
  gamma(0) = 1.0;
  CHECK(hamiltonian(0.0, x, gamma, zero, zm, zm, 0, p) ==
        doctest::Approx(4.5).epsilon(1e-14));

  CHECK_THROWS_AS(hamiltonian(0.0, Eigen::VectorXd::Zero(4), zero, zero, zm, zm, 0, p),
                  Error);
  CHECK_THROWS_AS(hamiltonian(0.0, zero, zero, zero, Eigen::MatrixXd::Zero(4, 4), zm, 0, p),
                  Error);
  CHECK_THROWS_AS(hamiltonian(0.0, zero, zero, zero, zm, zm, 5, p), Error);
}

TEST_CASE("hamiltonian is convex in own control with curvature lambda") {
  std::mt19937_64 rng(11);
  const auto p = testing::fig1(5);
  for (int trial = 0; trial < 50; ++trial) {
    auto inst = random_instance(rng, 5);
    const double g = inst.gamma(inst.i);
    const double h = 0.25;
    auto H = [&](double gi) {
      inst.gamma(inst.i) = gi;
      return hamiltonian(0.0, inst.x, inst.gamma, inst.y, inst.q, inst.r, inst.i, p);
    };
    const double second = (H(g + h) - 2.0 * H(g) + H(g - h)) / (h * h);
    CHECK(second == doctest::Approx(p.intensity()).epsilon(1e-8));
  }
}

TEST_CASE("best_response_pointwise") {
  const auto p1 = unit_lambda(5);
  CHECK(best_response_pointwise(1.0, 0.0, 0.0, p1) == 1.0);
  CHECK(best_response_pointwise(0.0, 0.0, 0.0, p1) == 0.0);
  const auto p = testing::fig1(10);  // lambda = 0.7, theta = 1
  CHECK(best_response_pointwise(2.0, 0.5, 0.7, p) == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("grid argmin of the hamiltonian matches the first-order condition") {
  std::mt19937_64 rng(2024);
  const auto p = testing::fig1(5);
  for (int trial = 0; trial < 100; ++trial) {
    const auto inst = random_instance(rng, 5);
    const double d = inst.x.mean() - inst.x(inst.i);
    const double closed = best_response_pointwise(d, inst.y(inst.i),
                                                  inst.r(inst.i, inst.i), p);
    REQUIRE(std::abs(closed) < 10.0);
    CHECK(std::abs(grid_argmin(inst, p, -10.0, 10.0, 1e-3) - closed) <= 1e-3);
  }
}

TEST_CASE("adjoint ansatz") {
  const auto p = testing::sweep(4, 2.0, 0.7);
  Eigen::VectorXd x(4);
  x << 0.3, -1.2, 0.5, 2.0;
  const Eigen::VectorXd gamma = Eigen::VectorXd::LinSpaced(4, -1.0, 1.0);

  SUBCASE("phi = 0 gives zero adjoints") {
    const auto s = adjoint_ansatz(x, 0.0, gamma, 1, p);
    CHECK(s.Y.isZero(0.0));
    CHECK(s.Q.isZero(0.0));
    CHECK(s.R.isZero(0.0));
  }
  SUBCASE("player at the mean has zero Y row") {
    Eigen::VectorXd at_mean = x;
    at_mean(2) = 0.0;
    at_mean(2) = (at_mean.sum()) / 3.0;  // x_2 equals the mean of all four
    const auto s = adjoint_ansatz(at_mean, 1.3, gamma, 2, p);
    CHECK(s.Y.row(2).cwiseAbs().maxCoeff() <= 1e-15);
  }
  SUBCASE("at T with phi_T = c, Y equals the gradient of the terminal cost") {
    const double c = p.terminal_penalty();
    for (int i = 0; i < 4; ++i) {
      const auto s = adjoint_ansatz(x, c, gamma, i, p);
      for (int k = 0; k < 4; ++k) {
        auto g = [&](double xk) {
          Eigen::VectorXd z = x;
          z(k) = xk;
          const double d = z.mean() - z(i);
          return 0.5 * c * d * d;
        };
        CHECK(s.Y(i, k) == doctest::Approx(oracle::derivative(g, x(k))).epsilon(1e-7));
      }
    }
  }
  SUBCASE("Q and R entries") {
    const auto s = adjoint_ansatz(x, 1.5, gamma, 0, p);
    const double w0 = 0.25 - 1.0, w = 0.25;
    CHECK(s.Q(0, 0) == doctest::Approx(p.volatility() * w0 * w0 * 1.5));
    CHECK(s.Q(1, 2) == doctest::Approx(p.volatility() * w * w * 1.5));
    CHECK(s.R(0, 3) == doctest::Approx(w0 * w * 1.5 * gamma(3)));
    CHECK(s.R(2, 2) == doctest::Approx(w * w * 1.5 * gamma(2)));
  }
  SUBCASE("dimension errors") {
    CHECK_THROWS_AS(adjoint_ansatz(Eigen::VectorXd::Zero(3), 1.0, gamma, 0, p), Error);
    CHECK_THROWS_AS(adjoint_ansatz(x, 1.0, Eigen::VectorXd::Zero(2), 0, p), Error);
  }
}

TEST_CASE("ansatz closes the best-response fixed point") {
  // Plugging the ansatz adjoints into the first-order condition at the
  // equilibrium control reproduces psi (xbar - x_i).
  std::mt19937_64 rng(5);
  std::normal_distribution<double> z(0.0, 1.0);
  for (int n : {2, 5, 10, 37}) {
    for (double c : {0.0, 1.0}) {
      const auto p = testing::sweep(n, c, 0.7);
      for (double phi : {0.0, 0.4, 2.5}) {
        const double psi = gain_factor(phi, p);
        Eigen::VectorXd x(n);
        for (int k = 0; k < n; ++k) x(k) = z(rng);
        const Eigen::VectorXd gamma = equilibrium_controls(x, psi);
        for (int i = 0; i < n; ++i) {
          const auto s = adjoint_ansatz(x, phi, gamma, i, p);
          const double d = x.mean() - x(i);
          const double br = best_response_pointwise(d, s.Y(i, i), s.R(i, i), p);
          CHECK(std::abs(br - gamma(i)) <= 1e-12 * (1.0 + std::abs(gamma(i))));
        }
      }
    }
  }
}

TEST_CASE("equilibrium controls sum to zero") {
  std::mt19937_64 rng(99);
  std::normal_distribution<double> z(0.0, 3.0);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 2 + trial % 30;
    Eigen::VectorXd x(n);
    for (int k = 0; k < n; ++k) x(k) = z(rng);
    const auto gamma = equilibrium_controls(x, 0.1 + 0.01 * trial);
    CHECK(std::abs(gamma.sum()) <= 1e-12 * (1.0 + gamma.cwiseAbs().sum()));
  }
}

TEST_CASE("FeedbackGain::at interpolates psi") {
  const auto p = testing::fig1(10);
  const auto gain = equilibrium_gain(p, TimeGrid(2.0, 100));
  CHECK(gain.at(0.0) == gain.psi.front());
  CHECK(gain.at(2.0) == gain.psi.back());
  CHECK(gain.at(0.03) == doctest::Approx(0.5 * (gain.psi[1] + gain.psi[2])));
}
