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

#include "ibmfg/equilibrium.h"

#include <fmt/format.h>

#include "ibmfg/error.h"

namespace ibmfg {

namespace {

void require_size(const Eigen::VectorXd& v, Eigen::Index n, const char* name) {
  if (v.size() != n) {
    throw Error(ErrorCode::kDimensionMismatch,
                fmt::format("{} has size {}, expected {}", name, v.size(), n));
  }
}

void require_square(const Eigen::MatrixXd& m, Eigen::Index n,
                    const char* name) {
  if (m.rows() != n || m.cols() != n) {
    throw Error(ErrorCode::kDimensionMismatch,
                fmt::format("{} is {}x{}, expected {}x{}", name, m.rows(),
                            m.cols(), n, n));
  }
}

int require_finite_n(const ModelParams& params, Eigen::Index size) {
  const int n = params.player_count();
  if (size != n) {
    throw Error(ErrorCode::kDimensionMismatch,
                fmt::format("state has {} entries but n = {}", size, n));
  }
  return n;
}

}  // namespace

double FeedbackGain::at(double t) const {
  return interpolate(grid, psi, t);
}

double gain_factor(double phi, const ModelParams& params, double singular_tol) {
  const double m = params.one_minus_inv_n();
  const double denom = 1.0 + m * m / params.intensity() * phi;
  if (!(denom > singular_tol)) {
    throw Error(ErrorCode::kSingularity,
                fmt::format("gain denominator {} at phi = {}", denom, phi));
  }
  return (params.incentive() + m * phi) / denom;
}

FeedbackGain gain_from_phi(const OdeSolution& phi, const ModelParams& params,
                           double singular_tol) {
  const bool limit = params.is_limit();
  if ((limit && phi.kind != OdeKind::kPhiLimit) ||
      (!limit && phi.kind != OdeKind::kPhiFinite)) {
    throw Error(ErrorCode::kBadN,
                fmt::format("phi solution of kind {} does not match n = {}",
                            to_string(phi.kind),
                            params.n_players().to_string()));
  }
  std::vector<double> psi(phi.values.size());
  for (std::size_t i = 0; i < psi.size(); ++i) {
    try {
      psi[i] = gain_factor(phi.values[i], params, singular_tol);
    } catch (const Error& e) {
      throw Error(e.code(), e.what(), phi.grid[i]);
    }
  }
  return FeedbackGain{phi.grid, std::move(psi),
                      limit ? GainMode::kLimit : GainMode::kFiniteN};
}

FeedbackGain equilibrium_gain(const ModelParams& params, const TimeGrid& grid) {
  return gain_from_phi(solve_phi(params, grid), params);
}

double hamiltonian(double /*t*/, const Eigen::VectorXd& x,
                   const Eigen::VectorXd& gamma, const Eigen::VectorXd& y,
                   const Eigen::MatrixXd& q, const Eigen::MatrixXd& r, int i,
                   const ModelParams& params) {
  const int n = require_finite_n(params, x.size());
  require_size(gamma, n, "gamma");
  require_size(y, n, "y");
  require_square(q, n, "q");
  require_square(r, n, "r");
  if (i < 0 || i >= n) {
    throw Error(ErrorCode::kDimensionMismatch,
                fmt::format("player index {} outside [0, {})", i, n));
  }
  const double lambda = params.intensity();
  const double xbar = x.mean();
  const double d = xbar - x(i);
  const double g = gamma(i);
  double value = lambda * (0.5 * g * g - params.incentive() * d * g +
                           0.5 * params.running_penalty() * d * d);
  for (int k = 0; k < n; ++k) {
    value += (params.mean_reversion() * (xbar - x(k)) + lambda * gamma(k)) * y(k);
  }
  value += params.volatility() * q.diagonal().sum();
  value += gamma.dot(r.diagonal());
  return value;
}

double best_response_pointwise(double xbar_minus_xi, double y_ii, double r_iii,
                               const ModelParams& params) {
  return params.incentive() * xbar_minus_xi - y_ii -
         r_iii / params.intensity();
}

AdjointState adjoint_ansatz(const Eigen::VectorXd& x, double phi_t,
                            const Eigen::VectorXd& gamma, int i,
                            const ModelParams& params, double t) {
  const int n = require_finite_n(params, x.size());
  require_size(gamma, n, "gamma");
  if (i < 0 || i >= n) {
    throw Error(ErrorCode::kDimensionMismatch,
                fmt::format("player index {} outside [0, {})", i, n));
  }
  const double inv_n = 1.0 / n;
  const double xbar = x.mean();
  // weight(k) = 1/n - delta_ik
  Eigen::VectorXd weight = Eigen::VectorXd::Constant(n, inv_n);
  weight(i) -= 1.0;

  AdjointState state{Eigen::MatrixXd(n, n), Eigen::MatrixXd(n, n),
                     Eigen::MatrixXd(n, n), i, t};
  for (int j = 0; j < n; ++j) {
    for (int k = 0; k < n; ++k) {
      const double w = (j == k ? inv_n - 1.0 : inv_n);
      state.Y(j, k) = w * (xbar - x(j)) * phi_t;
    }
  }
  const Eigen::MatrixXd outer = weight * weight.transpose() * phi_t;
  state.Q = params.volatility() * outer;
  state.R = outer * gamma.asDiagonal();
  return state;
}

Eigen::VectorXd equilibrium_controls(const Eigen::VectorXd& x, double psi) {
  return psi * (Eigen::VectorXd::Constant(x.size(), x.mean()) - x);
}

}  // namespace ibmfg
