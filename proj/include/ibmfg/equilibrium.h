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

#pragma once

#include <Eigen/Dense>
#include <iosfwd>
#include <vector>

#include "ibmfg/model_params.h"
#include "ibmfg/riccati_ode.h"
#include "ibmfg/time_grid.h"

namespace ibmfg {

enum class GainMode { kFiniteN, kLimit };

// psi_t on a grid: the equilibrium jump is psi_t (xbar_{t-} - x^i_{t-}).
struct FeedbackGain {
  TimeGrid grid;
  std::vector<double> psi;
  GainMode mode;

  // Piecewise-linear in t.
  double at(double t) const;
};

// (theta + m phi) / (1 + (m^2/lambda) phi) with m = 1 - 1/n (m = 1 in the
// limit).
double gain_factor(double phi, const ModelParams& params,
                   double singular_tol = kSingularTol);

FeedbackGain gain_from_phi(const OdeSolution& phi, const ModelParams& params,
                           double singular_tol = kSingularTol);

// Convenience: solve_phi followed by gain_from_phi.
FeedbackGain equilibrium_gain(const ModelParams& params, const TimeGrid& grid);

// Player i's Hamiltonian
//   lambda f(xbar, x_i, gamma_i) + sum_k [a (xbar - x_k) + lambda gamma_k] y_k
//   + sigma sum_k q(k,k) + sum_k gamma_k r(k,k).
// `y`, `q`, `r` are player i's adjoint slices. Time does not enter.
double hamiltonian(double t, const Eigen::VectorXd& x,
                   const Eigen::VectorXd& gamma, const Eigen::VectorXd& y,
                   const Eigen::MatrixXd& q, const Eigen::MatrixXd& r, int i,
                   const ModelParams& params);

// Minimizer of the Hamiltonian in gamma_i: theta d - y_ii - r_iii / lambda,
// where d = xbar - x_i.
double best_response_pointwise(double xbar_minus_xi, double y_ii, double r_iii,
                               const ModelParams& params);

// Adjoint processes under the linear ansatz, at one instant.
struct AdjointState {
  Eigen::MatrixXd Y;  // Y(j,k) = (1/n - delta_jk)(xbar - x_j) phi, all j.
  Eigen::MatrixXd Q;  // Q(k,j) = sigma (1/n - delta_ik)(1/n - delta_ij) phi.
  Eigen::MatrixXd R;  // R(k,j) = (1/n - delta_ik)(1/n - delta_ij) phi gamma_j.
  int player;
  double time;
};

AdjointState adjoint_ansatz(const Eigen::VectorXd& x, double phi_t,
                            const Eigen::VectorXd& gamma, int i,
                            const ModelParams& params, double t = 0.0);

// gamma_i = psi (xbar - x_i) for every player.
Eigen::VectorXd equilibrium_controls(const Eigen::VectorXd& x, double psi);

}  // namespace ibmfg
