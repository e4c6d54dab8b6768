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

#include <iosfwd>
#include <vector>

#include "ibmfg/model_params.h"
#include "ibmfg/riccati_ode.h"

namespace ibmfg {

// Constants of the transformed equation w dw/dxi = w + K xi, where
//   w(t)  = (phi_t + 1/k) exp(-(A/k) t)
//   xi(t) = (2/k - B/A) exp(-(A/k) t)
//   K     = -(C k^2 - B k + A) A / (2A - kB)^2.
struct TransformConstants {
  double k;
  double A;
  double B;
  double C;
  double K;
};

// DEGENERATE_K when |2A - kB| < 1e-12.
TransformConstants transform_constants(const ModelParams& params);

double omega(double phi, double t, const TransformConstants& tc);
double xi(double t, const TransformConstants& tc);

struct TransformResidual {
  std::vector<double> t;  // interior grid points
  std::vector<double> omega;
  std::vector<double> xi;
  std::vector<double> residual;  // relative, per point
  double max_residual;
};

// Checks the transformed identity on a solved phi, with dw/dxi from centered
// differences of w and xi in t. Residuals are relative to 1 + |w| + |K xi|.
TransformResidual transform_residual_profile(const OdeSolution& phi,
                                             const ModelParams& params);
double transform_residual(const OdeSolution& phi, const ModelParams& params);

struct DomainCheck {
  bool inside;
  double margin;  // min over the grid of 1 + k phi
};

DomainCheck domain_check(const OdeSolution& phi, const ModelParams& params,
                         double singular_tol = kSingularTol);

// `t,omega,xi,residual`
void write_residual_csv(std::ostream& out, const TransformResidual& r);

}  // namespace ibmfg
