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

#include <cstdint>
#include <iosfwd>
#include <string_view>
#include <vector>

#include "ibmfg/model_params.h"
#include "ibmfg/time_grid.h"

namespace ibmfg {

inline constexpr double kSingularTol = 1e-8;
inline constexpr double kPhiCap = 1e8;

// Coefficients of (1 + k phi) phi' = A phi^2 + B phi + C. With m = 1 - 1/n:
//   k = m^2 / lambda
//   A = (lambda + 2 a m / lambda) m
//   B = lambda theta (1 + m) - eps m^2 + 2 a
//   C = lambda (theta^2 - eps)
// At n = inf (m = 1) these reduce to the mean-field Cauchy problem.
struct RiccatiCoefficients {
  double k;
  double A;
  double B;
  double C;
};

RiccatiCoefficients riccati_coefficients(const ModelParams& params);

enum class OdeKind { kPhiFinite, kPhiLimit, kPsiDirect };

std::string_view to_string(OdeKind kind);

struct OdeOptions {
  double singular_tol = kSingularTol;
  double phi_cap = kPhiCap;
};

// Values of a backward-integrated scalar ODE on a grid. values.back() is the
// terminal condition, assigned exactly.
struct OdeSolution {
  TimeGrid grid;
  std::vector<double> values;
  OdeKind kind;
  std::uint64_t params_hash;
};

// d phi / dt = (A phi^2 + B phi + C) / (1 + k phi). SINGULARITY when
// 1 + k phi <= singular_tol.
double phi_rhs(double phi, const ModelParams& params,
               double singular_tol = kSingularTol);

// Backward RK4 from phi(T) = c.
OdeSolution solve_phi(const ModelParams& params, const TimeGrid& grid,
                      const OdeOptions& options = {});

// Terminal value of the gain, (theta + m c) / (1 + k c).
double psi_terminal(const ModelParams& params);

// Right-hand side of the ODE satisfied by the gain psi itself:
//   (1 - m theta/lambda)^2 psi' = (A/m) s (psi - theta)^2
//                                 + B s^2 (psi - theta) + m C s^3,
// with s = 1 - (m/lambda) psi. Finite n only.
double psi_rhs(double psi, const ModelParams& params,
               double singular_tol = kSingularTol);

// Backward RK4 of psi_rhs from psi_terminal. Only used to cross-check the
// gain obtained from phi.
OdeSolution solve_psi_direct(const ModelParams& params, const TimeGrid& grid,
                             const OdeOptions& options = {});

// Piecewise-linear interpolation, exact at grid points. OUT_OF_RANGE outside
// [0, T].
double interpolate(const OdeSolution& sol, double t);
double interpolate(const TimeGrid& grid, const std::vector<double>& values,
                   double t);

// `t,<column>` CSV with 17 significant digits.
void write_curve_csv(std::ostream& out, const TimeGrid& grid,
                     const std::vector<double>& values,
                     std::string_view column);

}  // namespace ibmfg
