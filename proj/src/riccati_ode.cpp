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

#include "ibmfg/riccati_ode.h"

#include <cmath>
#include <fmt/format.h>
#include <ostream>

#include "ibmfg/csv.h"
#include "ibmfg/error.h"

namespace ibmfg {

namespace {

// Classical RK4 marched from t = T down to t = 0 (time reversal tau = T - t).
// The running value is kept with a compensation term so that rounding does
// not swamp the O(dt^4) truncation error on fine grids.
template <typename Rhs>
std::vector<double> integrate_backward(const Rhs& rhs, double terminal,
                                       const TimeGrid& grid,
                                       const OdeOptions& options) {
  const std::size_t steps = grid.steps();
  std::vector<double> values(grid.size());
  values[steps] = terminal;
  double y = terminal;
  double carry = 0.0;
  for (std::size_t i = steps; i > 0; --i) {
    const double h = grid[i] - grid[i - 1];
    const double t = grid[i];
    const double k1 = rhs(y, t);
    const double k2 = rhs(y - 0.5 * h * k1, t - 0.5 * h);
    const double k3 = rhs(y - 0.5 * h * k2, t - 0.5 * h);
    const double k4 = rhs(y - h * k3, t - h);
    const double increment = -h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    // Kahan update of y += increment.
    const double corrected = increment - carry;
    const double next = y + corrected;
    carry = (next - y) - corrected;
    y = next;
    if (!std::isfinite(y) || std::abs(y) > options.phi_cap) {
      throw Error(ErrorCode::kBlowup,
                  fmt::format("|value| exceeded {} at t = {}", options.phi_cap,
                              grid[i - 1]),
                  grid[i - 1]);
    }
    values[i - 1] = y;
  }
  return values;
}

}  // namespace

std::string_view to_string(OdeKind kind) {
  switch (kind) {
    case OdeKind::kPhiFinite: return "PHI_N";
    case OdeKind::kPhiLimit: return "PHI_LIMIT";
    case OdeKind::kPsiDirect: return "PSI_DIRECT";
  }
  return "UNKNOWN";
}

RiccatiCoefficients riccati_coefficients(const ModelParams& params) {
  const double m = params.one_minus_inv_n();
  const double lambda = params.intensity();
  const double a = params.mean_reversion();
  const double theta = params.incentive();
  const double eps = params.running_penalty();
  return RiccatiCoefficients{
      .k = m * m / lambda,
      .A = (lambda + 2.0 * a * m / lambda) * m,
      .B = lambda * theta * (1.0 + m) - eps * m * m + 2.0 * a,
      .C = lambda * (theta * theta - eps),
  };
}

double phi_rhs(double phi, const ModelParams& params, double singular_tol) {
  const auto [k, A, B, C] = riccati_coefficients(params);
  const double denom = 1.0 + k * phi;
  if (!(denom > singular_tol)) {
    throw Error(ErrorCode::kSingularity,
                fmt::format("1 + k*phi = {} left the domain (phi = {})", denom,
                            phi));
  }
  return ((A * phi + B) * phi + C) / denom;
}

OdeSolution solve_phi(const ModelParams& params, const TimeGrid& grid,
                      const OdeOptions& options) {
  if (grid.horizon() != params.horizon()) {
    throw Error(ErrorCode::kGridMismatch,
                fmt::format("grid horizon {} != T = {}", grid.horizon(),
                            params.horizon()));
  }
  const auto coeffs = riccati_coefficients(params);
  auto rhs = [&](double phi, double t) {
    try {
      return phi_rhs(phi, params, options.singular_tol);
    } catch (const Error& e) {
      throw Error(ErrorCode::kSingularity,
                  fmt::format("phi left D_k near t = {}: {}", t, e.what()), t);
    }
  };
  auto values =
      integrate_backward(rhs, params.terminal_penalty(), grid, options);
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!(1.0 + coeffs.k * values[i] > options.singular_tol)) {
      throw Error(ErrorCode::kSingularity,
                  fmt::format("1 + k*phi <= {} at t = {}", options.singular_tol,
                              grid[i]),
                  grid[i]);
    }
  }
  return OdeSolution{
      .grid = grid,
      .values = std::move(values),
      .kind = params.is_limit() ? OdeKind::kPhiLimit : OdeKind::kPhiFinite,
      .params_hash = params.fingerprint(),
  };
}

double psi_terminal(const ModelParams& params) {
  const double m = params.one_minus_inv_n();
  const double k = m * m / params.intensity();
  const double c = params.terminal_penalty();
  return (params.incentive() + m * c) / (1.0 + k * c);
}

double psi_rhs(double psi, const ModelParams& params, double singular_tol) {
  if (params.is_limit()) {
    throw Error(ErrorCode::kBadN, "direct psi ODE is for finite n");
  }
  const auto [k, A, B, C] = riccati_coefficients(params);
  const double m = params.one_minus_inv_n();
  const double lambda = params.intensity();
  const double theta = params.incentive();
  const double lead = 1.0 - m * theta / lambda;
  const double lead_sq = lead * lead;
  if (!(lead_sq > singular_tol)) {
    throw Error(ErrorCode::kSingularity,
                fmt::format("(1 - m theta / lambda)^2 = {} vanishes", lead_sq));
  }
  const double s = 1.0 - m / lambda * psi;
  if (!(std::abs(s) > singular_tol)) {
    throw Error(ErrorCode::kSingularity,
                fmt::format("1 - (m/lambda) psi = {} vanishes (psi = {})", s,
                            psi));
  }
  const double d = psi - theta;
  return (A / m * s * d * d + B * s * s * d + m * C * s * s * s) / lead_sq;
}

OdeSolution solve_psi_direct(const ModelParams& params, const TimeGrid& grid,
                             const OdeOptions& options) {
  if (params.is_limit()) {
    throw Error(ErrorCode::kBadN, "direct psi ODE is for finite n");
  }
  if (grid.horizon() != params.horizon()) {
    throw Error(ErrorCode::kGridMismatch,
                fmt::format("grid horizon {} != T = {}", grid.horizon(),
                            params.horizon()));
  }
  auto rhs = [&](double psi, double t) {
    try {
      return psi_rhs(psi, params, options.singular_tol);
    } catch (const Error& e) {
      throw Error(ErrorCode::kSingularity,
                  fmt::format("near t = {}: {}", t, e.what()), t);
    }
  };
  return OdeSolution{
      .grid = grid,
      .values = integrate_backward(rhs, psi_terminal(params), grid, options),
      .kind = OdeKind::kPsiDirect,
      .params_hash = params.fingerprint(),
  };
}

double interpolate(const OdeSolution& sol, double t) {
  return interpolate(sol.grid, sol.values, t);
}

double interpolate(const TimeGrid& grid, const std::vector<double>& values,
                   double t) {
  const double T = grid.horizon();
  const double slack = 1e-12 * T;
  if (!(t >= -slack && t <= T + slack)) {
    throw Error(ErrorCode::kOutOfRange,
                fmt::format("t = {} outside [0, {}]", t, T));
  }
  if (t <= 0.0) return values.front();
  if (t >= T) return values.back();
  auto i = static_cast<std::size_t>(t / grid.dt());
  if (i >= grid.steps()) i = grid.steps() - 1;
  // t / dt can round across a node; settle on the bracketing cell.
  while (i > 0 && grid[i] > t) --i;
  while (i + 1 < grid.steps() && grid[i + 1] <= t) ++i;
  const double t0 = grid[i];
  if (t == t0) return values[i];
  const double w = (t - t0) / (grid[i + 1] - t0);
  return values[i] + w * (values[i + 1] - values[i]);
}

void write_curve_csv(std::ostream& out, const TimeGrid& grid,
                     const std::vector<double>& values,
                     std::string_view column) {
  out << "t," << column << '\n';
  for (std::size_t i = 0; i < grid.size(); ++i) {
    out << csv_number(grid[i]) << ',' << csv_number(values[i]) << '\n';
  }
}

}  // namespace ibmfg
