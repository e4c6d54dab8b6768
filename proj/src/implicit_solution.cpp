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

#include "ibmfg/implicit_solution.h"

#include <algorithm>
#include <cmath>
#include <fmt/format.h>
#include <limits>
#include <ostream>

#include "ibmfg/csv.h"
#include "ibmfg/error.h"

namespace ibmfg {

TransformConstants transform_constants(const ModelParams& params) {
  const auto [k, A, B, C] = riccati_coefficients(params);
  const double gap = 2.0 * A - k * B;
  if (std::abs(gap) < 1e-12) {
    throw Error(ErrorCode::kDegenerateK,
                fmt::format("2A - kB = {} vanishes", gap));
  }
  const double K = -(C * k * k - B * k + A) * A / (gap * gap);
  return TransformConstants{k, A, B, C, K};
}

double omega(double phi, double t, const TransformConstants& tc) {
  return (phi + 1.0 / tc.k) * std::exp(-tc.A / tc.k * t);
}

double xi(double t, const TransformConstants& tc) {
  return (2.0 / tc.k - tc.B / tc.A) * std::exp(-tc.A / tc.k * t);
}

TransformResidual transform_residual_profile(const OdeSolution& phi,
                                             const ModelParams& params) {
  const auto tc = transform_constants(params);
  const TimeGrid& grid = phi.grid;
  const std::size_t size = grid.size();
  std::vector<double> w(size), z(size);
  for (std::size_t i = 0; i < size; ++i) {
    w[i] = omega(phi.values[i], grid[i], tc);
    z[i] = xi(grid[i], tc);
  }
  TransformResidual out;
  out.max_residual = 0.0;
  for (std::size_t i = 1; i + 1 < size; ++i) {
    const double span = grid[i + 1] - grid[i - 1];
    const double dw = (w[i + 1] - w[i - 1]) / span;
    const double dz = (z[i + 1] - z[i - 1]) / span;
    const double dw_dxi = dw / dz;
    const double r = std::abs(w[i] * dw_dxi - w[i] - tc.K * z[i]) /
                     (1.0 + std::abs(w[i]) + std::abs(tc.K * z[i]));
    out.t.push_back(grid[i]);
    out.omega.push_back(w[i]);
    out.xi.push_back(z[i]);
    out.residual.push_back(r);
    out.max_residual = std::max(out.max_residual, r);
  }
  return out;
}

double transform_residual(const OdeSolution& phi, const ModelParams& params) {
  return transform_residual_profile(phi, params).max_residual;
}

DomainCheck domain_check(const OdeSolution& phi, const ModelParams& params,
                         double singular_tol) {
  const double k = riccati_coefficients(params).k;
  double margin = std::numeric_limits<double>::infinity();
  for (double v : phi.values) margin = std::min(margin, 1.0 + k * v);
  return DomainCheck{margin > singular_tol, margin};
}

void write_residual_csv(std::ostream& out, const TransformResidual& r) {
  out << "t,omega,xi,residual\n";
  for (std::size_t i = 0; i < r.t.size(); ++i) {
    out << csv_number(r.t[i]) << ',' << csv_number(r.omega[i]) << ','
        << csv_number(r.xi[i]) << ',' << csv_number(r.residual[i]) << '\n';
  }
}

}  // namespace ibmfg
