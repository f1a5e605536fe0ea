// SPDX-License-Identifier: Apache-2.0
//
// rsrelay - link-level simulation and power allocation for rate-splitting
// multiple access in decode-and-forward relay networks
// Copyright (C) 2026 the rsrelay contributors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#ifndef rsrelay_specfun_H
#define rsrelay_specfun_H

#include <utility>
#include <vector>

namespace rsrelay
{

// Shape/scale parameterization of a Gamma distribution, mean = shape * scale.
struct GammaParams
{
    double shape; // > 0
    double scale; // > 0

    GammaParams(double shape_in, double scale_in);

    double mean() const { return shape * scale; }
    double variance() const { return shape * scale * scale; }
};

// Euler-Mascheroni constant to full double precision
double euler_gamma();

// Digamma function psi(x) = d/dx ln Gamma(x) for x > 0.
// Upward recurrence into the asymptotic region, then the Bernoulli series;
// absolute error below 1e-12 over (0, 1e6].
// Throws std::domain_error for x <= 0.
double digamma(double x);

// Generalized exponential integral E_m(x) = integral_1^inf exp(-x*t) / t^m dt.
// E_1 uses the alternating power series for x <= 1 and a modified Lentz
// continued fraction for x > 1; higher orders follow either the stable upward
// recurrence m*E_{m+1}(x) = exp(-x) - x*E_m(x) (x <= 1) or a direct continued
// fraction evaluation (x > 1). Relative error below 1e-10.
// x == 0 is admitted for m >= 2 where E_m(0) = 1/(m-1).
// Throws std::domain_error for m < 1, x < 0, or (m == 1, x <= 0).
double exp_integral_en(unsigned int m, double x);

// Partial sum  sum_{m=1}^{count} E_m(x)  for count >= 1, x > 0
double en_partial_sum(unsigned int count, double x);

// Scaled partial sum  exp(x) * sum_{m=1}^{count} E_m(x); never overflows and
// stays accurate for arguments where exp(-x) underflows
double en_partial_sum_scaled(unsigned int count, double x);

// High-power closed form of the scaled partial sum,
//   exp(x) * sum_{m=1}^{count} E_m(x)  ~  ln(count-1) + 1/(2(count-1)) - ln(x)
// valid as x -> 0. Throws std::domain_error for count < 2 or x <= 0.
double en_sum_high_power_approx(unsigned int count, double x);

// Matches the first two moments of a weighted sum of independent Gamma
// variables (weights scale each component's scale parameter) by a single
// Gamma distribution:
//   shape = (sum D_i w_i s_i)^2 / sum D_i (w_i s_i)^2
//   scale =  sum D_i (w_i s_i)^2 / sum D_i w_i s_i
// Throws std::invalid_argument on an empty list or a non-positive weight.
GammaParams moment_match(const std::vector<std::pair<GammaParams, double>> &components);

} // namespace rsrelay

#endif
