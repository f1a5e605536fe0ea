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

#include "rsrelay/specfun.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace rsrelay
{

static constexpr double EULER = 0.57721566490153286060651209008240243;

double euler_gamma()
{
    return EULER;
}

GammaParams::GammaParams(double shape_in, double scale_in) : shape(shape_in), scale(scale_in)
{
    if (!(shape > 0.0) || !(scale > 0.0))
        throw std::domain_error("GammaParams: shape and scale must be positive");
}

double digamma(double x)
{
    if (!(x > 0.0))
        throw std::domain_error("digamma: argument must be positive, got " + std::to_string(x));

    // Shift the argument above 10 where the asymptotic expansion holds,
    // psi(x) = psi(x+1) - 1/x
    double acc = 0.0;
    while (x < 10.0)
    {
        acc -= 1.0 / x;
        x += 1.0;
    }

    // psi(x) ~ ln(x) - 1/(2x) - sum_k B_{2k} / (2k x^{2k})
    const double inv = 1.0 / x;
    const double inv2 = inv * inv;
    double series = inv2 * (1.0 / 12.0 -
                            inv2 * (1.0 / 120.0 -
                                    inv2 * (1.0 / 252.0 -
                                            inv2 * (1.0 / 240.0 -
                                                    inv2 * (1.0 / 132.0 -
                                                            inv2 * (691.0 / 32760.0 -
                                                                    inv2 * (1.0 / 12.0)))))));

    return acc + std::log(x) - 0.5 * inv - series;
}

// E_1 via the alternating series, x in (0, 1]
static double e1_series(double x)
{
    double sum = 0.0;
    double u = 1.0; // (-x)^k / k!
    for (int k = 1; k <= 60; ++k)
    {
        u *= -x / double(k);
        double term = u / double(k);
        sum -= term;
        if (std::fabs(term) < 1e-18 * (std::fabs(sum) + 1e-30))
            break;
    }
    return -EULER - std::log(x) + sum;
}

// Modified Lentz continued fraction for exp(x) * E_n(x), reliable for x > 1
static double en_cf_scaled(unsigned int n, double x)
{
    constexpr int max_iter = 500;
    constexpr double eps = 1e-16;
    constexpr double fpmin = 1e-300;

    double b = x + double(n);
    double c = 1.0 / fpmin;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i <= max_iter; ++i)
    {
        double a = -double(i) * (double(n) - 1.0 + double(i));
        b += 2.0;
        d = 1.0 / (a * d + b);
        c = b + a / c;
        double delta = c * d;
        h *= delta;
        if (std::fabs(delta - 1.0) <= eps)
            return h;
    }
    throw std::runtime_error("exp_integral_en: continued fraction failed to converge");
}

static void check_en_args(unsigned int m, double x)
{
    if (m < 1)
        throw std::domain_error("exp_integral_en: order must be >= 1");
    if (x < 0.0)
        throw std::domain_error("exp_integral_en: argument must be non-negative");
    if (x == 0.0 && m == 1)
        throw std::domain_error("exp_integral_en: E_1 diverges at x = 0");
}

double exp_integral_en(unsigned int m, double x)
{
    check_en_args(m, x);

    if (x == 0.0)
        return 1.0 / double(m - 1);

    if (x <= 1.0)
    {
        double e = e1_series(x);
        if (m == 1)
            return e;
        const double emx = std::exp(-x);
        for (unsigned int k = 1; k < m; ++k)
            e = (emx - x * e) / double(k);
        return e;
    }

    return std::exp(-x) * en_cf_scaled(m, x);
}

double en_partial_sum_scaled(unsigned int count, double x)
{
    if (count < 1)
        throw std::domain_error("en_partial_sum: count must be >= 1");
    if (!(x > 0.0))
        throw std::domain_error("en_partial_sum: argument must be positive");

    if (x <= 1.0)
    {
        // One series evaluation, then the scaled recurrence f_{m+1} = (1 - x f_m)/m,
        // contractive for every m >= x
        double f = std::exp(x) * e1_series(x);
        double acc = f;
        for (unsigned int k = 1; k < count; ++k)
        {
            f = (1.0 - x * f) / double(k);
            acc += f;
        }
        return acc;
    }

    // The upward recurrence amplifies errors while m < x, so evaluate those
    // orders with the continued fraction and recurse only beyond them
    unsigned int direct = count;
    if (double(count) > x)
        direct = (unsigned int)(std::ceil(x)) + 1u;
    if (direct > count)
        direct = count;

    double acc = 0.0;
    double f = 0.0;
    for (unsigned int m = 1; m <= direct; ++m)
    {
        f = en_cf_scaled(m, x);
        acc += f;
    }
    for (unsigned int k = direct; k < count; ++k)
    {
        f = (1.0 - x * f) / double(k);
        acc += f;
    }
    return acc;
}

double en_partial_sum(unsigned int count, double x)
{
    return std::exp(-x) * en_partial_sum_scaled(count, x);
}

double en_sum_high_power_approx(unsigned int count, double x)
{
    if (count < 2)
        throw std::domain_error("en_sum_high_power_approx: count must be >= 2");
    if (!(x > 0.0))
        throw std::domain_error("en_sum_high_power_approx: argument must be positive");

    const double n = double(count - 1);
    return std::log(n) + 0.5 / n - std::log(x);
}

GammaParams moment_match(const std::vector<std::pair<GammaParams, double>> &components)
{
    if (components.empty())
        throw std::invalid_argument("moment_match: component list is empty");

    double s1 = 0.0; // sum of means
    double s2 = 0.0; // sum of variances
    for (const auto &[params, weight] : components)
    {
        if (!(weight > 0.0))
            throw std::invalid_argument("moment_match: weights must be positive");
        const double scaled = weight * params.scale;
        s1 += params.shape * scaled;
        s2 += params.shape * scaled * scaled;
    }
    return GammaParams(s1 * s1 / s2, s2 / s1);
}

} // namespace rsrelay
