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

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <functional>
#include <random>
#include <vector>

using namespace rsrelay;

namespace
{

// Adaptive Simpson quadrature, used as an implementation-independent oracle
double simpson_step(const std::function<double(double)> &f, double a, double b, double fa,
                    double fb, double fm, double whole, double tol, int depth)
{
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    if (depth <= 0 || std::abs(left + right - whole) <= 15.0 * tol)
        return left + right + (left + right - whole) / 15.0;
    return simpson_step(f, a, m, fa, fm, flm, left, 0.5 * tol, depth - 1) +
           simpson_step(f, m, b, fm, fb, frm, right, 0.5 * tol, depth - 1);
}

double adaptive_simpson(const std::function<double(double)> &f, double a, double b, double tol)
{
    const double fa = f(a);
    const double fb = f(b);
    const double fm = f(0.5 * (a + b));
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return simpson_step(f, a, b, fa, fb, fm, whole, tol, 48);
}

// E_m(x) = exp(-x) * integral_0^1 s^(m-2) exp(-x (1/s - 1)) ds; the
// substitution keeps the integrand bounded by 1 so a fixed absolute
// tolerance gives a fixed relative accuracy after the exp(-x) factor
double en_quadrature(unsigned int m, double x)
{
    auto f = [&](double s) -> double {
        if (s <= 0.0)
            return 0.0;
        const double decay = -x * (1.0 / s - 1.0);
        if (decay < -700.0)
            return 0.0;
        return std::pow(s, double(m) - 2.0) * std::exp(decay);
    };
    return std::exp(-x) * adaptive_simpson(f, 0.0, 1.0, 1e-13);
}

// psi(x) by Richardson-extrapolated central differences of std::lgamma;
// shares no code with the series implementation under test
double digamma_reference(double x)
{
    const double h = 1e-4 * x;
    auto diff = [&](double hh) { return (std::lgamma(x + hh) - std::lgamma(x - hh)) / (2.0 * hh); };
    return (4.0 * diff(0.5 * h) - diff(h)) / 3.0;
}

} // namespace

TEST_CASE("euler gamma constant")
{
    REQUIRE(euler_gamma() == Catch::Approx(0.5772156649015329).epsilon(1e-15));
    REQUIRE(std::exp(-euler_gamma()) == Catch::Approx(0.5614594835668851).epsilon(1e-14));
}

TEST_CASE("digamma matches differentiated log-gamma")
{
    // log-spaced arguments skirting the root near 1.46 where relative
    // comparisons lose meaning
    std::vector<double> xs;
    for (int i = 0; i < 100; ++i)
        xs.push_back(0.05 * std::pow(1.25 / 0.05, i / 99.0));
    for (int i = 0; i < 150; ++i)
        xs.push_back(1.75 * std::pow(100.0 / 1.75, i / 149.0));

    for (double x : xs)
    {
        const double ref = digamma_reference(x);
        REQUIRE(digamma(x) == Catch::Approx(ref).epsilon(1e-10));
    }
}

TEST_CASE("digamma closed-form values")
{
    REQUIRE(digamma(1.0) == Catch::Approx(-euler_gamma()).epsilon(1e-14));
    REQUIRE(digamma(0.5) == Catch::Approx(-1.9635100260214235).epsilon(1e-14));
    // psi(n) = -gamma + sum_{k<n} 1/k
    REQUIRE(digamma(4.0) ==
            Catch::Approx(-euler_gamma() + 1.0 + 0.5 + 1.0 / 3.0).epsilon(1e-14));
}

TEST_CASE("digamma recurrence psi(x+1) = psi(x) + 1/x")
{
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> dist(0.1, 50.0);
    for (int i = 0; i < 200; ++i)
    {
        const double x = dist(rng);
        REQUIRE(digamma(x + 1.0) == Catch::Approx(digamma(x) + 1.0 / x).epsilon(1e-11));
    }
}

TEST_CASE("digamma rejects non-positive arguments")
{
    REQUIRE_THROWS_AS(digamma(0.0), std::domain_error);
    REQUIRE_THROWS_AS(digamma(-2.5), std::domain_error);
}

TEST_CASE("exponential integral matches quadrature")
{
    const unsigned int orders[] = {1, 2, 3, 4, 5, 8, 13, 21, 40, 80};
    for (unsigned int m : orders)
    {
        for (int i = 0; i < 50; ++i)
        {
            const double x = 0.02 * std::pow(25.0 / 0.02, i / 49.0);
            const double ref = en_quadrature(m, x);
            REQUIRE(exp_integral_en(m, x) == Catch::Approx(ref).epsilon(1e-9));
        }
    }
}

TEST_CASE("exponential integral known values")
{
    REQUIRE(exp_integral_en(1, 1.0) == Catch::Approx(0.21938393439552029).epsilon(1e-12));
    REQUIRE(exp_integral_en(2, 1.0) == Catch::Approx(0.14849550677592204).epsilon(1e-12));
    // E_m(0) = 1/(m-1)
    REQUIRE(exp_integral_en(2, 0.0) == 1.0);
    REQUIRE(exp_integral_en(5, 0.0) == Catch::Approx(0.25).epsilon(1e-15));
}

TEST_CASE("exponential integral recurrence")
{
    // m E_{m+1}(x) = exp(-x) - x E_m(x), checked relative to exp(-x) since
    // both sides shrink with it
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> xdist(0.05, 20.0);
    std::uniform_int_distribution<unsigned int> mdist(1, 60);
    for (int i = 0; i < 300; ++i)
    {
        const double x = xdist(rng);
        const unsigned int m = mdist(rng);
        const double lhs = double(m) * exp_integral_en(m + 1, x);
        const double rhs = std::exp(-x) - x * exp_integral_en(m, x);
        REQUIRE(std::abs(lhs - rhs) <= 1e-10 * std::exp(-x));
    }
}

TEST_CASE("exponential integral domain errors")
{
    REQUIRE_THROWS_AS(exp_integral_en(0, 1.0), std::domain_error);
    REQUIRE_THROWS_AS(exp_integral_en(1, -0.5), std::domain_error);
    REQUIRE_THROWS_AS(exp_integral_en(1, 0.0), std::domain_error);
}

TEST_CASE("partial sums agree with term-by-term accumulation")
{
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> xdist(0.02, 8.0);
    std::uniform_int_distribution<unsigned int> cdist(1, 150);
    for (int i = 0; i < 40; ++i)
    {
        const double x = xdist(rng);
        const unsigned int count = cdist(rng);
        double acc = 0.0;
        for (unsigned int m = 1; m <= count; ++m)
            acc += exp_integral_en(m, x);
        REQUIRE(en_partial_sum(count, x) == Catch::Approx(acc).epsilon(1e-11));
        REQUIRE(en_partial_sum_scaled(count, x) ==
                Catch::Approx(std::exp(x) * acc).epsilon(1e-11));
    }
}

TEST_CASE("scaled partial sum survives arguments where exp(-x) underflows")
{
    // exp(800) overflows and exp(-800) underflows, yet the scaled sum is a
    // well-conditioned quantity of order count/x
    const double v = en_partial_sum_scaled(10, 800.0);
    REQUIRE(std::isfinite(v));
    REQUIRE(v > 0.0);
    // every scaled term obeys exp(x) E_m(x) < 1/x
    REQUIRE(v < 10.0 / 800.0);
}

TEST_CASE("scaled partial sum decreases in the argument")
{
    const unsigned int count = 130;
    double prev = en_partial_sum_scaled(count, 1e-4);
    for (double x : {1e-3, 1e-2, 0.1, 1.0, 10.0})
    {
        const double cur = en_partial_sum_scaled(count, x);
        REQUIRE(cur < prev);
        prev = cur;
    }
}

TEST_CASE("high-power approximation of the scaled sum")
{
    // the regime the allocator actually visits: truncation length near a
    // hundred and arguments around stream_count/power
    const unsigned int count = 130;
    const double x = 8.0 * 16.0 / (1e4 * 0.905);
    const double exact = en_partial_sum_scaled(count, x);
    const double approx = en_sum_high_power_approx(count, x);
    REQUIRE(std::abs(exact - approx) <= 0.05);

    // the gap closes as the argument keeps shrinking
    const double tighter =
        std::abs(en_partial_sum_scaled(count, x / 100.0) - en_sum_high_power_approx(count, x / 100.0));
    REQUIRE(tighter < std::abs(exact - approx));

    REQUIRE_THROWS_AS(en_sum_high_power_approx(1, 0.5), std::domain_error);
    REQUIRE_THROWS_AS(en_sum_high_power_approx(10, 0.0), std::domain_error);
}

TEST_CASE("gamma moment matching")
{
    const std::vector<std::pair<GammaParams, double>> mix = {{GammaParams(2.0, 3.0), 1.0},
                                                             {GammaParams(4.0, 1.0), 1.0}};
    const GammaParams fit = moment_match(mix);
    REQUIRE(fit.shape == Catch::Approx(100.0 / 22.0).epsilon(1e-14));
    REQUIRE(fit.scale == Catch::Approx(2.2).epsilon(1e-14));

    // whatever the mixture, the fit must reproduce mean and variance exactly
    std::mt19937_64 rng(19);
    std::uniform_real_distribution<double> dist(0.1, 9.0);
    for (int trial = 0; trial < 100; ++trial)
    {
        std::vector<std::pair<GammaParams, double>> comps;
        double mean = 0.0;
        double var = 0.0;
        const int n = 1 + int(trial % 5);
        for (int i = 0; i < n; ++i)
        {
            const double shape = dist(rng);
            const double scale = dist(rng);
            const double weight = dist(rng);
            comps.push_back({GammaParams(shape, scale), weight});
            mean += shape * weight * scale;
            var += shape * (weight * scale) * (weight * scale);
        }
        const GammaParams fit2 = moment_match(comps);
        REQUIRE(fit2.mean() == Catch::Approx(mean).epsilon(1e-12));
        REQUIRE(fit2.variance() == Catch::Approx(var).epsilon(1e-12));
    }
}

TEST_CASE("moment matching input validation")
{
    REQUIRE_THROWS_AS(moment_match({}), std::invalid_argument);
    REQUIRE_THROWS_AS(moment_match({{GammaParams(1.0, 1.0), 0.0}}), std::invalid_argument);
    REQUIRE_THROWS_AS(moment_match({{GammaParams(1.0, 1.0), -2.0}}), std::invalid_argument);
    REQUIRE_THROWS_AS(GammaParams(0.0, 1.0), std::domain_error);
    REQUIRE_THROWS_AS(GammaParams(1.0, -1.0), std::domain_error);
}
