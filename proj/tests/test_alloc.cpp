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

#include "rsrelay/alloc.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

using namespace rsrelay;

namespace
{

// best t over a dense grid of the surrogate, the reference the closed form
// has to reproduce
double surrogate_grid_max(const BoundTerms &terms, arma::uword n_streams, arma::uword n_points)
{
    double best_t = 1.0;
    double best_v = -arma::datum::inf;
    for (arma::uword i = 0; i < n_points; ++i)
    {
        const double t = (double(i) + 1.0) / double(n_points);
        const double v = surrogate_sum_rate(t, terms, n_streams);
        if (v > best_v)
        {
            best_v = v;
            best_t = t;
        }
    }
    return best_t;
}

} // namespace

TEST_CASE("matched gain distribution endpoints and anchors")
{
    // perfect knowledge leaves the textbook zero-forcing gain
    const GammaParams perfect = gamma_params_phase1(16, 8, 1.0);
    REQUIRE(perfect.shape == Catch::Approx(9.0).epsilon(1e-12));
    REQUIRE(perfect.scale == Catch::Approx(1.0).epsilon(1e-12));

    // no knowledge degrades to the fully interfered stream count
    const GammaParams blind = gamma_params_phase1(16, 8, 0.0);
    REQUIRE(blind.shape == Catch::Approx(8.0).epsilon(1e-12));
    REQUIRE(blind.scale == Catch::Approx(1.0).epsilon(1e-12));

    const GammaParams g1 = gamma_params_phase1(16, 16, 0.3);
    REQUIRE(g1.shape == Catch::Approx(16.18854).margin(1e-4));
    REQUIRE(g1.scale == Catch::Approx(0.904963).margin(1e-4));

    const GammaParams g2 = gamma_params_phase2(8, 8, 0.3);
    REQUIRE(g2.shape == Catch::Approx(8.18901).margin(1e-4));
    REQUIRE(g2.scale == Catch::Approx(0.899986).margin(1e-4));

    // both phases share one formula
    const GammaParams a = gamma_params_phase1(12, 6, 0.4);
    const GammaParams b = gamma_params_phase2(12, 6, 0.4);
    REQUIRE(a.shape == b.shape);
    REQUIRE(a.scale == b.scale);
}

TEST_CASE("weakest-receiver gain constant")
{
    const GammaParams params = gamma_params_phase1(16, 16, 0.3);
    const arma::uword k = 8;
    const arma::uword g = 16;
    const double p = 1000.0;

    // the definition, assembled from the published pieces
    auto reference = [&](double t) {
        const arma::uword c = arma::uword(std::llround(params.shape * double(k)));
        const double x = double(k) * double(g) / (p * params.scale * t);
        return -euler_gamma() - std::log(double(k)) - en_partial_sum_scaled(unsigned(c), x);
    };

    for (double t : {0.05, 0.3, 1.0})
        REQUIRE(beta_phase1(p, t, k, g, params) == Catch::Approx(reference(t)).epsilon(1e-12));

    // more private power floods the common stream: beta falls with t
    REQUIRE(beta_phase1(p, 0.2, k, g, params) > beta_phase1(p, 0.9, k, g, params));

    // the relay phase uses the same constant with streams = users
    const GammaParams params2 = gamma_params_phase2(8, 8, 0.3);
    REQUIRE(beta_phase2(p, 0.5, 8, params2) ==
            Catch::Approx(beta_phase1(p, 0.5, 8, 8, params2)).epsilon(1e-14));

    REQUIRE_THROWS_AS(beta_phase1(0.0, 0.5, k, g, params), std::domain_error);
    REQUIRE_THROWS_AS(beta_phase1(p, 0.0, k, g, params), std::domain_error);
}

TEST_CASE("sum-rate lower bound composition and growth")
{
    const double t = 0.4;
    const arma::uword n = 16, k = 8, g = 16;
    const double eps = 0.3;

    const GammaParams params = gamma_params_phase1(n, g, eps);
    const double mu = std::log(params.scale) + digamma(params.shape);
    const double beta = beta_phase1(1000.0, t, k, g, params);
    const double expected = double(g) * std::log2(1.0 + 1000.0 * std::exp(mu) * t / double(g)) -
                            double(g) * std::log2(1.0 + 1000.0 * (1.0 - eps * eps) *
                                                            (double(g) - 1.0) * t / double(g)) +
                            std::log2(1.0 + 1000.0 * (1.0 - t) * std::exp(beta));
    REQUIRE(lower_bound_phase1(t, 1000.0, n, k, g, eps) ==
            Catch::Approx(expected).epsilon(1e-12));

    // more power cannot lower the bound
    double prev = lower_bound_phase1(t, 10.0, n, k, g, eps);
    for (double p : {100.0, 1000.0, 10000.0})
    {
        const double cur = lower_bound_phase1(t, p, n, k, g, eps);
        REQUIRE(cur > prev);
        prev = cur;
    }

    // relay-phase wrapper is the same bound with streams = users
    REQUIRE(lower_bound_phase2(t, 500.0, 8, 8, 0.3) ==
            Catch::Approx(lower_bound_phase1(t, 500.0, 8, 8, 8, 0.3)).epsilon(1e-14));
}

TEST_CASE("closed-form coefficients at the reference operating point")
{
    const BoundTerms t1 = closed_form_terms_phase1(1000.0, 16, 8, 16, 0.3);
    REQUIRE(t1.omega == Catch::Approx(1000.0 * 0.91 * 15.0 / 16.0).epsilon(1e-12));
    REQUIRE(t1.rho == Catch::Approx(0.07665).margin(1e-4));
    REQUIRE(t1.d_hat == Catch::Approx(16.18854).margin(1e-4));
    REQUIRE(t1.theta_hat == Catch::Approx(0.904963).margin(1e-4));
    REQUIRE(t1.mu == Catch::Approx(std::log(t1.theta_hat) + digamma(t1.d_hat)).epsilon(1e-12));
    REQUIRE(t1.tau == Catch::Approx(1000.0 * std::exp(t1.mu) / 16.0).epsilon(1e-12));
    REQUIRE(t1.beta ==
            Catch::Approx(beta_phase1(1000.0, 1.0, 8, 16, gamma_params_phase1(16, 16, 0.3)))
                .epsilon(1e-12));

    const BoundTerms t2 = closed_form_terms_phase2(1000.0, 8, 8, 0.3);
    REQUIRE(t2.omega == Catch::Approx(1000.0 * 0.91 * 7.0 / 8.0).epsilon(1e-12));
    REQUIRE(t2.rho == Catch::Approx(0.07619).margin(1e-4));
}

TEST_CASE("split formula at the reference operating point")
{
    const PowerSplit s1 = t1_opt(1000.0, 16, 8, 16, 0.3);
    REQUIRE(s1.branch == AllocationBranch::interior);
    REQUIRE(s1.t == Catch::Approx(0.022713).margin(1e-4));

    const PowerSplit s2 = t2_opt(1000.0, 8, 8, 0.3);
    REQUIRE(s2.branch == AllocationBranch::interior);
    REQUIRE(s2.t == Catch::Approx(0.010011).margin(1e-4));

    // the interior expression itself
    const BoundTerms terms = closed_form_terms_phase1(1000.0, 16, 8, 16, 0.3);
    const double g = 16.0;
    const double expected = terms.rho * (g - 1.0) / (terms.rho * (terms.omega + g) - g);
    REQUIRE(s1.t == Catch::Approx(expected).epsilon(1e-12));
}

TEST_CASE("split matches a dense grid search of its own surrogate")
{
    std::mt19937_64 rng(2024);
    std::uniform_int_distribution<int> n_dist(4, 32);
    std::uniform_real_distribution<double> eps_dist(0.05, 0.95);
    std::uniform_real_distribution<double> snr_dist(5.0, 40.0);

    int interior_seen = 0;
    for (int trial = 0; trial < 30; ++trial)
    {
        const arma::uword n = arma::uword(n_dist(rng));
        std::uniform_int_distribution<int> g_dist(2, int(n));
        const arma::uword g = arma::uword(g_dist(rng));
        std::uniform_int_distribution<int> k_dist(1, int(g));
        const arma::uword k = arma::uword(k_dist(rng));
        const double eps = eps_dist(rng);
        const double p = std::pow(10.0, snr_dist(rng) / 10.0);

        BoundTerms terms;
        try
        {
            terms = closed_form_terms_phase1(p, n, k, g, eps);
        }
        catch (const std::domain_error &)
        {
            continue; // truncation too short for the surrogate to exist
        }

        const PowerSplit s = t1_opt(p, n, k, g, eps);
        const double grid_t = surrogate_grid_max(terms, g, 10000);
        REQUIRE(std::abs(s.t - grid_t) <= 1e-3);
        if (s.branch == AllocationBranch::interior)
            ++interior_seen;
    }
    REQUIRE(interior_seen > 0);
}

TEST_CASE("split saturates where rate splitting cannot pay")
{
    // perfect knowledge: nothing to gain from a common stream
    REQUIRE(t1_opt(1e4, 16, 8, 16, 1.0).branch == AllocationBranch::saturated_to_one);
    REQUIRE(t1_opt(1e4, 16, 8, 16, 1.0).t == 1.0);
    REQUIRE(t2_opt(1e4, 8, 8, 1.0).branch == AllocationBranch::saturated_to_one);

    // low power: the common stream's log term cannot compete
    REQUIRE(t1_opt(10.0, 16, 8, 16, 0.3).branch == AllocationBranch::saturated_to_one);

    // degenerate stream counts
    REQUIRE(t1_opt(1000.0, 16, 8, 1, 0.3).branch == AllocationBranch::saturated_to_one);
    REQUIRE(t2_opt(1000.0, 8, 1, 0.3).branch == AllocationBranch::saturated_to_one);
    REQUIRE(t2_opt(1000.0, 8, 0, 0.3).branch == AllocationBranch::saturated_to_one);

    // the saturation condition is exactly the sign of the slope at t = 1
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> eps_dist(0.1, 0.9);
    std::uniform_real_distribution<double> snr_dist(0.0, 40.0);
    for (int trial = 0; trial < 50; ++trial)
    {
        const double eps = eps_dist(rng);
        const double p = std::pow(10.0, snr_dist(rng) / 10.0);
        BoundTerms terms;
        try
        {
            terms = closed_form_terms_phase1(p, 16, 8, 16, eps);
        }
        catch (const std::domain_error &)
        {
            continue;
        }
        const bool falling_at_one = terms.rho * (terms.omega + 1.0) > 16.0;
        const PowerSplit s = t1_opt(p, 16, 8, 16, eps);
        REQUIRE((s.branch == AllocationBranch::interior) == falling_at_one);
        REQUIRE(s.t > 0.0);
        REQUIRE(s.t <= 1.0);
    }
}

TEST_CASE("degenerate truncation lengths are rejected where the surrogate needs them")
{
    // shape 1 with a single user truncates the sum at one term
    REQUIRE_THROWS_AS(closed_form_terms_phase1(1000.0, 4, 1, 4, 1.0), std::domain_error);
    REQUIRE(t1_opt(1000.0, 4, 1, 4, 1.0).branch == AllocationBranch::saturated_to_one);
}

TEST_CASE("config-level splits resolve estimate quality per phase")
{
    SystemConfig config;
    config.p1 = 1e4;
    config.p2 = 100.0;
    config.csit_model = CsitModel::make_scaling(0.1);

    const double eps1 = effective_epsilon(config, config.p1);
    const double eps2 = effective_epsilon(config, config.p2);
    REQUIRE(t1_opt(config).t == t1_opt(1e4, 16, 8, 16, eps1).t);
    REQUIRE(t2_opt(config).t == t2_opt(100.0, 8, 8, eps2).t);
}

TEST_CASE("closed-form allocation bundles splits and surrogate values")
{
    SystemConfig config; // defaults sit at the interior/interior point
    const AllocationResult r = closed_form_allocation(config);

    REQUIRE(r.method == AllocationMethod::closed_form);
    REQUIRE(r.branch1 == AllocationBranch::interior);
    REQUIRE(r.branch2 == AllocationBranch::interior);
    REQUIRE(r.t1 == Catch::Approx(0.022713).margin(1e-4));
    REQUIRE(r.t2 == Catch::Approx(0.010011).margin(1e-4));

    const BoundTerms terms1 = closed_form_terms_phase1(config.p1, 16, 8, 16, 0.3);
    REQUIRE(r.bound_value_phase1 ==
            Catch::Approx(0.5 * surrogate_sum_rate(r.t1, terms1, 16)).epsilon(1e-12));

    // a relay without users contributes nothing and cannot break the bundle
    SystemConfig no_relay = config;
    no_relay.n_relay_users = 0;
    const AllocationResult nr = closed_form_allocation(no_relay);
    REQUIRE(nr.t2 == 1.0);
    REQUIRE(nr.branch2 == AllocationBranch::saturated_to_one);
    REQUIRE(nr.bound_value_phase2 == 0.0);
}

TEST_CASE("fixed allocation is a labelled passthrough")
{
    const AllocationResult r = fixed_allocation(0.25, 0.75);
    REQUIRE(r.t1 == 0.25);
    REQUIRE(r.t2 == 0.75);
    REQUIRE(r.method == AllocationMethod::fixed);
    REQUIRE(r.bound_value_phase1 == 0.0);
    REQUIRE(r.bound_value_phase2 == 0.0);
}

TEST_CASE("grid search consistency on a small ensemble")
{
    SystemConfig config;
    config.seed = 404;
    RealizationSet set(config, 20);

    GridSpec grid;
    grid.coarse = 12;
    grid.refine = 8;
    grid.t_min = 1e-4;

    const AllocationResult r = exhaustive_search(set, Variant::r1, grid, BuPhase2Mode::pci);
    REQUIRE(r.method == AllocationMethod::exhaustive);
    REQUIRE(r.t1 > 0.0);
    REQUIRE(r.t1 <= 1.0);
    REQUIRE(r.t2 > 0.0);
    REQUIRE(r.t2 <= 1.0);

    // the reported objective is reproducible at the reported point
    const RateReport at_best = set.evaluate(r.t1, r.t2, BuPhase2Mode::pci);
    REQUIRE(variant_value(at_best, Variant::r1) == Catch::Approx(r.bound_value_phase1).epsilon(1e-13));
    REQUIRE(r.bound_value_phase1 == r.bound_value_phase2);

    // it dominates every coarse grid point, which we can re-enumerate from
    // the documented axis layout
    const arma::vec axis = arma::exp(arma::linspace(std::log(grid.t_min), 0.0, grid.coarse));
    for (arma::uword i = 0; i < axis.n_elem; ++i)
        for (arma::uword j = 0; j < axis.n_elem; ++j)
        {
            const RateReport rep = set.evaluate(axis(i), axis(j), BuPhase2Mode::pci);
            REQUIRE(variant_value(rep, Variant::r1) <= r.bound_value_phase1 + 1e-12);
        }

    REQUIRE((r.branch1 == AllocationBranch::interior) == (r.t1 < 1.0));
    REQUIRE((r.branch2 == AllocationBranch::interior) == (r.t2 < 1.0));
}

TEST_CASE("grid search determinism and degenerate grids")
{
    SystemConfig config;
    config.seed = 505;
    RealizationSet set(config, 16);

    GridSpec grid;
    grid.coarse = 9;
    grid.refine = 7;

    const AllocationResult a = exhaustive_search(set, Variant::r2, grid, BuPhase2Mode::pci, 1);
    const AllocationResult b = exhaustive_search(set, Variant::r2, grid, BuPhase2Mode::pci, 4);
    REQUIRE(a.t1 == b.t1);
    REQUIRE(a.t2 == b.t2);
    REQUIRE(a.bound_value_phase1 == b.bound_value_phase1);

    // a one-point grid can only return all-private transmission
    GridSpec point;
    point.coarse = 1;
    point.refine = 1;
    const AllocationResult p = exhaustive_search(set, Variant::r1, point, BuPhase2Mode::pci);
    REQUIRE(p.t1 == 1.0);
    REQUIRE(p.t2 == 1.0);
    REQUIRE(p.branch1 == AllocationBranch::saturated_to_one);

    GridSpec bad;
    bad.coarse = 0;
    REQUIRE_THROWS_AS(exhaustive_search(set, Variant::r1, bad, BuPhase2Mode::pci),
                      std::invalid_argument);
    GridSpec bad_tmin;
    bad_tmin.t_min = 0.0;
    REQUIRE_THROWS_AS(exhaustive_search(set, Variant::r1, bad_tmin, BuPhase2Mode::pci),
                      std::invalid_argument);

    // the config overload draws the same seeded ensemble
    const AllocationResult c = exhaustive_search(config, Variant::r2, 16, grid);
    REQUIRE(c.t1 == a.t1);
    REQUIRE(c.t2 == a.t2);
}
