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

#include "parallel_for.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace rsrelay
{

namespace
{

double log2_of(double x)
{
    return std::log(x) / std::numbers::ln2;
}

double log2_1p(double x)
{
    return std::log1p(x) / std::numbers::ln2;
}

void check_split(double t, const char *who)
{
    if (!(t > 0.0 && t <= 1.0))
        throw std::domain_error(std::string(who) + ": power split must lie in (0, 1]");
}

// half-away-from-zero rounding of the truncation length round(shape * users)
double truncation_length(const GammaParams &params, arma::uword n_users)
{
    return std::round(params.shape * double(n_users));
}

double beta_impl(double power, double t, arma::uword n_users, arma::uword n_streams,
                 const GammaParams &params, const char *who)
{
    if (!(power > 0.0))
        throw std::domain_error(std::string(who) + ": power must be positive");
    if (!(t > 0.0))
        throw std::domain_error(std::string(who) + ": t must be positive");
    if (n_users < 1 || n_streams < 1)
        throw std::domain_error(std::string(who) + ": need at least one user and one stream");

    const double count = truncation_length(params, n_users);
    if (count < 1.0)
        throw std::domain_error(std::string(who) + ": truncated series is empty");

    const double x = double(n_users) * double(n_streams) / (power * params.scale * t);
    return -euler_gamma() - std::log(double(n_users)) -
           en_partial_sum_scaled(unsigned(count), x);
}

double lower_bound_impl(double t, double power, arma::uword n_antennas, arma::uword n_users,
                        arma::uword n_streams, double epsilon, const char *who)
{
    check_split(t, who);
    const GammaParams params = gamma_params_phase1(n_antennas, n_streams, epsilon);
    const double mu = std::log(params.scale) + digamma(params.shape);
    const double beta = beta_impl(power, t, n_users, n_streams, params, who);
    const double g = double(n_streams);

    const double signal = g * log2_1p(power * std::exp(mu) * t / g);
    const double interf = g * log2_1p(power * (1.0 - epsilon * epsilon) * (g - 1.0) * t / g);
    const double common = log2_1p(power * (1.0 - t) * std::exp(beta));
    return signal - interf + common;
}

BoundTerms terms_impl(double power, arma::uword n_antennas, arma::uword n_users,
                      arma::uword n_streams, double epsilon, const char *who)
{
    if (!(power > 0.0))
        throw std::domain_error(std::string(who) + ": power must be positive");

    const GammaParams params = gamma_params_phase1(n_antennas, n_streams, epsilon);
    const double count = truncation_length(params, n_users);
    if (count < 2.0)
        throw std::domain_error(std::string(who) + ": truncated series is too short, the "
                                                   "common-stream coefficient is undefined");

    const double g = double(n_streams);

    BoundTerms terms;
    terms.d_hat = params.shape;
    terms.theta_hat = params.scale;
    terms.mu = std::log(params.scale) + digamma(params.shape);
    terms.beta = beta_impl(power, 1.0, n_users, n_streams, params, who);
    terms.tau = power * std::exp(terms.mu) / g;
    terms.omega = power * (1.0 - epsilon * epsilon) * (g - 1.0) / g;
    terms.rho =
        g / (params.scale * (count - 1.0)) * std::exp(-euler_gamma() - 0.5 / (count - 1.0));
    return terms;
}

PowerSplit split_impl(double power, arma::uword n_antennas, arma::uword n_users,
                      arma::uword n_streams, double epsilon, const char *who)
{
    PowerSplit out; // saturated until shown otherwise
    if (n_streams < 2)
        return out;

    const GammaParams params = gamma_params_phase1(n_antennas, n_streams, epsilon);
    if (truncation_length(params, n_users) < 2.0)
        return out;

    const BoundTerms terms = terms_impl(power, n_antennas, n_users, n_streams, epsilon, who);
    const double g = double(n_streams);

    // the surrogate always rises from t = 0, so it peaks inside (0, 1)
    // exactly when it is falling at t = 1
    if (!(terms.rho * (terms.omega + 1.0) > g))
        return out;

    const double t = terms.rho * (g - 1.0) / (terms.rho * (terms.omega + g) - g);
    if (!(t > 0.0 && t <= 1.0) || !std::isfinite(t))
        throw std::domain_error(std::string(who) + ": interior split fell outside (0, 1]");

    out.t = t;
    out.branch = AllocationBranch::interior;
    return out;
}

// log-spaced axis from t_min to 1; a single point collapses to {1.0}
arma::vec coarse_axis(arma::uword n, double t_min)
{
    if (n == 1)
        return arma::vec{1.0};
    return arma::exp(arma::linspace(std::log(t_min), 0.0, n));
}

arma::vec refine_axis(const arma::vec &coarse, arma::uword best, arma::uword n)
{
    if (n == 1)
        return arma::vec{coarse(best)};
    const double lo = coarse(best > 0 ? best - 1 : 0);
    const double hi = coarse(best + 1 < coarse.n_elem ? best + 1 : coarse.n_elem - 1);
    return arma::linspace(lo, hi, n);
}

struct GridBest
{
    arma::uword i = 0; // index on the t1 axis
    arma::uword j = 0; // index on the t2 axis
    double value = -arma::datum::inf;
};

GridBest search_grid(const RealizationSet &set, const arma::vec &t1_axis,
                     const arma::vec &t2_axis, Variant variant, BuPhase2Mode mode,
                     unsigned n_threads)
{
    const arma::uword n1 = t1_axis.n_elem;
    const arma::uword n2 = t2_axis.n_elem;

    std::vector<double> value(n1 * n2);
    detail::parallel_for(n1 * n2, n_threads, [&](std::size_t idx) {
        const arma::uword i = arma::uword(idx) / n2;
        const arma::uword j = arma::uword(idx) % n2;
        RateReport rep = set.evaluate(t1_axis(i), t2_axis(j), mode);
        value[idx] = variant_value(rep, variant);
    });

    GridBest best;
    for (arma::uword i = 0; i < n1; ++i)
        for (arma::uword j = 0; j < n2; ++j)
        {
            const double v = value[i * n2 + j];
            if (v > best.value)
            {
                best.i = i;
                best.j = j;
                best.value = v;
            }
        }
    return best;
}

AllocationBranch branch_of(double t)
{
    return t >= 1.0 ? AllocationBranch::saturated_to_one : AllocationBranch::interior;
}

} // namespace

GammaParams gamma_params_phase1(arma::uword n_antennas, arma::uword n_streams, double epsilon)
{
    if (n_streams < 1)
        throw std::domain_error("gamma_params: need at least one stream");
    if (n_streams > n_antennas)
        throw std::domain_error("gamma_params: more streams than antennas");
    if (!(epsilon >= 0.0 && epsilon <= 1.0))
        throw std::domain_error("gamma_params: epsilon must lie in [0, 1]");

    const double e2 = epsilon * epsilon;
    const double n = double(n_antennas);
    const double g = double(n_streams);

    // first and second moment of the matched gain; both stay positive
    // whenever the stream count fits the array
    const double m1 = e2 * (n + 1.0) + (1.0 - 2.0 * e2) * g;
    const double m2 = e2 * e2 * (n + 1.0) + (1.0 - 2.0 * e2) * g;
    if (!(m1 > 0.0) || !(m2 > 0.0))
        throw std::domain_error("gamma_params: non-positive matched moment");
    return GammaParams(m1 * m1 / m2, m2 / m1);
}

GammaParams gamma_params_phase2(arma::uword n_antennas, arma::uword n_streams, double epsilon)
{
    return gamma_params_phase1(n_antennas, n_streams, epsilon);
}

double beta_phase1(double p1, double t1, arma::uword n_bs_users, arma::uword n_streams,
                   const GammaParams &params)
{
    return beta_impl(p1, t1, n_bs_users, n_streams, params, "beta_phase1");
}

double beta_phase2(double p2, double t2, arma::uword n_relay_users, const GammaParams &params)
{
    return beta_impl(p2, t2, n_relay_users, n_relay_users, params, "beta_phase2");
}

double lower_bound_phase1(double t1, double p1, arma::uword n_antennas, arma::uword n_bs_users,
                          arma::uword n_streams, double epsilon)
{
    if (n_streams < n_bs_users)
        throw std::domain_error("lower_bound_phase1: stream count cannot be below the direct "
                                "user count");
    return lower_bound_impl(t1, p1, n_antennas, n_bs_users, n_streams, epsilon,
                            "lower_bound_phase1");
}

double lower_bound_phase2(double t2, double p2, arma::uword n_antennas, arma::uword n_relay_users,
                          double epsilon)
{
    return lower_bound_impl(t2, p2, n_antennas, n_relay_users, n_relay_users, epsilon,
                            "lower_bound_phase2");
}

BoundTerms closed_form_terms_phase1(double p1, arma::uword n_antennas, arma::uword n_bs_users,
                                    arma::uword n_streams, double epsilon)
{
    return terms_impl(p1, n_antennas, n_bs_users, n_streams, epsilon,
                      "closed_form_terms_phase1");
}

BoundTerms closed_form_terms_phase2(double p2, arma::uword n_antennas, arma::uword n_relay_users,
                                    double epsilon)
{
    return terms_impl(p2, n_antennas, n_relay_users, n_relay_users, epsilon,
                      "closed_form_terms_phase2");
}

double surrogate_sum_rate(double t, const BoundTerms &terms, arma::uword n_streams)
{
    check_split(t, "surrogate_sum_rate");
    const double g = double(n_streams);
    return g * log2_of(terms.tau * t / (1.0 + terms.omega * t)) +
           log2_of(1.0 - terms.rho + terms.rho / t);
}

PowerSplit t1_opt(double p1, arma::uword n_antennas, arma::uword n_bs_users,
                  arma::uword n_streams, double epsilon)
{
    return split_impl(p1, n_antennas, n_bs_users, n_streams, epsilon, "t1_opt");
}

PowerSplit t2_opt(double p2, arma::uword n_antennas, arma::uword n_relay_users, double epsilon)
{
    if (n_relay_users == 0)
        return PowerSplit{}; // nothing to split
    return split_impl(p2, n_antennas, n_relay_users, n_relay_users, epsilon, "t2_opt");
}

PowerSplit t1_opt(const SystemConfig &config)
{
    config.validate();
    return t1_opt(config.p1, config.n_bs_antennas, config.n_bs_users,
                  config.n_bs_users + config.n_relay_users, effective_epsilon(config, config.p1));
}

PowerSplit t2_opt(const SystemConfig &config)
{
    config.validate();
    return t2_opt(config.p2, config.n_relay_antennas, config.n_relay_users,
                  effective_epsilon(config, config.p2));
}

AllocationResult closed_form_allocation(const SystemConfig &config)
{
    config.validate();
    const double eps1 = effective_epsilon(config, config.p1);
    const double eps2 = effective_epsilon(config, config.p2);
    const arma::uword g = config.n_bs_users + config.n_relay_users;
    const arma::uword l = config.n_relay_users;

    AllocationResult out;
    out.method = AllocationMethod::closed_form;

    PowerSplit s1 = t1_opt(config);
    out.t1 = s1.t;
    out.branch1 = s1.branch;
    if (g >= 2)
    {
        try
        {
            BoundTerms terms = closed_form_terms_phase1(config.p1, config.n_bs_antennas,
                                                        config.n_bs_users, g, eps1);
            out.bound_value_phase1 = 0.5 * surrogate_sum_rate(s1.t, terms, g);
        }
        catch (const std::domain_error &)
        {
            // degenerate truncation: split already saturated, no surrogate
        }
    }

    PowerSplit s2 = t2_opt(config);
    out.t2 = s2.t;
    out.branch2 = s2.branch;
    if (l >= 2)
    {
        try
        {
            BoundTerms terms =
                closed_form_terms_phase2(config.p2, config.n_relay_antennas, l, eps2);
            out.bound_value_phase2 = 0.5 * surrogate_sum_rate(s2.t, terms, l);
        }
        catch (const std::domain_error &)
        {
        }
    }
    return out;
}

AllocationResult fixed_allocation(double t1, double t2)
{
    check_split(t1, "fixed_allocation");
    check_split(t2, "fixed_allocation");

    AllocationResult out;
    out.t1 = t1;
    out.t2 = t2;
    out.method = AllocationMethod::fixed;
    out.branch1 = branch_of(t1);
    out.branch2 = branch_of(t2);
    return out;
}

AllocationResult exhaustive_search(const RealizationSet &set, Variant variant,
                                   const GridSpec &grid, BuPhase2Mode mode, unsigned n_threads)
{
    if (grid.coarse < 1 || grid.refine < 1)
        throw std::invalid_argument("exhaustive_search: grid sizes must be at least 1");
    if (!(grid.t_min > 0.0 && grid.t_min <= 1.0))
        throw std::invalid_argument("exhaustive_search: t_min must lie in (0, 1]");

    const arma::vec t1_coarse = coarse_axis(grid.coarse, grid.t_min);
    const arma::vec t2_coarse = coarse_axis(grid.coarse, grid.t_min);
    GridBest stage1 = search_grid(set, t1_coarse, t2_coarse, variant, mode, n_threads);

    const arma::vec t1_fine = refine_axis(t1_coarse, stage1.i, grid.refine);
    const arma::vec t2_fine = refine_axis(t2_coarse, stage1.j, grid.refine);
    GridBest stage2 = search_grid(set, t1_fine, t2_fine, variant, mode, n_threads);

    AllocationResult out;
    out.method = AllocationMethod::exhaustive;
    if (stage2.value > stage1.value)
    {
        out.t1 = t1_fine(stage2.i);
        out.t2 = t2_fine(stage2.j);
        out.bound_value_phase1 = stage2.value;
    }
    else
    {
        out.t1 = t1_coarse(stage1.i);
        out.t2 = t2_coarse(stage1.j);
        out.bound_value_phase1 = stage1.value;
    }
    out.bound_value_phase2 = out.bound_value_phase1;
    out.branch1 = branch_of(out.t1);
    out.branch2 = branch_of(out.t2);
    return out;
}

AllocationResult exhaustive_search(const SystemConfig &config, Variant variant,
                                   arma::uword n_realizations, const GridSpec &grid,
                                   unsigned n_threads)
{
    RealizationSet set(config, n_realizations, n_threads);
    return exhaustive_search(set, variant, grid, config.bu_phase2_mode, n_threads);
}

} // namespace rsrelay
