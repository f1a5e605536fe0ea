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
//
// Analytic machinery for picking the common/private power split t of each
// phase. The ergodic sum rate of a zero-forced phase is lower bounded in
// closed form through a moment-matched Gamma surrogate of the channel
// gains; a high-power simplification of that bound then yields the split in
// closed form. A seeded grid search over the Monte Carlo objective serves
// as the reference allocator.

#ifndef rsrelay_alloc_H
#define rsrelay_alloc_H

#include "rsrelay/channel.hpp"
#include "rsrelay/ratecalc.hpp"
#include "rsrelay/specfun.hpp"

#include <armadillo>

namespace rsrelay
{

// Gamma(shape, scale) surrogate, matched in first and second moment, for
// the combined channel-precoder power gain of a zero-forced transmission
// with n_streams streams on n_antennas antennas at estimate quality
// epsilon. Interpolates between Gamma(n_antennas - n_streams + 1, 1) at
// perfect knowledge and Gamma(n_streams, 1) at none. Phase 1 is the base
// station's view (N antennas, K + L streams), phase 2 the relay's
// (M antennas, L streams); the formula is shared.
GammaParams gamma_params_phase1(arma::uword n_antennas, arma::uword n_streams, double epsilon);
GammaParams gamma_params_phase2(arma::uword n_antennas, arma::uword n_streams, double epsilon);

// Log-domain gain constant of the weakest common-stream receiver,
//   beta = -euler_gamma - ln(n_users) - e^x * sum_{m=1..c} E_m(x),
// with x = n_users * n_streams / (power * scale * t) and truncation
// c = round(shape * n_users). In the first phase n_users = K and
// n_streams = K + L; in the second both collapse to L. Throws
// std::domain_error when c < 1.
double beta_phase1(double p1, double t1, arma::uword n_bs_users, arma::uword n_streams,
                   const GammaParams &params);
double beta_phase2(double p2, double t2, arma::uword n_relay_users, const GammaParams &params);

// Lower bound on the one-phase ergodic sum rate at private power fraction
// t, without the factor 1/2 of the two-phase schedule (applied only where
// end-to-end rates are reported):
//
//   g * log2(1 + power * exp(mu) * t / g)
// - g * log2(1 + power * (1 - eps^2)(g - 1) t / g)
// + log2(1 + power * (1 - t) * exp(beta(t)))
//
// where g is the stream count and mu = ln(scale) + digamma(shape) of the
// matched gain.
double lower_bound_phase1(double t1, double p1, arma::uword n_antennas, arma::uword n_bs_users,
                          arma::uword n_streams, double epsilon);
double lower_bound_phase2(double t2, double p2, arma::uword n_antennas, arma::uword n_relay_users,
                          double epsilon);

// Coefficients of the high-power surrogate of the bound. beta is quoted at
// t = 1; its t dependence is absorbed into rho.
struct BoundTerms
{
    double d_hat = 0.0;     // matched shape
    double theta_hat = 0.0; // matched scale
    double mu = 0.0;        // mean log of the matched gain
    double beta = 0.0;      // weakest-receiver log gain at t = 1
    double tau = 0.0;       // private signal coefficient, power * exp(mu) / g
    double omega = 0.0;     // private interference coefficient
    double rho = 0.0;       // common-stream coefficient
};

// Throws std::domain_error when the truncation length round(shape * users)
// is 1 or less, where rho is undefined
BoundTerms closed_form_terms_phase1(double p1, arma::uword n_antennas, arma::uword n_bs_users,
                                    arma::uword n_streams, double epsilon);
BoundTerms closed_form_terms_phase2(double p2, arma::uword n_antennas, arma::uword n_relay_users,
                                    double epsilon);

// The surrogate itself (no halving):
//   n_streams * log2(tau * t / (1 + omega * t)) + log2(1 - rho + rho / t)
double surrogate_sum_rate(double t, const BoundTerms &terms, arma::uword n_streams);

// Whether a split landed strictly inside (0, 1) or was pinned to
// all-private transmission
enum class AllocationBranch
{
    interior,
    saturated_to_one
};

struct PowerSplit
{
    double t = 1.0;
    AllocationBranch branch = AllocationBranch::saturated_to_one;
};

// Closed-form maximizer of the phase surrogate,
//   t = rho (g - 1) / (rho (omega + g) - g),
// taken when the surrogate is falling at t = 1 (that is, when
// rho (omega + 1) > g); otherwise the split saturates to 1. Degenerate
// inputs (fewer than two streams, truncation length under 2) saturate as
// well. An interior value outside (0, 1] throws std::domain_error instead
// of being clamped.
PowerSplit t1_opt(double p1, arma::uword n_antennas, arma::uword n_bs_users,
                  arma::uword n_streams, double epsilon);
PowerSplit t2_opt(double p2, arma::uword n_antennas, arma::uword n_relay_users, double epsilon);

// Config-level conveniences; the scaling CSIT model resolves epsilon
// against the phase's own power
PowerSplit t1_opt(const SystemConfig &config);
PowerSplit t2_opt(const SystemConfig &config);

enum class AllocationMethod
{
    closed_form,
    exhaustive,
    fixed
};

struct AllocationResult
{
    double t1 = 1.0;
    double t2 = 1.0;
    AllocationMethod method = AllocationMethod::fixed;
    AllocationBranch branch1 = AllocationBranch::saturated_to_one;
    AllocationBranch branch2 = AllocationBranch::saturated_to_one;
    // closed form: half the phase surrogate at the chosen split (zero when
    // the phase is degenerate); exhaustive: the achieved Monte Carlo
    // objective in both slots; fixed: zero
    double bound_value_phase1 = 0.0;
    double bound_value_phase2 = 0.0;
};

// Splits from t1_opt/t2_opt plus the halved surrogate values
AllocationResult closed_form_allocation(const SystemConfig &config);

// A caller-chosen split wrapped for uniform reporting
AllocationResult fixed_allocation(double t1, double t2);

// Two-stage grid search over the power splits
struct GridSpec
{
    arma::uword coarse = 64; // per-axis points, log-spaced on [t_min, 1]
    arma::uword refine = 64; // per-axis points, linear around the coarse best
    double t_min = 1e-6;
};

// Maximizes one sum-rate variant over a (t1, t2) grid against a frozen
// Monte Carlo ensemble (common random numbers across all grid points): a
// log-spaced coarse pass over [t_min, 1]^2, then a linear pass over the
// cell spanned by the coarse winner's neighbors. The better pass wins;
// exact ties keep the earlier point in row-major grid order. A one-point
// axis degenerates to {1.0}. Evaluations are spread over n_threads
// (0 = hardware concurrency) without affecting the result.
AllocationResult exhaustive_search(const RealizationSet &set, Variant variant,
                                   const GridSpec &grid, BuPhase2Mode mode,
                                   unsigned n_threads = 0);

// Convenience overload drawing a fresh ensemble from the config (and using
// the config's BU phase-2 mode)
AllocationResult exhaustive_search(const SystemConfig &config, Variant variant,
                                   arma::uword n_realizations, const GridSpec &grid,
                                   unsigned n_threads = 0);

} // namespace rsrelay

#endif
