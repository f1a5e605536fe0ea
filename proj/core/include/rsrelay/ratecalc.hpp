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

#ifndef rsrelay_ratecalc_H
#define rsrelay_ratecalc_H

#include "rsrelay/channel.hpp"
#include "rsrelay/precoder.hpp"

#include <armadillo>
#include <array>
#include <string>
#include <vector>

namespace rsrelay
{

// Squared channel-precoder inner products of one realization. Everything a
// rate evaluation needs, with the power-split factors left out, so a single
// precompute serves any number of (t1, t2) points. "exc" sums skip the
// stream's own column explicitly rather than subtracting, which keeps them
// exactly zero under perfect zero-forcing.
struct LinkGains
{
    // first phase, seen by the K base-station users
    arma::vec bu_common;       // |h_k^H p_c|^2
    arma::vec bu_private_diag; // own private column
    arma::vec bu_private_all;  // sum over all K + L private columns
    arma::vec bu_private_exc;  // sum excluding the own column

    // first phase, seen by the L forwarded streams at the relay antennas
    arma::vec rs_common;
    arma::vec rs_private_diag;
    arma::vec rs_private_all;
    arma::vec rs_private_exc;

    // second phase, seen by the L relay users
    arma::vec ru_common;
    arma::vec ru_private_diag;
    arma::vec ru_private_all;
    arma::vec ru_private_exc;

    // second phase, seen by the K base-station users
    arma::vec bu2_bs_diag;       // own second-phase column from the base station
    arma::vec bu2_bs_all;        // sum over the K base-station columns
    arma::vec bu2_bs_exc;        // that sum without the own column
    arma::vec bu2_relay_common;  // relay common stream leaking into BU k
    arma::vec bu2_relay_private; // sum of relay private streams leaking into BU k
};

LinkGains compute_link_gains(const ChannelRealization &realization, const PrecoderSet &precoders,
                             const SystemConfig &config);

// Instantaneous SINRs of the first phase at power split t1 (fraction t1 of
// the base-station power spread over the private streams, the rest on the
// common stream)
struct Phase1Sinr
{
    arma::vec bu_common;
    arma::vec bu_private;
    arma::vec rs_common;
    arma::vec rs_private;
};

Phase1Sinr sinr_phase1(const LinkGains &gains, double t1, const SystemConfig &config);

// Per-receiver views of the first phase computed straight from a realization
// (convenience wrappers over compute_link_gains + sinr_phase1)
arma::vec sinr_phase1_bu_common(const ChannelRealization &realization,
                                const PrecoderSet &precoders, double t1,
                                const SystemConfig &config);
arma::vec sinr_phase1_bu_private(const ChannelRealization &realization,
                                 const PrecoderSet &precoders, double t1,
                                 const SystemConfig &config);
arma::vec sinr_phase1_relay_common(const ChannelRealization &realization,
                                   const PrecoderSet &precoders, double t1,
                                   const SystemConfig &config);
arma::vec sinr_phase1_relay_private(const ChannelRealization &realization,
                                    const PrecoderSet &precoders, double t1,
                                    const SystemConfig &config);

// Instantaneous SINRs of the second phase at relay power split t2. The
// base-station users suffer, on top of the base station's own streams and
// the relay private streams, an extra interference power given per user in
// bu_extra_interference: zero when the relay common stream is fully removed,
// its full received power when it is never decoded, or a residual in
// between. Pass an empty vector for all zeros.
struct Phase2Sinr
{
    arma::vec ru_common;
    arma::vec ru_private;
    arma::vec bu_common;
    arma::vec bu_private;
};

Phase2Sinr sinr_phase2(const LinkGains &gains, double t2, const SystemConfig &config,
                       const arma::vec &bu_extra_interference);

// Realization-level wrapper over compute_link_gains + the gains overload
Phase2Sinr sinr_phase2(const ChannelRealization &realization, const PrecoderSet &precoders,
                       double t2, const SystemConfig &config,
                       const arma::vec &bu_extra_interference);

// Interference power left at a base-station user that decodes the relay
// common stream at its own rate r_common_bu while the stream is transmitted
// at r_common_ru: p2 * (1 - t2) * (2^(r_common_ru - min(r_common_bu,
// r_common_ru)) - 1). Zero when the user keeps up, unbounded otherwise.
double residual_interference(double r_common_ru, double r_common_bu, double t2, double p2);

// Per-BU vector form over the users' individual common-stream rates
arma::vec residual_interference(double r_common_ru, const arma::vec &r_common_bu, double t2,
                                double p2);

// Ergodic rates of one phase in bit/s/Hz
struct PhaseRates
{
    arma::vec common_per_bu;          // common-stream decode rates at the BUs
    arma::vec common_per_ru;          // common-stream decode rates at the RUs
    arma::vec private_bu;             // per-BU private rates
    arma::vec private_relay_streams;  // per-forwarded-stream private rates
    arma::vec private_ru;             // per-RU private rates
    double common_relay = 0.0;        // weakest forwarded stream's common decode rate
    double common_rate = 0.0;         // rate the common stream is actually sent at
};

// Selection rules turning the per-phase rates into one end-to-end sum rate.
// They differ in whether the common stream is constrained by both phases or
// only the first, and whether relay-user traffic is limited by the weaker of
// its two hops or by the second hop alone.
enum class Variant
{
    r1, // common min of both phases, relay users limited by both hops
    r2, // common limited by the first phase only, relay users by both hops
    r3, // common min of both phases, relay users by the second hop only
    r4  // common and relay users limited by their own single hop
};

const char *to_string(Variant variant);
Variant variant_from_string(const std::string &name);

std::array<double, 4> sum_rate_variants(const PhaseRates &phase1, const PhaseRates &phase2);

// Full ergodic-rate evaluation at one power split
struct RateReport
{
    PhaseRates phase1;
    PhaseRates phase2;
    arma::vec residual_interference_per_bu;
    std::array<double, 4> variants{}; // indexed by Variant
    BuPhase2Mode mode = BuPhase2Mode::pci;
    double t1 = 1.0;
    double t2 = 1.0;
};

double variant_value(const RateReport &report, Variant variant);

// A frozen Monte Carlo ensemble: n realizations drawn from the config's
// seeded stream family, with channels, precoders and link gains computed
// once. Evaluations at different power splits reuse the ensemble, so grid
// searches and method comparisons see identical fading. Construction is
// parallelized over realizations; results do not depend on n_threads
// (0 = hardware concurrency).
class RealizationSet
{
  public:
    RealizationSet(const SystemConfig &config, arma::uword n_realizations, unsigned n_threads = 0);

    // Ergodic rates at the given power splits, both in (0, 1]. The config's
    // BU phase-2 mode applies unless overridden. Partial interference
    // cancellation runs two passes: every rate that does not depend on the
    // residual interference first, then the BU private rates with the
    // residual derived from the ergodic common rates.
    RateReport evaluate(double t1, double t2) const;
    RateReport evaluate(double t1, double t2, BuPhase2Mode mode) const;

    const SystemConfig &config() const { return config_; }
    arma::uword size() const { return arma::uword(gains_.size()); }
    const std::vector<LinkGains> &gains() const { return gains_; }

  private:
    SystemConfig config_;
    std::vector<LinkGains> gains_;
};

// One-shot convenience: build an ensemble and evaluate it
RateReport ergodic_rates(const SystemConfig &config, double t1, double t2,
                         arma::uword n_realizations, unsigned n_threads = 0);

// Reference without rate splitting: all power on the private streams
// (t1 = t2 = 1), leaving the common stream silent
RateReport sdma_baseline(const SystemConfig &config, arma::uword n_realizations,
                         unsigned n_threads = 0);

} // namespace rsrelay

#endif
