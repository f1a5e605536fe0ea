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

#include "rsrelay/ratecalc.hpp"

#include "parallel_for.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace rsrelay
{

namespace
{

constexpr double inf = std::numeric_limits<double>::infinity();

double bits(double sinr)
{
    return std::log1p(sinr) / std::numbers::ln2;
}

// row-wise |channel^H * precoders|^2 tables with own-column bookkeeping;
// own_offset maps receiver index to its column in the precoder matrix
struct ProductTable
{
    arma::vec common; // against the common precoder
    arma::vec diag;   // own private column
    arma::vec all;    // sum over every private column
    arma::vec exc;    // sum over every private column but the own one
};

ProductTable make_products(const arma::cx_mat &channels, const arma::cx_vec &common,
                           const arma::cx_mat &privates, arma::uword own_offset)
{
    const arma::uword n_rx = channels.n_cols;
    const arma::uword n_streams = privates.n_cols;

    ProductTable t;
    t.common.zeros(n_rx);
    t.diag.zeros(n_rx);
    t.all.zeros(n_rx);
    t.exc.zeros(n_rx);
    if (n_rx == 0)
        return t;

    if (!common.is_empty())
    {
        arma::cx_vec c = channels.t() * common;
        for (arma::uword k = 0; k < n_rx; ++k)
            t.common(k) = std::norm(c(k));
    }

    if (n_streams > 0)
    {
        arma::mat x = arma::square(arma::abs(channels.t() * privates));
        for (arma::uword k = 0; k < n_rx; ++k)
        {
            const arma::uword own = own_offset + k;
            double sum_exc = 0.0;
            for (arma::uword j = 0; j < n_streams; ++j)
                if (j != own)
                    sum_exc += x(k, j);
            t.exc(k) = sum_exc;
            t.diag(k) = own < n_streams ? x(k, own) : 0.0;
            t.all(k) = sum_exc + t.diag(k);
        }
    }
    return t;
}

} // namespace

LinkGains compute_link_gains(const ChannelRealization &realization, const PrecoderSet &precoders,
                             const SystemConfig &config)
{
    const arma::uword k = config.n_bs_users;
    const arma::uword l = config.n_relay_users;

    LinkGains g;

    ProductTable bu = make_products(realization.h_bs_users, precoders.bs_common,
                                    precoders.bs_private, 0);
    g.bu_common = std::move(bu.common);
    g.bu_private_diag = std::move(bu.diag);
    g.bu_private_all = std::move(bu.all);
    g.bu_private_exc = std::move(bu.exc);

    // the forwarded streams live on the first l true relay-antenna columns,
    // and occupy the precoder columns after the k user columns
    arma::cx_mat rs_channels =
        l > 0 ? arma::cx_mat(realization.h_bs_relay.cols(0, l - 1)) : arma::cx_mat(realization.h_bs_relay.n_rows, 0);
    ProductTable rs = make_products(rs_channels, precoders.bs_common, precoders.bs_private, k);
    g.rs_common = std::move(rs.common);
    g.rs_private_diag = std::move(rs.diag);
    g.rs_private_all = std::move(rs.all);
    g.rs_private_exc = std::move(rs.exc);

    ProductTable ru = make_products(realization.h_relay_rus, precoders.relay_common,
                                    precoders.relay_private, 0);
    g.ru_common = std::move(ru.common);
    g.ru_private_diag = std::move(ru.diag);
    g.ru_private_all = std::move(ru.all);
    g.ru_private_exc = std::move(ru.exc);

    // second phase at the BUs: the base station reuses its first k private
    // columns, so the products are a slice of the first-phase table
    arma::cx_mat bs_p2 = precoders.bs_private.cols(0, k - 1);
    ProductTable bu2 = make_products(realization.h_bs_users, arma::cx_vec(), bs_p2, 0);
    g.bu2_bs_diag = std::move(bu2.diag);
    g.bu2_bs_all = std::move(bu2.all);
    g.bu2_bs_exc = std::move(bu2.exc);

    g.bu2_relay_common.zeros(k);
    g.bu2_relay_private.zeros(k);
    if (l > 0)
    {
        arma::cx_vec c = realization.h_relay_bus.t() * precoders.relay_common;
        arma::mat x = arma::square(arma::abs(realization.h_relay_bus.t() * precoders.relay_private));
        for (arma::uword i = 0; i < k; ++i)
        {
            g.bu2_relay_common(i) = std::norm(c(i));
            g.bu2_relay_private(i) = arma::accu(x.row(i));
        }
    }
    return g;
}

Phase1Sinr sinr_phase1(const LinkGains &gains, double t1, const SystemConfig &config)
{
    if (!(t1 >= 0.0 && t1 <= 1.0))
        throw std::domain_error("sinr_phase1: t1 must lie in [0, 1]");

    const arma::uword k = config.n_bs_users;
    const arma::uword l = config.n_relay_users;
    const double n_streams = double(k + l);
    const double pc = config.p1 * (1.0 - t1);    // common-stream power
    const double pp = config.p1 * t1 / n_streams; // per-private-stream power

    Phase1Sinr s;
    s.bu_common.set_size(k);
    s.bu_private.set_size(k);
    s.rs_common.set_size(l);
    s.rs_private.set_size(l);

    for (arma::uword i = 0; i < k; ++i)
    {
        s.bu_common(i) = pc * gains.bu_common(i) / (1.0 + pp * gains.bu_private_all(i));
        s.bu_private(i) = pp * gains.bu_private_diag(i) / (1.0 + pp * gains.bu_private_exc(i));
    }
    for (arma::uword i = 0; i < l; ++i)
    {
        s.rs_common(i) = pc * gains.rs_common(i) / (1.0 + pp * gains.rs_private_all(i));
        s.rs_private(i) = pp * gains.rs_private_diag(i) / (1.0 + pp * gains.rs_private_exc(i));
    }
    return s;
}

arma::vec sinr_phase1_bu_common(const ChannelRealization &realization,
                                const PrecoderSet &precoders, double t1,
                                const SystemConfig &config)
{
    return sinr_phase1(compute_link_gains(realization, precoders, config), t1, config).bu_common;
}

arma::vec sinr_phase1_bu_private(const ChannelRealization &realization,
                                 const PrecoderSet &precoders, double t1,
                                 const SystemConfig &config)
{
    return sinr_phase1(compute_link_gains(realization, precoders, config), t1, config).bu_private;
}

arma::vec sinr_phase1_relay_common(const ChannelRealization &realization,
                                   const PrecoderSet &precoders, double t1,
                                   const SystemConfig &config)
{
    return sinr_phase1(compute_link_gains(realization, precoders, config), t1, config).rs_common;
}

arma::vec sinr_phase1_relay_private(const ChannelRealization &realization,
                                    const PrecoderSet &precoders, double t1,
                                    const SystemConfig &config)
{
    return sinr_phase1(compute_link_gains(realization, precoders, config), t1, config).rs_private;
}

Phase2Sinr sinr_phase2(const LinkGains &gains, double t2, const SystemConfig &config,
                       const arma::vec &bu_extra_interference)
{
    if (!(t2 >= 0.0 && t2 <= 1.0))
        throw std::domain_error("sinr_phase2: t2 must lie in [0, 1]");

    const arma::uword k = config.n_bs_users;
    const arma::uword l = config.n_relay_users;
    const double pc = config.p2 * (1.0 - t2);
    const double pp = l > 0 ? config.p2 * t2 / double(l) : 0.0;
    const double pb = config.p1 / double(k); // per-BU base-station power

    if (!bu_extra_interference.is_empty() && bu_extra_interference.n_elem != k)
        throw std::invalid_argument("sinr_phase2: bu_extra_interference must be empty or hold "
                                    "one entry per base-station user");

    Phase2Sinr s;
    s.ru_common.set_size(l);
    s.ru_private.set_size(l);
    s.bu_common.set_size(k);
    s.bu_private.set_size(k);

    for (arma::uword i = 0; i < l; ++i)
    {
        s.ru_common(i) = pc * gains.ru_common(i) / (1.0 + pp * gains.ru_private_all(i));
        s.ru_private(i) = pp * gains.ru_private_diag(i) / (1.0 + pp * gains.ru_private_exc(i));
    }
    for (arma::uword i = 0; i < k; ++i)
    {
        // the common stream is decoded before the user's own private stream,
        // so every base-station column still interferes here
        s.bu_common(i) = pc * gains.bu2_relay_common(i) /
                         (1.0 + pb * gains.bu2_bs_all(i) + pp * gains.bu2_relay_private(i));

        const double extra = bu_extra_interference.is_empty() ? 0.0 : bu_extra_interference(i);
        s.bu_private(i) = pb * gains.bu2_bs_diag(i) /
                          (1.0 + pb * gains.bu2_bs_exc(i) + pp * gains.bu2_relay_private(i) + extra);
    }
    return s;
}

Phase2Sinr sinr_phase2(const ChannelRealization &realization, const PrecoderSet &precoders,
                       double t2, const SystemConfig &config,
                       const arma::vec &bu_extra_interference)
{
    return sinr_phase2(compute_link_gains(realization, precoders, config), t2, config,
                       bu_extra_interference);
}

double residual_interference(double r_common_ru, double r_common_bu, double t2, double p2)
{
    if (!(r_common_ru >= 0.0) || !(r_common_bu >= 0.0))
        throw std::domain_error("residual_interference: rates must be non-negative");
    if (!(t2 >= 0.0 && t2 <= 1.0))
        throw std::domain_error("residual_interference: t2 must lie in [0, 1]");

    const double deficit = r_common_ru - std::min(r_common_bu, r_common_ru);
    return p2 * (1.0 - t2) * (std::exp2(deficit) - 1.0);
}

arma::vec residual_interference(double r_common_ru, const arma::vec &r_common_bu, double t2,
                                double p2)
{
    arma::vec out(r_common_bu.n_elem);
    for (arma::uword i = 0; i < r_common_bu.n_elem; ++i)
        out(i) = residual_interference(r_common_ru, r_common_bu(i), t2, p2);
    return out;
}

const char *to_string(Variant variant)
{
    switch (variant)
    {
    case Variant::r1:
        return "R1";
    case Variant::r2:
        return "R2";
    case Variant::r3:
        return "R3";
    case Variant::r4:
        return "R4";
    }
    return "?";
}

Variant variant_from_string(const std::string &name)
{
    if (name == "R1" || name == "r1")
        return Variant::r1;
    if (name == "R2" || name == "r2")
        return Variant::r2;
    if (name == "R3" || name == "r3")
        return Variant::r3;
    if (name == "R4" || name == "r4")
        return Variant::r4;
    throw std::invalid_argument("unknown sum-rate variant '" + name + "' (expected R1..R4)");
}

std::array<double, 4> sum_rate_variants(const PhaseRates &phase1, const PhaseRates &phase2)
{
    const double sum_rk = arma::accu(phase1.private_bu) + arma::accu(phase2.private_bu);

    // each forwarded stream carries one relay user's traffic: pair the
    // strongest first hop with the strongest second hop and take the
    // bottleneck of each pair
    arma::vec hop1 = arma::sort(phase1.private_relay_streams, "descend");
    arma::vec hop2 = arma::sort(phase2.private_ru, "descend");
    double sum_rl_paired = 0.0;
    for (arma::uword i = 0; i < hop1.n_elem && i < hop2.n_elem; ++i)
        sum_rl_paired += std::min(hop1(i), hop2(i));

    // summed in the same order as the paired loop so the bottleneck sum can
    // never exceed it by a rounding artifact
    double sum_rl_hop2 = 0.0;
    for (arma::uword i = 0; i < hop2.n_elem; ++i)
        sum_rl_hop2 += hop2(i);

    const double rc1 = phase1.common_rate;
    const double rc = std::min(rc1, phase2.common_rate);

    std::array<double, 4> v{};
    v[size_t(Variant::r1)] = 0.5 * (rc + sum_rl_paired + sum_rk);
    v[size_t(Variant::r2)] = 0.5 * (rc1 + sum_rl_paired + sum_rk);
    v[size_t(Variant::r3)] = 0.5 * (rc + sum_rl_hop2 + sum_rk);
    v[size_t(Variant::r4)] = 0.5 * (rc1 + sum_rl_hop2 + sum_rk);
    return v;
}

double variant_value(const RateReport &report, Variant variant)
{
    return report.variants[size_t(variant)];
}

RealizationSet::RealizationSet(const SystemConfig &config, arma::uword n_realizations,
                               unsigned n_threads)
    : config_(config)
{
    config_.validate();
    gains_.resize(n_realizations);
    detail::parallel_for(n_realizations, n_threads, [&](std::size_t i) {
        ChannelRealization r = draw_realization(config_, std::uint64_t(i));
        PrecoderSet p = build_precoders(r, config_);
        gains_[i] = compute_link_gains(r, p, config_);
    });
}

RateReport RealizationSet::evaluate(double t1, double t2) const
{
    return evaluate(t1, t2, config_.bu_phase2_mode);
}

RateReport RealizationSet::evaluate(double t1, double t2, BuPhase2Mode mode) const
{
    if (!(t1 > 0.0 && t1 <= 1.0) || !(t2 > 0.0 && t2 <= 1.0))
        throw std::domain_error("RealizationSet::evaluate: power splits must lie in (0, 1]");
    if (gains_.empty())
        throw std::logic_error("RealizationSet::evaluate: empty ensemble");

    const arma::uword k = config_.n_bs_users;
    const arma::uword l = config_.n_relay_users;
    const double n = double(gains_.size());

    arma::vec c1_bu(k, arma::fill::zeros), p1_bu(k, arma::fill::zeros);
    arma::vec c1_rs(l, arma::fill::zeros), p1_rs(l, arma::fill::zeros);
    arma::vec c2_ru(l, arma::fill::zeros), p2_ru(l, arma::fill::zeros);
    arma::vec c2_bu(k, arma::fill::zeros);

    for (const LinkGains &g : gains_)
    {
        Phase1Sinr s1 = sinr_phase1(g, t1, config_);
        for (arma::uword i = 0; i < k; ++i)
        {
            c1_bu(i) += bits(s1.bu_common(i));
            p1_bu(i) += bits(s1.bu_private(i));
        }
        for (arma::uword i = 0; i < l; ++i)
        {
            c1_rs(i) += bits(s1.rs_common(i));
            p1_rs(i) += bits(s1.rs_private(i));
        }

        Phase2Sinr s2 = sinr_phase2(g, t2, config_, arma::vec());
        for (arma::uword i = 0; i < l; ++i)
        {
            c2_ru(i) += bits(s2.ru_common(i));
            p2_ru(i) += bits(s2.ru_private(i));
        }
        if (mode == BuPhase2Mode::pci)
            for (arma::uword i = 0; i < k; ++i)
                c2_bu(i) += bits(s2.bu_common(i));
    }

    c1_bu /= n;
    p1_bu /= n;
    c1_rs /= n;
    p1_rs /= n;
    c2_ru /= n;
    p2_ru /= n;
    c2_bu /= n;

    RateReport rep;
    rep.mode = mode;
    rep.t1 = t1;
    rep.t2 = t2;

    rep.phase1.common_per_bu = c1_bu;
    rep.phase1.common_per_ru = arma::vec();
    rep.phase1.private_bu = p1_bu;
    rep.phase1.private_relay_streams = p1_rs;
    rep.phase1.private_ru = arma::vec();
    rep.phase1.common_relay = l > 0 ? c1_rs.min() : inf;
    rep.phase1.common_rate = c1_bu.min();

    rep.phase2.common_per_bu = c2_bu;
    rep.phase2.common_per_ru = c2_ru;
    rep.phase2.private_relay_streams = arma::vec();
    rep.phase2.private_ru = p2_ru;
    rep.phase2.common_relay = 0.0;
    rep.phase2.common_rate = l > 0 ? c2_ru.min() : inf;

    // BU second-phase private rates, which in the partial-cancellation mode
    // need the ergodic rates above first
    arma::vec i_res(k, arma::fill::zeros);
    arma::vec p2_bu(k, arma::fill::zeros);

    if (mode == BuPhase2Mode::pci)
    {
        if (l > 0)
            for (arma::uword i = 0; i < k; ++i)
                i_res(i) = residual_interference(rep.phase2.common_rate, c2_bu(i), t2, config_.p2);

        for (const LinkGains &g : gains_)
        {
            Phase2Sinr s2 = sinr_phase2(g, t2, config_, i_res);
            for (arma::uword i = 0; i < k; ++i)
                p2_bu(i) += bits(s2.bu_private(i));
        }
        p2_bu /= n;
    }
    else if (mode == BuPhase2Mode::fci)
    {
        // the full relay common stream stays as interference
        const double pc = config_.p2 * (1.0 - t2);
        for (const LinkGains &g : gains_)
        {
            arma::vec extra = pc * g.bu2_relay_common;
            Phase2Sinr s2 = sinr_phase2(g, t2, config_, extra);
            for (arma::uword i = 0; i < k; ++i)
                p2_bu(i) += bits(s2.bu_private(i));
        }
        p2_bu /= n;
    }

    rep.phase2.private_bu = p2_bu;
    rep.residual_interference_per_bu = i_res;
    rep.variants = sum_rate_variants(rep.phase1, rep.phase2);
    return rep;
}

RateReport ergodic_rates(const SystemConfig &config, double t1, double t2,
                         arma::uword n_realizations, unsigned n_threads)
{
    RealizationSet set(config, n_realizations, n_threads);
    return set.evaluate(t1, t2);
}

RateReport sdma_baseline(const SystemConfig &config, arma::uword n_realizations,
                         unsigned n_threads)
{
    return ergodic_rates(config, 1.0, 1.0, n_realizations, n_threads);
}

} // namespace rsrelay
