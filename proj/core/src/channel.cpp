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

#include "rsrelay/channel.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace rsrelay
{

CsitModel CsitModel::make_constant(double epsilon)
{
    CsitModel m;
    m.kind = Kind::constant;
    m.epsilon = epsilon;
    return m;
}

CsitModel CsitModel::make_scaling(double tau)
{
    CsitModel m;
    m.kind = Kind::scaling;
    m.tau = tau;
    return m;
}

const char *to_string(BuPhase2Mode mode)
{
    switch (mode)
    {
    case BuPhase2Mode::pci:
        return "pci";
    case BuPhase2Mode::fci:
        return "fci";
    case BuPhase2Mode::none:
        return "none";
    }
    return "?";
}

BuPhase2Mode bu_phase2_mode_from_string(const std::string &name)
{
    if (name == "pci")
        return BuPhase2Mode::pci;
    if (name == "fci")
        return BuPhase2Mode::fci;
    if (name == "none")
        return BuPhase2Mode::none;
    throw std::invalid_argument("unknown BU phase-2 mode '" + name + "' (expected pci, fci or none)");
}

void SystemConfig::validate() const
{
    std::vector<std::string> problems;

    if (n_bs_antennas < 1)
        problems.push_back("n_bs_antennas must be at least 1");
    if (n_relay_antennas < 1)
        problems.push_back("n_relay_antennas must be at least 1");
    if (n_bs_users < 1)
        problems.push_back("n_bs_users must be at least 1");
    if (n_bs_users + n_relay_users > n_bs_antennas)
        problems.push_back("n_bs_users + n_relay_users must not exceed n_bs_antennas "
                           "(the base station spatially separates all first-phase streams)");
    if (n_relay_users > n_relay_antennas)
        problems.push_back("n_relay_users must not exceed n_relay_antennas");
    if (!(p1 > 0.0))
        problems.push_back("p1 must be positive");
    if (!(p2 > 0.0))
        problems.push_back("p2 must be positive");
    if (!(rician_factor >= 0.0))
        problems.push_back("rician_factor must be non-negative");
    if (csit_model.kind == CsitModel::Kind::constant)
    {
        if (!(csit_model.epsilon >= 0.0 && csit_model.epsilon <= 1.0))
            problems.push_back("csit epsilon must lie in [0, 1]");
    }
    else
    {
        if (!(csit_model.tau > 0.0))
            problems.push_back("csit tau must be positive");
    }

    if (problems.empty())
        return;

    std::ostringstream os;
    os << "invalid system configuration:";
    for (const auto &p : problems)
        os << "\n  - " << p;
    throw std::invalid_argument(os.str());
}

double effective_epsilon(const SystemConfig &config, double power)
{
    if (config.csit_model.kind == CsitModel::Kind::constant)
        return config.csit_model.epsilon;

    // epsilon^2 = 1 - power^-tau, clamped so low powers degrade to zero
    // knowledge instead of producing a negative square
    double e2 = 1.0 - std::pow(power, -config.csit_model.tau);
    e2 = std::clamp(e2, 0.0, 1.0);
    return std::sqrt(e2);
}

namespace
{

// Fills column by column, real part before imaginary part, so the stream
// consumption order is fixed by (n_rows, n_cols) alone
arma::cx_mat draw_cn01(arma::uword n_rows, arma::uword n_cols, std::mt19937_64 &rng)
{
    // unit-variance complex normal: each component has variance 1/2
    std::normal_distribution<double> comp(0.0, 1.0 / std::sqrt(2.0));
    arma::cx_mat out(n_rows, n_cols);
    for (arma::uword c = 0; c < n_cols; ++c)
        for (arma::uword r = 0; r < n_rows; ++r)
        {
            double re = comp(rng);
            double im = comp(rng);
            out(r, c) = std::complex<double>(re, im);
        }
    return out;
}

} // namespace

CsitPair sample_rayleigh_with_csit(arma::uword n_rows, arma::uword n_cols, double epsilon,
                                   std::mt19937_64 &rng)
{
    if (!(epsilon >= 0.0 && epsilon <= 1.0))
        throw std::domain_error("sample_rayleigh_with_csit: epsilon must lie in [0, 1]");

    CsitPair pair;
    pair.estimate = draw_cn01(n_rows, n_cols, rng);
    arma::cx_mat error = draw_cn01(n_rows, n_cols, rng);
    pair.channel = epsilon * pair.estimate + std::sqrt(1.0 - epsilon * epsilon) * error;
    return pair;
}

arma::cx_mat los_matrix(arma::uword n_rows, arma::uword n_cols)
{
    const double pi = arma::datum::pi;
    const double sin_aod = std::sin(pi / 6.0); // 30 deg departure
    const double sin_aoa = std::sin(pi / 4.0); // 45 deg arrival

    arma::cx_vec a_t(n_rows);
    for (arma::uword n = 0; n < n_rows; ++n)
        a_t(n) = std::exp(std::complex<double>(0.0, pi * double(n) * sin_aod));

    arma::cx_vec a_r(n_cols);
    for (arma::uword m = 0; m < n_cols; ++m)
        a_r(m) = std::exp(std::complex<double>(0.0, pi * double(m) * sin_aoa));

    return a_t * a_r.t();
}

CsitPair sample_rician_with_csit(arma::uword n_rows, arma::uword n_cols, double k_factor,
                                 double epsilon, std::mt19937_64 &rng)
{
    if (!(k_factor >= 0.0))
        throw std::domain_error("sample_rician_with_csit: k_factor must be non-negative");

    const double los_w = std::sqrt(k_factor / (k_factor + 1.0));
    const double nlos_w = std::sqrt(1.0 / (k_factor + 1.0));
    const arma::cx_mat los = los_matrix(n_rows, n_cols);

    CsitPair scattered = sample_rayleigh_with_csit(n_rows, n_cols, epsilon, rng);

    CsitPair pair;
    pair.channel = los_w * los + nlos_w * scattered.channel;
    pair.estimate = los_w * los + nlos_w * scattered.estimate;
    return pair;
}

namespace detail
{

// splitmix64 step, used to mix (seed, index) into decorrelated stream seeds
std::uint64_t splitmix64(std::uint64_t &state)
{
    state += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

std::mt19937_64 make_stream(std::uint64_t seed, std::uint64_t index)
{
    std::uint64_t state = seed ^ (0xa0761d6478bd642fULL + index * 0xe7037ed1a0b428dbULL);
    std::seed_seq seq{static_cast<unsigned>(splitmix64(state) >> 32),
                      static_cast<unsigned>(splitmix64(state)),
                      static_cast<unsigned>(splitmix64(state) >> 32),
                      static_cast<unsigned>(splitmix64(state))};
    return std::mt19937_64(seq);
}

} // namespace detail

ChannelRealization draw_realization(const SystemConfig &config, std::uint64_t index)
{
    const arma::uword n = config.n_bs_antennas;
    const arma::uword m = config.n_relay_antennas;
    const arma::uword k = config.n_bs_users;
    const arma::uword l = config.n_relay_users;

    const double eps1 = effective_epsilon(config, config.p1);
    const double eps2 = effective_epsilon(config, config.p2);

    std::mt19937_64 rng = detail::make_stream(config.seed, index);

    ChannelRealization out;

    CsitPair bu = sample_rayleigh_with_csit(n, k, eps1, rng);
    out.h_bs_users = std::move(bu.channel);
    out.h_bs_users_est = std::move(bu.estimate);

    CsitPair br = sample_rician_with_csit(n, m, config.rician_factor, eps1, rng);
    out.h_bs_relay = std::move(br.channel);
    out.h_bs_relay_est = std::move(br.estimate);

    CsitPair ru = sample_rayleigh_with_csit(m, l, eps2, rng);
    out.h_relay_rus = std::move(ru.channel);
    out.h_relay_rus_est = std::move(ru.estimate);

    // observed only, full knowledge never assumed anywhere
    out.h_relay_bus = draw_cn01(m, k, rng);

    out.epsilon_used = eps1;
    return out;
}

} // namespace rsrelay
