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

#ifndef rsrelay_channel_H
#define rsrelay_channel_H

#include <armadillo>
#include <cstdint>
#include <random>
#include <string>

namespace rsrelay
{

// Transmitter-side channel knowledge model. Either a constant quality
// coefficient epsilon in [0, 1] (1 = perfect knowledge), or an SNR-coupled
// quality epsilon = sqrt(1 - power^-tau) that improves with transmit power.
struct CsitModel
{
    enum class Kind
    {
        constant,
        scaling
    };

    Kind kind = Kind::constant;
    double epsilon = 0.3; // constant model: quality coefficient
    double tau = 0.1;     // scaling model: power exponent

    static CsitModel make_constant(double epsilon);
    static CsitModel make_scaling(double tau);
};

// Handling of the relay's common stream at the base-station users during the
// second phase: pci decodes as much of it as the link supports and treats the
// remainder as interference, fci treats all of it as interference, none drops
// the base-station users from the second phase entirely.
enum class BuPhase2Mode
{
    pci,
    fci,
    none
};

const char *to_string(BuPhase2Mode mode);
BuPhase2Mode bu_phase2_mode_from_string(const std::string &name);

// Full system parameterization. Powers are linear and noise-normalized, so
// p = 10^(snr_db/10) for unit-variance noise.
struct SystemConfig
{
    arma::uword n_bs_antennas = 16;   // N, base station
    arma::uword n_relay_antennas = 8; // M, relay
    arma::uword n_bs_users = 8;       // K, users served directly
    arma::uword n_relay_users = 8;    // L, users served through the relay
    double p1 = 1000.0;               // base-station transmit power
    double p2 = 1000.0;               // relay transmit power
    double rician_factor = 10.0;      // K-factor of the base-station to relay link
    CsitModel csit_model = {};
    BuPhase2Mode bu_phase2_mode = BuPhase2Mode::pci;
    std::uint64_t seed = 1;

    // Throws std::invalid_argument listing every violated constraint
    void validate() const;
};

// True channel together with the transmitter-side estimate it was built from
struct CsitPair
{
    arma::cx_mat channel;
    arma::cx_mat estimate;
};

// One Monte Carlo draw of every link in the network. Estimated counterparts
// exist for the links the transmitters precode against; the relay-to-BU link
// is only ever observed, never precoded, so it has no estimate.
struct ChannelRealization
{
    arma::cx_mat h_bs_users;      // N x K, true
    arma::cx_mat h_bs_users_est;  // N x K
    arma::cx_mat h_bs_relay;      // N x M, true
    arma::cx_mat h_bs_relay_est;  // N x M
    arma::cx_mat h_relay_rus;     // M x L, true
    arma::cx_mat h_relay_rus_est; // M x L
    arma::cx_mat h_relay_bus;     // M x K, true only
    double epsilon_used = 1.0;
};

// Channel-estimate quality coefficient for a given transmit power; constant
// models ignore the power, scaling models return sqrt(1 - power^-tau)
// clamped into [0, 1]
double effective_epsilon(const SystemConfig &config, double power);

// Draws (true, estimate) with i.i.d. unit-variance complex normal entries,
// coupled as  true = epsilon * estimate + sqrt(1 - epsilon^2) * error
CsitPair sample_rayleigh_with_csit(arma::uword n_rows, arma::uword n_cols, double epsilon,
                                   std::mt19937_64 &rng);

// Deterministic rank-one line-of-sight matrix: outer product of half-wavelength
// uniform-linear-array steering vectors at 30 deg departure / 45 deg arrival;
// every entry has unit modulus
arma::cx_mat los_matrix(arma::uword n_rows, arma::uword n_cols);

// Rician pair: shared deterministic line-of-sight component (known exactly on
// both sides) plus a Rayleigh-faded part with the estimate coupling above,
//   H = sqrt(k_factor/(k_factor+1)) * los + sqrt(1/(k_factor+1)) * H_w
CsitPair sample_rician_with_csit(arma::uword n_rows, arma::uword n_cols, double k_factor,
                                 double epsilon, std::mt19937_64 &rng);

// Complete draw for one realization index. Streams are derived by hashing
// (config.seed, index), so any subset of indices can be generated in any
// order, serially or in parallel, with identical results. The scaling CSIT
// model resolves epsilon per transmitter: base-station-side links use
// effective_epsilon(config, p1), relay-side links use
// effective_epsilon(config, p2); epsilon_used records the former.
ChannelRealization draw_realization(const SystemConfig &config, std::uint64_t index);

} // namespace rsrelay

#endif
