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

#ifndef rsrelay_experiment_H
#define rsrelay_experiment_H

#include "rsrelay/alloc.hpp"
#include "rsrelay/channel.hpp"
#include "rsrelay/ratecalc.hpp"

#include <armadillo>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace rsrelay
{

// Power-allocation strategies the harness can compare
enum class Method
{
    rsma_closed,     // closed-form split per phase
    rsma_exhaustive, // grid search per variant
    sdma             // fixed t1 = t2 = 1, no common stream
};

const char *to_string(Method method);
Method method_from_string(const std::string &name);

enum class OutputFormat
{
    csv,
    json
};

const char *to_string(OutputFormat format);
OutputFormat output_format_from_string(const std::string &name);

// One antenna/user geometry for profile sweeps
struct AntennaProfile
{
    arma::uword n_bs_antennas = 16;
    arma::uword n_relay_antennas = 8;
    arma::uword n_bs_users = 8;
    arma::uword n_relay_users = 8;
};

// Exactly one quantity varies across an experiment: transmit SNR, the
// Rician factor of the BS-relay link, or the antenna/user geometry.
struct SweepAxis
{
    enum class Kind
    {
        snr_db,
        rician_factor,
        antenna_profile
    };

    Kind kind = Kind::snr_db;
    std::vector<double> values;           // snr_db / rician_factor points
    std::vector<AntennaProfile> profiles; // antenna_profile points

    static SweepAxis snr(std::vector<double> snr_db);
    static SweepAxis rician(std::vector<double> factors);
    static SweepAxis antennas(std::vector<AntennaProfile> profiles);

    std::size_t n_points() const;
};

struct ExperimentSpec
{
    SystemConfig base;
    SweepAxis axis;
    std::vector<Method> methods = {Method::rsma_closed};
    std::vector<Variant> variants = {Variant::r1};
    std::vector<BuPhase2Mode> bu_modes = {BuPhase2Mode::pci};
    arma::uword n_realizations = 200;
    GridSpec grid;
    unsigned n_threads = 0;       // 0 = hardware concurrency
    bool record_timings = false;  // keep wall_time_ms at 0 for bit-stable files
    std::optional<double> p2_db;  // pins the relay power on an SNR axis

    // Throws std::invalid_argument listing every violated constraint
    void validate() const;
};

// One output record; field order here is the CSV column order
struct ResultRow
{
    double snr_db = 0.0;
    double rician_factor = 0.0;
    arma::uword n_bs_antennas = 0;
    arma::uword n_relay_antennas = 0;
    arma::uword n_bs_users = 0;
    arma::uword n_relay_users = 0;
    double epsilon = 0.0; // effective estimate quality at the BS power
    Method method = Method::rsma_closed;
    Variant variant = Variant::r1;
    BuPhase2Mode bu_mode = BuPhase2Mode::pci;
    double t1 = 1.0;
    double t2 = 1.0;
    double esr = 0.0; // the selected variant's ergodic sum rate
    double rc_phase1 = 0.0;
    double rc_phase2 = 0.0;
    double sum_rk_phase1 = 0.0;
    double sum_rl_phase1 = 0.0;
    double sum_rk_phase2 = 0.0;
    double sum_rl_phase2 = 0.0;
    double mean_i_res = 0.0;
    double wall_time_ms = 0.0;
    std::uint64_t seed = 0;
};

// Runs the sweep: for every sweep point a fresh seeded ensemble is built
// and every (method, bu_mode, variant) combination contributes one row, in
// that nesting order. Results are independent of n_threads.
std::vector<ResultRow> run_experiment(const ExperimentSpec &spec);

// Serialization with all floating values at 9 significant digits
std::string to_csv(const std::vector<ResultRow> &rows);
std::string to_json(const std::vector<ResultRow> &rows);
void emit(const std::vector<ResultRow> &rows, OutputFormat format, const std::string &path);

// Ready-made experiment definitions for the standard comparison sweeps:
//   fig2a/fig2b  closed form vs grid search, all variants, constant/scaling
//   fig3a/fig3b  closed form vs no common stream, R1, constant/scaling
//   fig4a/fig4b  BU handling of the relay common stream, constant/scaling
//   fig5         Rician-factor sweep at 30 dB, scaling
// All use the default geometry (N=16, M=8, K=8, L=8, Rician factor 10).
ExperimentSpec preset(const std::string &name);
std::vector<std::string> preset_names();

// Flat JSON object with SystemConfig field names; missing keys keep their
// defaults, unknown keys are an error. csit_model is a nested object
// {"kind": "constant"|"scaling", "epsilon"|"tau": value}.
SystemConfig system_config_from_json(const std::string &text);
SystemConfig load_system_config(const std::string &path);

} // namespace rsrelay

#endif
