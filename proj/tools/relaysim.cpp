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
// relaysim: command line front end over the experiment harness. Composes an
// ExperimentSpec from flags, a JSON system config and/or a named preset,
// runs it, and writes the rows as CSV or JSON plus a .meta.json sidecar
// describing the run.

#include "rsrelay/experiment.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace
{

std::string lower(std::string s)
{
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
    return s;
}

// "a:b:c" -> a, a+b, ..., up to c inclusive; a bare number is a single point
std::vector<double> parse_snr_range(const std::string &text)
{
    double start = 0.0, step = 0.0, stop = 0.0;
    if (std::sscanf(text.c_str(), "%lf:%lf:%lf", &start, &step, &stop) == 3)
    {
        if (step <= 0.0 || stop < start)
            throw std::invalid_argument("--snr range must be start:step:stop with step > 0");
        std::vector<double> points;
        for (double v = start; v <= stop + 1e-9; v += step)
            points.push_back(v);
        return points;
    }
    char trailing = 0;
    if (std::sscanf(text.c_str(), "%lf %c", &start, &trailing) == 1)
        return {start};
    throw std::invalid_argument("cannot parse --snr value '" + text + "'");
}

const char *axis_kind_name(rsrelay::SweepAxis::Kind kind)
{
    switch (kind)
    {
    case rsrelay::SweepAxis::Kind::snr_db:
        return "snr_db";
    case rsrelay::SweepAxis::Kind::rician_factor:
        return "rician_factor";
    case rsrelay::SweepAxis::Kind::antenna_profile:
        return "antenna_profile";
    }
    return "unknown";
}

void write_meta(const std::string &out_path, const rsrelay::ExperimentSpec &spec,
                const std::string &format_name, const std::string &preset_name,
                const std::string &config_path, std::size_t n_rows)
{
    nlohmann::ordered_json meta;
    meta["output"] = out_path;
    meta["format"] = format_name;
    meta["preset"] = preset_name.empty() ? nlohmann::ordered_json() : nlohmann::ordered_json(preset_name);
    meta["config_file"] =
        config_path.empty() ? nlohmann::ordered_json() : nlohmann::ordered_json(config_path);
    meta["axis"] = axis_kind_name(spec.axis.kind);
    meta["n_points"] = spec.axis.n_points();
    meta["n_rows"] = n_rows;

    nlohmann::ordered_json methods = nlohmann::ordered_json::array();
    for (auto m : spec.methods)
        methods.push_back(rsrelay::to_string(m));
    meta["methods"] = methods;

    nlohmann::ordered_json variants = nlohmann::ordered_json::array();
    for (auto v : spec.variants)
        variants.push_back(rsrelay::to_string(v));
    meta["variants"] = variants;

    nlohmann::ordered_json modes = nlohmann::ordered_json::array();
    for (auto m : spec.bu_modes)
        modes.push_back(rsrelay::to_string(m));
    meta["bu_modes"] = modes;

    meta["n_realizations"] = spec.n_realizations;
    meta["grid"] = {{"coarse", spec.grid.coarse}, {"refine", spec.grid.refine}, {"t_min", spec.grid.t_min}};
    meta["seed"] = spec.base.seed;
    meta["n_threads"] = spec.n_threads;
    meta["record_timings"] = spec.record_timings;
    meta["p2_db"] = spec.p2_db ? nlohmann::ordered_json(*spec.p2_db) : nlohmann::ordered_json();

    const std::string path = out_path + ".meta.json";
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("cannot write meta file '" + path + "'");
    out << meta.dump(2) << "\n";
}

} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"link-level simulator for rate-splitting multiple access over a "
                 "decode-and-forward relay"};

    std::string config_path;
    std::string preset_name;
    std::string snr_range;
    std::string out_path = "results.csv";
    std::string format_name;
    std::vector<std::string> method_names;
    std::vector<std::string> variant_names;
    std::vector<std::string> mode_names;
    std::uint64_t realizations = 0;
    std::uint64_t seed = 0;
    unsigned threads = 0;
    std::uint64_t grid_coarse = 0;
    std::uint64_t grid_refine = 0;
    double grid_tmin = 0.0;
    double rician = 0.0;
    double epsilon = 0.0;
    double tau = 0.0;
    double p2_db = 0.0;
    bool timings = false;
    bool list_presets = false;

    app.add_option("--config", config_path, "JSON file with system parameters")
        ->check(CLI::ExistingFile);
    app.add_option("--preset", preset_name,
                   "named experiment definition (see --list-presets); other flags override "
                   "its fields");
    app.add_option("--snr", snr_range, "transmit SNR sweep in dB, start:step:stop or one value");
    auto *opt_realizations =
        app.add_option("--realizations", realizations, "Monte Carlo draws per sweep point");
    auto *opt_seed = app.add_option("--seed", seed, "base seed of the channel stream family");
    auto *opt_method = app.add_option("--method", method_names,
                                      "allocation methods: rsma_closed, rsma_exhaustive, sdma")
                           ->delimiter(',');
    auto *opt_variant =
        app.add_option("--variant", variant_names, "sum-rate variants: r1, r2, r3, r4")
            ->delimiter(',');
    auto *opt_mode = app.add_option("--bu-mode", mode_names,
                                    "BU handling of the relay common stream: pci, fci, none")
                         ->delimiter(',');
    app.add_option("--out", out_path, "output file (default results.csv)");
    app.add_option("--format", format_name, "csv or json (default: from --out extension)");
    auto *opt_rician = app.add_option("--rician", rician, "Rician factor of the BS-relay link");
    auto *opt_eps = app.add_option("--epsilon", epsilon, "constant channel-estimate quality in [0, 1]");
    auto *opt_tau = app.add_option("--tau", tau, "power-scaling estimate quality exponent");
    auto *opt_p2 = app.add_option("--p2-db", p2_db, "pin the relay power to this SNR in dB");
    auto *opt_threads = app.add_option("--threads", threads, "worker threads (0 = hardware)");
    app.add_flag("--timings", timings, "record wall time per row (breaks byte-stable output)");
    auto *opt_coarse = app.add_option("--grid-coarse", grid_coarse, "coarse grid points per axis");
    auto *opt_refine = app.add_option("--grid-refine", grid_refine, "refined grid points per axis");
    auto *opt_tmin = app.add_option("--grid-tmin", grid_tmin, "smallest split on the coarse grid");
    app.add_flag("--list-presets", list_presets, "print the preset names and exit");

    opt_eps->excludes(opt_tau);

    CLI11_PARSE(app, argc, argv);

    try
    {
        if (list_presets)
        {
            for (const std::string &name : rsrelay::preset_names())
                std::cout << name << "\n";
            return 0;
        }

        rsrelay::ExperimentSpec spec;
        if (!preset_name.empty())
            spec = rsrelay::preset(lower(preset_name));
        else
            spec.axis = rsrelay::SweepAxis::snr(parse_snr_range("0:5:40"));

        if (!config_path.empty())
            spec.base = rsrelay::load_system_config(config_path);
        if (!snr_range.empty())
            spec.axis = rsrelay::SweepAxis::snr(parse_snr_range(snr_range));

        if (opt_method->count() > 0)
        {
            spec.methods.clear();
            for (const std::string &name : method_names)
                spec.methods.push_back(rsrelay::method_from_string(lower(name)));
        }
        if (opt_variant->count() > 0)
        {
            spec.variants.clear();
            for (const std::string &name : variant_names)
                spec.variants.push_back(rsrelay::variant_from_string(lower(name)));
        }
        if (opt_mode->count() > 0)
        {
            spec.bu_modes.clear();
            for (const std::string &name : mode_names)
                spec.bu_modes.push_back(rsrelay::bu_phase2_mode_from_string(lower(name)));
        }

        if (opt_realizations->count() > 0)
            spec.n_realizations = realizations;
        if (opt_seed->count() > 0)
            spec.base.seed = seed;
        if (opt_rician->count() > 0)
            spec.base.rician_factor = rician;
        if (opt_eps->count() > 0)
            spec.base.csit_model = rsrelay::CsitModel::make_constant(epsilon);
        if (opt_tau->count() > 0)
            spec.base.csit_model = rsrelay::CsitModel::make_scaling(tau);
        if (opt_p2->count() > 0)
            spec.p2_db = p2_db;
        if (opt_threads->count() > 0)
            spec.n_threads = threads;
        if (opt_coarse->count() > 0)
            spec.grid.coarse = grid_coarse;
        if (opt_refine->count() > 0)
            spec.grid.refine = grid_refine;
        if (opt_tmin->count() > 0)
            spec.grid.t_min = grid_tmin;
        spec.record_timings = timings;

        std::string format = lower(format_name);
        if (format.empty())
            format = out_path.size() >= 5 && out_path.substr(out_path.size() - 5) == ".json"
                         ? "json"
                         : "csv";

        spec.validate();
        const std::vector<rsrelay::ResultRow> rows = rsrelay::run_experiment(spec);
        rsrelay::emit(rows, rsrelay::output_format_from_string(format), out_path);
        write_meta(out_path, spec, format, lower(preset_name), config_path, rows.size());

        std::size_t saturated = 0;
        for (const rsrelay::ResultRow &row : rows)
            if (row.method == rsrelay::Method::rsma_closed && (row.t1 == 1.0 || row.t2 == 1.0))
                ++saturated;
        if (saturated > 0)
            std::cerr << "note: the closed-form split saturated to all-private transmission in "
                         "at least one phase on "
                      << saturated << " of " << rows.size() << " rows\n";

        std::cout << "wrote " << rows.size() << " rows to " << out_path << " (sidecar " << out_path
                  << ".meta.json)\n";
        return 0;
    }
    catch (const std::exception &e)
    {
        std::cerr << "relaysim: error: " << e.what() << "\n";
        return 1;
    }
}
