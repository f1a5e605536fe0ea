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

#include "rsrelay/experiment.hpp"

#include <json.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

namespace rsrelay
{

const char *to_string(Method method)
{
    switch (method)
    {
    case Method::rsma_closed:
        return "rsma_closed";
    case Method::rsma_exhaustive:
        return "rsma_exhaustive";
    case Method::sdma:
        return "sdma";
    }
    return "?";
}

Method method_from_string(const std::string &name)
{
    if (name == "rsma_closed")
        return Method::rsma_closed;
    if (name == "rsma_exhaustive")
        return Method::rsma_exhaustive;
    if (name == "sdma")
        return Method::sdma;
    throw std::invalid_argument("unknown method '" + name +
                                "' (expected rsma_closed, rsma_exhaustive or sdma)");
}

const char *to_string(OutputFormat format)
{
    return format == OutputFormat::csv ? "csv" : "json";
}

OutputFormat output_format_from_string(const std::string &name)
{
    if (name == "csv")
        return OutputFormat::csv;
    if (name == "json")
        return OutputFormat::json;
    throw std::invalid_argument("unknown output format '" + name + "' (expected csv or json)");
}

SweepAxis SweepAxis::snr(std::vector<double> snr_db)
{
    SweepAxis axis;
    axis.kind = Kind::snr_db;
    axis.values = std::move(snr_db);
    return axis;
}

SweepAxis SweepAxis::rician(std::vector<double> factors)
{
    SweepAxis axis;
    axis.kind = Kind::rician_factor;
    axis.values = std::move(factors);
    return axis;
}

SweepAxis SweepAxis::antennas(std::vector<AntennaProfile> profiles)
{
    SweepAxis axis;
    axis.kind = Kind::antenna_profile;
    axis.profiles = std::move(profiles);
    return axis;
}

std::size_t SweepAxis::n_points() const
{
    return kind == Kind::antenna_profile ? profiles.size() : values.size();
}

void ExperimentSpec::validate() const
{
    std::vector<std::string> problems;

    if (axis.n_points() == 0)
        problems.push_back("sweep axis has no points");

    if (axis.kind == SweepAxis::Kind::antenna_profile)
    {
        for (std::size_t i = 0; i < axis.profiles.size(); ++i)
        {
            const AntennaProfile &p = axis.profiles[i];
            std::string tag = "antenna profile " + std::to_string(i) + ": ";
            if (p.n_bs_antennas < 1 || p.n_relay_antennas < 1 || p.n_bs_users < 1)
                problems.push_back(tag + "antenna and BS user counts must be at least 1");
            if (p.n_relay_users > p.n_relay_antennas)
                problems.push_back(tag + "n_relay_users must not exceed n_relay_antennas");
            if (p.n_bs_users + p.n_relay_users > p.n_bs_antennas)
                problems.push_back(tag + "n_bs_users + n_relay_users must not exceed n_bs_antennas");
        }
    }
    else
    {
        for (double v : axis.values)
            if (!std::isfinite(v))
            {
                problems.push_back("sweep values must be finite");
                break;
            }
        if (axis.kind == SweepAxis::Kind::rician_factor)
            for (double v : axis.values)
                if (v < 0.0)
                {
                    problems.push_back("rician_factor sweep values must be non-negative");
                    break;
                }
    }

    if (methods.empty())
        problems.push_back("methods is empty");
    if (variants.empty())
        problems.push_back("variants is empty");
    if (bu_modes.empty())
        problems.push_back("bu_modes is empty");
    if (n_realizations < 1)
        problems.push_back("n_realizations must be at least 1");
    if (grid.coarse < 1 || grid.refine < 1)
        problems.push_back("grid point counts must be at least 1");
    if (!(grid.t_min > 0.0 && grid.t_min <= 1.0))
        problems.push_back("grid t_min must lie in (0, 1]");
    if (p2_db && !std::isfinite(*p2_db))
        problems.push_back("p2_db must be finite");

    try
    {
        base.validate();
    }
    catch (const std::invalid_argument &e)
    {
        problems.push_back(std::string("base config: ") + e.what());
    }

    if (problems.empty())
        return;

    std::ostringstream os;
    os << "invalid experiment spec:";
    for (const auto &p : problems)
        os << "\n  - " << p;
    throw std::invalid_argument(os.str());
}

namespace
{

std::string fmt9(double v)
{
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

// the value a reader of the 9-digit text representation recovers
double round9(double v)
{
    return std::strtod(fmt9(v).c_str(), nullptr);
}

SystemConfig config_at_point(const ExperimentSpec &spec, std::size_t index)
{
    SystemConfig config = spec.base;
    switch (spec.axis.kind)
    {
    case SweepAxis::Kind::snr_db:
    {
        config.p1 = std::pow(10.0, spec.axis.values[index] / 10.0);
        config.p2 = spec.p2_db ? std::pow(10.0, *spec.p2_db / 10.0) : config.p1;
        break;
    }
    case SweepAxis::Kind::rician_factor:
        config.rician_factor = spec.axis.values[index];
        break;
    case SweepAxis::Kind::antenna_profile:
    {
        const AntennaProfile &p = spec.axis.profiles[index];
        config.n_bs_antennas = p.n_bs_antennas;
        config.n_relay_antennas = p.n_relay_antennas;
        config.n_bs_users = p.n_bs_users;
        config.n_relay_users = p.n_relay_users;
        break;
    }
    }
    return config;
}

double sum_or_zero(const arma::vec &v)
{
    return v.n_elem ? arma::accu(v) : 0.0;
}

ResultRow make_row(const SystemConfig &config, double snr_db_col, const RateReport &report,
                   Method method, Variant variant, double t1, double t2, double wall_ms)
{
    ResultRow row;
    row.snr_db = snr_db_col;
    row.rician_factor = config.rician_factor;
    row.n_bs_antennas = config.n_bs_antennas;
    row.n_relay_antennas = config.n_relay_antennas;
    row.n_bs_users = config.n_bs_users;
    row.n_relay_users = config.n_relay_users;
    row.epsilon = effective_epsilon(config, config.p1);
    row.method = method;
    row.variant = variant;
    row.bu_mode = report.mode;
    row.t1 = t1;
    row.t2 = t2;
    row.esr = variant_value(report, variant);
    row.rc_phase1 = report.phase1.common_rate;
    row.rc_phase2 = report.phase2.common_rate;
    row.sum_rk_phase1 = sum_or_zero(report.phase1.private_bu);
    row.sum_rl_phase1 = sum_or_zero(report.phase1.private_relay_streams);
    row.sum_rk_phase2 = sum_or_zero(report.phase2.private_bu);
    row.sum_rl_phase2 = sum_or_zero(report.phase2.private_ru);
    row.mean_i_res = report.residual_interference_per_bu.n_elem
                         ? arma::mean(report.residual_interference_per_bu)
                         : 0.0;
    row.wall_time_ms = wall_ms;
    row.seed = config.seed;
    return row;
}

double elapsed_ms(std::chrono::steady_clock::time_point start)
{
    using namespace std::chrono;
    return duration<double, std::milli>(steady_clock::now() - start).count();
}

} // namespace

std::vector<ResultRow> run_experiment(const ExperimentSpec &spec)
{
    spec.validate();

    std::vector<ResultRow> rows;
    rows.reserve(spec.axis.n_points() * spec.methods.size() * spec.bu_modes.size() *
                 spec.variants.size());

    for (std::size_t pi = 0; pi < spec.axis.n_points(); ++pi)
    {
        SystemConfig config = config_at_point(spec, pi);
        config.validate();
        const double snr_db_col = spec.axis.kind == SweepAxis::Kind::snr_db
                                      ? spec.axis.values[pi]
                                      : 10.0 * std::log10(config.p1);

        RealizationSet set(config, spec.n_realizations, spec.n_threads);

        for (Method method : spec.methods)
            for (BuPhase2Mode mode : spec.bu_modes)
            {
                if (method == Method::rsma_exhaustive)
                {
                    // the best split depends on the objective, so each
                    // variant gets its own search
                    for (Variant variant : spec.variants)
                    {
                        auto start = std::chrono::steady_clock::now();
                        AllocationResult alloc =
                            exhaustive_search(set, variant, spec.grid, mode, spec.n_threads);
                        RateReport report = set.evaluate(alloc.t1, alloc.t2, mode);
                        const double ms = spec.record_timings ? elapsed_ms(start) : 0.0;
                        rows.push_back(make_row(config, snr_db_col, report, method, variant,
                                                alloc.t1, alloc.t2, ms));
                    }
                    continue;
                }

                auto start = std::chrono::steady_clock::now();
                AllocationResult alloc = method == Method::sdma ? fixed_allocation(1.0, 1.0)
                                                                : closed_form_allocation(config);
                RateReport report = set.evaluate(alloc.t1, alloc.t2, mode);
                const double ms = spec.record_timings ? elapsed_ms(start) : 0.0;
                for (Variant variant : spec.variants)
                    rows.push_back(make_row(config, snr_db_col, report, method, variant, alloc.t1,
                                            alloc.t2, ms));
            }
    }

    return rows;
}

namespace
{

const char *const csv_header =
    "snr_db,rician_factor,n_bs_antennas,n_relay_antennas,n_bs_users,n_relay_users,"
    "epsilon,method,variant,bu_mode,t1,t2,esr,rc_phase1,rc_phase2,sum_rk_phase1,"
    "sum_rl_phase1,sum_rk_phase2,sum_rl_phase2,mean_i_res,wall_time_ms,seed";

} // namespace

std::string to_csv(const std::vector<ResultRow> &rows)
{
    std::ostringstream os;
    os << csv_header << '\n';
    for (const ResultRow &r : rows)
    {
        os << fmt9(r.snr_db) << ',' << fmt9(r.rician_factor) << ',' << r.n_bs_antennas << ','
           << r.n_relay_antennas << ',' << r.n_bs_users << ',' << r.n_relay_users << ','
           << fmt9(r.epsilon) << ',' << to_string(r.method) << ',' << to_string(r.variant) << ','
           << to_string(r.bu_mode) << ',' << fmt9(r.t1) << ',' << fmt9(r.t2) << ','
           << fmt9(r.esr) << ',' << fmt9(r.rc_phase1) << ',' << fmt9(r.rc_phase2) << ','
           << fmt9(r.sum_rk_phase1) << ',' << fmt9(r.sum_rl_phase1) << ','
           << fmt9(r.sum_rk_phase2) << ',' << fmt9(r.sum_rl_phase2) << ','
           << fmt9(r.mean_i_res) << ',' << fmt9(r.wall_time_ms) << ',' << r.seed << '\n';
    }
    return os.str();
}

std::string to_json(const std::vector<ResultRow> &rows)
{
    nlohmann::ordered_json doc = nlohmann::ordered_json::array();
    for (const ResultRow &r : rows)
    {
        nlohmann::ordered_json o;
        o["snr_db"] = round9(r.snr_db);
        o["rician_factor"] = round9(r.rician_factor);
        o["n_bs_antennas"] = r.n_bs_antennas;
        o["n_relay_antennas"] = r.n_relay_antennas;
        o["n_bs_users"] = r.n_bs_users;
        o["n_relay_users"] = r.n_relay_users;
        o["epsilon"] = round9(r.epsilon);
        o["method"] = to_string(r.method);
        o["variant"] = to_string(r.variant);
        o["bu_mode"] = to_string(r.bu_mode);
        o["t1"] = round9(r.t1);
        o["t2"] = round9(r.t2);
        o["esr"] = round9(r.esr);
        o["rc_phase1"] = round9(r.rc_phase1);
        o["rc_phase2"] = round9(r.rc_phase2);
        o["sum_rk_phase1"] = round9(r.sum_rk_phase1);
        o["sum_rl_phase1"] = round9(r.sum_rl_phase1);
        o["sum_rk_phase2"] = round9(r.sum_rk_phase2);
        o["sum_rl_phase2"] = round9(r.sum_rl_phase2);
        o["mean_i_res"] = round9(r.mean_i_res);
        o["wall_time_ms"] = round9(r.wall_time_ms);
        o["seed"] = r.seed;
        doc.push_back(std::move(o));
    }
    return doc.dump(2) + "\n";
}

void emit(const std::vector<ResultRow> &rows, OutputFormat format, const std::string &path)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("cannot open '" + path + "' for writing");
    out << (format == OutputFormat::csv ? to_csv(rows) : to_json(rows));
    out.flush();
    if (!out)
        throw std::runtime_error("failed while writing '" + path + "'");
}

namespace
{

std::vector<double> arange(double start, double step, double stop)
{
    std::vector<double> v;
    for (double x = start; x <= stop + 1e-9; x += step)
        v.push_back(x);
    return v;
}

} // namespace

ExperimentSpec preset(const std::string &name)
{
    ExperimentSpec spec;
    spec.base = SystemConfig{}; // N=16, M=8, K=8, L=8, 30 dB, K_R=10

    const auto snr_axis = SweepAxis::snr(arange(0.0, 5.0, 40.0));
    const auto constant_csit = CsitModel::make_constant(0.3);
    const auto scaling_csit = CsitModel::make_scaling(0.1);

    if (name == "fig2a" || name == "fig2b")
    {
        spec.axis = snr_axis;
        spec.base.csit_model = name == "fig2a" ? constant_csit : scaling_csit;
        spec.methods = {Method::rsma_closed, Method::rsma_exhaustive};
        spec.variants = {Variant::r1, Variant::r2, Variant::r3, Variant::r4};
        return spec;
    }
    if (name == "fig3a" || name == "fig3b")
    {
        spec.axis = snr_axis;
        spec.base.csit_model = name == "fig3a" ? constant_csit : scaling_csit;
        spec.methods = {Method::rsma_closed, Method::sdma};
        return spec;
    }
    if (name == "fig4a" || name == "fig4b")
    {
        spec.axis = snr_axis;
        spec.base.csit_model = name == "fig4a" ? constant_csit : scaling_csit;
        spec.methods = {Method::rsma_closed};
        spec.bu_modes = {BuPhase2Mode::pci, BuPhase2Mode::fci, BuPhase2Mode::none};
        return spec;
    }
    if (name == "fig5")
    {
        spec.axis = SweepAxis::rician({0.0, 1.0, 2.0, 5.0, 10.0, 20.0});
        spec.base.csit_model = scaling_csit; // base powers stay at 30 dB
        spec.methods = {Method::rsma_closed, Method::rsma_exhaustive, Method::sdma};
        spec.variants = {Variant::r1, Variant::r2};
        return spec;
    }

    throw std::invalid_argument("unknown preset '" + name +
                                "' (expected one of fig2a, fig2b, fig3a, fig3b, fig4a, fig4b, fig5)");
}

std::vector<std::string> preset_names()
{
    return {"fig2a", "fig2b", "fig3a", "fig3b", "fig4a", "fig4b", "fig5"};
}

namespace
{

using nlohmann::json;

arma::uword get_count(const json &doc, const char *key, arma::uword fallback)
{
    if (!doc.contains(key))
        return fallback;
    const json &v = doc.at(key);
    if (!v.is_number_integer())
        throw std::invalid_argument(std::string("config key '") + key + "' must be an integer");
    if (!v.is_number_unsigned() && v.get<std::int64_t>() < 0)
        throw std::invalid_argument(std::string("config key '") + key + "' must be non-negative");
    return v.get<arma::uword>();
}

double get_real(const json &doc, const char *key, double fallback)
{
    if (!doc.contains(key))
        return fallback;
    const json &v = doc.at(key);
    if (!v.is_number())
        throw std::invalid_argument(std::string("config key '") + key + "' must be a number");
    return v.get<double>();
}

std::string get_text(const json &doc, const char *key, const std::string &fallback)
{
    if (!doc.contains(key))
        return fallback;
    const json &v = doc.at(key);
    if (!v.is_string())
        throw std::invalid_argument(std::string("config key '") + key + "' must be a string");
    return v.get<std::string>();
}

} // namespace

SystemConfig system_config_from_json(const std::string &text)
{
    json doc;
    try
    {
        doc = json::parse(text);
    }
    catch (const json::parse_error &e)
    {
        throw std::invalid_argument(std::string("config is not valid JSON: ") + e.what());
    }
    if (!doc.is_object())
        throw std::invalid_argument("config JSON must be an object");

    static const std::set<std::string> known = {
        "n_bs_antennas", "n_relay_antennas", "n_bs_users",     "n_relay_users", "p1",
        "p2",            "rician_factor",    "bu_phase2_mode", "csit_model",    "seed"};
    for (const auto &item : doc.items())
        if (!known.count(item.key()))
            throw std::invalid_argument("unknown config key '" + item.key() + "'");

    SystemConfig config;
    config.n_bs_antennas = get_count(doc, "n_bs_antennas", config.n_bs_antennas);
    config.n_relay_antennas = get_count(doc, "n_relay_antennas", config.n_relay_antennas);
    config.n_bs_users = get_count(doc, "n_bs_users", config.n_bs_users);
    config.n_relay_users = get_count(doc, "n_relay_users", config.n_relay_users);
    config.p1 = get_real(doc, "p1", config.p1);
    config.p2 = get_real(doc, "p2", config.p2);
    config.rician_factor = get_real(doc, "rician_factor", config.rician_factor);
    config.bu_phase2_mode =
        bu_phase2_mode_from_string(get_text(doc, "bu_phase2_mode", to_string(config.bu_phase2_mode)));

    if (doc.contains("csit_model"))
    {
        const json &m = doc.at("csit_model");
        if (!m.is_object())
            throw std::invalid_argument("config key 'csit_model' must be an object");
        const std::string kind = get_text(m, "kind", "");
        if (kind == "constant")
        {
            for (const auto &item : m.items())
                if (item.key() != "kind" && item.key() != "epsilon")
                    throw std::invalid_argument("unknown csit_model key '" + item.key() + "'");
            config.csit_model =
                CsitModel::make_constant(get_real(m, "epsilon", CsitModel{}.epsilon));
        }
        else if (kind == "scaling")
        {
            for (const auto &item : m.items())
                if (item.key() != "kind" && item.key() != "tau")
                    throw std::invalid_argument("unknown csit_model key '" + item.key() + "'");
            config.csit_model = CsitModel::make_scaling(get_real(m, "tau", CsitModel{}.tau));
        }
        else
            throw std::invalid_argument("csit_model kind must be 'constant' or 'scaling'");
    }

    if (doc.contains("seed"))
    {
        const json &v = doc.at("seed");
        if (!v.is_number_integer())
            throw std::invalid_argument("config key 'seed' must be an integer");
        if (!v.is_number_unsigned() && v.get<std::int64_t>() < 0)
            throw std::invalid_argument("config key 'seed' must be non-negative");
        config.seed = v.get<std::uint64_t>();
    }

    config.validate();
    return config;
}

SystemConfig load_system_config(const std::string &path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::runtime_error("cannot read config file '" + path + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return system_config_from_json(buffer.str());
}

} // namespace rsrelay
