// SPDX-License-Identifier: Apache-2.0
//
// Copyright (C) 2026 The cfmimo authors
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

#include "cfmimo/config.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <istream>
#include <ostream>
#include <system_error>

namespace cfmimo {

namespace {

std::string trim(const std::string& s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos)
        return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

template <class T>
T parse_number(const std::string& key, const std::string& text)
{
    T v{};
    const char* first = text.data();
    const char* last = first + text.size();
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last || text.empty())
        throw std::invalid_argument("invalid value '" + text + "' for " + key);
    return v;
}

std::string format_double(double v)
{
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return ec == std::errc() ? std::string(buf, ptr) : std::string("nan");
}

bool parse_bool(const std::string& key, const std::string& text)
{
    if (text == "true" || text == "1")
        return true;
    if (text == "false" || text == "0")
        return false;
    throw std::invalid_argument("invalid value '" + text + "' for " + key + " (expected true or false)");
}

struct Entry {
    std::string key;
    std::function<void(RunSettings&, const std::string&)> set;
    std::function<std::string(const RunSettings&)> get;
};

Entry int_entry(std::string key, int ExperimentConfig::*field)
{
    return {key,
            [key, field](RunSettings& s, const std::string& v) { s.experiment.*field = parse_number<int>(key, v); },
            [field](const RunSettings& s) { return std::to_string(s.experiment.*field); }};
}

template <class Owner>
Entry double_entry(std::string key, Owner& (*owner)(RunSettings&), double Owner::*field, double mul = 1.0,
                   double div = 1.0)
{
    return {key,
            [key, owner, field, mul, div](RunSettings& s, const std::string& v) {
                owner(s).*field = parse_number<double>(key, v) * mul / div;
            },
            [owner, field, mul, div](const RunSettings& s) {
                return format_double(owner(const_cast<RunSettings&>(s)).*field * div / mul);
            }};
}

ExperimentConfig& exp_of(RunSettings& s) { return s.experiment; }
RadioConfig& radio_of(RunSettings& s) { return s.experiment.radio; }
PropagationParams& prop_of(RunSettings& s) { return s.experiment.propagation; }
MaxMinSettings& maxmin_of(RunSettings& s) { return s.experiment.maxmin; }
UtilityConfig& utility_of(RunSettings& s) { return s.experiment.utility; }

const std::vector<Entry>& entries()
{
    static const std::vector<Entry> table = [] {
        std::vector<Entry> t;
        t.push_back(int_entry("M", &ExperimentConfig::M));
        t.push_back(int_entry("K", &ExperimentConfig::K));
        t.push_back(double_entry("side", &exp_of, &ExperimentConfig::side_m));
        t.push_back(int_entry("tau", &ExperimentConfig::tau));
        t.push_back(int_entry("tau-up", &ExperimentConfig::tau_up));
        t.push_back(int_entry("tau-dp", &ExperimentConfig::tau_dp));
        t.push_back({"orthogonal-ul-pilots",
                     [](RunSettings& s, const std::string& v) {
                         s.experiment.orthogonal_ul_pilots = parse_bool("orthogonal-ul-pilots", v);
                     },
                     [](const RunSettings& s) { return std::string(s.experiment.orthogonal_ul_pilots ? "true" : "false"); }});
        t.push_back(int_entry("realizations", &ExperimentConfig::realizations));
        t.push_back({"seed",
                     [](RunSettings& s, const std::string& v) {
                         s.experiment.seed = parse_number<std::uint64_t>("seed", v);
                     },
                     [](const RunSettings& s) { return std::to_string(s.experiment.seed); }});
        t.push_back({"power",
                     [](RunSettings& s, const std::string& v) { s.experiment.power_mode = parse_power_mode(v); },
                     [](const RunSettings& s) { return to_string(s.experiment.power_mode); }});
        t.push_back({"metric",
                     [](RunSettings& s, const std::string& v) {
                         s.experiment.utility.variant = parse_utility_variant(v);
                     },
                     [](const RunSettings& s) { return to_string(s.experiment.utility.variant); }});
        t.push_back(double_entry("w", &utility_of, &UtilityConfig::w));
        t.push_back({"alpha", [](RunSettings& s, const std::string& v) { s.alpha = parse_number<double>("alpha", v); },
                     [](const RunSettings& s) { return format_double(s.alpha); }});
        t.push_back({"doppler",
                     [](RunSettings& s, const std::string& v) { s.doppler = parse_number<double>("doppler", v); },
                     [](const RunSettings& s) { return format_double(s.doppler); }});
        // budget and threshold share one slot: setting either selects its mode
        t.push_back({"budget",
                     [](RunSettings& s, const std::string& v) {
                         auto& sel = s.experiment.utility.selection;
                         sel.mode = Selection::Mode::budget;
                         sel.budget = v == "auto" ? -1 : parse_number<int>("budget", v);
                         if (sel.budget < 0 && v != "auto")
                             throw std::invalid_argument("budget must be non-negative or 'auto'");
                     },
                     nullptr});
        t.push_back({"threshold",
                     [](RunSettings& s, const std::string& v) {
                         auto& sel = s.experiment.utility.selection;
                         sel.mode = Selection::Mode::threshold;
                         sel.threshold = parse_number<double>("threshold", v);
                     },
                     nullptr});
        t.push_back(int_entry("jobs", &ExperimentConfig::jobs));
        t.push_back(int_entry("quadrature", &ExperimentConfig::quadrature_order));
        t.push_back({"output-dir", [](RunSettings& s, const std::string& v) { s.output_dir = v; },
                     [](const RunSettings& s) { return s.output_dir; }});
        t.push_back(double_entry("carrier-mhz", &prop_of, &PropagationParams::carrier_mhz));
        t.push_back(double_entry("h-ap", &prop_of, &PropagationParams::h_ap_m));
        t.push_back(double_entry("h-ue", &prop_of, &PropagationParams::h_ue_m));
        t.push_back(double_entry("d0", &prop_of, &PropagationParams::d0_m));
        t.push_back(double_entry("d1", &prop_of, &PropagationParams::d1_m));
        t.push_back(double_entry("shadowing-db", &prop_of, &PropagationParams::shadowing_db));
        t.push_back(double_entry("log-distance-unit", &prop_of, &PropagationParams::log_distance_unit_m));
        t.push_back(double_entry("bandwidth-mhz", &radio_of, &RadioConfig::bandwidth_hz, 1e6));
        t.push_back(double_entry("noise-figure-db", &radio_of, &RadioConfig::noise_figure_db));
        t.push_back(double_entry("ap-power-mw", &radio_of, &RadioConfig::ap_data_power_w, 1.0, 1e3));
        t.push_back(double_entry("ap-pilot-power-mw", &radio_of, &RadioConfig::ap_pilot_power_w, 1.0, 1e3));
        t.push_back(double_entry("ue-power-mw", &radio_of, &RadioConfig::ue_data_power_w, 1.0, 1e3));
        t.push_back(double_entry("ue-pilot-power-mw", &radio_of, &RadioConfig::ue_pilot_power_w, 1.0, 1e3));
        t.push_back(double_entry("antenna-gain-dbi", &radio_of, &RadioConfig::antenna_gain_dbi));
        t.push_back(double_entry("bisection-tol", &maxmin_of, &MaxMinSettings::bisection_tol));
        t.push_back({"max-bisection-iters",
                     [](RunSettings& s, const std::string& v) {
                         s.experiment.maxmin.max_bisection_iters = parse_number<int>("max-bisection-iters", v);
                     },
                     [](const RunSettings& s) { return std::to_string(s.experiment.maxmin.max_bisection_iters); }});
        t.push_back(double_entry("feasibility-tol", &maxmin_of, &MaxMinSettings::feasibility_tol));
        return t;
    }();
    return table;
}

}  // namespace

ExperimentConfig RunSettings::resolved() const
{
    ExperimentConfig cfg = experiment;
    if (experiment.K >= 1) {
        cfg.utility.alpha = Eigen::VectorXd::Constant(experiment.K, alpha);
        cfg.utility.doppler = Eigen::VectorXd::Constant(experiment.K, doppler);
    }
    return cfg;
}

const std::vector<std::string>& setting_keys()
{
    static const std::vector<std::string> keys = [] {
        std::vector<std::string> k;
        for (const auto& e : entries())
            k.push_back(e.key);
        return k;
    }();
    return keys;
}

void apply_setting(RunSettings& s, const std::string& key, const std::string& value)
{
    for (const auto& e : entries())
        if (e.key == key) {
            e.set(s, value);
            return;
        }
    throw std::invalid_argument("unknown setting '" + key + "'");
}

void apply_config(RunSettings& s, std::istream& in, const std::string& source)
{
    std::string raw;
    int line = 0;
    while (std::getline(in, raw)) {
        ++line;
        const auto hash = raw.find('#');
        const std::string text = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
        if (text.empty())
            continue;
        const auto eq = text.find('=');
        if (eq == std::string::npos)
            throw ConfigError(source + ":" + std::to_string(line) + ": expected 'key = value'", line);
        const std::string key = trim(text.substr(0, eq));
        const std::string value = trim(text.substr(eq + 1));
        try {
            apply_setting(s, key, value);
        } catch (const std::invalid_argument& e) {
            throw ConfigError(source + ":" + std::to_string(line) + ": " + e.what(), line);
        }
    }
}

void apply_config_file(RunSettings& s, const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot open config file '" + path + "'", 0);
    apply_config(s, in, path);
}

void write_settings(std::ostream& out, const RunSettings& s)
{
    for (const auto& e : entries()) {
        if (e.get) {
            out << e.key << " = " << e.get(s) << '\n';
            continue;
        }
        const auto& sel = s.experiment.utility.selection;
        if (e.key == "budget" && sel.mode == Selection::Mode::budget)
            out << "budget = " << (sel.budget < 0 ? std::string("auto") : std::to_string(sel.budget)) << '\n';
        if (e.key == "threshold" && sel.mode == Selection::Mode::threshold)
            out << "threshold = " << format_double(sel.threshold) << '\n';
    }
}

}  // namespace cfmimo
