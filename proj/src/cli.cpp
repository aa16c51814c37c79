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

#include "cfmimo/cli.hpp"

#include <charconv>
#include <filesystem>
#include <fstream>
#include <map>
#include <ostream>
#include <string>
#include <system_error>
#include <vector>

#include <CLI11.hpp>

#include "cfmimo/config.hpp"
#include "cfmimo/experiment.hpp"
#include "cfmimo/rates.hpp"

namespace cfmimo {

namespace {

namespace fs = std::filesystem;

std::string num(double v)
{
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return ec == std::errc() ? std::string(buf, ptr) : std::string("nan");
}

class CsvFile {
public:
    CsvFile(const fs::path& path, const std::string& header) : out_(path)
    {
        if (!out_)
            throw std::runtime_error("cannot write " + path.string());
        out_ << header << '\n';
    }

    template <class... T>
    void row(const T&... cells)
    {
        bool first = true;
        ((out_ << (first ? "" : ",") << cell(cells), first = false), ...);
        out_ << '\n';
    }

private:
    static std::string cell(double v) { return num(v); }
    static std::string cell(int v) { return std::to_string(v); }
    static std::string cell(std::size_t v) { return std::to_string(v); }
    static std::string cell(const std::string& v) { return v; }
    static std::string cell(const char* v) { return v; }

    std::ofstream out_;
};

void write_manifest(const fs::path& dir, const std::string& command, const RunSettings& s, const std::string& status,
                    const std::string& detail)
{
    std::ofstream m(dir / "manifest.txt");
    m << "# cfmimo run manifest; pass back with --config to reproduce\n";
    m << "# command: " << command << '\n';
    m << "# status: " << status << '\n';
    if (!detail.empty())
        m << "# detail: " << detail << '\n';
    write_settings(m, s);
}

void write_summary_row(CsvFile& f, const std::string& name, const StatSummary& s, int K)
{
    f.row(name, s.mean, s.mean / K, s.p5, s.p50, s.p90);
}

void write_chd(const fs::path& dir, const ChdStudy& study, int K)
{
    CsvFile samples(dir / "chd.csv", "realization,ue,chd");
    for (std::size_t i = 0; i < study.samples.size(); ++i)
        samples.row(static_cast<int>(i / K), static_cast<int>(i % K), study.samples[i]);
    CsvFile cdf(dir / "chd_cdf.csv", "chd,probability");
    for (const auto& [v, p] : empirical_cdf(study.samples))
        cdf.row(v, p);
    std::size_t below = 0;
    for (double v : study.samples)
        below += v < study.collocated_reference ? 1 : 0;
    CsvFile sum(dir / "chd_summary.csv", "collocated_reference,mean,p5,p50,p90,fraction_below_reference");
    sum.row(study.collocated_reference, study.summary.mean, study.summary.p5, study.summary.p50, study.summary.p90,
            static_cast<double>(below) / static_cast<double>(study.samples.size()));
}

void run_chd(const fs::path& dir, const ExperimentConfig& cfg)
{
    write_chd(dir, chd_study(cfg), cfg.K);
}

void run_schemes(const fs::path& dir, const ExperimentConfig& cfg)
{
    const ExperimentResult res = run_experiment(cfg);
    CsvFile rows(dir / "schemes.csv", "realization,scheme,sum_throughput_bps,mean_ue_throughput_bps");
    for (const auto& r : res.realizations)
        for (const auto& rep : r.reports) {
            const double sum = rep.throughput.sum();
            rows.row(r.index, to_string(rep.scheme), sum, sum / cfg.K);
        }
    CsvFile sum(dir / "summary.csv",
                "scheme,mean_sum_throughput_bps,avg_ue_throughput_bps,p5_sum_bps,p50_sum_bps,p90_sum_bps");
    for (const auto& s : res.schemes)
        write_summary_row(sum, to_string(s.scheme), s.sum_throughput, cfg.K);

    CsvFile chd(dir / "chd.csv", "realization,ue,chd");
    for (const auto& r : res.realizations)
        for (Eigen::Index k = 0; k < r.chd.size(); ++k)
            chd.row(r.index, static_cast<int>(k), r.chd[k]);
}

void run_metrics(const fs::path& dir, const ExperimentConfig& cfg)
{
    const std::vector<UtilityVariant> variants = {UtilityVariant::abs_rate, UtilityVariant::abs_throughput,
                                                  UtilityVariant::chd_multiplicative};
    const MetricComparison cmp = compare_metrics(cfg, variants);
    CsvFile rows(dir / "metrics.csv", "realization,metric,ubpa_sum_throughput_bps");
    for (int i = 0; i < cfg.realizations; ++i)
        for (std::size_t v = 0; v < variants.size(); ++v)
            rows.row(i, to_string(variants[v]), cmp.ubpa_sum_throughput[v].samples[static_cast<std::size_t>(i)]);
    CsvFile sum(dir / "summary.csv",
                "metric,mean_sum_throughput_bps,avg_ue_throughput_bps,p5_sum_bps,p50_sum_bps,p90_sum_bps");
    for (std::size_t v = 0; v < variants.size(); ++v)
        write_summary_row(sum, to_string(variants[v]), cmp.ubpa_sum_throughput[v], cfg.K);
}

void run_single(const fs::path& dir, const ExperimentConfig& cfg)
{
    const NetworkState net = draw_network(cfg, 0);
    const RealizationResult r = evaluate_network(cfg, 0, net);
    const RateReport& s = r.report(Scheme::scsi);
    const RateReport& i = r.report(Scheme::icsi);
    const RateReport& u = r.report(Scheme::ubpa);

    CsvFile ues(dir / "per_ue.csv",
                "ue,chd,rate_scsi,rate_icsi,rate_ubpa,throughput_scsi_bps,throughput_icsi_bps,throughput_ubpa_bps,"
                "ubpa_pilot,utility");
    for (int k = 0; k < cfg.K; ++k)
        ues.row(k, r.chd[k], s.rate[k], i.rate[k], u.rate[k], s.throughput[k], i.throughput[k], u.throughput[k],
                u.assignment.contains(k) ? 1 : 0, u.utility.value[k]);

    CsvFile pos(dir / "positions.csv", "kind,index,x_m,y_m");
    for (std::size_t m = 0; m < net.deployment.aps.size(); ++m)
        pos.row("ap", m, net.deployment.aps[m].x, net.deployment.aps[m].y);
    for (std::size_t k = 0; k < net.deployment.ues.size(); ++k)
        pos.row("ue", k, net.deployment.ues[k].x, net.deployment.ues[k].y);

    CsvFile lsf(dir / "large_scale.csv", "ap,ue,beta,gamma,eta");
    for (int m = 0; m < cfg.M; ++m)
        for (int k = 0; k < cfg.K; ++k)
            lsf.row(m, k, net.large_scale.beta(m, k), net.large_scale.gamma(m, k), net.power.eta(m, k));
}

}  // namespace

int parse_and_run(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Cell-free massive MIMO downlink pilot assignment simulator", "cfmimo"};
    app.fallthrough();
    app.require_subcommand(1);

    std::string config_path;
    app.add_option("--config", config_path, "flat key = value settings file");

    // flag name -> value; applied after the config file so flags win
    struct FlagSpec {
        const char* flag;
        const char* key;
        const char* help;
    };
    const std::vector<FlagSpec> specs = {
        {"--M", "M", "number of APs"},
        {"--K", "K", "number of UEs"},
        {"--side", "side", "side of the square area in meters"},
        {"--tau", "tau", "frame length in symbols"},
        {"--tau-up", "tau-up", "uplink pilot symbols"},
        {"--tau-dp", "tau-dp", "downlink pilot symbols of ubPA"},
        {"--realizations", "realizations", "number of large-scale realizations"},
        {"--seed", "seed", "experiment seed"},
        {"--power", "power", "uniform or maxmin"},
        {"--metric", "metric",
         "abs_rate, abs_throughput, rel_rate, rel_throughput, inverse_rate, chd_add or chd_mul"},
        {"--w", "w", "Doppler weight in [0, 1]"},
        {"--budget", "budget", "number of UEs given a downlink pilot, or 'auto' for tau-dp"},
        {"--threshold", "threshold", "select UEs whose utility exceeds this value"},
        {"--output-dir", "output-dir", "directory for CSV files and the manifest"},
        {"--jobs", "jobs", "worker threads"},
    };
    std::map<std::string, std::string> values;
    std::vector<std::pair<CLI::Option*, std::string>> given;
    for (const auto& s : specs)
        given.emplace_back(app.add_option(s.flag, values[s.key], s.help), s.key);
    app.get_option("--budget")->excludes(app.get_option("--threshold"));

    const std::vector<std::pair<std::string, std::string>> commands = {
        {"chd-cdf", "CDF of the channel hardening degree"},
        {"compare-schemes", "net throughput of sCSI, iCSI and ubPA"},
        {"compare-metrics", "ubPA net throughput under different pilot utility metrics"},
        {"single-shot", "one realization with per-UE output"},
    };
    for (const auto& [name, help] : commands)
        app.add_subcommand(name, help);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitConfigError;
    }
    const std::string command = app.get_subcommands().front()->get_name();

    RunSettings settings;
    ExperimentConfig cfg;
    try {
        if (!config_path.empty())
            apply_config_file(settings, config_path);
        for (const auto& [opt, key] : given)
            if (opt->count() > 0) {
                try {
                    apply_setting(settings, key, values[key]);
                } catch (const std::invalid_argument& e) {
                    throw ConfigError(std::string("--") + key + ": " + e.what(), 0);
                }
            }
        cfg = settings.resolved();
        if (command == "chd-cdf")
            cfg.validate_geometry();
        else
            cfg.validate();
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << '\n';
        return kExitConfigError;
    } catch (const std::invalid_argument& e) {
        err << "config error: " << e.what() << '\n';
        return kExitConfigError;
    }

    const fs::path dir(settings.output_dir);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) {
        err << "cannot create output directory " << dir << ": " << ec.message() << '\n';
        return kExitConfigError;
    }

    try {
        if (command == "chd-cdf")
            run_chd(dir, cfg);
        else if (command == "compare-schemes")
            run_schemes(dir, cfg);
        else if (command == "compare-metrics")
            run_metrics(dir, cfg);
        else
            run_single(dir, cfg);
    } catch (const OptimizationFailure& e) {
        write_manifest(dir, command, settings, "solver_failure", e.what());
        err << "solver failure: " << e.what() << " (best certified min-SINR " << e.achieved_min_sinr()
            << "); outputs in " << dir << " are incomplete\n";
        return kExitSolverFailure;
    }

    write_manifest(dir, command, settings, "ok", "");
    out << command << ": wrote results to " << dir.string() << '\n';
    return kExitOk;
}

}  // namespace cfmimo
