/*
   Copyright 2026 The treeorder Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#include "treeorder/cli/commands.hpp"

#include <chrono>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <json.hpp>

#include "treeorder/cli/config.hpp"
#include "treeorder/cli/csv_io.hpp"
#include "treeorder/cli/oracle_check.hpp"
#include "treeorder/error.hpp"
#include "treeorder/estimator.hpp"
#include "treeorder/montecarlo.hpp"
#include "treeorder/summary.hpp"

#ifndef TREEORDER_VERSION
#define TREEORDER_VERSION "dev"
#endif

namespace treeorder::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char* kManifestName = "manifest.json";
constexpr const char* kRecordsName = "records.csv";
constexpr const char* kBoxXiName = "box_xi.csv";
constexpr const char* kBoxPenaltyName = "box_penalty.csv";
constexpr const char* kHistogramName = "histogram_xi.csv";
constexpr const char* kDiagnosticsName = "diagnostics.json";

template <class F>
int guarded(std::ostream& err, F&& body)
{
    try {
        return body();
    } catch (const ValidationError& e) {
        err << "error: " << e.what() << '\n';
        return kExitValidation;
    } catch (const IoError& e) {
        err << "error: " << e.what() << '\n';
        return kExitIo;
    } catch (const json::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitIo;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitValidation;
    }
}

std::ifstream open_input(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path + "'");
    return in;
}

void write_file(const fs::path& path, const std::string& content)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write '" + path.string() + "'");
    out << content;
    if (!out) throw IoError("write failed for '" + path.string() + "'");
}

std::string provenance_line(const std::string& digest)
{
    return std::string("# treeorder ") + TREEORDER_VERSION + " manifest=" + kManifestName +
           " config_digest=" + digest;
}

json to_json(const DistributionSummary& d)
{
    return {{"mean", d.mean}, {"q1", d.q1}, {"median", d.median}, {"q3", d.q3}};
}

json to_json(const MomentDiagnostics& m)
{
    return {{"n", m.n},
            {"mean", m.mean},
            {"variance", m.variance},
            {"skewness", m.skewness},
            {"excess_kurtosis", m.excess_kurtosis},
            {"target_variance", m.target_variance},
            {"mean_z", m.mean_z},
            {"variance_z", m.variance_z}};
}

std::optional<std::size_t> neyman_scott_m(const ExperimentConfig& config)
{
    if (const auto* r = std::get_if<regime::NeymanScott>(&config.plan.scenario.regime)) return r->m;
    return std::nullopt;
}

struct OutputFile {
    std::string name;
    std::size_t rows = 0;
};

// Aggregates records one value of s at a time and renders the box,
// histogram and diagnostics files.
class SummaryWriter {
public:
    SummaryWriter(const ExperimentConfig& config, std::string digest, std::size_t histogram_s)
        : config_(config), digest_(std::move(digest)), histogram_s_(histogram_s)
    {
        options_.sigma2 = config.plan.scenario.sigma2;
        options_.neyman_scott_m = neyman_scott_m(config);
    }

    void add(std::span<const ReplicationRecord> chunk)
    {
        for (const auto& r : chunk) {
            if (!pending_.empty() && r.s != pending_.front().s) flush();
            pending_.push_back(r);
        }
    }

    std::vector<OutputFile> finish(const fs::path& dir)
    {
        flush();
        const std::string head = provenance_line(digest_) + "\n";
        const std::string box_header = "s,count,q1,median,q3,whisker_low,whisker_high,n_outliers\n";

        std::vector<OutputFile> files;
        write_file(dir / kBoxXiName, head + "# statistic=xi\n" + box_header + box_xi_.str());
        files.push_back({kBoxXiName, rows_.size()});
        write_file(dir / kBoxPenaltyName, head + "# statistic=I2+I4\n" + box_header + box_penalty_.str());
        files.push_back({kBoxPenaltyName, rows_.size()});

        if (!histogram_.str().empty()) {
            write_file(dir / kHistogramName, head + histogram_.str());
            files.push_back({kHistogramName, config_.bins});
        }

        json diag;
        diag["manifest"] = kManifestName;
        diag["config_digest"] = digest_;
        diag["sigma2"] = options_.sigma2;
        if (options_.neyman_scott_m) {
            const double m = static_cast<double>(*options_.neyman_scott_m);
            diag["neyman_scott_limit"] = (m - 1.0) / m * options_.sigma2;
        }
        diag["per_s"] = per_s_;
        if (rows_.size() >= 2) {
            const auto table = consistency_table(rows_);
            json trends = {{"sigma2_error", to_string(table.sigma2_error)},
                           {"mu0_error", to_string(table.mu0_error)},
                           {"control_gap", to_string(table.control_gap)},
                           {"xi", to_string(table.xi)},
                           {"penalty", to_string(table.penalty)}};
            if (table.neyman_scott_error) trends["neyman_scott_error"] = to_string(*table.neyman_scott_error);
            diag["median_trends"] = trends;
        }
        write_file(dir / kDiagnosticsName, diag.dump(2) + "\n");
        files.push_back({kDiagnosticsName, rows_.size()});
        return files;
    }

private:
    static void box_row(std::ostringstream& out, std::size_t s, const BoxSummary& b)
    {
        out << s << ',' << b.count << ',' << format_exact(b.q1) << ',' << format_exact(b.median) << ','
            << format_exact(b.q3) << ',' << format_exact(b.whisker_low) << ',' << format_exact(b.whisker_high)
            << ',' << b.n_outliers << '\n';
    }

    void flush()
    {
        if (pending_.empty()) return;
        const std::size_t s = pending_.front().s;
        std::vector<double> xi, penalty;
        for (const auto& r : pending_) {
            xi.push_back(r.xi);
            penalty.push_back(r.terms.penalty());
        }
        box_row(box_xi_, s, box_summary(xi));
        box_row(box_penalty_, s, box_summary(penalty));

        if (s == histogram_s_) {
            const auto h = histogram(xi, config_.bins);
            histogram_ << "# statistic=xi s=" << s << "\nbin,lower,upper,count\n";
            for (std::size_t i = 0; i < h.counts.size(); ++i) {
                histogram_ << i << ',' << format_exact(h.bin_edges[i]) << ',' << format_exact(h.bin_edges[i + 1])
                           << ',' << h.counts[i] << '\n';
            }
        }

        auto row = consistency_row(pending_, options_);
        json entry = {{"s", s},
                      {"count", row.count},
                      {"N", pending_.front().total_size},
                      {"n0", pending_.front().control_size},
                      {"n", pending_.front().treatment_size},
                      {"sigma2_error", to_json(row.sigma2_error)},
                      {"mu0_error", to_json(row.mu0_error)},
                      {"control_gap", to_json(row.control_gap)},
                      {"xi", to_json(row.xi)},
                      {"penalty", to_json(row.penalty)}};
        if (row.neyman_scott_error) entry["neyman_scott_error"] = to_json(*row.neyman_scott_error);
        if (pending_.size() >= 2) entry["clt"] = to_json(clt_diagnostics(pending_, options_.sigma2));
        per_s_.push_back(std::move(entry));
        rows_.push_back(std::move(row));
        pending_.clear();
    }

    const ExperimentConfig& config_;
    std::string digest_;
    std::size_t histogram_s_;
    ConsistencyOptions options_;
    std::vector<ReplicationRecord> pending_;
    std::vector<ConsistencyRow> rows_;
    json per_s_ = json::array();
    std::ostringstream box_xi_, box_penalty_, histogram_;
};

std::string utc_timestamp()
{
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

ExperimentConfig load_config(const std::string& path)
{
    auto in = open_input(path);
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw IoError("config '" + path + "' is not valid JSON: " + e.what());
    }
    return parse_experiment_config(j);
}

std::string manifest_reference(const std::vector<std::string>& comments, std::string& digest)
{
    for (const auto& line : comments) {
        std::istringstream words(line);
        std::string word, manifest;
        while (words >> word) {
            if (word.rfind("manifest=", 0) == 0) manifest = word.substr(9);
            if (word.rfind("config_digest=", 0) == 0) digest = word.substr(14);
        }
        if (!manifest.empty()) return manifest;
    }
    throw IoError("records file carries no manifest reference");
}

void print_fit_text(std::ostream& out, const SampleSummary& summary, const MleFit& fit)
{
    out << "s            " << summary.treatments() << '\n';
    out << "N            " << fit.total_size << '\n';
    out << "mu0_hat      " << format_short(fit.mu0_hat) << '\n';
    out << "mu_hat      ";
    for (double m : fit.mu_hat) out << ' ' << format_short(m);
    out << '\n';
    out << "sigma2_hat   " << format_short(fit.sigma2_hat) << '\n';
    out << "I1           " << format_short(fit.terms.within_control) << '\n';
    out << "I2           " << format_short(fit.terms.control_adjustment) << '\n';
    out << "I3           " << format_short(fit.terms.within_treatments) << '\n';
    out << "I4           " << format_short(fit.terms.treatment_adjustment) << '\n';
    out << "xi           " << format_short(fit.xi) << '\n';
    if (summary.layout().equal_treatment_sizes()) {
        const auto b = mu0_bounds(summary);
        out << "bounds       rho=" << format_short(b.rho) << " lambda=" << format_short(b.lambda)
            << " lower=" << format_short(b.lower) << " upper=" << format_short(b.upper) << '\n';
    } else {
        out << "bounds       n/a (unequal treatment sizes)\n";
    }
}

json fit_json(const SampleSummary& summary, const MleFit& fit)
{
    json j = {{"s", summary.treatments()},
              {"N", fit.total_size},
              {"mu0_hat", fit.mu0_hat},
              {"mu_hat", fit.mu_hat},
              {"sigma2_hat", fit.sigma2_hat},
              {"I1", fit.terms.within_control},
              {"I2", fit.terms.control_adjustment},
              {"I3", fit.terms.within_treatments},
              {"I4", fit.terms.treatment_adjustment},
              {"xi", fit.xi},
              {"sample_means", std::vector<double>(summary.mean().begin(), summary.mean().end())}};
    if (summary.layout().equal_treatment_sizes()) {
        const auto b = mu0_bounds(summary);
        j["bounds"] = {{"rho", b.rho}, {"lambda", b.lambda}, {"lower", b.lower}, {"upper", b.upper}};
    } else {
        j["bounds"] = nullptr;
    }
    return j;
}

}  // namespace

std::string version()
{
    return TREEORDER_VERSION;
}

std::optional<std::size_t> workers_from_env()
{
    const char* value = std::getenv("TREEORDER_WORKERS");
    if (!value || !*value) return std::nullopt;
    char* end = nullptr;
    const unsigned long long n = std::strtoull(value, &end, 10);
    if (*end != '\0' || n == 0) return std::nullopt;
    return static_cast<std::size_t>(n);
}

int cmd_fit(const FitOptions& options, std::ostream& out, std::ostream& err)
{
    return guarded(err, [&] {
        require(options.format == "text" || options.format == "json", "format must be text or json");
        auto in = open_input(options.input);
        const auto summary = summarize(read_dataset_csv(in));
        const auto fit = mle_variance(summary);

        std::ostringstream report;
        if (options.format == "json") {
            report << fit_json(summary, fit).dump(2) << '\n';
        } else {
            print_fit_text(report, summary, fit);
        }
        if (options.output.empty()) {
            out << report.str();
        } else {
            write_file(options.output, report.str());
        }
        return kExitOk;
    });
}

int cmd_simulate(const SimulateOptions& options, std::ostream& out, std::ostream& err)
{
    return guarded(err, [&] {
        auto config = load_config(options.config);
        if (options.seed) config.plan.scenario.seed = *options.seed;
        if (options.bins) {
            require(*options.bins >= 1, "bins must be >= 1");
            config.bins = *options.bins;
        }
        const auto workers = options.workers ? *options.workers : workers_from_env().value_or(0);
        config.plan.worker_hint = workers;
        validate(config.plan);

        const fs::path dir(options.out_dir);
        std::error_code ec;
        fs::create_directories(dir, ec);
        if (ec) throw IoError("cannot create '" + dir.string() + "': " + ec.message());

        const auto digest = config_digest(config);
        std::ofstream records(dir / kRecordsName, std::ios::binary | std::ios::trunc);
        if (!records) throw IoError("cannot write records in '" + dir.string() + "'");
        records << provenance_line(digest) << '\n';
        write_records_header(records);

        SummaryWriter summaries(config, digest, config.plan.s_grid.back());
        std::size_t rows = 0;
        run_experiment_chunked(config.plan, [&](std::span<const ReplicationRecord> chunk) {
            for (const auto& r : chunk) write_record(records, r);
            summaries.add(chunk);
            rows += chunk.size();
        });
        records.close();
        if (!records) throw IoError("write failed for records");

        auto files = summaries.finish(dir);
        files.insert(files.begin(), OutputFile{kRecordsName, rows});

        json manifest;
        manifest["tool"] = "treeorder";
        manifest["version"] = version();
        manifest["created_utc"] = utc_timestamp();
        manifest["config"] = to_json(config);
        manifest["config_digest"] = digest;
        manifest["seed"] = config.plan.scenario.seed;
        manifest["workers"] = resolve_workers(workers);
        manifest["outputs"] = json::array();
        for (const auto& f : files) manifest["outputs"].push_back({{"file", f.name}, {"rows", f.rows}});
        write_file(dir / kManifestName, manifest.dump(2) + "\n");

        out << "wrote " << rows << " records for " << config.plan.s_grid.size() << " grid points to "
            << dir.string() << '\n';
        return kExitOk;
    });
}

int cmd_oracle_check(const OracleOptions& options, std::ostream& out, std::ostream& err)
{
    return guarded(err, [&] {
        require(options.max_s >= 1 && options.max_s <= kBruteForceMaxTreatments, "--max-s must lie in [1, 20]");
        if (options.trials == 0) {
            err << "warning: trials=0, nothing checked\n";
            out << "oracle check: PASS (vacuous, 0 trials)\n";
            return kExitOk;
        }
        const auto report = oracle_check(options.trials, options.max_s, options.seed);
        for (const auto& m : report.messages) err << "  " << m << '\n';
        out << "oracle check: " << (report.passed() ? "PASS" : "FAIL") << " (" << report.trials << " trials, "
            << report.failures << " failures, max |mu0 - enumeration| = " << format_short(report.max_mu0_discrepancy)
            << ")\n";
        return report.passed() ? kExitOk : kExitValidation;
    });
}

int cmd_report(const ReportOptions& options, std::ostream& out, std::ostream& err)
{
    return guarded(err, [&] {
        auto in = open_input(options.records);
        const auto file = read_records_csv(in);
        std::string digest;
        const auto manifest_name = manifest_reference(file.comments, digest);
        const fs::path manifest_path = fs::path(options.records).parent_path() / manifest_name;

        auto manifest_in = open_input(manifest_path.string());
        json manifest;
        try {
            manifest = json::parse(manifest_in);
        } catch (const json::parse_error& e) {
            throw IoError("manifest is not valid JSON: " + std::string(e.what()));
        }
        if (!manifest.contains("config")) throw IoError("manifest has no config");
        auto config = parse_experiment_config(manifest.at("config"));
        if (config_digest(config) != digest) throw IoError("records do not belong to the referenced manifest");

        // Schema: every grid point present, replications 0..R-1 in order,
        // sizes consistent with the regime.
        const auto& plan = config.plan;
        if (file.records.size() != plan.s_grid.size() * plan.replications) {
            throw IoError("records file has " + std::to_string(file.records.size()) + " rows, manifest expects " +
                          std::to_string(plan.s_grid.size() * plan.replications));
        }
        for (std::size_t k = 0; k < file.records.size(); ++k) {
            const auto& r = file.records[k];
            const std::size_t s = plan.s_grid[k / plan.replications];
            const auto sizes = sample_sizes(plan.scenario.regime, s);
            if (r.s != s || r.replication != k % plan.replications || r.control_size != sizes.control ||
                r.treatment_size != sizes.per_treatment ||
                r.total_size != sizes.control + sizes.treatments * sizes.per_treatment) {
                throw IoError("record " + std::to_string(k) + " does not match the manifest schema");
            }
        }

        std::vector<ReplicationRecord> records = file.records;
        std::size_t histogram_s = plan.s_grid.back();
        if (options.s) {
            std::erase_if(records, [&](const ReplicationRecord& r) { return r.s != *options.s; });
            require(!records.empty(), "no records with s=" + std::to_string(*options.s));
            histogram_s = *options.s;
        }
        if (options.bins) {
            require(*options.bins >= 1, "bins must be >= 1");
            config.bins = *options.bins;
        }

        const fs::path dir(options.out_dir);
        std::error_code ec;
        fs::create_directories(dir, ec);
        if (ec) throw IoError("cannot create '" + dir.string() + "': " + ec.message());

        SummaryWriter summaries(config, digest, histogram_s);
        summaries.add(records);
        const auto files = summaries.finish(dir);
        out << "regenerated " << files.size() << " summary files from " << records.size() << " records in "
            << dir.string() << '\n';
        return kExitOk;
    });
}

}  // namespace treeorder::cli
