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

#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "treeorder/cli/commands.hpp"
#include "treeorder/cli/config.hpp"
#include "treeorder/cli/csv_io.hpp"
#include "treeorder/cli/oracle_check.hpp"
#include "treeorder/error.hpp"
#include "treeorder/estimator.hpp"

namespace fs = std::filesystem;
using namespace treeorder;
using namespace treeorder::cli;

namespace {

fs::path scratch(const std::string& name)
{
    const auto dir = fs::temp_directory_path() / ("treeorder_test_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

void write(const fs::path& path, const std::string& content)
{
    std::ofstream out(path, std::ios::binary);
    out << content;
}

std::string slurp(const fs::path& path)
{
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

const char* kSmokeConfig = R"({
  "regime": {"kind": "log_squared"},
  "s_grid": [10, 50, 100],
  "replications": 2,
  "seed": 4
})";

const std::vector<std::string> kDataFiles = {"records.csv", "box_xi.csv", "box_penalty.csv", "histogram_xi.csv",
                                             "diagnostics.json"};

std::size_t data_rows(const std::string& csv)
{
    std::size_t rows = 0;
    std::istringstream in(csv);
    std::string line;
    bool header = false;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        if (!header) {
            header = true;
            continue;
        }
        ++rows;
    }
    return rows;
}

int simulate(const fs::path& config, const fs::path& out, std::size_t workers = 1)
{
    std::ostringstream o, e;
    SimulateOptions opt;
    opt.config = config.string();
    opt.out_dir = out.string();
    opt.workers = workers;
    const int code = cmd_simulate(opt, o, e);
    INFO(e.str());
    return code;
}

}  // namespace

TEST_CASE("dataset csv parsing")
{
    std::istringstream in("population_id,value\n1,-1\n0,0\n0,2\n1,1\n");
    const auto s = summarize(read_dataset_csv(in));
    CHECK(s.mean()[0] == 1.0);
    CHECK(s.mean()[1] == 0.0);

    std::istringstream bad_header("pop,value\n0,1\n");
    CHECK_THROWS_AS(read_dataset_csv(bad_header), IoError);
    std::istringstream gap("population_id,value\n0,1\n2,1\n");
    CHECK_THROWS_AS(read_dataset_csv(gap), ValidationError);
    std::istringstream junk("population_id,value\n0,abc\n1,1\n");
    CHECK_THROWS_AS(read_dataset_csv(junk), IoError);
}

TEST_CASE("exact formatting round-trips")
{
    for (double v : {0.1, 1.0 / 3.0, -2.5e-300, 123456789.123456789, 0.0}) {
        CHECK(std::stod(format_exact(v)) == v);
        CHECK(std::stod(format_short(v)) == v);
    }
}

TEST_CASE("fit command on the two-population example")
{
    const auto dir = scratch("fit");
    write(dir / "data.csv", "population_id,value\n0,0\n0,2\n1,-1\n1,1\n");
    std::ostringstream out, err;
    REQUIRE(cmd_fit({(dir / "data.csv").string(), "text", ""}, out, err) == kExitOk);
    CHECK(out.str().find("sigma2_hat   1.25\n") != std::string::npos);
    CHECK(out.str().find("mu0_hat      0.5\n") != std::string::npos);
    CHECK(out.str().find("xi           0.5\n") != std::string::npos);

    std::ostringstream jout;
    REQUIRE(cmd_fit({(dir / "data.csv").string(), "json", ""}, jout, err) == kExitOk);
    const auto j = nlohmann::json::parse(jout.str());
    CHECK(j.at("sigma2_hat").get<double>() == 1.25);
    CHECK(j.at("mu0_hat").get<double>() == 0.5);
}

TEST_CASE("fit command errors")
{
    const auto dir = scratch("fit_errors");
    write(dir / "control_only.csv", "population_id,value\n0,1\n0,2\n");
    std::ostringstream out, err;
    CHECK(cmd_fit({(dir / "control_only.csv").string(), "text", ""}, out, err) == kExitValidation);
    CHECK(err.str().find("need s >= 1") != std::string::npos);
    CHECK(cmd_fit({(dir / "missing.csv").string(), "text", ""}, out, err) == kExitIo);
    write(dir / "malformed.csv", "population_id,value\n0,1,3\n");
    CHECK(cmd_fit({(dir / "malformed.csv").string(), "text", ""}, out, err) == kExitIo);
}

TEST_CASE("fit command on order-compatible data returns sample means")
{
    const auto dir = scratch("fit_ordered");
    write(dir / "data.csv", "population_id,value\n0,-1\n0,-3\n1,1\n1,2\n2,4\n");
    std::ostringstream out, err;
    REQUIRE(cmd_fit({(dir / "data.csv").string(), "json", ""}, out, err) == kExitOk);
    const auto j = nlohmann::json::parse(out.str());
    CHECK(j.at("mu0_hat").get<double>() == -2.0);
    CHECK(j.at("mu_hat") == nlohmann::json::array({1.5, 4.0}));
    CHECK(j.at("xi").get<double>() == 0.0);
}

TEST_CASE("config parsing is strict and round-trips")
{
    const auto config = parse_experiment_config(nlohmann::json::parse(kSmokeConfig));
    CHECK(config.plan.s_grid == std::vector<std::size_t>{10, 50, 100});
    CHECK(config.plan.scenario.seed == 4);
    const auto resolved = to_json(config);
    CHECK(resolved.contains("sigma2"));
    CHECK(resolved.contains("B"));
    CHECK(resolved.contains("mean_model"));
    const auto again = parse_experiment_config(resolved);
    CHECK(to_json(again) == resolved);
    CHECK(config_digest(again) == config_digest(config));

    auto extra = nlohmann::json::parse(kSmokeConfig);
    extra["replicates"] = 3;
    CHECK_THROWS_AS(parse_experiment_config(extra), ValidationError);
    auto zero = nlohmann::json::parse(kSmokeConfig);
    zero["replications"] = -1;
    CHECK_THROWS_AS(parse_experiment_config(zero), ValidationError);
    auto regime = nlohmann::json::parse(kSmokeConfig);
    regime["regime"] = {{"kind", "neyman_scott"}, {"n", 3}};
    CHECK_THROWS_AS(parse_experiment_config(regime), ValidationError);
}

TEST_CASE("simulate smoke run writes all outputs deterministically")
{
    const auto dir = scratch("simulate");
    write(dir / "config.json", kSmokeConfig);
    REQUIRE(simulate(dir / "config.json", dir / "a", 1) == kExitOk);
    REQUIRE(simulate(dir / "config.json", dir / "b", 8) == kExitOk);

    CHECK(data_rows(slurp(dir / "a" / "records.csv")) == 6);
    CHECK(data_rows(slurp(dir / "a" / "box_xi.csv")) == 3);
    for (const auto& name : kDataFiles) CHECK(slurp(dir / "a" / name) == slurp(dir / "b" / name));

    const auto manifest = nlohmann::json::parse(slurp(dir / "a" / "manifest.json"));
    CHECK(manifest.at("seed") == 4);
    CHECK(manifest.at("config").at("replications") == 2);
    CHECK(manifest.at("config").at("sigma2") == 1.0);
    CHECK(manifest.at("outputs").size() == kDataFiles.size());
}

TEST_CASE("simulate on a seven-point grid gives seven box rows and one histogram")
{
    const auto dir = scratch("case1");
    write(dir / "config.json", R"({"regime": {"kind": "neyman_scott", "m": 5},
        "s_grid": [10, 50, 100, 500, 1000, 5000, 10000], "replications": 3})");
    REQUIRE(simulate(dir / "config.json", dir / "out") == kExitOk);
    CHECK(data_rows(slurp(dir / "out" / "box_xi.csv")) == 7);
    CHECK(data_rows(slurp(dir / "out" / "box_penalty.csv")) == 7);
    const auto histogram = slurp(dir / "out" / "histogram_xi.csv");
    CHECK(histogram.find("s=10000") != std::string::npos);
    CHECK(data_rows(histogram) == 50);
    const auto diag = nlohmann::json::parse(slurp(dir / "out" / "diagnostics.json"));
    CHECK(diag.at("neyman_scott_limit").get<double>() == doctest::Approx(0.8));
}

TEST_CASE("simulate rejects bad configs")
{
    const auto dir = scratch("simulate_bad");
    write(dir / "broken.json", "{\"regime\": ");
    CHECK(simulate(dir / "broken.json", dir / "out") == kExitIo);
    write(dir / "invalid.json", R"({"regime": {"kind": "neyman_scott"}, "s_grid": [5, 5], "replications": 1})");
    CHECK(simulate(dir / "invalid.json", dir / "out") == kExitValidation);
    CHECK(simulate(dir / "absent.json", dir / "out") == kExitIo);
}

TEST_CASE("report regenerates identical summaries")
{
    const auto dir = scratch("report");
    write(dir / "config.json", kSmokeConfig);
    REQUIRE(simulate(dir / "config.json", dir / "run") == kExitOk);

    std::ostringstream out, err;
    REQUIRE(cmd_report({(dir / "run" / "records.csv").string(), (dir / "again").string(), {}, {}}, out, err) ==
            kExitOk);
    for (const auto& name : kDataFiles) {
        if (name == "records.csv") continue;
        CHECK(slurp(dir / "run" / name) == slurp(dir / "again" / name));
    }
}

TEST_CASE("report filtered to one s")
{
    const auto dir = scratch("report_filter");
    write(dir / "config.json", kSmokeConfig);
    REQUIRE(simulate(dir / "config.json", dir / "run") == kExitOk);
    std::ostringstream out, err;
    REQUIRE(cmd_report({(dir / "run" / "records.csv").string(), (dir / "one").string(), 50, {}}, out, err) ==
            kExitOk);
    const auto box = slurp(dir / "one" / "box_xi.csv");
    CHECK(data_rows(box) == 1);
    CHECK(box.find("\n50,2,") != std::string::npos);
    const auto diag = nlohmann::json::parse(slurp(dir / "one" / "diagnostics.json"));
    CHECK(diag.at("per_s").size() == 1);
    CHECK(diag.at("per_s")[0].at("s") == 50);
    CHECK(slurp(dir / "one" / "histogram_xi.csv").find("s=50") != std::string::npos);

    CHECK(cmd_report({(dir / "run" / "records.csv").string(), (dir / "none").string(), 77, {}}, out, err) ==
          kExitValidation);
}

TEST_CASE("report rejects truncated and mismatched records")
{
    const auto dir = scratch("report_bad");
    write(dir / "config.json", kSmokeConfig);
    REQUIRE(simulate(dir / "config.json", dir / "run") == kExitOk);
    const auto records = slurp(dir / "run" / "records.csv");

    std::ostringstream out, err;
    write(dir / "run" / "cut.csv", records.substr(0, records.size() - 20));
    CHECK(cmd_report({(dir / "run" / "cut.csv").string(), (dir / "x").string(), {}, {}}, out, err) == kExitIo);

    const auto last_row = records.rfind('\n', records.size() - 2);
    write(dir / "run" / "short.csv", records.substr(0, last_row + 1));
    CHECK(cmd_report({(dir / "run" / "short.csv").string(), (dir / "x").string(), {}, {}}, out, err) == kExitIo);

    auto other = nlohmann::json::parse(kSmokeConfig);
    other["seed"] = 5;
    write(dir / "other.json", other.dump());
    REQUIRE(simulate(dir / "other.json", dir / "other") == kExitOk);
    fs::copy_file(dir / "run" / "records.csv", dir / "other" / "foreign.csv");
    CHECK(cmd_report({(dir / "other" / "foreign.csv").string(), (dir / "x").string(), {}, {}}, out, err) == kExitIo);
}

TEST_CASE("records csv round-trips bit for bit")
{
    const auto dir = scratch("records_io");
    write(dir / "config.json", kSmokeConfig);
    REQUIRE(simulate(dir / "config.json", dir / "run") == kExitOk);
    std::ifstream in(dir / "run" / "records.csv", std::ios::binary);
    const auto file = read_records_csv(in);
    std::ostringstream rewritten;
    rewritten << file.comments.front() << '\n';
    write_records_header(rewritten);
    for (const auto& r : file.records) write_record(rewritten, r);
    CHECK(rewritten.str() == slurp(dir / "run" / "records.csv"));
}

TEST_CASE("oracle check passes on the shipped estimator")
{
    std::ostringstream out, err;
    CHECK(cmd_oracle_check({1000, 12, 1}, out, err) == kExitOk);
    CHECK(out.str().find("PASS") != std::string::npos);
}

TEST_CASE("oracle check catches a perturbed estimator")
{
    const auto report = oracle_check(200, 8, 3, [](const SampleSummary& s) { return mle_mu0(s) + 1e-9; });
    CHECK_FALSE(report.passed());
    CHECK(report.failures > 0);
    CHECK_FALSE(report.messages.empty());

    // Ignores the treatments entirely.
    const auto wrong = oracle_check(200, 8, 3, [](const SampleSummary& s) { return s.mean()[0]; });
    CHECK_FALSE(wrong.passed());
}

TEST_CASE("oracle check with zero trials")
{
    std::ostringstream out, err;
    CHECK(cmd_oracle_check({0, 12, 1}, out, err) == kExitOk);
    CHECK(out.str().find("vacuous") != std::string::npos);
    CHECK(err.str().find("warning") != std::string::npos);
    CHECK(cmd_oracle_check({10, 21, 1}, out, err) == kExitValidation);
}

TEST_CASE("worker count from the environment")
{
    ::setenv("TREEORDER_WORKERS", "3", 1);
    CHECK(workers_from_env() == std::optional<std::size_t>{3});
    ::setenv("TREEORDER_WORKERS", "zero", 1);
    CHECK_FALSE(workers_from_env().has_value());
    ::unsetenv("TREEORDER_WORKERS");
    CHECK_FALSE(workers_from_env().has_value());
}
