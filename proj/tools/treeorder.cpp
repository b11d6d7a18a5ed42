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

#include <iostream>

#include <CLI11.hpp>

#include "treeorder/cli/commands.hpp"

int main(int argc, char** argv)
{
    using namespace treeorder::cli;

    CLI::App app{"Tree-order restricted MLEs of normal means and their common variance"};
    app.set_version_flag("--version", version());
    app.require_subcommand(1);

    FitOptions fit;
    auto* fit_cmd = app.add_subcommand("fit", "Fit a dataset CSV (population_id,value)");
    fit_cmd->add_option("input", fit.input, "Dataset CSV")->required();
    fit_cmd->add_option("--format", fit.format, "text or json")->check(CLI::IsMember({"text", "json"}));
    fit_cmd->add_option("--out", fit.output, "Write the report to a file");

    SimulateOptions sim;
    auto* sim_cmd = app.add_subcommand("simulate", "Run a Monte Carlo experiment from a JSON config");
    sim_cmd->add_option("--config", sim.config, "Experiment config (JSON)")->required();
    sim_cmd->add_option("--out", sim.out_dir, "Output directory")->required();
    sim_cmd->add_option("--seed", sim.seed, "Override the config seed");
    sim_cmd->add_option("--workers", sim.workers, "Worker threads (default: TREEORDER_WORKERS or all cores)");
    sim_cmd->add_option("--bins", sim.bins, "Histogram bins");

    OracleOptions oracle;
    auto* oracle_cmd = app.add_subcommand("oracle-check", "Randomized check against subset enumeration");
    oracle_cmd->add_option("--trials", oracle.trials, "Number of random instances");
    oracle_cmd->add_option("--max-s", oracle.max_s, "Largest number of treatments (<= 20)");
    oracle_cmd->add_option("--seed", oracle.seed, "Seed");

    ReportOptions report;
    auto* report_cmd = app.add_subcommand("report", "Re-aggregate a stored records CSV");
    report_cmd->add_option("records", report.records, "records.csv written by simulate")->required();
    report_cmd->add_option("--out", report.out_dir, "Output directory")->required();
    report_cmd->add_option("--s", report.s, "Only this value of s");
    report_cmd->add_option("--bins", report.bins, "Histogram bins");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitIo;
    }

    if (*fit_cmd) return cmd_fit(fit, std::cout, std::cerr);
    if (*sim_cmd) return cmd_simulate(sim, std::cout, std::cerr);
    if (*oracle_cmd) return cmd_oracle_check(oracle, std::cout, std::cerr);
    return cmd_report(report, std::cout, std::cerr);
}
