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

#include "treeorder/cli/config.hpp"

#include <cstdint>
#include <cstdio>
#include <initializer_list>
#include <string_view>

#include "treeorder/error.hpp"

namespace treeorder::cli {

using nlohmann::json;

namespace {

void expect_object(const json& j, std::string_view where, std::initializer_list<std::string_view> allowed)
{
    require(j.is_object(), std::string(where) + " must be a JSON object");
    for (const auto& item : j.items()) {
        bool known = false;
        for (auto key : allowed) known = known || item.key() == key;
        require(known, "unknown key '" + item.key() + "' in " + std::string(where));
    }
}

bool is_nonnegative_integer(const json& v)
{
    return v.is_number_unsigned() || (v.is_number_integer() && v.get<std::int64_t>() >= 0);
}

double get_real(const json& j, const char* key, double fallback, std::string_view where)
{
    if (!j.contains(key)) return fallback;
    const auto& v = j.at(key);
    require(v.is_number(), std::string(where) + "." + key + " must be a number");
    return v.get<double>();
}

std::size_t get_count(const json& j, const char* key, std::size_t fallback, std::string_view where)
{
    if (!j.contains(key)) return fallback;
    const auto& v = j.at(key);
    require(is_nonnegative_integer(v), std::string(where) + "." + key + " must be a nonnegative integer");
    return v.get<std::size_t>();
}

std::string get_kind(const json& j, std::string_view where)
{
    require(j.is_object() && j.contains("kind") && j.at("kind").is_string(),
            std::string(where) + ".kind must be a string");
    return j.at("kind").get<std::string>();
}

SizeSchedule parse_schedule(const json& j, std::string_view where)
{
    require(j.is_array(), std::string(where) + " must be a list of factors");
    SizeSchedule schedule;
    for (const auto& f : j) {
        expect_object(f, where, {"coef", "s_power", "log_power"});
        schedule.terms.push_back({get_real(f, "coef", 1.0, where), get_real(f, "s_power", 0.0, where),
                                  get_real(f, "log_power", 0.0, where)});
    }
    return schedule;
}

json schedule_json(const SizeSchedule& schedule)
{
    json out = json::array();
    for (const auto& t : schedule.terms) {
        out.push_back({{"coef", t.coef}, {"s_power", t.s_power}, {"log_power", t.log_power}});
    }
    return out;
}

RegimeSpec parse_regime(const json& j)
{
    const auto kind = get_kind(j, "regime");
    if (kind == "two_population") {
        expect_object(j, "regime", {"kind", "m", "mprime"});
        return regime::TwoPopulation{get_count(j, "m", 1, "regime"), get_count(j, "mprime", 1, "regime")};
    }
    if (kind == "fast_total") {
        expect_object(j, "regime", {"kind", "control", "treatment"});
        require(j.contains("control") && j.contains("treatment"), "fast_total needs control and treatment schedules");
        return regime::FastTotal{parse_schedule(j.at("control"), "regime.control"),
                                 parse_schedule(j.at("treatment"), "regime.treatment")};
    }
    if (kind == "control_heavy") {
        expect_object(j, "regime", {"kind", "exponent", "m"});
        return regime::ControlHeavy{get_real(j, "exponent", 2.0, "regime"), get_count(j, "m", 1, "regime")};
    }
    if (kind == "neyman_scott") {
        expect_object(j, "regime", {"kind", "m"});
        return regime::NeymanScott{get_count(j, "m", 2, "regime")};
    }
    if (kind == "log_squared") {
        expect_object(j, "regime", {"kind"});
        return regime::LogSquared{};
    }
    if (kind == "linear_control") {
        expect_object(j, "regime", {"kind", "c", "m"});
        return regime::LinearControl{get_real(j, "c", 1.0, "regime"), get_count(j, "m", 100, "regime")};
    }
    throw ValidationError("unknown regime kind '" + kind + "'");
}

json regime_json(const RegimeSpec& regime)
{
    json out = {{"kind", regime_name(regime)}};
    if (const auto* r = std::get_if<regime::TwoPopulation>(&regime)) {
        out["m"] = r->m;
        out["mprime"] = r->mprime;
    } else if (const auto* r = std::get_if<regime::FastTotal>(&regime)) {
        out["control"] = schedule_json(r->control);
        out["treatment"] = schedule_json(r->treatment);
    } else if (const auto* r = std::get_if<regime::ControlHeavy>(&regime)) {
        out["exponent"] = r->exponent;
        out["m"] = r->m;
    } else if (const auto* r = std::get_if<regime::NeymanScott>(&regime)) {
        out["m"] = r->m;
    } else if (const auto* r = std::get_if<regime::LinearControl>(&regime)) {
        out["c"] = r->c;
        out["m"] = r->m;
    }
    return out;
}

MeanModel parse_mean_model(const json& j)
{
    const auto kind = get_kind(j, "mean_model");
    if (kind == "all_zero") {
        expect_object(j, "mean_model", {"kind"});
        return mean_model::AllZero{};
    }
    if (kind == "constant_gap") {
        expect_object(j, "mean_model", {"kind", "mu0", "gap"});
        return mean_model::ConstantGap{get_real(j, "mu0", 0.0, "mean_model"), get_real(j, "gap", 0.0, "mean_model")};
    }
    if (kind == "explicit") {
        expect_object(j, "mean_model", {"kind", "mu0", "mu"});
        require(j.contains("mu") && j.at("mu").is_array(), "mean_model.mu must be a list");
        mean_model::Explicit m;
        m.mu0 = get_real(j, "mu0", 0.0, "mean_model");
        for (const auto& v : j.at("mu")) {
            require(v.is_number(), "mean_model.mu entries must be numbers");
            m.mu.push_back(v.get<double>());
        }
        return m;
    }
    throw ValidationError("unknown mean_model kind '" + kind + "'");
}

json mean_model_json(const MeanModel& model)
{
    if (const auto* m = std::get_if<mean_model::ConstantGap>(&model)) {
        return {{"kind", "constant_gap"}, {"mu0", m->mu0}, {"gap", m->gap}};
    }
    if (const auto* m = std::get_if<mean_model::Explicit>(&model)) {
        return {{"kind", "explicit"}, {"mu0", m->mu0}, {"mu", m->mu}};
    }
    return {{"kind", "all_zero"}};
}

}  // namespace

ExperimentConfig parse_experiment_config(const json& j)
{
    expect_object(j, "config",
                  {"regime", "mean_model", "sigma2", "B", "seed", "s_grid", "replications", "bins", "max_records"});
    require(j.contains("regime"), "config needs a regime");
    require(j.contains("s_grid") && j.at("s_grid").is_array(), "config needs an s_grid list");
    require(j.contains("replications"), "config needs replications");

    ExperimentConfig c;
    auto& scenario = c.plan.scenario;
    scenario.regime = parse_regime(j.at("regime"));
    if (j.contains("mean_model")) scenario.means = parse_mean_model(j.at("mean_model"));
    scenario.sigma2 = get_real(j, "sigma2", 1.0, "config");
    scenario.bound = get_real(j, "B", 1.0, "config");
    if (j.contains("seed")) {
        require(is_nonnegative_integer(j.at("seed")), "config.seed must be a nonnegative integer");
        scenario.seed = j.at("seed").get<std::uint64_t>();
    } else {
        scenario.seed = 1;
    }
    for (const auto& v : j.at("s_grid")) {
        require(is_nonnegative_integer(v), "s_grid entries must be positive integers");
        c.plan.s_grid.push_back(v.get<std::size_t>());
    }
    c.plan.replications = get_count(j, "replications", 0, "config");
    c.plan.max_records = get_count(j, "max_records", kDefaultMaxRecords, "config");
    c.bins = get_count(j, "bins", 50, "config");
    require(c.bins >= 1, "bins must be >= 1");
    validate(c.plan);
    return c;
}

json to_json(const ExperimentConfig& c)
{
    const auto& sc = c.plan.scenario;
    return {
        {"regime", regime_json(sc.regime)},
        {"mean_model", mean_model_json(sc.means)},
        {"sigma2", sc.sigma2},
        {"B", sc.bound},
        {"seed", sc.seed},
        {"s_grid", c.plan.s_grid},
        {"replications", c.plan.replications},
        {"bins", c.bins},
        {"max_records", c.plan.max_records},
    };
}

std::string config_digest(const ExperimentConfig& config)
{
    const auto text = to_json(config).dump();
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char ch : text) {
        h ^= ch;
        h *= 0x100000001b3ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

}  // namespace treeorder::cli
