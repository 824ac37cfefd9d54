/*
   Copyright 2026 The WorkerRep Authors

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

#include "workerrep/sim/scenario.hpp"

#include <array>
#include <cmath>
#include <cstdio>
#include <set>

#include <json.hpp>

namespace workerrep::sim {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

constexpr std::array<std::pair<Archetype, std::string_view>, 7> kArchetypes{{
    {Archetype::kHonest, "honest"},
    {Archetype::kColluder, "colluder"},
    {Archetype::kBadMouther, "bad-mouther"},
    {Archetype::kBallotStuffer, "ballot-stuffer"},
    {Archetype::kSybilSpawner, "sybil-spawner"},
    {Archetype::kReentrant, "re-entrant"},
    {Archetype::kReciprocator, "reciprocator"},
}};

[[noreturn]] void invalid(const std::string& what) { fail(ErrorCode::kConfigInvalid, what); }

// Rejects keys the schema does not know, so typos do not silently fall back to defaults.
void check_keys(const json& obj, std::initializer_list<std::string_view> allowed, const std::string& where) {
    if (!obj.is_object()) invalid(where + " must be an object");
    for (const auto& [key, value] : obj.items()) {
        bool known = false;
        for (auto a : allowed) known = known || key == a;
        if (!known) invalid("unknown key " + where + "." + key);
    }
}

template <class T>
void read(const json& obj, const char* key, T& out, const std::string& where) {
    if (!obj.contains(key)) return;
    try {
        out = obj.at(key).get<T>();
    } catch (const json::exception& e) {
        invalid(where + "." + key + ": " + e.what());
    }
}

Fixed read_fixed(const json& v, const std::string& where) {
    try {
        if (v.is_string()) return Fixed::parse(v.get<std::string>());
        if (v.is_number()) {
            double d = v.get<double>();
            if (!std::isfinite(d) || std::fabs(d) > 1e12) invalid(where + " out of range");
            return Fixed::from_raw(static_cast<std::int64_t>(std::llround(d * Fixed::kScale)));
        }
    } catch (const ProtocolError& e) {
        invalid(where + ": " + e.what());
    }
    invalid(where + " must be a number");
}

void read_fixed(const json& obj, const char* key, Fixed& out, const std::string& where) {
    if (obj.contains(key)) out = read_fixed(obj.at(key), where + "." + key);
}

std::pair<std::int64_t, std::int64_t> read_range(const json& v, const std::string& where) {
    if (!v.is_array() || v.size() != 2 || !v[0].is_number_integer() || !v[1].is_number_integer()) {
        invalid(where + " must be a [min, max] pair of integers");
    }
    return {v[0].get<std::int64_t>(), v[1].get<std::int64_t>()};
}

WorkerGroup parse_group(const json& g, std::size_t index) {
    std::string where = "workers[" + std::to_string(index) + "]";
    check_keys(g, {"name", "archetype", "count", "quality", "skills", "target", "join_at"}, where);
    WorkerGroup group;
    group.name = "group" + std::to_string(index);
    read(g, "name", group.name, where);
    if (g.contains("archetype")) {
        if (!g["archetype"].is_string()) invalid(where + ".archetype must be a string");
        group.archetype = parse_archetype(g["archetype"].get<std::string>());
    }
    read(g, "count", group.count, where);
    if (g.contains("quality")) {
        auto [lo, hi] = read_range(g["quality"], where + ".quality");
        if (lo < 1 || hi > 100 || lo > hi) invalid(where + ".quality must satisfy 1 <= min <= max <= 100");
        group.quality_min = static_cast<std::uint32_t>(lo);
        group.quality_max = static_cast<std::uint32_t>(hi);
    }
    read(g, "skills", group.skills, where);
    read(g, "target", group.target, where);
    read(g, "join_at", group.join_at, where);
    return group;
}

}  // namespace

std::string_view archetype_name(Archetype a) noexcept {
    for (const auto& [k, name] : kArchetypes) {
        if (k == a) return name;
    }
    return "unknown";
}

Archetype parse_archetype(std::string_view name) {
    for (const auto& [k, n] : kArchetypes) {
        if (n == name) return k;
    }
    invalid("unknown archetype " + std::string(name));
}

std::uint32_t ScenarioConfig::worker_count() const {
    std::uint32_t n = 0;
    for (const auto& g : workers) n += g.count;
    return n;
}

void ScenarioConfig::validate() const {
    try {
        params.validate();
    } catch (const ProtocolError& e) {
        invalid(e.what());
    }
    if (duration <= 0) invalid("duration must be positive");
    if (workers.empty() || worker_count() == 0) invalid("at least one worker is required");
    if (posters == 0) invalid("at least one poster is required");
    std::set<std::string> names;
    for (const auto& g : workers) {
        if (!names.insert(g.name).second) invalid("duplicate worker group name " + g.name);
        if (g.quality_min < 1 || g.quality_max > 100 || g.quality_min > g.quality_max) {
            invalid("group " + g.name + " has a bad quality range");
        }
        if (g.join_at < 0 || g.join_at >= duration) invalid("group " + g.name + " joins outside the run");
    }
    if (tasks.per_tick == 0) invalid("tasks.per_tick must be positive");
    if (tasks.reward_min <= 0 || tasks.reward_min > tasks.reward_max) invalid("tasks.reward range is invalid");
    if (tasks.starter_count > 0 && tasks.starter_reward <= 0) invalid("tasks.starter_reward must be positive");
    if (tasks.weight_completeness < Fixed{} || tasks.weight_completeness > Fixed::from_int(1)) {
        invalid("tasks.weight_completeness must lie in [0, 1]");
    }
    if (acceptance_fee_bps > 10'000) invalid("acceptance_fee_bps must be at most 10000");
    if (!(gas_price_gwei > 0) || !(ether_usd > 0)) invalid("gas prices must be positive");
    if (windows.accept <= 0 || windows.work <= 0 || windows.due <= windows.accept ||
        windows.accept + windows.work >= windows.due + 1) {
        invalid("windows must satisfy 0 < accept < due and accept + work <= due");
    }
    if (noise > 50) invalid("noise must be at most 50");
    if (stall_ticks <= 0) invalid("stall_ticks must be positive");
    if (adversary.magnitude > 99) invalid("adversary.magnitude must be at most 99");
    if (adversary.sybil_budget < 0 || adversary.sybil_interval <= 0) invalid("bad sybil parameters");
    if (adversary.reentry_fraction < Fixed{} || adversary.reentry_fraction > Fixed::from_int(1)) {
        invalid("adversary.reentry_fraction must lie in [0, 1]");
    }
}

ScenarioConfig default_scenario() {
    ScenarioConfig c;
    c.params.outlier_floor = Fixed::from_int(2 * static_cast<std::int64_t>(c.noise));
    c.workers.push_back(WorkerGroup{"honest", Archetype::kHonest, 20, 60, 90, {"coding"}, false, 0});
    return c;
}

ScenarioConfig parse_scenario(std::string_view json_text) {
    json root;
    try {
        root = json::parse(json_text);
    } catch (const json::parse_error& e) {
        invalid(std::string("scenario is not valid JSON: ") + e.what());
    }
    check_keys(root,
               {"seed", "duration", "workers", "posters", "tasks", "protocol", "gas", "adversary", "windows", "noise",
                "stall_ticks"},
               "scenario");
    ScenarioConfig c = default_scenario();
    read(root, "seed", c.seed, "scenario");
    read(root, "duration", c.duration, "scenario");
    read(root, "posters", c.posters, "scenario");
    read(root, "noise", c.noise, "scenario");
    read(root, "stall_ticks", c.stall_ticks, "scenario");
    if (root.contains("workers")) {
        const json& ws = root["workers"];
        if (!ws.is_array()) invalid("workers must be an array");
        c.workers.clear();
        for (std::size_t i = 0; i < ws.size(); ++i) c.workers.push_back(parse_group(ws[i], i));
    }
    if (root.contains("tasks")) {
        const json& t = root["tasks"];
        check_keys(t, {"count", "per_tick", "reward", "skills", "weight_completeness", "starter_count", "starter_reward"},
                   "tasks");
        read(t, "count", c.tasks.count, "tasks");
        read(t, "per_tick", c.tasks.per_tick, "tasks");
        if (t.contains("reward")) std::tie(c.tasks.reward_min, c.tasks.reward_max) = read_range(t["reward"], "tasks.reward");
        read(t, "skills", c.tasks.skills, "tasks");
        read_fixed(t, "weight_completeness", c.tasks.weight_completeness, "tasks");
        read(t, "starter_count", c.tasks.starter_count, "tasks");
        read(t, "starter_reward", c.tasks.starter_reward, "tasks");
    }
    if (root.contains("protocol")) {
        const json& p = root["protocol"];
        check_keys(p,
                   {"registration_fee", "x", "y", "k", "outlier_floor", "alpha", "max_rounds", "volunteer_threshold",
                    "slot_selection", "acceptance_fee_bps"},
                   "protocol");
        read(p, "registration_fee", c.params.registration_fee, "protocol");
        read(p, "x", c.params.evaluators_per_submission, "protocol");
        read(p, "y", c.params.evaluations_owed, "protocol");
        if (p.contains("k")) {
            c.params.outlier_k = p["k"].is_null() ? std::nullopt : std::optional<Fixed>(read_fixed(p["k"], "protocol.k"));
        }
        read_fixed(p, "outlier_floor", c.params.outlier_floor, "protocol");
        read_fixed(p, "alpha", c.params.alpha, "protocol");
        read(p, "max_rounds", c.params.max_rounds, "protocol");
        if (p.contains("volunteer_threshold")) {
            std::string mode;
            read(p, "volunteer_threshold", mode, "protocol");
            if (mode == "average") {
                c.params.volunteer_threshold = VolunteerThreshold::kPlatformAverage;
            } else if (mode == "none") {
                c.params.volunteer_threshold = VolunteerThreshold::kNone;
            } else {
                invalid("protocol.volunteer_threshold must be \"average\" or \"none\"");
            }
        }
        read(p, "slot_selection", c.params.slot_selection, "protocol");
        read(p, "acceptance_fee_bps", c.acceptance_fee_bps, "protocol");
    }
    if (root.contains("gas")) {
        const json& g = root["gas"];
        check_keys(g, {"gwei", "ether_usd"}, "gas");
        read(g, "gwei", c.gas_price_gwei, "gas");
        read(g, "ether_usd", c.ether_usd, "gas");
    }
    if (root.contains("adversary")) {
        const json& a = root["adversary"];
        check_keys(a,
                   {"magnitude", "reentry_fraction", "sybil_budget", "sybil_cap", "sybil_interval", "stuffer_helpers",
                    "grudge_margin"},
                   "adversary");
        read(a, "magnitude", c.adversary.magnitude, "adversary");
        read_fixed(a, "reentry_fraction", c.adversary.reentry_fraction, "adversary");
        read(a, "sybil_budget", c.adversary.sybil_budget, "adversary");
        read(a, "sybil_cap", c.adversary.sybil_cap, "adversary");
        read(a, "sybil_interval", c.adversary.sybil_interval, "adversary");
        read(a, "stuffer_helpers", c.adversary.stuffer_helpers, "adversary");
        read(a, "grudge_margin", c.adversary.grudge_margin, "adversary");
    }
    if (root.contains("windows")) {
        const json& w = root["windows"];
        check_keys(w, {"accept", "work", "due"}, "windows");
        read(w, "accept", c.windows.accept, "windows");
        read(w, "work", c.windows.work, "windows");
        read(w, "due", c.windows.due, "windows");
    }
    c.validate();
    return c;
}

std::string scenario_to_json(const ScenarioConfig& c) {
    ordered_json j;
    j["seed"] = c.seed;
    j["duration"] = c.duration;
    ordered_json workers = ordered_json::array();
    for (const auto& g : c.workers) {
        workers.push_back({{"name", g.name},
                           {"archetype", archetype_name(g.archetype)},
                           {"count", g.count},
                           {"quality", {g.quality_min, g.quality_max}},
                           {"skills", g.skills},
                           {"target", g.target},
                           {"join_at", g.join_at}});
    }
    j["workers"] = std::move(workers);
    j["posters"] = c.posters;
    j["tasks"] = {{"count", c.tasks.count},
                  {"per_tick", c.tasks.per_tick},
                  {"reward", {c.tasks.reward_min, c.tasks.reward_max}},
                  {"skills", c.tasks.skills},
                  {"weight_completeness", c.tasks.weight_completeness.to_string()},
                  {"starter_count", c.tasks.starter_count},
                  {"starter_reward", c.tasks.starter_reward}};
    ordered_json p;
    p["registration_fee"] = c.params.registration_fee;
    p["x"] = c.params.evaluators_per_submission;
    p["y"] = c.params.evaluations_owed;
    p["k"] = c.params.outlier_k ? ordered_json(c.params.outlier_k->to_string()) : ordered_json(nullptr);
    p["outlier_floor"] = c.params.outlier_floor.to_string();
    p["alpha"] = c.params.alpha.to_string();
    p["max_rounds"] = c.params.max_rounds;
    p["volunteer_threshold"] =
        c.params.volunteer_threshold == VolunteerThreshold::kNone ? "none" : "average";
    p["slot_selection"] = c.params.slot_selection;
    p["acceptance_fee_bps"] = c.acceptance_fee_bps;
    j["protocol"] = std::move(p);
    j["gas"] = {{"gwei", c.gas_price_gwei}, {"ether_usd", c.ether_usd}};
    j["adversary"] = {{"magnitude", c.adversary.magnitude},
                      {"reentry_fraction", c.adversary.reentry_fraction.to_string()},
                      {"sybil_budget", c.adversary.sybil_budget},
                      {"sybil_cap", c.adversary.sybil_cap},
                      {"sybil_interval", c.adversary.sybil_interval},
                      {"stuffer_helpers", c.adversary.stuffer_helpers},
                      {"grudge_margin", c.adversary.grudge_margin}};
    j["windows"] = {{"accept", c.windows.accept}, {"work", c.windows.work}, {"due", c.windows.due}};
    j["noise"] = c.noise;
    j["stall_ticks"] = c.stall_ticks;
    return j.dump(2);
}

}  // namespace workerrep::sim
