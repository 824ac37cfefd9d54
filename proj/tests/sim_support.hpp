#pragma once

#include <fstream>
#include <random>
#include <sstream>
#include <string>

#include "workerrep/sim/harness.hpp"

namespace workerrep::testing {

#ifdef WORKERREP_SCENARIO_DIR
inline sim::ScenarioConfig load_scenario(const std::string& name) {
    std::ifstream in(std::string(WORKERREP_SCENARIO_DIR) + "/" + name + ".json");
    std::stringstream text;
    text << in.rdbuf();
    return sim::parse_scenario(text.str());
}
#endif

// Small mixed populations for property checks.
inline sim::ScenarioConfig random_scenario(std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    auto pick = [&](std::uint32_t lo, std::uint32_t hi) {
        return std::uniform_int_distribution<std::uint32_t>(lo, hi)(rng);
    };
    sim::ScenarioConfig c = sim::default_scenario();
    c.seed = seed;
    c.duration = 300;
    c.posters = pick(1, 4);
    c.workers.clear();
    c.workers.push_back(sim::WorkerGroup{"honest", sim::Archetype::kHonest, pick(8, 14), 50, 95, {"coding"}, false, 0});
    c.workers.push_back(sim::WorkerGroup{"targets", sim::Archetype::kHonest, pick(0, 3), 60, 90, {"coding"}, true, 0});
    const sim::Archetype adversaries[] = {sim::Archetype::kColluder,     sim::Archetype::kBadMouther,
                                          sim::Archetype::kBallotStuffer, sim::Archetype::kSybilSpawner,
                                          sim::Archetype::kReentrant,    sim::Archetype::kReciprocator};
    for (std::size_t i = 0; i < 6; ++i) {
        std::uint32_t n = pick(0, 2);
        if (n == 0) continue;
        c.workers.push_back(sim::WorkerGroup{"adv" + std::to_string(i), adversaries[i], n, 10, 60, {"coding"}, false,
                                             static_cast<Tick>(pick(0, 20))});
    }
    c.tasks.count = pick(10, 30);
    c.tasks.per_tick = pick(1, 3);
    c.tasks.starter_count = pick(0, 3);
    c.params.evaluators_per_submission = pick(3, 4);
    c.params.evaluations_owed = pick(1, 3);
    if (pick(0, 3) == 0) c.params.outlier_k.reset();
    c.params.slot_selection = pick(0, 1) == 1;
    c.acceptance_fee_bps = pick(0, 2000);
    c.stall_ticks = 120;
    return c;
}

}  // namespace workerrep::testing
