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

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "workerrep/ledger.hpp"
#include "workerrep/platform.hpp"
#include "workerrep/sim/scenario.hpp"

namespace workerrep::sim {

struct TickMetrics {
    Tick tick{0};
    std::uint64_t ledger_entries{0};
    std::uint64_t tasks_posted{0};
    std::uint64_t tasks_evaluated{0};
    std::uint64_t tasks_cancelled{0};
    double mean_honest_reputation{0};
    double mean_adversary_reputation{0};
    std::uint64_t consensus_failures{0};
    std::uint64_t forced_rounds{0};
    std::uint64_t gas{0};
    Wei conservation_residual{0};
};

struct AgentSummary {
    std::string account;
    std::string group;
    Archetype archetype{Archetype::kHonest};
    bool target{false};
    bool active{true};
    std::uint32_t true_quality{0};
    Fixed reputation;
    std::uint32_t generation{0};  // re-registrations so far
    std::uint32_t submissions{0};
    Tick joined_at{0};
};

struct TaskOutcome {
    TaskId task_id{0};
    std::string status;
    bool starter{false};
    std::optional<std::string> worker;
    std::optional<Fixed> final_score;
    Wei reward{0};
    Wei reward_paid{0};
};

// Rounds where two or more colluders landed on one submission, against the
// number the selection mechanism predicts.
struct CollusionStats {
    std::uint64_t rounds{0};
    std::uint64_t co_assigned{0};
    double expected{0};
    double variance{0};
    [[nodiscard]] double standard_error() const;
};

// Times a reciprocator held a grudge against a submitting worker and was
// eligible for the round, and how often it was actually drawn.
struct ReciprocityStats {
    std::uint64_t opportunities{0};
    std::uint64_t hits{0};
    double expected{0};
    double variance{0};
    [[nodiscard]] double empirical_rate() const;
    [[nodiscard]] double expected_rate() const;
    [[nodiscard]] double standard_error() const;  // of the hit count
};

struct ReentryStats {
    std::uint64_t exits{0};
    Wei deposits_at_exit{0};
    Wei refunded{0};
    std::vector<std::pair<Fixed, Fixed>> exits_at;  // (reputation, platform average) at each exit
};

struct RunReport {
    std::uint64_t seed{0};
    Tick ticks_run{0};
    std::vector<TickMetrics> metrics;
    std::vector<AgentSummary> agents;
    std::vector<TaskOutcome> tasks;
    // Reputation changes per worker account: (tick, reputation).
    std::map<std::string, std::vector<std::pair<Tick, Fixed>>> trajectories;
    std::uint64_t consensus_failures{0};
    std::uint64_t forced_rounds{0};
    std::uint64_t rejected_calls{0};
    std::map<std::string, std::uint64_t> rejected_by_reason;
    std::optional<double> adversary_advantage;  // mean adversary minus mean honest reputation
    std::optional<double> target_mean_final_score;
    std::uint64_t total_gas{0};
    double total_usd{0};
    Wei conservation_residual{0};
    std::uint64_t identities{0};        // worker identities ever registered
    std::uint64_t sybil_identities{0};  // helper identities spawned by sybil-spawners
    CollusionStats collusion;
    ReciprocityStats reciprocity;
    ReentryStats reentry;
    Hash256 state_root;
    bool chain_ok{false};
};

struct RunResult {
    RunReport report;
    std::vector<LedgerEntry> trace;
    std::string store_manifest;
    ContentStore store;
};

// Deterministic: the same config yields byte-identical traces and reports.
// Throws ConfigInvalid, Deadlock.
RunResult run(const ScenarioConfig& config);

enum class Feature : std::uint8_t { kOutlierRemoval, kSlotSelection, kEntryFee };
std::string_view feature_name(Feature f) noexcept;
Feature parse_feature(std::string_view name);
ScenarioConfig with_feature(ScenarioConfig config, Feature feature, bool enabled);

struct AblationPair {
    Feature feature{Feature::kOutlierRemoval};
    RunReport with;
    RunReport without;
};

// Same seed twice, feature on and off.
AblationPair ablate(const ScenarioConfig& config, Feature feature);

ReciprocityStats reciprocity_exposure(const ScenarioConfig& config);

std::string report_json(const RunReport& report, const ScenarioConfig& config);
std::string metrics_csv(const RunReport& report);

}  // namespace workerrep::sim
