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
#include <string>
#include <string_view>
#include <vector>

#include "workerrep/common.hpp"
#include "workerrep/operations.hpp"

namespace workerrep::sim {

enum class Archetype : std::uint8_t {
    kHonest,
    kColluder,       // inflates fellow colluders, deflates targets
    kBadMouther,     // deflates targets
    kBallotStuffer,  // registers helper identities that inflate it
    kSybilSpawner,   // keeps spawning identities while its budget lasts
    kReentrant,      // exits and re-registers once its reputation sags
    kReciprocator,   // retaliates against anyone who scored it low
};

std::string_view archetype_name(Archetype a) noexcept;
Archetype parse_archetype(std::string_view name);

struct WorkerGroup {
    std::string name;
    Archetype archetype{Archetype::kHonest};
    std::uint32_t count{0};
    std::uint32_t quality_min{60};  // true work quality, uniform in [min, max]
    std::uint32_t quality_max{90};
    std::vector<std::string> skills{"coding"};
    bool target{false};  // victims of bad-mouthers and colluders
    Tick join_at{0};
};

struct TaskPlan {
    std::uint32_t count{50};
    std::uint32_t per_tick{2};
    Wei reward_min{1'000};
    Wei reward_max{5'000};
    std::vector<std::string> skills{"coding"};
    Fixed weight_completeness{Fixed::from_raw(5'000)};
    // Low-reward tasks reserved for the least established applicant.
    std::uint32_t starter_count{0};
    Wei starter_reward{100};
};

struct AdversaryParams {
    std::uint32_t magnitude{60};          // score points added or removed by a biased evaluator
    Fixed reentry_fraction{Fixed::from_raw(5'000)};  // re-enter below this fraction of the average
    Wei sybil_budget{35'400'000'000'000'000};         // three default registration fees
    std::uint32_t sybil_cap{20};
    Tick sybil_interval{5};
    std::uint32_t stuffer_helpers{2};
    std::uint32_t grudge_margin{0};  // any score more than this below consensus counts as a slight
};

struct Windows {
    Tick accept{3};
    Tick work{2};
    Tick due{6};
};

struct ScenarioConfig {
    std::uint64_t seed{1};
    Tick duration{400};
    std::vector<WorkerGroup> workers;
    std::uint32_t posters{4};
    TaskPlan tasks;
    ProtocolParams params;
    std::uint32_t acceptance_fee_bps{1'000};
    double gas_price_gwei{1.0};
    double ether_usd{144.30};
    AdversaryParams adversary;
    Windows windows;
    std::uint32_t noise{5};  // honest evaluator noise half-width
    Tick stall_ticks{60};

    // Throws ConfigInvalid.
    void validate() const;
    [[nodiscard]] std::uint32_t worker_count() const;
};

// Simulation defaults: outlier floor at twice the noise half-width.
ScenarioConfig default_scenario();

// Missing keys keep their defaults; unknown keys are rejected. Throws ConfigInvalid.
ScenarioConfig parse_scenario(std::string_view json_text);
std::string scenario_to_json(const ScenarioConfig& config);

}  // namespace workerrep::sim
