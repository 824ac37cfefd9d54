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

#include <sstream>

#include <json.hpp>

#include "workerrep/sim/harness.hpp"

namespace workerrep::sim {

using nlohmann::ordered_json;

namespace {

// Wei totals can exceed 2^53, so they travel as decimal strings.
std::string wei(Wei v) { return std::to_string(v); }

ordered_json optional_double(const std::optional<double>& v) { return v ? ordered_json(*v) : ordered_json(nullptr); }

}  // namespace

std::string report_json(const RunReport& r, const ScenarioConfig& config) {
    ordered_json out;
    out["seed"] = r.seed;
    out["ticks_run"] = r.ticks_run;
    out["state_root"] = r.state_root.hex();
    out["chain_ok"] = r.chain_ok;
    out["scenario"] = ordered_json::parse(scenario_to_json(config));

    ordered_json summary;
    summary["identities"] = r.identities;
    summary["sybil_identities"] = r.sybil_identities;
    summary["consensus_failures"] = r.consensus_failures;
    summary["forced_rounds"] = r.forced_rounds;
    summary["rejected_calls"] = r.rejected_calls;
    summary["rejected_by_reason"] = r.rejected_by_reason;
    summary["adversary_advantage"] = optional_double(r.adversary_advantage);
    summary["target_mean_final_score"] = optional_double(r.target_mean_final_score);
    summary["total_gas"] = r.total_gas;
    summary["total_usd"] = r.total_usd;
    summary["conservation_residual"] = wei(r.conservation_residual);
    out["summary"] = summary;

    ordered_json collusion;
    collusion["rounds"] = r.collusion.rounds;
    collusion["co_assigned"] = r.collusion.co_assigned;
    collusion["expected"] = r.collusion.expected;
    collusion["standard_error"] = r.collusion.standard_error();
    out["collusion"] = collusion;

    ordered_json reciprocity;
    reciprocity["opportunities"] = r.reciprocity.opportunities;
    reciprocity["hits"] = r.reciprocity.hits;
    reciprocity["expected"] = r.reciprocity.expected;
    reciprocity["empirical_rate"] = r.reciprocity.empirical_rate();
    reciprocity["expected_rate"] = r.reciprocity.expected_rate();
    reciprocity["standard_error"] = r.reciprocity.standard_error();
    out["reciprocity"] = reciprocity;

    ordered_json reentry;
    reentry["exits"] = r.reentry.exits;
    reentry["deposits_at_exit"] = wei(r.reentry.deposits_at_exit);
    reentry["refunded"] = wei(r.reentry.refunded);
    ordered_json at = ordered_json::array();
    for (const auto& [rep, avg] : r.reentry.exits_at) {
        at.push_back({{"reputation", rep.to_string()}, {"average", avg.to_string()}});
    }
    reentry["exits_at"] = at;
    out["reentry"] = reentry;

    ordered_json agents = ordered_json::array();
    for (const auto& a : r.agents) {
        ordered_json j;
        j["account"] = a.account;
        j["group"] = a.group;
        j["archetype"] = archetype_name(a.archetype);
        j["target"] = a.target;
        j["active"] = a.active;
        j["true_quality"] = a.true_quality;
        j["reputation"] = a.reputation.to_string();
        j["generation"] = a.generation;
        j["submissions"] = a.submissions;
        j["joined_at"] = a.joined_at;
        agents.push_back(j);
    }
    out["agents"] = agents;

    ordered_json tasks = ordered_json::array();
    for (const auto& t : r.tasks) {
        ordered_json j;
        j["task_id"] = t.task_id;
        j["status"] = t.status;
        j["starter"] = t.starter;
        j["worker"] = t.worker ? ordered_json(*t.worker) : ordered_json(nullptr);
        j["final_score"] = t.final_score ? ordered_json(t.final_score->to_string()) : ordered_json(nullptr);
        j["reward"] = wei(t.reward);
        j["reward_paid"] = wei(t.reward_paid);
        tasks.push_back(j);
    }
    out["tasks"] = tasks;

    ordered_json traj;
    for (const auto& [account, points] : r.trajectories) {
        ordered_json series = ordered_json::array();
        for (const auto& [tick, rep] : points) series.push_back({tick, rep.to_string()});
        traj[account] = series;
    }
    out["trajectories"] = traj;
    return out.dump(2) + "\n";
}

std::string metrics_csv(const RunReport& r) {
    std::ostringstream out;
    out << "tick,ledger_entries,tasks_posted,tasks_evaluated,tasks_cancelled,mean_honest_reputation,"
           "mean_adversary_reputation,consensus_failures,forced_rounds,gas,conservation_residual\n";
    out.setf(std::ios::fixed);
    out.precision(4);
    for (const auto& m : r.metrics) {
        out << m.tick << ',' << m.ledger_entries << ',' << m.tasks_posted << ',' << m.tasks_evaluated << ','
            << m.tasks_cancelled << ',' << m.mean_honest_reputation << ',' << m.mean_adversary_reputation << ','
            << m.consensus_failures << ',' << m.forced_rounds << ',' << m.gas << ',' << m.conservation_residual
            << '\n';
    }
    return out.str();
}

}  // namespace workerrep::sim
