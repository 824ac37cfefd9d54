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
#include <span>

#include "workerrep/common.hpp"
#include "workerrep/fixed.hpp"

// Score, reputation and payout arithmetic. Every function accumulates its
// numerator exactly in 128-bit integers and floors once, at the final division.
namespace workerrep::reputation {

inline constexpr std::uint32_t kMinScore = 1;
inline constexpr std::uint32_t kMaxScore = 100;

struct ScoredEvaluator {
    std::uint32_t completeness{0};
    std::uint32_t quality{0};
    Fixed reputation;
};

struct ConsensusScores {
    Fixed completeness;
    Fixed quality;
    // All reputations were zero and the plain mean was used instead.
    bool unweighted_fallback{false};
};

// Reputation-weighted means of the in-consensus scores.
// Throws EmptyConsensus, ZeroTotalReputation, OutOfRange.
ConsensusScores weighted_consensus_scores(std::span<const ScoredEvaluator> entries);

// As above, but a zero reputation total falls back to the unweighted mean.
ConsensusScores consensus_scores(std::span<const ScoredEvaluator> entries);

// (w_q * quality + w_c * completeness) / (w_q + w_c), with w_c + w_q == 1.
Fixed final_score(Fixed completeness, Fixed quality, Fixed weight_completeness, Fixed weight_quality);

// (200 - |quality - q_i| - |completeness - c_i|) / 2
Fixed evaluator_score(Fixed completeness, Fixed quality, std::uint32_t evaluator_completeness,
                      std::uint32_t evaluator_quality);

// (1 - alpha) * final + alpha * sum(e_scores) / y. Throws QuotaUnmet when fewer than y scores are given.
Fixed submission_rep_delta(Fixed final, std::span<const Fixed> e_scores, std::uint32_t y, Fixed alpha);

// +alpha * e_score for a volunteer in consensus, -alpha * e_score for an outlier.
Fixed volunteer_rep_delta(Fixed e_score, bool is_outlier, Fixed alpha);

// final * reward / 100
Wei reward_amount(Fixed final, Wei task_reward);

// completeness * acceptance_fee / 100
Wei fee_returned(Fixed completeness, Wei acceptance_fee);

}  // namespace workerrep::reputation
