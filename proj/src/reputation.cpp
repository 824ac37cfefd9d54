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

#include "workerrep/reputation.hpp"

namespace workerrep::reputation {

namespace {

constexpr std::int64_t kScale = Fixed::kScale;

void check_score(std::uint32_t s) {
    if (s < kMinScore || s > kMaxScore) fail(ErrorCode::kOutOfRange, "score " + std::to_string(s) + " outside [1,100]");
}

void check_fixed_score(Fixed s) {
    if (s < Fixed::from_int(kMinScore) || s > Fixed::from_int(kMaxScore)) {
        fail(ErrorCode::kOutOfRange, "score " + s.to_string() + " outside [1,100]");
    }
}

Int128 abs128(Int128 v) { return v < 0 ? -v : v; }

ConsensusScores aggregate(std::span<const ScoredEvaluator> entries, bool allow_fallback) {
    if (entries.empty()) fail(ErrorCode::kEmptyConsensus);
    Int128 total_rep = 0;
    Int128 c_sum = 0;
    Int128 q_sum = 0;
    for (const auto& e : entries) {
        check_score(e.completeness);
        check_score(e.quality);
        if (e.reputation < Fixed{}) fail(ErrorCode::kOutOfRange, "negative reputation");
        total_rep += e.reputation.raw();
        c_sum += Int128{e.completeness} * e.reputation.raw();
        q_sum += Int128{e.quality} * e.reputation.raw();
    }
    if (total_rep > 0) {
        return {Fixed::from_raw(floor_div(c_sum * kScale, total_rep)),
                Fixed::from_raw(floor_div(q_sum * kScale, total_rep)), false};
    }
    if (!allow_fallback) fail(ErrorCode::kZeroTotalReputation);
    Int128 c_plain = 0;
    Int128 q_plain = 0;
    for (const auto& e : entries) {
        c_plain += e.completeness;
        q_plain += e.quality;
    }
    auto n = static_cast<Int128>(entries.size());
    return {Fixed::from_raw(floor_div(c_plain * kScale, n)), Fixed::from_raw(floor_div(q_plain * kScale, n)), true};
}

}  // namespace

ConsensusScores weighted_consensus_scores(std::span<const ScoredEvaluator> entries) {
    return aggregate(entries, false);
}

ConsensusScores consensus_scores(std::span<const ScoredEvaluator> entries) { return aggregate(entries, true); }

Fixed final_score(Fixed completeness, Fixed quality, Fixed weight_completeness, Fixed weight_quality) {
    if (weight_completeness < Fixed{} || weight_quality < Fixed{} ||
        weight_completeness + weight_quality != Fixed::from_int(1)) {
        fail(ErrorCode::kBadWeights, "weights must be non-negative and sum to 1");
    }
    check_fixed_score(completeness);
    check_fixed_score(quality);
    Int128 num = Int128{weight_quality.raw()} * quality.raw() + Int128{weight_completeness.raw()} * completeness.raw();
    return Fixed::from_raw(floor_div(num, kScale));
}

Fixed evaluator_score(Fixed completeness, Fixed quality, std::uint32_t evaluator_completeness,
                      std::uint32_t evaluator_quality) {
    check_fixed_score(completeness);
    check_fixed_score(quality);
    check_score(evaluator_completeness);
    check_score(evaluator_quality);
    Int128 num = Int128{200} * kScale - abs128(Int128{quality.raw()} - Int128{evaluator_quality} * kScale) -
                 abs128(Int128{completeness.raw()} - Int128{evaluator_completeness} * kScale);
    return Fixed::from_raw(floor_div(num, 2));
}

Fixed submission_rep_delta(Fixed final, std::span<const Fixed> e_scores, std::uint32_t y, Fixed alpha) {
    if (y == 0) fail(ErrorCode::kOutOfRange, "y must be positive");
    if (alpha < Fixed{} || alpha > Fixed::from_int(1)) fail(ErrorCode::kOutOfRange, "alpha outside [0,1]");
    if (e_scores.size() < y) {
        fail(ErrorCode::kQuotaUnmet,
             std::to_string(e_scores.size()) + " of " + std::to_string(y) + " evaluations completed");
    }
    if (e_scores.size() > y) fail(ErrorCode::kOutOfRange, "more evaluation scores than owed");
    check_fixed_score(final);
    Int128 e_sum = 0;
    for (Fixed e : e_scores) {
        check_fixed_score(e);
        e_sum += e.raw();
    }
    Int128 num = Int128{kScale - alpha.raw()} * final.raw() * y + Int128{alpha.raw()} * e_sum;
    return Fixed::from_raw(floor_div(num, Int128{kScale} * y));
}

Fixed volunteer_rep_delta(Fixed e_score, bool is_outlier, Fixed alpha) {
    check_fixed_score(e_score);
    if (alpha < Fixed{} || alpha > Fixed::from_int(1)) fail(ErrorCode::kOutOfRange, "alpha outside [0,1]");
    auto magnitude = Fixed::from_raw(floor_div(Int128{alpha.raw()} * e_score.raw(), kScale));
    return is_outlier ? -magnitude : magnitude;
}

Wei reward_amount(Fixed final, Wei task_reward) {
    if (final < Fixed{} || final > Fixed::from_int(kMaxScore)) fail(ErrorCode::kOutOfRange, "final score out of range");
    if (task_reward < 0) fail(ErrorCode::kOutOfRange, "negative reward");
    return floor_div(Int128{final.raw()} * task_reward, Int128{100} * kScale);
}

Wei fee_returned(Fixed completeness, Wei acceptance_fee) {
    if (completeness < Fixed{} || completeness > Fixed::from_int(kMaxScore)) {
        fail(ErrorCode::kOutOfRange, "completeness out of range");
    }
    if (acceptance_fee < 0) fail(ErrorCode::kOutOfRange, "negative fee");
    return floor_div(Int128{completeness.raw()} * acceptance_fee, Int128{100} * kScale);
}

}  // namespace workerrep::reputation
