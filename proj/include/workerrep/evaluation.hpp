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

#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "workerrep/codec.hpp"
#include "workerrep/common.hpp"
#include "workerrep/fixed.hpp"

namespace workerrep {

struct Candidate {
    AccountId id;
    Fixed reputation;
};

// Sorts by (reputation, id) and cuts the list into `slot_count` equal-count
// quantiles; slot sizes differ by at most one. Requires size >= slot_count.
std::vector<std::vector<AccountId>> partition_slots(std::vector<Candidate> eligible, std::uint32_t slot_count);

// Deterministic counter-mode generator: block i = keccak256(seed | i).
class SelectionRng {
  public:
    explicit SelectionRng(const Hash256& seed) : seed_(seed) {}

    std::uint64_t next();
    // Uniform in [0, bound) by rejection sampling.
    std::uint64_t uniform(std::uint64_t bound);

  private:
    Hash256 seed_;
    std::uint64_t counter_{0};
};

Hash256 selection_seed(const Hash256& commitment, const Hash256& state_root, std::uint32_t round);

struct EvaluatorPool {
    SubmissionId submission_id{0};
    std::vector<Candidate> eligible;
    std::vector<std::vector<AccountId>> slots;  // one per evaluator when slot selection is on
    std::vector<AccountId> selected;
    std::uint32_t round{1};
};

// One uniform pick per reputation slot, or x distinct uniform picks from the
// whole pool when slot selection is disabled. Throws InsufficientEvaluators.
EvaluatorPool assign_evaluators(SubmissionId submission, std::vector<Candidate> eligible, std::uint32_t x,
                                const Hash256& seed, std::uint32_t round, bool slot_selection = true);

struct ScoreEntry {
    AccountId evaluator;
    std::uint32_t completeness{0};
    std::uint32_t quality{0};
    Hash256 review_ref;
};

struct ConsensusRule {
    std::optional<Fixed> k{Fixed::from_int(1)};  // nullopt disables outlier removal
    Fixed floor;                                 // deviations at or below this never flag
};

struct ConsensusResult {
    SubmissionId submission_id{0};
    std::uint32_t round{0};
    Fixed c_mean;
    Fixed q_mean;
    Fixed c_std;
    Fixed q_std;
    std::set<AccountId> outliers;
    std::set<AccountId> in_consensus;
    bool reached{false};
    bool forced{false};
};

// Population mean and deviation per metric; an evaluator is an outlier when
// either metric strays more than k standard deviations (and more than the
// floor) from its mean. Reached iff the survivors are a strict majority.
// Throws IncompleteSheet when the sheet is empty or expected_count differs.
ConsensusResult run_consensus(SubmissionId submission, std::uint32_t round, std::span<const ScoreEntry> sheet,
                              const ConsensusRule& rule, std::optional<std::size_t> expected_count = std::nullopt);

// Final-round fallback: every evaluator is kept.
ConsensusResult forced_consensus(SubmissionId submission, std::uint32_t round, std::span<const ScoreEntry> sheet);

enum class EvaluatorRole : std::uint8_t { kVolunteer = 0, kObligated = 1 };

struct EvaluationRound {
    std::uint32_t number{1};
    Hash256 seed;
    std::vector<Candidate> eligible;
    std::vector<std::vector<AccountId>> slots;
    std::vector<AccountId> selected;
    std::vector<ScoreEntry> scores;
    std::optional<ConsensusResult> result;

    [[nodiscard]] bool is_selected(const AccountId& id) const;
    [[nodiscard]] bool has_scored(const AccountId& id) const;
    [[nodiscard]] bool complete() const noexcept { return scores.size() == selected.size(); }
};

struct EvaluatorOutcome {
    AccountId evaluator;
    Fixed e_score;
    bool outlier{false};
    EvaluatorRole role{EvaluatorRole::kVolunteer};
    Fixed reputation_delta;     // applied immediately (volunteers only)
    bool counted_toward_quota{false};
};

struct FinalOutcome {
    Fixed completeness;
    Fixed quality;
    Fixed final_score;
    bool unweighted_fallback{false};
    std::vector<EvaluatorOutcome> evaluators;
};

struct EvaluationRecord {
    SubmissionId submission_id{0};
    AccountId worker;
    std::set<AccountId> excluded;
    std::vector<EvaluationRound> rounds;
    std::optional<FinalOutcome> outcome;

    [[nodiscard]] const EvaluationRound* current() const { return rounds.empty() ? nullptr : &rounds.back(); }
    [[nodiscard]] bool finalized() const noexcept { return outcome.has_value(); }
    [[nodiscard]] bool awaiting_reassignment() const;
};

// Evaluation credit a worker is still owed for one of their submissions:
// the reputation update waits until y evaluations of others are done.
struct PendingCredit {
    SubmissionId submission_id{0};
    std::vector<Fixed> e_scores;
    std::optional<Fixed> final_score;
};

class EvaluationBook {
  public:
    void enroll(const AccountId& id) { volunteers_.insert(id); }
    void withdraw(const AccountId& id);
    [[nodiscard]] bool enrolled(const AccountId& id) const { return volunteers_.contains(id); }
    [[nodiscard]] const std::set<AccountId>& volunteers() const noexcept { return volunteers_; }

    EvaluationRecord& open_record(SubmissionId id, const AccountId& worker, std::set<AccountId> excluded);
    [[nodiscard]] const EvaluationRecord* find(SubmissionId id) const;
    [[nodiscard]] const EvaluationRecord& get(SubmissionId id) const;
    EvaluationRecord& mutable_get(SubmissionId id);
    [[nodiscard]] const std::map<SubmissionId, EvaluationRecord>& records() const noexcept { return records_; }

    void add_obligation(const AccountId& worker, SubmissionId submission);
    [[nodiscard]] bool has_unmet_quota(const AccountId& worker, std::uint32_t y) const;
    // Credits one in-consensus evaluation to the oldest submission still short of y.
    bool credit_evaluation(const AccountId& worker, Fixed e_score, std::uint32_t y);
    void set_final_score(const AccountId& worker, SubmissionId submission, Fixed final_score);
    // Removes and returns credits that have both a final score and y evaluations.
    std::vector<PendingCredit> take_ready_credits(const AccountId& worker, std::uint32_t y);
    [[nodiscard]] const std::map<AccountId, std::vector<PendingCredit>>& obligations() const noexcept {
        return obligations_;
    }

    std::uint64_t consensus_failures{0};
    std::uint64_t forced_rounds{0};

    void encode(Writer& w) const;
    // Round-by-round audit record for one submission.
    [[nodiscard]] std::string audit_json(SubmissionId id) const;

  private:
    std::set<AccountId> volunteers_;
    std::map<SubmissionId, EvaluationRecord> records_;
    std::map<AccountId, std::vector<PendingCredit>> obligations_;
};

}  // namespace workerrep
