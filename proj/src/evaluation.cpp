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

#include "workerrep/evaluation.hpp"

#include <algorithm>
#include <limits>

#include <json.hpp>

#include "workerrep/keccak.hpp"

namespace workerrep {

std::vector<std::vector<AccountId>> partition_slots(std::vector<Candidate> eligible, std::uint32_t slot_count) {
    if (slot_count == 0) fail(ErrorCode::kConfigInvalid, "slot count must be positive");
    if (eligible.size() < slot_count) {
        fail(ErrorCode::kInsufficientEvaluators,
             std::to_string(eligible.size()) + " eligible, " + std::to_string(slot_count) + " required");
    }
    std::sort(eligible.begin(), eligible.end(), [](const Candidate& a, const Candidate& b) {
        if (a.reputation != b.reputation) return a.reputation < b.reputation;
        return a.id < b.id;
    });
    const std::size_t n = eligible.size();
    std::vector<std::vector<AccountId>> slots(slot_count);
    for (std::uint32_t s = 0; s < slot_count; ++s) {
        std::size_t lo = s * n / slot_count;
        std::size_t hi = (s + 1) * n / slot_count;
        for (std::size_t i = lo; i < hi; ++i) slots[s].push_back(eligible[i].id);
    }
    return slots;
}

std::uint64_t SelectionRng::next() {
    Writer w;
    w.hash(seed_).u64(counter_++);
    Hash256 block = keccak256(w.data());
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v = (v << 8) | block.bytes[i];
    return v;
}

std::uint64_t SelectionRng::uniform(std::uint64_t bound) {
    if (bound == 0) throw std::invalid_argument("uniform bound must be positive");
    // Accept only draws below the largest multiple of bound.
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % bound;
    for (;;) {
        std::uint64_t v = next();
        if (v < limit) return v % bound;
    }
}

Hash256 selection_seed(const Hash256& commitment, const Hash256& state_root, std::uint32_t round) {
    Writer w;
    w.hash(commitment).hash(state_root).u32(round);
    return keccak256(w.data());
}

EvaluatorPool assign_evaluators(SubmissionId submission, std::vector<Candidate> eligible, std::uint32_t x,
                                const Hash256& seed, std::uint32_t round, bool slot_selection) {
    if (x == 0) fail(ErrorCode::kConfigInvalid, "evaluator count must be positive");
    if (eligible.size() < x) {
        fail(ErrorCode::kInsufficientEvaluators,
             std::to_string(eligible.size()) + " eligible, " + std::to_string(x) + " required");
    }
    EvaluatorPool pool;
    pool.submission_id = submission;
    pool.round = round;
    pool.eligible = eligible;
    SelectionRng rng(seed);
    if (slot_selection) {
        pool.slots = partition_slots(std::move(eligible), x);
        for (const auto& slot : pool.slots) pool.selected.push_back(slot[rng.uniform(slot.size())]);
    } else {
        std::sort(eligible.begin(), eligible.end(), [](const Candidate& a, const Candidate& b) { return a.id < b.id; });
        std::vector<AccountId> ids;
        for (const auto& c : eligible) ids.push_back(c.id);
        // Partial Fisher-Yates.
        for (std::uint32_t i = 0; i < x; ++i) {
            std::size_t j = i + rng.uniform(ids.size() - i);
            std::swap(ids[i], ids[j]);
            pool.selected.push_back(ids[i]);
        }
    }
    return pool;
}

namespace {

struct MetricStats {
    Int128 sum{0};
    Int128 sum_sq{0};
    Int128 variance_num{0};  // n * sum_sq - sum^2 == n^2 * population variance
};

MetricStats stats_of(std::span<const ScoreEntry> sheet, std::uint32_t ScoreEntry::*field) {
    MetricStats m;
    for (const auto& e : sheet) {
        Int128 v = e.*field;
        m.sum += v;
        m.sum_sq += v * v;
    }
    Int128 n = static_cast<Int128>(sheet.size());
    m.variance_num = n * m.sum_sq - m.sum * m.sum;
    return m;
}

Fixed mean_of(const MetricStats& m, std::size_t n) {
    return Fixed::from_raw(floor_div(m.sum * Fixed::kScale, static_cast<Int128>(n)));
}

Fixed std_of(const MetricStats& m, std::size_t n) {
    Int128 nn = static_cast<Int128>(n) * static_cast<Int128>(n);
    Int128 scaled = floor_div(m.variance_num * Fixed::kScale * Fixed::kScale, nn);
    return Fixed::from_raw(static_cast<std::int64_t>(isqrt(static_cast<unsigned __int128>(scaled))));
}

// |v - mean| > k * sigma and |v - mean| > floor, evaluated without rounding:
// with d = |n*v - S|, the first test is d^2 * scale^2 > K^2 * (n*SS - S^2).
bool deviates(const MetricStats& m, std::size_t n, std::uint32_t value, const ConsensusRule& rule) {
    if (!rule.k) return false;
    Int128 d = static_cast<Int128>(n) * value - m.sum;
    if (d < 0) d = -d;
    Int128 k = rule.k->raw();
    bool beyond_sigma = d * d * Fixed::kScale * Fixed::kScale > k * k * m.variance_num;
    bool beyond_floor = d * Fixed::kScale > static_cast<Int128>(rule.floor.raw()) * static_cast<Int128>(n);
    return beyond_sigma && beyond_floor;
}

void check_sheet(std::span<const ScoreEntry> sheet, std::optional<std::size_t> expected_count) {
    if (sheet.empty()) fail(ErrorCode::kIncompleteSheet, "no scores");
    if (expected_count && sheet.size() != *expected_count) {
        fail(ErrorCode::kIncompleteSheet,
             std::to_string(sheet.size()) + " of " + std::to_string(*expected_count) + " scores");
    }
    std::set<AccountId> seen;
    for (const auto& e : sheet) {
        if (!seen.insert(e.evaluator).second) fail(ErrorCode::kDuplicateScore, e.evaluator.hex());
        if (e.completeness < 1 || e.completeness > 100 || e.quality < 1 || e.quality > 100) {
            fail(ErrorCode::kOutOfRange, e.evaluator.hex());
        }
    }
}

ConsensusResult describe(SubmissionId submission, std::uint32_t round, std::span<const ScoreEntry> sheet,
                         const MetricStats& c, const MetricStats& q) {
    ConsensusResult r;
    r.submission_id = submission;
    r.round = round;
    r.c_mean = mean_of(c, sheet.size());
    r.q_mean = mean_of(q, sheet.size());
    r.c_std = std_of(c, sheet.size());
    r.q_std = std_of(q, sheet.size());
    return r;
}

}  // namespace

ConsensusResult run_consensus(SubmissionId submission, std::uint32_t round, std::span<const ScoreEntry> sheet,
                              const ConsensusRule& rule, std::optional<std::size_t> expected_count) {
    check_sheet(sheet, expected_count);
    if (rule.k && *rule.k < Fixed{}) fail(ErrorCode::kConfigInvalid, "k must be non-negative");
    const std::size_t n = sheet.size();
    MetricStats c = stats_of(sheet, &ScoreEntry::completeness);
    MetricStats q = stats_of(sheet, &ScoreEntry::quality);
    ConsensusResult r = describe(submission, round, sheet, c, q);
    for (const auto& e : sheet) {
        if (deviates(c, n, e.completeness, rule) || deviates(q, n, e.quality, rule)) {
            r.outliers.insert(e.evaluator);
        } else {
            r.in_consensus.insert(e.evaluator);
        }
    }
    r.reached = 2 * r.in_consensus.size() > n;
    return r;
}

ConsensusResult forced_consensus(SubmissionId submission, std::uint32_t round, std::span<const ScoreEntry> sheet) {
    check_sheet(sheet, std::nullopt);
    MetricStats c = stats_of(sheet, &ScoreEntry::completeness);
    MetricStats q = stats_of(sheet, &ScoreEntry::quality);
    ConsensusResult r = describe(submission, round, sheet, c, q);
    for (const auto& e : sheet) r.in_consensus.insert(e.evaluator);
    r.reached = true;
    r.forced = true;
    return r;
}

bool EvaluationRound::is_selected(const AccountId& id) const {
    return std::find(selected.begin(), selected.end(), id) != selected.end();
}

bool EvaluationRound::has_scored(const AccountId& id) const {
    return std::any_of(scores.begin(), scores.end(), [&](const ScoreEntry& e) { return e.evaluator == id; });
}

bool EvaluationRecord::awaiting_reassignment() const {
    if (outcome || rounds.empty()) return false;
    const auto& r = rounds.back();
    return r.result.has_value() && !r.result->reached;
}

void EvaluationBook::withdraw(const AccountId& id) {
    volunteers_.erase(id);
    obligations_.erase(id);
}

EvaluationRecord& EvaluationBook::open_record(SubmissionId id, const AccountId& worker, std::set<AccountId> excluded) {
    auto [it, inserted] = records_.try_emplace(id);
    if (!inserted) throw std::logic_error("evaluation record already open");
    it->second.submission_id = id;
    it->second.worker = worker;
    it->second.excluded = std::move(excluded);
    return it->second;
}

const EvaluationRecord* EvaluationBook::find(SubmissionId id) const {
    auto it = records_.find(id);
    return it == records_.end() ? nullptr : &it->second;
}

const EvaluationRecord& EvaluationBook::get(SubmissionId id) const {
    const EvaluationRecord* r = find(id);
    if (r == nullptr) fail(ErrorCode::kUnknownSubmission, std::to_string(id));
    return *r;
}

EvaluationRecord& EvaluationBook::mutable_get(SubmissionId id) {
    auto it = records_.find(id);
    if (it == records_.end()) fail(ErrorCode::kUnknownSubmission, std::to_string(id));
    return it->second;
}

void EvaluationBook::add_obligation(const AccountId& worker, SubmissionId submission) {
    obligations_[worker].push_back(PendingCredit{submission, {}, std::nullopt});
}

bool EvaluationBook::has_unmet_quota(const AccountId& worker, std::uint32_t y) const {
    auto it = obligations_.find(worker);
    if (it == obligations_.end()) return false;
    return std::any_of(it->second.begin(), it->second.end(),
                       [&](const PendingCredit& c) { return c.e_scores.size() < y; });
}

bool EvaluationBook::credit_evaluation(const AccountId& worker, Fixed e_score, std::uint32_t y) {
    auto it = obligations_.find(worker);
    if (it == obligations_.end()) return false;
    for (auto& credit : it->second) {
        if (credit.e_scores.size() < y) {
            credit.e_scores.push_back(e_score);
            return true;
        }
    }
    return false;
}

void EvaluationBook::set_final_score(const AccountId& worker, SubmissionId submission, Fixed final_score) {
    auto it = obligations_.find(worker);
    if (it == obligations_.end()) return;
    for (auto& credit : it->second) {
        if (credit.submission_id == submission) credit.final_score = final_score;
    }
}

std::vector<PendingCredit> EvaluationBook::take_ready_credits(const AccountId& worker, std::uint32_t y) {
    std::vector<PendingCredit> ready;
    auto it = obligations_.find(worker);
    if (it == obligations_.end()) return ready;
    auto& list = it->second;
    auto keep = std::stable_partition(list.begin(), list.end(), [&](const PendingCredit& c) {
        return !(c.final_score.has_value() && c.e_scores.size() >= y);
    });
    ready.assign(std::make_move_iterator(keep), std::make_move_iterator(list.end()));
    list.erase(keep, list.end());
    if (list.empty()) obligations_.erase(it);
    return ready;
}

namespace {

void encode_result(Writer& w, const ConsensusResult& r) {
    w.u64(r.submission_id).u32(r.round);
    w.i64(r.c_mean.raw()).i64(r.q_mean.raw()).i64(r.c_std.raw()).i64(r.q_std.raw());
    w.u32(static_cast<std::uint32_t>(r.outliers.size()));
    for (const auto& id : r.outliers) w.account(id);
    w.u32(static_cast<std::uint32_t>(r.in_consensus.size()));
    for (const auto& id : r.in_consensus) w.account(id);
    w.boolean(r.reached).boolean(r.forced);
}

}  // namespace

void EvaluationBook::encode(Writer& w) const {
    w.u32(static_cast<std::uint32_t>(volunteers_.size()));
    for (const auto& id : volunteers_) w.account(id);
    w.u64(records_.size());
    for (const auto& [id, rec] : records_) {
        w.u64(id).account(rec.worker);
        w.u32(static_cast<std::uint32_t>(rec.excluded.size()));
        for (const auto& e : rec.excluded) w.account(e);
        w.u32(static_cast<std::uint32_t>(rec.rounds.size()));
        for (const auto& round : rec.rounds) {
            w.u32(round.number).hash(round.seed);
            w.u32(static_cast<std::uint32_t>(round.eligible.size()));
            for (const auto& c : round.eligible) w.account(c.id).i64(c.reputation.raw());
            w.u32(static_cast<std::uint32_t>(round.slots.size()));
            for (const auto& slot : round.slots) {
                w.u32(static_cast<std::uint32_t>(slot.size()));
                for (const auto& id2 : slot) w.account(id2);
            }
            w.u32(static_cast<std::uint32_t>(round.selected.size()));
            for (const auto& s : round.selected) w.account(s);
            w.u32(static_cast<std::uint32_t>(round.scores.size()));
            for (const auto& s : round.scores) w.account(s.evaluator).u32(s.completeness).u32(s.quality).hash(s.review_ref);
            w.boolean(round.result.has_value());
            if (round.result) encode_result(w, *round.result);
        }
        w.boolean(rec.outcome.has_value());
        if (rec.outcome) {
            const auto& o = *rec.outcome;
            w.i64(o.completeness.raw()).i64(o.quality.raw()).i64(o.final_score.raw()).boolean(o.unweighted_fallback);
            w.u32(static_cast<std::uint32_t>(o.evaluators.size()));
            for (const auto& e : o.evaluators) {
                w.account(e.evaluator).i64(e.e_score.raw()).boolean(e.outlier).u8(static_cast<std::uint8_t>(e.role));
                w.i64(e.reputation_delta.raw()).boolean(e.counted_toward_quota);
            }
        }
    }
    w.u64(obligations_.size());
    for (const auto& [who, credits] : obligations_) {
        w.account(who).u32(static_cast<std::uint32_t>(credits.size()));
        for (const auto& c : credits) {
            w.u64(c.submission_id).u32(static_cast<std::uint32_t>(c.e_scores.size()));
            for (const auto& e : c.e_scores) w.i64(e.raw());
            w.boolean(c.final_score.has_value());
            if (c.final_score) w.i64(c.final_score->raw());
        }
    }
    w.u64(consensus_failures).u64(forced_rounds);
}

std::string EvaluationBook::audit_json(SubmissionId id) const {
    const EvaluationRecord& rec = get(id);
    using nlohmann::ordered_json;
    ordered_json j;
    j["submission_id"] = id;
    j["worker"] = rec.worker.hex();
    ordered_json rounds = ordered_json::array();
    for (const auto& round : rec.rounds) {
        ordered_json r;
        r["round"] = round.number;
        r["seed"] = round.seed.hex();
        ordered_json slots = ordered_json::array();
        for (const auto& slot : round.slots) {
            ordered_json s = ordered_json::array();
            for (const auto& a : slot) s.push_back(a.hex());
            slots.push_back(std::move(s));
        }
        r["slots"] = std::move(slots);
        ordered_json selected = ordered_json::array();
        for (const auto& a : round.selected) selected.push_back(a.hex());
        r["selected"] = std::move(selected);
        ordered_json scores = ordered_json::array();
        for (const auto& s : round.scores) {
            scores.push_back({{"evaluator", s.evaluator.hex()},
                              {"completeness", s.completeness},
                              {"quality", s.quality},
                              {"review_ref", s.review_ref.hex()}});
        }
        r["scores"] = std::move(scores);
        if (round.result) {
            const auto& c = *round.result;
            ordered_json outliers = ordered_json::array();
            for (const auto& a : c.outliers) outliers.push_back(a.hex());
            r["consensus"] = {{"c_mean", c.c_mean.to_string()}, {"q_mean", c.q_mean.to_string()},
                              {"c_std", c.c_std.to_string()},   {"q_std", c.q_std.to_string()},
                              {"outliers", outliers},           {"reached", c.reached},
                              {"forced", c.forced}};
        }
        rounds.push_back(std::move(r));
    }
    j["rounds"] = std::move(rounds);
    if (rec.outcome) {
        const auto& o = *rec.outcome;
        ordered_json evals = ordered_json::array();
        for (const auto& e : o.evaluators) {
            evals.push_back({{"evaluator", e.evaluator.hex()},
                             {"e_score", e.e_score.to_string()},
                             {"outlier", e.outlier},
                             {"role", e.role == EvaluatorRole::kObligated ? "obligated" : "volunteer"},
                             {"reputation_delta", e.reputation_delta.to_string()},
                             {"counted_toward_quota", e.counted_toward_quota}});
        }
        j["outcome"] = {{"completeness", o.completeness.to_string()},
                        {"quality", o.quality.to_string()},
                        {"final_score", o.final_score.to_string()},
                        {"unweighted_fallback", o.unweighted_fallback},
                        {"evaluators", evals}};
    }
    return j.dump(2);
}

}  // namespace workerrep
