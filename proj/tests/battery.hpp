#pragma once

#include <algorithm>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "rational.hpp"
#include "support.hpp"
#include "workerrep/evaluation.hpp"

namespace workerrep::testing {

struct BatteryResult {
    std::string name;
    bool ok{false};
    std::string detail;
};

inline AccountId evaluator_id(std::size_t i) {
    AccountId id;
    id.bytes[19] = static_cast<std::uint8_t>(i + 1);
    id.bytes[0] = 0xee;
    return id;
}

inline std::vector<ScoreEntry> sheet_of(const std::vector<std::pair<std::uint32_t, std::uint32_t>>& scores) {
    std::vector<ScoreEntry> out;
    for (std::size_t i = 0; i < scores.size(); ++i) {
        out.push_back({evaluator_id(i), scores[i].first, scores[i].second, {}});
    }
    return out;
}

// Outlier set by direct rational arithmetic: population mean and variance,
// flag when (v - mean)^2 > k^2 var and |v - mean| > floor on either metric.
inline std::set<AccountId> oracle_outliers(const std::vector<ScoreEntry>& sheet, std::optional<Fixed> k, Fixed floor) {
    std::set<AccountId> out;
    if (!k) return out;
    auto n = static_cast<Int128>(sheet.size());
    auto flags = [&](auto metric) {
        Q mean;
        for (const auto& s : sheet) mean = mean + Q(metric(s));
        mean = mean / Q(n);
        Q var;
        for (const auto& s : sheet) {
            Q d = Q(metric(s)) - mean;
            var = var + d * d;
        }
        var = var / Q(n);
        Q kk = Q::fixed(*k) * Q::fixed(*k);
        for (const auto& s : sheet) {
            Q d = (Q(metric(s)) - mean).abs();
            if (kk * var < d * d && Q::fixed(floor) < d) out.insert(s.evaluator);
        }
    };
    flags([](const ScoreEntry& s) { return Int128{s.completeness}; });
    flags([](const ScoreEntry& s) { return Int128{s.quality}; });
    return out;
}

inline bool same_result(const ConsensusResult& a, const ConsensusResult& b) {
    return a.c_mean == b.c_mean && a.q_mean == b.q_mean && a.c_std == b.c_std && a.q_std == b.q_std &&
           a.outliers == b.outliers && a.in_consensus == b.in_consensus && a.reached == b.reached;
}

inline BatteryResult identical_scores_have_no_outliers() {
    for (std::size_t n = 1; n <= 9; ++n) {
        for (std::uint32_t v : {1U, 37U, 100U}) {
            std::vector<std::pair<std::uint32_t, std::uint32_t>> s(n, {v, 101 - v});
            ConsensusResult r = run_consensus(1, 1, sheet_of(s), ConsensusRule{});
            if (!r.outliers.empty() || !r.reached || r.c_std != Fixed{} ||
                r.c_mean != Fixed::from_int(v)) {
                return {"identical scores give no outliers", false, "n=" + std::to_string(n)};
            }
        }
    }
    return {"identical scores give no outliers", true, "n in 1..9"};
}

inline BatteryResult permutation_invariance(std::uint64_t seed, int trials) {
    std::mt19937_64 rng(seed);
    for (int t = 0; t < trials; ++t) {
        std::size_t n = 1 + rng() % 9;
        std::vector<std::pair<std::uint32_t, std::uint32_t>> s;
        for (std::size_t i = 0; i < n; ++i) {
            s.emplace_back(static_cast<std::uint32_t>(1 + rng() % 100), static_cast<std::uint32_t>(1 + rng() % 100));
        }
        std::vector<ScoreEntry> sheet = sheet_of(s);
        ConsensusRule rule{Fixed::from_raw(static_cast<std::int64_t>(5'000 + rng() % 20'000)),
                           Fixed::from_int(static_cast<std::int64_t>(rng() % 15))};
        ConsensusResult base = run_consensus(1, 1, sheet, rule);
        std::vector<ScoreEntry> shuffled = sheet;
        std::shuffle(shuffled.begin(), shuffled.end(), rng);
        if (!same_result(base, run_consensus(1, 1, shuffled, rule))) {
            return {"permutation invariance", false, "trial " + std::to_string(t)};
        }
    }
    return {"permutation invariance", true, std::to_string(trials) + " shuffled sheets"};
}

inline BatteryResult outlier_rule_matches_oracle(std::uint64_t seed, int trials) {
    std::mt19937_64 rng(seed);
    for (int t = 0; t < trials; ++t) {
        std::size_t n = 1 + rng() % 9;
        std::vector<std::pair<std::uint32_t, std::uint32_t>> s;
        std::uint32_t centre = static_cast<std::uint32_t>(20 + rng() % 60);
        for (std::size_t i = 0; i < n; ++i) {
            // Mostly clustered, with the occasional far score.
            auto draw = [&] {
                if (rng() % 4 == 0) return static_cast<std::uint32_t>(1 + rng() % 100);
                return static_cast<std::uint32_t>(centre - 10 + rng() % 21);
            };
            s.emplace_back(draw(), draw());
        }
        std::vector<ScoreEntry> sheet = sheet_of(s);
        std::optional<Fixed> k;
        if (rng() % 5 != 0) k = Fixed::from_raw(static_cast<std::int64_t>(2'500 + rng() % 25'000));
        Fixed floor = Fixed::from_raw(static_cast<std::int64_t>(rng() % 150'000));
        ConsensusResult r = run_consensus(1, 1, sheet, ConsensusRule{k, floor});
        std::set<AccountId> want = oracle_outliers(sheet, k, floor);
        bool reached = 2 * (n - want.size()) > n;
        if (r.outliers != want || r.reached != reached || r.outliers.size() + r.in_consensus.size() != n) {
            return {"outlier rule matches rational oracle", false, "trial " + std::to_string(t)};
        }
    }
    return {"outlier rule matches rational oracle", true, std::to_string(trials) + " sheets"};
}

inline BatteryResult majority_boundary_at_three() {
    ConsensusRule rule{};
    // 90 is more than one deviation out; the two 50s survive.
    ConsensusResult two = run_consensus(1, 1, sheet_of({{50, 50}, {50, 50}, {90, 90}}), rule);
    // Both ends stray 40 from the mean against a deviation of about 32.7.
    ConsensusResult one = run_consensus(1, 1, sheet_of({{10, 10}, {50, 50}, {90, 90}}), rule);
    // Any spread at all flags someone under a bare k = 1; the floor keeps all three.
    ConsensusResult three =
        run_consensus(1, 1, sheet_of({{70, 70}, {71, 71}, {72, 72}}), ConsensusRule{Fixed::from_int(1), Fixed::from_int(2)});
    bool ok = two.in_consensus.size() == 2 && two.reached && one.in_consensus.size() == 1 && !one.reached &&
              three.in_consensus.size() == 3 && three.reached;
    return {"strict majority at x = 3", ok, "3 kept, 2 kept reached; 1 kept not reached"};
}

// Drives one submission through failing rounds on a live platform and
// reports the round at which the fallback fired.
inline BatteryResult forced_fallback_at_max_rounds(std::uint32_t max_rounds) {
    ProtocolParams params;
    params.max_rounds = max_rounds;
    World w(params);
    w.poster("poster");
    w.worker("worker");
    for (std::uint32_t i = 0; i < 3 * max_rounds + 3; ++i) {
        std::string name = "ev" + std::to_string(i);
        w.worker(name);
        w.send(name, op::BecomeEvaluator{});
    }
    TaskId task = w.post("poster");
    AgreementId ag = w.hire("poster", task, "worker");
    w.send("worker", op::AcceptAgreement{ag, 100});
    const std::string plain = "spread";
    SubmissionId sub = w.submit_work("worker", ag, plain);
    const std::uint32_t spread[3] = {10, 50, 90};
    std::string name = "forced fallback at max_rounds = " + std::to_string(max_rounds);
    for (std::uint32_t round = 1; round <= max_rounds; ++round) {
        const auto& rec = w.platform.state().evaluations.get(sub);
        if (rec.finalized() || rec.rounds.size() != round) return {name, false, "fired early at " + std::to_string(round)};
        std::vector<AccountId> chosen = w.selected(sub);
        for (std::size_t i = 0; i < chosen.size(); ++i) {
            w.send(w.name_of(chosen[i]), op::SubmitEvaluation{sub, spread[i], spread[i], {}});
        }
        if (round < max_rounds) {
            const auto& after = w.platform.state().evaluations.get(sub);
            if (after.finalized() || !after.awaiting_reassignment()) {
                return {name, false, "round " + std::to_string(round) + " did not wait for reassignment"};
            }
            w.send("worker", op::AssignEvaluators{sub});
            w.platform.reveal(w.key("worker"), sub, as_bytes(plain));
        }
    }
    const auto& rec = w.platform.state().evaluations.get(sub);
    bool ok = rec.finalized() && rec.rounds.size() == max_rounds && rec.rounds.back().result &&
              rec.rounds.back().result->forced && w.platform.state().evaluations.forced_rounds == 1 &&
              rec.outcome->completeness == Fixed::from_int(50);
    // One more assignment must be refused.
    try {
        w.send("worker", op::AssignEvaluators{sub});
        ok = false;
    } catch (const ProtocolError&) {
    }
    return {name, ok, "finalized with all " + std::to_string(rec.rounds.back().selected.size()) + " scores kept"};
}

inline std::vector<BatteryResult> consensus_battery() {
    return {identical_scores_have_no_outliers(),
            permutation_invariance(7, 2'000),
            outlier_rule_matches_oracle(8, 5'000),
            majority_boundary_at_three(),
            forced_fallback_at_max_rounds(1),
            forced_fallback_at_max_rounds(3)};
}

}  // namespace workerrep::testing
