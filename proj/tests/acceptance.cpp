// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fail.

#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>

#include "battery.hpp"
#include "gas_oracle.hpp"
#include "oracle.hpp"
#include "sim_support.hpp"
#include "support.hpp"
#include "workerrep/reputation.hpp"

using namespace workerrep;
using namespace workerrep::testing;
using namespace workerrep::reputation;

namespace {

struct Verdict {
    bool ok{true};
    std::ostringstream detail;

    void require(bool cond, const std::string& what) {
        if (!cond) {
            ok = false;
            detail << "[failed: " << what << "] ";
        }
    }
};

int failures = 0;

void criterion(int n, const char* name, const std::function<void(Verdict&)>& body) {
    Verdict v;
    try {
        body(v);
    } catch (const std::exception& e) {
        v.ok = false;
        v.detail << "exception: " << e.what();
    }
    if (!v.ok) ++failures;
    std::printf("%s %d %s: %s\n", v.ok ? "PASS" : "FAIL", n, name, v.detail.str().c_str());
    std::fflush(stdout);
}

}  // namespace

int main() {
    criterion(1, "gas table", [](Verdict& v) {
        std::string detail;
        v.require(gas_table_reproduced(detail), "table");
        v.detail << detail;
    });

    criterion(2, "fixed-point formulas against exact rationals", [](Verdict& v) {
        OracleReport r = run_equation_oracle(20'240'601, 12'000);
        v.require(r.max_deviation.size() == 9, "all nine formulas sampled");
        v.require(r.worst() <= 1, "deviation at most one unit");
        v.detail << r.samples << " samples, worst deviation " << r.worst();
    });

    criterion(3, "worked values", [](Verdict& v) {
        Fixed alpha = Fixed::from_raw(2'500);
        std::vector<Fixed> perfect{Fixed::from_int(100), Fixed::from_int(100), Fixed::from_int(100)};
        Fixed rep = submission_rep_delta(Fixed::from_int(80), perfect, 3, alpha);
        Fixed escore = evaluator_score(Fixed::from_int(72), Fixed::from_int(64), 72, 64);
        Wei paid = reward_amount(Fixed::from_int(80), 1000);
        v.require(rep == Fixed::from_int(85), "reputation update");
        v.require(escore == Fixed::from_int(100), "evaluator score");
        v.require(paid == 800, "reward");
        v.detail << "update " << rep.to_string() << ", eScore " << escore.to_string() << ", reward " << paid;
    });

    criterion(4, "conservation over random scenarios", [](Verdict& v) {
        int bad = 0;
        std::uint64_t entries = 0;
        for (std::uint64_t seed = 1; seed <= 100; ++seed) {
            sim::RunResult res = sim::run(random_scenario(seed));
            bool ok = res.report.conservation_residual == 0 && res.report.chain_ok && verify_chain(res.trace).ok;
            for (const auto& m : res.report.metrics) ok = ok && m.conservation_residual == 0;
            if (!ok) {
                ++bad;
                v.detail << "seed " << seed << " residual " << res.report.conservation_residual << "; ";
            }
            entries += res.trace.size();
        }
        v.require(bad == 0, "every run balanced and verified");
        v.detail << "100 scenarios, " << entries << " ledger entries";
    });

    criterion(5, "determinism and replay", [](Verdict& v) {
        for (const char* name : {"honest", "collusion", "sybil"}) {
            sim::ScenarioConfig c = load_scenario(name);
            sim::RunResult a = sim::run(c);
            sim::RunResult b = sim::run(c);
            v.require(encode_snapshot(a.trace) == encode_snapshot(b.trace), std::string(name) + " trace");
            v.require(sim::report_json(a.report, c) == sim::report_json(b.report, c), std::string(name) + " report");
            v.require(sim::metrics_csv(a.report) == sim::metrics_csv(b.report), std::string(name) + " metrics");
            v.require(replay(a.trace).state_root == a.report.state_root, std::string(name) + " replay root");
        }
        v.detail << "three scenarios run twice and replayed";
    });

    criterion(6, "robustness properties", [](Verdict& v) {
        // (a) outlier removal protects bad-mouthed targets
        sim::ScenarioConfig bm = load_scenario("bad_mouthing");
        v.detail << "(a)";
        for (std::uint64_t seed = 1; seed <= 5; ++seed) {
            bm.seed = seed;
            sim::AblationPair p = sim::ablate(bm, sim::Feature::kOutlierRemoval);
            double on = p.with.target_mean_final_score.value_or(0);
            double off = p.without.target_mean_final_score.value_or(0);
            v.require(p.with.target_mean_final_score && on > off, "targets better off, seed " + std::to_string(seed));
            char buf[64];
            std::snprintf(buf, sizeof buf, " %.2f>%.2f", on, off);
            v.detail << buf;
        }

        // (b) colluders share a submission no more often than chance
        sim::ScenarioConfig co = load_scenario("collusion");
        std::uint64_t hits = 0;
        double expected = 0, variance = 0;
        for (std::uint64_t seed = 1; seed <= 5; ++seed) {
            co.seed = seed;
            sim::CollusionStats s = sim::run(co).report.collusion;
            hits += s.co_assigned;
            expected += s.expected;
            variance += s.variance;
        }
        double bound = expected + 2 * std::sqrt(variance);
        v.require(static_cast<double>(hits) <= bound, "co-assignment within expectation + 2 SE");
        char buf[128];
        std::snprintf(buf, sizeof buf, "; (b) %llu co-assigned, bound %.2f", static_cast<unsigned long long>(hits),
                      bound);
        v.detail << buf;

        // (c) every identity costs one registration fee
        v.require(ProtocolParams{}.registration_fee == kFee, "fee is 0.0118 ether");
        for (std::uint32_t n : {1U, 3U, 10U, 25U}) {
            World w;
            for (std::uint32_t i = 0; i < n; ++i) w.worker("id" + std::to_string(i));
            v.require(w.platform.state().accounts.fees_in() == static_cast<Wei>(n) * kFee,
                      "cost of " + std::to_string(n) + " identities");
        }
        sim::RunReport sy = sim::run(load_scenario("sybil")).report;
        v.require(sy.sybil_identities > 0, "spawners register identities");
        v.detail << "; (c) linear, " << sy.sybil_identities << " spawned";

        // (d) leaving with below-average reputation forfeits part of the deposit
        sim::RunReport re = sim::run(load_scenario("reentry")).report;
        v.require(re.reentry.exits > 0, "re-entrants exit");
        v.require(re.reentry.refunded < re.reentry.deposits_at_exit, "refund below deposit");
        for (const auto& [rep, avg] : re.reentry.exits_at) v.require(rep < avg, "exits below average");
        v.detail << "; (d) " << re.reentry.exits << " exits, refunded " << re.reentry.refunded << " of "
                 << re.reentry.deposits_at_exit;
    });

    criterion(7, "consensus battery", [](Verdict& v) {
        for (const auto& r : consensus_battery()) {
            v.require(r.ok, r.name + " " + r.detail);
            v.detail << r.name << (r.ok ? " ok; " : " FAILED; ");
        }
    });

    return failures == 0 ? 0 : 1;
}
