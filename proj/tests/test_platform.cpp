#include <doctest.h>

#include "support.hpp"
#include "workerrep/reputation.hpp"

using namespace workerrep;
using workerrep::testing::World;

namespace {

// Poster, worker and three enrolled evaluators; the task is accepted but not yet submitted.
struct Lifecycle {
    World w;
    TaskId task{0};
    AgreementId agreement{0};
    std::size_t post_index{0};

    Lifecycle() {
        w.poster("poster");
        w.worker("worker");
        for (const char* e : {"e1", "e2", "e3"}) {
            w.worker(e);
            w.send(e, op::BecomeEvaluator{});
        }
        post_index = w.platform.ledger().size();
        task = w.post("poster");
        agreement = w.hire("poster", task, "worker");
        w.send("worker", op::AcceptAgreement{agreement, 100});
    }
};

}  // namespace

TEST_CASE("canonical lifecycle meters the measured total") {
    Lifecycle l;
    World& w = l.w;
    SubmissionId sub = w.submit_work("worker", l.agreement, "work:q=80");
    w.send("worker", op::BecomeEvaluator{});
    for (const auto& id : w.selected(sub)) {
        std::string name = w.name_of(id);
        Bytes plain = w.platform.fetch_for_evaluator(w.key(name), sub);
        CHECK(std::string(plain.begin(), plain.end()) == "work:q=80");
        w.send(name, op::SubmitEvaluation{sub, 80, 80, keccak256(name)});
    }
    const auto& rec = w.platform.state().evaluations.get(sub);
    REQUIRE(rec.finalized());
    CHECK(rec.outcome->final_score == Fixed::from_int(80));
    CHECK(w.platform.state().market.get(l.task).status == TaskStatus::kEvaluated);
    const Agreement& a = w.platform.state().agreements.get(l.agreement);
    CHECK(a.state == AgreementState::kSettled);
    CHECK(a.settlement->reward_paid == 800);
    CHECK(a.settlement->fee_returned == 80);
    CHECK(a.settlement->poster_remainder == 220);

    auto entries = w.platform.ledger().entries().subspan(l.post_index);
    LifecycleTotal total = lifecycle_total(entries);
    CHECK(total.metered_gas == kReferenceLifecycleGas);

    // Volunteers in consensus earn alpha * eScore = 25.
    for (const auto& e : rec.outcome->evaluators) {
        CHECK(e.role == EvaluatorRole::kVolunteer);
        CHECK(w.platform.state().accounts.get(e.evaluator).reputation == Fixed::from_int(26));
    }
}

TEST_CASE("replay reproduces the live state root") {
    Lifecycle l;
    World& w = l.w;
    SubmissionId sub = w.submit_work("worker", l.agreement, "work");
    for (const auto& id : w.selected(sub)) w.send(w.name_of(id), op::SubmitEvaluation{sub, 70, 90, {}});
    ChainState replayed = replay(w.platform.ledger().entries());
    CHECK(replayed.state_root == w.platform.state_root());
}
