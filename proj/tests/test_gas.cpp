#include <doctest.h>

#include "gas_oracle.hpp"
#include "support.hpp"

using namespace workerrep;
using namespace workerrep::testing;

TEST_CASE("measured table reproduced") {
    std::string detail;
    CHECK_MESSAGE(gas_table_reproduced(detail), detail);
    CHECK(kReferenceLifecycleGas == kPrintedLifecycleGas);
}

TEST_CASE("usd conversion") {
    CHECK(cost_usd(1'000'000'000, 1.0, 100.0) == doctest::Approx(100.0));
    CHECK(cost_usd(229'786, 1.0, 144.30) == doctest::Approx(0.0332));
    CHECK(cost_usd(229'786, 2.0, 144.30) == doctest::Approx(0.0663));
    CHECK(format_usd(0.0332) == "0.0332");
}

TEST_CASE("schedule charges measured kinds and a default for the rest") {
    GasSchedule s;
    CHECK(s.charge(GasKind::kAssignEvaluators) == 328'702);
    CHECK(s.charge(GasKind::kTick) == kDefaultGas);
    s.set(GasKind::kTick, 7);
    CHECK(s.charge(GasKind::kTick) == 7);
    CHECK_THROWS(s.set(GasKind::kTick, 0));
    s.set_default(5);
    CHECK(s.charge(GasKind::kReveal) == 5);
}

TEST_CASE("lifecycle total needs a complete trace") {
    World w;
    w.poster("poster");
    w.worker("worker");
    std::size_t start = w.platform.ledger().size();
    TaskId t = w.post("poster");
    w.hire("poster", t, "worker");
    auto partial = w.platform.ledger().entries().subspan(start);
    CHECK(error_of([&] { lifecycle_total(partial); }) == ErrorCode::kIncompleteTrace);
}

TEST_CASE("evaluation submits are charged by position") {
    ProtocolParams params;
    params.evaluators_per_submission = 4;
    params.outlier_floor = Fixed::from_int(10);
    World w(params);
    w.poster("poster");
    w.worker("worker");
    for (const char* e : {"e1", "e2", "e3", "e4"}) {
        w.worker(e);
        w.send(e, op::BecomeEvaluator{});
    }
    TaskId t = w.post("poster");
    AgreementId ag = w.hire("poster", t, "worker");
    w.send("worker", op::AcceptAgreement{ag, 100});
    SubmissionId sub = w.submit_work("worker", ag, "w");
    std::vector<std::uint64_t> charged;
    for (const auto& id : w.selected(sub)) {
        charged.push_back(w.send(w.name_of(id), op::SubmitEvaluation{sub, 70, 70, {}}).gas);
    }
    CHECK(charged == std::vector<std::uint64_t>{133'073, 105'620, 105'620, 274'360});
}

TEST_CASE("cost report groups a trace by operation") {
    World w;
    w.poster("p");
    w.worker("a");
    w.worker("b");
    auto rows = cost_report(w.platform.ledger().entries(), w.platform.schedule());
    bool found = false;
    for (const auto& r : rows) {
        if (r.operation == "Create worker") {
            found = true;
            CHECK(r.count == 2);
            CHECK(r.gas == 2 * 229'786);
        }
    }
    CHECK(found);
    CHECK(cost_report_csv(rows).rfind("operation,count,gas,usd\n", 0) == 0);
}
