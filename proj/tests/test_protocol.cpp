#include <doctest.h>

#include <random>

#include "support.hpp"
#include "workerrep/reputation.hpp"

using namespace workerrep;
using workerrep::testing::error_of;
using workerrep::testing::kFee;
using workerrep::testing::World;

TEST_CASE("registration") {
    World w;
    w.worker("alice");
    const UserAccount& a = w.platform.state().accounts.get(w.id("alice"));
    CHECK(a.reputation == Fixed::from_int(1));
    CHECK(a.deposit == kFee);
    CHECK(a.is_worker());

    CHECK(error_of([&] { w.worker("alice"); }) == ErrorCode::kDuplicateKey);
    auto cheap = op::Register{Role::kWorker, w.key("bob").public_key(), {}, {}, kFee - 1};
    CHECK(error_of([&] { w.send("bob", cheap); }) == ErrorCode::kInsufficientDeposit);
    // Someone else's key cannot be registered.
    auto stolen = op::Register{Role::kWorker, w.key("carol").public_key(), {}, {}, kFee};
    CHECK(error_of([&] { w.send("mallory", stolen); }) == ErrorCode::kWrongCaller);
    CHECK(error_of([&] { w.send("nobody", op::BecomeEvaluator{}); }) == ErrorCode::kUnknownSender);
    // A second deployment is refused.
    CHECK(error_of([&] { w.platform.submit(w.op_key, op::Deploy{w.op_key.public_key(), {}}); }) ==
          ErrorCode::kBadGenesis);
}

TEST_CASE("identity cost is linear in the number of identities") {
    for (std::uint32_t n : {1U, 2U, 5U, 17U}) {
        World w;
        Wei before = w.platform.state().accounts.deposits_held();
        for (std::uint32_t i = 0; i < n; ++i) w.worker("sybil" + std::to_string(i));
        CHECK(w.platform.state().accounts.deposits_held() - before == static_cast<Wei>(n) * kFee);
        CHECK(w.platform.state().accounts.fees_in() == static_cast<Wei>(n) * kFee);
    }
}

TEST_CASE("exit refund rule") {
    using workerrep::exit_refund;
    Fixed avg = Fixed::from_int(10);
    CHECK(exit_refund(1000, Fixed::from_int(10), avg, false) == 1000);
    CHECK(exit_refund(1000, Fixed::from_int(20), avg, false) == 1000);
    CHECK(exit_refund(1000, Fixed::from_int(5), avg, false) == 500);
    CHECK(exit_refund(1000, Fixed::from_int(5), avg, true) == 1000);
    CHECK(exit_refund(1000, Fixed{}, avg, false) == 0);
    std::mt19937_64 rng(3);
    for (int i = 0; i < 5'000; ++i) {
        Wei deposit = static_cast<Wei>(rng() % 20'000'000'000'000'000ULL);
        Fixed a = Fixed::from_raw(static_cast<std::int64_t>(1 + rng() % 10'000'000));
        Fixed r = Fixed::from_raw(static_cast<std::int64_t>(rng() % 10'000'000));
        Wei got = exit_refund(deposit, r, a, false);
        Wei want = r >= a ? deposit
                          : static_cast<Wei>(static_cast<Int128>(deposit) * r.raw() / a.raw());
        CHECK(got == want);
        if (r < a && deposit > 0) CHECK(got < deposit);
    }
}

TEST_CASE("exit is blocked by open obligations and withdraws open tasks") {
    World w;
    w.poster("poster");
    w.worker("worker");
    w.worker("other");
    TaskId t1 = w.post("poster");
    TaskId t2 = w.post("poster");
    AgreementId ag = w.hire("poster", t1, "worker");
    CHECK(error_of([&] { w.send("worker", op::Exit{}); }) == ErrorCode::kOpenObligations);
    CHECK(error_of([&] { w.send("poster", op::Exit{}); }) == ErrorCode::kOpenObligations);
    w.send("poster", op::CancelAgreement{ag});
    Receipt r = w.send("poster", op::Exit{});
    CHECK(r.refunded == kFee);
    CHECK(w.platform.state().market.get(t2).status == TaskStatus::kCancelled);
    CHECK(error_of([&] { w.send("poster", op::Exit{}); }) == ErrorCode::kAlreadyExited);
    // Below-average workers forfeit part of the deposit.
    Receipt rw = w.send("worker", op::Exit{});
    CHECK(rw.refunded == kFee);  // everyone is still at the starting reputation
}

TEST_CASE("marketplace search matches a brute-force filter") {
    World w;
    w.poster("poster");
    std::vector<std::vector<std::string>> skill_sets{{"coding"}, {"design"}, {"coding", "design"}, {}, {"audio"}};
    std::mt19937_64 rng(5);
    for (int i = 0; i < 60; ++i) {
        w.post("poster", static_cast<Wei>(1 + rng() % 5000), skill_sets[rng() % skill_sets.size()]);
    }
    for (int i = 0; i < 10; ++i) w.send("poster", op::CancelTask{static_cast<TaskId>(rng() % 60)});
    const auto& all = w.platform.state().market.all();
    for (int q = 0; q < 200; ++q) {
        TaskFilter f;
        if (rng() % 2) {
            std::set<std::string> held;
            for (const char* s : {"coding", "design", "audio"}) {
                if (rng() % 2) held.insert(s);
            }
            f.skills = held;
        }
        if (rng() % 2) f.min_reward = static_cast<Wei>(rng() % 5000);
        if (rng() % 2) f.status = rng() % 2 ? TaskStatus::kOpen : TaskStatus::kCancelled;
        std::vector<TaskId> want;
        for (const auto& t : all) {
            bool ok = true;
            if (f.skills) {
                for (const auto& s : t.skills_required) ok = ok && f.skills->contains(s);
            }
            if (f.min_reward) ok = ok && t.reward >= *f.min_reward;
            if (f.status) ok = ok && t.status == *f.status;
            if (ok) want.push_back(t.id);
        }
        std::vector<TaskId> got;
        for (const auto& t : w.platform.search(f)) got.push_back(t.id);
        CHECK(got == want);
    }
}

TEST_CASE("task posting rules") {
    World w;
    w.poster("poster");
    w.worker("worker");
    CHECK(error_of([&] { w.post("worker"); }) == ErrorCode::kNotATaskPoster);
    CHECK(error_of([&] { w.post("poster", 0); }) == ErrorCode::kNonPositiveReward);
    CHECK(error_of([&] { w.post("poster", 10, {}, Fixed::from_raw(6000), Fixed::from_raw(6000)); }) ==
          ErrorCode::kBadWeights);
    TaskId t = w.post("poster");
    w.send("worker", op::Apply{t});
    w.send("worker", op::Apply{t});  // idempotent
    CHECK(w.platform.state().market.get(t).applicants.size() == 1);
    CHECK(error_of([&] { w.send("worker", op::CancelTask{t}); }) == ErrorCode::kNotTaskOwner);
    w.send("poster", op::CancelTask{t});
    CHECK(error_of([&] { w.send("worker", op::Apply{t}); }) == ErrorCode::kTaskNotOpen);
    CHECK(error_of([&] { w.send("worker", op::Apply{999}); }) == ErrorCode::kUnknownTask);
}

TEST_CASE("agreement creation and acceptance rules") {
    World w;
    w.poster("poster");
    w.worker("worker");
    w.worker("stranger");
    TaskId t = w.post("poster", 1000);
    w.send("worker", op::Apply{t});
    CHECK(error_of([&] { w.send("poster", op::CreateAgreement{t, w.id("stranger"), 1000, 100, 3, 6}); }) ==
          ErrorCode::kNotAnApplicant);
    CHECK(error_of([&] { w.send("poster", op::CreateAgreement{t, w.id("worker"), 999, 100, 3, 6}); }) ==
          ErrorCode::kWrongEscrowAmount);
    CHECK(error_of([&] { w.send("poster", op::CreateAgreement{t, w.id("worker"), 1000, 100, 6, 6}); }) ==
          ErrorCode::kBadDeadlines);
    w.send("poster", op::CreateAgreement{t, w.id("worker"), 1000, 100, 3, 6});
    AgreementId ag = w.platform.state().agreements.all().back().id;

    // The wrong worker's attempt is recorded and still pays gas.
    std::size_t before = w.platform.ledger().size();
    CHECK(error_of([&] { w.send("stranger", op::AcceptAgreement{ag, 100}); }) == ErrorCode::kWrongCaller);
    CHECK(w.platform.ledger().size() == before + 1);
    CHECK(w.platform.ledger().entries().back().gas_charged == 49'729);
    CHECK(std::holds_alternative<op::Reverted>(decode_operation(w.platform.ledger().entries().back().payload)));

    CHECK(error_of([&] { w.send("worker", op::AcceptAgreement{ag, 99}); }) == ErrorCode::kWrongDeposit);
    w.advance(4);
    CHECK(error_of([&] { w.send("worker", op::AcceptAgreement{ag, 100}); }) == ErrorCode::kExpired);
    CHECK(w.platform.state().agreements.get(ag).state == AgreementState::kCancelled);
    CHECK(w.platform.state().market.get(t).status == TaskStatus::kCancelled);
    CHECK(replay(w.platform.ledger().entries()).state_root == w.platform.state_root());
}

TEST_CASE("a worker who never commits defaults to the poster") {
    World w;
    w.poster("poster");
    w.worker("worker");
    TaskId t = w.post("poster", 1000);
    AgreementId ag = w.hire("poster", t, "worker");
    w.send("worker", op::AcceptAgreement{ag, 100});
    w.advance(7);
    const Agreement& a = w.platform.state().agreements.get(ag);
    CHECK(a.state == AgreementState::kDefaulted);
    CHECK(w.platform.state().agreements.held() == 0);
    const auto& events = w.platform.events();
    CHECK(events.back().kind == AgreementEventKind::kDefaulted);
    CHECK(events.back().to_poster == 1100);
    CHECK(error_of([&] { w.send("worker", op::Commit{ag, keccak256("late")}); }) != ErrorCode::kNone);
}

TEST_CASE("escrow is conserved across random agreement histories") {
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        std::mt19937_64 rng(seed);
        World w;
        w.poster("poster");
        for (int i = 0; i < 4; ++i) w.worker("w" + std::to_string(i));
        Tick now = 0;
        for (int step = 0; step < 80; ++step) {
            std::string worker = "w" + std::to_string(rng() % 4);
            switch (rng() % 6) {
                case 0: w.post("poster", static_cast<Wei>(1 + rng() % 10'000)); break;
                case 1: {
                    const auto& tasks = w.platform.state().market.all();
                    if (tasks.empty()) break;
                    TaskId t = tasks[rng() % tasks.size()].id;
                    (void)error_of([&] { w.hire("poster", t, worker, static_cast<Wei>(rng() % 500)); });
                    break;
                }
                case 2: {
                    const auto& ags = w.platform.state().agreements.all();
                    if (ags.empty()) break;
                    const Agreement& a = ags[rng() % ags.size()];
                    AgreementId id = a.id;
                    Wei fee = a.acceptance_fee;
                    (void)error_of([&] { w.send(w.name_of(a.worker), op::AcceptAgreement{id, fee}); });
                    break;
                }
                case 3: {
                    const auto& ags = w.platform.state().agreements.all();
                    if (ags.empty()) break;
                    AgreementId id = ags[rng() % ags.size()].id;
                    (void)error_of([&] { w.send("poster", op::CancelAgreement{id}); });
                    break;
                }
                default: w.advance(++now); break;
            }
            const AgreementBook& book = w.platform.state().agreements;
            Wei out = 0;
            for (const auto& e : w.platform.events()) out += e.to_worker + e.to_poster;
            CHECK(book.paid_in() == book.paid_out() + book.held());
            CHECK(book.paid_out() == out);
        }
    }
}

TEST_CASE("commit and reveal") {
    World w;
    w.poster("poster");
    w.worker("worker");
    for (const char* e : {"e1", "e2", "e3", "e4"}) {
        w.worker(e);
        w.send(e, op::BecomeEvaluator{});
    }
    TaskId t = w.post("poster");
    AgreementId ag = w.hire("poster", t, "worker");
    w.send("worker", op::AcceptAgreement{ag, 100});
    const std::string work = "the deliverable";
    w.send("worker", op::Commit{ag, commitment_of(as_bytes(work))});
    SubmissionId sub = w.platform.state().submissions.all().back().id;
    CHECK(error_of([&] { w.send("worker", op::Commit{ag, commitment_of(as_bytes(work))}); }) ==
          ErrorCode::kAlreadyCommitted);
    CHECK(error_of([&] { w.platform.reveal(w.key("worker"), sub, as_bytes(work)); }) == ErrorCode::kNotAssigned);
    CHECK(error_of([&] { w.send("e1", op::AssignEvaluators{sub}); }) == ErrorCode::kWrongCaller);
    w.send("worker", op::AssignEvaluators{sub});
    auto selected = w.selected(sub);
    REQUIRE(selected.size() == 3);
    CHECK(error_of([&] { w.send(w.name_of(selected[0]), op::SubmitEvaluation{sub, 50, 50, {}}); }) ==
          ErrorCode::kNotRevealed);
    CHECK(error_of([&] { (void)w.platform.fetch_for_evaluator(w.key(w.name_of(selected[0])), sub); }) ==
          ErrorCode::kNotRevealed);
    CHECK(error_of([&] { w.platform.reveal(w.key("worker"), sub, as_bytes(std::string("forged"))); }) ==
          ErrorCode::kCommitmentMismatch);
    w.platform.reveal(w.key("worker"), sub, as_bytes(work));

    std::string outsider;
    for (const char* e : {"e1", "e2", "e3", "e4"}) {
        if (std::find(selected.begin(), selected.end(), w.id(e)) == selected.end()) outsider = e;
    }
    CHECK(error_of([&] { (void)w.platform.fetch_for_evaluator(w.key(outsider), sub); }) == ErrorCode::kNotAssigned);
    CHECK(error_of([&] { w.send(outsider, op::SubmitEvaluation{sub, 50, 50, {}}); }) == ErrorCode::kNotSelected);
    for (const auto& id : selected) {
        Bytes plain = w.platform.fetch_for_evaluator(w.key(w.name_of(id)), sub);
        CHECK(std::string(plain.begin(), plain.end()) == work);
    }
    std::string first = w.name_of(selected[0]);
    CHECK(error_of([&] { w.send(first, op::SubmitEvaluation{sub, 0, 50, {}}); }) == ErrorCode::kOutOfRange);
    w.send(first, op::SubmitEvaluation{sub, 60, 60, {}});
    CHECK(error_of([&] { w.send(first, op::SubmitEvaluation{sub, 60, 60, {}}); }) == ErrorCode::kDuplicateScore);
}

TEST_CASE("envelopes resist tampering and impersonation") {
    ContentStore store;
    KeyPair worker = testing::key_for("worker");
    KeyPair impostor = testing::key_for("impostor");
    KeyPair evaluator = testing::key_for("evaluator");
    KeyPair outsider = testing::key_for("outsider");
    const std::string text = "secret work";
    Submission sub;
    sub.id = 1;
    sub.worker = worker.account();
    sub.commitment = commitment_of(as_bytes(text));
    std::vector<PublicKey> keys{evaluator.public_key()};
    auto refs = seal_envelopes(store, sub, worker, as_bytes(text), keys);
    REQUIRE(refs.size() == 1);
    sub.encrypted_refs[refs[0].first] = refs[0].second;
    sub.revealed = true;
    CHECK(store.contains(refs[0].second));
    CHECK(keccak256(*store.get(refs[0].second)) == refs[0].second);
    Bytes plain = open_envelope(store, sub, evaluator, worker.public_key());
    CHECK(std::string(plain.begin(), plain.end()) == text);
    CHECK(error_of([&] { open_envelope(store, sub, outsider, worker.public_key()); }) == ErrorCode::kNotAssigned);
    // An envelope sealed by someone else does not authenticate as the worker.
    CHECK(error_of([&] { open_envelope(store, sub, evaluator, impostor.public_key()); }) == ErrorCode::kAuthFailure);

    // A flipped ciphertext byte stored under a fresh address fails authentication.
    Bytes tampered = *store.get(refs[0].second);
    tampered.back() ^= 1;
    Hash256 addr = store.put(tampered);
    sub.encrypted_refs[evaluator.account()] = addr;
    CHECK(error_of([&] { open_envelope(store, sub, evaluator, worker.public_key()); }) == ErrorCode::kAuthFailure);
}

TEST_CASE("volunteering needs an average reputation") {
    ProtocolParams params;
    World w(params);
    w.worker("a");
    w.send("a", op::BecomeEvaluator{});
    CHECK(error_of([&] { w.send("a", op::BecomeEvaluator{}); }) == ErrorCode::kAlreadyEnrolled);
    w.poster("p");
    CHECK(error_of([&] { w.send("p", op::BecomeEvaluator{}); }) == ErrorCode::kNotAWorker);
}
