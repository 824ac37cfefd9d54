#include <doctest.h>

#include <vector>

#include "support.hpp"
#include "workerrep/ledger.hpp"

using namespace workerrep;
using workerrep::testing::World;

namespace {

// A short but varied history, with the live state root after every entry.
struct History {
    World w;
    std::vector<Hash256> roots;

    History() {
        roots.push_back(w.platform.state_root());
        auto step = [&](const std::string& who, const Operation& op) {
            w.send(who, op);
            roots.push_back(w.platform.state_root());
        };
        auto reg = [&](const std::string& who, Role role) {
            step(who, op::Register{role, w.key(who).public_key(), keccak256(who), {"coding"}, testing::kFee});
        };
        reg("poster", Role::kTaskPoster);
        for (const char* n : {"worker", "e1", "e2", "e3"}) reg(n, Role::kWorker);
        for (const char* n : {"e1", "e2", "e3"}) step(n, op::BecomeEvaluator{});
        step("poster", op::PostTask{"t", {"coding"}, 1000, keccak256("m"), Fixed::from_raw(5000), Fixed::from_raw(5000)});
        TaskId task = w.platform.state().market.all().back().id;
        step("worker", op::Apply{task});
        step("poster", op::CreateAgreement{task, w.id("worker"), 1000, 100, 3, 6});
        step("worker", op::AcceptAgreement{w.platform.state().agreements.all().back().id, 100});
        w.platform.submit(w.op_key, op::AdvanceTime{1});
        roots.push_back(w.platform.state_root());
    }
};

}  // namespace

TEST_CASE("an honest chain verifies") {
    History h;
    auto entries = h.w.platform.ledger().entries();
    CHECK(entries.size() == h.roots.size());
    CHECK(verify_chain(entries).ok);
    CHECK(verify_chain(std::span<const LedgerEntry>{}).ok);
}

TEST_CASE("every prefix replays to the live state root") {
    History h;
    auto entries = h.w.platform.ledger().entries();
    for (std::size_t n = 1; n <= entries.size(); ++n) {
        CHECK(replay(entries.first(n)).state_root == h.roots[n - 1]);
    }
}

TEST_CASE("tampering is caught at the first bad index") {
    History h;
    std::vector<LedgerEntry> base(h.w.platform.ledger().entries().begin(), h.w.platform.ledger().entries().end());

    for (std::size_t i = 0; i < base.size(); ++i) {
        auto payload = base;
        payload[i].payload.push_back(0);
        auto r = verify_chain(payload);
        CHECK_FALSE(r.ok);
        CHECK(r.bad_index == i);

        // Re-hashing the edited entry moves the break to the next link.
        auto rehashed = payload;
        rehashed[i].entry_hash = rehashed[i].compute_hash();
        auto r2 = verify_chain(rehashed);
        CHECK_FALSE(r2.ok);
        if (i + 1 < base.size()) {
            CHECK(r2.bad_index.value() <= i + 1);
        }

        auto gas = base;
        gas[i].gas_charged += 1;
        CHECK(verify_chain(gas).bad_index == i);
    }

    auto dropped = base;
    dropped.erase(dropped.begin() + 3);
    CHECK(verify_chain(dropped).bad_index == 3);

    auto swapped = base;
    std::swap(swapped[4], swapped[5]);
    CHECK(verify_chain(swapped).bad_index == 4);
}

TEST_CASE("a forged signature is rejected even with a consistent hash") {
    History h;
    std::vector<LedgerEntry> chain(h.w.platform.ledger().entries().begin(), h.w.platform.ledger().entries().end());
    LedgerEntry& e = chain[7];
    e.signature[0] ^= 1;
    e.entry_hash = e.compute_hash();
    for (std::size_t i = 8; i < chain.size(); ++i) {
        chain[i].prev_hash = chain[i - 1].entry_hash;
        chain[i].entry_hash = chain[i].compute_hash();
    }
    auto r = verify_chain(chain);
    CHECK_FALSE(r.ok);
    CHECK(r.bad_index == 7);
    CHECK(r.reason == "bad-signature");
    CHECK_THROWS_AS(replay(chain), ProtocolError);
}

TEST_CASE("an entry signed by an unregistered key is rejected") {
    auto stranger = testing::key_for("stranger");
    Ledger ledger;
    ledger.append(encode_operation(op::Deploy{stranger.public_key(), {}}), stranger, 0);
    ledger.append(encode_operation(op::AdvanceTime{1}), testing::key_for("nobody"), 0);
    auto r = verify_chain(ledger.entries());
    CHECK(r.bad_index == 1);
    CHECK(r.reason == "unknown-sender");
}

TEST_CASE("a valid chain carrying an illegal operation fails to fold") {
    auto op_key = testing::key_for("operator");
    Ledger ledger;
    ledger.append(encode_operation(op::Deploy{op_key.public_key(), {}}), op_key, 0);
    ledger.append(encode_operation(op::AdvanceTime{5}), op_key, 0);
    ledger.append(encode_operation(op::AdvanceTime{2}), op_key, 0);  // time runs backwards
    CHECK(verify_chain(ledger.entries()).ok);
    try {
        replay(ledger.entries());
        FAIL("expected InvalidChain");
    } catch (const ProtocolError& e) {
        CHECK(e.code() == ErrorCode::kInvalidChain);
        CHECK(std::string(e.what()).find('2') != std::string::npos);
    }
}

TEST_CASE("snapshot round trip") {
    History h;
    auto entries = h.w.platform.ledger().entries();
    Bytes snap = encode_snapshot(entries);
    auto back = decode_snapshot(snap);
    REQUIRE(back.size() == entries.size());
    for (std::size_t i = 0; i < back.size(); ++i) CHECK(back[i] == entries[i]);

    Bytes truncated(snap.begin(), snap.end() - 5);
    CHECK_THROWS_AS(decode_snapshot(truncated), ProtocolError);
    Bytes bad_magic = snap;
    bad_magic[0] ^= 0xff;
    CHECK_THROWS_AS(decode_snapshot(bad_magic), ProtocolError);
    Bytes trailing = snap;
    trailing.push_back(0);
    CHECK_THROWS_AS(decode_snapshot(trailing), ProtocolError);

    std::string sidecar = snapshot_sidecar_json(entries);
    CHECK(sidecar.find("register") != std::string::npos);
}

TEST_CASE("every operation kind survives encoding") {
    std::vector<Operation> ops{
        op::Deploy{testing::key_for("a").public_key(), {}},
        op::Register{Role::kWorker, testing::key_for("b").public_key(), keccak256("p"), {"x", "y"}, 5},
        op::Exit{},
        op::PostTask{"title", {"s"}, 10, keccak256("m"), Fixed::from_raw(2500), Fixed::from_raw(7500)},
        op::CancelTask{3},
        op::Apply{4},
        op::CreateAgreement{1, AccountId{}, 10, 1, 2, 3},
        op::CancelAgreement{9},
        op::AcceptAgreement{9, 1},
        op::AdvanceTime{77},
        op::Commit{2, keccak256("c")},
        op::AssignEvaluators{5},
        op::Reveal{5, {{AccountId{}, keccak256("e")}}},
        op::BecomeEvaluator{},
        op::SubmitEvaluation{5, 1, 100, keccak256("r")},
        op::Reverted{9, ErrorCode::kWrongCaller},
    };
    for (const auto& op : ops) {
        Bytes enc = encode_operation(op);
        CHECK(encode_operation(decode_operation(enc)) == enc);
        CHECK(kind_of(decode_operation(enc)) == kind_of(op));
        Bytes extra = enc;
        extra.push_back(0);
        CHECK_THROWS_AS(decode_operation(extra), ProtocolError);
    }
    Bytes unknown{0x7f};
    CHECK_THROWS_AS(decode_operation(unknown), ProtocolError);
}
