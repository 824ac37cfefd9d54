#pragma once

#include <map>
#include <string>
#include <vector>

#include "workerrep/keccak.hpp"
#include "workerrep/platform.hpp"

namespace workerrep::testing {

inline KeyPair key_for(const std::string& name) { return KeyPair::from_seed(keccak256("test-key/" + name)); }

inline constexpr Wei kFee = 11'800'000'000'000'000;

// Code of the ProtocolError thrown by `fn`, or kNone.
template <class F>
ErrorCode error_of(F&& fn) {
    try {
        fn();
    } catch (const ProtocolError& e) {
        return e.code();
    }
    return ErrorCode::kNone;
}

// Small driver around Platform for scenario-style unit tests.
class World {
  public:
    explicit World(ProtocolParams params = {}, GasSchedule schedule = {}) : platform(std::move(schedule)) {
        op_key = key_for("operator");
        platform.submit(op_key, op::Deploy{op_key.public_key(), params});
    }

    const KeyPair& key(const std::string& name) {
        auto it = keys.find(name);
        if (it == keys.end()) it = keys.emplace(name, key_for(name)).first;
        return it->second;
    }
    AccountId id(const std::string& name) { return key(name).account(); }

    Receipt send(const std::string& name, const Operation& operation) { return platform.submit(key(name), operation); }

    AccountId worker(const std::string& name, std::vector<std::string> skills = {"coding"}) {
        send(name, op::Register{Role::kWorker, key(name).public_key(), keccak256(name), std::move(skills), kFee});
        return id(name);
    }
    AccountId poster(const std::string& name) {
        send(name, op::Register{Role::kTaskPoster, key(name).public_key(), keccak256(name), {}, kFee});
        return id(name);
    }

    TaskId post(const std::string& poster_name, Wei reward = 1000, std::vector<std::string> skills = {"coding"},
                Fixed wc = Fixed::from_raw(5000), Fixed wq = Fixed::from_raw(5000)) {
        send(poster_name, op::PostTask{"task", std::move(skills), reward, keccak256("meta"), wc, wq});
        return platform.state().market.all().back().id;
    }

    AgreementId hire(const std::string& poster_name, TaskId task, const std::string& worker_name, Wei fee = 100,
                     Tick deadline_offset = 3, Tick due_offset = 6) {
        send(worker_name, op::Apply{task});
        Tick now = platform.state().now;
        Wei reward = platform.state().market.get(task).reward;
        send(poster_name,
             op::CreateAgreement{task, id(worker_name), reward, fee, now + deadline_offset, now + due_offset});
        return platform.state().agreements.all().back().id;
    }

    void advance(Tick to) { platform.submit(op_key, op::AdvanceTime{to}); }

    // Commits `plaintext`, assigns evaluators and reveals; returns the submission id.
    SubmissionId submit_work(const std::string& worker_name, AgreementId agreement, const std::string& plaintext) {
        send(worker_name, op::Commit{agreement, commitment_of(as_bytes(plaintext))});
        SubmissionId sub = platform.state().submissions.all().back().id;
        send(worker_name, op::AssignEvaluators{sub});
        platform.reveal(key(worker_name), sub, as_bytes(plaintext));
        return sub;
    }

    std::vector<AccountId> selected(SubmissionId sub) const {
        return platform.state().evaluations.get(sub).rounds.back().selected;
    }
    std::string name_of(const AccountId& id) const {
        for (const auto& [name, kp] : keys) {
            if (kp.account() == id) return name;
        }
        return {};
    }

    Platform platform;
    KeyPair op_key;
    std::map<std::string, KeyPair> keys;
};

}  // namespace workerrep::testing
