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

#include <span>
#include <vector>

#include "workerrep/accounts.hpp"
#include "workerrep/agreement.hpp"
#include "workerrep/evaluation.hpp"
#include "workerrep/gasmodel.hpp"
#include "workerrep/ledger.hpp"
#include "workerrep/marketplace.hpp"
#include "workerrep/operations.hpp"
#include "workerrep/submission.hpp"

namespace workerrep {

// Everything derived from the ledger. The content store is off-ledger and
// deliberately not part of it.
struct PlatformState {
    ProtocolParams params;
    bool deployed{false};
    Tick now{0};
    std::uint64_t entries_applied{0};
    AccountRegistry accounts;
    Marketplace market;
    AgreementBook agreements;
    SubmissionBook submissions;
    EvaluationBook evaluations;

    void encode(Writer& w) const;
    [[nodiscard]] Hash256 state_root() const;
};

struct ApplyOutcome {
    GasKind gas_kind{GasKind::kTick};
    std::vector<AgreementEvent> events;
    Wei refunded{0};  // deposit returned by an exit
};

// Applies one operation sent by `sender`. Leaves `state` untouched when it throws.
ApplyOutcome apply_operation(PlatformState& state, const AccountId& sender, const Operation& operation);

// Workers that could be drawn for `submission` right now.
std::vector<Candidate> eligible_evaluators(const PlatformState& state, SubmissionId submission);

// Blockers for an exit by `id`; empty when the account may leave.
std::vector<std::string> open_obligations(const PlatformState& state, const AccountId& id);

struct ChainState {
    PlatformState state;
    Hash256 state_root;
};

// Folds one already-verified entry. Throws InvalidChain naming the entry index.
void fold_entry(PlatformState& state, const LedgerEntry& entry);

// Verifies the chain, then folds it from the empty state. Throws InvalidChain.
ChainState replay(std::span<const LedgerEntry> entries);

struct Receipt {
    std::uint64_t index{0};
    GasKind gas_kind{GasKind::kTick};
    std::uint64_t gas{0};
    std::vector<AgreementEvent> events;
    Wei refunded{0};
};

// Single-writer front end: applies an operation, then appends the signed entry.
class Platform {
  public:
    explicit Platform(GasSchedule schedule = {}, const SignatureScheme& scheme = default_signature_scheme(),
                      const EnvelopeCipher& cipher = default_envelope_cipher());

    // A rejected call appends nothing, except a wrong-caller acceptance, which
    // is recorded as a reverted entry that still pays gas.
    Receipt submit(const KeyPair& signer, const Operation& operation);

    // Worker side of the reveal: seals one envelope per current evaluator and
    // records the addresses on the ledger.
    Receipt reveal(const KeyPair& worker, SubmissionId submission, ByteView plaintext);
    // Evaluator side. Throws NotAssigned, NotRevealed, AuthFailure.
    [[nodiscard]] Bytes fetch_for_evaluator(const KeyPair& evaluator, SubmissionId submission) const;

    [[nodiscard]] std::vector<Task> search(const TaskFilter& filter) const { return state_.market.search(filter); }

    [[nodiscard]] const PlatformState& state() const noexcept { return state_; }
    [[nodiscard]] const Ledger& ledger() const noexcept { return ledger_; }
    [[nodiscard]] const ContentStore& store() const noexcept { return store_; }
    [[nodiscard]] const GasSchedule& schedule() const noexcept { return schedule_; }
    [[nodiscard]] const std::vector<AgreementEvent>& events() const noexcept { return events_; }
    [[nodiscard]] Hash256 state_root() const { return state_.state_root(); }

  private:
    GasSchedule schedule_;
    const SignatureScheme* scheme_;
    const EnvelopeCipher* cipher_;
    PlatformState state_;
    Ledger ledger_;
    ContentStore store_;
    std::vector<AgreementEvent> events_;
};

// JSON manifest of revealed envelopes: submission -> evaluator -> address.
std::string store_manifest_json(const PlatformState& state);

}  // namespace workerrep
