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

#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "workerrep/codec.hpp"
#include "workerrep/common.hpp"
#include "workerrep/crypto.hpp"

namespace workerrep {

// Append-only content-addressed blob store standing in for IPFS.
// address == keccak256(payload).
class ContentStore {
  public:
    Hash256 put(ByteView payload);
    [[nodiscard]] const Bytes* get(const Hash256& address) const;
    [[nodiscard]] bool contains(const Hash256& address) const { return blobs_.contains(address); }
    [[nodiscard]] std::size_t size() const noexcept { return blobs_.size(); }
    [[nodiscard]] const std::map<Hash256, Bytes>& blobs() const noexcept { return blobs_; }

    // One file per blob, named by hex address.
    void dump(const std::filesystem::path& dir) const;

  private:
    std::map<Hash256, Bytes> blobs_;
};

struct Submission {
    SubmissionId id{0};
    AgreementId agreement_id{0};
    TaskId task_id{0};
    AccountId worker;
    Hash256 commitment;
    std::map<AccountId, Hash256> encrypted_refs;  // evaluator -> envelope address
    bool revealed{false};                          // for the current round
    std::uint32_t round{0};
    Tick committed_at{0};
};

class SubmissionBook {
  public:
    const Submission& commit(const AccountId& worker, AgreementId agreement, TaskId task, const Hash256& commitment,
                             Tick now);
    // Current-round envelopes; must cover exactly `selected`. Throws BadReveal, WrongCaller.
    void record_reveal(SubmissionId id, const AccountId& caller,
                       const std::vector<std::pair<AccountId, Hash256>>& envelopes,
                       std::span<const AccountId> selected);
    void start_round(SubmissionId id, std::uint32_t round);

    [[nodiscard]] const Submission& get(SubmissionId id) const;
    [[nodiscard]] const Submission* find(SubmissionId id) const;
    [[nodiscard]] const Submission* find_by_agreement(AgreementId id) const;
    [[nodiscard]] const std::vector<Submission>& all() const noexcept { return submissions_; }

    void encode(Writer& w) const;

  private:
    std::vector<Submission> submissions_;
};

Hash256 commitment_of(ByteView plaintext);

// Worker side of the reveal: checks the plaintext against the commitment, seals
// one envelope per evaluator and stores it. Throws CommitmentMismatch.
std::vector<std::pair<AccountId, Hash256>> seal_envelopes(
    ContentStore& store, const Submission& submission, const KeyPair& worker, ByteView plaintext,
    std::span<const PublicKey> evaluator_keys, const EnvelopeCipher& cipher = default_envelope_cipher());

// Evaluator side: only an evaluator holding an envelope reference can read it.
// Throws NotAssigned, NotRevealed, AuthFailure, CommitmentMismatch.
Bytes open_envelope(const ContentStore& store, const Submission& submission, const KeyPair& evaluator,
                    const PublicKey& worker_key, const EnvelopeCipher& cipher = default_envelope_cipher());

}  // namespace workerrep
