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

#include "workerrep/submission.hpp"

#include <algorithm>
#include <set>

#include "workerrep/io.hpp"
#include "workerrep/keccak.hpp"

namespace workerrep {

Hash256 ContentStore::put(ByteView payload) {
    Hash256 address = keccak256(payload);
    blobs_.try_emplace(address, payload.begin(), payload.end());
    return address;
}

const Bytes* ContentStore::get(const Hash256& address) const {
    auto it = blobs_.find(address);
    return it == blobs_.end() ? nullptr : &it->second;
}

void ContentStore::dump(const std::filesystem::path& dir) const {
    std::filesystem::create_directories(dir);
    for (const auto& [address, blob] : blobs_) write_file_atomic(dir / address.hex(), blob);
}

const Submission& SubmissionBook::commit(const AccountId& worker, AgreementId agreement, TaskId task,
                                         const Hash256& commitment, Tick now) {
    Submission s;
    s.id = submissions_.size();
    s.agreement_id = agreement;
    s.task_id = task;
    s.worker = worker;
    s.commitment = commitment;
    s.committed_at = now;
    submissions_.push_back(std::move(s));
    return submissions_.back();
}

void SubmissionBook::record_reveal(SubmissionId id, const AccountId& caller,
                                   const std::vector<std::pair<AccountId, Hash256>>& envelopes,
                                   std::span<const AccountId> selected) {
    Submission& s = submissions_.at(get(id).id);
    if (caller != s.worker) fail(ErrorCode::kWrongCaller);
    if (s.round == 0) fail(ErrorCode::kNotAssigned, "no evaluators assigned yet");
    std::set<AccountId> expected(selected.begin(), selected.end());
    std::set<AccountId> given;
    for (const auto& [who, address] : envelopes) {
        if (address.is_zero()) fail(ErrorCode::kBadReveal, "zero content address");
        if (!given.insert(who).second) fail(ErrorCode::kBadReveal, "duplicate evaluator");
    }
    if (given != expected) fail(ErrorCode::kBadReveal, "envelopes must match the assigned evaluators");
    for (const auto& [who, address] : envelopes) s.encrypted_refs[who] = address;
    s.revealed = true;
}

void SubmissionBook::start_round(SubmissionId id, std::uint32_t round) {
    Submission& s = submissions_.at(get(id).id);
    s.round = round;
    s.revealed = false;
    s.encrypted_refs.clear();
}

const Submission* SubmissionBook::find(SubmissionId id) const {
    return id < submissions_.size() ? &submissions_[id] : nullptr;
}

const Submission& SubmissionBook::get(SubmissionId id) const {
    const Submission* s = find(id);
    if (s == nullptr) fail(ErrorCode::kUnknownSubmission, std::to_string(id));
    return *s;
}

const Submission* SubmissionBook::find_by_agreement(AgreementId id) const {
    auto it = std::find_if(submissions_.begin(), submissions_.end(),
                           [&](const Submission& s) { return s.agreement_id == id; });
    return it == submissions_.end() ? nullptr : &*it;
}

void SubmissionBook::encode(Writer& w) const {
    w.u64(submissions_.size());
    for (const auto& s : submissions_) {
        w.u64(s.id).u64(s.agreement_id).u64(s.task_id).account(s.worker).hash(s.commitment);
        w.u32(static_cast<std::uint32_t>(s.encrypted_refs.size()));
        for (const auto& [who, address] : s.encrypted_refs) w.account(who).hash(address);
        w.boolean(s.revealed).u32(s.round).i64(s.committed_at);
    }
}

Hash256 commitment_of(ByteView plaintext) { return keccak256(plaintext); }

std::vector<std::pair<AccountId, Hash256>> seal_envelopes(ContentStore& store, const Submission& submission,
                                                          const KeyPair& worker, ByteView plaintext,
                                                          std::span<const PublicKey> evaluator_keys,
                                                          const EnvelopeCipher& cipher) {
    if (commitment_of(plaintext) != submission.commitment) {
        fail(ErrorCode::kCommitmentMismatch, "plaintext does not match the recorded commitment");
    }
    std::vector<std::pair<AccountId, Hash256>> out;
    out.reserve(evaluator_keys.size());
    for (const PublicKey& key : evaluator_keys) {
        Bytes envelope = cipher.seal(worker, key, plaintext);
        out.emplace_back(account_of(key), store.put(envelope));
    }
    return out;
}

Bytes open_envelope(const ContentStore& store, const Submission& submission, const KeyPair& evaluator,
                    const PublicKey& worker_key, const EnvelopeCipher& cipher) {
    auto ref = submission.encrypted_refs.find(evaluator.account());
    if (ref == submission.encrypted_refs.end()) {
        if (submission.round > 0 && !submission.revealed) fail(ErrorCode::kNotRevealed);
        fail(ErrorCode::kNotAssigned, evaluator.account().hex());
    }
    const Bytes* blob = store.get(ref->second);
    if (blob == nullptr) fail(ErrorCode::kAuthFailure, "envelope missing from store");
    Bytes plaintext = cipher.open(evaluator, worker_key, *blob);
    if (commitment_of(plaintext) != submission.commitment) fail(ErrorCode::kCommitmentMismatch);
    return plaintext;
}

}  // namespace workerrep
