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

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "workerrep/common.hpp"
#include "workerrep/crypto.hpp"

namespace workerrep {

struct LedgerEntry {
    std::uint64_t index{0};
    Hash256 prev_hash;
    Bytes payload;  // canonical operation descriptor
    AccountId sender;
    Bytes signature;  // over signing_digest(index, prev_hash, payload)
    std::uint64_t gas_charged{0};
    Hash256 entry_hash;

    // H(index | prev_hash | payload | sender | signature | gas_charged)
    [[nodiscard]] Hash256 compute_hash() const;

    bool operator==(const LedgerEntry&) const = default;
};

Hash256 signing_digest(std::uint64_t index, const Hash256& prev_hash, ByteView payload);

// Append-only, hash-chained log. Exactly one writer; const access is safe to share.
class Ledger {
  public:
    Ledger() = default;

    const LedgerEntry& append(Bytes payload, const KeyPair& signer, std::uint64_t gas_charged,
                              const SignatureScheme& scheme = default_signature_scheme());

    [[nodiscard]] std::span<const LedgerEntry> entries() const noexcept { return entries_; }
    [[nodiscard]] std::size_t size() const noexcept { return entries_.size(); }
    [[nodiscard]] Hash256 head() const noexcept { return entries_.empty() ? Hash256{} : entries_.back().entry_hash; }

  private:
    std::vector<LedgerEntry> entries_;
};

struct VerificationReport {
    bool ok{true};
    std::optional<std::uint64_t> bad_index;
    std::string reason;  // hash-mismatch, broken-link, bad-index, bad-signature, ...

    [[nodiscard]] std::string describe() const;
};

// Checks index sequence, hash links, entry hashes and signatures. Sender keys
// are learned from self-registering entries (deployment and registration).
VerificationReport verify_chain(std::span<const LedgerEntry> entries,
                                const SignatureScheme& scheme = default_signature_scheme());

// Snapshot file: "WRLEDGR1" magic, u64 count, then each entry field-by-field.
Bytes encode_snapshot(std::span<const LedgerEntry> entries);
std::vector<LedgerEntry> decode_snapshot(ByteView data);

// Human-readable JSON index: entry index -> operation kind, sender, gas.
std::string snapshot_sidecar_json(std::span<const LedgerEntry> entries);

}  // namespace workerrep
