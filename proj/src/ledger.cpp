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

#include "workerrep/ledger.hpp"

#include <map>

#include <json.hpp>

#include "workerrep/codec.hpp"
#include "workerrep/keccak.hpp"
#include "workerrep/operations.hpp"

namespace workerrep {

namespace {

constexpr std::string_view kSnapshotMagic = "WRLEDGR1";

void write_entry(Writer& w, const LedgerEntry& e) {
    w.u64(e.index).hash(e.prev_hash).bytes(e.payload).account(e.sender).bytes(e.signature).u64(e.gas_charged);
}

}  // namespace

Hash256 LedgerEntry::compute_hash() const {
    Writer w;
    write_entry(w, *this);
    return keccak256(w.data());
}

Hash256 signing_digest(std::uint64_t index, const Hash256& prev_hash, ByteView payload) {
    Writer w;
    w.u64(index).hash(prev_hash).bytes(payload);
    return keccak256(w.data());
}

const LedgerEntry& Ledger::append(Bytes payload, const KeyPair& signer, std::uint64_t gas_charged,
                                  const SignatureScheme& scheme) {
    LedgerEntry e;
    e.index = entries_.size();
    e.prev_hash = head();
    e.payload = std::move(payload);
    e.sender = signer.account();
    e.signature = scheme.sign(signer, signing_digest(e.index, e.prev_hash, e.payload));
    e.gas_charged = gas_charged;
    e.entry_hash = e.compute_hash();
    entries_.push_back(std::move(e));
    return entries_.back();
}

std::string VerificationReport::describe() const {
    if (ok) return "ok";
    return "first bad index " + std::to_string(bad_index.value_or(0)) + ": " + reason;
}

VerificationReport verify_chain(std::span<const LedgerEntry> entries, const SignatureScheme& scheme) {
    std::map<AccountId, PublicKey> keys;
    auto bad = [](std::uint64_t i, std::string reason) { return VerificationReport{false, i, std::move(reason)}; };

    for (std::size_t i = 0; i < entries.size(); ++i) {
        const LedgerEntry& e = entries[i];
        if (e.index != i) return bad(i, "bad-index");
        Hash256 expected_prev = i == 0 ? Hash256{} : entries[i - 1].entry_hash;
        if (e.prev_hash != expected_prev) return bad(i, "broken-link");
        if (e.compute_hash() != e.entry_hash) return bad(i, "hash-mismatch");

        Operation operation;
        try {
            operation = decode_operation(e.payload);
        } catch (const ProtocolError&) {
            return bad(i, "malformed-payload");
        }
        std::optional<PublicKey> self_key;
        if (const auto* d = std::get_if<op::Deploy>(&operation)) self_key = d->operator_key;
        if (const auto* r = std::get_if<op::Register>(&operation)) self_key = r->public_key;

        PublicKey key;
        if (self_key) {
            if (account_of(*self_key) != e.sender) return bad(i, "sender-key-mismatch");
            key = *self_key;
        } else {
            auto it = keys.find(e.sender);
            if (it == keys.end()) return bad(i, "unknown-sender");
            key = it->second;
        }
        if (!scheme.verify(key, signing_digest(e.index, e.prev_hash, e.payload), e.signature)) {
            return bad(i, "bad-signature");
        }
        if (self_key) keys.emplace(e.sender, *self_key);
    }
    return {};
}

Bytes encode_snapshot(std::span<const LedgerEntry> entries) {
    Writer w;
    w.raw(as_bytes(kSnapshotMagic)).u64(entries.size());
    for (const auto& e : entries) {
        write_entry(w, e);
        w.hash(e.entry_hash);
    }
    return w.take();
}

std::vector<LedgerEntry> decode_snapshot(ByteView data) {
    Reader r(data);
    ByteView magic = r.raw(kSnapshotMagic.size());
    if (!std::equal(magic.begin(), magic.end(), kSnapshotMagic.begin())) {
        fail(ErrorCode::kSerializationFailure, "not a ledger snapshot");
    }
    std::uint64_t count = r.u64();
    std::vector<LedgerEntry> out;
    for (std::uint64_t i = 0; i < count; ++i) {
        LedgerEntry e;
        e.index = r.u64();
        e.prev_hash = r.hash();
        e.payload = r.bytes();
        e.sender = r.account();
        e.signature = r.bytes();
        e.gas_charged = r.u64();
        e.entry_hash = r.hash();
        out.push_back(std::move(e));
    }
    r.expect_done();
    return out;
}

std::string snapshot_sidecar_json(std::span<const LedgerEntry> entries) {
    nlohmann::ordered_json doc = nlohmann::ordered_json::array();
    for (const auto& e : entries) {
        std::string kind = "malformed";
        try {
            kind = std::string(op_kind_name(kind_of(decode_operation(e.payload))));
        } catch (const ProtocolError&) {
        }
        doc.push_back({{"index", e.index},
                       {"kind", kind},
                       {"sender", e.sender.hex()},
                       {"gas", e.gas_charged},
                       {"entry_hash", e.entry_hash.hex()}});
    }
    return doc.dump(2) + "\n";
}

}  // namespace workerrep
