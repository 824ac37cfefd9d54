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

#include <array>
#include <compare>
#include <cstdint>
#include <string_view>

#include "workerrep/common.hpp"

namespace workerrep {

struct PublicKey {
    std::array<std::uint8_t, 32> bytes{};

    [[nodiscard]] std::string hex() const { return to_hex(bytes); }
    auto operator<=>(const PublicKey&) const = default;
};

// Account address derived from a public key (last 20 bytes of its Keccak-256 digest).
AccountId account_of(const PublicKey& key);

// Ed25519 key pair; the secret never leaves the holder.
class KeyPair {
  public:
    // Deterministic derivation so that simulations replay identically.
    static KeyPair from_seed(const Hash256& seed);

    [[nodiscard]] const PublicKey& public_key() const noexcept { return public_; }
    [[nodiscard]] AccountId account() const { return account_of(public_); }
    [[nodiscard]] const std::array<std::uint8_t, 64>& secret() const noexcept { return secret_; }

  private:
    PublicKey public_;
    std::array<std::uint8_t, 64> secret_{};
};

// Deterministic signature over a 256-bit digest.
class SignatureScheme {
  public:
    virtual ~SignatureScheme() = default;
    virtual Bytes sign(const KeyPair& signer, const Hash256& digest) const = 0;
    virtual bool verify(const PublicKey& key, const Hash256& digest, ByteView signature) const = 0;
};

const SignatureScheme& default_signature_scheme();

// Two-layer envelope: confidentiality keyed to the recipient (evaluator),
// authenticity keyed to the sender (worker). open() throws AuthFailure when
// either layer does not check out.
class EnvelopeCipher {
  public:
    virtual ~EnvelopeCipher() = default;
    virtual Bytes seal(const KeyPair& sender, const PublicKey& recipient, ByteView plaintext) const = 0;
    virtual Bytes open(const KeyPair& recipient, const PublicKey& sender, ByteView envelope) const = 0;
};

const EnvelopeCipher& default_envelope_cipher();

}  // namespace workerrep
