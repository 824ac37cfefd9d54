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

#include "workerrep/crypto.hpp"

#include <sodium.h>

#include <algorithm>
#include <cstring>

#include "workerrep/keccak.hpp"

namespace workerrep {

namespace {

void ensure_sodium() {
    static const bool ready = [] { return sodium_init() >= 0; }();
    if (!ready) throw std::runtime_error("libsodium initialisation failed");
}

class Ed25519Scheme final : public SignatureScheme {
  public:
    Bytes sign(const KeyPair& signer, const Hash256& digest) const override {
        ensure_sodium();
        Bytes sig(crypto_sign_BYTES);
        crypto_sign_detached(sig.data(), nullptr, digest.bytes.data(), digest.bytes.size(), signer.secret().data());
        return sig;
    }

    bool verify(const PublicKey& key, const Hash256& digest, ByteView signature) const override {
        ensure_sodium();
        if (signature.size() != crypto_sign_BYTES) return false;
        return crypto_sign_verify_detached(signature.data(), digest.bytes.data(), digest.bytes.size(),
                                           key.bytes.data()) == 0;
    }
};

// Envelope layout: nonce(24) | box ciphertext | ed25519 signature(64) over nonce|ciphertext.
class SodiumEnvelope final : public EnvelopeCipher {
  public:
    Bytes seal(const KeyPair& sender, const PublicKey& recipient, ByteView plaintext) const override {
        ensure_sodium();
        std::uint8_t sender_x[crypto_box_SECRETKEYBYTES];
        std::uint8_t recipient_x[crypto_box_PUBLICKEYBYTES];
        if (crypto_sign_ed25519_sk_to_curve25519(sender_x, sender.secret().data()) != 0 ||
            crypto_sign_ed25519_pk_to_curve25519(recipient_x, recipient.bytes.data()) != 0) {
            fail(ErrorCode::kAuthFailure, "key conversion failed");
        }
        // Nonce is a digest of the inputs, so sealing is a pure function.
        Hash256 nonce_seed = Keccak256{}
                                 .update("workerrep/envelope")
                                 .update(sender.public_key().bytes)
                                 .update(recipient.bytes)
                                 .update(plaintext)
                                 .finalize();
        Bytes out(crypto_box_NONCEBYTES + plaintext.size() + crypto_box_MACBYTES + crypto_sign_BYTES);
        std::memcpy(out.data(), nonce_seed.bytes.data(), crypto_box_NONCEBYTES);
        std::uint8_t* cipher = out.data() + crypto_box_NONCEBYTES;
        int rc = crypto_box_easy(cipher, plaintext.data(), plaintext.size(), out.data(), recipient_x, sender_x);
        sodium_memzero(sender_x, sizeof sender_x);
        if (rc != 0) fail(ErrorCode::kAuthFailure, "envelope encryption failed");
        std::size_t signed_len = crypto_box_NONCEBYTES + plaintext.size() + crypto_box_MACBYTES;
        crypto_sign_detached(out.data() + signed_len, nullptr, out.data(), signed_len, sender.secret().data());
        return out;
    }

    Bytes open(const KeyPair& recipient, const PublicKey& sender, ByteView envelope) const override {
        ensure_sodium();
        constexpr std::size_t kOverhead = crypto_box_NONCEBYTES + crypto_box_MACBYTES + crypto_sign_BYTES;
        if (envelope.size() < kOverhead) fail(ErrorCode::kAuthFailure, "envelope too short");
        std::size_t signed_len = envelope.size() - crypto_sign_BYTES;
        if (crypto_sign_verify_detached(envelope.data() + signed_len, envelope.data(), signed_len,
                                        sender.bytes.data()) != 0) {
            fail(ErrorCode::kAuthFailure, "sender signature does not verify");
        }
        std::uint8_t recipient_x[crypto_box_SECRETKEYBYTES];
        std::uint8_t sender_x[crypto_box_PUBLICKEYBYTES];
        if (crypto_sign_ed25519_sk_to_curve25519(recipient_x, recipient.secret().data()) != 0 ||
            crypto_sign_ed25519_pk_to_curve25519(sender_x, sender.bytes.data()) != 0) {
            fail(ErrorCode::kAuthFailure, "key conversion failed");
        }
        std::size_t cipher_len = signed_len - crypto_box_NONCEBYTES;
        Bytes plain(cipher_len - crypto_box_MACBYTES);
        int rc = crypto_box_open_easy(plain.data(), envelope.data() + crypto_box_NONCEBYTES, cipher_len,
                                      envelope.data(), sender_x, recipient_x);
        sodium_memzero(recipient_x, sizeof recipient_x);
        if (rc != 0) fail(ErrorCode::kAuthFailure, "envelope not addressed to this key");
        return plain;
    }
};

}  // namespace

AccountId account_of(const PublicKey& key) {
    Hash256 digest = keccak256(key.bytes);
    AccountId id;
    std::copy(digest.bytes.begin() + 12, digest.bytes.end(), id.bytes.begin());
    return id;
}

KeyPair KeyPair::from_seed(const Hash256& seed) {
    ensure_sodium();
    KeyPair kp;
    crypto_sign_seed_keypair(kp.public_.bytes.data(), kp.secret_.data(), seed.bytes.data());
    return kp;
}

const SignatureScheme& default_signature_scheme() {
    static const Ed25519Scheme scheme;
    return scheme;
}

const EnvelopeCipher& default_envelope_cipher() {
    static const SodiumEnvelope cipher;
    return cipher;
}

}  // namespace workerrep
