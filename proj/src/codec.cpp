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

#include "workerrep/codec.hpp"

#include <algorithm>

namespace workerrep {

namespace {

// Upper bound for a single length-prefixed field; guards against corrupt prefixes.
constexpr std::uint32_t kMaxFieldBytes = 64u << 20;

}  // namespace

Writer& Writer::u8(std::uint8_t v) {
    out_.push_back(v);
    return *this;
}

Writer& Writer::u16(std::uint16_t v) {
    out_.push_back(static_cast<std::uint8_t>(v >> 8));
    out_.push_back(static_cast<std::uint8_t>(v));
    return *this;
}

Writer& Writer::u32(std::uint32_t v) {
    for (int shift = 24; shift >= 0; shift -= 8) out_.push_back(static_cast<std::uint8_t>(v >> shift));
    return *this;
}

Writer& Writer::u64(std::uint64_t v) {
    for (int shift = 56; shift >= 0; shift -= 8) out_.push_back(static_cast<std::uint8_t>(v >> shift));
    return *this;
}

Writer& Writer::raw(ByteView data) {
    out_.insert(out_.end(), data.begin(), data.end());
    return *this;
}

Writer& Writer::bytes(ByteView data) {
    if (data.size() > kMaxFieldBytes) fail(ErrorCode::kSerializationFailure, "field too large");
    u32(static_cast<std::uint32_t>(data.size()));
    return raw(data);
}

ByteView Reader::raw(std::size_t n) {
    if (in_.size() - pos_ < n) fail(ErrorCode::kSerializationFailure, "truncated input");
    ByteView out = in_.subspan(pos_, n);
    pos_ += n;
    return out;
}

std::uint8_t Reader::u8() { return raw(1)[0]; }

std::uint16_t Reader::u16() {
    ByteView b = raw(2);
    return static_cast<std::uint16_t>((b[0] << 8) | b[1]);
}

std::uint32_t Reader::u32() {
    std::uint32_t v = 0;
    for (std::uint8_t b : raw(4)) v = (v << 8) | b;
    return v;
}

std::uint64_t Reader::u64() {
    std::uint64_t v = 0;
    for (std::uint8_t b : raw(8)) v = (v << 8) | b;
    return v;
}

bool Reader::boolean() {
    std::uint8_t v = u8();
    if (v > 1) fail(ErrorCode::kSerializationFailure, "non-canonical boolean");
    return v == 1;
}

Bytes Reader::bytes() {
    std::uint32_t n = u32();
    if (n > kMaxFieldBytes) fail(ErrorCode::kSerializationFailure, "field too large");
    ByteView b = raw(n);
    return Bytes(b.begin(), b.end());
}

std::string Reader::str() {
    Bytes b = bytes();
    return std::string(b.begin(), b.end());
}

Hash256 Reader::hash() {
    Hash256 h;
    ByteView b = raw(32);
    std::copy(b.begin(), b.end(), h.bytes.begin());
    return h;
}

AccountId Reader::account() {
    AccountId a;
    ByteView b = raw(20);
    std::copy(b.begin(), b.end(), a.bytes.begin());
    return a;
}

void Reader::expect_done() const {
    if (!done()) fail(ErrorCode::kSerializationFailure, "trailing bytes");
}

}  // namespace workerrep
