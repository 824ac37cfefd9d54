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
#include <string>
#include <string_view>

#include "workerrep/common.hpp"

namespace workerrep {

// Canonical binary encoding: big-endian fixed-width integers,
// u32 length prefixes for variable-size fields, fields in declaration order.
class Writer {
  public:
    Writer& u8(std::uint8_t v);
    Writer& u16(std::uint16_t v);
    Writer& u32(std::uint32_t v);
    Writer& u64(std::uint64_t v);
    Writer& i64(std::int64_t v) { return u64(static_cast<std::uint64_t>(v)); }
    Writer& boolean(bool v) { return u8(v ? 1 : 0); }
    Writer& raw(ByteView data);
    Writer& bytes(ByteView data);
    Writer& str(std::string_view s) { return bytes(as_bytes(s)); }
    Writer& hash(const Hash256& h) { return raw(h.bytes); }
    Writer& account(const AccountId& a) { return raw(a.bytes); }

    [[nodiscard]] const Bytes& data() const noexcept { return out_; }
    Bytes take() { return std::move(out_); }

  private:
    Bytes out_;
};

class Reader {
  public:
    explicit Reader(ByteView in) : in_(in) {}

    std::uint8_t u8();
    std::uint16_t u16();
    std::uint32_t u32();
    std::uint64_t u64();
    std::int64_t i64() { return static_cast<std::int64_t>(u64()); }
    bool boolean();
    ByteView raw(std::size_t n);
    Bytes bytes();
    std::string str();
    Hash256 hash();
    AccountId account();

    [[nodiscard]] bool done() const noexcept { return pos_ == in_.size(); }
    [[nodiscard]] std::size_t position() const noexcept { return pos_; }
    // Throws SerializationFailure when trailing bytes remain.
    void expect_done() const;

  private:
    ByteView in_;
    std::size_t pos_{0};
};

}  // namespace workerrep
