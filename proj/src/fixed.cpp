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

#include "workerrep/fixed.hpp"

#include <charconv>
#include <limits>

#include "workerrep/common.hpp"

namespace workerrep {

Fixed Fixed::parse(std::string_view text) {
    auto bad = [&] { fail(ErrorCode::kSerializationFailure, "bad fixed-point literal '" + std::string(text) + "'"); };
    if (text.empty()) bad();
    bool negative = false;
    std::string_view rest = text;
    if (rest.front() == '-' || rest.front() == '+') {
        negative = rest.front() == '-';
        rest.remove_prefix(1);
    }
    std::string_view whole = rest;
    std::string_view frac;
    if (auto dot = rest.find('.'); dot != std::string_view::npos) {
        whole = rest.substr(0, dot);
        frac = rest.substr(dot + 1);
    }
    if (whole.empty() && frac.empty()) bad();
    if (frac.size() > 4) bad();
    std::int64_t w = 0;
    if (!whole.empty()) {
        auto [p, ec] = std::from_chars(whole.data(), whole.data() + whole.size(), w);
        if (ec != std::errc{} || p != whole.data() + whole.size()) bad();
    }
    std::int64_t f = 0;
    for (std::size_t i = 0; i < 4; ++i) {
        f *= 10;
        if (i < frac.size()) {
            char c = frac[i];
            if (c < '0' || c > '9') bad();
            f += c - '0';
        }
    }
    if (w > std::numeric_limits<std::int64_t>::max() / kScale - 1) bad();
    std::int64_t raw = w * kScale + f;
    return Fixed(negative ? -raw : raw);
}

std::string Fixed::to_string() const {
    Int128 v = raw_;
    bool negative = v < 0;
    if (negative) v = -v;
    auto whole = static_cast<std::uint64_t>(v / kScale);
    auto frac = static_cast<std::uint64_t>(v % kScale);
    std::string f = std::to_string(frac);
    f.insert(0, 4 - f.size(), '0');
    return (negative ? "-" : "") + std::to_string(whole) + "." + f;
}

Fixed Fixed::operator+(Fixed other) const {
    std::int64_t out{};
    if (__builtin_add_overflow(raw_, other.raw_, &out)) fail(ErrorCode::kOutOfRange, "fixed-point overflow");
    return Fixed(out);
}

Fixed Fixed::operator-(Fixed other) const {
    std::int64_t out{};
    if (__builtin_sub_overflow(raw_, other.raw_, &out)) fail(ErrorCode::kOutOfRange, "fixed-point overflow");
    return Fixed(out);
}

std::int64_t floor_div(Int128 numerator, Int128 denominator) {
    if (denominator <= 0) fail(ErrorCode::kOutOfRange, "non-positive divisor");
    Int128 q = numerator / denominator;
    if (numerator % denominator != 0 && numerator < 0) --q;
    if (q > std::numeric_limits<std::int64_t>::max() || q < std::numeric_limits<std::int64_t>::min()) {
        fail(ErrorCode::kOutOfRange, "quotient overflow");
    }
    return static_cast<std::int64_t>(q);
}

std::uint64_t isqrt(unsigned __int128 value) {
    if (value == 0) return 0;
    // Newton iteration from an over-estimate.
    unsigned __int128 x = value;
    unsigned __int128 y = (x + 1) / 2;
    while (y < x) {
        x = y;
        y = (x + value / x) / 2;
    }
    return static_cast<std::uint64_t>(x);
}

}  // namespace workerrep
