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

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

namespace workerrep {

using Int128 = __int128;

// Signed decimal fixed-point number with four fractional digits.
// All reputation and score aggregates use this representation so that
// replays are bit-exact.
class Fixed {
  public:
    static constexpr std::int64_t kScale = 10'000;

    constexpr Fixed() = default;

    static constexpr Fixed from_raw(std::int64_t raw) noexcept { return Fixed(raw); }
    static constexpr Fixed from_int(std::int64_t whole) noexcept { return Fixed(whole * kScale); }
    // Accepts "12", "-0.25", "3.1415"; more than four fractional digits is an error.
    static Fixed parse(std::string_view text);

    [[nodiscard]] constexpr std::int64_t raw() const noexcept { return raw_; }
    [[nodiscard]] double to_double() const noexcept { return static_cast<double>(raw_) / kScale; }
    [[nodiscard]] std::string to_string() const;

    constexpr auto operator<=>(const Fixed&) const = default;

    constexpr Fixed operator-() const noexcept { return Fixed(-raw_); }
    Fixed operator+(Fixed other) const;
    Fixed operator-(Fixed other) const;
    Fixed& operator+=(Fixed other) { return *this = *this + other; }
    Fixed& operator-=(Fixed other) { return *this = *this - other; }

  private:
    constexpr explicit Fixed(std::int64_t raw) noexcept : raw_(raw) {}

    std::int64_t raw_{0};
};

// floor(numerator / denominator) for a positive denominator.
std::int64_t floor_div(Int128 numerator, Int128 denominator);

// Largest r with r*r <= value.
std::uint64_t isqrt(unsigned __int128 value);

}  // namespace workerrep
