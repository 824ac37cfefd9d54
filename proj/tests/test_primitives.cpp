#include <doctest.h>

#include <random>
#include <string>

#include "workerrep/codec.hpp"
#include "workerrep/fixed.hpp"
#include "workerrep/keccak.hpp"

using namespace workerrep;

TEST_CASE("keccak256 known vectors") {
    CHECK(keccak256("").hex() == "c5d2460186f7233c927e7db2dcc703c0e500b653ca82273b7bfad8045d85a470");
    CHECK(keccak256("abc").hex() == "4e03657aea45a94fc7d47ba826c8d667c0d1e6e33a64a036ec44f58fa12d6c45");
    CHECK(keccak256("The quick brown fox jumps over the lazy dog").hex() ==
          "4d741b6f1eb29cb2a9b9911c82f56fa8d73b04959d3d9d222895df6c0b28aa15");
}

TEST_CASE("keccak256 incremental matches one-shot across the rate boundary") {
    std::string data(1000, '\0');
    for (std::size_t i = 0; i < data.size(); ++i) data[i] = static_cast<char>(i * 31 + 7);
    for (std::size_t len : {0UL, 1UL, 135UL, 136UL, 137UL, 271UL, 272UL, 1000UL}) {
        std::string_view view(data.data(), len);
        for (std::size_t split : {0UL, 1UL, len / 2, len}) {
            if (split > len) continue;
            Keccak256 h;
            h.update(view.substr(0, split)).update(view.substr(split));
            CHECK(h.finalize() == keccak256(view));
        }
    }
}

TEST_CASE("hex round trips and rejects junk") {
    Hash256 h = keccak256("x");
    CHECK(Hash256::from_hex(h.hex()) == h);
    AccountId a = AccountId::from_hex("00112233445566778899aabbccddeeff00112233");
    CHECK(a.hex() == "0x00112233445566778899aabbccddeeff00112233");
    CHECK_THROWS(AccountId::from_hex("0011"));
    CHECK_THROWS(from_hex("zz"));
    CHECK_THROWS(from_hex("abc"));
}

TEST_CASE("codec round trip") {
    Writer w;
    w.u8(7).u16(0x1234).u32(0xdeadbeef).u64(0x0102030405060708ULL).i64(-5).boolean(true).str("héllo");
    w.hash(keccak256("h")).account(AccountId::from_hex("ffffffffffffffffffffffffffffffffffffffff"));
    Bytes data = w.take();
    CHECK(data[1] == 0x12);  // big-endian
    Reader r(data);
    CHECK(r.u8() == 7);
    CHECK(r.u16() == 0x1234);
    CHECK(r.u32() == 0xdeadbeef);
    CHECK(r.u64() == 0x0102030405060708ULL);
    CHECK(r.i64() == -5);
    CHECK(r.boolean());
    CHECK(r.str() == "héllo");
    CHECK(r.hash() == keccak256("h"));
    CHECK(r.account().hex() == "0xffffffffffffffffffffffffffffffffffffffff");
    CHECK(r.done());
    r.expect_done();
}

TEST_CASE("codec rejects truncation, bad booleans and trailing bytes") {
    Bytes data = Writer().u32(10).take();
    Reader r(data);
    CHECK_THROWS_AS(r.bytes(), ProtocolError);

    Bytes flag = Writer().u8(2).take();
    Reader rb(flag);
    CHECK_THROWS_AS(rb.boolean(), ProtocolError);

    Bytes extra = Writer().u8(1).u8(2).take();
    Reader re(extra);
    re.u8();
    try {
        re.expect_done();
        FAIL("expected SerializationFailure");
    } catch (const ProtocolError& e) {
        CHECK(e.code() == ErrorCode::kSerializationFailure);
    }
}

TEST_CASE("fixed parse and print") {
    CHECK(Fixed::parse("12").raw() == 120'000);
    CHECK(Fixed::parse("-0.25").raw() == -2'500);
    CHECK(Fixed::parse("3.1415").raw() == 31'415);
    CHECK(Fixed::parse("0.5").to_string() == "0.5000");
    CHECK(Fixed::from_raw(-5).to_string() == "-0.0005");
    CHECK_THROWS(Fixed::parse("1.23456"));
    CHECK_THROWS(Fixed::parse(""));
    CHECK_THROWS(Fixed::parse("1e3"));
    for (std::int64_t raw : {0L, 1L, -1L, 9'999L, 10'000L, -123'456'789L}) {
        CHECK(Fixed::parse(Fixed::from_raw(raw).to_string()).raw() == raw);
    }
}

TEST_CASE("floor_div floors toward negative infinity") {
    CHECK(floor_div(7, 2) == 3);
    CHECK(floor_div(-7, 2) == -4);
    CHECK(floor_div(-8, 2) == -4);
    CHECK(floor_div(0, 5) == 0);
}

TEST_CASE("isqrt is the integer square root") {
    std::mt19937_64 rng(11);
    for (int i = 0; i < 10'000; ++i) {
        unsigned __int128 v = (static_cast<unsigned __int128>(rng()) << 20) ^ rng();
        std::uint64_t r = isqrt(v);
        CHECK(static_cast<unsigned __int128>(r) * r <= v);
        CHECK(static_cast<unsigned __int128>(r + 1) * (r + 1) > v);
    }
    CHECK(isqrt(0) == 0);
    CHECK(isqrt(1) == 1);
    CHECK(isqrt(15) == 3);
    CHECK(isqrt(16) == 4);
}
