#include <doctest.h>

#include "bb84/digest.hpp"
#include "bb84/errors.hpp"
#include "bb84/kdf.hpp"
#include "bb84/qkd.hpp"

using namespace bb84;

namespace {

BitString bits_of_byte_pattern(uint8_t byte, size_t count) {
    BitString out;
    for (size_t i = 0; i < count; ++i) {
        for (int b = 7; b >= 0; --b) out.push_back((byte >> b) & 1);
    }
    return out;
}

KdfParams params_with(std::vector<uint8_t> salt_bytes, uint32_t iterations) {
    KdfParams p;
    std::copy(salt_bytes.begin(), salt_bytes.end(), p.salt.begin());
    p.iterations = iterations;
    return p;
}

}  // namespace

TEST_CASE("bits_to_key_material packs MSB-first") {
    CHECK(bits_to_key_material(BitString::from_string("01000001")) ==
          std::vector<uint8_t>{0x41});
}

TEST_CASE("bits_to_key_material drops trailing partial bytes") {
    CHECK(bits_to_key_material(BitString::from_string("010000011111")) ==
          std::vector<uint8_t>{0x41});
}

TEST_CASE("bits_to_key_material rejects fewer than 8 bits") {
    CHECK_THROWS_AS(bits_to_key_material(BitString::from_string("0100000")), Error);
}

TEST_CASE("derive_key is deterministic") {
    BitString bits = bits_of_byte_pattern(0xA7, 16);
    KdfParams p = params_with({1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14, 15, 16}, 1000);
    DerivedKey a = derive_key(bits, p);
    DerivedKey b = derive_key(bits, p);
    CHECK(a.key_bytes == b.key_bytes);
}

TEST_CASE("different salts give different keys") {
    BitString bits = bits_of_byte_pattern(0xA7, 16);
    KdfParams p1 = params_with({0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0}, 1000);
    KdfParams p2 = params_with({0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1}, 1000);
    CHECK(derive_key(bits, p1).key_bytes != derive_key(bits, p2).key_bytes);
}

// Expected outputs computed with an independent PBKDF2-HMAC-SHA256
// reference before this module was written.
TEST_CASE("PBKDF2 known answers") {
    SUBCASE("128 alternating bits, counting salt, c=1000") {
        BitString bits = bits_of_byte_pattern(0x55, 16);
        KdfParams p = params_with({0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14, 15}, 1000);
        CHECK(to_hex(derive_key(bits, p).key_bytes) ==
              "00b4d0a3268073b7f4b3bd74c2a8425e3879f4a35ab9055e2ffab17115df5085");
    }
    SUBCASE("256 bits of 0x41, 0xff salt, c=100000") {
        BitString bits = bits_of_byte_pattern(0x41, 32);
        KdfParams p = params_with(std::vector<uint8_t>(16, 0xff), 100000);
        CHECK(to_hex(derive_key(bits, p).key_bytes) ==
              "28a27739bd51d45a2dada3d471b514a021c8c9c924ce1d0c07f762d22b45655c");
    }
}

TEST_CASE("derive_key enforces the 128-bit floor") {
    CHECK_THROWS_AS(derive_key(bits_of_byte_pattern(0x55, 15),
                               params_with(std::vector<uint8_t>(16, 0), 1000)),
                    Error);
}

TEST_CASE("derive_key rejects zero iterations") {
    KdfParams p = params_with(std::vector<uint8_t>(16, 0), 1000);
    p.iterations = 0;
    CHECK_THROWS_AS(derive_key(bits_of_byte_pattern(0x55, 16), p), Error);
}

TEST_CASE("avalanche: one flipped input bit moves ~half the output bits") {
    SeededRandomSource rng(5);
    KdfParams p = params_with(std::vector<uint8_t>(16, 0x5a), 500);

    size_t total_distance = 0;
    const int trials = 100;
    for (int t = 0; t < trials; ++t) {
        BitString bits = generate_random_bits(128, rng);
        DerivedKey base = derive_key(bits, p);

        std::vector<uint8_t> flipped = bits.bits();
        flipped[t % flipped.size()] ^= 1;
        DerivedKey moved = derive_key(BitString(std::move(flipped)), p);

        for (size_t i = 0; i < base.key_bytes.size(); ++i) {
            total_distance += static_cast<size_t>(
                __builtin_popcount(base.key_bytes[i] ^ moved.key_bytes[i]));
        }
    }
    double avg = static_cast<double>(total_distance) / trials;
    CHECK(avg >= 100.0);
}
