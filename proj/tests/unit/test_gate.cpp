#include <doctest.h>

#include "bb84/digest.hpp"
#include "bb84/errors.hpp"
#include "bb84/hmac_gate.hpp"
#include "bb84/qkd.hpp"

using namespace bb84;

namespace {

DerivedKey fixed_key(uint8_t fill) {
    DerivedKey k;
    k.key_bytes.fill(fill);
    return k;
}

std::vector<uint8_t> bytes_of(const std::string& s) {
    return {s.begin(), s.end()};
}

KdfParams fast_params() {
    KdfParams p;
    p.salt.fill(0x42);
    p.iterations = 10;
    return p;
}

}  // namespace

TEST_CASE("compute_tag is deterministic") {
    auto metadata = bytes_of("some header bytes");
    GateTag a = compute_tag(fixed_key(0x11), metadata);
    GateTag b = compute_tag(fixed_key(0x11), metadata);
    CHECK(a == b);
    CHECK(a.covered_metadata_digest == sha256(metadata));
}

TEST_CASE("compute_tag rejects empty metadata") {
    CHECK_THROWS_AS(compute_tag(fixed_key(0x11), std::vector<uint8_t>{}), Error);
}

TEST_CASE("HMAC-SHA256 matches RFC 4231 vectors") {
    SUBCASE("case 1") {
        std::vector<uint8_t> key(20, 0x0b);
        CHECK(to_hex(hmac_sha256(key, bytes_of("Hi There"))) ==
              "b0344c61d8db38535ca8afceaf0bf12b881dc200c9833da726e9376c2e32cff7");
    }
    SUBCASE("case 2") {
        CHECK(to_hex(hmac_sha256(bytes_of("Jefe"),
                                 bytes_of("what do ya want for nothing?"))) ==
              "5bdcc146bf60754e6a042426089575c75a003f089d2739839dec58b964ec3843");
    }
}

TEST_CASE("a single key bit change moves the tag") {
    auto metadata = bytes_of("metadata");
    DerivedKey k1 = fixed_key(0x00);
    DerivedKey k2 = fixed_key(0x00);
    k2.key_bytes[0] = 0x01;
    CHECK(compute_tag(k1, metadata).hmac != compute_tag(k2, metadata).hmac);
}

TEST_CASE("gate passes for the original key and fails for a flipped bit") {
    SeededRandomSource rng(77);
    BitString sifted = generate_random_bits(256, rng);
    KdfParams params = fast_params();
    auto metadata = bytes_of("container header stand-in");

    GateTag stored = compute_tag(derive_key(sifted, params), metadata);
    CHECK(verify_gate(sifted, params, metadata, stored) == GateDecision::Pass);

    std::vector<uint8_t> flipped = sifted.bits();
    flipped[100] ^= 1;
    CHECK(verify_gate(BitString(std::move(flipped)), params, metadata, stored) ==
          GateDecision::FailMismatch);
}

TEST_CASE("a zeroed tag is diagnosed as missing") {
    SeededRandomSource rng(78);
    BitString sifted = generate_random_bits(256, rng);
    CHECK(verify_gate(sifted, fast_params(), bytes_of("m"), GateTag{}) ==
          GateDecision::FailMissingTag);
}

TEST_CASE("soundness: 10^4 random wrong keys all fail") {
    SeededRandomSource rng(79);
    BitString sifted = generate_random_bits(256, rng);
    KdfParams params = fast_params();
    auto metadata = bytes_of("soundness metadata");
    GateTag stored = compute_tag(derive_key(sifted, params), metadata);

    for (int trial = 0; trial < 10000; ++trial) {
        BitString wrong = generate_random_bits(256, rng);
        if (wrong == sifted) continue;  // astronomically unlikely
        // A PASS here would be a 2^-256 event; treat it as a failure.
        REQUIRE(verify_gate(wrong, params, metadata, stored) == GateDecision::FailMismatch);
    }
}

TEST_CASE("constant_time_equal semantics") {
    std::vector<uint8_t> a(32, 0x5a);
    std::vector<uint8_t> b(32, 0x5a);
    CHECK(constant_time_equal(a, b));
    b[31] ^= 1;
    CHECK_FALSE(constant_time_equal(a, b));
    CHECK_FALSE(constant_time_equal(a, std::vector<uint8_t>(31, 0x5a)));
}
