#include <doctest.h>

#include <array>

#include "bb84/errors.hpp"
#include "bb84/qkd.hpp"

using namespace bb84;

TEST_CASE("generate_random_bits produces n valid bits") {
    SeededRandomSource rng(1);
    BitString bits = generate_random_bits(8, rng);
    CHECK(bits.size() == 8);
    for (uint8_t b : bits) CHECK(b <= 1);
}

TEST_CASE("generate_random_bits rejects n = 0") {
    SeededRandomSource rng(1);
    CHECK_THROWS_AS(generate_random_bits(0, rng), Error);
    CHECK_THROWS_AS(generate_random_bases(0, rng), Error);
}

TEST_CASE("random bits are roughly balanced at n = 10000") {
    SeededRandomSource rng(42);
    BitString bits = generate_random_bits(10000, rng);
    double ones = static_cast<double>(bits.count_ones()) / 10000.0;
    CHECK(ones > 0.47);
    CHECK(ones < 0.53);
}

TEST_CASE("random bases are roughly balanced at n = 10000") {
    SeededRandomSource rng(43);
    BasisString bases = generate_random_bases(10000, rng);
    size_t z = 0;
    for (size_t i = 0; i < bases.size(); ++i) {
        if (bases[i] == Basis::Z) ++z;
    }
    double fz = static_cast<double>(z) / 10000.0;
    CHECK(fz > 0.47);
    CHECK(fz < 0.53);
}

TEST_CASE("matching bases reproduce Alice's bits exactly") {
    SeededRandomSource rng(7);
    BitString alice = BitString::from_string("1011");
    BasisString bases = BasisString::from_string("ZZZZ");
    BitString bob = measure(alice, bases, bases, EavesdropperConfig::off(), rng);
    CHECK(bob == alice);
}

TEST_CASE("measure rejects length mismatches") {
    SeededRandomSource rng(7);
    CHECK_THROWS_AS(measure(BitString::from_string("10"),
                            BasisString::from_string("ZZ"),
                            BasisString::from_string("Z"),
                            EavesdropperConfig::off(), rng),
                    Error);
}

TEST_CASE("crossed bases give per-position agreement near one half") {
    SeededRandomSource rng(11);
    BitString alice = BitString::from_string("1011");
    BasisString za = BasisString::from_string("ZZZZ");
    BasisString xb = BasisString::from_string("XXXX");

    const int reps = 10000;
    std::array<int, 4> agree{};
    for (int r = 0; r < reps; ++r) {
        BitString bob = measure(alice, za, xb, EavesdropperConfig::off(), rng);
        for (size_t i = 0; i < 4; ++i) {
            if (bob[i] == alice[i]) ++agree[i];
        }
    }
    for (int count : agree) {
        double freq = static_cast<double>(count) / reps;
        CHECK(freq > 0.48);
        CHECK(freq < 0.52);
    }
}

TEST_CASE("full intercept-resend induces ~25% disagreement on matching bases") {
    SeededRandomSource rng(13);
    const size_t n = 10000;
    BitString alice = generate_random_bits(n, rng);
    BasisString bases = generate_random_bases(n, rng);
    // Bob uses Alice's bases so every position survives sifting.
    BitString bob = measure(alice, bases, bases, EavesdropperConfig::intercept(1.0), rng);

    size_t disagree = 0;
    for (size_t i = 0; i < n; ++i) {
        if (alice[i] != bob[i]) ++disagree;
    }
    double rate = static_cast<double>(disagree) / static_cast<double>(n);
    CHECK(rate > 0.23);
    CHECK(rate < 0.27);
}

TEST_CASE("sift keeps exactly the agreeing positions") {
    SiftResult r = sift(BitString::from_string("1010"), BitString::from_string("1110"),
                        BasisString::from_string("ZXZX"), BasisString::from_string("ZZXX"));
    CHECK(r.mask == std::vector<bool>{true, false, false, true});
    CHECK(r.key_a == BitString::from_string("10"));
    CHECK(r.key_b == BitString::from_string("10"));
}

TEST_CASE("sift with identical bases is the identity") {
    SeededRandomSource rng(17);
    BitString alice = generate_random_bits(64, rng);
    BitString bob = generate_random_bits(64, rng);
    BasisString bases = generate_random_bases(64, rng);
    SiftResult r = sift(alice, bob, bases, bases);
    CHECK(r.key_a == alice);
    CHECK(r.key_b == bob);
}

// Oracle: brute-force position filter, written independently of sift().
static void brute_force_filter(const BitString& a, const BitString& b,
                               const BasisString& ba, const BasisString& bb,
                               std::vector<bool>& mask, BitString& ka, BitString& kb) {
    for (size_t i = 0; i < a.size(); ++i) {
        bool keep = ba[i] == bb[i];
        mask.push_back(keep);
        if (keep) {
            ka.push_back(a[i]);
            kb.push_back(b[i]);
        }
    }
}

TEST_CASE("sift matches the brute-force oracle for all lengths <= 12") {
    SeededRandomSource rng(19);
    for (size_t n = 1; n <= 12; ++n) {
        for (int trial = 0; trial < 50; ++trial) {
            BitString a = generate_random_bits(n, rng);
            BitString b = generate_random_bits(n, rng);
            BasisString ba = generate_random_bases(n, rng);
            BasisString bb = generate_random_bases(n, rng);

            std::vector<bool> mask;
            BitString ka, kb;
            brute_force_filter(a, b, ba, bb, mask, ka, kb);

            SiftResult r = sift(a, b, ba, bb);
            CHECK(r.mask == mask);
            CHECK(r.key_a == ka);
            CHECK(r.key_b == kb);
        }
    }
}

TEST_CASE("noiseless exchange has zero QBER and equal keys") {
    SeededRandomSource rng(23);
    ExchangeTranscript t = run_exchange(256, EavesdropperConfig::off(), rng);
    CHECK(t.qber == 0.0);
    CHECK(t.key_a == t.key_b);
    // Matching-basis positions agree bit-for-bit in the raw record too.
    for (size_t i = 0; i < t.sift_mask.size(); ++i) {
        if (t.sift_mask[i]) CHECK(t.alice_bits[i] == t.bob_bits[i]);
    }
}

TEST_CASE("match ratio times n is the sift-mask true count") {
    SeededRandomSource rng(29);
    ExchangeTranscript t = run_exchange(10000, EavesdropperConfig::off(), rng);
    size_t trues = 0;
    for (bool keep : t.sift_mask) {
        if (keep) ++trues;
    }
    CHECK(t.match_ratio * 10000.0 == doctest::Approx(static_cast<double>(trues)));
    CHECK(t.match_ratio > 0.47);
    CHECK(t.match_ratio < 0.53);
}

TEST_CASE("full interception shows up as ~25% QBER") {
    SeededRandomSource rng(31);
    ExchangeTranscript t = run_exchange(10000, EavesdropperConfig::intercept(1.0), rng);
    CHECK(t.qber > 0.23);
    CHECK(t.qber < 0.27);
}

TEST_CASE("run_exchange_until reaches the requested key length") {
    SeededRandomSource rng(37);
    ExchangeTranscript t = run_exchange_until(256, EavesdropperConfig::off(), rng);
    CHECK(t.key_a.size() >= 256);
    CHECK(t.key_a.size() == t.key_b.size());
    CHECK(t.alice_bits.size() >= t.key_a.size());
}

TEST_CASE("run_exchange_until terminates for target 1") {
    SeededRandomSource rng(41);
    ExchangeTranscript t = run_exchange_until(1, EavesdropperConfig::off(), rng);
    CHECK(t.key_a.size() >= 1);
}

TEST_CASE("identical seeds give identical transcripts") {
    SeededRandomSource rng_a(99);
    SeededRandomSource rng_b(99);
    ExchangeTranscript a = run_exchange_until(256, EavesdropperConfig::off(), rng_a);
    ExchangeTranscript b = run_exchange_until(256, EavesdropperConfig::off(), rng_b);
    CHECK(a.alice_bits == b.alice_bits);
    CHECK(a.alice_bases == b.alice_bases);
    CHECK(a.bob_bases == b.bob_bases);
    CHECK(a.bob_bits == b.bob_bits);
    CHECK(a.key_a == b.key_a);
    CHECK(a.key_b == b.key_b);
}

TEST_CASE("noiseless QBER is zero for many seeds and sizes") {
    for (uint64_t seed = 0; seed < 20; ++seed) {
        SeededRandomSource rng(seed);
        ExchangeTranscript t = run_exchange(64 + 37 * seed, EavesdropperConfig::off(), rng);
        CHECK(t.qber == 0.0);
    }
}
