#pragma once

#include <cstdint>

#include "bb84/bitstring.hpp"
#include "bb84/rng.hpp"

namespace bb84 {

struct EavesdropperConfig {
    enum class Mode { none, intercept_resend };

    Mode mode = Mode::none;
    double intercept_fraction = 0.0;

    static EavesdropperConfig off() { return {}; }
    static EavesdropperConfig intercept(double fraction) {
        return {Mode::intercept_resend, fraction};
    }
};

// Full record of one BB84 exchange.
struct ExchangeTranscript {
    BitString alice_bits;
    BasisString alice_bases;
    BasisString bob_bases;
    BitString bob_bits;           // Bob's raw measurement outcomes
    std::vector<bool> sift_mask;  // true where the bases agreed
    BitString key_a;              // Alice's sifted bits
    BitString key_b;              // Bob's sifted bits
    double match_ratio = 0.0;     // fraction of positions with agreeing bases
    double qber = 0.0;            // error rate on the sifted positions
    EavesdropperConfig eavesdropper;
};

BitString generate_random_bits(size_t n, RandomSource& rng);
BasisString generate_random_bases(size_t n, RandomSource& rng);

// Bob's measurement of Alice's prepared qubits, optionally through an
// intercept-resend eavesdropper. Matching bases reproduce Alice's bit;
// crossed bases give a fair coin.
BitString measure(const BitString& alice_bits, const BasisString& alice_bases,
                  const BasisString& bob_bases, const EavesdropperConfig& eve,
                  RandomSource& rng);

struct SiftResult {
    std::vector<bool> mask;
    BitString key_a;
    BitString key_b;
};

SiftResult sift(const BitString& alice_bits, const BitString& bob_bits,
                const BasisString& alice_bases, const BasisString& bob_bases);

ExchangeTranscript run_exchange(size_t n, const EavesdropperConfig& eve,
                                RandomSource& rng);

// Runs exchanges until the sifted key holds at least target_sifted_bits bits;
// the returned transcript covers every qubit consumed.
ExchangeTranscript run_exchange_until(size_t target_sifted_bits,
                                      const EavesdropperConfig& eve,
                                      RandomSource& rng);

}  // namespace bb84
