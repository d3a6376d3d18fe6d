#include "bb84/qkd.hpp"

#include "bb84/errors.hpp"

namespace bb84 {

namespace {

void require_positive(size_t n, const char* what) {
    if (n == 0) throw Error(ErrorKind::InvalidArgument, std::string(what) + " must be >= 1");
}

void require_equal_lengths(size_t a, size_t b) {
    if (a != b) throw Error(ErrorKind::InvalidArgument, "sequence length mismatch");
}

// Measuring a state prepared in prep_basis with value prep_bit: same basis
// reproduces the bit, crossed basis is a fair coin. BB84 states are never
// entangled, so this conditional law is bit-exact with the quantum model.
uint8_t measure_one(uint8_t prep_bit, Basis prep_basis, Basis measure_basis,
                    RandomSource& rng) {
    if (prep_basis == measure_basis) return prep_bit;
    return rng.bit();
}

}  // namespace

BitString generate_random_bits(size_t n, RandomSource& rng) {
    require_positive(n, "bit count");
    BitString out;
    out.reserve(n);
    for (size_t i = 0; i < n; ++i) out.push_back(rng.bit());
    return out;
}

BasisString generate_random_bases(size_t n, RandomSource& rng) {
    require_positive(n, "basis count");
    BasisString out;
    out.reserve(n);
    for (size_t i = 0; i < n; ++i) out.push_back(rng.bit() ? Basis::X : Basis::Z);
    return out;
}

BitString measure(const BitString& alice_bits, const BasisString& alice_bases,
                  const BasisString& bob_bases, const EavesdropperConfig& eve,
                  RandomSource& rng) {
    require_equal_lengths(alice_bits.size(), alice_bases.size());
    require_equal_lengths(alice_bits.size(), bob_bases.size());

    const bool eve_active = eve.mode == EavesdropperConfig::Mode::intercept_resend;

    BitString out;
    out.reserve(alice_bits.size());
    for (size_t i = 0; i < alice_bits.size(); ++i) {
        uint8_t bit = alice_bits[i];
        Basis basis = alice_bases[i];
        if (eve_active && rng.chance(eve.intercept_fraction)) {
            // Intercept-resend: Eve measures in a random basis and
            // re-prepares her outcome in that basis.
            Basis eve_basis = rng.bit() ? Basis::X : Basis::Z;
            bit = measure_one(bit, basis, eve_basis, rng);
            basis = eve_basis;
        }
        out.push_back(measure_one(bit, basis, bob_bases[i], rng));
    }
    return out;
}

SiftResult sift(const BitString& alice_bits, const BitString& bob_bits,
                const BasisString& alice_bases, const BasisString& bob_bases) {
    require_equal_lengths(alice_bits.size(), bob_bits.size());
    require_equal_lengths(alice_bits.size(), alice_bases.size());
    require_equal_lengths(alice_bits.size(), bob_bases.size());

    SiftResult result;
    result.mask.reserve(alice_bits.size());
    for (size_t i = 0; i < alice_bits.size(); ++i) {
        bool keep = alice_bases[i] == bob_bases[i];
        result.mask.push_back(keep);
        if (keep) {
            result.key_a.push_back(alice_bits[i]);
            result.key_b.push_back(bob_bits[i]);
        }
    }
    return result;
}

ExchangeTranscript run_exchange(size_t n, const EavesdropperConfig& eve,
                                RandomSource& rng) {
    require_positive(n, "qubit count");

    ExchangeTranscript t;
    t.eavesdropper = eve;
    t.alice_bits = generate_random_bits(n, rng);
    t.alice_bases = generate_random_bases(n, rng);
    t.bob_bases = generate_random_bases(n, rng);
    t.bob_bits = measure(t.alice_bits, t.alice_bases, t.bob_bases, eve, rng);

    SiftResult sifted = sift(t.alice_bits, t.bob_bits, t.alice_bases, t.bob_bases);
    t.sift_mask = std::move(sifted.mask);
    t.key_a = std::move(sifted.key_a);
    t.key_b = std::move(sifted.key_b);

    size_t kept = t.key_a.size();
    t.match_ratio = static_cast<double>(kept) / static_cast<double>(n);

    size_t errors = 0;
    for (size_t i = 0; i < kept; ++i) {
        if (t.key_a[i] != t.key_b[i]) ++errors;
    }
    t.qber = kept == 0 ? 0.0 : static_cast<double>(errors) / static_cast<double>(kept);
    return t;
}

ExchangeTranscript run_exchange_until(size_t target_sifted_bits,
                                      const EavesdropperConfig& eve,
                                      RandomSource& rng) {
    require_positive(target_sifted_bits, "target sifted bits");

    // ~2 qubits yield one sifted bit; the margin keeps the expected round
    // count at one.
    const size_t batch = target_sifted_bits * 2 + 64;

    ExchangeTranscript total;
    total.eavesdropper = eve;
    while (total.key_a.size() < target_sifted_bits) {
        ExchangeTranscript round = run_exchange(batch, eve, rng);
        total.alice_bits.append(round.alice_bits);
        total.alice_bases.append(round.alice_bases);
        total.bob_bases.append(round.bob_bases);
        total.bob_bits.append(round.bob_bits);
        total.sift_mask.insert(total.sift_mask.end(), round.sift_mask.begin(),
                               round.sift_mask.end());
        total.key_a.append(round.key_a);
        total.key_b.append(round.key_b);
    }

    size_t n = total.alice_bits.size();
    size_t kept = total.key_a.size();
    total.match_ratio = static_cast<double>(kept) / static_cast<double>(n);
    size_t errors = 0;
    for (size_t i = 0; i < kept; ++i) {
        if (total.key_a[i] != total.key_b[i]) ++errors;
    }
    total.qber = kept == 0 ? 0.0 : static_cast<double>(errors) / static_cast<double>(kept);
    return total;
}

}  // namespace bb84
