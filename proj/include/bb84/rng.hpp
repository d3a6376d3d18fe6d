#pragma once

#include <cstdint>
#include <memory>
#include <random>
#include <span>

namespace bb84 {

// Injectable randomness source. Production code uses SecureRandomSource;
// tests use SeededRandomSource for reproducible transcripts.
class RandomSource {
public:
    virtual ~RandomSource() = default;

    virtual void fill(std::span<uint8_t> out) = 0;

    uint8_t bit();
    uint64_t next_u64();

    // True with probability p.
    bool chance(double p);
};

// Cryptographically secure source backed by the platform CSPRNG.
class SecureRandomSource final : public RandomSource {
public:
    void fill(std::span<uint8_t> out) override;
};

// Deterministic source for tests; same seed, same stream.
class SeededRandomSource final : public RandomSource {
public:
    explicit SeededRandomSource(uint64_t seed) : engine_(seed) {}
    void fill(std::span<uint8_t> out) override;

private:
    std::mt19937_64 engine_;
};

}  // namespace bb84
