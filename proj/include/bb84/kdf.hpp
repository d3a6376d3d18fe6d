#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "bb84/bitstring.hpp"
#include "bb84/rng.hpp"

namespace bb84 {

struct KdfParams {
    static constexpr size_t kSaltSize = 16;
    static constexpr size_t kOutputLength = 32;
    static constexpr uint32_t kDefaultIterations = 100000;

    std::array<uint8_t, kSaltSize> salt{};
    uint32_t iterations = kDefaultIterations;

    static KdfParams random(RandomSource& rng, uint32_t iterations = kDefaultIterations);

    bool operator==(const KdfParams&) const = default;
};

struct DerivedKey {
    std::array<uint8_t, KdfParams::kOutputLength> key_bytes{};
    KdfParams params;
};

// Packs bits MSB-first into bytes; trailing bits that do not fill a byte
// are dropped. Requires at least 8 bits.
std::vector<uint8_t> bits_to_key_material(const BitString& bits);

// PBKDF2-HMAC-SHA256 over the packed sifted bits. Requires >= 128 bits of
// key material.
DerivedKey derive_key(const BitString& key_material, const KdfParams& params);

}  // namespace bb84
