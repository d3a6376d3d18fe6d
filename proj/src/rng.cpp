#include "bb84/rng.hpp"

#include <openssl/rand.h>

#include <stdexcept>

namespace bb84 {

uint8_t RandomSource::bit() {
    uint8_t b;
    fill({&b, 1});
    return b & 1;
}

uint64_t RandomSource::next_u64() {
    uint8_t buf[8];
    fill(buf);
    uint64_t v = 0;
    for (uint8_t byte : buf) v = (v << 8) | byte;
    return v;
}

bool RandomSource::chance(double p) {
    if (p <= 0.0) return false;
    if (p >= 1.0) return true;
    constexpr double kScale = 18446744073709551616.0;  // 2^64
    return static_cast<double>(next_u64()) < p * kScale;
}

void SecureRandomSource::fill(std::span<uint8_t> out) {
    if (out.empty()) return;
    if (RAND_bytes(out.data(), static_cast<int>(out.size())) != 1) {
        throw std::runtime_error("CSPRNG failure: RAND_bytes returned an error");
    }
}

void SeededRandomSource::fill(std::span<uint8_t> out) {
    for (auto& byte : out) byte = static_cast<uint8_t>(engine_());
}

}  // namespace bb84
