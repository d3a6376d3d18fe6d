#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "bb84/rng.hpp"

namespace bb84 {

struct KeyPair {
    std::vector<uint8_t> public_key;
    std::vector<uint8_t> secret_key;
};

// Pluggable signature backend; "dilithium2" is the one registered scheme.
class SignatureScheme {
public:
    virtual ~SignatureScheme() = default;

    virtual std::string_view name() const = 0;
    virtual size_t public_key_size() const = 0;
    virtual size_t secret_key_size() const = 0;
    virtual size_t signature_size() const = 0;

    virtual KeyPair keygen(RandomSource& rng) const = 0;
    virtual std::vector<uint8_t> sign(std::span<const uint8_t> message,
                                      std::span<const uint8_t> secret_key) const = 0;
    // Never throws on garbage input; malformed encodings verify as false.
    virtual bool verify(std::span<const uint8_t> signature,
                        std::span<const uint8_t> message,
                        std::span<const uint8_t> public_key) const = 0;
};

// Returns the registered scheme or nullptr. "none" is not a scheme.
const SignatureScheme* find_scheme(std::string_view name);

}  // namespace bb84
