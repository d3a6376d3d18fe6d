#include "bb84/kdf.hpp"

#include <openssl/evp.h>

#include "bb84/errors.hpp"

namespace bb84 {

KdfParams KdfParams::random(RandomSource& rng, uint32_t iterations) {
    if (iterations == 0) {
        throw Error(ErrorKind::InvalidArgument, "KDF iteration count must be >= 1");
    }
    KdfParams params;
    params.iterations = iterations;
    rng.fill(params.salt);
    return params;
}

std::vector<uint8_t> bits_to_key_material(const BitString& bits) {
    if (bits.size() < 8) {
        throw Error(ErrorKind::InvalidArgument,
                    "need at least 8 bits to form key material");
    }
    std::vector<uint8_t> out;
    out.reserve(bits.size() / 8);
    for (size_t i = 0; i + 8 <= bits.size(); i += 8) {
        uint8_t byte = 0;
        for (size_t j = 0; j < 8; ++j) byte = static_cast<uint8_t>((byte << 1) | bits[i + j]);
        out.push_back(byte);
    }
    return out;
}

DerivedKey derive_key(const BitString& key_material, const KdfParams& params) {
    if (key_material.size() < 128) {
        throw Error(ErrorKind::InvalidArgument,
                    "sifted key material below the 128-bit floor");
    }
    if (params.iterations == 0) {
        throw Error(ErrorKind::InvalidArgument, "KDF iteration count must be >= 1");
    }

    std::vector<uint8_t> packed = bits_to_key_material(key_material);

    DerivedKey derived;
    derived.params = params;
    int rc = PKCS5_PBKDF2_HMAC(reinterpret_cast<const char*>(packed.data()),
                               static_cast<int>(packed.size()), params.salt.data(),
                               static_cast<int>(params.salt.size()),
                               static_cast<int>(params.iterations), EVP_sha256(),
                               static_cast<int>(derived.key_bytes.size()),
                               derived.key_bytes.data());
    if (rc != 1) {
        throw std::runtime_error("PBKDF2-HMAC-SHA256 failed");
    }
    return derived;
}

}  // namespace bb84
