#include "bb84/pq_sign.hpp"

extern "C" {
#include "api.h"
#include "randombytes.h"
}

#include "bb84/errors.hpp"

namespace bb84 {

namespace {

// PQClean pulls randomness through the randombytes() symbol below. The
// thread-local hook lets keygen/sign draw from an injected source; with no
// hook installed, the platform CSPRNG is used.
thread_local RandomSource* t_randombytes_hook = nullptr;

struct RandombytesScope {
    explicit RandombytesScope(RandomSource& rng) { t_randombytes_hook = &rng; }
    ~RandombytesScope() { t_randombytes_hook = nullptr; }
};

// ML-DSA-44, the standardized form of Dilithium at security category 2.
// Public key and signature sizes are the Dilithium2 parameter-set values.
class Dilithium2Scheme final : public SignatureScheme {
public:
    std::string_view name() const override { return "dilithium2"; }
    size_t public_key_size() const override { return PQCLEAN_MLDSA44_CLEAN_CRYPTO_PUBLICKEYBYTES; }
    size_t secret_key_size() const override { return PQCLEAN_MLDSA44_CLEAN_CRYPTO_SECRETKEYBYTES; }
    size_t signature_size() const override { return PQCLEAN_MLDSA44_CLEAN_CRYPTO_BYTES; }

    KeyPair keygen(RandomSource& rng) const override {
        RandombytesScope scope(rng);
        KeyPair pair;
        pair.public_key.resize(public_key_size());
        pair.secret_key.resize(secret_key_size());
        if (PQCLEAN_MLDSA44_CLEAN_crypto_sign_keypair(pair.public_key.data(),
                                                      pair.secret_key.data()) != 0) {
            throw std::runtime_error("dilithium2 keypair generation failed");
        }
        return pair;
    }

    std::vector<uint8_t> sign(std::span<const uint8_t> message,
                              std::span<const uint8_t> secret_key) const override {
        if (secret_key.size() != secret_key_size()) {
            throw Error(ErrorKind::InvalidArgument, "malformed dilithium2 secret key");
        }
        std::vector<uint8_t> sig(signature_size());
        size_t siglen = 0;
        if (PQCLEAN_MLDSA44_CLEAN_crypto_sign_signature(sig.data(), &siglen,
                                                        message.data(), message.size(),
                                                        secret_key.data()) != 0) {
            throw std::runtime_error("dilithium2 signing failed");
        }
        sig.resize(siglen);
        return sig;
    }

    bool verify(std::span<const uint8_t> signature, std::span<const uint8_t> message,
                std::span<const uint8_t> public_key) const override {
        if (signature.size() != signature_size()) return false;
        if (public_key.size() != public_key_size()) return false;
        return PQCLEAN_MLDSA44_CLEAN_crypto_sign_verify(signature.data(), signature.size(),
                                                        message.data(), message.size(),
                                                        public_key.data()) == 0;
    }
};

}  // namespace

const SignatureScheme* find_scheme(std::string_view name) {
    static const Dilithium2Scheme dilithium2;
    if (name == dilithium2.name()) return &dilithium2;
    return nullptr;
}

}  // namespace bb84

extern "C" int PQCLEAN_randombytes(uint8_t* output, size_t n) {
    using namespace bb84;
    try {
        if (t_randombytes_hook != nullptr) {
            t_randombytes_hook->fill({output, n});
        } else {
            SecureRandomSource source;
            source.fill({output, n});
        }
        return 0;
    } catch (...) {
        return -1;
    }
}
