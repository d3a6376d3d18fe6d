#include "bb84/cipher.hpp"

#include <openssl/evp.h>

#include <atomic>
#include <memory>

#include "bb84/errors.hpp"

namespace bb84 {

namespace {

std::atomic<uint64_t> g_decrypt_calls{0};

struct CtxDeleter {
    void operator()(EVP_CIPHER_CTX* ctx) const { EVP_CIPHER_CTX_free(ctx); }
};
using CipherCtx = std::unique_ptr<EVP_CIPHER_CTX, CtxDeleter>;

CipherCtx make_ctx() {
    CipherCtx ctx(EVP_CIPHER_CTX_new());
    if (!ctx) throw std::runtime_error("EVP_CIPHER_CTX_new failed");
    return ctx;
}

}  // namespace

std::vector<uint8_t> pad_pkcs7(std::span<const uint8_t> data, size_t block) {
    if (block == 0 || block > 255) {
        throw Error(ErrorKind::InvalidArgument, "invalid PKCS#7 block size");
    }
    size_t pad = block - data.size() % block;  // 1..block, never 0
    std::vector<uint8_t> out(data.begin(), data.end());
    out.insert(out.end(), pad, static_cast<uint8_t>(pad));
    return out;
}

std::vector<uint8_t> unpad_pkcs7(std::span<const uint8_t> data, size_t block) {
    if (data.empty() || data.size() % block != 0) {
        throw Error(ErrorKind::InternalPaddingError,
                    "padded data length not a positive multiple of the block size");
    }
    uint8_t pad = data.back();
    if (pad == 0 || pad > block) {
        throw Error(ErrorKind::InternalPaddingError, "PKCS#7 pad value out of range");
    }
    for (size_t i = data.size() - pad; i < data.size(); ++i) {
        if (data[i] != pad) {
            throw Error(ErrorKind::InternalPaddingError, "inconsistent PKCS#7 pad bytes");
        }
    }
    return {data.begin(), data.end() - pad};
}

std::vector<uint8_t> encrypt(std::span<const uint8_t> plaintext, const DerivedKey& key,
                             const Iv& iv) {
    std::vector<uint8_t> padded = pad_pkcs7(plaintext);

    CipherCtx ctx = make_ctx();
    if (EVP_EncryptInit_ex(ctx.get(), EVP_aes_256_cbc(), nullptr, key.key_bytes.data(),
                           iv.data()) != 1) {
        throw std::runtime_error("AES-256-CBC encrypt init failed");
    }
    // Padding is applied above so the layout stays under our control.
    EVP_CIPHER_CTX_set_padding(ctx.get(), 0);

    std::vector<uint8_t> out(padded.size());
    int len = 0;
    if (EVP_EncryptUpdate(ctx.get(), out.data(), &len, padded.data(),
                          static_cast<int>(padded.size())) != 1) {
        throw std::runtime_error("AES-256-CBC encrypt failed");
    }
    int fin = 0;
    if (EVP_EncryptFinal_ex(ctx.get(), out.data() + len, &fin) != 1) {
        throw std::runtime_error("AES-256-CBC encrypt finalization failed");
    }
    out.resize(static_cast<size_t>(len + fin));
    return out;
}

std::vector<uint8_t> decrypt(std::span<const uint8_t> ciphertext, const DerivedKey& key,
                             const Iv& iv) {
    g_decrypt_calls.fetch_add(1, std::memory_order_relaxed);

    if (ciphertext.empty() || ciphertext.size() % kAesBlockSize != 0) {
        throw Error(ErrorKind::InvalidArgument,
                    "ciphertext length not a positive multiple of 16");
    }

    CipherCtx ctx = make_ctx();
    if (EVP_DecryptInit_ex(ctx.get(), EVP_aes_256_cbc(), nullptr, key.key_bytes.data(),
                           iv.data()) != 1) {
        throw std::runtime_error("AES-256-CBC decrypt init failed");
    }
    EVP_CIPHER_CTX_set_padding(ctx.get(), 0);

    std::vector<uint8_t> padded(ciphertext.size());
    int len = 0;
    if (EVP_DecryptUpdate(ctx.get(), padded.data(), &len, ciphertext.data(),
                          static_cast<int>(ciphertext.size())) != 1) {
        throw std::runtime_error("AES-256-CBC decrypt failed");
    }
    int fin = 0;
    if (EVP_DecryptFinal_ex(ctx.get(), padded.data() + len, &fin) != 1) {
        throw std::runtime_error("AES-256-CBC decrypt finalization failed");
    }
    padded.resize(static_cast<size_t>(len + fin));
    return unpad_pkcs7(padded);
}

uint64_t decrypt_invocation_count() {
    return g_decrypt_calls.load(std::memory_order_relaxed);
}

}  // namespace bb84
