#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "bb84/kdf.hpp"

namespace bb84 {

constexpr size_t kAesBlockSize = 16;

using Iv = std::array<uint8_t, kAesBlockSize>;

std::vector<uint8_t> pad_pkcs7(std::span<const uint8_t> data,
                               size_t block = kAesBlockSize);

// Strips and checks PKCS#7 padding; malformed padding throws
// InternalPaddingError (the gate must already have passed by the time
// this can run).
std::vector<uint8_t> unpad_pkcs7(std::span<const uint8_t> data,
                                 size_t block = kAesBlockSize);

// AES-256-CBC over the PKCS#7-padded plaintext.
std::vector<uint8_t> encrypt(std::span<const uint8_t> plaintext,
                             const DerivedKey& key, const Iv& iv);

std::vector<uint8_t> decrypt(std::span<const uint8_t> ciphertext,
                             const DerivedKey& key, const Iv& iv);

// Process-wide count of decrypt() calls. The fault harness asserts this
// stays flat across every wrong-key path.
uint64_t decrypt_invocation_count();

}  // namespace bb84
