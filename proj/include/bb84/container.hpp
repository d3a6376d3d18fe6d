#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "bb84/cipher.hpp"
#include "bb84/digest.hpp"
#include "bb84/hmac_gate.hpp"
#include "bb84/kdf.hpp"

namespace bb84 {

struct SignatureBlock {
    std::string scheme = "none";
    std::vector<uint8_t> public_key;
    std::vector<uint8_t> signature;

    bool present() const { return scheme != "none"; }

    bool operator==(const SignatureBlock&) const = default;
};

struct ContainerHeader {
    static constexpr std::array<uint8_t, 4> kMagic = {'B', 'B', '8', '4'};
    static constexpr uint16_t kVersion = 1;

    uint16_t version = kVersion;
    KdfParams kdf;
    Iv iv{};
    uint64_t plaintext_length = 0;
    Sha256Digest plaintext_sha256{};
    Sha256Digest ciphertext_sha256{};
    GateTag hmac;
    SignatureBlock signature_block;
    std::string original_filename_hint;  // UTF-8, <= 255 bytes

    bool operator==(const ContainerHeader&) const = default;
};

struct ContainerFile {
    ContainerHeader header;
    std::vector<uint8_t> body;  // ciphertext, length a positive multiple of 16

    bool operator==(const ContainerFile&) const = default;
};

// Bytes covered by the gate tag: magic, version, KDF params, IV, plaintext
// length, plaintext SHA-256, ciphertext SHA-256. The tag and signature
// fields are excluded.
std::vector<uint8_t> mac_metadata_bytes(const ContainerHeader& header);

// Binary layout, then base64 armor between BEGIN/END fences wrapped at
// 76 columns. Bit-exact layout table in docs/format.md.
std::string serialize(const ContainerFile& container);

// Validation order: fence -> base64 -> magic/version -> field lengths ->
// ciphertext digest. Failures throw Error with the matching kind.
ContainerFile parse(std::span<const uint8_t> bytes);
ContainerFile parse(std::string_view text);

// Exact size of serialize() output for a container with this header and
// body length; the size-ratio model asserts against it.
size_t predicted_serialized_size(const ContainerHeader& header, size_t body_size);

// Armored size / raw size in the large-body limit (includes the newline
// per 76-char line).
constexpr double kArmorExpansionFactor = 77.0 / 57.0;

namespace armor {
std::string base64_encode(std::span<const uint8_t> data);
// Strict: rejects any character outside the base64 alphabet.
std::vector<uint8_t> base64_decode(std::string_view text);
}  // namespace armor

}  // namespace bb84
