#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "bb84/bitstring.hpp"

namespace bb84 {

// Armored key file: the sifted bits as hex plus their exact bit length.
// KDF parameters travel in the container, not here.
std::string format_key_file(const BitString& sifted_bits);
BitString parse_key_file(std::string_view text);

void write_key_file(const BitString& sifted_bits, const std::filesystem::path& path);
BitString read_key_file(const std::filesystem::path& path);

// --key-hex path: hex of MSB-first packed bits, length is 8 * byte count.
BitString bits_from_hex(std::string_view hex);

// Armored secret signing key storage.
std::string format_secret_key_file(std::string_view scheme,
                                   std::span<const uint8_t> secret_key);
std::pair<std::string, std::vector<uint8_t>> parse_secret_key_file(std::string_view text);
void write_secret_key_file(std::string_view scheme, std::span<const uint8_t> secret_key,
                           const std::filesystem::path& path);
std::pair<std::string, std::vector<uint8_t>> read_secret_key_file(
    const std::filesystem::path& path);

}  // namespace bb84
