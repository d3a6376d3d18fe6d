#include "bb84/keyfile.hpp"

#include <fstream>
#include <sstream>

#include "bb84/container.hpp"
#include "bb84/digest.hpp"
#include "bb84/errors.hpp"
#include "bb84/kdf.hpp"

namespace bb84 {

namespace {

constexpr std::string_view kKeyBegin = "-----BEGIN BB84 KEY-----";
constexpr std::string_view kKeyEnd = "-----END BB84 KEY-----";
constexpr std::string_view kSkBegin = "-----BEGIN BB84 SIGNING KEY-----";
constexpr std::string_view kSkEnd = "-----END BB84 SIGNING KEY-----";

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error(ErrorKind::Io, "cannot read " + path.string());
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_text_file_atomic(const std::string& text, const std::filesystem::path& path) {
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw Error(ErrorKind::Io, "cannot write " + tmp.string());
        }
        out << text;
        if (!out) {
            throw Error(ErrorKind::Io, "write failed for " + tmp.string());
        }
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp);
        throw Error(ErrorKind::Io, "cannot move key file into place at " + path.string());
    }
}

// Pads the bit string up to a whole byte with zeros; bit_length records the
// real length so unpacking is exact.
std::vector<uint8_t> pack_all_bits(const BitString& bits) {
    std::vector<uint8_t> out((bits.size() + 7) / 8, 0);
    for (size_t i = 0; i < bits.size(); ++i) {
        if (bits[i]) out[i / 8] |= static_cast<uint8_t>(0x80u >> (i % 8));
    }
    return out;
}

BitString unpack_bits(std::span<const uint8_t> bytes, size_t bit_length) {
    if (bit_length > bytes.size() * 8) {
        throw Error(ErrorKind::InvalidArgument, "key file bit length exceeds payload");
    }
    BitString out;
    out.reserve(bit_length);
    for (size_t i = 0; i < bit_length; ++i) {
        out.push_back((bytes[i / 8] >> (7 - i % 8)) & 1);
    }
    return out;
}

std::string wrap_hex(const std::string& hex) {
    std::string out;
    for (size_t i = 0; i < hex.size(); i += 64) {
        out.append(hex, i, 64);
        out.push_back('\n');
    }
    return out;
}

}  // namespace

std::string format_key_file(const BitString& sifted_bits) {
    if (sifted_bits.empty()) {
        throw Error(ErrorKind::InvalidArgument, "refusing to write an empty key");
    }
    std::string out;
    out.append(kKeyBegin);
    out.push_back('\n');
    out += "bits: " + std::to_string(sifted_bits.size()) + "\n";
    out += wrap_hex(to_hex(pack_all_bits(sifted_bits)));
    out.append(kKeyEnd);
    out.push_back('\n');
    return out;
}

BitString parse_key_file(std::string_view text) {
    size_t begin = text.find(kKeyBegin);
    size_t end = text.find(kKeyEnd);
    if (begin == std::string_view::npos || end == std::string_view::npos || end < begin) {
        throw Error(ErrorKind::InvalidArgument, "malformed key file: missing fences");
    }
    std::istringstream body(std::string(
        text.substr(begin + kKeyBegin.size(), end - begin - kKeyBegin.size())));

    size_t bit_length = 0;
    std::string hex;
    std::string line;
    while (std::getline(body, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.rfind("bits: ", 0) == 0) {
            bit_length = std::stoull(line.substr(6));
        } else {
            hex += line;
        }
    }
    if (bit_length == 0) {
        throw Error(ErrorKind::InvalidArgument, "malformed key file: no bit count");
    }
    return unpack_bits(from_hex(hex), bit_length);
}

void write_key_file(const BitString& sifted_bits, const std::filesystem::path& path) {
    write_text_file_atomic(format_key_file(sifted_bits), path);
}

BitString read_key_file(const std::filesystem::path& path) {
    return parse_key_file(read_text_file(path));
}

BitString bits_from_hex(std::string_view hex) {
    std::vector<uint8_t> bytes = from_hex(hex);
    return unpack_bits(bytes, bytes.size() * 8);
}

std::string format_secret_key_file(std::string_view scheme,
                                   std::span<const uint8_t> secret_key) {
    std::string out;
    out.append(kSkBegin);
    out.push_back('\n');
    out += "scheme: " + std::string(scheme) + "\n";
    std::string b64 = armor::base64_encode(secret_key);
    for (size_t i = 0; i < b64.size(); i += 76) {
        out.append(b64, i, 76);
        out.push_back('\n');
    }
    out.append(kSkEnd);
    out.push_back('\n');
    return out;
}

std::pair<std::string, std::vector<uint8_t>> parse_secret_key_file(std::string_view text) {
    size_t begin = text.find(kSkBegin);
    size_t end = text.find(kSkEnd);
    if (begin == std::string_view::npos || end == std::string_view::npos || end < begin) {
        throw Error(ErrorKind::InvalidArgument, "malformed signing key file");
    }
    std::istringstream body(std::string(
        text.substr(begin + kSkBegin.size(), end - begin - kSkBegin.size())));

    std::string scheme;
    std::string b64;
    std::string line;
    while (std::getline(body, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.rfind("scheme: ", 0) == 0) {
            scheme = line.substr(8);
        } else {
            b64 += line;
        }
    }
    if (scheme.empty()) {
        throw Error(ErrorKind::InvalidArgument, "signing key file lacks a scheme line");
    }
    return {scheme, armor::base64_decode(b64)};
}

void write_secret_key_file(std::string_view scheme, std::span<const uint8_t> secret_key,
                           const std::filesystem::path& path) {
    write_text_file_atomic(format_secret_key_file(scheme, secret_key), path);
}

std::pair<std::string, std::vector<uint8_t>> read_secret_key_file(
    const std::filesystem::path& path) {
    return parse_secret_key_file(read_text_file(path));
}

}  // namespace bb84
