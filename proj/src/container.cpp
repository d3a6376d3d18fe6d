#include "bb84/container.hpp"

#include <cstring>

#include "bb84/errors.hpp"

namespace bb84 {

namespace {

constexpr std::string_view kBeginFence = "-----BEGIN BB84 CONTAINER-----";
constexpr std::string_view kEndFence = "-----END BB84 CONTAINER-----";
constexpr size_t kArmorLineWidth = 76;

class ByteWriter {
public:
    void u8(uint8_t v) { out_.push_back(v); }
    void u16(uint16_t v) {
        out_.push_back(static_cast<uint8_t>(v >> 8));
        out_.push_back(static_cast<uint8_t>(v));
    }
    void u32(uint32_t v) {
        for (int shift = 24; shift >= 0; shift -= 8)
            out_.push_back(static_cast<uint8_t>(v >> shift));
    }
    void u64(uint64_t v) {
        for (int shift = 56; shift >= 0; shift -= 8)
            out_.push_back(static_cast<uint8_t>(v >> shift));
    }
    void bytes(std::span<const uint8_t> data) {
        out_.insert(out_.end(), data.begin(), data.end());
    }
    void bytes(std::string_view data) {
        out_.insert(out_.end(), data.begin(), data.end());
    }

    std::vector<uint8_t> take() { return std::move(out_); }

private:
    std::vector<uint8_t> out_;
};

class ByteReader {
public:
    explicit ByteReader(std::span<const uint8_t> data) : data_(data) {}

    uint8_t u8() { return take(1)[0]; }
    uint16_t u16() {
        auto b = take(2);
        return static_cast<uint16_t>((b[0] << 8) | b[1]);
    }
    uint32_t u32() {
        auto b = take(4);
        return (uint32_t{b[0]} << 24) | (uint32_t{b[1]} << 16) | (uint32_t{b[2]} << 8) |
               uint32_t{b[3]};
    }
    uint64_t u64() {
        auto b = take(8);
        uint64_t v = 0;
        for (int i = 0; i < 8; ++i) v = (v << 8) | b[i];
        return v;
    }
    std::span<const uint8_t> take(size_t n) {
        if (n > remaining()) {
            throw Error(ErrorKind::TruncatedHeader, "container header truncated");
        }
        auto out = data_.subspan(pos_, n);
        pos_ += n;
        return out;
    }
    size_t remaining() const { return data_.size() - pos_; }

private:
    std::span<const uint8_t> data_;
    size_t pos_ = 0;
};

std::vector<uint8_t> binary_layout(const ContainerFile& container) {
    const ContainerHeader& h = container.header;
    ByteWriter w;
    w.bytes(std::span<const uint8_t>(ContainerHeader::kMagic));
    w.u16(h.version);
    w.bytes(h.kdf.salt);
    w.u32(h.kdf.iterations);
    w.u8(static_cast<uint8_t>(KdfParams::kOutputLength));
    w.bytes(h.iv);
    w.u64(h.plaintext_length);
    w.bytes(h.plaintext_sha256);
    w.bytes(h.ciphertext_sha256);
    w.bytes(h.hmac.hmac);
    w.bytes(h.hmac.covered_metadata_digest);
    w.u8(static_cast<uint8_t>(h.signature_block.scheme.size()));
    w.bytes(h.signature_block.scheme);
    w.u32(static_cast<uint32_t>(h.signature_block.public_key.size()));
    w.bytes(h.signature_block.public_key);
    w.u32(static_cast<uint32_t>(h.signature_block.signature.size()));
    w.bytes(h.signature_block.signature);
    w.u8(static_cast<uint8_t>(h.original_filename_hint.size()));
    w.bytes(h.original_filename_hint);
    w.u64(container.body.size());
    w.bytes(container.body);
    return w.take();
}

// Fixed part of the binary layout, excluding the variable-length fields.
constexpr size_t kFixedLayoutSize = 4 + 2 + 16 + 4 + 1 + 16 + 8 + 32 + 32 + 32 + 32 +
                                    1 + 4 + 4 + 1 + 8;

int base64_value(char c) {
    if (c >= 'A' && c <= 'Z') return c - 'A';
    if (c >= 'a' && c <= 'z') return c - 'a' + 26;
    if (c >= '0' && c <= '9') return c - '0' + 52;
    if (c == '+') return 62;
    if (c == '/') return 63;
    return -1;
}

}  // namespace

namespace armor {

std::string base64_encode(std::span<const uint8_t> data) {
    static const char* alphabet =
        "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";
    std::string out;
    out.reserve((data.size() + 2) / 3 * 4);
    size_t i = 0;
    for (; i + 3 <= data.size(); i += 3) {
        uint32_t v = (uint32_t{data[i]} << 16) | (uint32_t{data[i + 1]} << 8) | data[i + 2];
        out.push_back(alphabet[(v >> 18) & 0x3f]);
        out.push_back(alphabet[(v >> 12) & 0x3f]);
        out.push_back(alphabet[(v >> 6) & 0x3f]);
        out.push_back(alphabet[v & 0x3f]);
    }
    size_t rest = data.size() - i;
    if (rest == 1) {
        uint32_t v = uint32_t{data[i]} << 16;
        out.push_back(alphabet[(v >> 18) & 0x3f]);
        out.push_back(alphabet[(v >> 12) & 0x3f]);
        out.push_back('=');
        out.push_back('=');
    } else if (rest == 2) {
        uint32_t v = (uint32_t{data[i]} << 16) | (uint32_t{data[i + 1]} << 8);
        out.push_back(alphabet[(v >> 18) & 0x3f]);
        out.push_back(alphabet[(v >> 12) & 0x3f]);
        out.push_back(alphabet[(v >> 6) & 0x3f]);
        out.push_back('=');
    }
    return out;
}

std::vector<uint8_t> base64_decode(std::string_view text) {
    if (text.size() % 4 != 0) {
        throw Error(ErrorKind::InvalidArmor, "base64 payload length not a multiple of 4");
    }
    std::vector<uint8_t> out;
    out.reserve(text.size() / 4 * 3);
    for (size_t i = 0; i < text.size(); i += 4) {
        int vals[4];
        int pad = 0;
        for (int j = 0; j < 4; ++j) {
            char c = text[i + j];
            if (c == '=') {
                // Padding only in the last two slots of the final group.
                if (i + 4 != text.size() || j < 2) {
                    throw Error(ErrorKind::InvalidArmor, "misplaced base64 padding");
                }
                vals[j] = 0;
                ++pad;
            } else {
                if (pad > 0) {
                    throw Error(ErrorKind::InvalidArmor, "data after base64 padding");
                }
                vals[j] = base64_value(c);
                if (vals[j] < 0) {
                    throw Error(ErrorKind::InvalidArmor, "invalid base64 character");
                }
            }
        }
        uint32_t v = (uint32_t(vals[0]) << 18) | (uint32_t(vals[1]) << 12) |
                     (uint32_t(vals[2]) << 6) | uint32_t(vals[3]);
        out.push_back(static_cast<uint8_t>(v >> 16));
        if (pad < 2) out.push_back(static_cast<uint8_t>(v >> 8));
        if (pad < 1) out.push_back(static_cast<uint8_t>(v));
    }
    return out;
}

}  // namespace armor

std::vector<uint8_t> mac_metadata_bytes(const ContainerHeader& header) {
    ByteWriter w;
    w.bytes(std::span<const uint8_t>(ContainerHeader::kMagic));
    w.u16(header.version);
    w.bytes(header.kdf.salt);
    w.u32(header.kdf.iterations);
    w.u8(static_cast<uint8_t>(KdfParams::kOutputLength));
    w.bytes(header.iv);
    w.u64(header.plaintext_length);
    w.bytes(header.plaintext_sha256);
    w.bytes(header.ciphertext_sha256);
    return w.take();
}

std::string serialize(const ContainerFile& container) {
    if (container.header.original_filename_hint.size() > 255) {
        throw Error(ErrorKind::InvalidArgument, "filename hint exceeds 255 bytes");
    }
    if (container.header.signature_block.scheme.size() > 255) {
        throw Error(ErrorKind::InvalidArgument, "signature scheme name exceeds 255 bytes");
    }
    if (container.body.empty() || container.body.size() % kAesBlockSize != 0) {
        throw Error(ErrorKind::InvalidArgument,
                    "container body must be a positive multiple of 16 bytes");
    }

    std::string b64 = armor::base64_encode(binary_layout(container));

    std::string out;
    out.reserve(b64.size() + b64.size() / kArmorLineWidth + 70);
    out.append(kBeginFence);
    out.push_back('\n');
    for (size_t i = 0; i < b64.size(); i += kArmorLineWidth) {
        out.append(b64, i, kArmorLineWidth);
        out.push_back('\n');
    }
    out.append(kEndFence);
    out.push_back('\n');
    return out;
}

size_t predicted_serialized_size(const ContainerHeader& header, size_t body_size) {
    size_t raw = kFixedLayoutSize + header.signature_block.scheme.size() +
                 header.signature_block.public_key.size() +
                 header.signature_block.signature.size() +
                 header.original_filename_hint.size() + body_size;
    size_t b64 = (raw + 2) / 3 * 4;
    size_t lines = (b64 + kArmorLineWidth - 1) / kArmorLineWidth;
    return kBeginFence.size() + 1 + b64 + lines + kEndFence.size() + 1;
}

ContainerFile parse(std::string_view text) {
    return parse(std::span<const uint8_t>(
        reinterpret_cast<const uint8_t*>(text.data()), text.size()));
}

ContainerFile parse(std::span<const uint8_t> bytes) {
    std::string_view text(reinterpret_cast<const char*>(bytes.data()), bytes.size());

    // Fences first; everything between them must be base64 or line breaks.
    size_t begin = text.find(kBeginFence);
    if (begin == std::string_view::npos) {
        throw Error(ErrorKind::InvalidArmor, "missing BEGIN fence");
    }
    size_t end = text.find(kEndFence, begin + kBeginFence.size());
    if (end == std::string_view::npos) {
        throw Error(ErrorKind::InvalidArmor, "missing END fence");
    }

    std::string b64;
    b64.reserve(end - begin);
    for (char c : text.substr(begin + kBeginFence.size(),
                              end - begin - kBeginFence.size())) {
        if (c == '\n' || c == '\r') continue;
        if (base64_value(c) < 0 && c != '=') {
            throw Error(ErrorKind::InvalidArmor, "invalid character inside armor");
        }
        b64.push_back(c);
    }
    std::vector<uint8_t> raw = armor::base64_decode(b64);

    ByteReader r(raw);
    ContainerFile container;
    ContainerHeader& h = container.header;

    // Magic and version gate everything else.
    {
        std::span<const uint8_t> magic;
        try {
            magic = r.take(4);
        } catch (const Error&) {
            throw Error(ErrorKind::BadMagic, "input too short for magic");
        }
        if (!std::equal(magic.begin(), magic.end(), ContainerHeader::kMagic.begin())) {
            throw Error(ErrorKind::BadMagic, "bad container magic");
        }
    }
    h.version = r.u16();
    if (h.version != ContainerHeader::kVersion) {
        throw Error(ErrorKind::UnsupportedVersion,
                    "unsupported container version " + std::to_string(h.version));
    }

    auto salt = r.take(KdfParams::kSaltSize);
    std::copy(salt.begin(), salt.end(), h.kdf.salt.begin());
    h.kdf.iterations = r.u32();
    if (h.kdf.iterations == 0) {
        throw Error(ErrorKind::TruncatedHeader, "KDF iteration count of zero");
    }
    uint8_t out_len = r.u8();
    if (out_len != KdfParams::kOutputLength) {
        throw Error(ErrorKind::TruncatedHeader, "unexpected KDF output length");
    }
    auto iv = r.take(h.iv.size());
    std::copy(iv.begin(), iv.end(), h.iv.begin());
    h.plaintext_length = r.u64();
    auto pt_digest = r.take(32);
    std::copy(pt_digest.begin(), pt_digest.end(), h.plaintext_sha256.begin());
    auto ct_digest = r.take(32);
    std::copy(ct_digest.begin(), ct_digest.end(), h.ciphertext_sha256.begin());
    auto hmac = r.take(32);
    std::copy(hmac.begin(), hmac.end(), h.hmac.hmac.begin());
    auto covered = r.take(32);
    std::copy(covered.begin(), covered.end(), h.hmac.covered_metadata_digest.begin());

    uint8_t scheme_len = r.u8();
    auto scheme = r.take(scheme_len);
    h.signature_block.scheme.assign(scheme.begin(), scheme.end());
    uint32_t pk_len = r.u32();
    if (pk_len > r.remaining()) {
        throw Error(ErrorKind::TruncatedHeader, "public key length exceeds input");
    }
    auto pk = r.take(pk_len);
    h.signature_block.public_key.assign(pk.begin(), pk.end());
    uint32_t sig_len = r.u32();
    if (sig_len > r.remaining()) {
        throw Error(ErrorKind::TruncatedHeader, "signature length exceeds input");
    }
    auto sig = r.take(sig_len);
    h.signature_block.signature.assign(sig.begin(), sig.end());
    if (h.signature_block.scheme == "none" &&
        (!h.signature_block.public_key.empty() || !h.signature_block.signature.empty())) {
        throw Error(ErrorKind::TruncatedHeader, "unsigned container carries key material");
    }

    uint8_t name_len = r.u8();
    auto name = r.take(name_len);
    h.original_filename_hint.assign(name.begin(), name.end());

    uint64_t body_len = r.u64();
    if (body_len == 0 || body_len % kAesBlockSize != 0) {
        throw Error(ErrorKind::TruncatedHeader,
                    "body length not a positive multiple of 16");
    }
    if (body_len != r.remaining()) {
        throw Error(ErrorKind::TruncatedHeader, "declared body length mismatch");
    }
    auto body = r.take(body_len);
    container.body.assign(body.begin(), body.end());

    if (sha256(container.body) != h.ciphertext_sha256) {
        throw Error(ErrorKind::BodyDigestMismatch,
                    "ciphertext does not match its recorded digest");
    }
    return container;
}

}  // namespace bb84
