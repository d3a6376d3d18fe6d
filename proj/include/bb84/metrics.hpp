#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "bb84/bitstring.hpp"
#include "bb84/digest.hpp"

namespace bb84 {

enum class SignatureStatus { valid, invalid, unsigned_ };

const char* signature_status_name(SignatureStatus s);

struct MetricsRecord {
    static constexpr int kSchemaVersion = 1;

    std::string operation;  // "encrypt", "decrypt" or "exchange"
    double key_entropy_bits_per_bit = 0.0;
    double size_ratio = 0.0;
    double match_ratio = 0.0;
    double t_qkd_s = 0.0;
    double t_aes_s = 0.0;
    double t_sig_s = 0.0;
    uint64_t key_length_bits = 0;
    uint64_t output_size_bytes = 0;
    bool hmac_valid = false;
    SignatureStatus signature_status = SignatureStatus::unsigned_;
    Sha256Digest plaintext_sha256{};
    Sha256Digest decrypted_sha256{};
    std::string timestamp_utc;

    bool operator==(const MetricsRecord&) const = default;
};

// Binary Shannon entropy of the key's empirical bit distribution, in [0,1].
double shannon_entropy(const BitString& key);

double size_ratio(uint64_t container_size_bytes, uint64_t plaintext_size_bytes);

// Fraction of positions where the two basis strings agree.
double match_ratio(const BasisString& alice, const BasisString& bob);

std::string current_utc_timestamp();

// Appends one JSON object per line. One writer per file.
void emit_json_log(const MetricsRecord& record, const std::filesystem::path& path);

std::vector<MetricsRecord> read_json_log(const std::filesystem::path& path);

std::string to_json(const MetricsRecord& record);
MetricsRecord record_from_json(const std::string& json_text);

enum class ReportFormat { text, html };

// Run report covering entropy, durations, match rate, key length, output
// size, signature status and the hash-match verdict for decryptions.
std::string render_report(std::span<const MetricsRecord> records, ReportFormat format);

}  // namespace bb84
