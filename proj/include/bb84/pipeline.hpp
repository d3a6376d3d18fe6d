#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "bb84/container.hpp"
#include "bb84/keyfile.hpp"
#include "bb84/metrics.hpp"
#include "bb84/qkd.hpp"

namespace bb84 {

struct PipelineConfig {
    // Exactly one of these is set.
    std::optional<uint64_t> qubit_count;
    std::optional<uint64_t> target_key_bits;

    uint32_t kdf_iterations = KdfParams::kDefaultIterations;
    std::string signature_scheme = "none";
    EavesdropperConfig eve;

    std::filesystem::path input_path;
    std::filesystem::path output_path;
    std::filesystem::path key_out_path;
    std::filesystem::path sign_key_out_path;  // required when signing
    std::filesystem::path metrics_log_path;   // empty: no log

    // Seeding is test-only and must be explicitly opted into.
    std::optional<uint64_t> seed;
    bool allow_insecure_seed = false;

    void validate() const;
};

struct StageTiming {
    std::string stage;
    double start_s = 0.0;
    double duration_s = 0.0;
};

struct EncryptOutcome {
    ContainerFile container;
    BitString sifted_key;  // what went into the key file
    MetricsRecord metrics;
    std::vector<StageTiming> stages;  // pipeline order: qkd, hmac, aes, sig, export
};

// QKD -> key derivation + gate setup -> AES -> signature -> container export.
// Outputs are written atomically; any stage failure leaves no artifacts.
EncryptOutcome encrypt_pipeline(const PipelineConfig& config);

struct DecryptOutcome {
    std::vector<uint8_t> plaintext;
    MetricsRecord metrics;
};

// Strict order: parse/armor -> signature verify -> HMAC gate -> AES ->
// unpad -> plaintext hash comparison. The first failure throws; no later
// stage runs.
DecryptOutcome decrypt_pipeline(const std::filesystem::path& container_path,
                                const BitString& presented_key,
                                const std::filesystem::path& output_path,
                                const std::filesystem::path& metrics_log_path = {});

struct VerifyOutcome {
    GateDecision gate = GateDecision::FailMissingTag;
    SignatureStatus signature = SignatureStatus::unsigned_;
};

// Parse + gate + signature check without producing plaintext.
VerifyOutcome verify_container(const std::filesystem::path& container_path,
                               const BitString& presented_key);

enum class FaultKind {
    wrong_key,
    corrupt_body,
    corrupt_armor,
    strip_hmac,
    bad_signature,
    wrong_key_and_corrupt_file,
};

const char* fault_kind_name(FaultKind kind);
std::optional<FaultKind> fault_kind_from_name(std::string_view name);

struct FaultScenario {
    FaultKind kind;
    uint64_t offset = 0;     // byte offset into the armor payload / body
    uint64_t bit_index = 0;  // bit to flip in key / signature material
};

struct TamperedArtifacts {
    std::string container_text;
    BitString key_bits;
    std::string manifest_json;  // what was altered, machine-readable
};

// Deterministic tampering of a valid container + key per the scenario
// parameters.
TamperedArtifacts inject_fault(std::string_view container_text,
                               const BitString& key_bits,
                               const FaultScenario& scenario);

}  // namespace bb84
