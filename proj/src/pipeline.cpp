#include "bb84/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <memory>
#include <sstream>

#include <json.hpp>

#include "bb84/cipher.hpp"
#include "bb84/pq_sign.hpp"

namespace bb84 {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

std::vector<uint8_t> read_binary_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error(ErrorKind::Io, "cannot read " + path.string());
    }
    std::vector<uint8_t> data((std::istreambuf_iterator<char>(in)),
                              std::istreambuf_iterator<char>());
    if (in.bad()) {
        throw Error(ErrorKind::Io, "read failed for " + path.string());
    }
    return data;
}

void write_binary_file_atomic(std::span<const uint8_t> data,
                              const std::filesystem::path& path) {
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw Error(ErrorKind::Io, "cannot write " + tmp.string());
        }
        out.write(reinterpret_cast<const char*>(data.data()),
                  static_cast<std::streamsize>(data.size()));
        if (!out) {
            std::error_code ec;
            std::filesystem::remove(tmp, ec);
            throw Error(ErrorKind::Io, "write failed for " + tmp.string());
        }
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp);
        throw Error(ErrorKind::Io, "cannot move output into place at " + path.string());
    }
}

void write_text_file_atomic(const std::string& text, const std::filesystem::path& path) {
    write_binary_file_atomic(
        {reinterpret_cast<const uint8_t*>(text.data()), text.size()}, path);
}

struct StageClock {
    std::vector<StageTiming>& stages;
    Clock::time_point origin = Clock::now();

    double run_start(const std::string& name) {
        stages.push_back({name, seconds_since(origin), 0.0});
        return 0.0;
    }
    void finish() { stages.back().duration_s = seconds_since(origin) - stages.back().start_s; }
};

}  // namespace

void PipelineConfig::validate() const {
    if (qubit_count.has_value() == target_key_bits.has_value()) {
        throw Error(ErrorKind::InvalidArgument,
                    "set exactly one of qubit_count / target_key_bits");
    }
    if (qubit_count && *qubit_count == 0) {
        throw Error(ErrorKind::InvalidArgument, "qubit count must be >= 1");
    }
    if (target_key_bits && *target_key_bits < 128) {
        throw Error(ErrorKind::InvalidArgument, "target key bits must be >= 128");
    }
    if (kdf_iterations == 0) {
        throw Error(ErrorKind::InvalidArgument, "KDF iteration count must be >= 1");
    }
    if (seed && !allow_insecure_seed) {
        throw Error(ErrorKind::InvalidArgument,
                    "seeding requires the explicit insecure-test flag");
    }
    if (signature_scheme != "none" && find_scheme(signature_scheme) == nullptr) {
        throw Error(ErrorKind::InvalidArgument,
                    "unknown signature scheme: " + signature_scheme);
    }
    if (signature_scheme != "none" && sign_key_out_path.empty()) {
        throw Error(ErrorKind::InvalidArgument,
                    "signing requires a secret key output path");
    }
}

EncryptOutcome encrypt_pipeline(const PipelineConfig& config) {
    config.validate();

    std::unique_ptr<RandomSource> rng;
    if (config.seed) {
        rng = std::make_unique<SeededRandomSource>(*config.seed);
    } else {
        rng = std::make_unique<SecureRandomSource>();
    }

    std::vector<uint8_t> plaintext = read_binary_file(config.input_path);

    EncryptOutcome outcome;
    StageClock clock{outcome.stages};

    // Stage: QKD exchange.
    clock.run_start("qkd");
    ExchangeTranscript transcript;
    if (config.target_key_bits) {
        transcript = run_exchange_until(*config.target_key_bits, config.eve, *rng);
    } else {
        transcript = run_exchange(*config.qubit_count, config.eve, *rng);
    }
    BitString sifted = transcript.key_a;
    if (config.target_key_bits && sifted.size() > *config.target_key_bits) {
        BitString truncated;
        truncated.reserve(*config.target_key_bits);
        for (size_t i = 0; i < *config.target_key_bits; ++i) truncated.push_back(sifted[i]);
        sifted = std::move(truncated);
    }
    clock.finish();
    double t_qkd = outcome.stages.back().duration_s;

    // Stage: key derivation + gate key setup.
    clock.run_start("hmac");
    KdfParams kdf = KdfParams::random(*rng, config.kdf_iterations);
    DerivedKey derived = derive_key(sifted, kdf);
    clock.finish();

    // Stage: AES-256-CBC.
    clock.run_start("aes");
    Iv iv{};
    rng->fill(iv);
    std::vector<uint8_t> ciphertext = encrypt(plaintext, derived, iv);
    Sha256Digest plaintext_digest = sha256(plaintext);
    Sha256Digest ciphertext_digest = sha256(ciphertext);
    clock.finish();
    double t_aes = outcome.stages.back().duration_s;

    // Stage: post-quantum signature.
    clock.run_start("sig");
    SignatureBlock sig_block;
    std::vector<uint8_t> secret_key;
    if (config.signature_scheme != "none") {
        const SignatureScheme* scheme = find_scheme(config.signature_scheme);
        KeyPair pair = scheme->keygen(*rng);
        sig_block.scheme = config.signature_scheme;
        sig_block.public_key = pair.public_key;
        sig_block.signature = scheme->sign(ciphertext, pair.secret_key);
        secret_key = std::move(pair.secret_key);
    }
    clock.finish();
    double t_sig = outcome.stages.back().duration_s;

    // Stage: container assembly and export. The gate tag is finalized here,
    // over the completed header metadata.
    clock.run_start("export");
    ContainerFile container;
    container.header.kdf = kdf;
    container.header.iv = iv;
    container.header.plaintext_length = plaintext.size();
    container.header.plaintext_sha256 = plaintext_digest;
    container.header.ciphertext_sha256 = ciphertext_digest;
    container.header.signature_block = sig_block;
    container.header.original_filename_hint =
        config.input_path.filename().string().substr(0, 255);
    container.body = std::move(ciphertext);
    container.header.hmac = compute_tag(derived, mac_metadata_bytes(container.header));

    std::string armored = serialize(container);

    MetricsRecord metrics;
    metrics.operation = "encrypt";
    metrics.key_entropy_bits_per_bit = shannon_entropy(sifted);
    metrics.size_ratio = static_cast<double>(armored.size()) /
                         static_cast<double>(std::max<size_t>(plaintext.size(), 1));
    metrics.match_ratio = transcript.match_ratio;
    metrics.t_qkd_s = t_qkd;
    metrics.t_aes_s = t_aes;
    metrics.t_sig_s = t_sig;
    metrics.key_length_bits = sifted.size();
    metrics.output_size_bytes = armored.size();
    metrics.hmac_valid = true;
    metrics.signature_status = sig_block.present() ? SignatureStatus::valid
                                                   : SignatureStatus::unsigned_;
    metrics.plaintext_sha256 = plaintext_digest;
    metrics.timestamp_utc = current_utc_timestamp();

    // All computation succeeded; now publish the artifacts atomically.
    write_text_file_atomic(armored, config.output_path);
    write_key_file(sifted, config.key_out_path);
    if (!secret_key.empty()) {
        write_secret_key_file(config.signature_scheme, secret_key,
                              config.sign_key_out_path);
    }
    if (!config.metrics_log_path.empty()) {
        emit_json_log(metrics, config.metrics_log_path);
    }
    clock.finish();

    outcome.container = std::move(container);
    outcome.sifted_key = std::move(sifted);
    outcome.metrics = std::move(metrics);
    return outcome;
}

DecryptOutcome decrypt_pipeline(const std::filesystem::path& container_path,
                                const BitString& presented_key,
                                const std::filesystem::path& output_path,
                                const std::filesystem::path& metrics_log_path) {
    std::vector<uint8_t> raw = read_binary_file(container_path);

    // 1. Armor and structure.
    ContainerFile container = parse(raw);

    MetricsRecord metrics;
    metrics.operation = "decrypt";
    metrics.key_length_bits = presented_key.size();
    metrics.key_entropy_bits_per_bit =
        presented_key.empty() ? 0.0 : shannon_entropy(presented_key);
    metrics.plaintext_sha256 = container.header.plaintext_sha256;
    metrics.size_ratio =
        static_cast<double>(raw.size()) /
        static_cast<double>(std::max<uint64_t>(container.header.plaintext_length, 1));
    metrics.output_size_bytes = container.header.plaintext_length;

    auto log_and_throw = [&](ErrorKind kind, const std::string& what) {
        metrics.timestamp_utc = current_utc_timestamp();
        if (!metrics_log_path.empty()) emit_json_log(metrics, metrics_log_path);
        throw Error(kind, what);
    };

    // 2. Signature, when present.
    Clock::time_point sig_start = Clock::now();
    if (container.header.signature_block.present()) {
        const SignatureScheme* scheme = find_scheme(container.header.signature_block.scheme);
        bool ok = scheme != nullptr &&
                  scheme->verify(container.header.signature_block.signature,
                                 container.body,
                                 container.header.signature_block.public_key);
        metrics.t_sig_s = seconds_since(sig_start);
        if (!ok) {
            metrics.signature_status = SignatureStatus::invalid;
            log_and_throw(ErrorKind::BadSignature,
                          "post-quantum signature verification failed");
        }
        metrics.signature_status = SignatureStatus::valid;
    } else {
        metrics.signature_status = SignatureStatus::unsigned_;
    }

    // 3. HMAC gate; AES stays unreachable unless this passes.
    GateDecision gate = verify_gate(presented_key, container.header.kdf,
                                    mac_metadata_bytes(container.header),
                                    container.header.hmac);
    if (gate != GateDecision::Pass) {
        metrics.hmac_valid = false;
        log_and_throw(ErrorKind::GateFail, gate_decision_name(gate));
    }
    metrics.hmac_valid = true;

    // 4. AES decrypt + unpad.
    Clock::time_point aes_start = Clock::now();
    DerivedKey derived = derive_key(presented_key, container.header.kdf);
    std::vector<uint8_t> plaintext =
        decrypt(container.body, derived, container.header.iv);
    metrics.t_aes_s = seconds_since(aes_start);

    // 5. Hash comparison against the header record.
    metrics.decrypted_sha256 = sha256(plaintext);
    if (plaintext.size() != container.header.plaintext_length ||
        metrics.decrypted_sha256 != container.header.plaintext_sha256) {
        log_and_throw(ErrorKind::HashMismatch,
                      "decrypted output does not match the recorded plaintext hash");
    }

    if (!output_path.empty()) {
        write_binary_file_atomic(plaintext, output_path);
    }
    metrics.output_size_bytes = plaintext.size();
    metrics.timestamp_utc = current_utc_timestamp();
    if (!metrics_log_path.empty()) emit_json_log(metrics, metrics_log_path);

    return {std::move(plaintext), std::move(metrics)};
}

VerifyOutcome verify_container(const std::filesystem::path& container_path,
                               const BitString& presented_key) {
    std::vector<uint8_t> raw = read_binary_file(container_path);
    ContainerFile container = parse(raw);

    VerifyOutcome outcome;
    if (container.header.signature_block.present()) {
        const SignatureScheme* scheme = find_scheme(container.header.signature_block.scheme);
        bool ok = scheme != nullptr &&
                  scheme->verify(container.header.signature_block.signature,
                                 container.body,
                                 container.header.signature_block.public_key);
        outcome.signature = ok ? SignatureStatus::valid : SignatureStatus::invalid;
    } else {
        outcome.signature = SignatureStatus::unsigned_;
    }
    outcome.gate = verify_gate(presented_key, container.header.kdf,
                               mac_metadata_bytes(container.header),
                               container.header.hmac);
    return outcome;
}

const char* fault_kind_name(FaultKind kind) {
    switch (kind) {
        case FaultKind::wrong_key: return "wrong_key";
        case FaultKind::corrupt_body: return "corrupt_body";
        case FaultKind::corrupt_armor: return "corrupt_armor";
        case FaultKind::strip_hmac: return "strip_hmac";
        case FaultKind::bad_signature: return "bad_signature";
        case FaultKind::wrong_key_and_corrupt_file: return "wrong_key_and_corrupt_file";
    }
    return "unknown";
}

std::optional<FaultKind> fault_kind_from_name(std::string_view name) {
    for (FaultKind kind :
         {FaultKind::wrong_key, FaultKind::corrupt_body, FaultKind::corrupt_armor,
          FaultKind::strip_hmac, FaultKind::bad_signature,
          FaultKind::wrong_key_and_corrupt_file}) {
        if (name == fault_kind_name(kind)) return kind;
    }
    return std::nullopt;
}

namespace {

BitString flip_key_bit(const BitString& key, uint64_t bit_index) {
    BitString out = key;
    size_t idx = static_cast<size_t>(bit_index % key.size());
    std::vector<uint8_t> bits = out.bits();
    bits[idx] ^= 1;
    return BitString(std::move(bits));
}

std::string corrupt_armor_text(std::string_view text, uint64_t offset,
                               nlohmann::json& manifest) {
    // Find the base64 payload region between the fences.
    size_t begin = text.find('\n');
    size_t end = text.rfind("-----END");
    if (begin == std::string_view::npos || end == std::string_view::npos || end <= begin) {
        throw Error(ErrorKind::InvalidArgument, "input is not an armored container");
    }
    // Collect indices of base64 characters (skip newlines).
    std::vector<size_t> payload_positions;
    for (size_t i = begin + 1; i < end; ++i) {
        if (text[i] != '\n' && text[i] != '\r') payload_positions.push_back(i);
    }
    if (payload_positions.empty()) {
        throw Error(ErrorKind::InvalidArgument, "armored payload is empty");
    }
    size_t pos = payload_positions[static_cast<size_t>(offset % payload_positions.size())];
    std::string out(text);
    manifest["armor_offset"] = pos;
    manifest["replaced_char"] = std::string(1, out[pos]);
    out[pos] = '!';
    return out;
}

}  // namespace

TamperedArtifacts inject_fault(std::string_view container_text, const BitString& key_bits,
                               const FaultScenario& scenario) {
    nlohmann::json manifest;
    manifest["kind"] = fault_kind_name(scenario.kind);
    manifest["offset"] = scenario.offset;
    manifest["bit_index"] = scenario.bit_index;

    TamperedArtifacts out;
    out.container_text = std::string(container_text);
    out.key_bits = key_bits;

    switch (scenario.kind) {
        case FaultKind::wrong_key: {
            out.key_bits = flip_key_bit(key_bits, scenario.bit_index);
            manifest["description"] = "flipped one bit of the presented sifted key";
            break;
        }
        case FaultKind::corrupt_body: {
            ContainerFile c = parse(container_text);
            size_t pos = static_cast<size_t>(scenario.offset % c.body.size());
            c.body[pos] ^= static_cast<uint8_t>(1u << (scenario.bit_index % 8));
            // Header digest left untouched so the mismatch is detectable.
            out.container_text = serialize(c);
            manifest["description"] = "flipped one ciphertext bit behind the recorded digest";
            manifest["body_offset"] = pos;
            break;
        }
        case FaultKind::corrupt_armor: {
            out.container_text =
                corrupt_armor_text(container_text, scenario.offset, manifest);
            manifest["description"] = "replaced one armor character with '!'";
            break;
        }
        case FaultKind::strip_hmac: {
            ContainerFile c = parse(container_text);
            c.header.hmac = GateTag{};
            out.container_text = serialize(c);
            manifest["description"] = "zeroed the stored gate tag";
            break;
        }
        case FaultKind::bad_signature: {
            ContainerFile c = parse(container_text);
            if (!c.header.signature_block.present()) {
                throw Error(ErrorKind::InvalidArgument,
                            "bad_signature fault requires a signed container");
            }
            auto& sig = c.header.signature_block.signature;
            size_t pos = static_cast<size_t>(scenario.offset % sig.size());
            sig[pos] ^= static_cast<uint8_t>(1u << (scenario.bit_index % 8));
            out.container_text = serialize(c);
            manifest["description"] = "flipped one signature bit";
            manifest["signature_offset"] = pos;
            break;
        }
        case FaultKind::wrong_key_and_corrupt_file: {
            out.container_text =
                corrupt_armor_text(container_text, scenario.offset, manifest);
            out.key_bits = flip_key_bit(key_bits, scenario.bit_index);
            manifest["description"] =
                "corrupted the armor and flipped one key bit; the armor error is "
                "reported first and the key is never tested";
            break;
        }
    }

    out.manifest_json = manifest.dump();
    return out;
}

}  // namespace bb84
