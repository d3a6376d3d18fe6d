// bb84cli — hybrid BB84/AES file encryption tool.
//
// Subcommands: exchange, encrypt, decrypt, verify, inject, report.
// Every subcommand accepts --json for machine-readable output.
// Exit codes: 0 success, 64 usage error, otherwise one distinct code per
// error class (see docs/format.md).

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "bb84/digest.hpp"
#include "bb84/errors.hpp"
#include "bb84/keyfile.hpp"
#include "bb84/metrics.hpp"
#include "bb84/pipeline.hpp"
#include "bb84/qkd.hpp"

using nlohmann::json;
using namespace bb84;

namespace {

constexpr int kUsageExit = 64;

std::unique_ptr<RandomSource> make_rng(const std::optional<uint64_t>& seed) {
    if (seed) return std::make_unique<SeededRandomSource>(*seed);
    return std::make_unique<SecureRandomSource>();
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorKind::Io, "cannot open for writing: " + path.string());
    out << text;
    if (!out) throw Error(ErrorKind::Io, "write failed: " + path.string());
}

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::Io, "cannot open: " + path.string());
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

BitString load_key(const std::string& key_path, const std::string& key_hex) {
    if (!key_hex.empty()) return bits_from_hex(key_hex);
    return read_key_file(key_path);
}

// True for failures diagnosed before the key is ever consulted; used to
// report the dual-failure case (bad file *and* possibly bad key) with the
// file error as primary.
bool is_container_error(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::InvalidArmor:
        case ErrorKind::BadMagic:
        case ErrorKind::UnsupportedVersion:
        case ErrorKind::TruncatedHeader:
        case ErrorKind::BodyDigestMismatch:
            return true;
        default:
            return false;
    }
}

struct CommonFlags {
    bool json = false;
};

void emit(const CommonFlags& flags, const json& machine, const std::string& human) {
    if (flags.json) {
        std::cout << machine.dump(2) << "\n";
    } else {
        std::cout << human;
    }
}

int run_exchange_cmd(const CommonFlags& flags, uint64_t qubits,
                     double eve_fraction, std::optional<uint64_t> seed) {
    auto rng = make_rng(seed);
    EavesdropperConfig eve = eve_fraction > 0.0
                                 ? EavesdropperConfig::intercept(eve_fraction)
                                 : EavesdropperConfig::off();
    ExchangeTranscript t = run_exchange(qubits, eve, *rng);
    double entropy = t.key_a.size() > 0 ? shannon_entropy(t.key_a) : 0.0;

    json j{{"operation", "exchange"},
           {"qubits", qubits},
           {"sifted_bits", t.key_a.size()},
           {"match_ratio", t.match_ratio},
           {"qber", t.qber},
           {"key_entropy_bits_per_bit", entropy},
           {"eavesdropper_fraction", eve_fraction}};
    std::ostringstream human;
    human << "BB84 exchange over " << qubits << " qubits\n"
          << "  sifted key length : " << t.key_a.size() << " bits\n"
          << "  basis match ratio : " << t.match_ratio << "\n"
          << "  QBER              : " << t.qber << "\n"
          << "  key entropy       : " << entropy << " bits/bit\n";
    emit(flags, j, human.str());
    return 0;
}

int run_encrypt_cmd(const CommonFlags& flags, const PipelineConfig& config) {
    EncryptOutcome outcome = encrypt_pipeline(config);
    const MetricsRecord& m = outcome.metrics;
    json j = json::parse(to_json(m));
    j["container"] = config.output_path.string();
    j["key_file"] = config.key_out_path.string();
    std::ostringstream human;
    human << "encrypted " << config.input_path.string() << " -> "
          << config.output_path.string() << "\n"
          << "  key file          : " << config.key_out_path.string() << "\n"
          << "  key length        : " << m.key_length_bits << " bits\n"
          << "  key entropy       : " << m.key_entropy_bits_per_bit << " bits/bit\n"
          << "  container size    : " << m.output_size_bytes << " bytes (ratio "
          << m.size_ratio << ")\n"
          << "  signature         : " << signature_status_name(m.signature_status)
          << "\n";
    emit(flags, j, human.str());
    return 0;
}

int run_decrypt_cmd(const CommonFlags& flags, const std::string& container,
                    const std::string& key_path, const std::string& key_hex,
                    const std::string& out_path, const std::string& log_path) {
    BitString key = load_key(key_path, key_hex);
    try {
        DecryptOutcome outcome = decrypt_pipeline(container, key, out_path, log_path);
        const MetricsRecord& m = outcome.metrics;
        json j = json::parse(to_json(m));
        j["output"] = out_path;
        std::ostringstream human;
        human << "decrypted " << container << " -> " << out_path << "\n"
              << "  HMAC gate         : pass\n"
              << "  signature         : " << signature_status_name(m.signature_status)
              << "\n"
              << "  plaintext sha256  : " << to_hex(m.plaintext_sha256) << "\n"
              << "  decrypted sha256  : " << to_hex(m.decrypted_sha256) << "\n"
              << "  INTEGRITY CONFIRMED: SHA-256 hashes match\n";
        emit(flags, j, human.str());
        return 0;
    } catch (const Error& e) {
        json j{{"operation", "decrypt"},
               {"error", error_kind_name(e.kind())},
               {"message", e.what()}};
        std::ostringstream human;
        human << "decrypt failed: " << e.what() << "\n";
        if (is_container_error(e.kind())) {
            j["key_tested"] = false;
            human << "  the container was rejected before the key was tested;"
                     " the key may also be wrong\n";
        }
        if (flags.json) {
            std::cout << j.dump(2) << "\n";
        } else {
            std::cerr << human.str();
        }
        return exit_code_for(e.kind());
    }
}

int run_verify_cmd(const CommonFlags& flags, const std::string& container,
                   const std::string& key_path, const std::string& key_hex) {
    BitString key = load_key(key_path, key_hex);
    VerifyOutcome outcome = verify_container(container, key);
    bool gate_ok = outcome.gate == GateDecision::Pass;
    const char* gate_name = gate_ok ? "pass"
                            : outcome.gate == GateDecision::FailMissingTag
                                ? "fail (missing tag)"
                                : "fail (mismatch)";
    json j{{"operation", "verify"},
           {"container", container},
           {"hmac_gate", gate_name},
           {"signature", signature_status_name(outcome.signature)}};
    std::ostringstream human;
    human << "verify " << container << "\n"
          << "  HMAC gate : " << gate_name << "\n"
          << "  signature : " << signature_status_name(outcome.signature) << "\n";
    emit(flags, j, human.str());
    if (!gate_ok) return exit_code_for(ErrorKind::GateFail);
    if (outcome.signature == SignatureStatus::invalid)
        return exit_code_for(ErrorKind::BadSignature);
    return 0;
}

int run_inject_cmd(const CommonFlags& flags, const std::string& container,
                   const std::string& key_path, const std::string& fault,
                   uint64_t offset, uint64_t bit, const std::string& out_path,
                   const std::string& key_out, const std::string& manifest_path) {
    auto kind = fault_kind_from_name(fault);
    if (!kind) throw Error(ErrorKind::InvalidArgument, "unknown fault kind: " + fault);
    BitString key = read_key_file(key_path);
    std::string text = read_text_file(container);
    TamperedArtifacts t = inject_fault(text, key, {*kind, offset, bit});
    write_text_file(out_path, t.container_text);
    write_text_file(key_out, format_key_file(t.key_bits));
    if (!manifest_path.empty()) write_text_file(manifest_path, t.manifest_json);

    json j = json::parse(t.manifest_json);
    j["tampered_container"] = out_path;
    j["tampered_key"] = key_out;
    std::ostringstream human;
    human << "injected fault '" << fault << "'\n"
          << "  tampered container: " << out_path << "\n"
          << "  tampered key file : " << key_out << "\n"
          << "  manifest          : " << t.manifest_json << "\n";
    emit(flags, j, human.str());
    return 0;
}

int run_report_cmd(const CommonFlags& flags, const std::string& log_path,
                   const std::string& format, const std::string& out_path) {
    auto records = read_json_log(log_path);
    if (flags.json) {
        json arr = json::array();
        for (const auto& r : records) arr.push_back(json::parse(to_json(r)));
        std::cout << arr.dump(2) << "\n";
        return 0;
    }
    ReportFormat fmt = format == "html" ? ReportFormat::html : ReportFormat::text;
    std::string rendered = render_report(records, fmt);
    if (out_path.empty()) {
        std::cout << rendered;
    } else {
        write_text_file(out_path, rendered);
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"BB84 hybrid encryption pipeline"};
    app.require_subcommand(1);
    CommonFlags flags;

    // exchange
    auto* exchange = app.add_subcommand("exchange", "Run a BB84 exchange and print stats");
    uint64_t ex_qubits = 10000;
    double ex_eve = 0.0;
    std::optional<uint64_t> ex_seed;
    bool ex_insecure = false;
    exchange->add_option("--qubits", ex_qubits, "Number of qubits to exchange")
        ->check(CLI::PositiveNumber);
    exchange->add_option("--eve-fraction", ex_eve, "Intercept-resend fraction [0,1]")
        ->check(CLI::Range(0.0, 1.0));
    exchange->add_option("--seed", ex_seed, "Deterministic seed (test only)");
    exchange->add_flag("--insecure-seed", ex_insecure,
                       "Acknowledge that seeding is insecure");
    exchange->add_flag("--json", flags.json, "Machine-readable output");

    // encrypt
    auto* encrypt = app.add_subcommand("encrypt", "Encrypt a file into a .bb84 container");
    PipelineConfig enc_cfg;
    std::string enc_in, enc_out, enc_keyout, enc_signkeyout, enc_log;
    std::optional<uint64_t> enc_qubits, enc_target;
    double enc_eve = 0.0;
    encrypt->add_option("--in", enc_in, "Input file")->required();
    encrypt->add_option("--out", enc_out, "Output container path")->required();
    encrypt->add_option("--keyout", enc_keyout, "Key file output path")->required();
    encrypt->add_option("--qubits", enc_qubits, "Exact number of qubits to exchange");
    encrypt->add_option("--target-key-bits", enc_target,
                        "Sifted key length to reach (default 256)");
    encrypt->add_option("--iterations", enc_cfg.kdf_iterations, "PBKDF2 iterations");
    encrypt->add_option("--sign", enc_cfg.signature_scheme,
                        "Signature scheme: none or dilithium2");
    encrypt->add_option("--signkeyout", enc_signkeyout,
                        "Secret signing key output path (required with --sign)");
    encrypt->add_option("--eve-fraction", enc_eve, "Intercept-resend fraction [0,1]")
        ->check(CLI::Range(0.0, 1.0));
    encrypt->add_option("--metrics-log", enc_log, "Append a JSONL metrics record here");
    encrypt->add_option("--seed", enc_cfg.seed, "Deterministic seed (test only)");
    encrypt->add_flag("--insecure-seed", enc_cfg.allow_insecure_seed,
                      "Acknowledge that seeding is insecure");
    encrypt->add_flag("--json", flags.json, "Machine-readable output");

    // decrypt
    auto* decrypt = app.add_subcommand("decrypt", "Decrypt a .bb84 container");
    std::string dec_in, dec_key, dec_key_hex, dec_out, dec_log;
    decrypt->add_option("--in", dec_in, "Container path")->required();
    decrypt->add_option("--key", dec_key, "Key file path");
    decrypt->add_option("--key-hex", dec_key_hex, "Key bits as hex (manual entry)");
    decrypt->add_option("--out", dec_out, "Plaintext output path")->required();
    decrypt->add_option("--metrics-log", dec_log, "Append a JSONL metrics record here");
    decrypt->add_flag("--json", flags.json, "Machine-readable output");

    // verify
    auto* verify = app.add_subcommand(
        "verify", "Check armor, HMAC gate and signature without decrypting");
    std::string ver_in, ver_key, ver_key_hex;
    verify->add_option("--in", ver_in, "Container path")->required();
    verify->add_option("--key", ver_key, "Key file path");
    verify->add_option("--key-hex", ver_key_hex, "Key bits as hex (manual entry)");
    verify->add_flag("--json", flags.json, "Machine-readable output");

    // inject
    auto* inject = app.add_subcommand("inject", "Tamper with a container/key for testing");
    std::string inj_in, inj_key, inj_fault, inj_out, inj_keyout, inj_manifest;
    uint64_t inj_offset = 0, inj_bit = 0;
    inject->add_option("--in", inj_in, "Valid container path")->required();
    inject->add_option("--key", inj_key, "Valid key file path")->required();
    inject
        ->add_option("--fault", inj_fault,
                     "One of: wrong_key, corrupt_body, corrupt_armor, strip_hmac, "
                     "bad_signature, wrong_key_and_corrupt_file")
        ->required();
    inject->add_option("--offset", inj_offset, "Byte offset parameter");
    inject->add_option("--bit", inj_bit, "Bit index parameter");
    inject->add_option("--out", inj_out, "Tampered container output path")->required();
    inject->add_option("--keyout", inj_keyout, "Tampered key file output path")->required();
    inject->add_option("--manifest", inj_manifest, "Write the tamper manifest here");
    inject->add_flag("--json", flags.json, "Machine-readable output");

    // report
    auto* report = app.add_subcommand("report", "Render a metrics log");
    std::string rep_log, rep_format = "text", rep_out;
    report->add_option("--log", rep_log, "JSONL metrics log path")->required();
    report->add_option("--format", rep_format, "text or html")
        ->check(CLI::IsMember({"text", "html"}));
    report->add_option("--out", rep_out, "Write the report here instead of stdout");
    report->add_flag("--json", flags.json, "Dump raw records as a JSON array");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : kUsageExit;
    }

    try {
        if (*exchange) {
            std::optional<uint64_t> seed = ex_seed;
            if (seed && !ex_insecure) {
                throw Error(ErrorKind::InvalidArgument,
                            "--seed requires --insecure-seed");
            }
            return run_exchange_cmd(flags, ex_qubits, ex_eve, seed);
        }
        if (*encrypt) {
            enc_cfg.qubit_count = enc_qubits;
            enc_cfg.target_key_bits = enc_target;
            if (!enc_cfg.qubit_count && !enc_cfg.target_key_bits) {
                enc_cfg.target_key_bits = 256;
            }
            if (enc_eve > 0.0) enc_cfg.eve = EavesdropperConfig::intercept(enc_eve);
            enc_cfg.input_path = enc_in;
            enc_cfg.output_path = enc_out;
            enc_cfg.key_out_path = enc_keyout;
            enc_cfg.sign_key_out_path = enc_signkeyout;
            enc_cfg.metrics_log_path = enc_log;
            enc_cfg.validate();
            return run_encrypt_cmd(flags, enc_cfg);
        }
        if (*decrypt) {
            if (dec_key.empty() == dec_key_hex.empty()) {
                throw Error(ErrorKind::InvalidArgument,
                            "provide exactly one of --key / --key-hex");
            }
            return run_decrypt_cmd(flags, dec_in, dec_key, dec_key_hex, dec_out, dec_log);
        }
        if (*verify) {
            if (ver_key.empty() == ver_key_hex.empty()) {
                throw Error(ErrorKind::InvalidArgument,
                            "provide exactly one of --key / --key-hex");
            }
            return run_verify_cmd(flags, ver_in, ver_key, ver_key_hex);
        }
        if (*inject) {
            return run_inject_cmd(flags, inj_in, inj_key, inj_fault, inj_offset, inj_bit,
                                  inj_out, inj_keyout, inj_manifest);
        }
        if (*report) {
            return run_report_cmd(flags, rep_log, rep_format, rep_out);
        }
    } catch (const Error& e) {
        if (flags.json) {
            json j{{"error", error_kind_name(e.kind())}, {"message", e.what()}};
            std::cout << j.dump(2) << "\n";
        } else {
            std::cerr << "error: " << e.what() << "\n";
        }
        return exit_code_for(e.kind());
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return kUsageExit;
}
