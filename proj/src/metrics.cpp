#include "bb84/metrics.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

#include <json.hpp>

#include "bb84/errors.hpp"

namespace bb84 {

using nlohmann::json;

const char* signature_status_name(SignatureStatus s) {
    switch (s) {
        case SignatureStatus::valid: return "valid";
        case SignatureStatus::invalid: return "invalid";
        case SignatureStatus::unsigned_: return "unsigned";
    }
    return "unsigned";
}

static SignatureStatus signature_status_from_name(const std::string& name) {
    if (name == "valid") return SignatureStatus::valid;
    if (name == "invalid") return SignatureStatus::invalid;
    if (name == "unsigned") return SignatureStatus::unsigned_;
    throw Error(ErrorKind::InvalidArgument, "unknown signature status: " + name);
}

double shannon_entropy(const BitString& key) {
    if (key.empty()) {
        throw Error(ErrorKind::InvalidArgument, "entropy of an empty key is undefined");
    }
    double p1 = static_cast<double>(key.count_ones()) / static_cast<double>(key.size());
    double p0 = 1.0 - p1;
    double h = 0.0;
    if (p0 > 0.0) h -= p0 * std::log2(p0);
    if (p1 > 0.0) h -= p1 * std::log2(p1);
    return h;
}

double size_ratio(uint64_t container_size_bytes, uint64_t plaintext_size_bytes) {
    if (plaintext_size_bytes == 0) {
        throw Error(ErrorKind::InvalidArgument, "size ratio undefined for empty plaintext");
    }
    return static_cast<double>(container_size_bytes) /
           static_cast<double>(plaintext_size_bytes);
}

double match_ratio(const BasisString& alice, const BasisString& bob) {
    if (alice.size() != bob.size()) {
        throw Error(ErrorKind::InvalidArgument, "basis strings differ in length");
    }
    if (alice.empty()) {
        throw Error(ErrorKind::InvalidArgument, "match ratio undefined for empty strings");
    }
    size_t agree = 0;
    for (size_t i = 0; i < alice.size(); ++i) {
        if (alice[i] == bob[i]) ++agree;
    }
    return static_cast<double>(agree) / static_cast<double>(alice.size());
}

std::string current_utc_timestamp() {
    using namespace std::chrono;
    auto now = time_point_cast<milliseconds>(system_clock::now());
    auto secs = time_point_cast<seconds>(now);
    auto ms = duration_cast<milliseconds>(now - secs).count();

    std::time_t t = system_clock::to_time_t(secs);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%S", &tm);
    std::ostringstream out;
    out << buf << '.' << std::setw(3) << std::setfill('0') << ms << 'Z';
    return out.str();
}

static json to_json_object(const MetricsRecord& r) {
    return json{
        {"schema_version", MetricsRecord::kSchemaVersion},
        {"operation", r.operation},
        {"key_entropy_bits_per_bit", r.key_entropy_bits_per_bit},
        {"size_ratio", r.size_ratio},
        {"match_ratio", r.match_ratio},
        {"t_qkd_s", r.t_qkd_s},
        {"t_aes_s", r.t_aes_s},
        {"t_sig_s", r.t_sig_s},
        {"key_length_bits", r.key_length_bits},
        {"output_size_bytes", r.output_size_bytes},
        {"hmac_valid", r.hmac_valid},
        {"signature_status", signature_status_name(r.signature_status)},
        {"plaintext_sha256", to_hex(r.plaintext_sha256)},
        {"decrypted_sha256", to_hex(r.decrypted_sha256)},
        {"timestamp_utc", r.timestamp_utc},
    };
}

static Sha256Digest digest_from_hex(const std::string& hex) {
    std::vector<uint8_t> bytes = from_hex(hex);
    if (bytes.size() != 32) {
        throw Error(ErrorKind::InvalidArgument, "digest field is not 32 bytes");
    }
    Sha256Digest d;
    std::copy(bytes.begin(), bytes.end(), d.begin());
    return d;
}

static MetricsRecord from_json_object(const json& j) {
    MetricsRecord r;
    r.operation = j.at("operation").get<std::string>();
    r.key_entropy_bits_per_bit = j.at("key_entropy_bits_per_bit").get<double>();
    r.size_ratio = j.at("size_ratio").get<double>();
    r.match_ratio = j.at("match_ratio").get<double>();
    r.t_qkd_s = j.at("t_qkd_s").get<double>();
    r.t_aes_s = j.at("t_aes_s").get<double>();
    r.t_sig_s = j.at("t_sig_s").get<double>();
    r.key_length_bits = j.at("key_length_bits").get<uint64_t>();
    r.output_size_bytes = j.at("output_size_bytes").get<uint64_t>();
    r.hmac_valid = j.at("hmac_valid").get<bool>();
    r.signature_status =
        signature_status_from_name(j.at("signature_status").get<std::string>());
    r.plaintext_sha256 = digest_from_hex(j.at("plaintext_sha256").get<std::string>());
    r.decrypted_sha256 = digest_from_hex(j.at("decrypted_sha256").get<std::string>());
    r.timestamp_utc = j.at("timestamp_utc").get<std::string>();
    return r;
}

std::string to_json(const MetricsRecord& record) {
    return to_json_object(record).dump();
}

MetricsRecord record_from_json(const std::string& json_text) {
    return from_json_object(json::parse(json_text));
}

void emit_json_log(const MetricsRecord& record, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::app);
    if (!out) {
        throw Error(ErrorKind::Io, "cannot open metrics log " + path.string());
    }
    out << to_json(record) << '\n';
    if (!out) {
        throw Error(ErrorKind::Io, "write failed for metrics log " + path.string());
    }
}

std::vector<MetricsRecord> read_json_log(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw Error(ErrorKind::Io, "cannot open metrics log " + path.string());
    }
    std::vector<MetricsRecord> records;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        records.push_back(record_from_json(line));
    }
    return records;
}

namespace {

std::string verdict_line(const MetricsRecord& r) {
    if (r.operation != "decrypt") return {};
    if (!r.hmac_valid) return "REJECTED: HMAC gate failed; no hash comparison performed";
    if (r.plaintext_sha256 == r.decrypted_sha256) return "INTEGRITY CONFIRMED: SHA-256 hashes match";
    return "HASH MISMATCH: decrypted output differs from the original";
}

void render_text_record(std::ostream& out, const MetricsRecord& r, size_t index) {
    out << "Run " << index + 1 << " [" << r.operation << "] " << r.timestamp_utc << "\n";
    out << "  key entropy       : " << r.key_entropy_bits_per_bit << " bits/bit\n";
    out << "  key length        : " << r.key_length_bits << " bits\n";
    out << "  A/B bit match rate: " << r.match_ratio << "\n";
    out << "  size ratio        : " << r.size_ratio << "\n";
    out << "  output size       : " << r.output_size_bytes << " bytes\n";
    out << "  t_qkd / t_aes / t_sig: " << r.t_qkd_s << " s / " << r.t_aes_s << " s / "
        << r.t_sig_s << " s\n";
    out << "  HMAC              : " << (r.hmac_valid ? "valid" : "REJECTED") << "\n";
    out << "  signature         : " << signature_status_name(r.signature_status) << "\n";
    if (r.operation == "decrypt") {
        out << "  verdict           : " << verdict_line(r) << "\n";
    }
    out << "\n";
}

}  // namespace

std::string render_report(std::span<const MetricsRecord> records, ReportFormat format) {
    if (records.empty()) {
        throw Error(ErrorKind::InvalidArgument, "no metrics records to report");
    }

    std::ostringstream out;
    if (format == ReportFormat::text) {
        out << "BB84 hybrid encryption metrics report (" << records.size() << " run"
            << (records.size() == 1 ? "" : "s") << ")\n\n";
        for (size_t i = 0; i < records.size(); ++i) render_text_record(out, records[i], i);
    } else {
        out << "<!DOCTYPE html><html><head><meta charset=\"utf-8\">"
               "<title>BB84 metrics report</title></head><body>\n";
        out << "<h1>BB84 hybrid encryption metrics report</h1>\n<table border=\"1\">\n";
        out << "<tr><th>#</th><th>op</th><th>timestamp</th><th>entropy</th>"
               "<th>key bits</th><th>match ratio</th><th>size ratio</th>"
               "<th>output bytes</th><th>t_qkd</th><th>t_aes</th><th>t_sig</th>"
               "<th>HMAC</th><th>signature</th><th>verdict</th></tr>\n";
        for (size_t i = 0; i < records.size(); ++i) {
            const MetricsRecord& r = records[i];
            out << "<tr><td>" << i + 1 << "</td><td>" << r.operation << "</td><td>"
                << r.timestamp_utc << "</td><td>" << r.key_entropy_bits_per_bit
                << "</td><td>" << r.key_length_bits << "</td><td>" << r.match_ratio
                << "</td><td>" << r.size_ratio << "</td><td>" << r.output_size_bytes
                << "</td><td>" << r.t_qkd_s << "</td><td>" << r.t_aes_s << "</td><td>"
                << r.t_sig_s << "</td><td>" << (r.hmac_valid ? "valid" : "REJECTED")
                << "</td><td>" << signature_status_name(r.signature_status) << "</td><td>"
                << verdict_line(r) << "</td></tr>\n";
        }
        out << "</table></body></html>\n";
    }
    return out.str();
}

}  // namespace bb84
