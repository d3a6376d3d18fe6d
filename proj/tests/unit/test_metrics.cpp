#include <doctest.h>

#include <algorithm>
#include <random>

#include <json.hpp>

#include "bb84/errors.hpp"
#include "bb84/metrics.hpp"
#include "bb84/qkd.hpp"
#include "test_util.hpp"

using namespace bb84;

namespace {

MetricsRecord sample_record(const std::string& op) {
    MetricsRecord r;
    r.operation = op;
    r.key_entropy_bits_per_bit = 0.997;
    r.size_ratio = 1.36;
    r.match_ratio = 0.5;
    r.t_qkd_s = 0.012;
    r.t_aes_s = 0.034;
    r.t_sig_s = 0.002;
    r.key_length_bits = 256;
    r.output_size_bytes = 4096;
    r.hmac_valid = true;
    r.signature_status = SignatureStatus::valid;
    r.plaintext_sha256.fill(0xaa);
    r.decrypted_sha256 = op == "decrypt" ? r.plaintext_sha256 : Sha256Digest{};
    r.timestamp_utc = "2026-01-01T00:00:00.000Z";
    return r;
}

}  // namespace

TEST_CASE("entropy of degenerate and uniform keys") {
    CHECK(shannon_entropy(BitString::from_string("0000")) == 0.0);
    CHECK(shannon_entropy(BitString::from_string("0101")) == 1.0);
}

TEST_CASE("entropy of a 3:1 split") {
    CHECK(shannon_entropy(BitString::from_string("0001")) ==
          doctest::Approx(0.8112781244591328).epsilon(1e-12));
}

TEST_CASE("entropy rejects an empty key") {
    CHECK_THROWS_AS(shannon_entropy(BitString{}), Error);
}

TEST_CASE("entropy is permutation invariant") {
    SeededRandomSource rng(1);
    BitString key = generate_random_bits(333, rng);
    double base = shannon_entropy(key);

    std::vector<uint8_t> shuffled = key.bits();
    std::mt19937_64 shuffle_rng(2);
    std::shuffle(shuffled.begin(), shuffled.end(), shuffle_rng);
    CHECK(shannon_entropy(BitString(std::move(shuffled))) == doctest::Approx(base));
}

TEST_CASE("entropy is 1 exactly iff the ones-count is n/2") {
    for (size_t ones = 0; ones <= 8; ++ones) {
        std::vector<uint8_t> bits(8, 0);
        std::fill_n(bits.begin(), ones, uint8_t{1});
        double h = shannon_entropy(BitString(std::move(bits)));
        if (ones == 4) {
            CHECK(h == 1.0);
        } else {
            CHECK(h < 1.0);
        }
    }
}

TEST_CASE("size ratio examples") {
    CHECK(size_ratio(1230, 1000) == doctest::Approx(1.23));
    CHECK(size_ratio(512, 512) == 1.0);
    CHECK_THROWS_AS(size_ratio(10, 0), Error);
}

TEST_CASE("match ratio examples") {
    CHECK(match_ratio(BasisString::from_string("ZXZX"),
                      BasisString::from_string("ZZXX")) == 0.5);
    CHECK(match_ratio(BasisString::from_string("ZZZ"),
                      BasisString::from_string("ZZZ")) == 1.0);
    CHECK_THROWS_AS(match_ratio(BasisString::from_string("Z"),
                                BasisString::from_string("ZZ")), Error);
    CHECK_THROWS_AS(match_ratio(BasisString{}, BasisString{}), Error);
}

TEST_CASE("match ratio of random bases sits near one half") {
    SeededRandomSource rng(3);
    BasisString a = generate_random_bases(10000, rng);
    BasisString b = generate_random_bases(10000, rng);
    double rho = match_ratio(a, b);
    CHECK(rho > 0.47);
    CHECK(rho < 0.53);
}

TEST_CASE("json log round trip preserves records and order") {
    testutil::TempDir dir;
    auto log = dir.file("metrics.jsonl");

    MetricsRecord first = sample_record("encrypt");
    MetricsRecord second = sample_record("decrypt");
    emit_json_log(first, log);
    emit_json_log(second, log);

    auto records = read_json_log(log);
    REQUIRE(records.size() == 2);
    CHECK(records[0] == first);
    CHECK(records[1] == second);
}

TEST_CASE("json schema carries exactly the record fields plus schema_version") {
    auto j = nlohmann::json::parse(to_json(sample_record("encrypt")));
    std::vector<std::string> expected = {
        "schema_version",   "operation",       "key_entropy_bits_per_bit",
        "size_ratio",       "match_ratio",     "t_qkd_s",
        "t_aes_s",          "t_sig_s",         "key_length_bits",
        "output_size_bytes", "hmac_valid",     "signature_status",
        "plaintext_sha256", "decrypted_sha256", "timestamp_utc"};
    CHECK(j.size() == expected.size());
    for (const auto& field : expected) CHECK(j.contains(field));
}

TEST_CASE("text report lists the run metrics") {
    MetricsRecord enc = sample_record("encrypt");
    std::string report = render_report(std::vector<MetricsRecord>{enc}, ReportFormat::text);
    CHECK(report.find("key entropy") != std::string::npos);
    CHECK(report.find("256 bits") != std::string::npos);
    CHECK(report.find("bit match rate") != std::string::npos);
    CHECK(report.find("4096 bytes") != std::string::npos);
    CHECK(report.find("valid") != std::string::npos);
}

TEST_CASE("decryption report prints the integrity verdict") {
    MetricsRecord dec = sample_record("decrypt");
    std::string report = render_report(std::vector<MetricsRecord>{dec}, ReportFormat::text);
    CHECK(report.find("INTEGRITY CONFIRMED") != std::string::npos);
}

TEST_CASE("rejected decryption reports no hash comparison") {
    MetricsRecord dec = sample_record("decrypt");
    dec.hmac_valid = false;
    std::string report = render_report(std::vector<MetricsRecord>{dec}, ReportFormat::text);
    CHECK(report.find("REJECTED") != std::string::npos);
    CHECK(report.find("no hash comparison") != std::string::npos);
    CHECK(report.find("INTEGRITY CONFIRMED") == std::string::npos);
}

TEST_CASE("html report renders and empty input is rejected") {
    MetricsRecord enc = sample_record("encrypt");
    std::string html = render_report(std::vector<MetricsRecord>{enc}, ReportFormat::html);
    CHECK(html.find("<table") != std::string::npos);
    CHECK_THROWS_AS(render_report(std::vector<MetricsRecord>{}, ReportFormat::text), Error);
}
