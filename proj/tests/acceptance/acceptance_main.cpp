// Acceptance suite for the BB84 hybrid encryption pipeline.
//
// Each criterion prints exactly one PASS/FAIL line; the process exits 0 only
// if every criterion passes. All randomness is seeded so runs are repeatable.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "bb84/cipher.hpp"
#include "bb84/container.hpp"
#include "bb84/digest.hpp"
#include "bb84/errors.hpp"
#include "bb84/kdf.hpp"
#include "bb84/metrics.hpp"
#include "bb84/pipeline.hpp"
#include "bb84/pq_sign.hpp"
#include "bb84/qkd.hpp"

using namespace bb84;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

namespace {

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

struct Criterion {
    int number;
    std::string summary;  // filled in by the check
    std::function<bool(std::string&)> check;
};

fs::path g_scratch;

void write_file(const fs::path& path, const std::vector<uint8_t>& data) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out.write(reinterpret_cast<const char*>(data.data()),
              static_cast<std::streamsize>(data.size()));
}

std::vector<uint8_t> read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

// Five representative content categories: text, audio-like (smooth
// waveform), image-like (row-structured), video-like (frame blocks with
// noise), and compressed-like (uniform random).
std::vector<uint8_t> make_test_file(int category, size_t size, std::mt19937_64& rng) {
    std::vector<uint8_t> data(size);
    switch (category % 5) {
        case 0:
            for (size_t i = 0; i < size; ++i)
                data[i] = static_cast<uint8_t>(' ' + rng() % 95);
            break;
        case 1:
            for (size_t i = 0; i < size; ++i)
                data[i] = static_cast<uint8_t>(
                    128 + 100 * std::sin(i * 0.05) + static_cast<int>(rng() % 9) - 4);
            break;
        case 2:
            for (size_t i = 0; i < size; ++i)
                data[i] = static_cast<uint8_t>((i / 256) * 17 + (i % 256) / 4);
            break;
        case 3:
            for (size_t i = 0; i < size; ++i)
                data[i] = static_cast<uint8_t>((i / 4096) * 31 + (rng() % 16));
            break;
        default:
            for (auto& b : data) b = static_cast<uint8_t>(rng());
            break;
    }
    return data;
}

PipelineConfig fast_config(const std::string& stem, uint64_t seed) {
    PipelineConfig config;
    config.target_key_bits = 256;
    config.kdf_iterations = 1000;  // KDF strength is covered by criterion 6
    config.input_path = g_scratch / (stem + ".bin");
    config.output_path = g_scratch / (stem + ".bb84");
    config.key_out_path = g_scratch / (stem + ".key");
    config.seed = seed;
    config.allow_insecure_seed = true;
    return config;
}

// --- criterion 1: round-trip fidelity over 50 mixed files ------------------

bool check_round_trip(std::string& summary) {
    std::mt19937_64 rng(101);
    std::vector<MetricsRecord> decrypt_records;
    int mismatches = 0;
    const int files = 50;
    auto start = Clock::now();

    for (int i = 0; i < files; ++i) {
        size_t size = i == 0 ? 0 : rng() % (1u << 20);  // 0 B .. 1 MiB
        auto data = make_test_file(i, size, rng);
        PipelineConfig config = fast_config("rt" + std::to_string(i), 1000 + i);
        write_file(config.input_path, data);
        encrypt_pipeline(config);

        BitString key = read_key_file(config.key_out_path);
        fs::path out = g_scratch / ("rt" + std::to_string(i) + ".out");
        DecryptOutcome dec = decrypt_pipeline(config.output_path, key, out);
        if (read_file(out) != data) ++mismatches;
        decrypt_records.push_back(dec.metrics);
    }

    std::string report = render_report(decrypt_records, ReportFormat::text);
    bool verdict_printed =
        report.find("INTEGRITY CONFIRMED: SHA-256 hashes match") != std::string::npos;

    char buf[160];
    std::snprintf(buf, sizeof(buf),
                  "%d files 0 B-1 MiB round-tripped, %d mismatches, verdict %s (%.1f s)",
                  files, mismatches, verdict_printed ? "printed" : "MISSING",
                  seconds_since(start));
    summary = buf;
    return mismatches == 0 && verdict_printed;
}

// --- criterion 2: fault rejection across all six scenario kinds ------------

bool check_fault_rejection(std::string& summary) {
    std::mt19937_64 rng(202);

    // One signed container reused for all scenarios.
    PipelineConfig config = fast_config("fault", 42);
    config.signature_scheme = "dilithium2";
    config.sign_key_out_path = g_scratch / "fault.sk";
    write_file(config.input_path, make_test_file(4, 8192, rng));
    encrypt_pipeline(config);
    BitString key = read_key_file(config.key_out_path);
    std::string container_text = [&] {
        auto bytes = read_file(config.output_path);
        return std::string(bytes.begin(), bytes.end());
    }();

    struct Expectation {
        FaultKind kind;
        ErrorKind expected;
        bool wrong_key_path;  // AES decrypt must never run
    };
    const Expectation plan[] = {
        {FaultKind::wrong_key, ErrorKind::GateFail, true},
        {FaultKind::corrupt_body, ErrorKind::BodyDigestMismatch, false},
        {FaultKind::corrupt_armor, ErrorKind::InvalidArmor, false},
        {FaultKind::strip_hmac, ErrorKind::GateFail, true},
        {FaultKind::bad_signature, ErrorKind::BadSignature, false},
        {FaultKind::wrong_key_and_corrupt_file, ErrorKind::InvalidArmor, true},
    };

    int escapes = 0;
    int wrong_errors = 0;
    uint64_t forbidden_decrypts = 0;
    int trials = 0;

    for (const auto& exp : plan) {
        for (int t = 0; t < 20; ++t, ++trials) {
            FaultScenario scenario{exp.kind, rng() % 4096, rng() % 256};
            TamperedArtifacts tampered = inject_fault(container_text, key, scenario);
            fs::path tampered_path = g_scratch / "fault_tampered.bb84";
            {
                std::ofstream out(tampered_path, std::ios::binary | std::ios::trunc);
                out << tampered.container_text;
            }
            uint64_t before = decrypt_invocation_count();
            try {
                decrypt_pipeline(tampered_path, tampered.key_bits,
                                 g_scratch / "fault.out");
                ++escapes;
            } catch (const Error& e) {
                if (e.kind() != exp.expected) ++wrong_errors;
            }
            if (exp.wrong_key_path) {
                forbidden_decrypts += decrypt_invocation_count() - before;
            }
        }
    }

    char buf[160];
    std::snprintf(buf, sizeof(buf),
                  "%d tamper trials (6 kinds x 20): %d escapes, %d mis-typed errors, "
                  "%llu AES calls on wrong-key paths",
                  trials, escapes, wrong_errors,
                  static_cast<unsigned long long>(forbidden_decrypts));
    summary = buf;
    return escapes == 0 && wrong_errors == 0 && forbidden_decrypts == 0;
}

// --- criterion 3: sifting statistics ---------------------------------------

bool check_bb84_statistics(std::string& summary) {
    SeededRandomSource rng(303);
    const int runs = 100;
    const size_t n = 10000;
    double total_match = 0.0;
    int nonzero_qber = 0;
    for (int i = 0; i < runs; ++i) {
        ExchangeTranscript t = run_exchange(n, EavesdropperConfig::off(), rng);
        total_match += t.match_ratio;
        if (t.qber != 0.0) ++nonzero_qber;
    }
    double mean = total_match / runs;

    char buf[160];
    std::snprintf(buf, sizeof(buf),
                  "mean match ratio %.4f over %d runs of n=10^4 (target [0.49,0.51]); "
                  "%d runs with nonzero noiseless QBER",
                  mean, runs, nonzero_qber);
    summary = buf;
    return mean >= 0.49 && mean <= 0.51 && nonzero_qber == 0;
}

// --- criterion 4: eavesdropper detection -----------------------------------

bool check_eavesdropper(std::string& summary) {
    SeededRandomSource rng(404);
    const int runs = 100;
    const size_t n = 10000;
    double total_qber = 0.0;
    for (int i = 0; i < runs; ++i) {
        ExchangeTranscript t = run_exchange(n, EavesdropperConfig::intercept(1.0), rng);
        total_qber += t.qber;
    }
    double mean = total_qber / runs;

    char buf[160];
    std::snprintf(buf, sizeof(buf),
                  "mean QBER %.4f under full intercept-resend over %d runs "
                  "(target [0.23,0.27], analytic 0.25)",
                  mean, runs);
    summary = buf;
    return mean >= 0.23 && mean <= 0.27;
}

// --- criterion 5: key entropy ----------------------------------------------

bool check_entropy(std::string& summary) {
    SeededRandomSource rng(505);
    double min_entropy = 1.0;
    for (int i = 0; i < 10; ++i) {
        ExchangeTranscript t = run_exchange_until(2048, EavesdropperConfig::off(), rng);
        min_entropy = std::min(min_entropy, shannon_entropy(t.key_a));
    }

    bool examples_ok =
        shannon_entropy(BitString::from_string("0000")) == 0.0 &&
        shannon_entropy(BitString::from_string("0101")) == 1.0 &&
        std::abs(shannon_entropy(BitString::from_string("0001")) - 0.8113) <= 1e-4;

    char buf[160];
    std::snprintf(buf, sizeof(buf),
                  "minimum entropy %.5f bits/bit over 10 keys of >=2048 bits "
                  "(threshold 0.995); fixed examples %s",
                  min_entropy, examples_ok ? "exact" : "WRONG");
    summary = buf;
    return min_entropy >= 0.995 && examples_ok;
}

// --- criterion 6: crypto known answers -------------------------------------

bool check_known_answers(std::string& summary) {
    // AES-256-CBC: NIST SP 800-38A, F.2.5 (CBC-AES256.Encrypt).
    DerivedKey aes_key;
    auto key_bytes = from_hex(
        "603deb1015ca71be2b73aef0857d77811f352c073b6108d72d9810a30914dff4");
    std::copy(key_bytes.begin(), key_bytes.end(), aes_key.key_bytes.begin());
    Iv iv{};
    auto iv_bytes = from_hex("000102030405060708090a0b0c0d0e0f");
    std::copy(iv_bytes.begin(), iv_bytes.end(), iv.begin());
    auto pt = from_hex(
        "6bc1bee22e409f96e93d7e117393172aae2d8a571e03ac9c9eb76fac45af8e51"
        "30c81c46a35ce411e5fbc1191a0a52eff69f2445df4f9b17ad2b417be66c3710");
    auto expected_ct = from_hex(
        "f58c4c04d6e5f1ba779eabfb5f7bfbd69cfc4e967edb808d679f777bc6702c7d"
        "39f23369a9d9bacfa530e26304231461b2eb05e2c39be9fcda6c19078c6a9d1b");
    auto ct = encrypt(pt, aes_key, iv);
    bool aes_ok = ct.size() == pt.size() + 16 &&
                  std::equal(expected_ct.begin(), expected_ct.end(), ct.begin());

    // HMAC-SHA256: RFC 4231 test cases 1 and 2.
    auto s2v = [](const char* s) {
        return std::vector<uint8_t>(s, s + std::char_traits<char>::length(s));
    };
    bool hmac_ok =
        to_hex(hmac_sha256(std::vector<uint8_t>(20, 0x0b), s2v("Hi There"))) ==
            "b0344c61d8db38535ca8afceaf0bf12b881dc200c9833da726e9376c2e32cff7" &&
        to_hex(hmac_sha256(s2v("Jefe"), s2v("what do ya want for nothing?"))) ==
            "5bdcc146bf60754e6a042426089575c75a003f089d2739839dec58b964ec3843";

    // PBKDF2-HMAC-SHA256: values frozen from an independent reference
    // implementation before this code base existed.
    auto bits_of = [](uint8_t byte, size_t count) {
        BitString out;
        for (size_t i = 0; i < count; ++i)
            for (int b = 7; b >= 0; --b) out.push_back((byte >> b) & 1);
        return out;
    };
    KdfParams p1;
    for (size_t i = 0; i < p1.salt.size(); ++i) p1.salt[i] = static_cast<uint8_t>(i);
    p1.iterations = 1000;
    KdfParams p2;
    p2.salt.fill(0xff);
    p2.iterations = 100000;
    bool kdf_ok =
        to_hex(derive_key(bits_of(0x55, 16), p1).key_bytes) ==
            "00b4d0a3268073b7f4b3bd74c2a8425e3879f4a35ab9055e2ffab17115df5085" &&
        to_hex(derive_key(bits_of(0x41, 32), p2).key_bytes) ==
            "28a27739bd51d45a2dada3d471b514a021c8c9c924ce1d0c07f762d22b45655c";

    char buf[160];
    std::snprintf(buf, sizeof(buf), "AES-256-CBC %s, HMAC-SHA256 %s, PBKDF2 %s",
                  aes_ok ? "bit-exact" : "MISMATCH",
                  hmac_ok ? "bit-exact" : "MISMATCH",
                  kdf_ok ? "bit-exact" : "MISMATCH");
    summary = buf;
    return aes_ok && hmac_ok && kdf_ok;
}

// --- criterion 7: signature suite ------------------------------------------

bool check_signatures(std::string& summary) {
    const SignatureScheme* scheme = find_scheme("dilithium2");
    if (scheme == nullptr) {
        summary = "dilithium2 scheme unavailable";
        return false;
    }
    SeededRandomSource rng(707);

    int valid_round_trips = 0;
    const int rounds = 100;
    KeyPair pair = scheme->keygen(rng);
    std::vector<std::vector<uint8_t>> messages;
    std::vector<std::vector<uint8_t>> signatures;
    for (int i = 0; i < rounds; ++i) {
        std::vector<uint8_t> msg(64 + rng.next_u64() % 512);
        rng.fill(msg);
        auto sig = scheme->sign(msg, pair.secret_key);
        if (scheme->verify(sig, msg, pair.public_key)) ++valid_round_trips;
        messages.push_back(std::move(msg));
        signatures.push_back(std::move(sig));
    }

    int rejected = 0;
    const int per_target = 100;
    for (int i = 0; i < per_target; ++i) {
        size_t idx = i % rounds;
        auto msg = messages[idx];
        size_t bit = rng.next_u64() % (msg.size() * 8);
        msg[bit / 8] ^= static_cast<uint8_t>(1u << (bit % 8));
        if (!scheme->verify(signatures[idx], msg, pair.public_key)) ++rejected;

        auto sig = signatures[idx];
        bit = rng.next_u64() % (sig.size() * 8);
        sig[bit / 8] ^= static_cast<uint8_t>(1u << (bit % 8));
        if (!scheme->verify(sig, messages[idx], pair.public_key)) ++rejected;

        auto pk = pair.public_key;
        bit = rng.next_u64() % (pk.size() * 8);
        pk[bit / 8] ^= static_cast<uint8_t>(1u << (bit % 8));
        if (!scheme->verify(signatures[idx], messages[idx], pk)) ++rejected;
    }

    char buf[160];
    std::snprintf(buf, sizeof(buf),
                  "%d/%d round trips valid; %d/300 single-bit mutations rejected "
                  "(ciphertext/signature/public key, 100 each)",
                  valid_round_trips, rounds, rejected);
    summary = buf;
    return valid_round_trips == rounds && rejected == 300;
}

// --- criterion 8: size-ratio model -----------------------------------------

bool check_size_model(std::string& summary) {
    std::mt19937_64 rng(808);
    int exact = 0;
    const size_t sizes[20] = {1,      2,       5,       16,      17,
                              100,    255,     256,     1000,    4096,
                              10000,  65536,   100000,  250000,  500000,
                              1000000, 2000000, 4000000, 8000000, 10485760};
    double ratio_at_10mib = 0.0;
    for (size_t pt_len : sizes) {
        ContainerFile c;
        c.header.kdf.iterations = 100000;
        c.header.plaintext_length = pt_len;
        c.header.original_filename_hint = "f.bin";
        c.body.resize((pt_len / 16 + 1) * 16);
        for (auto& b : c.body) b = static_cast<uint8_t>(rng());
        c.header.ciphertext_sha256 = sha256(c.body);

        std::string text = serialize(c);
        if (text.size() == predicted_serialized_size(c.header, c.body.size())) ++exact;
        if (pt_len == 10485760)
            ratio_at_10mib = static_cast<double>(text.size()) / pt_len;
    }
    double deviation = std::abs(ratio_at_10mib - kArmorExpansionFactor);

    char buf[160];
    std::snprintf(buf, sizeof(buf),
                  "%d/20 sizes 1 B-10 MiB match the size formula to the byte; "
                  "10 MiB ratio %.4f vs armor factor %.4f (|diff| %.4f < 0.01)",
                  exact, ratio_at_10mib, kArmorExpansionFactor, deviation);
    summary = buf;
    return exact == 20 && deviation < 0.01;
}

// --- criterion 9: performance sanity at 10 MiB -----------------------------

bool check_performance(std::string& summary) {
    std::mt19937_64 rng(909);
    PipelineConfig config = fast_config("perf", 99);
    config.kdf_iterations = KdfParams::kDefaultIterations;  // production strength
    write_file(config.input_path, make_test_file(4, 10 * 1024 * 1024, rng));

    auto t0 = Clock::now();
    encrypt_pipeline(config);
    double enc_s = seconds_since(t0);

    BitString key = read_key_file(config.key_out_path);
    auto t1 = Clock::now();
    decrypt_pipeline(config.output_path, key, g_scratch / "perf.out");
    double dec_s = seconds_since(t1);

    char buf[160];
    std::snprintf(buf, sizeof(buf),
                  "10 MiB file: encrypt %.3f s, decrypt %.3f s (budget 2 s each)",
                  enc_s, dec_s);
    summary = buf;
    return enc_s < 2.0 && dec_s < 2.0;
}

// --- criterion 10: parser fuzz ---------------------------------------------

bool check_fuzz(std::string& summary) {
    std::mt19937_64 rng(1010);

    // A valid container to mutate alongside pure-random inputs.
    PipelineConfig config = fast_config("fuzz", 7);
    write_file(config.input_path, make_test_file(0, 4096, rng));
    encrypt_pipeline(config);
    auto valid_bytes = read_file(config.output_path);
    std::string valid(valid_bytes.begin(), valid_bytes.end());

    const int total = 100000;
    int crashes = 0;  // non-Error exceptions
    int slow = 0;
    double worst_s = 0.0;
    auto start = Clock::now();

    for (int i = 0; i < total; ++i) {
        std::string input;
        switch (i % 4) {
            case 0: {  // random junk, mostly small, up to 64 KiB
                size_t len = (rng() % 10 != 0) ? rng() % 2048 : rng() % 65536;
                input.resize(len);
                for (auto& ch : input) ch = static_cast<char>(rng());
                break;
            }
            case 1: {  // mutated valid container
                input = valid;
                size_t flips = 1 + rng() % 8;
                for (size_t f = 0; f < flips; ++f)
                    input[rng() % input.size()] ^=
                        static_cast<char>(1 << (rng() % 8));
                break;
            }
            case 2: {  // truncated valid container
                input = valid.substr(0, rng() % (valid.size() + 1));
                break;
            }
            default: {  // valid container with junk spliced in
                input = valid;
                size_t pos = rng() % input.size();
                size_t len = rng() % 64;
                input.insert(pos, std::string(len, static_cast<char>(rng())));
                break;
            }
        }

        auto t0 = Clock::now();
        try {
            parse(input);
        } catch (const Error&) {
            // typed rejection: expected
        } catch (...) {
            ++crashes;
        }
        double dt = seconds_since(t0);
        worst_s = std::max(worst_s, dt);
        if (dt > 1.0) ++slow;
    }

    char buf[160];
    std::snprintf(buf, sizeof(buf),
                  "%d fuzz inputs <=64 KiB: %d untyped failures, %d inputs over "
                  "1 s, worst %.3f s (total %.1f s)",
                  total, crashes, slow, worst_s, seconds_since(start));
    summary = buf;
    return crashes == 0 && slow == 0;
}

}  // namespace

int main() {
    std::error_code ec;
    g_scratch = fs::temp_directory_path() / ("bb84_acceptance_" +
                                             std::to_string(::getpid()));
    fs::create_directories(g_scratch, ec);

    Criterion criteria[] = {
        {1, "", check_round_trip},
        {2, "", check_fault_rejection},
        {3, "", check_bb84_statistics},
        {4, "", check_eavesdropper},
        {5, "", check_entropy},
        {6, "", check_known_answers},
        {7, "", check_signatures},
        {8, "", check_size_model},
        {9, "", check_performance},
        {10, "", check_fuzz},
    };

    int failures = 0;
    for (auto& c : criteria) {
        bool ok = false;
        std::string summary;
        try {
            ok = c.check(summary);
        } catch (const std::exception& e) {
            summary = std::string("unexpected exception: ") + e.what();
        }
        if (!ok) ++failures;
        std::printf("[%2d] %s  %s\n", c.number, ok ? "PASS" : "FAIL", summary.c_str());
        std::fflush(stdout);
    }

    fs::remove_all(g_scratch, ec);
    if (failures == 0) {
        std::printf("acceptance: all 10 criteria passed\n");
        return 0;
    }
    std::printf("acceptance: %d criteria FAILED\n", failures);
    return 1;
}
