#include <doctest.h>

#include <random>

#include "bb84/cipher.hpp"
#include "bb84/digest.hpp"
#include "bb84/errors.hpp"

using namespace bb84;

namespace {

DerivedKey key_from_hex(const std::string& hex) {
    DerivedKey k;
    auto bytes = from_hex(hex);
    std::copy(bytes.begin(), bytes.end(), k.key_bytes.begin());
    return k;
}

Iv iv_from_hex(const std::string& hex) {
    Iv iv;
    auto bytes = from_hex(hex);
    std::copy(bytes.begin(), bytes.end(), iv.begin());
    return iv;
}

}  // namespace

TEST_CASE("pad_pkcs7 full-block case") {
    std::vector<uint8_t> data(16, 0xab);
    auto padded = pad_pkcs7(data);
    CHECK(padded.size() == 32);
    for (size_t i = 16; i < 32; ++i) CHECK(padded[i] == 0x10);
}

TEST_CASE("pad_pkcs7 short input") {
    std::vector<uint8_t> data(5, 0x01);
    auto padded = pad_pkcs7(data);
    CHECK(padded.size() == 16);
    for (size_t i = 5; i < 16; ++i) CHECK(padded[i] == 0x0b);
}

TEST_CASE("pad_pkcs7 empty input gives one full pad block") {
    auto padded = pad_pkcs7(std::vector<uint8_t>{});
    CHECK(padded.size() == 16);
    for (uint8_t b : padded) CHECK(b == 0x10);
}

TEST_CASE("unpad(pad(x)) is the identity up to 1 KiB") {
    std::mt19937_64 rng(3);
    for (size_t len : {0, 1, 15, 16, 17, 255, 1024}) {
        std::vector<uint8_t> data(len);
        for (auto& b : data) b = static_cast<uint8_t>(rng());
        CHECK(unpad_pkcs7(pad_pkcs7(data)) == data);
    }
}

TEST_CASE("unpad rejects inconsistent pad bytes") {
    // Ends 0x03 0x03 0x03 but the third-from-last byte disagrees.
    std::vector<uint8_t> block(16, 0x00);
    block[13] = 0x01;
    block[14] = 0x03;
    block[15] = 0x03;
    CHECK_THROWS_AS(unpad_pkcs7(block), Error);

    // Ends 0x03 0x03 0x02: the claimed pad of 2 disagrees with byte 14.
    std::vector<uint8_t> block2(16, 0x00);
    block2[13] = 0x03;
    block2[14] = 0x03;
    block2[15] = 0x02;
    CHECK_THROWS_AS(unpad_pkcs7(block2), Error);
}

TEST_CASE("unpad rejects a zero pad byte") {
    std::vector<uint8_t> block(16, 0x00);
    CHECK_THROWS_AS(unpad_pkcs7(block), Error);
}

TEST_CASE("unpad rejects non-multiple-of-16 input") {
    CHECK_THROWS_AS(unpad_pkcs7(std::vector<uint8_t>(15, 0x01)), Error);
}

TEST_CASE("AES-256-CBC matches the published standard vector") {
    // NIST SP 800-38A, F.2.5 (CBC-AES256.Encrypt).
    auto key = key_from_hex(
        "603deb1015ca71be2b73aef0857d77811f352c073b6108d72d9810a30914dff4");
    auto iv = iv_from_hex("000102030405060708090a0b0c0d0e0f");
    auto pt = from_hex(
        "6bc1bee22e409f96e93d7e117393172aae2d8a571e03ac9c9eb76fac45af8e51"
        "30c81c46a35ce411e5fbc1191a0a52eff69f2445df4f9b17ad2b417be66c3710");
    auto expected = from_hex(
        "f58c4c04d6e5f1ba779eabfb5f7bfbd69cfc4e967edb808d679f777bc6702c7d"
        "39f23369a9d9bacfa530e26304231461b2eb05e2c39be9fcda6c19078c6a9d1b");

    auto ct = encrypt(pt, key, iv);
    CHECK(ct.size() == pt.size() + 16);  // one pad block beyond the vector
    CHECK(std::equal(expected.begin(), expected.end(), ct.begin()));
}

TEST_CASE("round trip for plaintext lengths 0..1024") {
    std::mt19937_64 seed_rng(7);
    auto key = key_from_hex(
        "000102030405060708090a0b0c0d0e0f101112131415161718191a1b1c1d1e1f");
    auto iv = iv_from_hex("0f0e0d0c0b0a09080706050403020100");

    for (size_t len = 0; len <= 1024; len += (len < 40 ? 1 : 37)) {
        std::vector<uint8_t> pt(len);
        for (auto& b : pt) b = static_cast<uint8_t>(seed_rng());
        auto ct = encrypt(pt, key, iv);
        CHECK(ct.size() == pt.size() + (16 - pt.size() % 16));
        CHECK(decrypt(ct, key, iv) == pt);
    }
}

TEST_CASE("different IVs give different ciphertexts") {
    auto key = key_from_hex(
        "000102030405060708090a0b0c0d0e0f101112131415161718191a1b1c1d1e1f");
    std::vector<uint8_t> pt(64, 0x42);
    auto c1 = encrypt(pt, key, iv_from_hex("00000000000000000000000000000000"));
    auto c2 = encrypt(pt, key, iv_from_hex("00000000000000000000000000000001"));
    CHECK(c1 != c2);
}

TEST_CASE("CBC bit flip corrupts exactly blocks i and i+1") {
    auto key = key_from_hex(
        "2b2b2b2b2b2b2b2b2b2b2b2b2b2b2b2b2b2b2b2b2b2b2b2b2b2b2b2b2b2b2b2b");
    auto iv = iv_from_hex("000102030405060708090a0b0c0d0e0f");
    std::vector<uint8_t> pt(64, 0x61);
    auto ct = encrypt(pt, key, iv);  // 5 blocks with padding

    auto tampered = ct;
    tampered[16] ^= 0x01;  // flip a bit in ciphertext block 1
    auto out = decrypt(tampered, key, iv);  // padding block untouched
    REQUIRE(out.size() == pt.size());

    bool block0_ok = std::equal(pt.begin(), pt.begin() + 16, out.begin());
    bool block1_ok = std::equal(pt.begin() + 16, pt.begin() + 32, out.begin() + 16);
    bool block2_ok = std::equal(pt.begin() + 32, pt.begin() + 48, out.begin() + 32);
    bool block3_ok = std::equal(pt.begin() + 48, pt.end(), out.begin() + 48);
    CHECK(block0_ok);
    CHECK_FALSE(block1_ok);
    CHECK_FALSE(block2_ok);
    CHECK(block3_ok);
}

TEST_CASE("decrypt rejects bad lengths") {
    auto key = key_from_hex(
        "000102030405060708090a0b0c0d0e0f101112131415161718191a1b1c1d1e1f");
    auto iv = iv_from_hex("000102030405060708090a0b0c0d0e0f");
    CHECK_THROWS_AS(decrypt(std::vector<uint8_t>{}, key, iv), Error);
    CHECK_THROWS_AS(decrypt(std::vector<uint8_t>(17, 0), key, iv), Error);
}

TEST_CASE("decrypt invocation counter advances") {
    auto key = key_from_hex(
        "000102030405060708090a0b0c0d0e0f101112131415161718191a1b1c1d1e1f");
    auto iv = iv_from_hex("000102030405060708090a0b0c0d0e0f");
    auto ct = encrypt(std::vector<uint8_t>(10, 0x33), key, iv);
    uint64_t before = decrypt_invocation_count();
    decrypt(ct, key, iv);
    CHECK(decrypt_invocation_count() == before + 1);
}
