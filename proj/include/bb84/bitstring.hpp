#pragma once

#include <cstdint>
#include <cstddef>
#include <initializer_list>
#include <string>
#include <string_view>
#include <vector>

#include "bb84/errors.hpp"

namespace bb84 {

// Sequence of single bits, each stored as 0 or 1.
class BitString {
public:
    BitString() = default;

    explicit BitString(std::vector<uint8_t> bits) : bits_(std::move(bits)) {
        for (uint8_t b : bits_) {
            if (b > 1) throw Error(ErrorKind::InvalidArgument, "BitString element not 0/1");
        }
    }

    // Accepts a literal like "01101".
    static BitString from_string(std::string_view s);

    void push_back(uint8_t bit) {
        if (bit > 1) throw Error(ErrorKind::InvalidArgument, "BitString element not 0/1");
        bits_.push_back(bit);
    }

    void append(const BitString& other) {
        bits_.insert(bits_.end(), other.bits_.begin(), other.bits_.end());
    }

    uint8_t operator[](size_t i) const { return bits_[i]; }
    size_t size() const { return bits_.size(); }
    bool empty() const { return bits_.empty(); }
    void reserve(size_t n) { bits_.reserve(n); }

    const std::vector<uint8_t>& bits() const { return bits_; }

    std::string to_string() const;
    size_t count_ones() const;

    bool operator==(const BitString&) const = default;

    auto begin() const { return bits_.begin(); }
    auto end() const { return bits_.end(); }

private:
    std::vector<uint8_t> bits_;
};

enum class Basis : uint8_t { Z = 0, X = 1 };

// Sequence of measurement bases over {Z, X}.
class BasisString {
public:
    BasisString() = default;
    explicit BasisString(std::vector<Basis> bases) : bases_(std::move(bases)) {}

    // Accepts a literal like "ZXZX".
    static BasisString from_string(std::string_view s);

    void push_back(Basis b) { bases_.push_back(b); }
    void append(const BasisString& other) {
        bases_.insert(bases_.end(), other.bases_.begin(), other.bases_.end());
    }

    Basis operator[](size_t i) const { return bases_[i]; }
    size_t size() const { return bases_.size(); }
    bool empty() const { return bases_.empty(); }
    void reserve(size_t n) { bases_.reserve(n); }

    std::string to_string() const;

    bool operator==(const BasisString&) const = default;

private:
    std::vector<Basis> bases_;
};

}  // namespace bb84
