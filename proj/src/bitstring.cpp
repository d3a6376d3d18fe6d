#include "bb84/bitstring.hpp"

#include <algorithm>

namespace bb84 {

BitString BitString::from_string(std::string_view s) {
    BitString out;
    out.reserve(s.size());
    for (char c : s) {
        if (c == '0') {
            out.push_back(0);
        } else if (c == '1') {
            out.push_back(1);
        } else {
            throw Error(ErrorKind::InvalidArgument,
                        "BitString literal contains non-binary character");
        }
    }
    return out;
}

std::string BitString::to_string() const {
    std::string s;
    s.reserve(bits_.size());
    for (uint8_t b : bits_) s.push_back(b ? '1' : '0');
    return s;
}

size_t BitString::count_ones() const {
    return static_cast<size_t>(std::count(bits_.begin(), bits_.end(), uint8_t{1}));
}

BasisString BasisString::from_string(std::string_view s) {
    BasisString out;
    out.reserve(s.size());
    for (char c : s) {
        if (c == 'Z') {
            out.push_back(Basis::Z);
        } else if (c == 'X') {
            out.push_back(Basis::X);
        } else {
            throw Error(ErrorKind::InvalidArgument,
                        "BasisString literal contains character outside {Z,X}");
        }
    }
    return out;
}

std::string BasisString::to_string() const {
    std::string s;
    s.reserve(bases_.size());
    for (Basis b : bases_) s.push_back(b == Basis::Z ? 'Z' : 'X');
    return s;
}

}  // namespace bb84
