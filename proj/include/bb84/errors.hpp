#pragma once

#include <stdexcept>
#include <string>

namespace bb84 {

// Every failure class maps to one stable CLI exit code (see docs/format.md).
enum class ErrorKind {
    InvalidArgument,
    Io,
    InvalidArmor,
    BadMagic,
    UnsupportedVersion,
    TruncatedHeader,
    BodyDigestMismatch,
    BadSignature,
    GateFail,
    InternalPaddingError,
    HashMismatch,
};

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(what), kind_(kind) {}

    ErrorKind kind() const { return kind_; }

private:
    ErrorKind kind_;
};

const char* error_kind_name(ErrorKind kind);
int exit_code_for(ErrorKind kind);

}  // namespace bb84
