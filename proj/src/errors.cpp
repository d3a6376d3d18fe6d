#include "bb84/errors.hpp"

namespace bb84 {

const char* error_kind_name(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::InvalidArgument: return "InvalidArgument";
        case ErrorKind::Io: return "Io";
        case ErrorKind::InvalidArmor: return "InvalidArmor";
        case ErrorKind::BadMagic: return "BadMagic";
        case ErrorKind::UnsupportedVersion: return "UnsupportedVersion";
        case ErrorKind::TruncatedHeader: return "TruncatedHeader";
        case ErrorKind::BodyDigestMismatch: return "BodyDigestMismatch";
        case ErrorKind::BadSignature: return "BadSignature";
        case ErrorKind::GateFail: return "GateFail";
        case ErrorKind::InternalPaddingError: return "InternalPaddingError";
        case ErrorKind::HashMismatch: return "HashMismatch";
    }
    return "Unknown";
}

int exit_code_for(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::InvalidArgument: return 1;
        case ErrorKind::Io: return 1;
        case ErrorKind::InvalidArmor: return 2;
        case ErrorKind::BadMagic: return 3;
        case ErrorKind::UnsupportedVersion: return 4;
        case ErrorKind::TruncatedHeader: return 5;
        case ErrorKind::BodyDigestMismatch: return 6;
        case ErrorKind::BadSignature: return 7;
        case ErrorKind::GateFail: return 8;
        case ErrorKind::InternalPaddingError: return 9;
        case ErrorKind::HashMismatch: return 10;
    }
    return 1;
}

}  // namespace bb84
