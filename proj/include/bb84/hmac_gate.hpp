#pragma once

#include <array>
#include <span>

#include "bb84/bitstring.hpp"
#include "bb84/digest.hpp"
#include "bb84/kdf.hpp"

namespace bb84 {

struct GateTag {
    Sha256Digest hmac{};
    // SHA-256 of the exact bytes that were MACed, kept for diagnostics.
    Sha256Digest covered_metadata_digest{};

    bool is_blank() const;

    bool operator==(const GateTag&) const = default;
};

enum class GateDecision {
    Pass,
    FailMismatch,
    FailMissingTag,
};

const char* gate_decision_name(GateDecision d);

// HMAC-SHA256 keyed by the derived key over the covered metadata bytes.
GateTag compute_tag(const DerivedKey& derived, std::span<const uint8_t> metadata_bytes);

// Re-derives the key from the presented sifted bits and recomputes the tag;
// Pass only on a constant-time exact match. Decryption is unreachable on
// any Fail.
GateDecision verify_gate(const BitString& presented_key_material,
                         const KdfParams& params,
                         std::span<const uint8_t> metadata_bytes,
                         const GateTag& stored_tag);

}  // namespace bb84
