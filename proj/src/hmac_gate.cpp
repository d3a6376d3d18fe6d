#include "bb84/hmac_gate.hpp"

#include <algorithm>

#include "bb84/errors.hpp"

namespace bb84 {

bool GateTag::is_blank() const {
    return std::all_of(hmac.begin(), hmac.end(), [](uint8_t b) { return b == 0; });
}

const char* gate_decision_name(GateDecision d) {
    switch (d) {
        case GateDecision::Pass: return "PASS";
        case GateDecision::FailMismatch: return "FAIL (HMAC mismatch)";
        case GateDecision::FailMissingTag: return "FAIL (missing/corrupt tag)";
    }
    return "FAIL";
}

GateTag compute_tag(const DerivedKey& derived, std::span<const uint8_t> metadata_bytes) {
    if (metadata_bytes.empty()) {
        throw Error(ErrorKind::InvalidArgument, "gate metadata must be nonempty");
    }
    GateTag tag;
    tag.hmac = hmac_sha256(derived.key_bytes, metadata_bytes);
    tag.covered_metadata_digest = sha256(metadata_bytes);
    return tag;
}

GateDecision verify_gate(const BitString& presented_key_material,
                         const KdfParams& params,
                         std::span<const uint8_t> metadata_bytes,
                         const GateTag& stored_tag) {
    if (stored_tag.is_blank()) return GateDecision::FailMissingTag;

    DerivedKey rederived = derive_key(presented_key_material, params);
    Sha256Digest recomputed = hmac_sha256(rederived.key_bytes, metadata_bytes);
    return constant_time_equal(recomputed, stored_tag.hmac) ? GateDecision::Pass
                                                            : GateDecision::FailMismatch;
}

}  // namespace bb84
