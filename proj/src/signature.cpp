#include "airsig/signature.hpp"

#include "airsig/error.hpp"

#include <string>

namespace airsig {

void LognormalStroke::validate() const {
    if (!(D > 0.0) || !std::isfinite(D)) throw DomainError("stroke amplitude D must be positive");
    if (!(sigma2 > 0.0) || !std::isfinite(sigma2)) throw DomainError("stroke sigma2 must be positive");
    if (!std::isfinite(t0) || !std::isfinite(mu)) throw DomainError("stroke t0/mu must be finite");
}

void SigmaLogSignature::validate() const {
    for (const auto& s : strokes) s.validate();
    if (!plan.links.empty() && plan.links.size() != strokes.size()) {
        throw InputError("signature: " + std::to_string(strokes.size()) + " strokes for " +
                         std::to_string(plan.links.size()) + " links");
    }
    for (std::size_t j = 1; j < strokes.size(); ++j) {
        if (strokes[j].t0 < strokes[j - 1].t0) throw InputError("signature: stroke onsets must be nondecreasing");
    }
}

}  // namespace airsig
