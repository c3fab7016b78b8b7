#pragma once

#include <stdexcept>
#include <string>

namespace pdp {

struct error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

#define PDP_DEFINE_ERROR(name)                         \
    struct name : error {                              \
        explicit name(const std::string& what)         \
            : error(std::string(#name ": ") + what) {} \
    }

PDP_DEFINE_ERROR(MalformedRotation);
PDP_DEFINE_ERROR(NonPlanarRotation);
PDP_DEFINE_ERROR(ParseError);
PDP_DEFINE_ERROR(NotATree);
PDP_DEFINE_ERROR(UnknownLetter);
PDP_DEFINE_ERROR(TerminalsDisconnected);
PDP_DEFINE_ERROR(NonCompactWitness);
PDP_DEFINE_ERROR(NoSeparatorNeeded);
PDP_DEFINE_ERROR(EmptyRing);
PDP_DEFINE_ERROR(Unreachable);
PDP_DEFINE_ERROR(EndpointOffInterface);
PDP_DEFINE_ERROR(SharedEdge);
PDP_DEFINE_ERROR(NotApplicable);
PDP_DEFINE_ERROR(ZeroCopyUsed);
PDP_DEFINE_ERROR(PreconditionViolation);
PDP_DEFINE_ERROR(MultiplicityTooHigh);
PDP_DEFINE_ERROR(NotPushed);
PDP_DEFINE_ERROR(NonterminatingTrace);
PDP_DEFINE_ERROR(UnmatchedTerminals);
PDP_DEFINE_ERROR(TooLarge);
PDP_DEFINE_ERROR(InvariantViolation);

#undef PDP_DEFINE_ERROR

}  // namespace pdp
