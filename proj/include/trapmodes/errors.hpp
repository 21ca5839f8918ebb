#pragma once

#include <stdexcept>
#include <string>

namespace trapmodes {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

#define TRAPMODES_ERROR(Name) \
    struct Name : Error {     \
        using Error::Error;   \
    }

TRAPMODES_ERROR(DomainError);
TRAPMODES_ERROR(OverflowError);
TRAPMODES_ERROR(ConvergenceError);
TRAPMODES_ERROR(SingularPoint);
TRAPMODES_ERROR(StagnationEncountered);
TRAPMODES_ERROR(SeedOffLevel);
TRAPMODES_ERROR(NotFound);
TRAPMODES_ERROR(InsufficientExtrema);
TRAPMODES_ERROR(OverlapUnresolvable);
TRAPMODES_ERROR(GeometryError);
TRAPMODES_ERROR(Infeasible);
TRAPMODES_ERROR(StabilityViolation);
TRAPMODES_ERROR(QuadratureError);
TRAPMODES_ERROR(SchemaError);

#undef TRAPMODES_ERROR

} // namespace trapmodes
