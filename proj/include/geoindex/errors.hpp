#pragma once

#include <stdexcept>
#include <string>

namespace geoindex {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DimensionBudgetViolation : Error {
    using Error::Error;
};
struct InvalidAngle : Error {
    using Error::Error;
};
struct PrecisionExhausted : Error {
    using Error::Error;
};
struct MeanIndexNotPositive : Error {
    using Error::Error;
};
struct SearchExhausted : Error {
    using Error::Error;
};
struct ProfileMissing : Error {
    using Error::Error;
};
struct TupleNotVerified : Error {
    using Error::Error;
};
struct MalformedScript : Error {
    using Error::Error;
};
struct ParseError : Error {
    using Error::Error;
};
struct ValidationError : Error {
    using Error::Error;
};
struct UnsupportedManifold : Error {
    using Error::Error;
};
struct IoError : Error {
    using Error::Error;
};

}  // namespace geoindex
