#pragma once
#include <stdexcept>
#include <string>

namespace ftkit {

struct Error : std::runtime_error {
    explicit Error(const std::string& m) : std::runtime_error(m) {}
};

struct NonPositiveDimension : Error { using Error::Error; };
struct DegenerateSection    : Error { using Error::Error; };
struct SensorOffBeam        : Error { using Error::Error; };
struct SingularGeometry     : Error { using Error::Error; };
struct OutOfRange           : Error { using Error::Error; };
struct RankDeficient        : Error { using Error::Error; };
struct Underdetermined      : Error { using Error::Error; };
struct IllConditioned       : Error { using Error::Error; };
struct DeficientExcitation  : Error { using Error::Error; };
struct LengthMismatch       : Error { using Error::Error; };
struct NoFeasiblePoint      : Error { using Error::Error; };
struct ConfigError          : Error { using Error::Error; };

} // namespace ftkit
