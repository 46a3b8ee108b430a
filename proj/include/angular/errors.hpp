#pragma once

#include <stdexcept>
#include <string>

namespace angular {

// Base class for all library errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DimensionMismatch : Error { using Error::Error; };
struct RankDeficient : Error { using Error::Error; };
struct SingularMatrix : Error { using Error::Error; };
struct OutOfRange : Error { using Error::Error; };
struct DegenerateWindow : Error { using Error::Error; };
struct RateAmbiguous : Error { using Error::Error; };
struct NotSupported : Error { using Error::Error; };
struct RationalityUndecided : Error { using Error::Error; };
struct NewtonDiverged : Error { using Error::Error; };
struct NonIntegralStepCount : Error { using Error::Error; };
struct DegenerateStep : Error { using Error::Error; };
struct EmptySet : Error { using Error::Error; };

}  // namespace angular
