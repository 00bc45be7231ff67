#pragma once

#include <stdexcept>
#include <string>

namespace cusplab {

/// Search-space cap exceeded (never a wrong answer; raise the cap or the
/// reduction quality instead).
struct CapacityError : std::runtime_error {
    explicit CapacityError(const std::string& what) : std::runtime_error(what) {}
};

/// A numeric decision could not be certified at the working precision.
struct PrecisionError : std::runtime_error {
    explicit PrecisionError(const std::string& what) : std::runtime_error(what) {}
};

/// A trajectory left the region it was asserted to stay in.
struct RegionExitError : std::runtime_error {
    double exit_time;
    RegionExitError(const std::string& what, double t)
        : std::runtime_error(what), exit_time(t) {}
};

}  // namespace cusplab
