// common.hpp
// Shared error types and small numeric helpers.

#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <stdexcept>
#include <string>

namespace kstar {

// Enumeration/search budget exceeded. Distinct from a negative answer.
struct ResourceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A property that must hold (a verified bound, a certified witness) failed.
struct InvariantViolation : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Trial division suffices at desk scale (p < 2^31).
inline bool is_odd_prime(std::uint64_t p) {
    if (p < 3 || p % 2 == 0) return false;
    for (std::uint64_t d = 3; d * d <= p; d += 2)
        if (p % d == 0) return false;
    return true;
}

inline void require_odd_prime(std::uint64_t p, const char* field) {
    if (!is_odd_prime(p))
        throw std::invalid_argument(std::string(field) + ": " + std::to_string(p) +
                                    " is not an odd prime (need p >= 3)");
}

// base^exp, throwing instead of wrapping.
inline std::uint64_t checked_pow_u64(std::uint64_t base, std::uint64_t exp) {
    std::uint64_t r = 1;
    for (std::uint64_t i = 0; i < exp; ++i) {
        if (base != 0 && r > UINT64_MAX / base)
            throw std::overflow_error("checked_pow_u64: " + std::to_string(base) + "^" +
                                      std::to_string(exp) + " exceeds 64 bits");
        r *= base;
    }
    return r;
}

// Round to a fixed number of significant digits; reported values carry 12.
inline double round_sig(double x, int digits = 12) {
    if (!std::isfinite(x) || x == 0.0) return x;
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*e", digits - 1, x);
    return std::strtod(buf, nullptr);
}

}  // namespace kstar
