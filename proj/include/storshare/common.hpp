#pragma once

#include <algorithm>
#include <cmath>
#include <compare>
#include <cstdint>
#include <ostream>
#include <stdexcept>
#include <string>
#include <utility>

namespace storshare {

/// Raised when input data (files, ids, shapes) cannot be used.
class DataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Raised when a configuration value (tariff, window, caps) is rejected.
class ValidationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Household identifier. Ordering is lexicographic on the raw string and
/// defines the canonical summation order everywhere in the library.
struct HouseholdId {
    std::string value;

    HouseholdId() = default;
    explicit HouseholdId(std::string v) : value(std::move(v)) {}

    auto operator<=>(const HouseholdId&) const = default;
    bool operator==(const HouseholdId&) const = default;
};

inline std::ostream& operator<<(std::ostream& os, const HouseholdId& id)
{
    return os << id.value;
}

/// Bit i set means the i-th household (canonical order) is a member.
using CoalitionMask = std::uint64_t;

inline constexpr std::size_t kMaxMaskHouseholds = 64;

/// (x)^+ = max{x, 0}
[[nodiscard]] constexpr double positive_part(double x) noexcept
{
    return x > 0.0 ? x : 0.0;
}

/// Mixed absolute/relative tolerance used by every game inequality.
struct Tolerance {
    double relative = 1e-9;
    double absolute = 1e-12;

    [[nodiscard]] double slack(double a, double b) const noexcept
    {
        return std::max(absolute, relative * std::max(std::abs(a), std::abs(b)));
    }

    /// a <= b up to tolerance
    [[nodiscard]] bool leq(double a, double b) const noexcept { return a <= b + slack(a, b); }

    [[nodiscard]] bool equal(double a, double b) const noexcept
    {
        return std::abs(a - b) <= slack(a, b);
    }
};

}  // namespace storshare

template <>
struct std::hash<storshare::HouseholdId> {
    std::size_t operator()(const storshare::HouseholdId& id) const noexcept
    {
        return std::hash<std::string>{}(id.value);
    }
};
