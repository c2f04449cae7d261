#pragma once

// Communities matching the Day-78 and Day-198 reference aggregates. Per-house
// loads are unknown, so excess and deficit are spread over the listed houses
// in proportion to their storage capacity.

#include <array>
#include <vector>

#include <fmt/format.h>

#include "storshare/community.hpp"

namespace storshare::support {

/// Storage capacity (kWh) of houses 1..80.
inline constexpr std::array<double, 80> kCaseStudyCapacities{
    20.3, 28.8, 42.7, 44.0, 18.2, 24.9, 28.4, 45.4, 29.9, 40.1,
    30.5, 15.5, 17.6, 52.0, 42.0, 48.9, 18.9, 17.5, 29.7, 27.9,
    23.2, 28.1, 24.1, 42.8, 27.6, 35.2, 48.4, 42.1, 59.9, 22.5,
    50.2, 24.5, 35.0, 98.6, 28.6, 44.2, 25.8, 16.5, 30.1, 19.5,
    71.4, 48.5, 23.0, 70.5, 45.1, 29.9, 28.7, 20.2, 29.9, 14.3,
    28.2, 35.7, 34.9, 44.0, 48.3, 13.2, 23.8, 41.7, 28.4, 19.9,
    25.4, 17.2, 38.6, 44.0, 55.1, 30.5, 40.3, 28.4, 29.9, 25.2,
    33.2, 42.5, 50.0, 50.2, 45.1, 44.1, 24.5, 50.2, 40.2, 38.6,
};

/// Houses (1-based) whose peak consumption exceeded their capacity.
inline const std::vector<int> kDay78DeficitHouses{1, 5, 13, 18, 23, 38, 61, 62};
inline const std::vector<int> kDay198DeficitHouses{1,  2,  5,  6,  7,  12, 15, 17, 18, 19, 20, 22, 23,
                                             25, 30, 35, 37, 38, 39, 40, 44, 46, 47, 48, 50, 51,
                                             56, 57, 58, 59, 60, 61, 62, 66, 68, 70, 75, 76, 77};

inline constexpr double kDay78TotalExcess = 1570.05;
inline constexpr double kDay78TotalDeficit = 49.77;
inline constexpr double kDay198TotalExcess = 564.60;
inline constexpr double kDay198TotalDeficit = 710.30;

inline HouseholdId case_study_id(int house) { return HouseholdId{fmt::format("house{:02d}", house)}; }

inline CommunityDay case_study_day(const std::vector<int>& deficit_houses, double total_excess, double total_deficit)
{
    std::array<bool, 80> short_of_storage{};
    for (int h : deficit_houses) short_of_storage[static_cast<std::size_t>(h - 1)] = true;
    double sellers_capacity = 0.0;
    double buyers_capacity = 0.0;
    for (std::size_t i = 0; i < 80; ++i) {
        (short_of_storage[i] ? buyers_capacity : sellers_capacity) += kCaseStudyCapacities[i];
    }

    std::vector<HouseholdDay> hs;
    for (std::size_t i = 0; i < 80; ++i) {
        const double b = kCaseStudyCapacities[i];
        const double x = short_of_storage[i] ? b + total_deficit * (b / buyers_capacity)
                                             : b - total_excess * (b / sellers_capacity);
        const double lambda_b = 0.067 + 0.001 * static_cast<double>(i % 32);
        hs.push_back({case_study_id(static_cast<int>(i) + 1), x, 0.5 * x + 3.0, b, lambda_b});
    }
    return CommunityDay(std::move(hs));
}

inline CommunityDay day78() { return case_study_day(kDay78DeficitHouses, kDay78TotalExcess, kDay78TotalDeficit); }
inline CommunityDay day198() { return case_study_day(kDay198DeficitHouses, kDay198TotalExcess, kDay198TotalDeficit); }

}  // namespace storshare::support
