#pragma once

#include <array>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "storshare/loads.hpp"

namespace storshare {

struct SyntheticConfig {
    std::size_t households = 80;
    std::size_t days = 365;
    std::uint64_t seed = 42;
    DayStamp first_day = DayStamp{std::chrono::year{2016} / std::chrono::January / 1};
    PeakWindow window{};
};

struct SyntheticData {
    std::vector<HourlyLoadRecord> records;  ///< household-major, then time
    std::vector<StorageSpec> storage;
};

/// Consumption tier: range of a household's mean daily peak-period energy.
struct ConsumptionTier {
    const char* name;
    int share;  ///< households per 80
    double min_peak_kwh;
    double max_peak_kwh;
};

/// Low, moderately low, moderate, high, very high. Shares sum to 80.
inline constexpr std::array<ConsumptionTier, 5> kConsumptionTiers{{
    {"low", 18, 9.5, 16.0},
    {"moderately_low", 18, 17.0, 21.0},
    {"moderate", 38, 22.0, 34.0},
    {"high", 4, 38.0, 42.0},
    {"very_high", 2, 66.0, 72.0},
}};

inline constexpr double kMinCapacityKwh = 13.0;
inline constexpr double kMaxCapacityKwh = 99.0;
inline constexpr double kMinLambdaB = 0.067;
inline constexpr double kMaxLambdaB = 0.098;

namespace detail {

// Uniform [0, 1) from the top 53 bits; unlike the std distributions this is
// identical across standard library implementations.
class UnitSource {
public:
    explicit UnitSource(std::uint64_t seed) : engine_(seed) {}

    double operator()() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * (*this)(); }

private:
    std::mt19937_64 engine_;
};

// Rounds to 1/scale; dividing an integral value gives the double nearest to
// the decimal, so values survive a fixed-precision text round trip.
inline double round_to(double v, double scale) { return std::round(v * scale) / scale; }

inline const ConsumptionTier& tier_for(std::size_t index, std::size_t count)
{
    const double position = (static_cast<double>(index) + 0.5) * 80.0 / static_cast<double>(count);
    int cumulative = 0;
    for (const auto& tier : kConsumptionTiers) {
        cumulative += tier.share;
        if (position < cumulative) return tier;
    }
    return kConsumptionTiers.back();
}

}  // namespace detail

/// Deterministic synthetic community: hourly loads for every household and
/// day, plus storage capacity and amortized price per household.
[[nodiscard]] inline SyntheticData generate_synthetic(const SyntheticConfig& config)
{
    if (config.households == 0 || config.days == 0) {
        throw ValidationError("synthetic data needs at least one household and one day");
    }
    validate(config.window);

    detail::UnitSource rng(config.seed);
    SyntheticData data;
    data.records.reserve(config.households * config.days * 24);
    data.storage.reserve(config.households);
    const int width = std::max(3, static_cast<int>(std::to_string(config.households).size()));

    for (std::size_t k = 0; k < config.households; ++k) {
        const HouseholdId id{fmt::format("H{:0{}d}", k + 1, width)};
        const auto& tier = detail::tier_for(k, config.households);
        const double mean_peak = rng.uniform(tier.min_peak_kwh, tier.max_peak_kwh);
        const double offpeak_ratio = rng.uniform(0.35, 0.75);

        // Hourly shape: flat base plus one bump somewhere in the peak window.
        const double bump_center = rng.uniform(config.window.start + 3.0, config.window.end - 1.0);
        const double bump_height = rng.uniform(0.5, 3.0);
        const double bump_width = rng.uniform(1.5, 4.0);
        std::array<double, 24> weight{};
        double peak_weight = 0.0;
        double offpeak_weight = 0.0;
        for (int h = 0; h < 24; ++h) {
            const double z = (h - bump_center) / bump_width;
            const auto i = static_cast<std::size_t>(h);
            if (config.window.contains(h)) {
                weight[i] = 1.0 + bump_height * std::exp(-0.5 * z * z);
                peak_weight += weight[i];
            } else {
                weight[i] = (h < config.window.start && h >= 1 && h <= 5) ? 0.6 : 1.0;
                offpeak_weight += weight[i];
            }
        }
        for (int h = 0; h < 24; ++h) {
            weight[static_cast<std::size_t>(h)] /= config.window.contains(h) ? peak_weight : offpeak_weight;
        }

        const double capacity = std::clamp(detail::round_to(mean_peak * rng.uniform(0.55, 1.9), 10.0),
                                           kMinCapacityKwh, kMaxCapacityKwh);
        const double lambda_b = detail::round_to(rng.uniform(kMinLambdaB, kMaxLambdaB), 1e4);
        data.storage.push_back({id, capacity, std::clamp(lambda_b, kMinLambdaB, kMaxLambdaB)});

        for (std::size_t d = 0; d < config.days; ++d) {
            const DayStamp day = config.first_day + std::chrono::days{static_cast<int>(d)};
            const std::chrono::year_month_day ymd{day};
            const auto day_of_year = (day - DayStamp{ymd.year() / std::chrono::January / 1}).count();
            // Summer-peaking seasonal factor, mean ~1 over a year.
            const double season = 1.0 + 0.3 * std::cos(2.0 * std::numbers::pi * (day_of_year - 200) / 365.25);
            const double peak_total = mean_peak * season * rng.uniform(0.7, 1.3);
            const double offpeak_total = mean_peak * offpeak_ratio * season * rng.uniform(0.7, 1.3);
            for (int h = 0; h < 24; ++h) {
                const double total = config.window.contains(h) ? peak_total : offpeak_total;
                const double kwh = total * weight[static_cast<std::size_t>(h)] * rng.uniform(0.85, 1.15);
                data.records.push_back({id, HourStamp{day} + std::chrono::hours{h}, detail::round_to(kwh, 1e3)});
            }
        }
    }
    return data;
}

}  // namespace storshare
