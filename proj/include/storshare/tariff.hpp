#pragma once

#include <array>
#include <cmath>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "storshare/common.hpp"

namespace storshare {

/// Two-period utility tariff, prices in currency units per kWh (0.54, not 54).
struct Tariff {
    double lambda_h = 0.0;  ///< peak buy price
    double lambda_l = 0.0;  ///< off-peak buy price
    double mu_h = 0.0;      ///< peak sell price
    double mu_l = 0.0;      ///< off-peak sell price; validated, used by no cost formula

    bool operator==(const Tariff&) const = default;

    /// The peak buy/sell spread; every sharing saving is this times some kWh.
    [[nodiscard]] double peak_spread() const noexcept { return lambda_h - mu_h; }
};

enum class TariffViolation {
    NonFinitePrice,
    NegativePrice,
    PeakBuyBelowPeakSell,       // lambda_h >= mu_h
    OffPeakBuyBelowOffPeakSell, // lambda_l >= mu_l
    PeakSellBelowOffPeakBuy,    // mu_h >= lambda_l
};

[[nodiscard]] constexpr std::string_view to_string(TariffViolation v) noexcept
{
    switch (v) {
    case TariffViolation::NonFinitePrice: return "non_finite_price";
    case TariffViolation::NegativePrice: return "negative_price";
    case TariffViolation::PeakBuyBelowPeakSell: return "lambda_h_ge_mu_h";
    case TariffViolation::OffPeakBuyBelowOffPeakSell: return "lambda_l_ge_mu_l";
    case TariffViolation::PeakSellBelowOffPeakBuy: return "mu_h_ge_lambda_l";
    }
    return "unknown";
}

struct TariffIssue {
    TariffViolation code;
    std::string detail;
};

struct ValidationResult {
    std::vector<TariffIssue> issues;

    [[nodiscard]] bool ok() const noexcept { return issues.empty(); }

    [[nodiscard]] bool has(TariffViolation code) const noexcept
    {
        for (const auto& issue : issues) {
            if (issue.code == code) return true;
        }
        return false;
    }
};

/// Checks non-negativity and the three ordering conditions. Equality is
/// allowed everywhere. Ordering is only checked once every price is finite.
[[nodiscard]] inline ValidationResult validate_tariff(const Tariff& t)
{
    ValidationResult result;
    const std::array<std::pair<std::string_view, double>, 4> prices{{
        {"lambda_h", t.lambda_h},
        {"lambda_l", t.lambda_l},
        {"mu_h", t.mu_h},
        {"mu_l", t.mu_l},
    }};

    bool all_finite = true;
    for (const auto& [name, value] : prices) {
        if (!std::isfinite(value)) {
            all_finite = false;
            result.issues.push_back({TariffViolation::NonFinitePrice, std::string(name) + " is not finite"});
        } else if (value < 0.0) {
            result.issues.push_back({TariffViolation::NegativePrice, std::string(name) + " is negative"});
        }
    }
    if (!all_finite) return result;

    if (!(t.lambda_h >= t.mu_h)) {
        result.issues.push_back({TariffViolation::PeakBuyBelowPeakSell, "lambda_h < mu_h"});
    }
    if (!(t.lambda_l >= t.mu_l)) {
        result.issues.push_back({TariffViolation::OffPeakBuyBelowOffPeakSell, "lambda_l < mu_l"});
    }
    if (!(t.mu_h >= t.lambda_l)) {
        result.issues.push_back({TariffViolation::PeakSellBelowOffPeakBuy, "mu_h < lambda_l"});
    }
    return result;
}

/// Throws ValidationError listing every violated condition.
inline void require_valid(const Tariff& t)
{
    const auto result = validate_tariff(t);
    if (result.ok()) return;
    std::string msg = "invalid tariff:";
    for (const auto& issue : result.issues) {
        msg += " [";
        msg += to_string(issue.code);
        msg += ": " + issue.detail + "]";
    }
    throw ValidationError(msg);
}

/// Parses an object with exactly the keys lambda_h, lambda_l, mu_h, mu_l.
/// Structural problems raise DataError; price values are not validated here.
[[nodiscard]] inline Tariff tariff_from_json(const nlohmann::json& j)
{
    static constexpr std::array<std::string_view, 4> keys{"lambda_h", "lambda_l", "mu_h", "mu_l"};
    if (!j.is_object()) throw DataError("tariff: expected a JSON object");
    for (const auto& [key, value] : j.items()) {
        if (std::find(keys.begin(), keys.end(), key) == keys.end()) {
            throw DataError("tariff: unknown key '" + key + "'");
        }
        if (!value.is_number()) throw DataError("tariff: '" + key + "' must be a number");
    }
    for (const auto key : keys) {
        if (!j.contains(std::string(key))) throw DataError("tariff: missing key '" + std::string(key) + "'");
    }
    return Tariff{
        j.at("lambda_h").get<double>(),
        j.at("lambda_l").get<double>(),
        j.at("mu_h").get<double>(),
        j.at("mu_l").get<double>(),
    };
}

[[nodiscard]] inline nlohmann::json to_json(const Tariff& t)
{
    return {{"lambda_h", t.lambda_h}, {"lambda_l", t.lambda_l}, {"mu_h", t.mu_h}, {"mu_l", t.mu_l}};
}

[[nodiscard]] inline nlohmann::json to_json(const ValidationResult& r)
{
    nlohmann::json issues = nlohmann::json::array();
    for (const auto& issue : r.issues) {
        issues.push_back({{"code", to_string(issue.code)}, {"detail", issue.detail}});
    }
    return {{"ok", r.ok()}, {"violations", issues}};
}

/// Reference tariff: 54/22 buy, 30/13 sell (cents).
inline constexpr Tariff kCaseStudyTariff{0.54, 0.22, 0.30, 0.13};

}  // namespace storshare
