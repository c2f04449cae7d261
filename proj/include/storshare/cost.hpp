#pragma once

#include <algorithm>

#include "storshare/community.hpp"
#include "storshare/tariff.hpp"

namespace storshare {

/// Daily cost split into its additive parts. peak_energy is negative when
/// stored energy is sold back at the peak sell price.
struct CostBreakdown {
    double capital = 0.0;
    double peak_energy = 0.0;
    double offpeak_energy = 0.0;
    double total = 0.0;
};

namespace detail {

inline CostBreakdown make_breakdown(double capital, double peak, double offpeak) noexcept
{
    return {capital, peak, offpeak, capital + peak + offpeak};
}

// Net-metered cost of any (X, Y, B, capital) bundle; shared by the household
// and coalition forms so a singleton coalition is bit-identical to J(i).
inline CostBreakdown net_metered(double peak_kwh, double offpeak_kwh, double capacity_kwh, double capital,
                                 const Tariff& t) noexcept
{
    const double peak = t.lambda_h * positive_part(peak_kwh - capacity_kwh)
                        - t.mu_h * positive_part(capacity_kwh - peak_kwh);
    const double offpeak = t.lambda_l * (offpeak_kwh + capacity_kwh);
    return make_breakdown(capital, peak, offpeak);
}

}  // namespace detail

/// Household without storage, ToU only.
[[nodiscard]] inline CostBreakdown cost_no_storage(const HouseholdDay& h, const Tariff& t) noexcept
{
    return detail::make_breakdown(0.0, t.lambda_h * h.peak_kwh, t.lambda_l * h.offpeak_kwh);
}

/// Household with storage under ToU, capital ignored. Storage is charged
/// off-peak only up to what the peak period will consume.
[[nodiscard]] inline CostBreakdown cost_storage_no_capital(const HouseholdDay& h, const Tariff& t) noexcept
{
    return detail::make_breakdown(0.0, t.lambda_h * positive_part(h.peak_kwh - h.capacity_kwh),
                                  t.lambda_l * (h.offpeak_kwh + std::min(h.capacity_kwh, h.peak_kwh)));
}

/// As cost_storage_no_capital plus the amortized capital lambda_b * B.
[[nodiscard]] inline CostBreakdown cost_storage_with_capital(const HouseholdDay& h, const Tariff& t) noexcept
{
    return detail::make_breakdown(h.capital(), t.lambda_h * positive_part(h.peak_kwh - h.capacity_kwh),
                                  t.lambda_l * (h.offpeak_kwh + std::min(h.capacity_kwh, h.peak_kwh)));
}

/// Household cost J(i) under net metering and ToU. The full capacity is
/// charged off-peak; any surplus after the peak period is sold at mu_h.
[[nodiscard]] inline CostBreakdown cost_net_metering(const HouseholdDay& h, const Tariff& t) noexcept
{
    return detail::net_metered(h.peak_kwh, h.offpeak_kwh, h.capacity_kwh, h.capital(), t);
}

/// Coalition cost J(S) evaluated on pooled quantities.
[[nodiscard]] inline CostBreakdown coalition_cost(const Aggregates& s, const Tariff& t) noexcept
{
    return detail::net_metered(s.peak_kwh, s.offpeak_kwh, s.capacity_kwh, s.capital, t);
}

[[nodiscard]] inline CostBreakdown coalition_cost(const CoalitionView& v, const Tariff& t) noexcept
{
    return coalition_cost(v.totals, t);
}

/// J(N)
[[nodiscard]] inline CostBreakdown grand_coalition_cost(const CommunityDay& c, const Tariff& t)
{
    return coalition_cost(aggregate_all(c), t);
}

}  // namespace storshare
