#pragma once

#include <algorithm>
#include <cmath>
#include <chrono>
#include <map>
#include <string>
#include <vector>

#include "storshare/community.hpp"
#include "storshare/game.hpp"
#include "storshare/tariff.hpp"

namespace storshare {

struct SharingPrices {
    double p2p_price = 0.0;  ///< p
    std::map<HouseholdId, double> grid_price;  ///< g per household
    Regime regime = Regime::Deficit;
};

/// p is lambda_h when the community is short of storage, mu_h otherwise;
/// g is what a household would face trading alone with the utility.
[[nodiscard]] inline double p2p_price(Regime regime, const Tariff& t) noexcept
{
    return regime == Regime::Deficit ? t.lambda_h : t.mu_h;
}

[[nodiscard]] inline double grid_price(const HouseholdDay& h, const Tariff& t) noexcept
{
    return h.peak_kwh >= h.capacity_kwh ? t.lambda_h : t.mu_h;
}

[[nodiscard]] inline SharingPrices sharing_prices(const CommunityDay& c, const Tariff& t)
{
    SharingPrices prices;
    prices.regime = regime_of(aggregate_all(c));
    prices.p2p_price = p2p_price(prices.regime, t);
    for (const auto& h : c.households()) prices.grid_price.emplace(h.id, grid_price(h, t));
    return prices;
}

/// One household's routed peak-period position for a day.
struct TradePosition {
    HouseholdId id;
    double excess_kwh = 0.0;   ///< E = (B - X)^+
    double deficit_kwh = 0.0;  ///< D = (X - B)^+
    double p2p_kwh = 0.0;
    double grid_kwh = 0.0;
    double grid_price = 0.0;   ///< g
    double savings = 0.0;      ///< G

    [[nodiscard]] bool seller() const noexcept { return excess_kwh > 0.0; }
    [[nodiscard]] bool buyer() const noexcept { return deficit_kwh > 0.0; }
};

struct TradeLedger {
    std::chrono::year_month_day date{};
    Regime regime = Regime::Deficit;
    double p2p_price = 0.0;
    std::vector<TradePosition> positions;  ///< ascending id
    double total_excess_kwh = 0.0;
    double total_deficit_kwh = 0.0;
    double total_p2p_kwh = 0.0;   ///< min(sum E, sum D)
    double total_grid_kwh = 0.0;  ///< |sum E - sum D|, all flowing one way
    double total_savings = 0.0;

    /// kWh bought by deficit households from the P2P pool.
    [[nodiscard]] double p2p_purchases_kwh() const noexcept
    {
        double v = 0.0;
        for (const auto& pos : positions) {
            if (pos.buyer()) v += pos.p2p_kwh;
        }
        return v;
    }

    [[nodiscard]] double p2p_sales_kwh() const noexcept
    {
        double v = 0.0;
        for (const auto& pos : positions) {
            if (pos.seller()) v += pos.p2p_kwh;
        }
        return v;
    }

    [[nodiscard]] const TradePosition& position(const HouseholdId& id) const
    {
        for (const auto& pos : positions) {
            if (pos.id == id) return pos;
        }
        throw DataError("no trade position for household " + id.value);
    }
};

namespace detail {

// Share of `own` in a pool of `pool` when `volume` of it clears. The short
// side of the market clears fully, so it gets exactly its own quantity.
inline double pro_rata(double own, double pool, double volume) noexcept
{
    if (pool <= 0.0) return 0.0;
    if (volume >= pool) return own;
    return own * (volume / pool);
}

}  // namespace detail

/// Settles one day's peak period. Excess stored energy and unmet peak
/// demand are matched pro rata on the P2P network at price p; whatever is
/// left on the long side goes to the grid at the household's price g.
[[nodiscard]] inline TradeLedger settle_day(const CommunityDay& c, const Tariff& t)
{
    TradeLedger ledger;
    ledger.date = c.date();
    ledger.regime = regime_of(aggregate_all(c));
    ledger.p2p_price = p2p_price(ledger.regime, t);

    for (const auto& h : c.households()) {
        ledger.total_excess_kwh += h.excess_kwh();
        ledger.total_deficit_kwh += h.deficit_kwh();
    }
    const double volume = std::min(ledger.total_excess_kwh, ledger.total_deficit_kwh);

    ledger.positions.reserve(c.size());
    for (const auto& h : c.households()) {
        TradePosition pos;
        pos.id = h.id;
        pos.excess_kwh = h.excess_kwh();
        pos.deficit_kwh = h.deficit_kwh();
        pos.grid_price = grid_price(h, t);
        if (pos.excess_kwh > 0.0) {
            pos.p2p_kwh = detail::pro_rata(pos.excess_kwh, ledger.total_excess_kwh, volume);
            pos.grid_kwh = pos.excess_kwh - pos.p2p_kwh;
        } else if (pos.deficit_kwh > 0.0) {
            pos.p2p_kwh = detail::pro_rata(pos.deficit_kwh, ledger.total_deficit_kwh, volume);
            pos.grid_kwh = pos.deficit_kwh - pos.p2p_kwh;
        }
        pos.savings = sharing_saving(h, ledger.regime, t);
        ledger.total_grid_kwh += pos.grid_kwh;
        ledger.total_savings += pos.savings;
        ledger.positions.push_back(std::move(pos));
    }
    ledger.total_p2p_kwh = volume;
    return ledger;
}

/// Checks xi_i == J(i) - G_i for every household.
[[nodiscard]] inline PropertyReport savings_consistency(const TradeLedger& ledger, const Allocation& alloc,
                                                        const std::map<HouseholdId, double>& costs,
                                                        Tolerance tol = {})
{
    if (ledger.positions.size() != alloc.shares.size() || costs.size() != alloc.shares.size()) {
        throw DataError("savings_consistency: ledger, allocation and costs cover different households");
    }
    PropertyReport report;
    report.property = "xi_i == J(i) - G_i";
    for (const auto& pos : ledger.positions) {
        const auto share = alloc.shares.find(pos.id);
        const auto cost = costs.find(pos.id);
        if (share == alloc.shares.end() || cost == costs.end()) {
            throw DataError("savings_consistency: household " + pos.id.value + " missing from inputs");
        }
        ++report.checks;
        const double expected = cost->second - pos.savings;
        const double scale = std::max(std::abs(cost->second), std::abs(share->second));
        if (std::abs(share->second - expected) > tol.slack(scale, pos.savings)) {
            report.failures.push_back("household " + pos.id.value + ": xi=" + std::to_string(share->second) +
                                      " but J-G=" + std::to_string(expected));
        }
    }
    return report;
}

}  // namespace storshare
