#pragma once

#include <chrono>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "storshare/community.hpp"
#include "storshare/cost.hpp"
#include "storshare/game.hpp"
#include "storshare/loads.hpp"
#include "storshare/settlement.hpp"
#include "storshare/tariff.hpp"

namespace storshare {

struct SimulationConfig {
    Tariff tariff = kCaseStudyTariff;
    PeakWindow window{};
    std::vector<StorageSpec> households;
    std::optional<DayStamp> first_day;  ///< defaults to the earliest day in the loads
    std::optional<DayStamp> last_day;   ///< inclusive; defaults to the latest day
    std::size_t enumeration_cap = 20;   ///< exhaustive core check up to this many households
    std::size_t core_samples = 256;     ///< random coalitions per day above the cap
    std::uint64_t seed = 42;
    FillPolicy fill = FillPolicy::Reject;
    Tolerance tol{};
};

/// Annual per-household totals.
struct HouseholdTotals {
    HouseholdId id;
    double cost_without_storage = 0.0;  ///< sum of ToU-only costs
    double cost_with_storage = 0.0;     ///< sum of J(i)
    double cost_with_sharing = 0.0;     ///< sum of xi_i
    double savings = 0.0;               ///< with_storage - with_sharing
    double percent_savings = 0.0;       ///< savings / with_storage * 100
};

struct CommunityTotals {
    double cost_without_storage = 0.0;
    double cost_with_storage = 0.0;
    double cost_with_sharing = 0.0;
    double savings = 0.0;
    double percent_savings = 0.0;
    double grand_cost = 0.0;  ///< sum over days of J(N)
    double capital = 0.0;     ///< sum over days of amortized storage cost
};

struct DaySummary {
    DayStamp date;
    Regime regime = Regime::Deficit;
    double peak_kwh = 0.0;      ///< X_N
    double capacity_kwh = 0.0;  ///< B_N
    double excess_kwh = 0.0;
    double deficit_kwh = 0.0;
    double p2p_kwh = 0.0;
    double grid_kwh = 0.0;
    double savings = 0.0;       ///< sum G_i
    double grand_cost = 0.0;    ///< J(N)
    double standalone_cost = 0.0;  ///< sum J(i)
    std::size_t coalitions_checked = 0;
    bool core_sampled = false;
};

struct AnnualReport {
    Tariff tariff;
    PeakWindow window;
    std::vector<HouseholdTotals> households;  ///< ascending id
    CommunityTotals community;
    std::vector<DaySummary> days;
    std::vector<TradeLedger> ledgers;
    std::size_t filled_hours = 0;
    std::vector<std::string> invariant_failures;

    [[nodiscard]] bool ok() const noexcept { return invariant_failures.empty(); }
};

namespace detail {

inline double percent_of(double part, double whole) noexcept
{
    return whole != 0.0 ? part / whole * 100.0 : 0.0;
}

/// Every per-day identity the model guarantees; failures are recorded, not thrown.
inline void check_day(const CommunityDay& day, const SimulationConfig& cfg, const Allocation& alloc,
                      const std::map<HouseholdId, double>& costs, const TradeLedger& ledger, DaySummary& summary,
                      std::vector<std::string>& failures)
{
    const Tolerance tol = cfg.tol;
    const std::string tag = format_date(summary.date);
    const auto fail = [&](const std::string& what) { failures.push_back(tag + ": " + what); };

    double xi_sum = 0.0;
    for (const auto& [id, xi] : alloc.shares) {
        xi_sum += xi;
        if (!tol.leq(xi, costs.at(id))) fail("individual rationality fails for " + id.value);
    }
    if (!tol.equal(xi_sum, alloc.grand_cost)) fail("budget imbalance");

    for (const auto& f : savings_consistency(ledger, alloc, costs, tol).failures) fail(f);

    const double gap = summary.standalone_cost - summary.grand_cost;
    if (std::abs(ledger.total_savings - gap) > tol.slack(summary.standalone_cost, summary.grand_cost)) {
        fail(fmt::format("ledger savings {} differ from sum J(i) - J(N) = {}", ledger.total_savings, gap));
    }
    if (!tol.equal(ledger.p2p_purchases_kwh(), ledger.p2p_sales_kwh())) fail("P2P market does not clear");

    const CoreReport core = day.size() <= cfg.enumeration_cap
                                ? check_core(day, cfg.tariff, {cfg.enumeration_cap, tol})
                                : check_core_sampled(day, cfg.tariff, cfg.core_samples,
                                                     cfg.seed ^ static_cast<std::uint64_t>(summary.date.time_since_epoch().count()),
                                                     tol);
    summary.coalitions_checked = core.num_coalitions_checked;
    summary.core_sampled = core.sampled;
    if (!core.violations.empty()) fail(fmt::format("{} core violations", core.violations.size()));
    if (!core.gap_mismatches.empty()) fail(fmt::format("{} core gap mismatches", core.gap_mismatches.size()));
}

}  // namespace detail

/// Builds the community for one calendar day from indexed loads.
[[nodiscard]] inline CommunityDay build_day(const LoadIndex& loads, const SimulationConfig& cfg, DayStamp day,
                                            std::size_t* filled_hours = nullptr)
{
    std::vector<HouseholdDay> households;
    households.reserve(cfg.households.size());
    for (const auto& spec : cfg.households) {
        const auto hh = loads.find(spec.id);
        if (hh == loads.end()) throw DataError("no load data for household " + spec.id.value);
        const auto d = hh->second.find(day);
        const DayProfile profile = d == hh->second.end() ? DayProfile{} : d->second;
        DaySplit split;
        try {
            split = split_day(profile, cfg.window, cfg.fill);
        } catch (const DataError& e) {
            throw DataError(fmt::format("household {} on {}: {}", spec.id.value, format_date(day), e.what()));
        }
        if (filled_hours) *filled_hours += static_cast<std::size_t>(split.filled_hours);
        households.push_back({spec.id, split.peak_kwh, split.offpeak_kwh, spec.capacity_kwh, spec.lambda_b});
    }
    return CommunityDay(std::chrono::year_month_day{day}, std::move(households));
}

/// Runs every day in the configured range: ToU-only cost, net-metered cost,
/// core allocation and P2P settlement per household, then annual totals.
[[nodiscard]] inline AnnualReport simulate(const LoadIndex& loads, const SimulationConfig& cfg)
{
    require_valid(cfg.tariff);
    validate(cfg.window);
    if (cfg.households.empty()) throw DataError("simulation needs at least one household");

    auto first = DayStamp::max();
    auto last = DayStamp::min();
    for (const auto& spec : cfg.households) {
        const auto hh = loads.find(spec.id);
        if (hh == loads.end() || hh->second.empty()) throw DataError("no load data for household " + spec.id.value);
        first = std::min(first, hh->second.begin()->first);
        last = std::max(last, hh->second.rbegin()->first);
    }
    if (cfg.first_day) first = *cfg.first_day;
    if (cfg.last_day) last = *cfg.last_day;
    if (last < first) throw ValidationError("empty date range");

    AnnualReport report;
    report.tariff = cfg.tariff;
    report.window = cfg.window;
    std::map<HouseholdId, HouseholdTotals> totals;
    for (const auto& spec : cfg.households) totals[spec.id].id = spec.id;

    for (auto date = first; date <= last; date += std::chrono::days{1}) {
        const CommunityDay day = build_day(loads, cfg, date, &report.filled_hours);
        const Allocation alloc = allocate(day, cfg.tariff);
        const auto costs = standalone_costs(day, cfg.tariff);
        TradeLedger ledger = settle_day(day, cfg.tariff);
        const Aggregates grand = aggregate_all(day);

        DaySummary summary;
        summary.date = date;
        summary.regime = alloc.regime;
        summary.peak_kwh = grand.peak_kwh;
        summary.capacity_kwh = grand.capacity_kwh;
        summary.excess_kwh = ledger.total_excess_kwh;
        summary.deficit_kwh = ledger.total_deficit_kwh;
        summary.p2p_kwh = ledger.total_p2p_kwh;
        summary.grid_kwh = ledger.total_grid_kwh;
        summary.savings = ledger.total_savings;
        summary.grand_cost = alloc.grand_cost;
        for (const auto& h : day.households()) {
            auto& t = totals[h.id];
            const double j = costs.at(h.id);
            t.cost_without_storage += cost_no_storage(h, cfg.tariff).total;
            t.cost_with_storage += j;
            t.cost_with_sharing += alloc.shares.at(h.id);
            summary.standalone_cost += j;
            report.community.capital += h.capital();
        }
        detail::check_day(day, cfg, alloc, costs, ledger, summary, report.invariant_failures);

        report.community.grand_cost += alloc.grand_cost;
        report.days.push_back(summary);
        report.ledgers.push_back(std::move(ledger));
    }

    auto& c = report.community;
    for (auto& [id, t] : totals) {
        t.savings = t.cost_with_storage - t.cost_with_sharing;
        t.percent_savings = detail::percent_of(t.savings, t.cost_with_storage);
        c.cost_without_storage += t.cost_without_storage;
        c.cost_with_storage += t.cost_with_storage;
        c.cost_with_sharing += t.cost_with_sharing;
        report.households.push_back(t);
    }
    c.savings = c.cost_with_storage - c.cost_with_sharing;
    c.percent_savings = detail::percent_of(c.savings, c.cost_with_storage);

    const Tolerance tol = cfg.tol;
    if (!tol.equal(c.cost_with_sharing, c.grand_cost)) {
        report.invariant_failures.push_back("annual budget imbalance: sum xi differs from sum J(N)");
    }
    if (!tol.leq(c.cost_with_sharing, c.cost_with_storage)) {
        report.invariant_failures.push_back("annual cost with sharing exceeds cost with storage");
    }
    if (!tol.leq(c.cost_with_storage, c.cost_without_storage + c.capital)) {
        report.invariant_failures.push_back("annual cost with storage exceeds ToU-only cost plus capital");
    }
    return report;
}

[[nodiscard]] inline AnnualReport simulate(const std::vector<HourlyLoadRecord>& records, const SimulationConfig& cfg)
{
    return simulate(index_loads(records), cfg);
}

}  // namespace storshare
