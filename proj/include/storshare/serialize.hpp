#pragma once

#include <cmath>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "storshare/game.hpp"
#include "storshare/loads.hpp"
#include "storshare/settlement.hpp"
#include "storshare/simulation.hpp"
#include "storshare/tariff.hpp"

namespace storshare {

/// Floating outputs carry six decimal places.
[[nodiscard]] inline double six_places(double v) noexcept
{
    return std::isfinite(v) ? std::round(v * 1e6) / 1e6 : v;
}

namespace detail {

inline nlohmann::json ids_json(const std::vector<HouseholdId>& ids)
{
    nlohmann::json out = nlohmann::json::array();
    for (const auto& id : ids) out.push_back(id.value);
    return out;
}

inline nlohmann::json core_violation_json(const CoreViolation& v)
{
    return {{"members", ids_json(v.members)},
            {"allocated", six_places(v.allocated)},
            {"cost", six_places(v.cost)},
            {"excess", six_places(v.excess())},
            {"expected_gap", six_places(v.expected_gap)}};
}

}  // namespace detail

[[nodiscard]] inline nlohmann::json to_json(const Allocation& a)
{
    nlohmann::json shares = nlohmann::json::object();
    for (const auto& [id, xi] : a.shares) shares[id.value] = six_places(xi);
    return {{"regime", to_string(a.regime)}, {"grand_cost", six_places(a.grand_cost)}, {"shares", shares}};
}

[[nodiscard]] inline nlohmann::json to_json(const PropertyReport& r)
{
    return {{"property", r.property}, {"checks", r.checks}, {"ok", r.ok()}, {"failures", r.failures}};
}

[[nodiscard]] inline nlohmann::json to_json(const SubadditivityReport& r)
{
    nlohmann::json cases = nlohmann::json::object();
    for (std::size_t i = 0; i < r.case_counts.size(); ++i) {
        cases[std::string(to_string(static_cast<PairCase>(i)))] = r.case_counts[i];
    }
    nlohmann::json violations = nlohmann::json::array();
    for (const auto& v : r.violations) {
        violations.push_back({{"s", detail::ids_json(v.s_members)},
                              {"t", detail::ids_json(v.t_members)},
                              {"case", to_string(v.pair_case)},
                              {"cost_s", six_places(v.cost_s)},
                              {"cost_t", six_places(v.cost_t)},
                              {"cost_union", six_places(v.cost_union)}});
    }
    return {{"property", "J(S u T) <= J(S) + J(T)"},
            {"trials", r.trials},
            {"ok", r.ok()},
            {"case_counts", cases},
            {"max_excess", six_places(r.max_excess)},
            {"violations", violations}};
}

[[nodiscard]] inline nlohmann::json to_json(const CoreReport& r)
{
    nlohmann::json violations = nlohmann::json::array();
    for (const auto& v : r.violations) violations.push_back(detail::core_violation_json(v));
    nlohmann::json mismatches = nlohmann::json::array();
    for (const auto& v : r.gap_mismatches) mismatches.push_back(detail::core_violation_json(v));
    return {{"description", r.description},
            {"sampled", r.sampled},
            {"num_coalitions_checked", r.num_coalitions_checked},
            {"ok", r.ok()},
            {"max_excess", six_places(r.max_excess)},
            {"max_gap_error", r.max_gap_error},
            {"budget_imbalance", r.budget_imbalance},
            {"violations", violations},
            {"gap_mismatches", mismatches}};
}

[[nodiscard]] inline nlohmann::json to_json(const TradeLedger& l)
{
    nlohmann::json positions = nlohmann::json::array();
    for (const auto& p : l.positions) {
        positions.push_back({{"household_id", p.id.value},
                             {"E", six_places(p.excess_kwh)},
                             {"D", six_places(p.deficit_kwh)},
                             {"p2p_kwh", six_places(p.p2p_kwh)},
                             {"grid_kwh", six_places(p.grid_kwh)},
                             {"g", six_places(p.grid_price)},
                             {"G", six_places(p.savings)}});
    }
    return {{"date", format_date(l.date)},
            {"regime", to_string(l.regime)},
            {"p", six_places(l.p2p_price)},
            {"total_excess_kwh", six_places(l.total_excess_kwh)},
            {"total_deficit_kwh", six_places(l.total_deficit_kwh)},
            {"total_p2p_kwh", six_places(l.total_p2p_kwh)},
            {"total_grid_kwh", six_places(l.total_grid_kwh)},
            {"total_savings", six_places(l.total_savings)},
            {"positions", positions}};
}

[[nodiscard]] inline nlohmann::json to_json(const AnnualReport& r)
{
    const auto& c = r.community;
    nlohmann::json summary = {
        {"total_cost_without_storage", six_places(c.cost_without_storage)},
        {"total_cost_with_storage", six_places(c.cost_with_storage)},
        {"total_cost_with_sharing", six_places(c.cost_with_sharing)},
        {"total_cost_savings", six_places(c.savings)},
        {"percent_savings", six_places(c.percent_savings)},
    };
    nlohmann::json households = nlohmann::json::array();
    for (const auto& h : r.households) {
        households.push_back({{"household_id", h.id.value},
                              {"cost_without_storage", six_places(h.cost_without_storage)},
                              {"cost_with_storage", six_places(h.cost_with_storage)},
                              {"cost_with_sharing", six_places(h.cost_with_sharing)},
                              {"savings", six_places(h.savings)},
                              {"percent_savings", six_places(h.percent_savings)}});
    }
    nlohmann::json days = nlohmann::json::array();
    for (const auto& d : r.days) {
        days.push_back({{"date", format_date(d.date)},
                        {"regime", to_string(d.regime)},
                        {"X_N", six_places(d.peak_kwh)},
                        {"B_N", six_places(d.capacity_kwh)},
                        {"sum_E", six_places(d.excess_kwh)},
                        {"sum_D", six_places(d.deficit_kwh)},
                        {"p2p_kwh", six_places(d.p2p_kwh)},
                        {"grid_kwh", six_places(d.grid_kwh)},
                        {"sum_G", six_places(d.savings)},
                        {"grand_cost", six_places(d.grand_cost)},
                        {"coalitions_checked", d.coalitions_checked},
                        {"core_sampled", d.core_sampled}});
    }
    nlohmann::json ledgers = nlohmann::json::array();
    for (const auto& l : r.ledgers) ledgers.push_back(to_json(l));
    return {{"tariff", to_json(r.tariff)},
            {"peak_window", {{"start", r.window.start}, {"end", r.window.end}}},
            {"summary", summary},
            {"households", households},
            {"days", days},
            {"ledgers", ledgers},
            {"filled_hours", r.filled_hours},
            {"invariant_failures", r.invariant_failures}};
}

}  // namespace storshare
