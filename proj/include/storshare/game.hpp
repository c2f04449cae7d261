#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <limits>
#include <map>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "storshare/community.hpp"
#include "storshare/cost.hpp"
#include "storshare/tariff.hpp"

namespace storshare {

/// Community condition. The boundary X_N == B_N belongs to Deficit.
enum class Regime {
    Deficit,  ///< X_N >= B_N: pooled storage cannot cover pooled peak demand
    Surplus,  ///< X_N <  B_N: pooled storage exceeds pooled peak demand
};

[[nodiscard]] constexpr std::string_view to_string(Regime r) noexcept
{
    return r == Regime::Deficit ? "X_N>=B_N" : "X_N<B_N";
}

[[nodiscard]] inline Regime regime_of(const Aggregates& grand) noexcept
{
    return grand.in_deficit() ? Regime::Deficit : Regime::Surplus;
}

/// Per-household cost shares xi_i of the grand-coalition cost.
struct Allocation {
    std::map<HouseholdId, double> shares;
    double grand_cost = 0.0;
    Regime regime = Regime::Deficit;

    [[nodiscard]] double share(const HouseholdId& id) const
    {
        auto it = shares.find(id);
        if (it == shares.end()) throw DataError("no allocation for household " + id.value);
        return it->second;
    }
};

/// xi_i for a single household given the community regime.
[[nodiscard]] inline double allocated_share(const HouseholdDay& h, Regime regime, const Tariff& t) noexcept
{
    const double peak = regime == Regime::Deficit ? t.lambda_h * (h.peak_kwh - h.capacity_kwh)
                                                  : -(t.mu_h * (h.capacity_kwh - h.peak_kwh));
    return h.capital() + peak + t.lambda_l * (h.offpeak_kwh + h.capacity_kwh);
}

/// Analytic core allocation: every household pays its capital and off-peak
/// charging, and its peak position is priced at lambda_h when the community
/// is short of storage and at mu_h when it has storage to spare.
[[nodiscard]] inline Allocation allocate(const CommunityDay& c, const Tariff& t)
{
    Allocation alloc;
    const Aggregates grand = aggregate_all(c);
    alloc.regime = regime_of(grand);
    alloc.grand_cost = coalition_cost(grand, t).total;
    for (const auto& h : c.households()) {
        alloc.shares.emplace(h.id, allocated_share(h, alloc.regime, t));
    }
    return alloc;
}

/// G_i in closed form: the spread on whatever the household contributes to
/// the scarce side of the community.
[[nodiscard]] inline double sharing_saving(const HouseholdDay& h, Regime regime, const Tariff& t) noexcept
{
    return regime == Regime::Deficit ? t.peak_spread() * h.excess_kwh() : t.peak_spread() * h.deficit_kwh();
}

[[nodiscard]] inline std::map<HouseholdId, double> individual_savings(const CommunityDay& c, const Tariff& t)
{
    const Regime regime = regime_of(aggregate_all(c));
    std::map<HouseholdId, double> savings;
    for (const auto& h : c.households()) savings.emplace(h.id, sharing_saving(h, regime, t));
    return savings;
}

/// J(i) for every household.
[[nodiscard]] inline std::map<HouseholdId, double> standalone_costs(const CommunityDay& c, const Tariff& t)
{
    std::map<HouseholdId, double> costs;
    for (const auto& h : c.households()) costs.emplace(h.id, cost_net_metering(h, t).total);
    return costs;
}

/// Generic outcome of a property sweep.
struct PropertyReport {
    std::string property;
    std::size_t checks = 0;
    std::vector<std::string> failures;

    [[nodiscard]] bool ok() const noexcept { return failures.empty(); }
};

// ---------------------------------------------------------------------------
// Subadditivity

/// Which of the four aggregate configurations a disjoint pair (S, T) is in.
enum class PairCase {
    BothDeficit,           ///< X_S >= B_S and X_T >= B_T
    MixedUnionDeficit,     ///< one side in surplus, X_S + X_T >= B_S + B_T
    MixedUnionSurplus,     ///< one side in surplus, X_S + X_T <  B_S + B_T
    BothSurplus,           ///< X_S < B_S and X_T < B_T
};

[[nodiscard]] constexpr std::string_view to_string(PairCase c) noexcept
{
    switch (c) {
    case PairCase::BothDeficit: return "both_deficit";
    case PairCase::MixedUnionDeficit: return "mixed_union_deficit";
    case PairCase::MixedUnionSurplus: return "mixed_union_surplus";
    case PairCase::BothSurplus: return "both_surplus";
    }
    return "unknown";
}

[[nodiscard]] inline PairCase classify_pair(const Aggregates& s, const Aggregates& t) noexcept
{
    const bool sd = s.in_deficit();
    const bool td = t.in_deficit();
    if (sd && td) return PairCase::BothDeficit;
    if (!sd && !td) return PairCase::BothSurplus;
    Aggregates both = s;
    both += t;
    return both.in_deficit() ? PairCase::MixedUnionDeficit : PairCase::MixedUnionSurplus;
}

struct SubadditivityViolation {
    std::vector<HouseholdId> s_members;
    std::vector<HouseholdId> t_members;
    PairCase pair_case;
    double cost_s;
    double cost_t;
    double cost_union;
};

struct SubadditivityReport {
    std::size_t trials = 0;
    std::array<std::size_t, 4> case_counts{};  ///< indexed by PairCase
    std::vector<SubadditivityViolation> violations;
    double max_excess = -std::numeric_limits<double>::infinity();  ///< max J(S u T) - J(S) - J(T)

    [[nodiscard]] bool ok() const noexcept { return violations.empty(); }
};

/// Draws `trials` random disjoint pairs (S, T) and checks J(S u T) <= J(S) + J(T).
[[nodiscard]] inline SubadditivityReport check_subadditivity(const CommunityDay& c, const Tariff& t,
                                                             std::size_t trials, std::uint64_t seed,
                                                             Tolerance tol = {})
{
    if (c.size() < 2) throw ValidationError("subadditivity needs at least two households");
    SubadditivityReport report;
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> side(0, 2);  // 0: neither, 1: S, 2: T
    std::vector<int> assignment(c.size());

    for (std::size_t trial = 0; trial < trials; ++trial) {
        bool has_s = false;
        bool has_t = false;
        while (!has_s || !has_t) {
            has_s = has_t = false;
            for (auto& a : assignment) {
                a = side(rng);
                has_s |= a == 1;
                has_t |= a == 2;
            }
        }
        Aggregates s;
        Aggregates tt;
        Aggregates both;
        for (std::size_t i = 0; i < c.size(); ++i) {
            if (assignment[i] == 1) s += c[i];
            if (assignment[i] == 2) tt += c[i];
            if (assignment[i] != 0) both += c[i];
        }
        const double js = coalition_cost(s, t).total;
        const double jt = coalition_cost(tt, t).total;
        const double ju = coalition_cost(both, t).total;
        const PairCase pc = classify_pair(s, tt);
        ++report.trials;
        ++report.case_counts[static_cast<std::size_t>(pc)];
        report.max_excess = std::max(report.max_excess, ju - (js + jt));
        if (!tol.leq(ju, js + jt)) {
            SubadditivityViolation v{{}, {}, pc, js, jt, ju};
            for (std::size_t i = 0; i < c.size(); ++i) {
                if (assignment[i] == 1) v.s_members.push_back(c[i].id);
                if (assignment[i] == 2) v.t_members.push_back(c[i].id);
            }
            report.violations.push_back(std::move(v));
        }
    }
    return report;
}

// ---------------------------------------------------------------------------
// Core membership

struct CoreViolation {
    std::vector<HouseholdId> members;
    CoalitionMask mask = 0;  ///< 0 when the community is too large for a mask
    double allocated = 0.0;  ///< xi_S
    double cost = 0.0;       ///< J(S)
    double expected_gap = 0.0;

    [[nodiscard]] double excess() const noexcept { return allocated - cost; }
};

struct CoreReport {
    std::string description;
    bool sampled = false;
    std::size_t num_coalitions_checked = 0;
    std::vector<CoreViolation> violations;      ///< xi_S > J(S) beyond tolerance
    std::vector<CoreViolation> gap_mismatches;  ///< J(S) - xi_S differs from the closed form
    double max_excess = -std::numeric_limits<double>::infinity();
    double max_gap_error = 0.0;
    double budget_imbalance = 0.0;  ///< |sum xi_i - J(N)|
    bool budget_balanced = true;

    [[nodiscard]] bool ok() const noexcept
    {
        return violations.empty() && gap_mismatches.empty() && budget_balanced;
    }
};

struct CoreOptions {
    std::size_t enumeration_cap = 20;
    Tolerance tol{};
};

namespace detail {

/// J(S) - xi_S predicted from coalition aggregates alone.
inline double core_gap(const Aggregates& s, Regime regime, const Tariff& t) noexcept
{
    return regime == Regime::Deficit ? t.peak_spread() * positive_part(s.capacity_kwh - s.peak_kwh)
                                     : t.peak_spread() * positive_part(s.peak_kwh - s.capacity_kwh);
}

class CoreAccumulator {
public:
    CoreAccumulator(const CommunityDay& c, const Tariff& t, const Allocation& alloc, Tolerance tol,
                    CoreReport& report)
        : c_(c), t_(t), alloc_(alloc), tol_(tol), report_(report)
    {}

    void visit(const Aggregates& s, double xi_s, CoalitionMask mask, const std::vector<char>* membership)
    {
        const double cost = coalition_cost(s, t_).total;
        const double gap = core_gap(s, alloc_.regime, t_);
        ++report_.num_coalitions_checked;
        report_.max_excess = std::max(report_.max_excess, xi_s - cost);

        const double scale = std::max({std::abs(cost), std::abs(xi_s), std::abs(gap)});
        const double gap_error = std::abs((cost - xi_s) - gap);
        report_.max_gap_error = std::max(report_.max_gap_error, gap_error);

        const bool excess_bad = !tol_.leq(xi_s, cost);
        const bool gap_bad = gap_error > tol_.slack(scale, 0.0);
        if (!excess_bad && !gap_bad) return;

        CoreViolation v;
        v.mask = mask;
        v.allocated = xi_s;
        v.cost = cost;
        v.expected_gap = gap;
        for (std::size_t i = 0; i < c_.size(); ++i) {
            const bool in = membership ? (*membership)[i] != 0 : ((mask >> i) & 1U) != 0;
            if (in) v.members.push_back(c_[i].id);
        }
        if (excess_bad) report_.violations.push_back(v);
        if (gap_bad) report_.gap_mismatches.push_back(std::move(v));
    }

private:
    const CommunityDay& c_;
    const Tariff& t_;
    const Allocation& alloc_;
    Tolerance tol_;
    CoreReport& report_;
};

inline void finish_core_report(const CommunityDay& c, const Allocation& alloc, Tolerance tol, CoreReport& r)
{
    double total = 0.0;
    for (const auto& h : c.households()) total += alloc.shares.at(h.id);
    r.budget_imbalance = std::abs(total - alloc.grand_cost);
    r.budget_balanced = tol.equal(total, alloc.grand_cost);
    std::sort(r.violations.begin(), r.violations.end(),
              [](const CoreViolation& a, const CoreViolation& b) { return a.members < b.members; });
    std::sort(r.gap_mismatches.begin(), r.gap_mismatches.end(),
              [](const CoreViolation& a, const CoreViolation& b) { return a.members < b.members; });
}

}  // namespace detail

/// Enumerates all 2^N - 1 non-empty coalitions and checks xi_S <= J(S) plus
/// the closed-form gap. Subsets are visited depth-first, adding one member
/// at a time in ascending order, so each aggregate is the same sum a fresh
/// ascending-order summation would produce.
[[nodiscard]] inline CoreReport check_core(const CommunityDay& c, const Tariff& t, CoreOptions options = {})
{
    const std::size_t cap = std::min(options.enumeration_cap, std::size_t{62});
    if (c.size() > cap) {
        throw ValidationError("community has " + std::to_string(c.size()) +
                              " households, above the enumeration cap of " + std::to_string(cap) +
                              "; use sampled core checking instead");
    }
    const Allocation alloc = allocate(c, t);
    std::vector<double> shares;
    shares.reserve(c.size());
    for (const auto& h : c.households()) shares.push_back(alloc.shares.at(h.id));

    CoreReport report;
    report.description = "exhaustive core check over " + std::to_string(c.size()) + " households";
    detail::CoreAccumulator acc(c, t, alloc, options.tol, report);

    const std::size_t n = c.size();
    // Explicit stack: (next index to try, aggregates, xi sum, mask).
    struct Frame {
        std::size_t next;
        Aggregates totals;
        double xi;
        CoalitionMask mask;
    };
    std::vector<Frame> stack;
    stack.push_back({0, Aggregates{}, 0.0, 0});
    while (!stack.empty()) {
        Frame f = stack.back();
        stack.pop_back();
        // Push in reverse so lower indices are explored first.
        for (std::size_t i = n; i-- > f.next;) {
            Frame child{i + 1, f.totals, f.xi + shares[i], f.mask | (CoalitionMask{1} << i)};
            child.totals += c[i];
            acc.visit(child.totals, child.xi, child.mask, nullptr);
            if (i + 1 < n) stack.push_back(child);
        }
    }
    detail::finish_core_report(c, alloc, options.tol, report);
    return report;
}

/// Same assertions as check_core on random coalitions (each household joins
/// with probability 1/2), plus every singleton and the grand coalition.
[[nodiscard]] inline CoreReport check_core_sampled(const CommunityDay& c, const Tariff& t, std::size_t samples,
                                                   std::uint64_t seed, Tolerance tol = {})
{
    const Allocation alloc = allocate(c, t);
    CoreReport report;
    report.sampled = true;
    report.description = "sampled core check over " + std::to_string(c.size()) + " households, " +
                         std::to_string(samples) + " random coalitions";
    detail::CoreAccumulator acc(c, t, alloc, tol, report);
    const bool maskable = c.size() <= kMaxMaskHouseholds;
    std::vector<char> membership(c.size(), 0);

    const auto visit_membership = [&] {
        Aggregates s;
        double xi = 0.0;
        CoalitionMask mask = 0;
        for (std::size_t i = 0; i < c.size(); ++i) {
            if (!membership[i]) continue;
            s += c[i];
            xi += alloc.shares.at(c[i].id);
            if (maskable) mask |= CoalitionMask{1} << i;
        }
        acc.visit(s, xi, mask, &membership);
    };

    for (std::size_t i = 0; i < c.size(); ++i) {
        std::fill(membership.begin(), membership.end(), 0);
        membership[i] = 1;
        visit_membership();
    }
    std::fill(membership.begin(), membership.end(), 1);
    visit_membership();

    std::mt19937_64 rng(seed);
    std::bernoulli_distribution coin(0.5);
    for (std::size_t k = 0; k < samples; ++k) {
        bool any = false;
        while (!any) {
            for (auto& m : membership) {
                m = coin(rng) ? 1 : 0;
                any |= m != 0;
            }
        }
        visit_membership();
    }
    detail::finish_core_report(c, alloc, tol, report);
    return report;
}

}  // namespace storshare
