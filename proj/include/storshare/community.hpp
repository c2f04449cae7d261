#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <set>
#include <string>
#include <vector>

#include "storshare/common.hpp"

namespace storshare {

/// One household on one day: peak and off-peak consumption plus its storage.
struct HouseholdDay {
    HouseholdId id;
    double peak_kwh = 0.0;      ///< X, consumption inside the peak window
    double offpeak_kwh = 0.0;   ///< Y
    double capacity_kwh = 0.0;  ///< B
    double lambda_b = 0.0;      ///< amortized daily storage cost per kWh of capacity

    [[nodiscard]] double capital() const noexcept { return lambda_b * capacity_kwh; }

    /// (B - X)^+
    [[nodiscard]] double excess_kwh() const noexcept { return positive_part(capacity_kwh - peak_kwh); }
    /// (X - B)^+
    [[nodiscard]] double deficit_kwh() const noexcept { return positive_part(peak_kwh - capacity_kwh); }
};

inline void validate(const HouseholdDay& h)
{
    const auto check = [&](double v, const char* name) {
        if (!std::isfinite(v) || v < 0.0) {
            throw DataError("household " + h.id.value + ": " + name + " must be finite and >= 0");
        }
    };
    check(h.peak_kwh, "peak_kwh");
    check(h.offpeak_kwh, "offpeak_kwh");
    check(h.capacity_kwh, "capacity_kwh");
    check(h.lambda_b, "lambda_b");
}

/// Summed coalition quantities: X_S, Y_S, B_S and the capital sum.
struct Aggregates {
    double peak_kwh = 0.0;
    double offpeak_kwh = 0.0;
    double capacity_kwh = 0.0;
    double capital = 0.0;

    Aggregates& operator+=(const HouseholdDay& h) noexcept
    {
        peak_kwh += h.peak_kwh;
        offpeak_kwh += h.offpeak_kwh;
        capacity_kwh += h.capacity_kwh;
        capital += h.capital();
        return *this;
    }

    Aggregates& operator+=(const Aggregates& o) noexcept
    {
        peak_kwh += o.peak_kwh;
        offpeak_kwh += o.offpeak_kwh;
        capacity_kwh += o.capacity_kwh;
        capital += o.capital;
        return *this;
    }

    [[nodiscard]] Aggregates scaled(double alpha) const noexcept
    {
        return {alpha * peak_kwh, alpha * offpeak_kwh, alpha * capacity_kwh, alpha * capital};
    }

    /// X_S >= B_S: the coalition's storage cannot cover its own peak demand.
    [[nodiscard]] bool in_deficit() const noexcept { return peak_kwh >= capacity_kwh; }
};

struct CoalitionView {
    std::vector<HouseholdId> members;  ///< ascending
    Aggregates totals;
};

/// All households of a single day, the grand coalition N. Households are
/// kept in ascending id order; index i in that order is bit i of a mask.
class CommunityDay {
public:
    CommunityDay(std::chrono::year_month_day date, std::vector<HouseholdDay> households)
        : date_(date), households_(std::move(households))
    {
        if (households_.empty()) throw DataError("community day has no households");
        std::sort(households_.begin(), households_.end(),
                  [](const HouseholdDay& a, const HouseholdDay& b) { return a.id < b.id; });
        for (std::size_t i = 0; i < households_.size(); ++i) {
            validate(households_[i]);
            if (i > 0 && households_[i - 1].id == households_[i].id) {
                throw DataError("duplicate household id " + households_[i].id.value);
            }
        }
    }

    explicit CommunityDay(std::vector<HouseholdDay> households)
        : CommunityDay(std::chrono::year_month_day{}, std::move(households))
    {}

    [[nodiscard]] std::chrono::year_month_day date() const noexcept { return date_; }
    [[nodiscard]] const std::vector<HouseholdDay>& households() const noexcept { return households_; }
    [[nodiscard]] std::size_t size() const noexcept { return households_.size(); }
    [[nodiscard]] const HouseholdDay& operator[](std::size_t i) const { return households_[i]; }

    /// Position of id in canonical order; throws DataError if absent.
    [[nodiscard]] std::size_t index_of(const HouseholdId& id) const
    {
        auto it = std::lower_bound(households_.begin(), households_.end(), id,
                                   [](const HouseholdDay& h, const HouseholdId& key) { return h.id < key; });
        if (it == households_.end() || it->id != id) {
            throw DataError("unknown household id " + id.value);
        }
        return static_cast<std::size_t>(it - households_.begin());
    }

    [[nodiscard]] const HouseholdDay& at(const HouseholdId& id) const { return households_[index_of(id)]; }

    [[nodiscard]] CoalitionMask grand_mask() const
    {
        if (households_.size() > kMaxMaskHouseholds) {
            throw ValidationError("mask form supports at most 64 households");
        }
        return households_.size() == kMaxMaskHouseholds ? ~CoalitionMask{0}
                                                        : (CoalitionMask{1} << households_.size()) - 1;
    }

private:
    std::chrono::year_month_day date_;
    std::vector<HouseholdDay> households_;
};

/// Sums member quantities in ascending id order.
[[nodiscard]] inline CoalitionView aggregate(const CommunityDay& c, const std::set<HouseholdId>& members)
{
    if (members.empty()) throw DataError("coalition must have at least one member");
    CoalitionView view;
    view.members.reserve(members.size());
    for (const auto& id : members) {  // std::set iterates ascending
        view.totals += c.at(id);
        view.members.push_back(id);
    }
    return view;
}

/// Mask form of aggregate(); bit i selects c[i].
[[nodiscard]] inline Aggregates aggregate_mask(const CommunityDay& c, CoalitionMask mask)
{
    if (mask == 0) throw DataError("coalition must have at least one member");
    if (c.size() < kMaxMaskHouseholds && (mask >> c.size()) != 0) {
        throw DataError("coalition mask references households outside the community");
    }
    Aggregates totals;
    for (std::size_t i = 0; i < c.size() && i < kMaxMaskHouseholds; ++i) {
        if (mask & (CoalitionMask{1} << i)) totals += c[i];
    }
    return totals;
}

[[nodiscard]] inline Aggregates aggregate_all(const CommunityDay& c)
{
    Aggregates totals;
    for (const auto& h : c.households()) totals += h;
    return totals;
}

[[nodiscard]] inline std::vector<HouseholdId> members_of(const CommunityDay& c, CoalitionMask mask)
{
    std::vector<HouseholdId> ids;
    for (std::size_t i = 0; i < c.size() && i < kMaxMaskHouseholds; ++i) {
        if (mask & (CoalitionMask{1} << i)) ids.push_back(c[i].id);
    }
    return ids;
}

}  // namespace storshare
