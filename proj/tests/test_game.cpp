#include <random>
#include <set>

#include <gtest/gtest.h>

#include "case_study_fixtures.hpp"
#include "oracles.hpp"
#include "storshare/game.hpp"
#include "storshare/serialize.hpp"

using namespace storshare;

namespace {

constexpr double kEps = 1e-12;
const Tariff kT = kCaseStudyTariff;

CommunityDay pair_example()
{
    return CommunityDay({{HouseholdId{"1"}, 3, 0, 5, 0}, {HouseholdId{"2"}, 7, 0, 1, 0}});
}

}  // namespace

TEST(Allocate, SingleHouseholdPaysItsOwnCost)
{
    const CommunityDay c({{HouseholdId{"only"}, 4.5, 2.0, 7.5, 0.09}});
    const auto alloc = allocate(c, kT);
    EXPECT_NEAR(alloc.share(HouseholdId{"only"}), cost_net_metering(c[0], kT).total, kEps);
    EXPECT_NEAR(alloc.grand_cost, cost_net_metering(c[0], kT).total, kEps);
    EXPECT_EQ(alloc.regime, Regime::Surplus);
}

TEST(Allocate, TwoHouseholdExample)
{
    const auto alloc = allocate(pair_example(), kT);
    EXPECT_EQ(alloc.regime, Regime::Deficit);
    EXPECT_NEAR(alloc.share(HouseholdId{"1"}), 0.02, kEps);
    EXPECT_NEAR(alloc.share(HouseholdId{"2"}), 3.46, kEps);
    EXPECT_NEAR(alloc.grand_cost, 3.48, kEps);
}

TEST(Allocate, RegimeBoundaryUsesDeficitBranch)
{
    // X_N == B_N; per-household values follow the lambda_h branch.
    const CommunityDay c({{HouseholdId{"a"}, 2, 0, 4, 0}, {HouseholdId{"b"}, 4, 0, 2, 0}});
    const auto alloc = allocate(c, kT);
    EXPECT_EQ(alloc.regime, Regime::Deficit);
    EXPECT_NEAR(alloc.share(HouseholdId{"a"}), 0.54 * -2 + 0.22 * 4, kEps);
    EXPECT_NEAR(alloc.share(HouseholdId{"b"}), 0.54 * 2 + 0.22 * 2, kEps);
}

TEST(Allocate, RandomEightHouseholdsIsAnImputation)
{
    std::mt19937_64 rng(8);
    for (int trial = 0; trial < 100; ++trial) {
        const Tariff t = support::random_valid_tariff(rng);
        const auto c = support::random_community(rng, 8);
        const auto alloc = allocate(c, t);
        double sum = 0.0;
        for (const auto& h : c.households()) {
            const double xi = alloc.share(h.id);
            sum += xi;
            EXPECT_TRUE(Tolerance{}.leq(xi, cost_net_metering(h, t).total));
        }
        EXPECT_TRUE(Tolerance{}.equal(sum, grand_coalition_cost(c, t).total));
    }
}

TEST(Allocate, EmptyCommunityCannotBeBuilt)
{
    EXPECT_THROW(CommunityDay(std::vector<HouseholdDay>{}), DataError);
}

TEST(IndividualSavings, TwoHouseholdExample)
{
    const auto g = individual_savings(pair_example(), kT);
    EXPECT_NEAR(g.at(HouseholdId{"1"}), 0.48, kEps);
    EXPECT_EQ(g.at(HouseholdId{"2"}), 0.0);
}

TEST(IndividualSavings, DeficitHouseholdsInDeficitRegimeSaveNothing)
{
    const auto c = support::day198();
    const auto g = individual_savings(c, kT);
    for (const auto& h : c.households()) {
        if (h.peak_kwh >= h.capacity_kwh) EXPECT_EQ(g.at(h.id), 0.0);
    }
}

TEST(IndividualSavings, Day198TotalSavings)
{
    const auto g = individual_savings(support::day198(), kT);
    double total = 0.0;
    for (const auto& [id, v] : g) total += v;
    EXPECT_NEAR(total, 135.504, 1e-9);
}

TEST(IndividualSavings, EqualsCostMinusShareAndIsNonNegative)
{
    std::mt19937_64 rng(21);
    for (int trial = 0; trial < 300; ++trial) {
        const Tariff t = support::random_valid_tariff(rng);
        const auto c = support::random_community(rng, 10);
        const auto alloc = allocate(c, t);
        const auto g = individual_savings(c, t);
        const auto j = standalone_costs(c, t);
        for (const auto& h : c.households()) {
            const double gi = g.at(h.id);
            EXPECT_GE(gi, 0.0);
            EXPECT_NEAR(gi, j.at(h.id) - alloc.share(h.id), 1e-9 * (1.0 + std::abs(j.at(h.id))));
            if (gi > 0.0) {
                // Savings only go to the counterpart of the scarce side.
                if (alloc.regime == Regime::Deficit) EXPECT_LT(h.peak_kwh, h.capacity_kwh);
                else EXPECT_GT(h.peak_kwh, h.capacity_kwh);
            }
        }
    }
}

TEST(Subadditivity, BothDeficitCaseIsAdditive)
{
    const CommunityDay c({{HouseholdId{"a"}, 9, 1, 2, 0.07}, {HouseholdId{"b"}, 5, 2, 1, 0.09}});
    const auto s = aggregate_mask(c, 0b01);
    const auto t = aggregate_mask(c, 0b10);
    const auto u = aggregate_mask(c, 0b11);
    EXPECT_EQ(classify_pair(s, t), PairCase::BothDeficit);
    EXPECT_NEAR(coalition_cost(u, kT).total, coalition_cost(s, kT).total + coalition_cost(t, kT).total, kEps);
}

TEST(Subadditivity, PairExampleAndClassification)
{
    const auto c = pair_example();
    const auto s = aggregate_mask(c, 0b01);
    const auto t = aggregate_mask(c, 0b10);
    EXPECT_EQ(classify_pair(s, t), PairCase::MixedUnionDeficit);
    const auto report = check_subadditivity(c, kT, 50, 1);
    EXPECT_TRUE(report.ok());
    EXPECT_EQ(report.trials, 50U);
    EXPECT_NEAR(report.max_excess, 3.48 - 3.96, kEps);
}

TEST(Subadditivity, ThousandRandomInstancesSeed42)
{
    std::mt19937_64 rng(42);
    std::array<std::size_t, 4> seen{};
    for (int trial = 0; trial < 1000; ++trial) {
        const Tariff t = support::random_valid_tariff(rng);
        const auto c = support::random_community(rng, 2 + static_cast<std::size_t>(trial % 15));
        const auto r = check_subadditivity(c, t, 5, 42 + static_cast<std::uint64_t>(trial));
        ASSERT_TRUE(r.ok()) << to_json(r).dump();
        for (std::size_t k = 0; k < 4; ++k) seen[k] += r.case_counts[k];
    }
    for (auto n : seen) EXPECT_GT(n, 0U);  // every proof case exercised
}

TEST(Subadditivity, NeedsTwoHouseholds)
{
    const CommunityDay c({{HouseholdId{"a"}, 1, 1, 1, 0}});
    EXPECT_THROW((void)check_subadditivity(c, kT, 1, 1), ValidationError);
}

TEST(Core, SingletonHasOneCoalitionAndNoExcess)
{
    const CommunityDay c({{HouseholdId{"a"}, 3, 1, 2, 0.07}});
    const auto r = check_core(c, kT);
    EXPECT_EQ(r.num_coalitions_checked, 1U);
    EXPECT_TRUE(r.ok());
    EXPECT_NEAR(r.max_excess, 0.0, kEps);
}

TEST(Core, PairExampleGap)
{
    const auto r = check_core(pair_example(), kT);
    EXPECT_EQ(r.num_coalitions_checked, 3U);
    EXPECT_TRUE(r.ok());
    // Coalition {1}: xi = 0.02, J = 0.5, gap 0.48.
    EXPECT_NEAR(r.max_excess, 0.0, kEps);  // attained by the grand coalition and {2}
}

TEST(Core, FourHouseholdsEnumerateFifteenCoalitions)
{
    std::mt19937_64 rng(4);
    const auto c = support::random_community(rng, 4);
    const auto r = check_core(c, support::random_valid_tariff(rng));
    EXPECT_EQ(r.num_coalitions_checked, 15U);
    EXPECT_TRUE(r.ok());
    EXPECT_LE(r.max_excess, 1e-9);
}

TEST(Core, ExhaustiveOnRandomCommunities)
{
    std::mt19937_64 rng(1234);
    for (int trial = 0; trial < 60; ++trial) {
        const std::size_t n = 1 + static_cast<std::size_t>(trial % 12);
        const auto c = support::random_community(rng, n);
        const auto r = check_core(c, support::random_valid_tariff(rng));
        ASSERT_EQ(r.num_coalitions_checked, (std::size_t{1} << n) - 1);
        ASSERT_TRUE(r.ok()) << to_json(r).dump();
    }
}

TEST(Core, DetectsANonCoreAllocation)
{
    // Break the rules on purpose: mu_h above lambda_h flips the spread sign,
    // so the formula no longer lands in the core.
    const Tariff bad{0.30, 0.22, 0.54, 0.13};
    const auto r = check_core(pair_example(), bad);
    EXPECT_FALSE(r.violations.empty());
    EXPECT_GT(r.max_excess, 0.0);
    EXPECT_TRUE(r.gap_mismatches.empty());
}

TEST(Core, CapDirectsToSampledMode)
{
    std::mt19937_64 rng(9);
    const auto c = support::random_community(rng, 21);
    try {
        (void)check_core(c, kT);
        FAIL();
    } catch (const ValidationError& e) {
        EXPECT_NE(std::string(e.what()).find("sampled"), std::string::npos);
    }
    EXPECT_NO_THROW((void)check_core(c, kT, {21, {}}));
}

TEST(Core, SampledModeOnEightyHouseholds)
{
    const auto c = support::day78();
    const auto r = check_core_sampled(c, kT, 2000, 5);
    EXPECT_TRUE(r.sampled);
    EXPECT_EQ(r.num_coalitions_checked, 2000U + 80U + 1U);
    EXPECT_TRUE(r.ok());
}

TEST(Core, ReportJsonShape)
{
    const auto j = to_json(check_core(pair_example(), kT));
    EXPECT_EQ(j.at("num_coalitions_checked"), 3);
    EXPECT_TRUE(j.at("ok").get<bool>());
    EXPECT_TRUE(j.at("violations").empty());
}
