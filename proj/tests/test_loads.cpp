#include <numeric>
#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "storshare/loads.hpp"
#include "storshare/synthetic.hpp"

using namespace storshare;

namespace {

IngestResult ingest_text(const std::string& text)
{
    std::istringstream in(text);
    return ingest_csv(in, "test.csv");
}

std::string error_of(const std::string& text)
{
    try {
        (void)ingest_text(text);
    } catch (const DataError& e) {
        return e.what();
    }
    return {};
}

}  // namespace

TEST(Timestamps, ParseAndFormat)
{
    const auto ts = parse_timestamp("2016-03-18T08:00:00");
    ASSERT_TRUE(ts);
    EXPECT_EQ(format_timestamp(*ts), "2016-03-18T08:00:00");
    EXPECT_EQ(parse_timestamp("2016-03-18T08"), ts);
    EXPECT_EQ(parse_timestamp("2016-03-18 08:00"), ts);
    EXPECT_EQ(parse_timestamp("2016-03-18T08:00:00Z"), ts);
    EXPECT_FALSE(parse_timestamp("2016-03-18T08:30:00"));
    EXPECT_FALSE(parse_timestamp("2016-02-30T08:00:00"));
    EXPECT_FALSE(parse_timestamp("2016-03-18T24:00:00"));
    EXPECT_FALSE(parse_timestamp("yesterday"));
    EXPECT_EQ(format_date(*parse_date("2016-12-31")), "2016-12-31");
}

TEST(IngestCsv, ThreeValidRows)
{
    const auto r = ingest_text(
        "household_id,timestamp,kwh\n"
        "26,2016-01-01T00:00:00,0.5\n"
        "26,2016-01-01T01:00:00,0.25\n"
        "77,2016-01-01T00:00:00,1.0\n");
    EXPECT_EQ(r.records.size(), 3U);
    EXPECT_EQ(r.rows, 3U);
    EXPECT_EQ(r.households, 2U);
    EXPECT_EQ(r.days, 1U);
    EXPECT_EQ(r.records[1].kwh, 0.25);
    // 22 missing hours for 26 and 23 for 77 are warnings, not errors.
    EXPECT_EQ(r.missing.size(), 22U + 23U);
    EXPECT_EQ(r.missing.front().id.value, "26");
    EXPECT_EQ(r.missing.front().hour, 2);
}

TEST(IngestCsv, DuplicateHourNamesThePair)
{
    const auto msg = error_of(
        "household_id,timestamp,kwh\n"
        "26,2016-01-01T05:00:00,0.5\n"
        "26,2016-01-01T05:00:00,0.7\n");
    EXPECT_NE(msg.find("duplicate"), std::string::npos);
    EXPECT_NE(msg.find("26"), std::string::npos);
    EXPECT_NE(msg.find("2016-01-01T05:00:00"), std::string::npos);
    EXPECT_NE(msg.find("test.csv:3"), std::string::npos);
}

TEST(IngestCsv, MalformedRowsReportLineNumbers)
{
    EXPECT_NE(error_of("household_id,timestamp,kwh\n1,2016-01-01T00:00:00\n").find("test.csv:2"), std::string::npos);
    EXPECT_NE(error_of("household_id,timestamp,kwh\n1,2016-01-01T00:00:00,1\n1,bad,1\n").find("test.csv:3"),
              std::string::npos);
    EXPECT_NE(error_of("household_id,timestamp,kwh\n1,2016-01-01T00:00:00,abc\n").find("bad kwh"), std::string::npos);
    EXPECT_NE(error_of("household_id,timestamp,kwh\n1,2016-01-01T00:00:00,-0.1\n").find(">= 0"), std::string::npos);
    EXPECT_NE(error_of("id,ts,kwh\n").find("header"), std::string::npos);
    EXPECT_NE(error_of("").find("empty"), std::string::npos);
}

TEST(IngestCsv, SyntheticYearRoundTripsExactly)
{
    const auto data = generate_synthetic({80, 365, 42});
    ASSERT_EQ(data.records.size(), 80U * 365U * 24U);
    std::stringstream buf;
    write_loads_csv(buf, data.records);
    const auto back = ingest_csv(buf, "roundtrip");
    EXPECT_EQ(back.rows, data.records.size());
    EXPECT_EQ(back.households, 80U);
    EXPECT_EQ(back.days, 365U);
    EXPECT_TRUE(back.missing.empty());
    EXPECT_TRUE(back.records == data.records);
}

TEST(Capacities, RoundTripAndErrors)
{
    const std::vector<StorageSpec> specs{{HouseholdId{"1"}, 20.3, 0.0712}, {HouseholdId{"2"}, 98.6, 0.098}};
    std::stringstream buf;
    write_capacities_csv(buf, specs);
    EXPECT_EQ(read_capacities_csv(buf), specs);

    std::istringstream dup("household_id,capacity_kwh,lambda_b\n1,2,0.07\n1,3,0.07\n");
    EXPECT_THROW((void)read_capacities_csv(dup), DataError);
    std::istringstream neg("household_id,capacity_kwh,lambda_b\n1,-2,0.07\n");
    EXPECT_THROW((void)read_capacities_csv(neg), DataError);
    std::istringstream empty("household_id,capacity_kwh,lambda_b\n");
    EXPECT_THROW((void)read_capacities_csv(empty), DataError);
}

TEST(PeakWindow, ParseAndValidate)
{
    EXPECT_EQ(parse_peak_window("8:22"), (PeakWindow{8, 22}));
    EXPECT_EQ(parse_peak_window("0:24"), (PeakWindow{0, 24}));
    EXPECT_THROW((void)parse_peak_window("22:8"), ValidationError);
    EXPECT_THROW((void)parse_peak_window("8-22"), ValidationError);
    EXPECT_THROW((void)parse_peak_window("8:25"), ValidationError);
    EXPECT_THROW((void)parse_peak_window("8:8"), ValidationError);
}

TEST(SplitDay, UniformProfile)
{
    DayProfile p;
    p.fill(1.0);
    const auto s = split_day(p, {8, 22});
    EXPECT_EQ(s.peak_kwh, 14.0);
    EXPECT_EQ(s.offpeak_kwh, 10.0);
}

TEST(SplitDay, SinglePeakHour)
{
    DayProfile p;
    p.fill(0.0);
    p[9] = 2.5;
    const auto s = split_day(p, {8, 22});
    EXPECT_EQ(s.peak_kwh, 2.5);
    EXPECT_EQ(s.offpeak_kwh, 0.0);
}

TEST(SplitDay, WindowEdgesAreHalfOpen)
{
    DayProfile p;
    p.fill(0.0);
    p[8] = 1.0;   // peak
    p[22] = 4.0;  // off-peak
    p[7] = 2.0;   // off-peak
    const auto s = split_day(p, {8, 22});
    EXPECT_EQ(s.peak_kwh, 1.0);
    EXPECT_EQ(s.offpeak_kwh, 6.0);
}

TEST(SplitDay, RandomProfilesConserveDailyTotal)
{
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> kwh(0.0, 3.0);
    std::uniform_int_distribution<int> hour(0, 23);
    for (int trial = 0; trial < 1000; ++trial) {
        DayProfile p;
        double total = 0.0;
        for (auto& v : p) {
            v = kwh(rng);
            total += *v;
        }
        int a = hour(rng);
        int b = hour(rng);
        if (a == b) continue;
        const PeakWindow w{std::min(a, b), std::max(a, b) + 1};
        const auto s = split_day(p, w);
        EXPECT_NEAR(s.peak_kwh + s.offpeak_kwh, total, 1e-12 * (1.0 + total));
    }
}

TEST(SplitDay, MissingHoursNeedFillPolicy)
{
    DayProfile p;
    p.fill(1.0);
    p[3].reset();
    p[12].reset();
    EXPECT_THROW((void)split_day(p, {8, 22}), DataError);
    const auto s = split_day(p, {8, 22}, FillPolicy::Zero);
    EXPECT_EQ(s.filled_hours, 2);
    EXPECT_EQ(s.peak_kwh, 13.0);
    EXPECT_EQ(s.offpeak_kwh, 9.0);
}
