#pragma once

#include <array>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include <fmt/format.h>

#include "storshare/common.hpp"

namespace storshare {

using HourStamp = std::chrono::sys_time<std::chrono::hours>;
using DayStamp = std::chrono::sys_days;

struct HourlyLoadRecord {
    HouseholdId id;
    HourStamp timestamp;
    double kwh = 0.0;

    bool operator==(const HourlyLoadRecord&) const = default;
};

struct StorageSpec {
    HouseholdId id;
    double capacity_kwh = 0.0;
    double lambda_b = 0.0;

    bool operator==(const StorageSpec&) const = default;
};

/// Peak hours are [start, end) of each calendar day.
struct PeakWindow {
    int start = 8;
    int end = 22;

    bool operator==(const PeakWindow&) const = default;

    [[nodiscard]] bool contains(int hour) const noexcept { return hour >= start && hour < end; }
};

inline void validate(const PeakWindow& w)
{
    if (!(0 <= w.start && w.start < w.end && w.end <= 24)) {
        throw ValidationError(fmt::format("peak window {}:{} must satisfy 0 <= start < end <= 24", w.start, w.end));
    }
}

/// Parses "start:end", e.g. "8:22".
[[nodiscard]] inline PeakWindow parse_peak_window(std::string_view text)
{
    const auto colon = text.find(':');
    if (colon == std::string_view::npos) throw ValidationError("peak window must look like START:END");
    PeakWindow w;
    const auto parse_int = [&](std::string_view part, int& out) {
        const auto [ptr, ec] = std::from_chars(part.data(), part.data() + part.size(), out);
        if (ec != std::errc{} || ptr != part.data() + part.size()) {
            throw ValidationError("peak window must look like START:END");
        }
    };
    parse_int(text.substr(0, colon), w.start);
    parse_int(text.substr(colon + 1), w.end);
    validate(w);
    return w;
}

enum class FillPolicy { Reject, Zero };

// ---------------------------------------------------------------------------
// Dates

[[nodiscard]] inline std::string format_date(DayStamp day)
{
    const std::chrono::year_month_day ymd{day};
    return fmt::format("{:04d}-{:02d}-{:02d}", static_cast<int>(ymd.year()), static_cast<unsigned>(ymd.month()),
                       static_cast<unsigned>(ymd.day()));
}

[[nodiscard]] inline std::string format_date(std::chrono::year_month_day ymd)
{
    return format_date(DayStamp{ymd});
}

[[nodiscard]] inline std::string format_timestamp(HourStamp ts)
{
    const auto day = std::chrono::floor<std::chrono::days>(ts);
    return fmt::format("{}T{:02d}:00:00", format_date(day), (ts - day).count());
}

namespace detail {

inline bool parse_fixed_int(std::string_view s, std::size_t pos, std::size_t len, int& out)
{
    if (pos + len > s.size()) return false;
    const char* first = s.data() + pos;
    const auto [ptr, ec] = std::from_chars(first, first + len, out);
    return ec == std::errc{} && ptr == first + len;
}

inline std::string_view trim(std::string_view s)
{
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

inline std::vector<std::string_view> split_csv(std::string_view line)
{
    std::vector<std::string_view> fields;
    std::size_t pos = 0;
    while (true) {
        const auto comma = line.find(',', pos);
        fields.push_back(trim(line.substr(pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos)));
        if (comma == std::string_view::npos) break;
        pos = comma + 1;
    }
    return fields;
}

inline std::optional<double> parse_double(std::string_view s)
{
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
    return v;
}

}  // namespace detail

/// Accepts YYYY-MM-DD and, for timestamps, YYYY-MM-DDTHH[:00[:00]]
/// (a space may replace the T). Minutes and seconds must be zero.
[[nodiscard]] inline std::optional<DayStamp> parse_date(std::string_view s)
{
    int y = 0;
    int m = 0;
    int d = 0;
    if (s.size() != 10 || s[4] != '-' || s[7] != '-') return std::nullopt;
    if (!detail::parse_fixed_int(s, 0, 4, y) || !detail::parse_fixed_int(s, 5, 2, m) ||
        !detail::parse_fixed_int(s, 8, 2, d)) {
        return std::nullopt;
    }
    const std::chrono::year_month_day ymd{std::chrono::year{y}, std::chrono::month{static_cast<unsigned>(m)},
                                          std::chrono::day{static_cast<unsigned>(d)}};
    if (!ymd.ok()) return std::nullopt;
    return DayStamp{ymd};
}

[[nodiscard]] inline std::optional<HourStamp> parse_timestamp(std::string_view s)
{
    if (s.size() < 13 || (s[10] != 'T' && s[10] != ' ')) return std::nullopt;
    const auto day = parse_date(s.substr(0, 10));
    int hour = 0;
    if (!day || !detail::parse_fixed_int(s, 11, 2, hour) || hour < 0 || hour > 23) return std::nullopt;
    std::string_view rest = s.substr(13);
    if (!rest.empty() && rest.back() == 'Z') rest.remove_suffix(1);
    if (rest != "" && rest != ":00" && rest != ":00:00") return std::nullopt;
    return HourStamp{*day} + std::chrono::hours{hour};
}

// ---------------------------------------------------------------------------
// Loads CSV

struct MissingHour {
    HouseholdId id;
    DayStamp day;
    int hour;
};

struct IngestResult {
    std::vector<HourlyLoadRecord> records;
    std::size_t rows = 0;
    std::size_t households = 0;
    std::size_t days = 0;
    std::vector<MissingHour> missing;  ///< gaps inside the covered date range (warnings)
};

inline constexpr std::string_view kLoadsHeader = "household_id,timestamp,kwh";
inline constexpr std::string_view kCapacitiesHeader = "household_id,capacity_kwh,lambda_b";

/// Reads `household_id,timestamp,kwh` rows. Malformed rows, negative or
/// non-finite kWh and duplicate (id, hour) pairs are errors; missing hours
/// are reported, not rejected.
[[nodiscard]] inline IngestResult ingest_csv(std::istream& in, std::string_view source = "<stream>")
{
    IngestResult result;
    std::string line;
    std::size_t line_no = 0;
    const auto fail = [&](const std::string& what) {
        throw DataError(fmt::format("{}:{}: {}", source, line_no, what));
    };

    if (!std::getline(in, line)) throw DataError(fmt::format("{}: empty file", source));
    ++line_no;
    if (detail::trim(line) != kLoadsHeader) fail(fmt::format("expected header '{}'", kLoadsHeader));

    std::map<HouseholdId, std::set<HourStamp>> seen;
    while (std::getline(in, line)) {
        ++line_no;
        if (detail::trim(line).empty()) continue;
        const auto fields = detail::split_csv(line);
        if (fields.size() != 3) fail(fmt::format("expected 3 fields, got {}", fields.size()));
        if (fields[0].empty()) fail("empty household_id");
        const auto ts = parse_timestamp(fields[1]);
        if (!ts) fail(fmt::format("bad timestamp '{}'", fields[1]));
        const auto kwh = detail::parse_double(fields[2]);
        if (!kwh) fail(fmt::format("bad kwh '{}'", fields[2]));
        if (!std::isfinite(*kwh) || *kwh < 0.0) fail(fmt::format("kwh must be finite and >= 0, got {}", fields[2]));

        HourlyLoadRecord rec{HouseholdId{std::string(fields[0])}, *ts, *kwh};
        if (!seen[rec.id].insert(rec.timestamp).second) {
            fail(fmt::format("duplicate reading for household {} at {}", rec.id.value, format_timestamp(rec.timestamp)));
        }
        result.records.push_back(std::move(rec));
        ++result.rows;
    }

    result.households = seen.size();
    if (result.records.empty()) return result;

    auto first = DayStamp::max();
    auto last = DayStamp::min();
    for (const auto& rec : result.records) {
        const auto day = std::chrono::floor<std::chrono::days>(rec.timestamp);
        first = std::min(first, day);
        last = std::max(last, day);
    }
    result.days = static_cast<std::size_t>((last - first).count()) + 1;
    for (const auto& [id, hours] : seen) {
        if (hours.size() == result.days * 24) continue;
        for (auto day = first; day <= last; day += std::chrono::days{1}) {
            for (int h = 0; h < 24; ++h) {
                if (!hours.contains(HourStamp{day} + std::chrono::hours{h})) result.missing.push_back({id, day, h});
            }
        }
    }
    return result;
}

[[nodiscard]] inline IngestResult ingest_csv(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw DataError("cannot open " + path);
    return ingest_csv(in, path);
}

inline void write_loads_csv(std::ostream& out, const std::vector<HourlyLoadRecord>& records)
{
    out << kLoadsHeader << '\n';
    for (const auto& r : records) {
        out << fmt::format("{},{},{:.6f}\n", r.id.value, format_timestamp(r.timestamp), r.kwh);
    }
}

// ---------------------------------------------------------------------------
// Capacities CSV

[[nodiscard]] inline std::vector<StorageSpec> read_capacities_csv(std::istream& in, std::string_view source = "<stream>")
{
    std::vector<StorageSpec> specs;
    std::set<HouseholdId> ids;
    std::string line;
    std::size_t line_no = 0;
    const auto fail = [&](const std::string& what) {
        throw DataError(fmt::format("{}:{}: {}", source, line_no, what));
    };
    if (!std::getline(in, line)) throw DataError(fmt::format("{}: empty file", source));
    ++line_no;
    if (detail::trim(line) != kCapacitiesHeader) fail(fmt::format("expected header '{}'", kCapacitiesHeader));
    while (std::getline(in, line)) {
        ++line_no;
        if (detail::trim(line).empty()) continue;
        const auto fields = detail::split_csv(line);
        if (fields.size() != 3) fail(fmt::format("expected 3 fields, got {}", fields.size()));
        if (fields[0].empty()) fail("empty household_id");
        const auto cap = detail::parse_double(fields[1]);
        const auto lb = detail::parse_double(fields[2]);
        if (!cap || !std::isfinite(*cap) || *cap < 0.0) fail(fmt::format("bad capacity_kwh '{}'", fields[1]));
        if (!lb || !std::isfinite(*lb) || *lb < 0.0) fail(fmt::format("bad lambda_b '{}'", fields[2]));
        StorageSpec spec{HouseholdId{std::string(fields[0])}, *cap, *lb};
        if (!ids.insert(spec.id).second) fail("duplicate household " + spec.id.value);
        specs.push_back(std::move(spec));
    }
    if (specs.empty()) throw DataError(fmt::format("{}: no households", source));
    return specs;
}

[[nodiscard]] inline std::vector<StorageSpec> read_capacities_csv(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw DataError("cannot open " + path);
    return read_capacities_csv(in, path);
}

inline void write_capacities_csv(std::ostream& out, const std::vector<StorageSpec>& specs)
{
    out << kCapacitiesHeader << '\n';
    for (const auto& s : specs) out << fmt::format("{},{:.6f},{:.6f}\n", s.id.value, s.capacity_kwh, s.lambda_b);
}

// ---------------------------------------------------------------------------
// Day split

/// 24 hourly readings of one household on one calendar day; nullopt = missing.
using DayProfile = std::array<std::optional<double>, 24>;

struct DaySplit {
    double peak_kwh = 0.0;
    double offpeak_kwh = 0.0;
    int filled_hours = 0;
};

/// Peak energy is the sum over [start, end); every other hour of the same
/// calendar date is off-peak.
[[nodiscard]] inline DaySplit split_day(const DayProfile& hours, PeakWindow window, FillPolicy fill = FillPolicy::Reject)
{
    validate(window);
    DaySplit split;
    for (int h = 0; h < 24; ++h) {
        double v = 0.0;
        if (hours[static_cast<std::size_t>(h)]) {
            v = *hours[static_cast<std::size_t>(h)];
        } else if (fill == FillPolicy::Zero) {
            ++split.filled_hours;
        } else {
            throw DataError(fmt::format("missing reading for hour {}", h));
        }
        (window.contains(h) ? split.peak_kwh : split.offpeak_kwh) += v;
    }
    return split;
}

/// Records grouped by household and calendar day.
using LoadIndex = std::map<HouseholdId, std::map<DayStamp, DayProfile>>;

[[nodiscard]] inline LoadIndex index_loads(const std::vector<HourlyLoadRecord>& records)
{
    LoadIndex index;
    for (const auto& r : records) {
        const auto day = std::chrono::floor<std::chrono::days>(r.timestamp);
        const auto hour = static_cast<std::size_t>((r.timestamp - day).count());
        auto& slot = index[r.id][day][hour];
        if (slot) {
            throw DataError(fmt::format("duplicate reading for household {} at {}", r.id.value,
                                        format_timestamp(r.timestamp)));
        }
        slot = r.kwh;
    }
    return index;
}

}  // namespace storshare
