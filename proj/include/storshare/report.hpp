#pragma once

#include <filesystem>
#include <fstream>
#include <ostream>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "storshare/serialize.hpp"
#include "storshare/simulation.hpp"

namespace storshare {

inline constexpr std::string_view kSummaryFile = "summary.csv";
inline constexpr std::string_view kHouseholdFile = "household_savings.csv";
inline constexpr std::string_view kLedgerFile = "ledger.csv";
inline constexpr std::string_view kBundleFile = "report.json";

/// Five rows: without storage, with storage, with sharing, savings, percent.
inline void write_summary_csv(std::ostream& out, const AnnualReport& r)
{
    const auto& c = r.community;
    out << "metric,value\n";
    out << fmt::format("total_cost_without_storage,{:.6f}\n", c.cost_without_storage);
    out << fmt::format("total_cost_with_storage,{:.6f}\n", c.cost_with_storage);
    out << fmt::format("total_cost_with_sharing,{:.6f}\n", c.cost_with_sharing);
    out << fmt::format("total_cost_savings,{:.6f}\n", c.savings);
    out << fmt::format("percent_savings,{:.6f}\n", c.percent_savings);
}

inline void write_household_csv(std::ostream& out, const AnnualReport& r)
{
    out << "household_id,cost_without_storage,cost_with_storage,cost_with_sharing,savings,percent_savings\n";
    for (const auto& h : r.households) {
        out << fmt::format("{},{:.6f},{:.6f},{:.6f},{:.6f},{:.6f}\n", h.id.value, h.cost_without_storage,
                           h.cost_with_storage, h.cost_with_sharing, h.savings, h.percent_savings);
    }
}

inline constexpr std::string_view kLedgerHeader = "household_id,date,regime,E,D,p2p_kwh,grid_kwh,p,g,G";

inline void write_ledger_rows(std::ostream& out, const TradeLedger& l)
{
    const std::string date = format_date(l.date);
    for (const auto& p : l.positions) {
        out << fmt::format("{},{},{},{:.6f},{:.6f},{:.6f},{:.6f},{:.6f},{:.6f},{:.6f}\n", p.id.value, date,
                           to_string(l.regime), p.excess_kwh, p.deficit_kwh, p.p2p_kwh, p.grid_kwh, l.p2p_price,
                           p.grid_price, p.savings);
    }
}

/// One row per household per day.
inline void write_ledger_csv(std::ostream& out, const std::vector<TradeLedger>& ledgers)
{
    out << kLedgerHeader << '\n';
    for (const auto& l : ledgers) write_ledger_rows(out, l);
}

/// Writes the summary, per-household and ledger CSVs plus the JSON bundle
/// into `dir`, creating it if needed. Returns the written paths.
inline std::vector<std::filesystem::path> emit_report(const AnnualReport& r, const std::filesystem::path& dir)
{
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw DataError("cannot create output directory " + dir.string() + ": " + ec.message());

    std::vector<std::filesystem::path> written;
    const auto write = [&](std::string_view name, auto&& body) {
        const auto path = dir / name;
        std::ofstream out(path, std::ios::binary);
        if (!out) throw DataError("cannot write " + path.string());
        body(out);
        if (!out) throw DataError("error writing " + path.string());
        written.push_back(path);
    };
    write(kSummaryFile, [&](std::ostream& o) { write_summary_csv(o, r); });
    write(kHouseholdFile, [&](std::ostream& o) { write_household_csv(o, r); });
    write(kLedgerFile, [&](std::ostream& o) { write_ledger_csv(o, r.ledgers); });
    write(kBundleFile, [&](std::ostream& o) { o << to_json(r).dump(2) << '\n'; });
    return written;
}

}  // namespace storshare
