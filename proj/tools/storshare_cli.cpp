// Command-line front end. Exit codes: 0 ok, 1 validation failure, 2 data error,
// 3 property violation.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "storshare/storshare.hpp"

using namespace storshare;
namespace fs = std::filesystem;

namespace {

enum Exit : int { kOk = 0, kValidation = 1, kData = 2, kProperty = 3 };

struct Common {
    std::string tariff_path;
    std::string loads_path;
    std::string capacities_path;
    std::string out_dir;
    std::string peak_window = "8:22";
    std::uint64_t seed = 42;
    std::size_t enum_cap = 20;
    bool fill_missing = false;
};

Tariff load_tariff(const std::string& path)
{
    if (path.empty()) return kCaseStudyTariff;
    std::ifstream in(path);
    if (!in) throw DataError("cannot open " + path);
    try {
        return tariff_from_json(nlohmann::json::parse(in));
    } catch (const nlohmann::json::exception& e) {
        throw DataError(path + ": " + e.what());
    }
}

DayStamp parse_day_flag(const std::string& text)
{
    const auto d = parse_date(text);
    if (!d) throw ValidationError("bad --date '" + text + "', expected YYYY-MM-DD");
    return *d;
}

/// Loads, capacities and window into a config; the tariff is set by the caller.
SimulationConfig load_config(const Common& o, LoadIndex& index)
{
    if (o.loads_path.empty() || o.capacities_path.empty()) {
        throw ValidationError("--loads and --capacities are required");
    }
    const auto ingest = ingest_csv(o.loads_path);
    if (!ingest.missing.empty()) {
        std::cerr << fmt::format("warning: {} missing hourly values in {}\n", ingest.missing.size(), o.loads_path);
        const auto& m = ingest.missing.front();
        std::cerr << fmt::format("  first: {} {} hour {}\n", m.id.value, format_date(m.day), m.hour);
    }
    index = index_loads(ingest.records);

    SimulationConfig cfg;
    cfg.households = read_capacities_csv(o.capacities_path);
    cfg.window = parse_peak_window(o.peak_window);
    cfg.seed = o.seed;
    cfg.enumeration_cap = o.enum_cap;
    cfg.fill = o.fill_missing ? FillPolicy::Zero : FillPolicy::Reject;
    return cfg;
}

void write_file(const fs::path& path, const std::string& body)
{
    std::error_code ec;
    if (path.has_parent_path()) fs::create_directories(path.parent_path(), ec);
    std::ofstream out(path, std::ios::binary);
    if (!out || !(out << body)) throw DataError("cannot write " + path.string());
}

int run_validate_tariff(const Common& o)
{
    if (o.tariff_path.empty()) throw ValidationError("--tariff is required");
    const auto result = validate_tariff(load_tariff(o.tariff_path));
    std::cout << to_json(result).dump(2) << '\n';
    return result.ok() ? kOk : kValidation;
}

int run_gen_data(const Common& o, const SyntheticConfig& base, const std::string& start)
{
    if (o.out_dir.empty()) throw ValidationError("--out is required");
    SyntheticConfig cfg = base;
    cfg.seed = o.seed;
    cfg.window = parse_peak_window(o.peak_window);
    cfg.first_day = parse_day_flag(start);
    const auto data = generate_synthetic(cfg);

    std::ostringstream loads;
    write_loads_csv(loads, data.records);
    std::ostringstream caps;
    write_capacities_csv(caps, data.storage);
    const fs::path dir = o.out_dir;
    write_file(dir / "loads.csv", loads.str());
    write_file(dir / "capacities.csv", caps.str());
    std::cout << fmt::format("wrote {} records for {} households to {}\n", data.records.size(), data.storage.size(),
                             dir.string());
    return kOk;
}

int run_simulate(const Common& o)
{
    LoadIndex index;
    auto cfg = load_config(o, index);
    cfg.tariff = load_tariff(o.tariff_path);
    const auto report = simulate(index, cfg);

    const auto& c = report.community;
    std::cout << fmt::format("days: {}\nhouseholds: {}\n", report.days.size(), report.households.size());
    std::cout << fmt::format("total_cost_without_storage: {:.6f}\n", c.cost_without_storage);
    std::cout << fmt::format("total_cost_with_storage: {:.6f}\n", c.cost_with_storage);
    std::cout << fmt::format("total_cost_with_sharing: {:.6f}\n", c.cost_with_sharing);
    std::cout << fmt::format("total_cost_savings: {:.6f}\n", c.savings);
    std::cout << fmt::format("percent_savings: {:.6f}\n", c.percent_savings);
    if (report.filled_hours > 0) std::cerr << fmt::format("warning: {} hours filled with zero\n", report.filled_hours);
    if (!o.out_dir.empty()) {
        for (const auto& p : emit_report(report, o.out_dir)) std::cout << "wrote " << p.string() << '\n';
    }
    for (const auto& f : report.invariant_failures) std::cerr << "violation: " << f << '\n';
    return report.ok() ? kOk : kProperty;
}

/// Picks --date, or the earliest day present in the loads.
DayStamp resolve_day(const LoadIndex& index, const std::string& date)
{
    if (!date.empty()) return parse_day_flag(date);
    auto first = DayStamp::max();
    for (const auto& [id, days] : index) {
        if (!days.empty()) first = std::min(first, days.begin()->first);
    }
    if (first == DayStamp::max()) throw DataError("no load data");
    return first;
}

int run_core_check(const Common& o, const std::string& date, std::optional<std::size_t> samples, bool skip_tariff)
{
    LoadIndex index;
    auto cfg = load_config(o, index);
    cfg.tariff = load_tariff(o.tariff_path);
    if (!skip_tariff) require_valid(cfg.tariff);
    const auto day = build_day(index, cfg, resolve_day(index, date));

    CoreReport report;
    if (samples && day.size() > cfg.enumeration_cap) {
        report = check_core_sampled(day, cfg.tariff, *samples, cfg.seed, cfg.tol);
    } else {
        report = check_core(day, cfg.tariff, {cfg.enumeration_cap, cfg.tol});
    }
    std::cout << to_json(report).dump(2) << '\n';
    if (!o.out_dir.empty()) write_file(fs::path(o.out_dir) / "core_report.json", to_json(report).dump(2) + "\n");
    return report.ok() ? kOk : kProperty;
}

int run_settle_day(const Common& o, const std::string& date)
{
    LoadIndex index;
    auto cfg = load_config(o, index);
    cfg.tariff = load_tariff(o.tariff_path);
    require_valid(cfg.tariff);
    const auto day = build_day(index, cfg, resolve_day(index, date));

    const auto ledger = settle_day(day, cfg.tariff);
    const auto check = savings_consistency(ledger, allocate(day, cfg.tariff), standalone_costs(day, cfg.tariff), cfg.tol);
    std::cout << to_json(ledger).dump(2) << '\n';
    if (!o.out_dir.empty()) {
        std::ostringstream csv;
        write_ledger_csv(csv, {ledger});
        write_file(fs::path(o.out_dir) / "ledger.csv", csv.str());
    }
    for (const auto& f : check.failures) std::cerr << "violation: " << f << '\n';
    return check.ok() ? kOk : kProperty;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Storage sharing simulator for household energy communities"};
    app.require_subcommand(1);

    Common o;
    const auto add_data_flags = [&](CLI::App* sub) {
        sub->add_option("--tariff", o.tariff_path, "tariff JSON (default 0.54/0.22/0.30/0.13)");
        sub->add_option("--loads", o.loads_path, "hourly loads CSV");
        sub->add_option("--capacities", o.capacities_path, "storage capacities CSV");
        sub->add_option("--out", o.out_dir, "output directory");
        sub->add_option("--seed", o.seed, "random seed");
        sub->add_option("--peak-window", o.peak_window, "peak hours as start:end");
        sub->add_option("--enum-cap", o.enum_cap, "largest community checked exhaustively");
        sub->add_flag("--fill-missing", o.fill_missing, "treat missing hours as zero consumption");
    };

    auto* validate = app.add_subcommand("validate-tariff", "check tariff ordering conditions");
    validate->add_option("--tariff", o.tariff_path, "tariff JSON")->required();

    SyntheticConfig synth;
    std::string start = "2016-01-01";
    auto* gen = app.add_subcommand("gen-data", "write a synthetic loads and capacities pair");
    gen->add_option("--out", o.out_dir, "output directory")->required();
    gen->add_option("--seed", o.seed, "random seed");
    gen->add_option("--households", synth.households, "number of households");
    gen->add_option("--days", synth.days, "number of days");
    gen->add_option("--start-date", start, "first day, YYYY-MM-DD");
    gen->add_option("--peak-window", o.peak_window, "peak hours as start:end");

    auto* sim = app.add_subcommand("simulate", "run every day and write the annual report");
    add_data_flags(sim);

    std::string date;
    std::optional<std::size_t> samples;
    bool skip_tariff = false;
    auto* core = app.add_subcommand("core-check", "verify the allocation lies in the core for one day");
    add_data_flags(core);
    core->add_option("--date", date, "day to check, YYYY-MM-DD (default first day)");
    core->add_option("--samples", samples, "random coalitions when the community exceeds --enum-cap");
    core->add_flag("--skip-tariff-check", skip_tariff, "evaluate even if the tariff breaks its ordering");

    auto* settle = app.add_subcommand("settle-day", "print the P2P trade ledger for one day");
    add_data_flags(settle);
    settle->add_option("--date", date, "day to settle, YYYY-MM-DD (default first day)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        (void)app.exit(e);
        return kValidation;
    }

    try {
        if (*validate) return run_validate_tariff(o);
        if (*gen) return run_gen_data(o, synth, start);
        if (*sim) return run_simulate(o);
        if (*core) return run_core_check(o, date, samples, skip_tariff);
        if (*settle) return run_settle_day(o, date);
    } catch (const ValidationError& e) {
        std::cerr << "validation error: " << e.what() << '\n';
        return kValidation;
    } catch (const DataError& e) {
        std::cerr << "data error: " << e.what() << '\n';
        return kData;
    }
    return kValidation;
}
