#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "workerrep/gasmodel.hpp"
#include "workerrep/io.hpp"
#include "workerrep/ledger.hpp"
#include "workerrep/platform.hpp"
#include "workerrep/sim/harness.hpp"

namespace fs = std::filesystem;
using namespace workerrep;

namespace {

constexpr int kOk = 0;
constexpr int kDomainError = 1;
constexpr int kUsageError = 2;

// Binary snapshot as written by `run`.
std::vector<LedgerEntry> load_trace(const fs::path& path) { return decode_snapshot(read_file(path)); }

int cmd_run(const fs::path& scenario_path, std::optional<std::uint64_t> seed, fs::path out,
            const std::string& format) {
    sim::ScenarioConfig config = sim::parse_scenario(read_text_file(scenario_path));
    if (seed) config.seed = *seed;  // the flag wins over the file
    sim::RunResult result = sim::run(config);

    fs::create_directories(out);
    write_file_atomic(out / "trace.bin", encode_snapshot(result.trace));
    write_file_atomic(out / "trace.json", snapshot_sidecar_json(result.trace));
    if (format != "csv") write_file_atomic(out / "report.json", sim::report_json(result.report, config));
    if (format != "json") write_file_atomic(out / "metrics.csv", sim::metrics_csv(result.report));
    write_file_atomic(out / "store_manifest.json", result.store_manifest);
    result.store.dump(out / "store");

    const sim::RunReport& r = result.report;
    std::cout << "ticks " << r.ticks_run << "\n"
              << "entries " << result.trace.size() << "\n"
              << "state_root " << r.state_root.hex() << "\n"
              << "conservation_residual " << r.conservation_residual << "\n"
              << "total_gas " << r.total_gas << "\n"
              << "output " << out.string() << "\n";
    return kOk;
}

int cmd_replay(const fs::path& trace) {
    ChainState chain = replay(load_trace(trace));
    std::cout << chain.state_root.hex() << "\n";
    return kOk;
}

int cmd_verify(const fs::path& trace) {
    std::vector<LedgerEntry> entries = load_trace(trace);
    VerificationReport report = verify_chain(entries);
    std::cout << report.describe() << "\n";
    if (!report.ok) return kDomainError;
    std::cout << "entries " << entries.size() << "\n";
    return kOk;
}

int cmd_report(const fs::path& trace, const std::string& kind, const std::string& format,
               std::optional<SubmissionId> submission) {
    std::vector<LedgerEntry> entries = load_trace(trace);
    ChainState chain = replay(entries);
    const PlatformState& s = chain.state;
    if (kind == "accounts") {
        std::cout << s.accounts.roster_json() << "\n";
    } else if (kind == "tasks") {
        std::cout << (format == "csv" ? s.market.listing_csv() : s.market.listing_json() + "\n");
    } else if (kind == "gas") {
        GasSchedule schedule;
        std::cout << cost_report_csv(cost_report(entries, schedule));
    } else {
        if (!submission) {
            for (const auto& sub : s.submissions.all()) std::cout << s.evaluations.audit_json(sub.id) << "\n";
        } else {
            std::cout << s.evaluations.audit_json(*submission) << "\n";
        }
    }
    return kOk;
}

int cmd_gas_table(double gwei, double usd) {
    std::cout << "operation,gas,usd,reference_usd\n";
    std::uint64_t total = 0;
    for (const auto& row : measured_gas_table()) {
        std::cout << gas_kind_label(row.kind) << "," << row.gas << "," << format_usd(cost_usd(row.gas, gwei, usd))
                  << "," << format_usd(row.reference_usd) << "\n";
        // Account creation is a one-off, not part of a task's lifecycle.
        if (row.kind != GasKind::kCreateWorker && row.kind != GasKind::kCreateTaskPoster) total += row.gas;
    }
    std::cout << "lifecycle total," << total << "," << format_usd(cost_usd(total, gwei, usd)) << ","
              << format_usd(kReferenceLifecycleUsd) << "\n";
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"WorkerRep protocol simulator and ledger tools"};
    app.require_subcommand(1, 1);

    fs::path scenario;
    fs::path trace;
    std::optional<std::uint64_t> seed;
    const char* env_out = std::getenv("WORKERREP_OUT");
    fs::path out = env_out != nullptr ? fs::path(env_out) : fs::path("out");
    std::string format = "all";
    std::string kind = "accounts";
    std::optional<SubmissionId> submission;
    double gwei = 1.0;
    double usd = 144.30;

    auto* run = app.add_subcommand("run", "Run a scenario and write its trace and reports");
    run->add_option("--scenario", scenario, "Scenario JSON file")->required()->check(CLI::ExistingFile);
    run->add_option("--seed", seed, "Overrides the scenario seed");
    run->add_option("--out", out, "Output directory (default $WORKERREP_OUT or ./out)");
    run->add_option("--format", format, "Report files to write")->check(CLI::IsMember({"json", "csv", "all"}));

    auto* rep = app.add_subcommand("replay", "Re-derive state from a trace and print its state root");
    rep->add_option("--trace", trace, "Ledger snapshot")->required()->check(CLI::ExistingFile);

    auto* ver = app.add_subcommand("verify", "Check a trace's hash chain and signatures");
    ver->add_option("--trace", trace, "Ledger snapshot")->required()->check(CLI::ExistingFile);

    auto* report = app.add_subcommand("report", "Print a view of the state derived from a trace");
    report->add_option("--trace", trace, "Ledger snapshot")->required()->check(CLI::ExistingFile);
    report->add_option("--kind", kind)->check(CLI::IsMember({"accounts", "tasks", "gas", "audit"}));
    report->add_option("--format", format, "Task listing format")->check(CLI::IsMember({"json", "csv", "all"}));
    report->add_option("--submission", submission, "Audit a single submission");

    auto* gas = app.add_subcommand("gas-table", "Print the measured per-call gas table");
    gas->add_option("--gwei", gwei, "Gas price in Gwei")->check(CLI::PositiveNumber);
    gas->add_option("--usd", usd, "Ether price in USD")->check(CLI::PositiveNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kOk : kUsageError;
    }

    try {
        if (*run) return cmd_run(scenario, seed, out, format);
        if (*rep) return cmd_replay(trace);
        if (*ver) return cmd_verify(trace);
        if (*report) return cmd_report(trace, kind, format, submission);
        return cmd_gas_table(gwei, usd);
    } catch (const ProtocolError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kDomainError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kDomainError;
    }
}
