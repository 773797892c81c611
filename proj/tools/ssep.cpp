// Command-line front end: exact | simulate | verify | report.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include <CLI11.hpp>

#include "cli/config.hpp"
#include "cli/report.hpp"

namespace {

using namespace ssep;
using namespace ssep::cli;

struct Flags {
    std::string config_path;
    std::optional<std::string> output;
    std::optional<std::string> format;
    std::optional<std::uint64_t> seed;
    std::optional<std::uint64_t> events;
    std::optional<int> replicas;
    double perturb = 1.0;
};

void add_common(CLI::App* cmd, Flags& flags)
{
    cmd->add_option("--config", flags.config_path, "YAML config file")->check(CLI::ExistingFile);
    cmd->add_option("--output", flags.output, "Output path (default: stdout)");
    cmd->add_option("--format", flags.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
    cmd->add_option("--seed", flags.seed, "Simulation seed");
    cmd->add_option("--events", flags.events, "Events per replica");
    cmd->add_option("--replicas", flags.replicas, "Independent replicas");
}

RunConfig resolve(const Flags& flags)
{
    RunConfig c = flags.config_path.empty() ? default_config() : load_config(flags.config_path);
    if (flags.output) c.output = *flags.output;
    if (flags.format) c.format = *flags.format;
    if (flags.seed) c.sim.seed = *flags.seed;
    if (flags.events) c.sim.max_events = *flags.events;
    if (flags.replicas) c.sim.replicas = *flags.replicas;
    c.validate();
    return c;
}

void write_text(const std::string& path, const std::string& text)
{
    if (path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw Error("cannot write '" + path + "'");
    out << text;
}

void emit_json(const RunConfig& c, const nlohmann::json& doc)
{
    write_text(c.output, doc.dump(2) + "\n");
}

void emit_tables(const RunConfig& c, const std::vector<CsvTable>& tables)
{
    if (c.output.empty()) {
        for (std::size_t i = 0; i < tables.size(); ++i)
            std::cout << (i ? "\n" : "") << "# " << tables[i].name << "\n" << tables[i].text;
        return;
    }
    std::filesystem::path stem(c.output);
    if (stem.extension() == ".csv")
        stem.replace_extension();
    for (const CsvTable& t : tables)
        write_text(stem.string() + "_" + t.name + ".csv", t.text);
}

nlohmann::json error_document(const std::string& kind, const std::string& message)
{
    return {{"error", {{"kind", kind}, {"message", message}}}};
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Open-boundary multi-type symmetric exclusion process: exact solution, "
                 "simulation and verification"};
    app.require_subcommand(1);
    Flags flags;

    auto* exact = app.add_subcommand("exact", "Stationary distribution, solved and closed form");
    auto* simulate = app.add_subcommand("simulate", "Kinetic Monte Carlo estimates of flux, sojourn and marginals");
    auto* verify = app.add_subcommand("verify", "Invariant battery; exit status 1 if any check fails");
    auto* report = app.add_subcommand("report", "exact + simulate + comparison in one document");
    for (auto* cmd : {exact, simulate, verify, report})
        add_common(cmd, flags);
    verify->add_option("--perturb-hop", flags.perturb,
                       "Test mode: scale one hop rate of the generator by this factor");

    CLI11_PARSE(app, argc, argv);

    try {
        const RunConfig c = resolve(flags);
        if (exact->parsed()) {
            const ExactResult r = compute_exact(c);
            if (c.format == "csv")
                emit_tables(c, exact_tables(r, c.model));
            else
                emit_json(c, exact_report(c, r));
        } else if (simulate->parsed()) {
            const SimulationResult r = compute_simulation(c);
            if (c.format == "csv")
                emit_tables(c, simulate_tables(r));
            else
                emit_json(c, simulate_report(c, r));
        } else if (verify->parsed()) {
            if (c.format == "csv") {
                const auto checks = run_checks(c, flags.perturb);
                emit_tables(c, {checks_csv(checks)});
                for (const auto& ch : checks)
                    if (ch.status == CheckResult::Status::Fail)
                        return 1;
                return 0;
            }
            auto [doc, ok] = verify_report(c, flags.perturb);
            emit_json(c, doc);
            return ok ? 0 : 1;
        } else if (report->parsed()) {
            if (c.format == "csv") {
                const ExactResult e = compute_exact(c);
                const SimulationResult s = compute_simulation(c);
                auto tables = exact_tables(e, c.model);
                for (auto& t : simulate_tables(s)) {
                    t.name = "empirical_" + t.name;
                    tables.push_back(std::move(t));
                }
                emit_tables(c, tables);
            } else {
                emit_json(c, full_report(c));
            }
        }
    } catch (const StateSpaceOverflowError& e) {
        auto doc = error_document("cap_exceeded", e.what());
        doc["error"]["limit"] = e.limit();
        std::cerr << doc.dump(2) << "\n";
        return 2;
    } catch (const ConfigError& e) {
        std::cerr << error_document("invalid_config", e.what()).dump(2) << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << error_document("error", e.what()).dump(2) << "\n";
        return 2;
    }
    return 0;
}
