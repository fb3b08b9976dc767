// austere-kit: command-line driver for austerity and Lagrangian checks.

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "austere/austere.hpp"

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) austere::fail(austere::Errc::config, "cannot read " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_output(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) austere::fail(austere::Errc::config, "cannot write " + path);
    out << text;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Austerity and Lagrangian checks for submanifolds of CP^n"};
    app.require_subcommand(1);

    std::string config_path, output, format, plot;
    std::uint64_t seed = 0;
    double tol_austere = 0.0, tol_lagrangian = 0.0;
    bool timing = false;

    auto* run_cmd = app.add_subcommand("run", "run the checks described by a configuration file");
    run_cmd->add_option("config", config_path, "configuration file (JSON)")->required();
    auto* seed_opt = run_cmd->add_option("--seed", seed, "override sampling.seed");
    auto* ta_opt = run_cmd->add_option("--tol-austere", tol_austere, "override tolerances.austere");
    auto* tl_opt = run_cmd->add_option("--tol-lagrangian", tol_lagrangian, "override tolerances.lagrangian");
    auto* fmt_opt = run_cmd->add_option("--format", format, "report format")->check(CLI::IsMember({"json", "csv"}));
    run_cmd->add_option("--plot", plot, "write phase curves of the worst samples as SVG");
    run_cmd->add_option("-o,--output", output, "report path (default: config output.path, else stdout)");

    auto* catalog_cmd = app.add_subcommand("catalog", "catalog operations");
    catalog_cmd->require_subcommand(1);
    catalog_cmd->add_subcommand("list", "list catalog entries");

    std::uint64_t verify_seed = 1;
    std::string verify_output;
    auto* verify_cmd = app.add_subcommand("verify-all", "run the full acceptance suite");
    verify_cmd->add_option("--seed", verify_seed, "seed for the randomized criteria");
    verify_cmd->add_option("-o,--output", verify_output, "report path (default: stdout)");
    verify_cmd->add_flag("--timing", timing, "include wall-clock seconds (breaks byte-identical output)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run_cmd->parsed()) {
            austere::RunConfig cfg = austere::parse_config(read_file(config_path));
            if (*seed_opt) cfg.plan.seed = seed;
            if (*ta_opt) cfg.tol_austere = tol_austere;
            if (*tl_opt) cfg.tol_lagrangian = tol_lagrangian;
            if (*fmt_opt) cfg.format = format;
            if (!output.empty()) cfg.output_path = output;
            const austere::RunOutcome out = austere::run(cfg);
            write_output(cfg.output_path,
                         cfg.format == "csv" ? austere::report_csv(out.report) : out.document.dump(2) + "\n");
            if (!plot.empty()) write_output(plot, austere::phase_plot_svg(out.report));
            std::cerr << out.report.label << ": " << austere::to_string(out.report.verdict) << ", status "
                      << out.status << '\n';
            return static_cast<int>(out.exit_code);
        }
        if (catalog_cmd->parsed()) {
            for (const auto& name : austere::catalog_names()) {
                const austere::CatalogEntry e = austere::catalog_entry(name);
                std::cout << name << "  n=" << e.spec.n << " k=" << e.spec.k
                          << "  expected=" << austere::to_string(e.expected) << "  " << e.provenance << '\n';
            }
            return 0;
        }
        if (verify_cmd->parsed()) {
            const auto suite = austere::verify_all(verify_seed, true, timing);
            write_output(verify_output, suite.document.dump(2) + "\n");
            for (const auto& c : suite.criteria) std::cerr << (c.passed ? "PASS " : "FAIL ") << c.id << '\n';
            return suite.passed() ? 0 : 1;
        }
    } catch (const austere::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return static_cast<int>(austere::ExitCode::error);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return static_cast<int>(austere::ExitCode::error);
    }
    return 0;
}
