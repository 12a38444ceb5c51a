#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "levcool/config.hpp"
#include "levcool/error.hpp"
#include "levcool/optics.hpp"
#include "levcool/output.hpp"
#include "levcool/selfcheck.hpp"
#include "levcool/sweep.hpp"

namespace {

constexpr int exit_config = 2;
constexpr int exit_numerical = 3;
constexpr int exit_io = 1;

std::string read_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw levcool::ConfigError(levcool::ConfigErrorKind::parse_error, "", 0, "cannot read '" + path + "'");
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

std::string svg_path(const std::string& csv)
{
    const auto dot = csv.rfind('.');
    const auto slash = csv.rfind('/');
    if (dot == std::string::npos || (slash != std::string::npos && dot < slash))
        return csv + ".svg";
    return csv.substr(0, dot) + ".svg";
}

void print_record(const levcool::RunRecord& r)
{
    const char* labels[4] = {"1x", "2x", "1z", "2z"};
    std::printf("stable   %s%s\n", r.stable ? "yes" : "no", r.marginal ? " (marginal)" : "");
    std::printf("margin   %.6e\n", r.margin);
    for (int l = 0; l < 4; ++l)
        if (r.n_bar[l])
            std::printf("n_%s     %.6e\n", labels[l], *r.n_bar[l]);
    if (r.dark_residual[0])
        std::printf("dark residual x  %.3e\n", *r.dark_residual[0]);
    if (r.dark_residual[1])
        std::printf("dark residual z  %.3e\n", *r.dark_residual[1]);
}

int finish(const std::string& contents, const std::string& out)
{
    if (out.empty())
        std::cout << contents;
    else
        levcool::write_file(out, contents);
    return 0;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"levcool: cavity cooling of two levitated nanoparticles"};
    app.require_subcommand(1);

    std::string config_path, out_path;
    bool svg = false;
    int workers = 1;

    auto* run = app.add_subcommand("run", "single-shot evaluation of a config");
    run->add_option("config", config_path, "config file")->required();
    run->add_option("--out", out_path, "write a one-row CSV here");

    auto* sweep = app.add_subcommand("sweep", "evaluate a 1- or 2-axis grid");
    sweep->add_option("spec", config_path, "sweep spec file")->required();
    sweep->add_option("--out", out_path, "CSV path (overrides the spec's output key; stdout if neither)");
    sweep->add_flag("--svg", svg, "also write an SVG next to the CSV");
    sweep->add_option("--workers", workers, "worker threads")->check(CLI::Range(1, 256));

    auto* scan = app.add_subcommand("force-scan", "binding force versus separation");
    scan->add_option("config", config_path, "physical config with scan_start, scan_stop, scan_points")->required();
    scan->add_option("--out", out_path, "CSV path (stdout if absent)");
    scan->add_flag("--svg", svg, "also write an SVG next to the CSV");

    auto* check = app.add_subcommand("check", "run the invariant self-checks");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*run) {
            const levcool::RunRecord rec = levcool::evaluate(levcool::load_config(read_file(config_path)));
            if (rec.failure == levcool::FailureKind::config) {
                std::cerr << "error: " << rec.error << '\n';
                return exit_config;
            }
            if (rec.failure == levcool::FailureKind::numerical) {
                std::cerr << "numerical failure: " << rec.error << '\n';
                return exit_numerical;
            }
            print_record(rec);
            if (!out_path.empty())
                levcool::write_file(out_path, levcool::emit_csv({rec}, {}));
            return 0;
        }
        if (*sweep) {
            const levcool::SweepSpec spec = levcool::parse_sweep(read_file(config_path));
            const auto records = levcool::run_sweep(spec, workers);
            std::vector<std::string> names;
            for (const auto& a : spec.axes)
                names.push_back(a.key);
            const std::string out = !out_path.empty() ? out_path : spec.output.value_or("");
            if (svg && out.empty()) {
                std::cerr << "error: --svg needs an output path\n";
                return exit_config;
            }
            finish(levcool::emit_csv(records, names), out);
            if (svg)
                levcool::write_file(svg_path(out), levcool::emit_svg(records, spec.axes));
            return 0;
        }
        if (*scan) {
            const levcool::ForceScanSpec spec = levcool::load_force_scan(read_file(config_path));
            const auto rows = levcool::force_scan(spec.start, spec.stop, spec.points, spec.params);
            if (svg && out_path.empty()) {
                std::cerr << "error: --svg needs --out\n";
                return exit_config;
            }
            finish(levcool::emit_force_csv(rows), out_path);
            if (svg)
                levcool::write_file(svg_path(out_path), levcool::emit_force_svg(rows));
            return 0;
        }
        if (*check) {
            bool all = true;
            for (const auto& c : levcool::run_self_checks()) {
                std::printf("%s  %s (%s)\n", c.passed ? "PASS" : "FAIL", c.name.c_str(), c.detail.c_str());
                all = all && c.passed;
            }
            return all ? 0 : exit_numerical;
        }
    }
    catch (const levcool::ConfigError& e) {
        std::cerr << "config error [" << levcool::to_string(e.kind()) << "]: " << e.what() << '\n';
        return exit_config;
    }
    catch (const levcool::InvalidInput& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_config;
    }
    catch (const levcool::IoError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_io;
    }
    catch (const std::exception& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return exit_numerical;
    }
    return 0;
}
