#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "levcool/error.hpp"
#include "levcool/output.hpp"

using namespace levcool;

namespace {

RunRecord record(double x, bool stable)
{
    RunRecord r;
    r.axes = {x};
    r.stable = stable;
    r.margin = stable ? -0.04 : 0.01;
    if (stable) {
        r.n_bar[0] = 0.1 * x;
        r.n_bar[1] = 0.2 * x;
        r.dark_residual[0] = 0.25;
    }
    return r;
}

int count(const std::string& s, const std::string& needle)
{
    int n = 0;
    for (auto p = s.find(needle); p != std::string::npos; p = s.find(needle, p + 1))
        ++n;
    return n;
}

}  // namespace

TEST_CASE("CSV schema and blanks")
{
    const std::string csv = emit_csv({record(1.0, true), record(2.0, false)}, {"detuning"});
    std::istringstream in(csv);
    std::string header, a, b, extra;
    std::getline(in, header);
    std::getline(in, a);
    std::getline(in, b);
    CHECK_FALSE(std::getline(in, extra));
    CHECK(header == "detuning,n_1x,n_2x,n_1z,n_2z,stable,margin,dark_residual_x,dark_residual_z,error");
    CHECK(a == "1,0.1,0.2,,,1,-0.04,0.25,,");
    CHECK(b == "2,,,,,0,0.01,,,");
}

TEST_CASE("failed rows leave stability blank and quote the message")
{
    RunRecord r;
    r.axes = {0.5, 2.0};
    r.failure = FailureKind::config;
    r.error = "kappa must be positive, got \"-1\"";
    const std::string csv = emit_csv({r}, {"a", "b"});
    CHECK(csv.find("0.5,2,,,,,,,,,\"kappa must be positive, got \"\"-1\"\"\"\n") != std::string::npos);
}

TEST_CASE("CSV numbers round trip")
{
    RunRecord r = record(0.1 + 0.2, true);
    r.n_bar[2] = 1.0 / 3.0;
    const std::string csv = emit_csv({r}, {"x"});
    CHECK(csv.find("0.30000000000000004,") != std::string::npos);
    CHECK(csv.find("0.3333333333333333,") != std::string::npos);
}

TEST_CASE("line plot and heatmap")
{
    std::vector<RunRecord> recs;
    for (int i = 1; i <= 5; ++i)
        recs.push_back(record(i, i != 3));
    SweepAxis axis{"detuning", 1.0, 5.0, 5, ""};
    const std::string svg = emit_svg(recs, {axis});
    CHECK(svg.rfind("<svg", 0) == 0);
    CHECK(svg.find("</svg>") != std::string::npos);
    // The unstable point splits each curve in two.
    CHECK(count(svg, "<polyline") == 4);
    CHECK(svg.find("n_1x") != std::string::npos);

    std::vector<RunRecord> grid;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 2; ++j) {
            RunRecord r = record(1.0 + i + j, !(i == 1 && j == 1));
            r.axes = {double(i), double(j)};
            grid.push_back(r);
        }
    const std::string heat =
        emit_svg(grid, {SweepAxis{"power1", 0, 2, 3, "W"}, SweepAxis{"power2", 0, 1, 2, "W"}});
    CHECK(heat.find("log10 n_1x") != std::string::npos);
    CHECK(heat.find("log10 n_2x") != std::string::npos);
    CHECK(heat.find("log10 n_1z") == std::string::npos);
    CHECK(emit_svg(grid, {SweepAxis{"power1", 0, 2, 3, "W"}, SweepAxis{"power2", 0, 1, 2, "W"}}) == heat);
}

TEST_CASE("all-unstable sweep gives an annotated empty plot")
{
    const std::vector<RunRecord> recs{record(1.0, false), record(2.0, false)};
    const std::string svg = emit_svg(recs, {SweepAxis{"detuning", 1.0, 2.0, 2, ""}});
    CHECK(svg.find("no stable points") != std::string::npos);
    CHECK(count(svg, "<polyline") == 0);
    const std::string heat = emit_svg(recs, {SweepAxis{"a", 0, 1, 2, ""}, SweepAxis{"b", 0, 1, 1, ""}});
    CHECK(heat.find("no stable points") != std::string::npos);
}

TEST_CASE("force tables")
{
    const std::vector<ForceScanRow> rows{{1.0, 6.28, 1e-13, 2e-13, -3e-13, 4e-13}};
    CHECK(emit_force_csv(rows) == "r_over_lambda,kr,fx_exact,fx_far,fz_exact,fz_far\n1,6.28,1e-13,2e-13,-3e-13,4e-13\n");
    const std::string svg = emit_force_svg(rows);
    CHECK(count(svg, "<polyline") == 4);
}

TEST_CASE("file output")
{
    const std::string path = "levcool_output_test.csv";
    write_file(path, "a,b\n");
    std::ifstream in(path);
    std::string line;
    std::getline(in, line);
    CHECK(line == "a,b");
    std::remove(path.c_str());
    CHECK_THROWS_AS(write_file("/nonexistent-dir/x.csv", "a"), IoError);
}
