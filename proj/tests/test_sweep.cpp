#include <doctest.h>

#include "levcool/output.hpp"
#include "levcool/sweep.hpp"

using namespace levcool;

namespace {

const std::string reduced3 = R"(mode = reduced3
omega2 = 0.75
g1 = 0.22
g2 = -0.19
g_x = -0.046
detuning = 1.0
kappa = 0.2
gamma = 0.5e-8
n_th = 1e5
)";

}  // namespace

TEST_CASE("sweep spec parsing")
{
    const SweepSpec s = parse_sweep(reduced3 + "axis1 = detuning 0.5 1.5 11\naxis2 = kappa 0.1 0.3 3\noutput = out.csv\n");
    REQUIRE(s.axes.size() == 2);
    CHECK(s.axes[0].key == "detuning");
    CHECK(s.axes[1].count == 3);
    CHECK(s.size() == 33);
    CHECK(s.output.value() == "out.csv");
    CHECK(s.mode() == "reduced3");
    CHECK(s.fixed.find("axis1") == nullptr);
    CHECK(s.axes[0].value(0) == 0.5);
    CHECK(s.axes[0].value(10) == 1.5);
    CHECK(s.axes[0].value(5) == doctest::Approx(1.0).epsilon(1e-15));

    CHECK_THROWS_AS(parse_sweep(reduced3), ConfigError);
    CHECK_THROWS_AS(parse_sweep(reduced3 + "axis1 = detuning 0.5 1.5 1\n"), ConfigError);
    CHECK_THROWS_AS(parse_sweep(reduced3 + "axis1 = detuning 0.5 1.5 2.5\n"), ConfigError);
    CHECK_THROWS_AS(parse_sweep(reduced3 + "axis1 = wibble 0.5 1.5 3\n"), ConfigError);
    CHECK_THROWS_AS(parse_sweep(reduced3 + "axis1 = mode 0.5 1.5 3\n"), ConfigError);
    CHECK_THROWS_AS(parse_sweep(reduced3 + "axis1 = kappa 0.1 1 3\naxis2 = kappa 0.1 1 3\n"), ConfigError);
    CHECK_THROWS_AS(parse_sweep(reduced3 + "axis1 = kappa 0.1\n"), ConfigError);
}

TEST_CASE("grid order: first axis outermost")
{
    const SweepSpec s = parse_sweep(reduced3 + "axis1 = detuning 0.5 1.5 3\naxis2 = kappa 0.1 0.3 2\n");
    const auto recs = run_sweep(s);
    REQUIRE(recs.size() == 6);
    CHECK(recs[0].axes == std::vector<double>{0.5, 0.1});
    CHECK(recs[1].axes == std::vector<double>{0.5, 0.3});
    CHECK(recs[2].axes == std::vector<double>{1.0, 0.1});
    CHECK(recs[5].axes == std::vector<double>{1.5, 0.3});
}

TEST_CASE("single-point sweep equals a direct run")
{
    const SweepSpec s = parse_sweep(reduced3 + "axis1 = detuning 1 1 1\n");
    const auto recs = run_sweep(s);
    REQUIRE(recs.size() == 1);
    const RunRecord direct = evaluate(load_config(reduced3));
    CHECK(recs[0].n_bar == direct.n_bar);
    CHECK(recs[0].margin == direct.margin);
    CHECK(recs[0].dark_residual == direct.dark_residual);
    CHECK(recs[0].stable == direct.stable);
    CHECK(emit_csv(recs, {"detuning"}) == emit_csv({[&] {
                                                       RunRecord r = direct;
                                                       r.axes = {1.0};
                                                       return r;
                                                   }()},
                                                   {"detuning"}));
}

TEST_CASE("unstable and failing points stay in the table")
{
    // Blue-detuned points are unstable; a negative linewidth is a config error.
    const SweepSpec s = parse_sweep(reduced3 + "axis1 = detuning -1.0 1.0 3\naxis2 = kappa -0.2 0.2 2\n");
    const auto recs = run_sweep(s, 3);
    REQUIRE(recs.size() == 6);
    int unstable = 0, failed = 0, good = 0;
    for (const RunRecord& r : recs) {
        if (r.failure != FailureKind::none) {
            ++failed;
            CHECK_FALSE(r.error.empty());
            CHECK(r.axes.size() == 2);
            continue;
        }
        if (!r.stable) {
            ++unstable;
            for (const auto& n : r.n_bar)
                CHECK_FALSE(n.has_value());
        }
        else
            ++good;
    }
    CHECK(failed == 4);  // zero detuning: no damping beyond gamma, residual check trips
    CHECK(unstable >= 1);
    CHECK(good >= 1);
}

TEST_CASE("worker count does not change the output")
{
    const SweepSpec s = parse_sweep(reduced3 + "axis1 = detuning 0.5 1.5 31\naxis2 = g_x -0.1 -0.03 5\n");
    const std::vector<std::string> names{"detuning", "g_x"};
    const std::string serial = emit_csv(run_sweep(s, 1), names);
    for (int w : {2, 3, 8})
        CHECK(emit_csv(run_sweep(s, w), names) == serial);
    CHECK(emit_csv(run_sweep(s, 1), names) == serial);
}

TEST_CASE("every model path evaluates")
{
    const RunRecord phys = evaluate(load_config(
        "mode = physical\nradius = 90 nm\ndensity = 2200\neps_r = 2.07\nwavelength = 1064 nm\npower1 = 0.8 W\n"
        "power2 = 0.45 W\nna = 0.8\nseparation = 2.5 lambda\ndetuning = 1 w1\nkappa = 0.2 w1\ngamma = 0.5e-8 w1\n"
        "n_th = 1e5\nmodel = five_mode\n"));
    CHECK(phys.failure == FailureKind::none);
    CHECK(phys.stable);
    CHECK(phys.n_bar[3].has_value());

    const RunRecord five = evaluate(load_config(
        "mode = reduced5\nomega2x = 0.75\nomega1z = 0.41\nomega2z = 0.31\ng_x = -0.02\ng_z = -0.03\ng1x = -0.1\n"
        "g2x = -0.09\ng1z = -0.12\ng2z = -0.11\ndetuning = 1\nkappa = 0.2\ngamma = 0.5e-8\nn_th = 1e5\n"));
    CHECK(five.stable);
    CHECK(five.n_bar[0].value() == doctest::Approx(0.024473520143153848).epsilon(1e-8));
    CHECK(five.dark_residual[1].has_value());

    PhysicalSetup untrapped{reference_config(), ModelKind::three_mode};
    untrapped.config.power[1] = 0.0;
    untrapped.config.detuning = Rate::absolute(5e6);
    untrapped.config.kappa = Rate::absolute(1e6);
    untrapped.config.gamma.fill(Rate::absolute(0.01));
    const RunRecord bad = evaluate(untrapped);
    CHECK(bad.failure == FailureKind::config);
    CHECK(bad.error.find("trapped") != std::string::npos);
}
