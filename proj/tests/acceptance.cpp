// One line per acceptance criterion; exit status 1 if any fails.
#include <Eigen/Dense>
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <limits>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "levcool/darkmode.hpp"
#include "levcool/error.hpp"
#include "levcool/output.hpp"
#include "levcool/steady.hpp"
#include "levcool/sweep.hpp"

using namespace levcool;

namespace {

std::string read_config(const std::string& name)
{
    std::ifstream in(std::string(LEVCOOL_CONFIG_DIR) + "/" + name);
    if (!in)
        throw IoError("cannot open " + name);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

struct Verdict {
    bool pass = false;
    std::string detail;
};

std::string num(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4g", v + 0.0);
    return buf;
}

// Column c of the records, NaN where absent.
std::vector<double> column(const std::vector<RunRecord>& recs, int c)
{
    std::vector<double> out;
    for (const RunRecord& r : recs)
        out.push_back(r.n_bar[c].value_or(std::numeric_limits<double>::quiet_NaN()));
    return out;
}

std::size_t argmin(const std::vector<double>& v)
{
    std::size_t best = 0;
    for (std::size_t i = 1; i < v.size(); ++i)
        if (v[i] < v[best] || std::isnan(v[best]))
            best = i;
    return best;
}

bool all_finite(const std::vector<double>& v)
{
    return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

Verdict ground_state()
{
    const SweepSpec s = parse_sweep(read_config("sweep_detuning.cfg"));
    const auto recs = run_sweep(s);
    const auto n1 = column(recs, 0), n2 = column(recs, 1);
    if (!all_finite(n1) || !all_finite(n2))
        return {false, "unstable points in the sweep"};
    const std::size_t i1 = argmin(n1), i2 = argmin(n2);
    const double d1 = recs[i1].axes[0], d2 = recs[i2].axes[0];
    const bool ok = n1[i1] < 1.0 && n2[i2] < 1.0 && std::abs(d1 - 1.0) <= 0.05 + 1e-12 &&
                    std::abs(d2 - 0.75) <= 0.05 + 1e-12;
    return {ok, "min n1 " + num(n1[i1]) + " at " + num(d1) + ", min n2 " + num(n2[i2]) + " at " + num(d2)};
}

Verdict dark_mode()
{
    ThreeModeParams p = std::get<ThreeModeParams>(load_config(read_config("reduced3.cfg")));
    p.omega2 = p.omega1;
    p.g2 = -p.g1;
    const HybridTwoMode h = hybridize_two_mode(p.omega1, p.omega2, p.g1, p.g2, p.g_x);
    const LinearModel m = build_three_mode(p);
    const PhaseSpaceTransform t = phase_space_transform(h);
    const double residual = dark_mode_measure(m, t)[0];
    const CoolingResult r = analyze(m);
    const double n_dark = hybrid_phonon_numbers(r.covariance, t)[0];
    const double dev = std::abs(n_dark / p.n_th1 - 1.0);

    const SweepSpec s = parse_sweep(read_config("sweep_powers.cfg"));
    const auto recs = run_sweep(s, 8);
    const auto worst = [](const RunRecord& rec) {
        if (!rec.n_bar[0] || !rec.n_bar[1])
            return std::numeric_limits<double>::infinity();
        return std::max(*rec.n_bar[0], *rec.n_bar[1]);
    };
    double diag = std::numeric_limits<double>::infinity();
    double at_ref = std::numeric_limits<double>::quiet_NaN();
    for (const RunRecord& rec : recs) {
        if (std::abs(rec.axes[0] - rec.axes[1]) < 1e-12)
            diag = std::min(diag, worst(rec));
        if (std::abs(rec.axes[0] - 0.8) < 1e-9 && std::abs(rec.axes[1] - 0.45) < 1e-9)
            at_ref = worst(rec);
    }

    const bool algebra = std::abs(h.g_q) <= 1e-12 * p.omega1 && std::abs(h.g_p) <= 1e-12 * p.omega1;
    const bool decoupled = residual < 1e-10 * p.omega1;
    const bool thermal = dev <= 0.01;
    const bool contrast = diag > 10.0 * at_ref;
    return {algebra && decoupled && thermal && contrast,
            "G_q " + num(h.g_q) + ", G_p " + num(h.g_p) + ", residual " + num(residual) + ", dark n/n_th " +
                num(n_dark / p.n_th1) + (thermal ? "" : " (outside 1%)") + ", diagonal min " + num(diag) +
                " vs " + num(at_ref) + " at (0.8, 0.45) W"};
}

// Similarity transform of 2x2 rotation blocks with decay rates in [-2, -0.1].
Eigen::MatrixXd random_stable(int n, std::mt19937_64& rng)
{
    std::uniform_real_distribution<double> re(-2.0, -0.1), im(-1.5, 1.5), u(-1.0, 1.0);
    Eigen::MatrixXd blocks = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i + 1 < n; i += 2) {
        const double a = re(rng), b = im(rng);
        blocks(i, i) = blocks(i + 1, i + 1) = a;
        blocks(i, i + 1) = b;
        blocks(i + 1, i) = -b;
    }
    Eigen::MatrixXd s(n, n);
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c)
            s(r, c) = (r == c ? 1.0 : 0.0) + 0.3 * u(rng);
    return s * blocks * s.inverse();
}

Verdict lyapunov()
{
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    double worst_rel = 0.0, worst_res = 0.0;
    for (int n : {6, 10})
        for (int trial = 0; trial < 10; ++trial) {
            const Eigen::MatrixXd a = random_stable(n, rng);
            Eigen::MatrixXd b(n, n);
            for (int r = 0; r < n; ++r)
                for (int c = 0; c < n; ++c)
                    b(r, c) = u(rng);
            const Eigen::MatrixXd q = b * b.transpose() + 0.1 * Eigen::MatrixXd::Identity(n, n);
            const StabilityReport st = is_stable(a);
            if (!st.stable)
                return {false, "random system not stable"};
            const Eigen::MatrixXd v = solve_lyapunov(a, q);
            const Eigen::MatrixXd ode = evolve_covariance(a, q, Eigen::MatrixXd::Zero(n, n), 40.0 / -st.margin,
                                                          0.05 / a.norm());
            worst_rel = std::max(worst_rel, (ode - v).norm() / v.norm());
            worst_res = std::max(worst_res, lyapunov_residual(a, q, v));
        }
    return {worst_rel <= 1e-6 && worst_res <= 1e-10,
            "max relative difference " + num(worst_rel) + ", max residual " + num(worst_res)};
}

Verdict five_mode()
{
    const auto recs = run_sweep(parse_sweep(read_config("sweep_detuning5.cfg")));
    std::array<double, 4> lo{};
    for (int c = 0; c < 4; ++c) {
        const auto col = column(recs, c);
        if (!all_finite(col))
            return {false, "unstable points in the sweep"};
        lo[c] = col[argmin(col)];
    }
    const bool below = *std::max_element(lo.begin(), lo.end()) < 1.0;
    const bool ordered = std::max(lo[0], lo[1]) < std::min(lo[2], lo[3]);
    return {below && ordered,
            "minima 1x " + num(lo[0]) + ", 2x " + num(lo[1]) + ", 1z " + num(lo[2]) + ", 2z " + num(lo[3])};
}

// Strictly interior minimum, nonincreasing before it and nondecreasing after.
bool valley(const std::vector<double>& v)
{
    const std::size_t m = argmin(v);
    if (m == 0 || m + 1 == v.size())
        return false;
    for (std::size_t i = 1; i <= m; ++i)
        if (v[i] > v[i - 1] * (1.0 + 1e-12))
            return false;
    for (std::size_t i = m + 1; i < v.size(); ++i)
        if (v[i] < v[i - 1] * (1.0 - 1e-12))
            return false;
    return true;
}

Verdict kappa_valley()
{
    const auto recs = run_sweep(parse_sweep(read_config("sweep_kappa.cfg")));
    const auto n1 = column(recs, 0), n2 = column(recs, 1);
    if (!all_finite(n1) || !all_finite(n2))
        return {false, "unstable points in the sweep"};
    return {valley(n1) && valley(n2),
            "minima at kappa " + num(recs[argmin(n1)].axes[0]) + " and " + num(recs[argmin(n2)].axes[0])};
}

Verdict pair_coupling()
{
    // Axis runs from -0.1 to -0.03, so |G_x| shrinks along it.
    const auto recs = run_sweep(parse_sweep(read_config("sweep_gx.cfg")));
    bool ok = true;
    for (int c : {0, 1}) {
        const auto v = column(recs, c);
        ok = ok && all_finite(v);
        for (std::size_t i = 1; i < v.size(); ++i)
            ok = ok && v[i] <= v[i - 1] * (1.0 + 1e-12);
    }
    return {ok, "n1 " + num(*recs.front().n_bar[0]) + " -> " + num(*recs.back().n_bar[0]) + ", n2 " +
                    num(*recs.front().n_bar[1]) + " -> " + num(*recs.back().n_bar[1])};
}

Verdict binding()
{
    const ForceScanSpec s = load_force_scan(read_config("force_scan.cfg"));
    const ForceScanParams& p = s.params;
    const auto rows = force_scan(s.start, s.stop, s.points, p);
    const double k = 2.0 * M_PI / p.wavelength;
    bool fy_zero = true;
    for (const ForceScanRow& r : rows) {
        const double r0 = r.r_over_lambda * p.wavelength;
        fy_zero = fy_zero && binding_force_exact(p.e10, p.e20, r0, k, p.alpha).fy == 0.0 &&
                  binding_force_farfield(p.e10, p.e20, r0, k, p.alpha).fy == 0.0;
    }
    // max |exact - far| over the window, normalised by max |exact| in the same window.
    auto window = [&](double a, double b, auto exact, auto far) {
        double diff = 0.0, scale = 0.0;
        for (const ForceScanRow& r : rows)
            if (r.r_over_lambda >= a - 1e-12 && r.r_over_lambda <= b + 1e-12) {
                diff = std::max(diff, std::abs(exact(r) - far(r)));
                scale = std::max(scale, std::abs(exact(r)));
            }
        return diff / scale;
    };
    const auto fx = [](const ForceScanRow& r) { return r.fx_exact; };
    const auto fx_far = [](const ForceScanRow& r) { return r.fx_far; };
    const auto fz = [](const ForceScanRow& r) { return r.fz_exact; };
    const auto fz_far = [](const ForceScanRow& r) { return r.fz_far; };
    const double near_x = window(0.3, 0.5, fx, fx_far), far_x = window(1.5, 3.0, fx, fx_far);
    const double near_z = window(0.3, 0.5, fz, fz_far), far_z = window(1.5, 3.0, fz, fz_far);

    std::vector<double> peaks;
    for (std::size_t i = 1; i + 1 < rows.size(); ++i) {
        const double a = std::abs(rows[i - 1].fx_exact), b = std::abs(rows[i].fx_exact),
                     c = std::abs(rows[i + 1].fx_exact);
        if (b > a && b >= c)
            peaks.push_back(b);
    }
    bool decaying = peaks.size() >= 3;
    for (std::size_t i = 1; i < peaks.size(); ++i)
        decaying = decaying && peaks[i] < peaks[i - 1];

    return {fy_zero && far_x < near_x && far_z < near_z && decaying,
            std::string("Fy ") + (fy_zero ? "0" : "nonzero") + ", x difference " + num(near_x) + " -> " +
                num(far_x) + ", z difference " + num(near_z) + " -> " + num(far_z) + ", " +
                std::to_string(peaks.size()) + " decreasing |Fx| maxima"};
}

Verdict physical_sanity()
{
    PhysicalConfig c = reference_config();
    c.waist_convention = WaistConvention::calibrated;
    const TweezerProps t = derive_tweezer(c, 0);
    const double ratio = t.omega.z / t.omega.x;
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (int i = 0; i < 18; ++i)
        for (int j = 0; j < 18; ++j) {
            c.power = {0.15 + 0.05 * i, 0.15 + 0.05 * j};
            const double g = three_mode_from(derive_couplings(c)).g_x;
            lo = std::min(lo, g);
            hi = std::max(hi, g);
        }
    // Band edges in units of 1e3 rad/s.
    const bool band = std::abs(lo / -110.2e3 - 1.0) <= 0.15 && std::abs(hi / -41.8e3 - 1.0) <= 0.15;
    return {std::abs(ratio - 0.40) <= 0.05 && band,
            "omega_z/omega_x " + num(ratio) + ", G_x band [" + num(lo / 1e3) + ", " + num(hi / 1e3) + "] 1e3 rad/s"};
}

Verdict determinism()
{
    const SweepSpec s = parse_sweep(read_config("sweep_detuning.cfg"));
    const std::vector<std::string> names{"detuning"};
    const std::string serial = emit_csv(run_sweep(s, 1), names);
    const std::string parallel = emit_csv(run_sweep(s, 8), names);
    return {serial == parallel, std::to_string(serial.size()) + " bytes, " + (serial == parallel ? "identical" : "differ")};
}

}  // namespace

int main()
{
    struct Criterion {
        int id;
        const char* name;
        std::function<Verdict()> run;
        double budget;  // s, 0 for none
    };
    const std::vector<Criterion> criteria{
        {1, "ground-state cooling in the detuning sweep", ground_state, 5.0},
        {2, "dark-mode suppression", dark_mode, 0.0},
        {3, "Lyapunov solve against covariance integration", lyapunov, 10.0},
        {4, "five-mode cooling", five_mode, 0.0},
        {5, "linewidth sweep has an interior optimum", kappa_valley, 0.0},
        {6, "stronger pair coupling heats", pair_coupling, 0.0},
        {7, "binding force", binding, 0.0},
        {8, "physical-path sanity", physical_sanity, 0.0},
        {9, "serial and parallel sweeps agree", determinism, 0.0},
    };
    int failures = 0;
    for (const Criterion& c : criteria) {
        const auto t0 = std::chrono::steady_clock::now();
        Verdict v;
        try {
            v = c.run();
        }
        catch (const std::exception& e) {
            v = {false, std::string("error: ") + e.what()};
        }
        const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (c.budget > 0.0 && dt > c.budget) {
            v.pass = false;
            v.detail += ", over the " + num(c.budget) + " s budget";
        }
        std::printf("%s criterion %d: %s (%s) [%.3f s]\n", v.pass ? "PASS" : "FAIL", c.id, c.name, v.detail.c_str(), dt);
        if (!v.pass)
            ++failures;
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
    return failures == 0 ? 0 : 1;
}
