#include "levcool/selfcheck.hpp"

#include <cmath>
#include <cstdio>
#include <functional>
#include <random>

#include "levcool/config.hpp"
#include "levcool/darkmode.hpp"
#include "levcool/kernels.hpp"
#include "levcool/optics.hpp"
#include "levcool/output.hpp"
#include "levcool/steady.hpp"
#include "levcool/sweep.hpp"

namespace levcool {
namespace {

std::string sci(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3e", v);
    return buf;
}

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(a), std::abs(b)); }

ThreeModeParams reference_set()
{
    ThreeModeParams p;
    p.omega2 = 0.75;
    p.g1 = 0.22;
    p.g2 = -0.19;
    p.g_x = -0.046;
    p.detuning = 1.0;
    p.kappa = 0.2;
    p.gamma1 = p.gamma2 = 0.5e-8;
    p.n_th1 = p.n_th2 = 1e5;
    return p;
}

CheckOutcome kernel_agreement()
{
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    const int m = 13, k = 11, n = 9;
    std::vector<double> a(m * k), b(k * n);
    for (double& v : a)
        v = u(rng);
    for (double& v : b)
        v = u(rng);
    const kernels::Table& ref = kernels::table(kernels::Backend::scalar);
    std::vector<double> c_ref(m * n);
    ref.gemm(m, n, k, a.data(), b.data(), c_ref.data());
    const double d_ref = ref.dot(a.data(), a.data(), a.size());
    double worst = 0.0;
    for (kernels::Backend be : {kernels::Backend::avx2, kernels::Backend::neon}) {
        if (!kernels::available(be))
            continue;
        const kernels::Table& t = kernels::table(be);
        std::vector<double> c(m * n);
        t.gemm(m, n, k, a.data(), b.data(), c.data());
        for (int i = 0; i < m * n; ++i)
            worst = std::max(worst, std::abs(c[i] - c_ref[i]));
        worst = std::max(worst, std::abs(t.dot(a.data(), a.data(), a.size()) - d_ref) / d_ref);
    }
    return {"kernel backends agree", worst <= 1e-12, "max deviation " + sci(worst)};
}

CheckOutcome lyapunov_residual_check()
{
    const LinearModel m = build_three_mode(reference_set());
    const Eigen::MatrixXd v = solve_lyapunov(m.drift, m.noise);
    const double r = lyapunov_residual(m.drift, m.noise, v);
    return {"Lyapunov residual at the reference set", r <= 1e-10, "residual " + sci(r)};
}

CheckOutcome lyapunov_vs_ode()
{
    // Strongly damped system so a short integration reaches steady state.
    std::mt19937_64 rng(11);
    std::normal_distribution<double> g;
    const int n = 6;
    Eigen::MatrixXd a(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            a(i, j) = 0.3 * g(rng);
    a -= 2.0 * Eigen::MatrixXd::Identity(n, n);
    Eigen::MatrixXd q = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i)
        q(i, i) = 1.0 + std::abs(g(rng));
    const Eigen::MatrixXd v = solve_lyapunov(a, q);
    const double dt = 0.05 / a.norm();
    const Eigen::MatrixXd w = evolve_covariance(a, q, Eigen::MatrixXd::Zero(n, n), 25.0, dt);
    const double d = (v - w).norm() / v.norm();
    return {"Lyapunov solve matches covariance integration", d <= 1e-6, "relative difference " + sci(d)};
}

CheckOutcome relabel_symmetry()
{
    PhysicalConfig a = reference_config();
    a.focus = std::array<double, 2>{0.3 * a.separation, -0.7 * a.separation};
    PhysicalConfig b = a;
    b.power = {a.power[1], a.power[0]};
    b.focus = std::array<double, 2>{(*a.focus)[1], (*a.focus)[0]};
    a.detuning = b.detuning = Rate::absolute(5e6);
    a.kappa = b.kappa = Rate::absolute(1e6);
    a.eps_cav = b.eps_cav = 1e5;
    const DerivedParams da = derive_couplings(a), db = derive_couplings(b);
    double worst = 0.0;
    auto cmp = [&](double x, double y) {
        if (x != 0.0 || y != 0.0)
            worst = std::max(worst, rel(x, y));
    };
    for (int j = 0; j < 2; ++j) {
        const int o = 1 - j;
        cmp(da.omega_tilde[j].x, db.omega_tilde[o].x);
        cmp(da.omega_tilde[j].z, db.omega_tilde[o].z);
        cmp(da.g_x[j], db.g_x[o]);
        cmp(da.g_z[j], db.g_z[o]);
        cmp(da.g_alpha[j], db.g_alpha[o]);
        cmp(std::abs(da.g_tilde_x[j]), std::abs(db.g_tilde_x[o]));
        cmp(std::abs(da.g_tilde_z[j]), std::abs(db.g_tilde_z[o]));
        cmp(da.displacement[j], db.displacement[o]);
    }
    return {"1<->2 relabeling symmetry", worst <= 1e-12, "max relative deviation " + sci(worst)};
}

CheckOutcome power_scaling()
{
    PhysicalConfig a = reference_config();
    a.eps_cav = 1e5;
    PhysicalConfig b = a;
    b.power = {2.0 * a.power[0], 2.0 * a.power[1]};
    const DerivedParams da = derive_couplings(a), db = derive_couplings(b);
    const double worst = std::max({rel(2.0 * da.nu.x, db.nu.x), rel(2.0 * da.nu.z, db.nu.z),
                                   rel(2.0 * da.k_bind.x, db.k_bind.x), rel(2.0 * da.k_bind.z, db.k_bind.z),
                                   rel(2.0 * da.r_alpha, db.r_alpha)});
    return {"binding terms scale with sqrt(P1 P2)", worst <= 1e-12, "max relative deviation " + sci(worst)};
}

CheckOutcome far_separation_limit()
{
    PhysicalConfig c = reference_config();
    c.separation = 100.0 * c.wavelength;
    const DerivedParams d = derive_couplings(c);
    const double dev = std::abs(d.omega_tilde[1].x / d.omega_tilde[0].x - std::sqrt(c.power[1] / c.power[0]));
    return {"frequency ratio tends to sqrt(P2/P1) at D = 100 wavelengths", dev < 1e-3, "deviation " + sci(dev)};
}

CheckOutcome dressed_frequency_identity()
{
    const DerivedParams d = derive_couplings(reference_config());
    double worst = 0.0;
    for (int j = 0; j < 2; ++j) {
        const double x2 = d.omega[j].x * d.omega[j].x + 2.0 * d.nu.x / d.mass + d.k_bind.x / d.mass;
        const double z2 = d.omega[j].z * d.omega[j].z + 2.0 * d.nu.z / d.mass + d.k_bind.z / d.mass;
        worst = std::max({worst, rel(x2, d.omega_tilde[j].x * d.omega_tilde[j].x),
                          rel(z2, d.omega_tilde[j].z * d.omega_tilde[j].z),
                          rel(d.g_tilde_ax[j], d.g_ax[j] + d.g_alpha[j])});
    }
    return {"dressed frequencies rebuild from their components", worst <= 1e-14,
            "max relative deviation " + sci(worst)};
}

CheckOutcome transverse_force_zero()
{
    bool zero = true;
    for (double r0 : {0.3, 0.77, 1.5, 2.5, 3.0}) {
        const double lambda = 1064e-9;
        const double k = 2.0 * std::acos(-1.0) / lambda;
        zero = zero && binding_force_exact(1e8, 8e7, r0 * lambda, k, 1e-32).fy == 0.0 &&
               binding_force_farfield(1e8, 8e7, r0 * lambda, k, 1e-32).fy == 0.0;
    }
    return {"transverse binding force vanishes", zero, zero ? "Fy == 0 at every probe" : "nonzero Fy"};
}

CheckOutcome dark_mode_algebra()
{
    ThreeModeParams p = reference_set();
    p.omega2 = 1.0;
    p.g2 = -p.g1;
    const HybridTwoMode h = hybridize_two_mode(p.omega1, p.omega2, p.g1, p.g2, p.g_x);
    const double r = dark_mode_measure(build_three_mode(p), phase_space_transform(h))[0];
    const bool ok = std::abs(h.g_q) <= 1e-12 && std::abs(h.g_p) <= 1e-12 && r < 1e-10;
    return {"dark mode decouples at equal frequencies and opposite couplings", ok,
            "G_q " + sci(h.g_q) + ", G_p " + sci(h.g_p) + ", residual " + sci(r)};
}

CheckOutcome config_round_trip()
{
    FiveModeParams f;
    f.omega = {1.0, 0.75, 0.41, 0.31};
    f.g_x = -0.02;
    f.g_z = -0.03;
    f.g_tilde_x = {cplx(-0.1, 0.01), cplx(-0.09, 0.0)};
    f.g_tilde_z = {cplx(-0.12, 0.0), cplx(-0.11, -1.0 / 3.0)};
    f.detuning = 0.1 + 0.2;
    f.kappa = 0.2;
    f.gamma.fill(0.5e-8);
    f.n_th.fill(1e5);
    PhysicalSetup s{reference_config(), ModelKind::five_mode};
    s.config.eps_cav = 123456.789;
    const std::vector<ModelConfig> cases{reference_set(), f, s};
    bool ok = true;
    for (const ModelConfig& c : cases)
        ok = ok && load_config(emit_config(c)) == c;
    return {"config emit/load round trip", ok, ok ? "three models identical" : "mismatch after reload"};
}

CheckOutcome parallel_equivalence()
{
    const SweepSpec spec = parse_sweep(
        "mode = reduced3\nomega2 = 0.75\ng1 = 0.22\ng2 = -0.19\ng_x = -0.046\nkappa = 0.2\n"
        "gamma = 0.5e-8\nn_th = 1e5\ndetuning = 1\naxis1 = detuning 0.5 1.5 21\n");
    const std::vector<std::string> names{"detuning"};
    const std::string serial = emit_csv(run_sweep(spec, 1), names);
    const std::string parallel = emit_csv(run_sweep(spec, 4), names);
    return {"serial and parallel sweeps emit identical CSV", serial == parallel,
            std::to_string(serial.size()) + " bytes"};
}

}  // namespace

std::vector<CheckOutcome> run_self_checks()
{
    const std::vector<std::function<CheckOutcome()>> checks{
        kernel_agreement,   lyapunov_residual_check, lyapunov_vs_ode,       relabel_symmetry,
        power_scaling,      far_separation_limit,    dressed_frequency_identity, transverse_force_zero,
        dark_mode_algebra,  config_round_trip,       parallel_equivalence};
    std::vector<CheckOutcome> out;
    for (const auto& c : checks) {
        try {
            out.push_back(c());
        }
        catch (const std::exception& e) {
            out.push_back({"(check threw)", false, e.what()});
        }
    }
    return out;
}

}  // namespace levcool
