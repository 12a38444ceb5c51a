#include "levcool/params.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "levcool/constants.hpp"
#include "levcool/error.hpp"

namespace levcool {
namespace {

using si::c;
using si::eps0;
using si::hbar;
using si::pi;

void require(bool ok, const std::string& what)
{
    if (!ok)
        throw InvalidInput(what);
}

bool finite(double v) { return std::isfinite(v); }

void require_rate(const Rate& r, const char* name, bool positive)
{
    require(finite(r.value), std::string(name) + " must be finite");
    if (positive)
        require(r.value > 0.0, std::string(name) + " must be positive");
    else
        require(r.value >= 0.0, std::string(name) + " must be non-negative");
}

std::array<double, 2> focus_of(const PhysicalConfig& cfg)
{
    if (cfg.focus)
        return *cfg.focus;
    return {cfg.separation / 2.0, -cfg.separation / 2.0};
}

}  // namespace

PhysicalConfig reference_config()
{
    PhysicalConfig cfg;
    cfg.radius = 90e-9;
    cfg.density = 2200.0;
    cfg.eps_r = 2.07;
    cfg.wavelength = 1064e-9;
    cfg.power = {0.8, 0.45};
    cfg.na = 0.8;
    cfg.separation = 2.5 * cfg.wavelength;
    cfg.detuning = Rate::relative(1.0);
    cfg.kappa = Rate::relative(0.2);
    cfg.gamma.fill(Rate::relative(0.5e-8));
    cfg.n_th.fill(1e5);
    return cfg;
}

void validate(const PhysicalConfig& cfg)
{
    require(finite(cfg.radius) && cfg.radius > 0.0, "radius must be positive");
    require(finite(cfg.density) && cfg.density > 0.0, "density must be positive");
    require(finite(cfg.eps_r) && cfg.eps_r > 1.0, "eps_r must exceed 1");
    require(finite(cfg.wavelength) && cfg.wavelength > 0.0, "wavelength must be positive");
    require(cfg.radius <= cfg.wavelength / 4.0, "radius exceeds wavelength/4 (outside the point-dipole regime)");
    for (double p : cfg.power)
        require(finite(p) && p >= 0.0, "tweezer power must be non-negative");
    require(finite(cfg.separation) && cfg.separation > 0.0, "separation must be positive");
    if (cfg.focus) {
        const auto [x1, x2] = *cfg.focus;
        require(finite(x1) && finite(x2), "focus positions must be finite");
        require(std::abs(std::abs(x1 - x2) - cfg.separation) <= 1e-9 * cfg.separation,
                "focus positions disagree with separation");
    }
    if (cfg.waist)
        require(finite(*cfg.waist) && *cfg.waist > 0.0, "waist must be positive");
    else
        require(finite(cfg.na) && cfg.na > 0.0 && cfg.na <= 1.0, "na must lie in (0, 1]");
    require(finite(cfg.detuning.value), "detuning must be finite");
    require(!(cfg.eps_cav && cfg.cavity_volume), "give eps_cav or cavity_volume, not both");
    if (cfg.eps_cav)
        require(finite(*cfg.eps_cav) && *cfg.eps_cav > 0.0, "eps_cav must be positive");
    if (cfg.cavity_volume)
        require(finite(*cfg.cavity_volume) && *cfg.cavity_volume > 0.0, "cavity_volume must be positive");
    require_rate(cfg.kappa, "kappa", true);
    for (const Rate& g : cfg.gamma)
        require_rate(g, "gamma", false);
    for (double n : cfg.n_th)
        require(finite(n) && n >= 0.0, "n_th must be non-negative");
}

double polarizability(double radius, double eps_r)
{
    const double volume = 4.0 / 3.0 * pi * radius * radius * radius;
    return eps0 * 3.0 * (eps_r - 1.0) / (eps_r + 2.0) * volume;
}

double tweezer_field(double power, double waist)
{
    return std::sqrt(4.0 * power / (pi * eps0 * c * waist * waist));
}

ParticleProps derive_particle(const PhysicalConfig& cfg)
{
    require(finite(cfg.radius) && cfg.radius > 0.0, "radius must be positive");
    require(finite(cfg.density) && cfg.density > 0.0, "density must be positive");
    require(finite(cfg.eps_r), "eps_r must be finite");
    const double volume = 4.0 / 3.0 * pi * cfg.radius * cfg.radius * cfg.radius;
    return {cfg.density * volume, polarizability(cfg.radius, cfg.eps_r)};
}

double tweezer_waist(const PhysicalConfig& cfg)
{
    if (cfg.waist)
        return *cfg.waist;
    const double w = cfg.wavelength / (pi * cfg.na);
    return cfg.waist_convention == WaistConvention::calibrated ? std::sqrt(2.0) * w : w;
}

TweezerProps derive_tweezer(const PhysicalConfig& cfg, int j)
{
    require(j == 0 || j == 1, "particle index must be 0 or 1");
    const double p = cfg.power[static_cast<std::size_t>(j)];
    require(finite(p) && p >= 0.0, "tweezer power must be non-negative");
    const ParticleProps part = derive_particle(cfg);

    TweezerProps t;
    t.waist = tweezer_waist(cfg);
    t.rayleigh_range = pi * t.waist * t.waist / cfg.wavelength;
    t.field = tweezer_field(p, t.waist);
    const double scale = std::sqrt(part.polarizability / (2.0 * part.mass)) * t.field;
    t.omega.x = scale * std::sqrt(2.0) / t.waist;
    t.omega.y = t.omega.x;
    t.omega.z = scale / t.rayleigh_range;
    return t;
}

double default_cavity_field(const PhysicalConfig& cfg)
{
    PhysicalConfig ref = reference_config();
    ref.waist = cfg.waist;
    ref.waist_convention = cfg.waist_convention;
    ref.eps_cav = 1.0;
    const DerivedParams d = derive_couplings(ref);
    const double g1_per_field = std::sqrt(2.0) * d.g_tilde_x[0].real() * d.x_zpf[0];
    return 0.22 * d.omega_tilde[0].x / std::abs(g1_per_field);
}

DerivedParams derive_couplings(const PhysicalConfig& cfg)
{
    validate(cfg);
    DerivedParams d;

    const ParticleProps part = derive_particle(cfg);
    d.mass = part.mass;
    d.alpha = part.polarizability;
    const double alpha = d.alpha;
    const double m = d.mass;

    const std::array<TweezerProps, 2> tw{derive_tweezer(cfg, 0), derive_tweezer(cfg, 1)};
    d.eps_tw = {tw[0].field, tw[1].field};
    d.waist = tw[0].waist;
    d.rayleigh_range = tw[0].rayleigh_range;
    d.omega = {tw[0].omega, tw[1].omega};

    const double D = cfg.separation;
    const auto x0 = focus_of(cfg);
    d.orientation = x0[0] >= x0[1] ? 1 : -1;
    const double s = d.orientation;
    const std::array<double, 2> side{s, -s};

    d.k_tw = 2.0 * pi / cfg.wavelength;
    const double ktw = d.k_tw;
    const double e1e2 = d.eps_tw[0] * d.eps_tw[1];
    d.eta_f_tw = alpha * ktw * ktw / (4.0 * pi * eps0 * D);
    d.eta_n = alpha / (4.0 * pi * eps0 * D * D * D);

    // Tweezer-tweezer binding: frequency shifts, pair stiffness, static push.
    const double ct = std::cos(ktw * D);
    const double st = std::sin(ktw * D);
    const double bind = alpha * d.eta_f_tw * e1e2;
    d.nu.x = bind * ct / (d.waist * d.waist);
    d.nu.y = d.nu.x;
    d.nu.z = bind * ct / (2.0 * d.rayleigh_range * d.rayleigh_range);
    d.k_bind.x = -bind * ((2.0 / (D * D) - ktw * ktw) * ct + 2.0 * ktw / D * st);
    d.k_bind.y = bind * (3.0 / (D * D) * ct + ktw / D * st);
    d.k_bind.z = bind * ((1.0 / (D * D) + ktw * ktw) * ct + ktw / D * st);
    d.r_alpha = bind * (ktw * st + ct / D) / hbar;

    for (std::size_t j = 0; j < 2; ++j) {
        const Axes& w = d.omega[j];
        const double wx2 = w.x * w.x + 2.0 * d.nu.x / m + d.k_bind.x / m;
        const double wy2 = w.y * w.y + 2.0 * d.nu.y / m + d.k_bind.y / m;
        const double wz2 = w.z * w.z + 2.0 * d.nu.z / m + d.k_bind.z / m;
        d.trapped[j] = wx2 > 0.0 && wz2 > 0.0;
        d.omega_tilde[j] = {std::sqrt(std::max(wx2, 0.0)), std::sqrt(std::max(wy2, 0.0)),
                            std::sqrt(std::max(wz2, 0.0))};
        if (d.trapped[j]) {
            d.x_zpf[j] = std::sqrt(hbar / (2.0 * m * d.omega_tilde[j].x));
            d.z_zpf[j] = std::sqrt(hbar / (2.0 * m * d.omega_tilde[j].z));
        }
    }

    const bool relative = cfg.detuning.unit == Rate::Unit::omega1 || cfg.kappa.unit == Rate::Unit::omega1 ||
                          std::any_of(cfg.gamma.begin(), cfg.gamma.end(),
                                      [](const Rate& g) { return g.unit == Rate::Unit::omega1; });
    require(!relative || d.trapped[0], "rates relative to omega1 need a trapped particle 1");
    const double w1 = d.omega_tilde[0].x;
    d.detuning = cfg.detuning.resolve(w1);
    d.kappa = cfg.kappa.resolve(w1);
    for (std::size_t l = 0; l < 4; ++l)
        d.gamma[l] = cfg.gamma[l].resolve(w1);
    d.n_th = cfg.n_th;

    const double omega_tw = c * ktw;
    const double omega_cav = omega_tw + d.detuning;
    require(omega_cav > 0.0, "cavity frequency must be positive");
    d.k = omega_cav / c;
    const double k = d.k;
    d.eta_f = alpha * k * k / (4.0 * pi * eps0 * D);

    if (cfg.eps_cav)
        d.eps_cav = *cfg.eps_cav;
    else if (cfg.cavity_volume)
        d.eps_cav = std::sqrt(hbar * omega_cav / (2.0 * eps0 * *cfg.cavity_volume));
    else
        d.eps_cav = default_cavity_field(cfg);
    const double ec = d.eps_cav;

    const std::array<double, 2> cj{std::cos(k * x0[0]), std::cos(k * x0[1])};
    const std::array<double, 2> sj{std::sin(k * x0[0]), std::sin(k * x0[1])};
    const double cc = std::cos(k * D);
    const double S = k * std::sin(k * D) + cc / D;
    const double sigma = d.eps_tw[0] * cj[1] + d.eps_tw[1] * cj[0];
    const cplx phase = std::polar(1.0, -ktw * D);

    // Direct coherent scattering of each particle.
    d.omega_cs = 0.0;
    double shift = 0.0;
    for (std::size_t j = 0; j < 2; ++j) {
        const double e = d.eps_tw[j];
        d.omega_cs += -alpha * ec * e * cj[j] / (2.0 * hbar);
        d.g_x[j] = alpha * ec * e * sj[j] * k / (2.0 * hbar);
        d.g_z[j] = -alpha * ec * e * cj[j] * ktw / (2.0 * hbar);
        d.g_ax[j] = 2.0 * alpha * ec * ec * cj[j] * sj[j] * k / hbar;
        shift += -alpha * ec * ec * cj[j] * cj[j] / hbar;
    }
    d.detuning_eff = d.detuning + shift - 4.0 * alpha * d.eta_f * ec * ec * cj[0] * cj[1] * cc / hbar;

    // Cavity field rescattered by the partner particle.
    const double rp = 4.0 * alpha * d.eta_f * ec * ec / hbar;
    d.g_alpha[0] = rp * (s * S * cj[0] * cj[1] + k * cc * sj[0] * cj[1]);
    d.g_alpha[1] = rp * (-s * S * cj[0] * cj[1] + k * cc * cj[0] * sj[1]);
    d.omega_alpha = -alpha * d.eta_f * ec * cc * sigma / (2.0 * hbar);
    d.omega_beta = -alpha * d.eta_f_tw * ec * sigma * phase / (2.0 * hbar);

    for (std::size_t j = 0; j < 2; ++j) {
        const std::size_t o = 1 - j;
        const double e = d.eps_tw[j];
        const double eo = d.eps_tw[o];
        d.g_alpha_x[j] = alpha * d.eta_f * ec * (side[j] * S * sigma + cc * k * eo * sj[j]) / (2.0 * hbar);
        d.g_alpha_z[j] = alpha * d.eta_f * ec * e * ktw * cc * cj[o] / (2.0 * hbar);
        d.g_beta_x[j] = alpha * d.eta_f_tw * ec *
                        (side[j] * cplx(1.0 / D, ktw) * sigma + eo * k * sj[j]) * phase / (2.0 * hbar);
        d.g_beta_z[j] = -alpha * d.eta_f_tw * ec * e * ktw * cj[o] * phase / (2.0 * hbar);

        d.g_tilde_ax[j] = d.g_ax[j] + d.g_alpha[j];
        d.g_tilde_x[j] = d.g_x[j] + d.g_alpha_x[j] + d.g_beta_x[j];
        d.g_tilde_z[j] = d.g_z[j] + d.g_alpha_z[j] + d.g_beta_z[j];
        d.displacement[j] = side[j] * d.r_alpha + d.g_alpha[j] / 2.0;
    }
    d.omega_drive = d.omega_cs + d.omega_alpha + d.omega_beta;
    return d;
}

ThreeModeParams reduced_three_mode(const ReducedThreeMode& r)
{
    ThreeModeParams p;
    p.omega1 = 1.0;
    p.omega2 = r.omega2;
    p.g1 = r.g1;
    p.g2 = r.g2;
    p.g_x = r.g_x;
    p.r1 = r.r1;
    p.r2 = r.r2;
    p.detuning = r.detuning;
    p.kappa = r.kappa;
    p.gamma1 = r.gamma1;
    p.gamma2 = r.gamma2;
    p.n_th1 = r.n_th1;
    p.n_th2 = r.n_th2;
    validate(p);
    return p;
}

ThreeModeParams three_mode_from(const DerivedParams& d)
{
    require(d.trapped[0] && d.trapped[1], "both particles must be trapped");
    ThreeModeParams p;
    p.omega1 = d.omega_tilde[0].x;
    p.omega2 = d.omega_tilde[1].x;
    p.g1 = std::sqrt(2.0) * d.g_tilde_x[0].real() * d.x_zpf[0];
    p.g2 = std::sqrt(2.0) * d.g_tilde_x[1].real() * d.x_zpf[1];
    p.g_x = 2.0 * d.k_bind.x * d.x_zpf[0] * d.x_zpf[1] / hbar;
    p.r1 = std::sqrt(2.0) * d.displacement[0] * d.x_zpf[0];
    p.r2 = -std::sqrt(2.0) * d.displacement[1] * d.x_zpf[1];
    p.detuning = d.detuning_eff;
    p.kappa = d.kappa;
    p.gamma1 = d.gamma[mode_1x];
    p.gamma2 = d.gamma[mode_2x];
    p.n_th1 = d.n_th[mode_1x];
    p.n_th2 = d.n_th[mode_2x];
    validate(p);
    return p;
}

void validate(const ThreeModeParams& p)
{
    for (double v : {p.omega1, p.omega2, p.g1, p.g2, p.g_x, p.r1, p.r2, p.detuning, p.kappa, p.gamma1, p.gamma2,
                     p.n_th1, p.n_th2})
        require(finite(v), "three-mode parameters must be finite");
    require(p.omega1 > 0.0 && p.omega2 > 0.0, "mechanical frequencies must be positive");
    require(p.kappa > 0.0, "kappa must be positive");
    require(p.gamma1 >= 0.0 && p.gamma2 >= 0.0, "gamma must be non-negative");
    require(p.n_th1 >= 0.0 && p.n_th2 >= 0.0, "n_th must be non-negative");
}

void validate(const FiveModeParams& p)
{
    auto fin = [](cplx z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); };
    for (std::size_t l = 0; l < 4; ++l) {
        require(finite(p.omega[l]) && p.omega[l] > 0.0, "mechanical frequencies must be positive");
        require(finite(p.gamma[l]) && p.gamma[l] >= 0.0, "gamma must be non-negative");
        require(finite(p.n_th[l]) && p.n_th[l] >= 0.0, "n_th must be non-negative");
        require(finite(p.q_mean[l]), "mean positions must be finite");
    }
    for (std::size_t j = 0; j < 2; ++j) {
        require(fin(p.g_tilde_x[j]) && fin(p.g_tilde_z[j]), "couplings must be finite");
        require(finite(p.r_tilde[j]), "displacements must be finite");
    }
    require(finite(p.g_x) && finite(p.g_z) && finite(p.detuning), "five-mode parameters must be finite");
    require(fin(p.a_mean), "cavity amplitude must be finite");
    require(finite(p.kappa) && p.kappa > 0.0, "kappa must be positive");
}

}  // namespace levcool
