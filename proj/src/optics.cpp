#include "levcool/optics.hpp"

#include <cmath>

#include "levcool/constants.hpp"
#include "levcool/error.hpp"

namespace levcool {
namespace {

using si::eps0;
using si::pi;

Vec3 unit(const Vec3& r)
{
    const double n = std::sqrt(r[0] * r[0] + r[1] * r[1] + r[2] * r[2]);
    if (!(n > 0.0) || !std::isfinite(n))
        throw InvalidInput("coincident dipoles");
    return {r[0] / n, r[1] / n, r[2] / n};
}

double norm(const Vec3& r) { return std::sqrt(r[0] * r[0] + r[1] * r[1] + r[2] * r[2]); }

double prefactor(double e10, double e20, double r0, double alpha)
{
    if (!(r0 > 0.0) || !std::isfinite(r0))
        throw InvalidInput("separation must be positive");
    const double r2 = r0 * r0;
    return alpha * alpha * e10 * e20 / (8.0 * pi * eps0 * r2 * r2);
}

}  // namespace

Tensor3 near_field_tensor(const Vec3& r)
{
    const Vec3 u = unit(r);
    Tensor3 m{};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            m[i][j] = 3.0 * (u[i] * u[j]) - (i == j ? 1.0 : 0.0);
    return m;
}

Tensor3 far_field_tensor(const Vec3& r)
{
    const Vec3 u = unit(r);
    Tensor3 m{};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            m[i][j] = (i == j ? 1.0 : 0.0) - u[i] * u[j];
    return m;
}

CTensor3 green_tensor(const Vec3& r, double k0)
{
    const Tensor3 mn = near_field_tensor(r);
    const Tensor3 mf = far_field_tensor(r);
    const double d = norm(r);
    const std::complex<double> pre = std::polar(1.0, k0 * d) / (4.0 * pi * eps0 * d);
    const std::complex<double> cn = std::complex<double>(1.0, -k0 * d) / (d * d);
    const double cf = k0 * k0;
    CTensor3 g{};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            g[i][j] = pre * (cn * mn[i][j] + cf * mf[i][j]);
    return g;
}

GreenSplit scaled_green_split(const Vec3& r, double k0, double alpha, double D)
{
    const Tensor3 mn = near_field_tensor(r);
    const Tensor3 mf = far_field_tensor(r);
    const double d = norm(r);
    const double eta_n = alpha / (4.0 * pi * eps0 * D * D * D);
    const double eta_f = alpha * k0 * k0 / (4.0 * pi * eps0 * D);
    const std::complex<double> phase = std::polar(1.0, k0 * d);
    const double ratio = D / d;
    const std::complex<double> cn = phase * eta_n * ratio * ratio * ratio * std::complex<double>(1.0, -k0 * d);
    const std::complex<double> cf = phase * eta_f * ratio;
    GreenSplit s{};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            s.near[i][j] = cn * mn[i][j];
            s.far[i][j] = cf * mf[i][j];
        }
    return s;
}

BindingForce binding_force_exact(double e10, double e20, double r0, double k_tw, double alpha)
{
    const double pre = prefactor(e10, e20, r0, alpha);
    const double x = k_tw * r0;
    const double cs = std::cos(x);
    const double sn = std::sin(x);
    BindingForce f;
    f.fx = pre * (3.0 * cs + 3.0 * x * sn - 2.0 * x * x * cs - x * x * x * sn);
    f.fy = 0.0;
    f.fz = pre * (-x * sn + x * x * cs + x * x * x * sn);
    f.separation = r0;
    f.variant = BindingForce::Variant::exact;
    return f;
}

BindingForce binding_force_farfield(double e10, double e20, double r0, double k_tw, double alpha)
{
    const double pre = prefactor(e10, e20, r0, alpha);
    const double x = k_tw * r0;
    const double cs = std::cos(x);
    const double sn = std::sin(x);
    BindingForce f;
    f.fx = pre * (-2.0 * x * x * cs - x * x * x * sn);
    f.fy = 0.0;
    f.fz = pre * (x * x * cs + x * x * x * sn);
    f.separation = r0;
    f.variant = BindingForce::Variant::far_field;
    return f;
}

std::vector<ForceScanRow> force_scan(double start, double stop, int n_points, const ForceScanParams& p)
{
    if (!(start > 0.0) || !(stop > start) || !std::isfinite(stop))
        throw InvalidInput("force scan range must be positive and increasing");
    if (n_points < 2)
        throw InvalidInput("force scan needs at least two points");
    if (!(p.wavelength > 0.0))
        throw InvalidInput("wavelength must be positive");
    const double k = 2.0 * pi / p.wavelength;
    std::vector<ForceScanRow> rows;
    rows.reserve(static_cast<std::size_t>(n_points));
    for (int i = 0; i < n_points; ++i) {
        const double t = start + (stop - start) * i / (n_points - 1);
        const double r0 = t * p.wavelength;
        const BindingForce ex = binding_force_exact(p.e10, p.e20, r0, k, p.alpha);
        const BindingForce ff = binding_force_farfield(p.e10, p.e20, r0, k, p.alpha);
        rows.push_back({t, k * r0, ex.fx, ff.fx, ex.fz, ff.fz});
    }
    return rows;
}

}  // namespace levcool
