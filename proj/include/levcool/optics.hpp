#pragma once

#include <array>
#include <complex>
#include <vector>

namespace levcool {

using Vec3 = std::array<double, 3>;
using Tensor3 = std::array<std::array<double, 3>, 3>;
using CTensor3 = std::array<std::array<std::complex<double>, 3>, 3>;

// 3 rr - I and I - rr for the unit vector along r.
Tensor3 near_field_tensor(const Vec3& r);
Tensor3 far_field_tensor(const Vec3& r);

// Free-space dyadic Green function, field per unit dipole (1/(F m)).
CTensor3 green_tensor(const Vec3& r, double k0);

struct GreenSplit {
    CTensor3 near;  // 1/r^3 and 1/r^2 part
    CTensor3 far;   // 1/r part
};

// alpha * G split into near- and far-field contributions, written with the
// constants of a reference separation D.
GreenSplit scaled_green_split(const Vec3& r, double k0, double alpha, double D);

struct BindingForce {
    enum class Variant { exact, far_field };
    double fx = 0.0, fy = 0.0, fz = 0.0;  // N
    double separation = 0.0;              // m
    Variant variant = Variant::exact;
};

// Force on particle 1 from two on-axis, y-polarised dipoles.
BindingForce binding_force_exact(double e10, double e20, double r0, double k_tw, double alpha);
// Only the highest orders in k r0 retained.
BindingForce binding_force_farfield(double e10, double e20, double r0, double k_tw, double alpha);

struct ForceScanRow {
    double r_over_lambda = 0.0;
    double kr = 0.0;
    double fx_exact = 0.0, fx_far = 0.0;
    double fz_exact = 0.0, fz_far = 0.0;
};

struct ForceScanParams {
    double e10 = 0.0, e20 = 0.0;  // V/m
    double wavelength = 0.0;      // m
    double alpha = 0.0;           // F m^2
};

// Uniform grid in r0/lambda over [start, stop] inclusive.
std::vector<ForceScanRow> force_scan(double start, double stop, int n_points, const ForceScanParams& p);

}  // namespace levcool
