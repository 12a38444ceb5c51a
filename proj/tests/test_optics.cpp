#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>

#include "levcool/constants.hpp"
#include "levcool/error.hpp"
#include "levcool/optics.hpp"
#include "levcool/params.hpp"

using namespace levcool;

namespace {

constexpr double lambda = 1064e-9;
const double k_tw = 2.0 * si::pi / lambda;
const double alpha = polarizability(90e-9, 2.07);

Vec3 random_unit(std::mt19937_64& rng)
{
    std::normal_distribution<double> g;
    Vec3 v{g(rng), g(rng), g(rng)};
    const double n = std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
    for (double& x : v)
        x /= n;
    return v;
}

// yy component of the dipole Green function, written out directly.
std::complex<double> green_yy(double x, double z, double k)
{
    const double r = std::sqrt(x * x + z * z);
    const std::complex<double> pre = std::exp(std::complex<double>(0.0, k * r)) / (4.0 * si::pi * si::eps0 * r);
    // r-hat has no y component here, so (3 rr - I)_yy = -1 and (I - rr)_yy = 1.
    return pre * (k * k - std::complex<double>(1.0, -k * r) / (r * r));
}

// Time-averaged interaction energy of the two induced dipoles with particle 1 displaced by (dx, dz).
double interaction(double e1, double e2, double r0, double dx, double dz)
{
    const auto g = green_yy(r0 + dx, dz, k_tw);
    return 0.5 * alpha * alpha * e1 * e2 * (std::exp(std::complex<double>(0.0, -k_tw * dz)) * g).real();
}

}  // namespace

TEST_CASE("near and far tensors: symmetry and action on r")
{
    std::mt19937_64 rng(5);
    for (int t = 0; t < 100; ++t) {
        const Vec3 u = random_unit(rng);
        const Tensor3 mn = near_field_tensor(u), mf = far_field_tensor(u);
        for (int i = 0; i < 3; ++i) {
            double an = 0.0, af = 0.0;
            for (int j = 0; j < 3; ++j) {
                CHECK(mn[i][j] == mn[j][i]);
                CHECK(mf[i][j] == mf[j][i]);
                an += mn[i][j] * u[j];
                af += mf[i][j] * u[j];
            }
            CHECK(std::abs(af) <= 1e-12);
            CHECK(std::abs(an - 2.0 * u[i]) <= 1e-12);
        }
    }
    CHECK_THROWS_AS(near_field_tensor({0, 0, 0}), InvalidInput);
    CHECK_THROWS_WITH(green_tensor({0, 0, 0}, k_tw), "coincident dipoles");
}

TEST_CASE("Green tensor on the axis and under parity")
{
    const double d = 2.5 * lambda;
    const CTensor3 g = green_tensor({d, 0, 0}, k_tw);
    CHECK(std::abs(g[0][1]) == 0.0);
    CHECK(std::abs(g[0][2]) == 0.0);
    CHECK(std::abs(g[1][2]) == 0.0);
    CHECK(g[1][1] == g[2][2]);

    std::mt19937_64 rng(9);
    for (int t = 0; t < 20; ++t) {
        Vec3 r = random_unit(rng);
        for (double& x : r)
            x *= 1.7 * lambda;
        const Vec3 m{-r[0], -r[1], -r[2]};
        const CTensor3 a = green_tensor(r, k_tw), b = green_tensor(m, k_tw);
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                CHECK(std::abs(a[i][j] - b[i][j]) <= 1e-12 * std::abs(a[1][1]));
    }
}

TEST_CASE("scaled split reassembles alpha G")
{
    const double D = 2.5 * lambda;
    for (const Vec3& r : {Vec3{D, 0, 0}, Vec3{0.3 * D, 0.7 * D, -0.2 * D}, Vec3{3 * D, 0, 0}}) {
        const GreenSplit s = scaled_green_split(r, k_tw, alpha, D);
        const CTensor3 g = green_tensor(r, k_tw);
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) {
                const auto total = s.near[i][j] + s.far[i][j];
                CHECK(std::abs(total - alpha * g[i][j]) <= 1e-12 * std::abs(alpha * g[1][1]) + 1e-300);
            }
    }
}

TEST_CASE("binding force regression at 2.5 wavelengths")
{
    // Closed forms evaluated independently with numpy.
    const BindingForce e = binding_force_exact(1e8, 8e7, 2.5 * lambda, k_tw, alpha);
    const BindingForce f = binding_force_farfield(1e8, 8e7, 2.5 * lambda, k_tw, alpha);
    CHECK(e.fx == doctest::Approx(1.6015751815231198e-13).epsilon(1e-11));
    CHECK(e.fz == doctest::Approx(-8.0568557170769458e-14).epsilon(1e-11));
    CHECK(f.fx == doctest::Approx(1.611371143415397e-13).epsilon(1e-11));
    CHECK(f.fz == doctest::Approx(-8.0568557170769458e-14).epsilon(1e-11));
    CHECK(e.fy == 0.0);
    CHECK(f.fy == 0.0);
    CHECK(e.variant == BindingForce::Variant::exact);
    CHECK(f.variant == BindingForce::Variant::far_field);
    CHECK(e.separation == 2.5 * lambda);
}

TEST_CASE("closed forms equal the gradient of the dipole interaction energy")
{
    for (double r : {0.4, 0.9, 1.3, 2.5, 2.8}) {
        CAPTURE(r);
        const double r0 = r * lambda;
        const double h = 1e-5 * lambda;
        const double fx = (interaction(1e8, 8e7, r0, h, 0) - interaction(1e8, 8e7, r0, -h, 0)) / (2 * h);
        const double fz = (interaction(1e8, 8e7, r0, 0, h) - interaction(1e8, 8e7, r0, 0, -h)) / (2 * h);
        const BindingForce e = binding_force_exact(1e8, 8e7, r0, k_tw, alpha);
        const double scale = std::max(std::abs(e.fx), std::abs(e.fz));
        CHECK(std::abs(fx - e.fx) <= 1e-6 * scale);
        CHECK(std::abs(fz - e.fz) <= 1e-6 * scale);
    }
}

TEST_CASE("force edge cases")
{
    CHECK(binding_force_exact(0.0, 8e7, lambda, k_tw, alpha).fx == 0.0);
    CHECK(binding_force_exact(1e8, 0.0, lambda, k_tw, alpha).fz == 0.0);
    CHECK(binding_force_farfield(0.0, 8e7, lambda, k_tw, alpha).fx == 0.0);
    CHECK_THROWS_AS(binding_force_exact(1e8, 8e7, 0.0, k_tw, alpha), InvalidInput);
    CHECK_THROWS_AS(binding_force_farfield(1e8, 8e7, -1.0, k_tw, alpha), InvalidInput);
}

TEST_CASE("far field converges at large kR")
{
    const double r0 = 200.0 / k_tw;
    const BindingForce e = binding_force_exact(1e8, 8e7, r0, k_tw, alpha);
    const BindingForce f = binding_force_farfield(1e8, 8e7, r0, k_tw, alpha);
    const double scale = std::hypot(e.fx, e.fz);
    CHECK(std::hypot(e.fx - f.fx, e.fz - f.fz) / scale < 0.05);
}

TEST_CASE("omitted terms shrink like 1/(kR)")
{
    // Envelope ratio of the dropped terms to the leading one, over a decade.
    auto ratio = [](double kr) {
        const double dropped = 3.0 + 3.0 * kr + kr;  // envelopes of the lower-order terms
        const double leading = kr * kr * kr;
        return dropped / leading;
    };
    auto measured = [](double kr) {
        double worst = 0.0;
        for (int i = 0; i < 200; ++i) {
            const double x = kr * (1.0 + 0.3 * i / 200.0);
            const BindingForce e = binding_force_exact(1.0, 1.0, x / k_tw, k_tw, alpha);
            const BindingForce f = binding_force_farfield(1.0, 1.0, x / k_tw, k_tw, alpha);
            const double pre = alpha * alpha / (8.0 * si::pi * si::eps0 * std::pow(x / k_tw, 4));
            worst = std::max({worst, std::abs(e.fx - f.fx) / (pre * x * x * x),
                              std::abs(e.fz - f.fz) / (pre * x * x * x)});
        }
        return worst;
    };
    const double a = measured(20.0), b = measured(200.0);
    CHECK(a <= ratio(20.0));
    CHECK(b <= ratio(200.0));
    CHECK(b / a == doctest::Approx(0.01).epsilon(0.6));
}

TEST_CASE("closed forms are smooth in the separation")
{
    // d/dR of pre(R) * poly(kR) evaluated analytically.
    const double e1 = 1e8, e2 = 8e7;
    auto exact_derivs = [&](double r) {
        const double c0 = alpha * alpha * e1 * e2 / (8.0 * si::pi * si::eps0);
        const double x = k_tw * r, c = std::cos(x), s = std::sin(x);
        const double px = 3 * c + 3 * x * s - 2 * x * x * c - x * x * x * s;
        const double dpx = -3 * s + 3 * s + 3 * x * c - 4 * x * c + 2 * x * x * s - 3 * x * x * s - x * x * x * c;
        const double pz = -x * s + x * x * c + x * x * x * s;
        const double dpz = -s - x * c + 2 * x * c - x * x * s + 3 * x * x * s + x * x * x * c;
        const double r4 = std::pow(r, 4), r5 = r4 * r;
        return std::pair{c0 * (k_tw * dpx / r4 - 4.0 * px / r5), c0 * (k_tw * dpz / r4 - 4.0 * pz / r5)};
    };
    for (double rl : {0.35, 0.8, 1.6, 2.9}) {
        const double r = rl * lambda, h = 1e-6 * lambda;
        const auto [dx, dz] = exact_derivs(r);
        const double fdx = (binding_force_exact(e1, e2, r + h, k_tw, alpha).fx -
                            binding_force_exact(e1, e2, r - h, k_tw, alpha).fx) /
                           (2 * h);
        const double fdz = (binding_force_exact(e1, e2, r + h, k_tw, alpha).fz -
                            binding_force_exact(e1, e2, r - h, k_tw, alpha).fz) /
                           (2 * h);
        CHECK(fdx == doctest::Approx(dx).epsilon(1e-6));
        CHECK(fdz == doctest::Approx(dz).epsilon(1e-6));
    }
}

TEST_CASE("force scan grid")
{
    const ForceScanParams p{1e8, 8e7, lambda, alpha};
    const auto two = force_scan(1.0, 2.0, 2, p);
    REQUIRE(two.size() == 2);
    CHECK(two[0].r_over_lambda == 1.0);
    CHECK(two[1].r_over_lambda == 2.0);
    CHECK(two[0].kr == doctest::Approx(2.0 * si::pi).epsilon(1e-15));

    const auto a = force_scan(0.3, 3.0, 541, p);
    const auto b = force_scan(0.3, 3.0, 541, p);
    REQUIRE(a.size() == 541);
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].fx_exact == b[i].fx_exact);
        CHECK(a[i].fz_far == b[i].fz_far);
        if (i > 0)
            CHECK(a[i].r_over_lambda > a[i - 1].r_over_lambda);
    }
    CHECK(a.back().r_over_lambda == 3.0);
    CHECK_THROWS_AS(force_scan(0.3, 3.0, 1, p), InvalidInput);
    CHECK_THROWS_AS(force_scan(-0.3, 3.0, 10, p), InvalidInput);
}
