#include "levcool/darkmode.hpp"

#include <cmath>
#include <limits>

#include "levcool/error.hpp"

namespace levcool {
namespace {

Eigen::Matrix2cd sector_unitary(cplx g1, cplx g2)
{
    const double n = std::sqrt(std::norm(g1) + std::norm(g2));
    if (!(n > 0.0))
        throw InvalidInput("hybrid sector has zero coupling norm");
    Eigen::Matrix2cd u;
    u << g1 / n, g2 / n, std::conj(g2) / n, -std::conj(g1) / n;
    return u;
}

// Complex mode map B = U b written on (q1, p1, q2, p2).
void embed(const Eigen::Matrix2cd& u, Eigen::MatrixXd& t, int offset)
{
    for (int r = 0; r < 2; ++r)
        for (int c = 0; c < 2; ++c) {
            const double ur = u(r, c).real();
            const double ui = u(r, c).imag();
            t(offset + 2 * r, offset + 2 * c) = ur;
            t(offset + 2 * r, offset + 2 * c + 1) = -ui;
            t(offset + 2 * r + 1, offset + 2 * c) = ui;
            t(offset + 2 * r + 1, offset + 2 * c + 1) = ur;
        }
}

}  // namespace

HybridTwoMode hybridize_two_mode(double omega1, double omega2, double g1, double g2, double g_x)
{
    const double n2 = g1 * g1 + g2 * g2;
    if (!(n2 > 0.0))
        throw InvalidInput("hybrid modes need G1^2 + G2^2 > 0");
    HybridTwoMode h;
    h.omega_plus = (omega1 * g1 * g1 + omega2 * g2 * g2) / n2;
    h.omega_minus = (omega1 * g2 * g2 + omega2 * g1 * g1) / n2;
    h.g_plus = std::sqrt(n2);
    h.g_q = ((omega2 - omega1) * g1 * g2 - g_x * (g1 * g1 - g2 * g2)) / n2;
    h.g_p = (omega2 - omega1) * g1 * g2 / n2;
    h.rotation << g1, g2, -g2, g1;
    h.rotation /= h.g_plus;
    return h;
}

PhaseSpaceTransform phase_space_transform(const HybridTwoMode& h)
{
    PhaseSpaceTransform t;
    t.matrix = Eigen::MatrixXd::Zero(6, 6);
    for (int r = 0; r < 2; ++r)
        for (int c = 0; c < 2; ++c) {
            t.matrix(2 * r, 2 * c) = h.rotation(r, c);
            t.matrix(2 * r + 1, 2 * c + 1) = h.rotation(r, c);
        }
    t.matrix(4, 4) = 1.0;
    t.matrix(5, 5) = 1.0;
    t.dark = {2};
    return t;
}

HybridFiveMode hybridize_five_mode(const std::array<cplx, 2>& gx, const std::array<cplx, 2>& gz, double g_x,
                                   double g_z)
{
    HybridFiveMode h;
    h.u_x = sector_unitary(gx[0], gx[1]);
    h.u_z = sector_unitary(gz[0], gz[1]);
    const double nan = std::numeric_limits<double>::quiet_NaN();
    const cplx undefined(nan, nan);
    const double rt2 = std::sqrt(2.0);
    h.zeta1 = gx[0] != 0.0 ? g_x / (2.0 * std::conj(gx[0])) : undefined;
    h.xi1 = gx[0] != 0.0 ? rt2 * std::conj(gx[0]) / std::abs(gx[0]) : undefined;
    h.zeta2 = gz[0] != 0.0 ? g_z / (2.0 * gz[0]) : undefined;
    h.xi2 = gz[0] != 0.0 ? rt2 * std::conj(gz[0]) / std::abs(gz[0]) : undefined;
    return h;
}

HybridFiveMode hybridize_five_mode(const FiveModeParams& p)
{
    return hybridize_five_mode(p.g_tilde_x, p.g_tilde_z, p.g_x, p.g_z);
}

PhaseSpaceTransform phase_space_transform(const HybridFiveMode& h)
{
    PhaseSpaceTransform t;
    t.matrix = Eigen::MatrixXd::Zero(10, 10);
    embed(h.u_x, t.matrix, 0);
    embed(h.u_z, t.matrix, 4);
    t.matrix(8, 8) = 1.0;
    t.matrix(9, 9) = 1.0;
    t.dark = {2, 6};
    return t;
}

std::vector<double> dark_mode_measure(const LinearModel& model, const PhaseSpaceTransform& t)
{
    const int n = model.dim();
    if (t.matrix.rows() != n || t.matrix.cols() != n)
        throw InvalidInput("transform dimension does not match the model");
    const Eigen::MatrixXd m = t.matrix * model.drift * t.matrix.transpose();
    std::vector<double> out;
    out.reserve(t.dark.size());
    for (int d : t.dark) {
        if (d < 0 || d + 1 >= n)
            throw InvalidInput("dark-mode index out of range");
        double acc = 0.0;
        for (int k = 0; k < n; ++k) {
            if (k == d || k == d + 1)
                continue;
            for (int r = d; r <= d + 1; ++r)
                acc += m(r, k) * m(r, k) + m(k, r) * m(k, r);
        }
        out.push_back(std::sqrt(acc));
    }
    return out;
}

HybridFiveMode with_residuals(HybridFiveMode h, const LinearModel& model)
{
    const std::vector<double> r = dark_mode_measure(model, phase_space_transform(h));
    h.residual = std::array<double, 2>{r[0], r[1]};
    return h;
}

std::vector<double> hybrid_phonon_numbers(const Eigen::MatrixXd& V, const PhaseSpaceTransform& t)
{
    if (V.rows() != t.matrix.rows() || V.cols() != t.matrix.cols())
        throw InvalidInput("transform dimension does not match the covariance");
    const Eigen::MatrixXd w = t.matrix * V * t.matrix.transpose();
    std::vector<double> out;
    for (int d : t.dark)
        out.push_back(0.5 * (w(d, d) + w(d + 1, d + 1) - 1.0));
    return out;
}

}  // namespace levcool
