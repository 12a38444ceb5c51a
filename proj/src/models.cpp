#include "levcool/models.hpp"

#include <algorithm>
#include <cmath>

#include "levcool/constants.hpp"
#include "levcool/error.hpp"

namespace levcool {
namespace {

constexpr double rt2 = 1.4142135623730951;

void check_structure(const LinearModel& m)
{
    const int n = m.dim();
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            if (m.drift(i, j) != 0.0 && !allowed_entry(m.kind, i, j))
                throw NumericalError("drift entry outside the model's sparsity pattern");
            if (i != j && m.noise(i, j) != 0.0)
                throw NumericalError("noise matrix must be diagonal");
        }
    for (int i = 0; i < n; ++i)
        if (!(m.noise(i, i) >= 0.0))
            throw NumericalError("noise matrix entries must be non-negative");
}

struct State {
    cplx a;
    std::array<double, 4> q{};
};

State update(const SemiclassicalInputs& in, const State& s)
{
    const double dtilde = in.detuning + in.g_rad[0] * s.q[mode_1x] + in.g_rad[1] * s.q[mode_2x];
    cplx src = std::conj(in.drive);
    src += std::conj(in.g_lin_x[0]) * s.q[mode_1x] + std::conj(in.g_lin_x[1]) * s.q[mode_2x];
    src += std::conj(in.g_lin_z[0]) * s.q[mode_1z] + std::conj(in.g_lin_z[1]) * s.q[mode_2z];

    State out;
    out.a = cplx(0.0, -1.0) * src / cplx(in.kappa, dtilde);
    const double n = std::norm(s.a);
    out.q[mode_1x] = (-in.g_rad[0] * n + in.g_x * s.q[mode_2x] - in.r_tilde[0] - 2.0 * (in.g_lin_x[0] * s.a).real()) /
                     in.omega[mode_1x];
    out.q[mode_2x] = (-in.g_rad[1] * n + in.g_x * s.q[mode_1x] + in.r_tilde[1] - 2.0 * (in.g_lin_x[1] * s.a).real()) /
                     in.omega[mode_2x];
    out.q[mode_1z] = (in.g_z * s.q[mode_2z] - 2.0 * (in.g_lin_z[0] * s.a).real()) / in.omega[mode_1z];
    out.q[mode_2z] = (in.g_z * s.q[mode_1z] - 2.0 * (in.g_lin_z[1] * s.a).real()) / in.omega[mode_2z];
    return out;
}

double state_norm(const State& s)
{
    double acc = std::norm(s.a);
    for (double v : s.q)
        acc += v * v;
    return std::sqrt(acc);
}

double distance(const State& x, const State& y)
{
    double acc = std::norm(x.a - y.a);
    for (std::size_t i = 0; i < 4; ++i)
        acc += (x.q[i] - y.q[i]) * (x.q[i] - y.q[i]);
    return std::sqrt(acc);
}

bool finite_state(const State& s)
{
    if (!std::isfinite(s.a.real()) || !std::isfinite(s.a.imag()))
        return false;
    for (double v : s.q)
        if (!std::isfinite(v))
            return false;
    return true;
}

}  // namespace

bool allowed_entry(ModelKind kind, int r, int c)
{
    if (kind == ModelKind::three_mode) {
        static constexpr bool mask[6][6] = {
            {0, 1, 0, 0, 0, 0}, {1, 1, 1, 0, 1, 0}, {0, 0, 0, 1, 0, 0},
            {1, 0, 1, 1, 1, 0}, {0, 0, 0, 0, 1, 1}, {1, 0, 1, 0, 1, 1},
        };
        return r >= 0 && r < 6 && c >= 0 && c < 6 && mask[r][c];
    }
    static constexpr bool mask[10][10] = {
        {0, 1, 0, 0, 0, 0, 0, 0, 0, 0}, {1, 1, 1, 0, 0, 0, 0, 0, 1, 1},
        {0, 0, 0, 1, 0, 0, 0, 0, 0, 0}, {1, 0, 1, 1, 0, 0, 0, 0, 1, 1},
        {0, 0, 0, 0, 0, 1, 0, 0, 0, 0}, {0, 0, 0, 0, 1, 1, 1, 0, 1, 1},
        {0, 0, 0, 0, 0, 0, 0, 1, 0, 0}, {0, 0, 0, 0, 1, 0, 1, 1, 1, 1},
        {1, 0, 1, 0, 1, 0, 1, 0, 1, 1}, {1, 0, 1, 0, 1, 0, 1, 0, 1, 1},
    };
    return r >= 0 && r < 10 && c >= 0 && c < 10 && mask[r][c];
}

LinearModel build_three_mode(const ThreeModeParams& p, const BuildOptions& opts)
{
    validate(p);
    if (p.g1 == 0.0 && p.g2 == 0.0 && !opts.allow_uncoupled)
        throw InvalidInput("both mechanical modes are uncoupled from the cavity");

    LinearModel m;
    m.kind = ModelKind::three_mode;
    m.drift = Eigen::MatrixXd::Zero(6, 6);
    Eigen::MatrixXd& A = m.drift;
    A(0, 1) = p.omega1;
    A(1, 0) = -p.omega1;
    A(1, 1) = -p.gamma1;
    A(1, 2) = p.g_x;
    A(1, 4) = -rt2 * p.g1;
    A(2, 3) = p.omega2;
    A(3, 0) = p.g_x;
    A(3, 2) = -p.omega2;
    A(3, 3) = -p.gamma2;
    A(3, 4) = -rt2 * p.g2;
    A(4, 4) = -p.kappa;
    A(4, 5) = p.detuning;
    A(5, 0) = -rt2 * p.g1;
    A(5, 2) = -rt2 * p.g2;
    A(5, 4) = -p.detuning;
    A(5, 5) = -p.kappa;

    Eigen::VectorXd q(6);
    q << 0.0, p.gamma1 * (2.0 * p.n_th1 + 1.0), 0.0, p.gamma2 * (2.0 * p.n_th2 + 1.0), p.kappa, p.kappa;
    m.noise = q.asDiagonal();
    m.labels = {"q1", "p1", "q2", "p2", "X", "Y"};
    m.mechanical = {{"1x", 0, opts.zpf[mode_1x]}, {"2x", 2, opts.zpf[mode_2x]}};
    check_structure(m);
    return m;
}

LinearModel build_five_mode(const FiveModeParams& p, const BuildOptions& opts)
{
    validate(p);
    const bool uncoupled = p.g_tilde_x[0] == 0.0 && p.g_tilde_x[1] == 0.0 && p.g_tilde_z[0] == 0.0 &&
                           p.g_tilde_z[1] == 0.0;
    if (uncoupled && !opts.allow_uncoupled)
        throw InvalidInput("all mechanical modes are uncoupled from the cavity");

    LinearModel m;
    m.kind = ModelKind::five_mode;
    m.drift = Eigen::MatrixXd::Zero(10, 10);
    Eigen::MatrixXd& A = m.drift;
    for (int l = 0; l < 4; ++l) {
        const int r = 2 * l;
        A(r, r + 1) = p.omega[l];
        A(r + 1, r) = -p.omega[l];
        A(r + 1, r + 1) = -p.gamma[l];
    }
    A(1, 2) = p.g_x;
    A(3, 0) = p.g_x;
    A(5, 6) = p.g_z;
    A(7, 4) = p.g_z;

    const int X = 8, Y = 9;
    for (int j = 0; j < 2; ++j) {
        const double a = p.g_tilde_x[j].real(), b = p.g_tilde_x[j].imag();
        const double c = p.g_tilde_z[j].real(), d = p.g_tilde_z[j].imag();
        const int qx = 2 * j, qz = 4 + 2 * j;
        A(qx + 1, X) = -rt2 * a;
        A(qx + 1, Y) = rt2 * b;
        A(qz + 1, X) = -rt2 * c;
        A(qz + 1, Y) = -rt2 * d;
        A(X, qx) = -rt2 * b;
        A(X, qz) = -rt2 * d;
        A(Y, qx) = -rt2 * a;
        A(Y, qz) = -rt2 * c;
    }
    A(X, X) = -p.kappa;
    A(X, Y) = p.detuning;
    A(Y, X) = -p.detuning;
    A(Y, Y) = -p.kappa;

    Eigen::VectorXd q = Eigen::VectorXd::Zero(10);
    for (int l = 0; l < 4; ++l)
        q(2 * l + 1) = p.gamma[l] * (2.0 * p.n_th[l] + 1.0);
    q(X) = p.kappa;
    q(Y) = p.kappa;
    m.noise = q.asDiagonal();
    m.labels = {"q1x", "p1x", "q2x", "p2x", "q1z", "p1z", "q2z", "p2z", "X", "Y"};
    m.mechanical = {{"1x", 0, opts.zpf[mode_1x]},
                    {"2x", 2, opts.zpf[mode_2x]},
                    {"1z", 4, opts.zpf[mode_1z]},
                    {"2z", 6, opts.zpf[mode_2z]}};
    check_structure(m);
    return m;
}

SemiclassicalInputs semiclassical_inputs(const DerivedParams& d)
{
    if (!d.trapped[0] || !d.trapped[1])
        throw InvalidInput("both particles must be trapped");
    SemiclassicalInputs in;
    in.omega = {d.omega_tilde[0].x, d.omega_tilde[1].x, d.omega_tilde[0].z, d.omega_tilde[1].z};
    in.g_x = 2.0 * d.k_bind.x * d.x_zpf[0] * d.x_zpf[1] / si::hbar;
    in.g_z = 2.0 * d.k_bind.z * d.z_zpf[0] * d.z_zpf[1] / si::hbar;
    for (std::size_t j = 0; j < 2; ++j) {
        in.g_lin_x[j] = rt2 * d.g_tilde_x[j] * d.x_zpf[j];
        in.g_lin_z[j] = cplx(0.0, rt2) * d.g_tilde_z[j] * d.z_zpf[j];
        in.g_rad[j] = rt2 * d.g_tilde_ax[j] * d.x_zpf[j];
    }
    in.drive = d.omega_drive;
    in.r_tilde = {rt2 * d.displacement[0] * d.x_zpf[0], -rt2 * d.displacement[1] * d.x_zpf[1]};
    in.detuning = d.detuning_eff;
    in.kappa = d.kappa;
    in.gamma = d.gamma;
    in.n_th = d.n_th;
    return in;
}

double semiclassical_residual(const SemiclassicalInputs& in, cplx a, const std::array<double, 4>& q)
{
    const State s{a, q};
    const State f = update(in, s);
    const double scale = std::max(state_norm(s), state_norm(f));
    return scale > 0.0 ? distance(f, s) / scale : 0.0;
}

SemiclassicalSolution solve_semiclassical(const SemiclassicalInputs& in, const SemiclassicalOptions& opts)
{
    if (!(in.kappa > 0.0))
        throw InvalidInput("kappa must be positive");
    for (double w : in.omega)
        if (!(w > 0.0))
            throw InvalidInput("dressed frequencies must be positive");

    State s;
    double residual = 0.0;
    int it = 0;
    for (;; ++it) {
        const State f = update(in, s);
        if (!finite_state(f) || state_norm(f) > 1e150)
            throw NumericalError("unstable semiclassical branch");
        const double scale = std::max(state_norm(s), state_norm(f));
        residual = scale > 0.0 ? distance(f, s) / scale : 0.0;
        if (residual <= opts.tolerance) {
            s = f;
            break;
        }
        if (it >= opts.max_iterations)
            throw NumericalError("semiclassical iteration did not converge, last residual " + brief(residual));
        s.a += opts.relaxation * (f.a - s.a);
        for (std::size_t i = 0; i < 4; ++i)
            s.q[i] += opts.relaxation * (f.q[i] - s.q[i]);
    }

    SemiclassicalSolution out;
    FiveModeParams& p = out.params;
    p.omega = in.omega;
    p.g_x = in.g_x;
    p.g_z = in.g_z;
    for (std::size_t j = 0; j < 2; ++j) {
        p.g_tilde_x[j] = in.g_lin_x[j] + in.g_rad[j] * std::conj(s.a);
        p.g_tilde_z[j] = in.g_lin_z[j];
    }
    p.detuning = in.detuning + in.g_rad[0] * s.q[mode_1x] + in.g_rad[1] * s.q[mode_2x];
    p.kappa = in.kappa;
    p.gamma = in.gamma;
    p.n_th = in.n_th;
    p.r_tilde = in.r_tilde;
    p.a_mean = s.a;
    p.q_mean = s.q;
    out.iterations = it;
    out.residual = semiclassical_residual(in, s.a, s.q);
    return out;
}

}  // namespace levcool
