#include "levcool/steady.hpp"

#include <cmath>
#include <string>

#include "levcool/error.hpp"
#include "levcool/kernels.hpp"

namespace levcool {
namespace {

constexpr double max_condition = 1e14;
constexpr double residual_limit = 1e-10;

void require_finite_square(const Eigen::MatrixXd& A, const char* what)
{
    if (A.rows() != A.cols() || A.rows() == 0)
        throw InvalidInput(std::string(what) + " must be square and nonempty");
    if (!A.allFinite())
        throw InvalidInput(std::string(what) + " must be finite");
}

// Dense LU with partial pivoting, row-major, rows updated through the kernels.
class DenseLU {
public:
    explicit DenseLU(std::vector<double> a, std::size_t n) : n_(n), a_(std::move(a)), piv_(n)
    {
        for (std::size_t c = 0; c < n_; ++c) {
            double s = 0.0;
            for (std::size_t r = 0; r < n_; ++r)
                s += std::abs(at(r, c));
            norm1_ = std::max(norm1_, s);
        }
        for (std::size_t k = 0; k < n_; ++k) {
            std::size_t p = k;
            for (std::size_t r = k + 1; r < n_; ++r)
                if (std::abs(at(r, k)) > std::abs(at(p, k)))
                    p = r;
            piv_[k] = p;
            if (at(p, k) == 0.0)
                throw NumericalError("singular Lyapunov operator");
            if (p != k)
                for (std::size_t c = 0; c < n_; ++c)
                    std::swap(at(k, c), at(p, c));
            const double inv = 1.0 / at(k, k);
            const std::size_t tail = n_ - k - 1;
            for (std::size_t r = k + 1; r < n_; ++r) {
                const double l = at(r, k) * inv;
                at(r, k) = l;
                if (l != 0.0)
                    kernels::axpy(-l, &at(k, k + 1), &at(r, k + 1), tail);
            }
        }
    }

    std::vector<double> solve(std::vector<double> b) const
    {
        for (std::size_t k = 0; k < n_; ++k)
            std::swap(b[k], b[piv_[k]]);
        for (std::size_t r = 1; r < n_; ++r)
            b[r] -= kernels::dot(&at(r, 0), b.data(), r);
        for (std::size_t r = n_; r-- > 0;) {
            const std::size_t tail = n_ - r - 1;
            b[r] = (b[r] - kernels::dot(&at(r, r + 1), &b[r + 1], tail)) / at(r, r);
        }
        return b;
    }

    std::vector<double> solve_transposed(std::vector<double> b) const
    {
        // (P^T L U)^T x = b  =>  U^T y = b, L^T z = y, x = P^T z
        for (std::size_t r = 0; r < n_; ++r) {
            double s = b[r];
            for (std::size_t c = 0; c < r; ++c)
                s -= at(c, r) * b[c];
            b[r] = s / at(r, r);
        }
        for (std::size_t r = n_; r-- > 0;) {
            double s = b[r];
            for (std::size_t c = r + 1; c < n_; ++c)
                s -= at(c, r) * b[c];
            b[r] = s;
        }
        for (std::size_t k = n_; k-- > 0;)
            std::swap(b[k], b[piv_[k]]);
        return b;
    }

    // Hager / Higham estimate of the 1-norm condition number.
    double condition_estimate() const
    {
        std::vector<double> x(n_, 1.0 / static_cast<double>(n_));
        double est = 0.0;
        for (int it = 0; it < 5; ++it) {
            const std::vector<double> y = solve(x);
            double ny = 0.0;
            for (double v : y)
                ny += std::abs(v);
            if (it > 0 && ny <= est)
                break;
            est = ny;
            std::vector<double> xi(n_);
            for (std::size_t i = 0; i < n_; ++i)
                xi[i] = y[i] >= 0.0 ? 1.0 : -1.0;
            const std::vector<double> z = solve_transposed(xi);
            std::size_t jmax = 0;
            for (std::size_t i = 1; i < n_; ++i)
                if (std::abs(z[i]) > std::abs(z[jmax]))
                    jmax = i;
            double zx = 0.0;
            for (std::size_t i = 0; i < n_; ++i)
                zx += z[i] * x[i];
            if (std::abs(z[jmax]) <= zx)
                break;
            std::fill(x.begin(), x.end(), 0.0);
            x[jmax] = 1.0;
        }
        return norm1_ * est;
    }

private:
    double& at(std::size_t r, std::size_t c) { return a_[r * n_ + c]; }
    const double& at(std::size_t r, std::size_t c) const { return a_[r * n_ + c]; }

    std::size_t n_;
    std::vector<double> a_;
    std::vector<std::size_t> piv_;
    double norm1_ = 0.0;
};

Eigen::MatrixXd multiply(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b)
{
    Eigen::MatrixXd c(a.rows(), b.cols());
    kernels::gemm(static_cast<std::size_t>(a.rows()), static_cast<std::size_t>(b.cols()),
                  static_cast<std::size_t>(a.cols()), a.data(), b.data(), c.data());
    return c;
}

Eigen::MatrixXd lyapunov_lhs(const Eigen::MatrixXd& A, const Eigen::MatrixXd& V)
{
    const Eigen::MatrixXd At = A.transpose();
    return multiply(A, V) + multiply(V, At);
}

}  // namespace

StabilityReport is_stable(const Eigen::MatrixXd& A)
{
    require_finite_square(A, "drift matrix");
    Eigen::EigenSolver<Eigen::MatrixXd> es(A, false);
    if (es.info() != Eigen::Success)
        throw NumericalError("eigenvalue computation failed");
    StabilityReport r;
    r.margin = es.eigenvalues().real().maxCoeff();
    const double tol = 1e-12 * A.norm();
    r.marginal = std::abs(r.margin) <= tol;
    r.stable = r.margin < -tol;
    return r;
}

double lyapunov_residual(const Eigen::MatrixXd& A, const Eigen::MatrixXd& Q, const Eigen::MatrixXd& V)
{
    const double qn = Q.norm();
    const double rn = (lyapunov_lhs(A, V) + Q).norm();
    return qn > 0.0 ? rn / qn : rn;
}

Eigen::MatrixXd solve_lyapunov(const Eigen::MatrixXd& A, const Eigen::MatrixXd& Q)
{
    require_finite_square(A, "drift matrix");
    if (Q.rows() != A.rows() || Q.cols() != A.cols() || !Q.allFinite())
        throw InvalidInput("noise matrix must match the drift matrix and be finite");
    const StabilityReport st = is_stable(A);
    if (!st.stable)
        throw NumericalError("drift matrix is not stable (margin " + brief(st.margin) + ")");

    const std::size_t n = static_cast<std::size_t>(A.rows());
    const std::size_t N = n * n;
    // vec(A V + V A^T) = (I (x) A + A (x) I) vec(V), column-major vec.
    std::vector<double> K(N * N, 0.0);
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t i = 0; i < n; ++i) {
            const std::size_t row = i + j * n;
            for (std::size_t k = 0; k < n; ++k) {
                K[row * N + (k + j * n)] += A(i, k);
                K[row * N + (i + k * n)] += A(j, k);
            }
        }
    const DenseLU lu(std::move(K), N);
    const double cond = lu.condition_estimate();
    if (!(cond <= max_condition))
        throw NumericalError("Lyapunov operator is ill-conditioned (condition estimate " + brief(cond) +
                             ", margin " + brief(st.margin) + ")");

    auto solve_for = [&](const Eigen::MatrixXd& rhs) {
        std::vector<double> b(rhs.data(), rhs.data() + N);
        for (double& v : b)
            v = -v;
        const std::vector<double> x = lu.solve(std::move(b));
        return Eigen::Map<const Eigen::MatrixXd>(x.data(), static_cast<Eigen::Index>(n),
                                                 static_cast<Eigen::Index>(n))
            .eval();
    };

    Eigen::MatrixXd V = solve_for(Q);
    double res = lyapunov_residual(A, Q, V);
    for (int step = 0; step < 3 && res > 1e-14; ++step) {
        const Eigen::MatrixXd R = lyapunov_lhs(A, V) + Q;
        const Eigen::MatrixXd trial = V + solve_for(R);
        const double r2 = lyapunov_residual(A, Q, trial);
        if (!(r2 < res))
            break;
        V = trial;
        res = r2;
    }
    V = 0.5 * (V + V.transpose()).eval();
    res = lyapunov_residual(A, Q, V);
    if (!(res <= residual_limit))
        throw NumericalError("Lyapunov residual " + brief(res) + " exceeds tolerance");
    return V;
}

std::vector<double> phonon_numbers(const Eigen::MatrixXd& V, const LinearModel& model)
{
    if (V.rows() != model.dim() || V.cols() != model.dim())
        throw InvalidInput("covariance does not match the model");
    std::vector<double> n;
    n.reserve(model.mechanical.size());
    for (const MechanicalMode& m : model.mechanical)
        n.push_back(0.5 * (V(m.q, m.q) + V(m.q + 1, m.q + 1) - 1.0));
    return n;
}

Eigen::MatrixXd evolve_covariance(const Eigen::MatrixXd& A, const Eigen::MatrixXd& Q, const Eigen::MatrixXd& V0,
                                  double t_final, double dt)
{
    require_finite_square(A, "drift matrix");
    if (Q.rows() != A.rows() || V0.rows() != A.rows() || Q.cols() != A.cols() || V0.cols() != A.cols())
        throw InvalidInput("matrix dimensions differ");
    if (!(t_final >= 0.0) || !std::isfinite(t_final))
        throw InvalidInput("t_final must be non-negative");
    const double an = A.norm();
    if (!(dt > 0.0) || (an > 0.0 && !(dt < 0.1 / an)))
        throw InvalidInput("dt must be positive and below 0.1/||A||");
    if (t_final == 0.0)
        return V0;

    const auto steps = static_cast<long long>(std::ceil(t_final / dt));
    const double h = t_final / static_cast<double>(steps);
    auto rhs = [&](const Eigen::MatrixXd& V) {
        const Eigen::MatrixXd M = multiply(A, V);
        return (M + M.transpose() + Q).eval();
    };
    const double limit = 1e100 * (1.0 + V0.norm() + Q.norm());
    Eigen::MatrixXd V = 0.5 * (V0 + V0.transpose());
    for (long long s = 0; s < steps; ++s) {
        const Eigen::MatrixXd k1 = rhs(V);
        const Eigen::MatrixXd k2 = rhs(V + 0.5 * h * k1);
        const Eigen::MatrixXd k3 = rhs(V + 0.5 * h * k2);
        const Eigen::MatrixXd k4 = rhs(V + h * k3);
        V += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        if (!V.allFinite() || V.norm() > limit)
            throw NumericalError("covariance integration blew up");
    }
    return V;
}

CoolingResult analyze(const LinearModel& model)
{
    CoolingResult r;
    const StabilityReport st = is_stable(model.drift);
    r.stable = st.stable;
    r.marginal = st.marginal;
    r.margin = st.margin;
    if (!st.stable)
        return r;
    r.covariance = solve_lyapunov(model.drift, model.noise);
    r.residual = lyapunov_residual(model.drift, model.noise, r.covariance);
    r.n_bar = phonon_numbers(r.covariance, model);
    return r;
}

}  // namespace levcool
