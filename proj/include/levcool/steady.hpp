#pragma once

#include <Eigen/Dense>
#include <optional>
#include <vector>

#include "levcool/models.hpp"

namespace levcool {

struct StabilityReport {
    bool stable = false;
    bool marginal = false;  // |margin| within tolerance; reported as not stable
    double margin = 0.0;    // largest real part of the drift spectrum
};

StabilityReport is_stable(const Eigen::MatrixXd& A);

// Solves A V + V A^T = -Q. Throws NumericalError for unstable or
// ill-conditioned drift and when the residual check fails.
Eigen::MatrixXd solve_lyapunov(const Eigen::MatrixXd& A, const Eigen::MatrixXd& Q);

// ||A V + V A^T + Q||_F / ||Q||_F (absolute when Q = 0).
double lyapunov_residual(const Eigen::MatrixXd& A, const Eigen::MatrixXd& Q, const Eigen::MatrixXd& V);

// (V_qq + V_pp - 1) / 2 for each mechanical mode of the model.
std::vector<double> phonon_numbers(const Eigen::MatrixXd& V, const LinearModel& model);

// Classical RK4 on dV/dt = A V + V A^T + Q.
Eigen::MatrixXd evolve_covariance(const Eigen::MatrixXd& A, const Eigen::MatrixXd& Q, const Eigen::MatrixXd& V0,
                                  double t_final, double dt);

struct CoolingResult {
    bool stable = false;
    bool marginal = false;
    double margin = 0.0;
    Eigen::MatrixXd covariance;    // empty when not stable
    std::vector<double> n_bar;     // empty when not stable
    double residual = 0.0;
};

CoolingResult analyze(const LinearModel& model);

}  // namespace levcool
