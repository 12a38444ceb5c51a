#pragma once

#include <Eigen/Dense>
#include <array>
#include <optional>
#include <vector>

#include "levcool/models.hpp"

namespace levcool {

struct HybridTwoMode {
    double omega_plus = 0.0, omega_minus = 0.0;
    double g_plus = 0.0;
    double g_q = 0.0, g_p = 0.0;
    Eigen::Matrix2d rotation;  // (q1, q2) -> (q+, q-)
};

HybridTwoMode hybridize_two_mode(double omega1, double omega2, double g1, double g2, double g_x);

// Real orthogonal map of the model's phase-space vector into the hybrid basis.
struct PhaseSpaceTransform {
    Eigen::MatrixXd matrix;
    std::vector<int> dark;  // position row of each candidate dark mode in the hybrid basis
};

// Hybrid basis (q+, p+, q-, p-, X, Y) for the three-mode model.
PhaseSpaceTransform phase_space_transform(const HybridTwoMode& h);

struct HybridFiveMode {
    Eigen::Matrix2cd u_x, u_z;  // rows: plus mode, minus mode
    cplx zeta1, zeta2, xi1, xi2;
    std::optional<std::array<double, 2>> residual;
};

HybridFiveMode hybridize_five_mode(const std::array<cplx, 2>& g_tilde_x, const std::array<cplx, 2>& g_tilde_z,
                                   double g_x, double g_z);
HybridFiveMode hybridize_five_mode(const FiveModeParams& p);

// Hybrid basis (Q1+, P1+, Q1-, P1-, Q2+, P2+, Q2-, P2-, X, Y) for the five-mode model.
PhaseSpaceTransform phase_space_transform(const HybridFiveMode& h);

// Frobenius norm of the couplings between each candidate dark mode and every
// other block of the conjugated drift matrix.
std::vector<double> dark_mode_measure(const LinearModel& model, const PhaseSpaceTransform& t);

// Same as above, stored on the hybrid description.
HybridFiveMode with_residuals(HybridFiveMode h, const LinearModel& model);

// Occupation of each candidate dark mode for a covariance in the original basis.
std::vector<double> hybrid_phonon_numbers(const Eigen::MatrixXd& V, const PhaseSpaceTransform& t);

}  // namespace levcool
