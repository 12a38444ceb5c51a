#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

#include "levcool/params.hpp"

namespace levcool {

enum class ModelKind { three_mode, five_mode };

struct MechanicalMode {
    std::string label;           // "1x", "2x", "1z", "2z"
    int q = 0;                   // row of the position quadrature; momentum is q + 1
    std::optional<double> zpf;   // m, absent for dimensionless models
};

// Linearised Langevin model du/dt = A u + noise with diffusion matrix Q.
struct LinearModel {
    ModelKind kind = ModelKind::three_mode;
    Eigen::MatrixXd drift;
    Eigen::MatrixXd noise;
    std::vector<std::string> labels;
    std::vector<MechanicalMode> mechanical;

    int dim() const { return static_cast<int>(drift.rows()); }
    // First row of the cavity quadrature pair.
    int cavity() const { return dim() - 2; }
};

struct BuildOptions {
    bool allow_uncoupled = false;
    std::array<std::optional<double>, 4> zpf{};
};

LinearModel build_three_mode(const ThreeModeParams& p, const BuildOptions& opts = {});
LinearModel build_five_mode(const FiveModeParams& p, const BuildOptions& opts = {});

// Nonzero pattern permitted for each model class; the builders check against it.
bool allowed_entry(ModelKind kind, int row, int col);

// Everything the mean-field equations need, in rad/s with positions in
// zero-point units.
struct SemiclassicalInputs {
    std::array<double, 4> omega{};   // dressed, per Mode
    double g_x = 0.0, g_z = 0.0;     // mechanical pair couplings
    std::array<cplx, 2> g_lin_x{};   // sqrt2 g~_xj x_zpf
    std::array<cplx, 2> g_lin_z{};   // i sqrt2 g~_zj z_zpf
    std::array<double, 2> g_rad{};   // sqrt2 g~_axj x_zpf, radiation-pressure coupling per photon
    cplx drive;                      // cavity displacement factor
    std::array<double, 2> r_tilde{}; // particle 1 pushed by -r1, particle 2 by +r2
    double detuning = 0.0;           // Delta'
    double kappa = 0.0;
    std::array<double, 4> gamma{};
    std::array<double, 4> n_th{};
};

SemiclassicalInputs semiclassical_inputs(const DerivedParams& d);

struct SemiclassicalOptions {
    double relaxation = 0.5;
    double tolerance = 1e-12;
    int max_iterations = 100000;
};

struct SemiclassicalSolution {
    FiveModeParams params;
    int iterations = 0;
    double residual = 0.0;  // relative, after the last update
};

SemiclassicalSolution solve_semiclassical(const SemiclassicalInputs& in, const SemiclassicalOptions& opts = {});

// Relative mismatch of the mean-field equations at the given amplitudes.
double semiclassical_residual(const SemiclassicalInputs& in, cplx a, const std::array<double, 4>& q);

}  // namespace levcool
