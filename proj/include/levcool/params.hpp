#pragma once

#include <array>
#include <complex>
#include <optional>

namespace levcool {

using cplx = std::complex<double>;

// Mechanical mode order used everywhere: 1x, 2x, 1z, 2z.
enum Mode { mode_1x = 0, mode_2x = 1, mode_1z = 2, mode_2z = 3 };

enum class WaistConvention {
    diffraction,  // W = lambda / (pi NA)
    calibrated,   // W = sqrt(2) lambda / (pi NA), reproduces omega_z/omega_x = 0.40 at NA = 0.8
};

// A rate given either in rad/s or as a multiple of the local x-frequency of particle 1.
struct Rate {
    enum class Unit { rad_per_s, omega1 };
    double value = 0.0;
    Unit unit = Unit::rad_per_s;

    static Rate absolute(double v) { return {v, Unit::rad_per_s}; }
    static Rate relative(double v) { return {v, Unit::omega1}; }
    double resolve(double omega1) const { return unit == Unit::omega1 ? value * omega1 : value; }
    bool operator==(const Rate&) const = default;
};

struct PhysicalConfig {
    double radius = 0.0;       // m
    double density = 0.0;      // kg/m^3
    double eps_r = 1.0;
    double wavelength = 0.0;   // tweezer wavelength, m
    std::array<double, 2> power{};  // W
    double na = 0.0;
    double separation = 0.0;   // m
    // Tweezer foci along the cavity axis; default +D/2 and -D/2.
    std::optional<std::array<double, 2>> focus;
    std::optional<double> waist;  // overrides the convention when set
    WaistConvention waist_convention = WaistConvention::diffraction;
    Rate detuning;             // omega_cav - omega_tw
    // Cavity field per photon: given directly, from a mode volume, or defaulted.
    std::optional<double> eps_cav;        // V/m
    std::optional<double> cavity_volume;  // m^3
    Rate kappa;
    std::array<Rate, 4> gamma{};          // per Mode
    std::array<double, 4> n_th{};         // per Mode

    bool operator==(const PhysicalConfig&) const = default;
};

// Laboratory parameters of the two-particle setup with the x-only node placement.
PhysicalConfig reference_config();

// Throws InvalidInput when a field is out of its physical domain.
void validate(const PhysicalConfig& cfg);

struct Axes {
    double x = 0.0, y = 0.0, z = 0.0;
};

struct ParticleProps {
    double mass = 0.0;            // kg
    double polarizability = 0.0;  // F m^2
};

struct TweezerProps {
    double field = 0.0;           // focal amplitude, V/m
    double waist = 0.0;           // m
    double rayleigh_range = 0.0;  // m
    Axes omega;                   // bare trap frequencies, rad/s
};

double polarizability(double radius, double eps_r);
// Focal field amplitude of a Gaussian beam of the given power and waist.
double tweezer_field(double power, double waist);

ParticleProps derive_particle(const PhysicalConfig& cfg);
double tweezer_waist(const PhysicalConfig& cfg);
TweezerProps derive_tweezer(const PhysicalConfig& cfg, int j);

// Cavity field that puts G1/Omega1 at 0.22 for the reference setup evaluated
// with the waist choice of cfg.
double default_cavity_field(const PhysicalConfig& cfg);

struct DerivedParams {
    double mass = 0.0;
    double alpha = 0.0;
    std::array<double, 2> eps_tw{};
    double waist = 0.0;
    double rayleigh_range = 0.0;
    double k = 0.0;       // cavity wave number
    double k_tw = 0.0;
    std::array<Axes, 2> omega{};   // bare
    double eta_n = 0.0, eta_f = 0.0, eta_f_tw = 0.0;
    Axes nu;              // frequency-shift stiffness, J/m^2
    Axes k_bind;          // pair coupling stiffness, J/m^2
    double eps_cav = 0.0;
    int orientation = 1;  // sign of x10 - x20

    // Hamiltonian coefficients, rad/s or rad/(s m).
    double r_alpha = 0.0;
    double omega_cs = 0.0;
    double omega_alpha = 0.0;
    cplx omega_beta;
    cplx omega_drive;     // total cavity displacement factor
    std::array<double, 2> g_x{}, g_z{}, g_ax{};
    std::array<double, 2> g_alpha{};  // radiation-pressure coupling from the rescattered cavity field, signed per particle
    std::array<double, 2> g_alpha_x{}, g_alpha_z{};
    std::array<cplx, 2> g_beta_x{}, g_beta_z{};
    std::array<double, 2> g_tilde_ax{};
    std::array<cplx, 2> g_tilde_x{}, g_tilde_z{};
    // Coefficient d_j of the linear term hbar d_j x_j.
    std::array<double, 2> displacement{};

    double detuning = 0.0;      // Delta
    double detuning_eff = 0.0;  // Delta'
    std::array<Axes, 2> omega_tilde{};
    std::array<double, 2> x_zpf{}, z_zpf{};
    std::array<bool, 2> trapped{};

    // Resolved bath parameters.
    double kappa = 0.0;
    std::array<double, 4> gamma{};
    std::array<double, 4> n_th{};

    double omega_ref() const { return omega_tilde[0].x; }
};

DerivedParams derive_couplings(const PhysicalConfig& cfg);

struct ThreeModeParams {
    double omega1 = 1.0, omega2 = 1.0;
    double g1 = 0.0, g2 = 0.0;
    double g_x = 0.0;
    double r1 = 0.0, r2 = 0.0;
    double detuning = 0.0;
    double kappa = 0.0;
    double gamma1 = 0.0, gamma2 = 0.0;
    double n_th1 = 0.0, n_th2 = 0.0;

    bool operator==(const ThreeModeParams&) const = default;
};

struct FiveModeParams {
    std::array<double, 4> omega{};  // dressed, per Mode
    double g_x = 0.0, g_z = 0.0;
    std::array<cplx, 2> g_tilde_x{}, g_tilde_z{};
    double detuning = 0.0;  // Delta tilde
    double kappa = 0.0;
    std::array<double, 4> gamma{};
    std::array<double, 4> n_th{};
    std::array<double, 2> r_tilde{};
    // Semiclassical amplitudes; positions in zero-point units.
    cplx a_mean;
    std::array<double, 4> q_mean{};

    bool operator==(const FiveModeParams&) const = default;
};

// Dimensionless entry: every value in units of Omega1, no physical derivation.
struct ReducedThreeMode {
    double omega2 = 1.0;
    double g1 = 0.0, g2 = 0.0, g_x = 0.0;
    double detuning = 0.0, kappa = 0.0;
    double gamma1 = 0.0, gamma2 = 0.0;
    double n_th1 = 0.0, n_th2 = 0.0;
    double r1 = 0.0, r2 = 0.0;
};

ThreeModeParams reduced_three_mode(const ReducedThreeMode& r);

// x-only reduction of a physical setup (valid when the z couplings vanish).
ThreeModeParams three_mode_from(const DerivedParams& d);

void validate(const ThreeModeParams& p);
void validate(const FiveModeParams& p);

}  // namespace levcool
