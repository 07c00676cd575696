#pragma once

#include <optional>
#include <stdexcept>
#include <string_view>

namespace qcarpet {

inline constexpr double kPi = 3.14159265358979323846264338327950288;

/// Dispersion model of the confined particle.
///
/// DiracExact uses the closed-form relativistic spectrum; DiracNonRelLimit and
/// DiracSlightRel replace energy and momentum by their truncated low-q series
/// (quadratic spectrum, and quadratic + quartic correction, respectively).
enum class ModelKind {
    Schrodinger,
    DiracExact,
    DiracSlightRel,
    DiracNonRelLimit,
    KleinGordon,
};

std::string_view to_string(ModelKind kind);

/// Inverse of to_string; throws std::invalid_argument on an unknown name.
ModelKind model_from_string(std::string_view name);

/// sin(pi x) with exact zeros at integer x. Mode profiles and packet weights
/// evaluate through this so that nodes of sin(n pi z / L) land exactly on
/// zero (plain sin(n * pi * z / L) inherits the rounding of n*pi).
double sin_pi(double x);

/// True for any of the three Dirac variants (they share the spatial profile).
constexpr bool is_dirac(ModelKind kind) {
    return kind == ModelKind::DiracExact || kind == ModelKind::DiracSlightRel ||
           kind == ModelKind::DiracNonRelLimit;
}

/// Energy branch of the Klein-Gordon spectrum.
enum class KgBranch { Particle, Antiparticle };

/// Box geometry and the dimensionless relativistic parameters, natural units
/// (hbar = c = 1). Rest energies are derived: the Dirac mass is pinned by
/// q = lambda_C / 4L, i.e. m0 c^2 = pi / (2 q L), and likewise M c^2 =
/// pi / (2 q' L) for Klein-Gordon unless an explicit override is set.
///
/// t_rev_sch is the quadratic-spectrum revival time. The factory `natural()`
/// derives it as 2L/q, which is the unique choice consistent with the Dirac
/// spectrum's low-q expansion; set it explicitly only for pure Schrodinger use.
struct PhysicalParams {
    double box_length = 1.0;  ///< L
    double q = 1.0;           ///< Dirac relativistic parameter, lambda_C/4L
    double q_prime = 1.0;     ///< Klein-Gordon analogue
    double t_rev_sch = 2.0;   ///< quadratic-spectrum revival time

    /// Explicit KG rest energy (natural units). Unset -> derived pi/(2 q' L).
    /// Decouples the boson mass from q' for same-box mass-ratio studies.
    std::optional<double> kg_rest_energy{};

    static PhysicalParams natural(double box_length = 1.0, double q = 1.0,
                                  double q_prime = 1.0);

    double rest_energy_dirac() const { return kPi / (2.0 * q * box_length); }
    double rest_energy_kg() const {
        return kg_rest_energy ? *kg_rest_energy : kPi / (2.0 * q_prime * box_length);
    }

    /// Throws std::invalid_argument on a non-physical configuration.
    void validate() const;
};

/// One eigenmode: index, wave number k = n pi / L, model energy, dimensionless
/// momentum P_n and wall phase delta_n (both zero for the sine-mode models).
struct ModeDescriptor {
    int n = 1;
    double k = 0.0;
    double energy = 0.0;
    double momentum_p = 0.0;
    double phase_delta = 0.0;
};

/// Quadratic spectrum E_n = 2 pi n^2 / t_rev_sch.
double schrodinger_energy(int n, const PhysicalParams& params);

/// Relativistic box spectrum E_n = m0 c^2 sqrt(1 + (2 n q)^2).
double dirac_energy(int n, const PhysicalParams& params);

/// Dimensionless momentum P_n = hbar k c / (E_n + m0 c^2), reduced under the
/// derived mass to 2nq / (1 + sqrt(1 + (2nq)^2)). Always in (0, 1).
double dirac_momentum(int n, const PhysicalParams& params);

/// Wall phase delta = atan2(2P, P^2 - 1), the continuous branch on P in [0,1):
/// decreases monotonically from pi (P -> 0) to pi/2 (P -> 1). Equal to
/// pi - 2 atan(P). Throws for P outside [0, 1).
double dirac_phase(double momentum_p);

/// Klein-Gordon spectrum E_n(+/-) = +/- sqrt((n pi / L)^2 + (M c^2)^2).
double kg_energy(int n, KgBranch branch, const PhysicalParams& params);

/// Truncated low-q Dirac spectra: DiracNonRelLimit -> 2 pi n^2 / T;
/// DiracSlightRel -> 2 pi n^2 / T - 2 pi n^4 q^2 / T. Rejects other kinds.
double limit_energy(int n, ModelKind kind, const PhysicalParams& params);

/// Momentum series matching limit_energy: n q, or n q - n^3 q^3.
double limit_momentum(int n, ModelKind kind, const PhysicalParams& params);

/// Full descriptor (k, energy, P, delta) of mode n under the given model.
ModeDescriptor make_mode(int n, ModelKind kind, const PhysicalParams& params);

}  // namespace qcarpet
