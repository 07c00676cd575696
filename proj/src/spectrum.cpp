#include "qcarpet/spectrum.hpp"

#include <cmath>
#include <string>

namespace qcarpet {

namespace {

void require_mode_index(int n) {
    if (n < 1) {
        throw std::invalid_argument("mode index must be >= 1, got " + std::to_string(n));
    }
}

}  // namespace

std::string_view to_string(ModelKind kind) {
    switch (kind) {
        case ModelKind::Schrodinger: return "schrodinger";
        case ModelKind::DiracExact: return "dirac";
        case ModelKind::DiracSlightRel: return "dirac-slight";
        case ModelKind::DiracNonRelLimit: return "dirac-nonrel";
        case ModelKind::KleinGordon: return "kg";
    }
    throw std::invalid_argument("unknown model kind");
}

double sin_pi(double x) {
    double r = std::fmod(x, 2.0);  // fmod is exact
    if (r < 0.0) r += 2.0;
    if (r == 0.0 || r == 1.0) return 0.0;
    double sign = 1.0;
    if (r > 1.0) {  // sin(pi (r-1)) = -sin(pi r)
        sign = -1.0;
        r -= 1.0;
    }
    if (r > 0.5) r = 1.0 - r;  // reflect onto [0, 1/2]; both steps exact
    return sign * std::sin(kPi * r);
}

ModelKind model_from_string(std::string_view name) {
    for (ModelKind kind : {ModelKind::Schrodinger, ModelKind::DiracExact,
                           ModelKind::DiracSlightRel, ModelKind::DiracNonRelLimit,
                           ModelKind::KleinGordon}) {
        if (name == to_string(kind)) return kind;
    }
    throw std::invalid_argument("unknown model name: " + std::string(name));
}

PhysicalParams PhysicalParams::natural(double box_length, double q, double q_prime) {
    PhysicalParams params;
    params.box_length = box_length;
    params.q = q;
    params.q_prime = q_prime;
    params.t_rev_sch = 2.0 * box_length / q;
    params.validate();
    return params;
}

void PhysicalParams::validate() const {
    if (!(box_length > 0.0)) throw std::invalid_argument("box length must be positive");
    if (!(q > 0.0)) throw std::invalid_argument("relativistic parameter q must be positive");
    if (!(q_prime > 0.0)) throw std::invalid_argument("relativistic parameter q' must be positive");
    if (!(t_rev_sch > 0.0)) throw std::invalid_argument("t_rev_sch must be positive");
    if (kg_rest_energy && !(*kg_rest_energy >= 0.0)) {  // 0 admits the massless case
        throw std::invalid_argument("explicit KG rest energy must be non-negative");
    }
}

double schrodinger_energy(int n, const PhysicalParams& params) {
    require_mode_index(n);
    return 2.0 * kPi * n * n / params.t_rev_sch;
}

double dirac_energy(int n, const PhysicalParams& params) {
    require_mode_index(n);
    const double x = 2.0 * n * params.q;
    return params.rest_energy_dirac() * std::sqrt(1.0 + x * x);
}

double dirac_momentum(int n, const PhysicalParams& params) {
    require_mode_index(n);
    // 2nq / (1 + sqrt(1 + (2nq)^2)): the defining ratio k/(E + m0) with the
    // derived mass, rearranged so it stays accurate for small nq.
    const double x = 2.0 * n * params.q;
    return x / (1.0 + std::sqrt(1.0 + x * x));
}

double dirac_phase(double momentum_p) {
    if (!(momentum_p >= 0.0) || momentum_p >= 1.0) {
        throw std::invalid_argument("dimensionless momentum must lie in [0, 1)");
    }
    return std::atan2(2.0 * momentum_p, momentum_p * momentum_p - 1.0);
}

double kg_energy(int n, KgBranch branch, const PhysicalParams& params) {
    require_mode_index(n);
    const double k = n * kPi / params.box_length;
    const double rest = params.rest_energy_kg();
    const double magnitude = std::sqrt(k * k + rest * rest);
    return branch == KgBranch::Particle ? magnitude : -magnitude;
}

double limit_energy(int n, ModelKind kind, const PhysicalParams& params) {
    require_mode_index(n);
    const double quadratic = 2.0 * kPi * n * n / params.t_rev_sch;
    switch (kind) {
        case ModelKind::DiracNonRelLimit:
            return quadratic;
        case ModelKind::DiracSlightRel: {
            const double n2 = static_cast<double>(n) * n;
            return quadratic - 2.0 * kPi * n2 * n2 * params.q * params.q / params.t_rev_sch;
        }
        default:
            throw std::invalid_argument("limit_energy requires a Dirac limit kind");
    }
}

double limit_momentum(int n, ModelKind kind, const PhysicalParams& params) {
    require_mode_index(n);
    const double nq = n * params.q;
    switch (kind) {
        case ModelKind::DiracNonRelLimit:
            return nq;
        case ModelKind::DiracSlightRel:
            return nq - nq * nq * nq;
        default:
            throw std::invalid_argument("limit_momentum requires a Dirac limit kind");
    }
}

ModeDescriptor make_mode(int n, ModelKind kind, const PhysicalParams& params) {
    require_mode_index(n);
    ModeDescriptor mode;
    mode.n = n;
    mode.k = n * kPi / params.box_length;
    switch (kind) {
        case ModelKind::Schrodinger:
            mode.energy = schrodinger_energy(n, params);
            break;
        case ModelKind::DiracExact:
            mode.energy = dirac_energy(n, params);
            mode.momentum_p = dirac_momentum(n, params);
            mode.phase_delta = dirac_phase(mode.momentum_p);
            break;
        case ModelKind::DiracSlightRel:
        case ModelKind::DiracNonRelLimit:
            mode.energy = limit_energy(n, kind, params);
            mode.momentum_p = limit_momentum(n, kind, params);
            mode.phase_delta = dirac_phase(mode.momentum_p);
            break;
        case ModelKind::KleinGordon:
            mode.energy = kg_energy(n, KgBranch::Particle, params);
            break;
    }
    return mode;
}

}  // namespace qcarpet
