#include "qcarpet/packet.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace qcarpet {

namespace {

using complexd = std::complex<double>;

// All pre-normalization weights below this are treated as a vanished packet.
constexpr double kDegenerateWeight = 1e-300;

// Gaussian projection factor of the initial packet onto wave number k.
double gaussian_weight(double k, double width) {
    const double kd = k * width;
    return std::exp(-0.5 * kd * kd);
}

// z0-dependent complex factor of the Dirac mode overlap.
complexd dirac_center_factor(const ModeDescriptor& mode, double z0) {
    const double arg = mode.k * z0 - 0.5 * mode.phase_delta;
    return {std::cos(arg), mode.momentum_p * std::sin(arg)};
}

// Free Gaussian packet psi(z,0) up to its global normalization.
complexd gaussian_packet(double z, double z0, double width, double p0) {
    const double u = (z - z0) / width;
    const double envelope = std::exp(-0.5 * u * u);
    return envelope * complexd{std::cos(p0 * (z - z0)), std::sin(p0 * (z - z0))};
}

// Composite-Simpson projection of the packet onto conj(mode profile). Used
// only for p0 != 0; the p0 = 0 closed forms are the primary path.
complexd quadrature_overlap(const ModeDescriptor& mode, bool dirac_profile,
                            const PacketSpec& spec, const PhysicalParams& params) {
    const double L = params.box_length;
    // Resolve the fastest oscillation: the mode itself and the drive phase.
    const double cycles = mode.k * L / kPi + std::abs(spec.momentum) * L / kPi;
    int intervals = std::max(4096, 48 * static_cast<int>(std::ceil(cycles)));
    intervals += intervals % 2;
    const double h = L / intervals;

    auto integrand = [&](double z) {
        complexd profile;
        if (dirac_profile) {
            const double arg = mode.k * z - 0.5 * mode.phase_delta;
            profile = complexd{std::cos(arg), mode.momentum_p * std::sin(arg)};
        } else {
            profile = std::sin(mode.k * z);
        }
        return profile * gaussian_packet(z, spec.center, spec.width, spec.momentum);
    };

    complexd acc = integrand(0.0) + integrand(L);
    for (int i = 1; i < intervals; ++i) {
        acc += integrand(i * h) * (i % 2 ? 4.0 : 2.0);
    }
    return acc * (h / 3.0);
}

ModeSet assemble(ModelKind kind, const PacketSpec& spec, const PhysicalParams& params,
                 std::vector<complexd> weights, std::vector<ModeDescriptor> modes) {
    double peak_weight = 0.0;
    for (const auto& w : weights) peak_weight = std::max(peak_weight, std::abs(w));
    if (peak_weight < kDegenerateWeight) {
        throw DegeneratePacketError("all expansion weights vanish on the requested mode window");
    }

    double sum_sq = 0.0;
    for (const auto& w : weights) sum_sq += std::norm(w);
    const double scale = 1.0 / std::sqrt(sum_sq);
    for (auto& w : weights) w *= scale;

    ModeSet set;
    set.model = kind;
    set.params = params;
    set.packet = spec;
    set.modes = std::move(modes);
    set.coeffs = std::move(weights);
    return set;
}

}  // namespace

void PacketSpec::validate(const PhysicalParams& params) const {
    params.validate();
    if (!(center > 0.0) || !(center < params.box_length)) {
        throw std::invalid_argument("packet center must lie strictly inside the box");
    }
    if (!(width > 0.0)) throw std::invalid_argument("packet width must be positive");
    if (m_min < 1) throw std::invalid_argument("mode window must start at m >= 1");
    if (m_max - m_min < 1) {
        throw std::invalid_argument("mode window must span at least two modes");
    }
}

double ModeSet::weighted_mean_index() const {
    double acc = 0.0;
    for (std::size_t i = 0; i < modes.size(); ++i) acc += modes[i].n * std::norm(coeffs[i]);
    return acc;
}

int ModeSet::default_central_index() const {
    return std::max(1, static_cast<int>(std::lround(weighted_mean_index())));
}

ModeSet build_schrodinger_coeffs(const PacketSpec& spec, const PhysicalParams& params) {
    spec.validate(params);
    std::vector<ModeDescriptor> modes;
    std::vector<complexd> weights;
    for (int n = spec.m_min; n <= spec.m_max; ++n) {
        auto mode = make_mode(n, ModelKind::Schrodinger, params);
        if (spec.momentum == 0.0) {
            weights.emplace_back(gaussian_weight(mode.k, spec.width) *
                                 sin_pi(n * spec.center / params.box_length));
        } else {
            weights.push_back(quadrature_overlap(mode, false, spec, params));
        }
        modes.push_back(mode);
    }
    return assemble(ModelKind::Schrodinger, spec, params, std::move(weights), std::move(modes));
}

ModeSet build_dirac_coeffs(const PacketSpec& spec, const PhysicalParams& params,
                           ModelKind kind) {
    if (!is_dirac(kind)) {
        throw std::invalid_argument("build_dirac_coeffs requires a Dirac model kind");
    }
    spec.validate(params);
    std::vector<ModeDescriptor> modes;
    std::vector<complexd> weights;
    for (int n = spec.m_min; n <= spec.m_max; ++n) {
        auto mode = make_mode(n, kind, params);
        if (spec.momentum == 0.0) {
            weights.push_back(gaussian_weight(mode.k, spec.width) *
                              dirac_center_factor(mode, spec.center));
        } else {
            weights.push_back(quadrature_overlap(mode, true, spec, params));
        }
        modes.push_back(mode);
    }
    return assemble(kind, spec, params, std::move(weights), std::move(modes));
}

ModeSet build_kg_coeffs(const PacketSpec& spec, const PhysicalParams& params) {
    spec.validate(params);
    std::vector<ModeDescriptor> modes;
    std::vector<complexd> weights;
    for (int n = spec.m_min; n <= spec.m_max; ++n) {
        auto mode = make_mode(n, ModelKind::KleinGordon, params);
        const double mass_weight = 1.0 / std::sqrt(mode.energy);
        if (spec.momentum == 0.0) {
            weights.emplace_back(mass_weight * gaussian_weight(mode.k, spec.width) *
                                 sin_pi(n * spec.center / params.box_length));
        } else {
            weights.push_back(mass_weight * quadrature_overlap(mode, false, spec, params));
        }
        modes.push_back(mode);
    }
    return assemble(ModelKind::KleinGordon, spec, params, std::move(weights), std::move(modes));
}

ModeSet build_modeset(ModelKind kind, const PacketSpec& spec, const PhysicalParams& params) {
    switch (kind) {
        case ModelKind::Schrodinger:
            return build_schrodinger_coeffs(spec, params);
        case ModelKind::KleinGordon:
            return build_kg_coeffs(spec, params);
        default:
            return build_dirac_coeffs(spec, params, kind);
    }
}

}  // namespace qcarpet
