#pragma once

#include <complex>
#include <stdexcept>
#include <vector>

#include "qcarpet/spectrum.hpp"

namespace qcarpet {

/// Thrown when every pre-normalization expansion weight underflows (the
/// packet has no support on the requested mode window).
struct DegeneratePacketError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Initial Gaussian packet and the mode window it is expanded over.
struct PacketSpec {
    double center = 0.5;     ///< z0, must lie strictly inside the box
    double width = 1e-2;     ///< Gaussian width Delta
    double momentum = 0.0;   ///< p0; nonzero switches to quadrature projection
    int m_min = 1;
    int m_max = 40;

    void validate(const PhysicalParams& params) const;
};

/// A truncated eigenmode expansion: descriptors sorted by n plus one complex
/// coefficient per mode, renormalized so sum |c_m|^2 = 1.
struct ModeSet {
    ModelKind model = ModelKind::Schrodinger;
    PhysicalParams params{};
    PacketSpec packet{};
    std::vector<ModeDescriptor> modes;
    std::vector<std::complex<double>> coeffs;

    std::size_t size() const { return modes.size(); }

    /// Coefficient-weighted mean mode index, sum_m m |c_m|^2.
    double weighted_mean_index() const;

    /// Central index n0 used by the revival-time formulas:
    /// round(weighted_mean_index()), clamped to >= 1.
    int default_central_index() const;
};

/// Coefficients c_m proportional to exp(-k^2 Delta^2 / 2) sin(k z0).
ModeSet build_schrodinger_coeffs(const PacketSpec& spec, const PhysicalParams& params);

/// Coefficients c_m proportional to
///   exp(-k^2 Delta^2 / 2) [cos(k z0 - delta/2) + i P sin(k z0 - delta/2)],
/// with (P_m, delta_m) exact for DiracExact and from the truncated series for
/// the limit kinds. `kind` must be one of the Dirac variants.
ModeSet build_dirac_coeffs(const PacketSpec& spec, const PhysicalParams& params,
                           ModelKind kind);

/// Coefficients c_n proportional to E_n^{-1/2} exp(-k^2 Delta^2 / 2) sin(k z0)
/// on the positive-energy branch.
ModeSet build_kg_coeffs(const PacketSpec& spec, const PhysicalParams& params);

/// Dispatch on ModelKind to the builder above.
ModeSet build_modeset(ModelKind kind, const PacketSpec& spec, const PhysicalParams& params);

}  // namespace qcarpet
