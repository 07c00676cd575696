#pragma once

#include <complex>
#include <span>
#include <vector>

#include "qcarpet/packet.hpp"

namespace qcarpet {

/// Space-time sampling: nz points over [0, L] and nt points over
/// [0, t_max * T_rev(model)], both inclusive of the endpoints.
struct GridSpec {
    int nz = 512;
    int nt = 512;
    double t_max = 1.0;  ///< end time in units of the model's revival time

    void validate() const;
};

/// |Psi(z,t)|^2 sampled on a GridSpec lattice, row-major with one row per
/// time sample. norm0 is the trapezoid integral of the t=0 row.
struct DensityGrid {
    GridSpec spec{};
    ModelKind model = ModelKind::Schrodinger;
    double q_value = 0.0;     ///< relativistic parameter of the producing model
    double box_length = 1.0;
    double t_end = 0.0;       ///< physical end time
    double norm0 = 0.0;
    std::vector<double> values;

    double value(int it, int iz) const { return values[static_cast<std::size_t>(it) * spec.nz + iz]; }
    double z_at(int iz) const { return box_length * iz / (spec.nz - 1); }
    double t_at(int it) const { return t_end * it / (spec.nt - 1); }
    double peak() const;

    /// Trapezoid integral of one time row over [0, L].
    double row_integral(int it) const;

    /// max_t |row_integral(t) - norm0| / norm0. Zero (up to roundoff) for
    /// orthogonal mode systems; genuinely nonzero for the Dirac profiles at
    /// relativistic q, whose forced k = n pi / L breaks orthogonality.
    double max_row_norm_deviation() const;

    /// Elementwise sanity: all values finite and >= -1e-12.
    void validate() const;
};

/// Unit-peak-scaled elementwise difference between two grids.
struct GridComparison {
    double max_abs = 0.0;
    double rms = 0.0;
};

struct AutocorrSample {
    double t = 0.0;
    double value = 0.0;
};

struct RevivalPeak {
    double t = 0.0;
    double value = 0.0;
};

/// Revival diagnostic bundle: the closed-form revival time, the sampled
/// autocorrelation trace and the detected peaks.
struct RevivalReport {
    ModelKind model = ModelKind::Schrodinger;
    double q_value = 0.0;
    int central_index = 1;      ///< n0 used in the closed form
    double analytic_t_rev = 0.0;
    double threshold = 0.9;
    std::vector<AutocorrSample> trace;
    std::vector<RevivalPeak> peaks;
};

/// Spatial profile of one mode: sqrt(2/L) sin(k z) for the sine models,
/// cos(k z - delta/2) - i P sin(k z - delta/2) for the Dirac variants.
std::complex<double> mode_function(const ModeSet& modeset, std::size_t index, double z);

/// Psi(z, t) = sum_m c_m phi_m(z) exp(-i E_m t).
std::complex<double> wavefunction_at(const ModeSet& modeset, double z, double t);

/// Density over the GridSpec lattice with t_end = t_max * T_rev(modeset).
/// O(M) per point; rows are evaluated independently (optionally in parallel)
/// and the result is bit-identical for any thread count.
DensityGrid density_grid(const ModeSet& modeset, const GridSpec& spec, int threads = 0);

/// Same evaluation over an explicit physical time window [0, t_end].
DensityGrid density_grid_over(const ModeSet& modeset, int nz, int nt, double t_end,
                              int threads = 0);

/// Brute-force O(M^2)-per-point double sum over mode pairs; the test oracle
/// for density_grid. Guards the mode count (<= 128) and checks that the
/// accumulated imaginary residual stays below 1e-10 of the peak.
DensityGrid double_sum_oracle(const ModeSet& modeset, const GridSpec& spec);
DensityGrid double_sum_oracle_over(const ModeSet& modeset, int nz, int nt, double t_end);

/// A(t) = |sum_m |c_m|^2 exp(-i E_m t)|^2 at the given times.
std::vector<AutocorrSample> autocorrelation(const ModeSet& modeset,
                                            std::span<const double> times);

/// Closed-form revival times: t_rev_sch for Schrodinger and the Dirac limit
/// kinds; pi sqrt(1 + 4 n0^2 q^2) / (2 E_rest q^2 n0) for DiracExact, and the
/// same form with (q', M c^2) for KleinGordon.
double analytic_revival_time(ModelKind model, const PhysicalParams& params, int n0);

/// n0 defaulted to modeset.default_central_index().
double analytic_revival_time(const ModeSet& modeset);

/// Local maxima of the trace with value >= threshold, refined by 3-point
/// parabolic interpolation, sorted by t. The initial sample is never
/// reported (it is the prepared state, not a revival); a trailing sample at
/// the window edge is reported unrefined.
std::vector<RevivalPeak> detect_revivals(std::span<const AutocorrSample> trace,
                                         double threshold = 0.9);

/// Scales each grid to unit peak, then reports max-abs and RMS differences.
/// Requires identical sampling geometry (nz, nt, box length, t_end).
GridComparison compare_grids(const DensityGrid& a, const DensityGrid& b);

}  // namespace qcarpet
