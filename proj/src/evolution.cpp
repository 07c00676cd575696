#include "qcarpet/evolution.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

namespace qcarpet {

namespace {

using complexd = std::complex<double>;

constexpr std::size_t kMaxGridCells = 1u << 26;  // 64M cells ~ 512 MB
constexpr std::size_t kOracleModeGuard = 128;

// Closed-form revival time shared by the Dirac and KG branches so that the
// two evaluations differ only in their (q, rest energy) inputs.
double paper_revival_time(double q_like, double rest_energy, int n0) {
    const double x = 2.0 * n0 * q_like;
    return kPi * std::sqrt(1.0 + x * x) / (2.0 * rest_energy * q_like * q_like * n0);
}

void require_same_geometry(const DensityGrid& a, const DensityGrid& b) {
    if (a.spec.nz != b.spec.nz || a.spec.nt != b.spec.nt ||
        a.box_length != b.box_length || a.t_end != b.t_end) {
        throw std::invalid_argument("grid sampling geometry mismatch");
    }
}

// c_m * phi_m(z_j) for every mode and grid column, the shared precomputation
// of the fast path and the oracle.
std::vector<complexd> coefficient_profile_table(const ModeSet& modeset, int nz) {
    const double L = modeset.params.box_length;
    std::vector<complexd> table(modeset.size() * static_cast<std::size_t>(nz));
    for (std::size_t m = 0; m < modeset.size(); ++m) {
        for (int j = 0; j < nz; ++j) {
            const double z = L * j / (nz - 1);
            table[m * nz + j] = modeset.coeffs[m] * mode_function(modeset, m, z);
        }
    }
    return table;
}

DensityGrid make_grid_shell(const ModeSet& modeset, const GridSpec& spec, double t_end) {
    spec.validate();
    const std::size_t cells =
        static_cast<std::size_t>(spec.nz) * static_cast<std::size_t>(spec.nt);
    if (cells > kMaxGridCells) {
        throw std::length_error("requested density grid exceeds the sizing guard");
    }
    DensityGrid grid;
    grid.spec = spec;
    grid.model = modeset.model;
    grid.q_value = modeset.model == ModelKind::KleinGordon ? modeset.params.q_prime
                                                           : modeset.params.q;
    grid.box_length = modeset.params.box_length;
    grid.t_end = t_end;
    try {
        grid.values.resize(cells);
    } catch (const std::bad_alloc&) {
        throw std::length_error("density grid allocation failed");
    }
    return grid;
}

// One time row of the fast path: accumulate sum_m phase_m * (c_m phi_m(z_j))
// in ascending mode order for every column, then take |.|^2. The accumulation
// order is fixed, so the result does not depend on row scheduling.
void evaluate_row(const ModeSet& modeset, const std::vector<complexd>& table, int nz,
                  double t, double* out, std::vector<complexd>& scratch) {
    scratch.assign(static_cast<std::size_t>(nz), complexd{0.0, 0.0});
    for (std::size_t m = 0; m < modeset.size(); ++m) {
        const double phase = modeset.modes[m].energy * t;
        const complexd rotation{std::cos(phase), -std::sin(phase)};
        const complexd* row = &table[m * nz];
        for (int j = 0; j < nz; ++j) scratch[j] += rotation * row[j];
    }
    for (int j = 0; j < nz; ++j) out[j] = std::norm(scratch[j]);
}

void finalize_norm(DensityGrid& grid) {
    grid.norm0 = grid.row_integral(0);
}

}  // namespace

void GridSpec::validate() const {
    if (nz < 2 || nt < 2) throw std::invalid_argument("grid needs at least 2 samples per axis");
    if (!(t_max > 0.0)) throw std::invalid_argument("t_max must be positive");
}

double DensityGrid::peak() const {
    double best = 0.0;
    for (double v : values) best = std::max(best, v);
    return best;
}

double DensityGrid::row_integral(int it) const {
    const double h = box_length / (spec.nz - 1);
    const double* row = &values[static_cast<std::size_t>(it) * spec.nz];
    double acc = 0.5 * (row[0] + row[spec.nz - 1]);
    for (int j = 1; j + 1 < spec.nz; ++j) acc += row[j];
    return acc * h;
}

double DensityGrid::max_row_norm_deviation() const {
    double worst = 0.0;
    for (int it = 0; it < spec.nt; ++it) {
        worst = std::max(worst, std::abs(row_integral(it) - norm0));
    }
    return worst / norm0;
}

void DensityGrid::validate() const {
    for (double v : values) {
        if (!std::isfinite(v) || v < -1e-12) {
            throw std::logic_error("density grid holds a negative or non-finite value");
        }
    }
}

std::complex<double> mode_function(const ModeSet& modeset, std::size_t index, double z) {
    const ModeDescriptor& mode = modeset.modes[index];
    if (is_dirac(modeset.model)) {
        const double arg = mode.k * z - 0.5 * mode.phase_delta;
        return {std::cos(arg), -mode.momentum_p * std::sin(arg)};
    }
    return std::sqrt(2.0 / modeset.params.box_length) *
           sin_pi(mode.n * z / modeset.params.box_length);
}

std::complex<double> wavefunction_at(const ModeSet& modeset, double z, double t) {
    complexd acc{0.0, 0.0};
    for (std::size_t m = 0; m < modeset.size(); ++m) {
        const double phase = modeset.modes[m].energy * t;
        acc += modeset.coeffs[m] * mode_function(modeset, m, z) *
               complexd{std::cos(phase), -std::sin(phase)};
    }
    return acc;
}

DensityGrid density_grid_over(const ModeSet& modeset, int nz, int nt, double t_end,
                              int threads) {
    GridSpec spec;
    spec.nz = nz;
    spec.nt = nt;
    spec.t_max = 1.0;
    DensityGrid grid = make_grid_shell(modeset, spec, t_end);
    const auto table = coefficient_profile_table(modeset, nz);

    int workers = threads > 0 ? threads : static_cast<int>(std::thread::hardware_concurrency());
    workers = std::clamp(workers, 1, nt);

    auto work = [&](int row_begin, int row_end) {
        std::vector<complexd> scratch;
        for (int i = row_begin; i < row_end; ++i) {
            const double t = t_end * (static_cast<double>(i) / (nt - 1));
            evaluate_row(modeset, table, nz, t, &grid.values[static_cast<std::size_t>(i) * nz],
                         scratch);
        }
    };

    if (workers == 1) {
        work(0, nt);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        const int chunk = (nt + workers - 1) / workers;
        for (int w = 0; w < workers; ++w) {
            const int begin = w * chunk;
            const int end = std::min(nt, begin + chunk);
            if (begin >= end) break;
            pool.emplace_back(work, begin, end);
        }
        for (auto& th : pool) th.join();
    }

    finalize_norm(grid);
    return grid;
}

DensityGrid density_grid(const ModeSet& modeset, const GridSpec& spec, int threads) {
    spec.validate();
    const double t_end = spec.t_max * analytic_revival_time(modeset);
    DensityGrid grid = density_grid_over(modeset, spec.nz, spec.nt, t_end, threads);
    grid.spec.t_max = spec.t_max;
    return grid;
}

DensityGrid double_sum_oracle_over(const ModeSet& modeset, int nz, int nt, double t_end) {
    if (modeset.size() > kOracleModeGuard) {
        throw std::invalid_argument("double_sum_oracle mode-count guard exceeded");
    }
    GridSpec spec;
    spec.nz = nz;
    spec.nt = nt;
    DensityGrid grid = make_grid_shell(modeset, spec, t_end);
    const auto table = coefficient_profile_table(modeset, nz);
    const std::size_t count = modeset.size();

    double max_imag = 0.0;
    for (int i = 0; i < nt; ++i) {
        const double t = t_end * (static_cast<double>(i) / (nt - 1));
        std::vector<complexd> rotation(count);
        for (std::size_t m = 0; m < count; ++m) {
            const double phase = modeset.modes[m].energy * t;
            rotation[m] = complexd{std::cos(phase), -std::sin(phase)};
        }
        for (int j = 0; j < nz; ++j) {
            complexd acc{0.0, 0.0};
            for (std::size_t m = 0; m < count; ++m) {
                const complexd am = table[m * nz + j] * rotation[m];
                for (std::size_t n = 0; n < count; ++n) {
                    acc += am * std::conj(table[n * nz + j] * rotation[n]);
                }
            }
            grid.values[static_cast<std::size_t>(i) * nz + j] = acc.real();
            max_imag = std::max(max_imag, std::abs(acc.imag()));
        }
    }
    finalize_norm(grid);
    if (max_imag > 1e-10 * grid.peak()) {
        throw std::logic_error("double-sum imaginary residual exceeds 1e-10 of peak");
    }
    return grid;
}

DensityGrid double_sum_oracle(const ModeSet& modeset, const GridSpec& spec) {
    spec.validate();
    const double t_end = spec.t_max * analytic_revival_time(modeset);
    DensityGrid grid = double_sum_oracle_over(modeset, spec.nz, spec.nt, t_end);
    grid.spec.t_max = spec.t_max;
    return grid;
}

std::vector<AutocorrSample> autocorrelation(const ModeSet& modeset,
                                            std::span<const double> times) {
    if (times.empty()) throw std::invalid_argument("autocorrelation needs at least one time");
    std::vector<double> weights(modeset.size());
    for (std::size_t m = 0; m < modeset.size(); ++m) weights[m] = std::norm(modeset.coeffs[m]);

    std::vector<AutocorrSample> trace;
    trace.reserve(times.size());
    for (double t : times) {
        complexd acc{0.0, 0.0};
        for (std::size_t m = 0; m < modeset.size(); ++m) {
            const double phase = modeset.modes[m].energy * t;
            acc += weights[m] * complexd{std::cos(phase), -std::sin(phase)};
        }
        trace.push_back({t, std::norm(acc)});
    }
    return trace;
}

double analytic_revival_time(ModelKind model, const PhysicalParams& params, int n0) {
    if (n0 < 1) throw std::invalid_argument("central index n0 must be >= 1");
    switch (model) {
        case ModelKind::Schrodinger:
        case ModelKind::DiracSlightRel:
        case ModelKind::DiracNonRelLimit:
            // The limit kinds evolve on the quadratic clock; their figures are
            // drawn against t / t_rev_sch.
            return params.t_rev_sch;
        case ModelKind::DiracExact:
            return paper_revival_time(params.q, params.rest_energy_dirac(), n0);
        case ModelKind::KleinGordon:
            return paper_revival_time(params.q_prime, params.rest_energy_kg(), n0);
    }
    throw std::invalid_argument("unknown model kind");
}

double analytic_revival_time(const ModeSet& modeset) {
    return analytic_revival_time(modeset.model, modeset.params,
                                 modeset.default_central_index());
}

std::vector<RevivalPeak> detect_revivals(std::span<const AutocorrSample> trace,
                                         double threshold) {
    if (trace.empty()) throw std::invalid_argument("empty autocorrelation trace");
    for (std::size_t i = 1; i < trace.size(); ++i) {
        if (!(trace[i].t > trace[i - 1].t)) {
            throw std::invalid_argument("trace times must be strictly increasing");
        }
    }

    std::vector<RevivalPeak> peaks;
    for (std::size_t i = 1; i + 1 < trace.size(); ++i) {
        const double left = trace[i - 1].value;
        const double mid = trace[i].value;
        const double right = trace[i + 1].value;
        if (mid < threshold || mid < left || mid < right) continue;

        // Parabolic refinement through the three bracketing samples.
        RevivalPeak peak{trace[i].t, mid};
        const double curvature = left - 2.0 * mid + right;
        if (curvature < 0.0) {
            const double shift = 0.5 * (left - right) / curvature;
            const double dt = 0.5 * (trace[i + 1].t - trace[i - 1].t);
            peak.t = trace[i].t + std::clamp(shift, -1.0, 1.0) * dt;
            peak.value = mid - 0.25 * (left - right) * std::clamp(shift, -1.0, 1.0);
        }
        peaks.push_back(peak);
    }

    // A revival sitting on the window edge is still a revival; report the raw
    // sample. The leading sample is the prepared state and is skipped.
    const std::size_t last = trace.size() - 1;
    if (last >= 1 && trace[last].value >= threshold &&
        trace[last].value >= trace[last - 1].value) {
        peaks.push_back({trace[last].t, trace[last].value});
    }
    return peaks;
}

GridComparison compare_grids(const DensityGrid& a, const DensityGrid& b) {
    require_same_geometry(a, b);
    const double peak_a = a.peak();
    const double peak_b = b.peak();
    if (!(peak_a > 0.0) || !(peak_b > 0.0)) {
        throw std::invalid_argument("cannot unit-peak scale an all-zero grid");
    }
    double max_abs = 0.0;
    double sum_sq = 0.0;
    for (std::size_t i = 0; i < a.values.size(); ++i) {
        const double diff = a.values[i] / peak_a - b.values[i] / peak_b;
        max_abs = std::max(max_abs, std::abs(diff));
        sum_sq += diff * diff;
    }
    return {max_abs, std::sqrt(sum_sq / static_cast<double>(a.values.size()))};
}

}  // namespace qcarpet
