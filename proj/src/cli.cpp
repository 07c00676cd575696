#include "qcarpet/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <optional>

#include "qcarpet/render.hpp"

namespace qcarpet::cli {

namespace {

using nlohmann::json;

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

/// Binds CLI options and JSON config keys to the same variables, so a config
/// file can stand in for any flag while explicit flags win on conflict.
struct OptionBinder {
    CLI::App* app = nullptr;
    std::map<std::string, std::pair<CLI::Option*, std::function<void(const json&)>>> keys;

    template <typename T>
    CLI::Option* bind(const std::string& flag, T& target, const std::string& help) {
        auto* opt = app->add_option(flag, target, help);
        std::string key = flag.substr(flag.find_first_not_of('-'));
        keys[key] = {opt, [&target](const json& v) { target = v.get<T>(); }};
        return opt;
    }

    void apply_config(const std::filesystem::path& path) const {
        std::ifstream in(path);
        if (!in) throw std::invalid_argument("cannot open config file: " + path.string());
        json config;
        try {
            in >> config;
        } catch (const json::parse_error& err) {
            throw std::invalid_argument("config parse error: " + std::string(err.what()));
        }
        if (!config.is_object()) throw std::invalid_argument("config must be a JSON object");
        for (const auto& [key, value] : config.items()) {
            auto it = keys.find(key);
            if (it == keys.end()) throw std::invalid_argument("unknown config key: " + key);
            if (it->second.first->count() > 0) continue;  // flag wins
            it->second.second(value);
        }
    }
};

/// Everything the subcommands need; one instance per invocation.
struct RunConfig {
    std::vector<std::string> models;
    double box_length = 1.0;
    double q = 1.0;
    double q_prime = 1.0;
    double kg_mass_factor = 1.0;
    double t_rev_sch = 0.0;  // 0 -> derived 2L/q
    int m_min = 1;
    int m_max = 40;
    double delta = 1e-2;
    double z0 = 0.5;
    double p0 = 0.0;
    int nz = 512;
    int nt = 512;
    double t_max = 1.0;
    int n0 = 0;  // 0 -> coefficient-weighted default
    int threads = 0;
    double threshold = 0.9;
    double gamma = 0.5;
    std::string colormap = "grayscale";
    std::string out_prefix;
    std::string csv_path, pgm_path, png_path;
    std::string config_path;
    double tol = 1e-9;
    std::vector<std::string> compare_paths;

    PhysicalParams params() const {
        PhysicalParams p = PhysicalParams::natural(box_length, q, q_prime);
        if (t_rev_sch > 0.0) p.t_rev_sch = t_rev_sch;
        if (kg_mass_factor != 1.0) {
            p.kg_rest_energy = kg_mass_factor * (kPi / (2.0 * q_prime * box_length));
        }
        p.validate();
        return p;
    }

    PacketSpec packet() const {
        PacketSpec spec;
        spec.center = z0;
        spec.width = delta;
        spec.momentum = p0;
        spec.m_min = m_min;
        spec.m_max = m_max;
        return spec;
    }

    int resolved_n0(const ModeSet& modeset) const {
        return n0 > 0 ? n0 : modeset.default_central_index();
    }
};

void add_physics_options(OptionBinder& bind, RunConfig& cfg) {
    bind.bind("--L", cfg.box_length, "box length (natural units)");
    bind.bind("--q", cfg.q, "Dirac relativistic parameter");
    bind.bind("--qprime", cfg.q_prime, "Klein-Gordon relativistic parameter");
    bind.bind("--kg-mass-factor", cfg.kg_mass_factor,
              "scale the derived KG rest energy (same-box mass-ratio studies)");
    bind.bind("--trev-sch", cfg.t_rev_sch, "override the quadratic revival time (default 2L/q)");
    bind.bind("--mmin", cfg.m_min, "lowest mode index");
    bind.bind("--mmax", cfg.m_max, "highest mode index");
    bind.bind("--delta", cfg.delta, "Gaussian packet width");
    bind.bind("--z0", cfg.z0, "packet center");
    bind.bind("--p0", cfg.p0, "packet momentum (nonzero switches to quadrature projection)");
    bind.bind("--n0", cfg.n0, "central index for the revival formula (default: weighted mean)");
}

void add_grid_options(OptionBinder& bind, RunConfig& cfg) {
    bind.bind("--nz", cfg.nz, "spatial samples");
    bind.bind("--nt", cfg.nt, "temporal samples");
    bind.bind("--tmax", cfg.t_max, "end time in revival units");
    bind.bind("--threads", cfg.threads, "worker threads (0 = auto); output is thread-invariant");
}

std::filesystem::path pick(const std::string& explicit_path, const std::string& prefix,
                           const char* suffix) {
    return explicit_path.empty() ? std::filesystem::path(prefix + suffix)
                                 : std::filesystem::path(explicit_path);
}

int cmd_carpet(const RunConfig& cfg) {
    if (cfg.models.size() != 1) throw std::invalid_argument("carpet needs exactly one --model");
    const ModelKind model = model_from_string(cfg.models.front());
    const PhysicalParams params = cfg.params();
    const ModeSet modeset = build_modeset(model, cfg.packet(), params);

    const int n0 = cfg.resolved_n0(modeset);
    const double trev = analytic_revival_time(model, params, n0);
    DensityGrid grid = density_grid_over(modeset, cfg.nz, cfg.nt, cfg.t_max * trev, cfg.threads);
    grid.spec.t_max = cfg.t_max;

    const std::string prefix = cfg.out_prefix.empty() ? "carpet" : cfg.out_prefix;
    const auto csv = pick(cfg.csv_path, prefix, ".csv");
    const auto pgm = pick(cfg.pgm_path, prefix, ".pgm");
    const auto png = pick(cfg.png_path, prefix, ".png");
    write_csv(grid, csv);
    write_pgm(grid, pgm, cfg.gamma);
    write_png(grid, ColorMap{colormap_from_string(cfg.colormap), cfg.gamma}, png);

    std::cout << "carpet: model=" << to_string(model) << " modes=[" << cfg.m_min << ","
              << cfg.m_max << "] n0=" << n0 << " trev=" << fmt(trev) << " grid=" << cfg.nz
              << "x" << cfg.nt << " tend=" << fmt(grid.t_end) << "\n"
              << "carpet: peak=" << fmt(grid.peak()) << " norm0=" << fmt(grid.norm0)
              << " max_row_norm_dev=" << fmt(grid.max_row_norm_deviation()) << "\n"
              << "wrote: " << csv.string() << " " << pgm.string() << " " << png.string()
              << std::endl;
    return 0;
}

int cmd_revival(const RunConfig& cfg) {
    if (cfg.models.empty()) throw std::invalid_argument("revival needs at least one --model");
    const PhysicalParams params = cfg.params();
    std::map<std::string, double> revival_times;

    for (const std::string& name : cfg.models) {
        const ModelKind model = model_from_string(name);
        const ModeSet modeset = build_modeset(model, cfg.packet(), params);
        const int n0 = cfg.resolved_n0(modeset);
        const double trev = analytic_revival_time(model, params, n0);
        revival_times[name] = trev;

        std::vector<double> times(static_cast<std::size_t>(cfg.nt));
        for (int i = 0; i < cfg.nt; ++i) {
            times[i] = cfg.t_max * trev * (static_cast<double>(i) / (cfg.nt - 1));
        }

        RevivalReport report;
        report.model = model;
        report.q_value = model == ModelKind::KleinGordon ? params.q_prime : params.q;
        report.central_index = n0;
        report.analytic_t_rev = trev;
        report.threshold = cfg.threshold;
        report.trace = autocorrelation(modeset, times);
        report.peaks = detect_revivals(report.trace, cfg.threshold);

        const std::string prefix = cfg.out_prefix.empty() ? "revival" : cfg.out_prefix;
        const std::filesystem::path out = prefix + "-" + name + ".csv";
        write_csv(report, out);

        std::cout << "revival: model=" << name << " n0=" << n0 << " trev=" << fmt(trev)
                  << " threshold=" << fmt(cfg.threshold) << " peaks=" << report.peaks.size()
                  << " wrote=" << out.string() << "\n";
        for (const auto& peak : report.peaks) {
            std::cout << "peak: t=" << fmt(peak.t) << " t/trev=" << fmt(peak.t / trev)
                      << " A=" << fmt(peak.value) << "\n";
        }
    }

    if (revival_times.count("dirac") && revival_times.count("kg")) {
        std::cout << "trev_ratio: dirac/kg = "
                  << fmt(revival_times.at("dirac") / revival_times.at("kg")) << "\n";
    }
    std::cout.flush();
    return 0;
}

int cmd_limits(const RunConfig& cfg) {
    const PhysicalParams params = cfg.params();
    const PacketSpec packet = cfg.packet();
    const ModeSet dirac = build_dirac_coeffs(packet, params, ModelKind::DiracExact);
    const ModeSet schrod = build_schrodinger_coeffs(packet, params);

    // Both grids cover the same physical window: the quadratic revival period,
    // which is the carpet period the low-q regime converges to.
    const double t_end = cfg.t_max * params.t_rev_sch;
    const DensityGrid grid_dirac = density_grid_over(dirac, cfg.nz, cfg.nt, t_end, cfg.threads);
    const DensityGrid grid_schrod = density_grid_over(schrod, cfg.nz, cfg.nt, t_end, cfg.threads);
    const GridComparison cmp = compare_grids(grid_dirac, grid_schrod);

    const bool pass = cfg.q <= 1e-4 && cmp.max_abs < 1e-3;
    std::cout << "limits: q=" << fmt(cfg.q) << " window=[" << cfg.m_min << "," << cfg.m_max
              << "] grid=" << cfg.nz << "x" << cfg.nt << " max_abs=" << fmt(cmp.max_abs)
              << " rms=" << fmt(cmp.rms) << " verdict=" << (pass ? "PASS" : "FAIL")
              << std::endl;
    return pass ? 0 : 1;
}

int cmd_compare(const RunConfig& cfg) {
    const DensityGrid a = read_grid_csv(cfg.compare_paths.at(0));
    const DensityGrid b = read_grid_csv(cfg.compare_paths.at(1));
    const GridComparison cmp = compare_grids(a, b);
    const bool pass = cmp.max_abs <= cfg.tol;
    std::cout << "compare: max_abs=" << fmt(cmp.max_abs) << " rms=" << fmt(cmp.rms)
              << " tol=" << fmt(cfg.tol) << " verdict=" << (pass ? "PASS" : "FAIL")
              << std::endl;
    return pass ? 0 : 1;
}

}  // namespace

int run(const std::vector<std::string>& args) {
    CLI::App app{"quantum-carpet simulator: eigenmode wave packets in a 1-D box"};
    app.require_subcommand(1);
    RunConfig cfg;

    auto* carpet = app.add_subcommand("carpet", "render a space-time density carpet");
    auto* revival = app.add_subcommand("revival", "autocorrelation trace and revival peaks");
    auto* limits = app.add_subcommand("limits", "compare the exact Dirac carpet to the quadratic one");
    auto* compare = app.add_subcommand("compare", "diff two grid CSV files");

    OptionBinder bind_carpet{carpet, {}}, bind_revival{revival, {}}, bind_limits{limits, {}},
        bind_compare{compare, {}};

    for (auto* bind : {&bind_carpet, &bind_revival}) {
        auto* opt = bind->app->add_option(
            "--model", cfg.models, "model: schrodinger | dirac | dirac-slight | dirac-nonrel | kg");
        bind->keys["model"] = {opt, [&cfg](const json& v) {
            if (v.is_string()) cfg.models = {v.get<std::string>()};
            else cfg.models = v.get<std::vector<std::string>>();
        }};
        add_physics_options(*bind, cfg);
    }
    add_physics_options(bind_limits, cfg);

    add_grid_options(bind_carpet, cfg);
    add_grid_options(bind_limits, cfg);
    bind_revival.bind("--nt", cfg.nt, "trace samples");
    bind_revival.bind("--tmax", cfg.t_max, "trace end time in revival units");
    bind_revival.bind("--threshold", cfg.threshold, "peak detection threshold");
    cfg.nt = 2001;  // denser default for traces; carpet/limits set their own below

    bind_carpet.bind("--out", cfg.out_prefix, "output path prefix");
    bind_carpet.bind("--csv", cfg.csv_path, "explicit CSV path");
    bind_carpet.bind("--pgm", cfg.pgm_path, "explicit PGM path");
    bind_carpet.bind("--png", cfg.png_path, "explicit PNG path");
    bind_carpet.bind("--colormap", cfg.colormap, "grayscale | viridis");
    bind_carpet.bind("--gamma", cfg.gamma, "brightness compression exponent");
    bind_revival.bind("--out", cfg.out_prefix, "output path prefix");

    compare->add_option("files", cfg.compare_paths, "two grid CSV files")->expected(2);
    bind_compare.bind("--tol", cfg.tol, "max-abs tolerance on unit-peak grids");

    for (auto* sub : {carpet, revival, limits, compare}) {
        sub->add_option("--config", cfg.config_path,
                        "JSON config with the same field names; flags win on conflict");
    }

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
        if (carpet->parsed() && !carpet->count("--nt")) cfg.nt = 512;
        if (limits->parsed() && !limits->count("--nt")) cfg.nt = 512;

        OptionBinder* active = carpet->parsed()    ? &bind_carpet
                               : revival->parsed() ? &bind_revival
                               : limits->parsed()  ? &bind_limits
                                                   : &bind_compare;
        if (!cfg.config_path.empty()) active->apply_config(cfg.config_path);

        if (carpet->parsed()) return cmd_carpet(cfg);
        if (revival->parsed()) return cmd_revival(cfg);
        if (limits->parsed()) return cmd_limits(cfg);
        return cmd_compare(cfg);
    } catch (const CLI::ParseError& err) {
        if (err.get_exit_code() == 0) return app.exit(err);  // --help
        app.exit(err);
        return 2;
    } catch (const std::exception& err) {
        std::cerr << "error: " << err.what() << std::endl;
        return 2;
    }
}

int run(int argc, const char* const* argv) {
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
    return run(args);
}

}  // namespace qcarpet::cli
