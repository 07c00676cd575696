#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <vector>

#include "qcarpet/evolution.hpp"

namespace qcarpet {

struct RenderError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct CsvParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class ColorMapName { Grayscale, Viridis };

ColorMapName colormap_from_string(std::string_view name);

/// Maps a unit density value through gamma compression to RGB. gamma < 1
/// lifts the faint canal/ridge structure, which spans orders of magnitude.
struct ColorMap {
    ColorMapName name = ColorMapName::Grayscale;
    double gamma = 0.5;

    std::array<std::uint8_t, 3> lookup(double unit_value) const;
};

/// 16-bit binary PGM (P5, big-endian samples), one image row per time sample
/// with t increasing downward, z left to right. pixel = round(65535 *
/// (rho/rho_peak)^gamma). Byte-identical output for identical inputs.
/// Rejects an all-zero grid.
void write_pgm(const DensityGrid& grid, const std::filesystem::path& path,
               double gamma = 0.5);

/// 8-bit RGB PNG through the colormap; same orientation and determinism
/// guarantees as write_pgm.
void write_png(const DensityGrid& grid, const ColorMap& map,
               const std::filesystem::path& path);

/// Grid CSV: '#'-prefixed metadata header (nz, nt, tmax, tend, L, model, q),
/// then nt comma-separated rows with 17 significant digits per value.
/// read_grid_csv(write_csv(grid)) reproduces the values bit-exactly.
void write_csv(const DensityGrid& grid, const std::filesystem::path& path);

/// Revival-report CSV: metadata header, the (t, A) trace block, then one
/// line per detected peak.
void write_csv(const RevivalReport& report, const std::filesystem::path& path);

DensityGrid read_grid_csv(const std::filesystem::path& path);

/// Decoded 16-bit PGM, for tests and tooling.
struct PgmImage {
    int width = 0;
    int height = 0;
    std::vector<std::uint16_t> pixels;
};

PgmImage read_pgm(const std::filesystem::path& path);

}  // namespace qcarpet
