// Render-path tests: PGM/PNG emission, CSV round trips, colormaps.

#include <doctest.h>

#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>

#include "qcarpet/render.hpp"

using namespace qcarpet;
namespace fs = std::filesystem;

namespace {

fs::path temp_file(const std::string& name) {
    return fs::temp_directory_path() / ("qcarpet_test_" + name);
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

// Minimal hand-built grid; values row-major with nt rows.
DensityGrid manual_grid(int nz, int nt, std::vector<double> values) {
    DensityGrid grid;
    grid.spec.nz = nz;
    grid.spec.nt = nt;
    grid.spec.t_max = 1.0;
    grid.box_length = 1.0;
    grid.t_end = 1.0;
    grid.values = std::move(values);
    grid.norm0 = grid.row_integral(0);
    return grid;
}

ModeSet centered_packet(int m_min, int m_max, double q) {
    PacketSpec spec;
    spec.m_min = m_min;
    spec.m_max = m_max;
    return build_schrodinger_coeffs(spec, PhysicalParams::natural(1.0, q));
}

}  // namespace

TEST_CASE("PGM pixel values follow round(65535 (rho/peak)^gamma)") {
    // [[0, peak], [peak/4, 0]] at gamma = 1/2 -> [0, 65535, 32768, 0]
    const auto grid = manual_grid(2, 2, {0.0, 1.0, 0.25, 0.0});
    const auto path = temp_file("pixels.pgm");
    write_pgm(grid, path, 0.5);

    const auto image = read_pgm(path);
    REQUIRE(image.width == 2);
    REQUIRE(image.height == 2);
    CHECK(image.pixels[0] == 0);
    CHECK(image.pixels[1] == 65535);
    CHECK(image.pixels[2] == 32768);  // round(65535 * sqrt(1/4))
    CHECK(image.pixels[3] == 0);
}

TEST_CASE("image emission is byte-deterministic") {
    GridSpec spec;
    spec.nz = 48;
    spec.nt = 32;
    const auto grid = density_grid(centered_packet(1, 20, 1e-2), spec);

    const auto pgm_a = temp_file("det_a.pgm"), pgm_b = temp_file("det_b.pgm");
    write_pgm(grid, pgm_a);
    write_pgm(grid, pgm_b);
    CHECK(slurp(pgm_a) == slurp(pgm_b));

    const ColorMap map{ColorMapName::Viridis, 0.5};
    const auto png_a = temp_file("det_a.png"), png_b = temp_file("det_b.png");
    write_png(grid, map, png_a);
    write_png(grid, map, png_b);
    CHECK(slurp(png_a) == slurp(png_b));
}

TEST_CASE("PNG container is well-formed") {
    const auto grid = manual_grid(3, 2, {0.0, 0.5, 1.0, 1.0, 0.5, 0.0});
    const auto path = temp_file("container.png");
    write_png(grid, ColorMap{}, path);
    const std::string bytes = slurp(path);

    REQUIRE(bytes.size() > 45);
    CHECK(bytes.compare(0, 8, "\x89PNG\r\n\x1a\n", 8) == 0);
    // IHDR width/height, big-endian at offsets 16 and 20
    auto be32 = [&](std::size_t at) {
        return (static_cast<std::uint32_t>(static_cast<unsigned char>(bytes[at])) << 24) |
               (static_cast<std::uint32_t>(static_cast<unsigned char>(bytes[at + 1])) << 16) |
               (static_cast<std::uint32_t>(static_cast<unsigned char>(bytes[at + 2])) << 8) |
               static_cast<std::uint32_t>(static_cast<unsigned char>(bytes[at + 3]));
    };
    CHECK(be32(16) == 3);
    CHECK(be32(20) == 2);
    CHECK(bytes.compare(bytes.size() - 8, 4, "IEND", 4) == 0);
}

TEST_CASE("carpet image carries the bright central ridge of the initial packet") {
    // Centered packet: the t = 0 image row must peak at the middle column.
    GridSpec spec;
    spec.nz = 65;
    spec.nt = 5;
    const auto grid = density_grid(centered_packet(1, 20, 1e-6), spec);
    const auto path = temp_file("ridge.pgm");
    write_pgm(grid, path);
    const auto image = read_pgm(path);

    int argmax = 0;
    for (int j = 0; j < image.width; ++j) {
        if (image.pixels[j] > image.pixels[argmax]) argmax = j;
    }
    CHECK(argmax == 32);
    CHECK(image.pixels[32] == 65535);
}

TEST_CASE("grid CSV round-trips bit-exactly") {
    GridSpec spec;
    spec.nz = 23;
    spec.nt = 11;
    spec.t_max = 0.75;
    auto grid = density_grid(centered_packet(1, 16, 1e-2), spec);
    grid.model = ModelKind::DiracSlightRel;
    grid.q_value = 1e-2;

    const auto path = temp_file("roundtrip.csv");
    write_csv(grid, path);
    const auto loaded = read_grid_csv(path);

    CHECK(loaded.spec.nz == grid.spec.nz);
    CHECK(loaded.spec.nt == grid.spec.nt);
    CHECK(loaded.spec.t_max == grid.spec.t_max);
    CHECK(loaded.t_end == grid.t_end);
    CHECK(loaded.box_length == grid.box_length);
    CHECK(loaded.model == ModelKind::DiracSlightRel);
    CHECK(loaded.q_value == grid.q_value);
    REQUIRE(loaded.values.size() == grid.values.size());
    CHECK(std::memcmp(loaded.values.data(), grid.values.data(),
                      grid.values.size() * sizeof(double)) == 0);
}

TEST_CASE("CSV numeric formatting contract") {
    const auto grid = manual_grid(2, 2, {0.5, 0.25, 0.125, 1.0});
    const auto path = temp_file("format.csv");
    write_csv(grid, path);
    const std::string text = slurp(path);
    CHECK(text.find("5.0000000000000000e-01") != std::string::npos);
    CHECK(text.find("2.5000000000000000e-01") != std::string::npos);
    CHECK(text.find("# qcarpet grid v1\n") == 0);
}

TEST_CASE("revival report CSV structure") {
    RevivalReport report;
    report.model = ModelKind::Schrodinger;
    report.q_value = 1.0;
    report.central_index = 15;
    report.analytic_t_rev = 2.0;
    report.trace = {{0.0, 1.0}, {1.0, 0.25}, {2.0, 1.0}};
    report.peaks = {{0.5, 0.95}, {1.0, 0.99}, {2.0, 1.0}};

    const auto path = temp_file("report.csv");
    write_csv(report, path);
    const std::string text = slurp(path);

    const std::string marker = "# peaks: t,A\n";
    const auto peaks_at = text.find(marker);
    REQUIRE(peaks_at != std::string::npos);
    int peak_lines = 0;
    for (char c : text.substr(peaks_at + marker.size())) {
        if (c == '\n') ++peak_lines;
    }
    CHECK(peak_lines == 3);
    CHECK(text.find("# trace: t,A\n") != std::string::npos);
    CHECK(text.find("n0=15") != std::string::npos);
}

TEST_CASE("render error paths") {
    const auto zero = manual_grid(2, 2, {0.0, 0.0, 0.0, 0.0});
    CHECK_THROWS_AS(write_pgm(zero, temp_file("zero.pgm")), RenderError);
    CHECK_THROWS_AS(write_png(zero, ColorMap{}, temp_file("zero.png")), RenderError);

    const auto grid = manual_grid(2, 2, {0.0, 1.0, 0.5, 0.0});
    CHECK_THROWS_AS(write_pgm(grid, temp_file("bad.pgm"), 0.0), std::invalid_argument);
    CHECK_THROWS_AS(write_pgm(grid, fs::path("/nonexistent-dir/x.pgm")), RenderError);

    ColorMap bad_gamma{ColorMapName::Grayscale, -1.0};
    CHECK_THROWS_AS(bad_gamma.lookup(0.5), std::invalid_argument);
}

TEST_CASE("CSV parse errors") {
    const auto path = temp_file("corrupt.csv");
    {
        std::ofstream out(path);
        out << "# not a grid header\n1,2\n";
    }
    CHECK_THROWS_AS(read_grid_csv(path), CsvParseError);

    {
        std::ofstream out(path);
        out << "# qcarpet grid v1\n# nz=4 nt=2 tmax=1 tend=1 L=1 model=schrodinger q=1\n"
            << "# rows\n0,0,0,0\n0,0\n";  // short row
    }
    CHECK_THROWS_AS(read_grid_csv(path), CsvParseError);

    {
        std::ofstream out(path);
        out << "# qcarpet grid v1\n# nz=4 bogus=2\n";
    }
    CHECK_THROWS_AS(read_grid_csv(path), CsvParseError);

    CHECK_THROWS_AS(read_grid_csv(temp_file("missing_file.csv")), CsvParseError);
}

TEST_CASE("colormaps") {
    SUBCASE("grayscale is monotone in luminance") {
        const ColorMap map{ColorMapName::Grayscale, 0.5};
        int previous = -1;
        for (int i = 0; i <= 32; ++i) {
            const auto rgb = map.lookup(i / 32.0);
            CHECK(rgb[0] == rgb[1]);
            CHECK(rgb[1] == rgb[2]);
            CHECK(rgb[0] >= previous);
            previous = rgb[0];
        }
        CHECK(previous == 255);
    }

    SUBCASE("viridis endpoints") {
        const ColorMap map{ColorMapName::Viridis, 1.0};
        const auto lo = map.lookup(0.0);
        const auto hi = map.lookup(1.0);
        CHECK(lo == std::array<std::uint8_t, 3>{68, 1, 84});
        CHECK(hi == std::array<std::uint8_t, 3>{253, 231, 37});
    }

    SUBCASE("names") {
        CHECK(colormap_from_string("grayscale") == ColorMapName::Grayscale);
        CHECK(colormap_from_string("viridis") == ColorMapName::Viridis);
        CHECK_THROWS_AS(colormap_from_string("jet"), std::invalid_argument);
    }
}
