#include "qcarpet/render.hpp"

#include <zlib.h>

#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>
#include <string>

namespace qcarpet {

namespace {

std::string fmt(double value) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.16e", value);
    return buf;
}

void write_file(const std::filesystem::path& path, const std::string& bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw RenderError("cannot open for writing: " + path.string());
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw RenderError("write failed: " + path.string());
}

double positive_peak_or_throw(const DensityGrid& grid) {
    const double peak = grid.peak();
    if (!(peak > 0.0)) throw RenderError("all-zero density grid cannot be rendered");
    return peak;
}

void append_be32(std::string& s, std::uint32_t v) {
    s.push_back(static_cast<char>((v >> 24) & 0xff));
    s.push_back(static_cast<char>((v >> 16) & 0xff));
    s.push_back(static_cast<char>((v >> 8) & 0xff));
    s.push_back(static_cast<char>(v & 0xff));
}

void append_png_chunk(std::string& out, const char type[4], const std::string& data) {
    append_be32(out, static_cast<std::uint32_t>(data.size()));
    const std::size_t crc_begin = out.size();
    out.append(type, 4);
    out.append(data);
    const auto* p = reinterpret_cast<const Bytef*>(out.data() + crc_begin);
    const auto crc = crc32(0L, p, static_cast<uInt>(out.size() - crc_begin));
    append_be32(out, static_cast<std::uint32_t>(crc));
}

std::string zlib_deflate(const std::string& raw) {
    uLongf bound = compressBound(static_cast<uLong>(raw.size()));
    std::string out(bound, '\0');
    const int rc = compress2(reinterpret_cast<Bytef*>(out.data()), &bound,
                             reinterpret_cast<const Bytef*>(raw.data()),
                             static_cast<uLong>(raw.size()), 6);
    if (rc != Z_OK) throw RenderError("zlib compression failed");
    out.resize(bound);
    return out;
}

// Viridis anchor colors at 9 equidistant stops, linearly interpolated.
constexpr std::uint8_t kViridis[9][3] = {
    {68, 1, 84},    {71, 44, 122},  {59, 81, 139},   {44, 113, 142}, {33, 144, 141},
    {39, 173, 129}, {92, 200, 99},  {170, 220, 50},  {253, 231, 37},
};

}  // namespace

ColorMapName colormap_from_string(std::string_view name) {
    if (name == "grayscale" || name == "gray") return ColorMapName::Grayscale;
    if (name == "viridis") return ColorMapName::Viridis;
    throw std::invalid_argument("unknown colormap: " + std::string(name));
}

std::array<std::uint8_t, 3> ColorMap::lookup(double unit_value) const {
    if (!(gamma > 0.0)) throw std::invalid_argument("colormap gamma must be positive");
    const double clamped = std::min(1.0, std::max(0.0, unit_value));
    const double u = std::pow(clamped, gamma);
    if (name == ColorMapName::Grayscale) {
        const auto g = static_cast<std::uint8_t>(std::lround(255.0 * u));
        return {g, g, g};
    }
    const double pos = u * 8.0;
    const int lo = std::min(7, static_cast<int>(pos));
    const double frac = pos - lo;
    std::array<std::uint8_t, 3> rgb{};
    for (int c = 0; c < 3; ++c) {
        const double v = kViridis[lo][c] + frac * (kViridis[lo + 1][c] - kViridis[lo][c]);
        rgb[c] = static_cast<std::uint8_t>(std::lround(v));
    }
    return rgb;
}

void write_pgm(const DensityGrid& grid, const std::filesystem::path& path, double gamma) {
    if (!(gamma > 0.0)) throw std::invalid_argument("gamma must be positive");
    const double peak = positive_peak_or_throw(grid);

    std::string out;
    out.reserve(grid.values.size() * 2 + 128);
    out += "P5\n";
    char comment[96];
    std::snprintf(comment, sizeof(comment),
                  "# quantum carpet: t increases downward, z rightward; gamma=%.17g\n", gamma);
    out += comment;
    out += std::to_string(grid.spec.nz) + " " + std::to_string(grid.spec.nt) + "\n65535\n";
    for (double v : grid.values) {
        const double unit = std::max(v, 0.0) / peak;
        const auto pixel = static_cast<std::uint32_t>(std::lround(65535.0 * std::pow(unit, gamma)));
        out.push_back(static_cast<char>((pixel >> 8) & 0xff));
        out.push_back(static_cast<char>(pixel & 0xff));
    }
    write_file(path, out);
}

void write_png(const DensityGrid& grid, const ColorMap& map, const std::filesystem::path& path) {
    const double peak = positive_peak_or_throw(grid);

    std::string raw;
    raw.reserve(static_cast<std::size_t>(grid.spec.nt) * (grid.spec.nz * 3 + 1));
    for (int it = 0; it < grid.spec.nt; ++it) {
        raw.push_back('\0');  // filter type: none
        for (int iz = 0; iz < grid.spec.nz; ++iz) {
            const auto rgb = map.lookup(std::max(grid.value(it, iz), 0.0) / peak);
            raw.push_back(static_cast<char>(rgb[0]));
            raw.push_back(static_cast<char>(rgb[1]));
            raw.push_back(static_cast<char>(rgb[2]));
        }
    }

    std::string out("\x89PNG\r\n\x1a\n", 8);
    std::string ihdr;
    append_be32(ihdr, static_cast<std::uint32_t>(grid.spec.nz));
    append_be32(ihdr, static_cast<std::uint32_t>(grid.spec.nt));
    ihdr.push_back(8);   // bit depth
    ihdr.push_back(2);   // truecolor
    ihdr.push_back(0);   // compression
    ihdr.push_back(0);   // filter
    ihdr.push_back(0);   // no interlace
    append_png_chunk(out, "IHDR", ihdr);
    append_png_chunk(out, "IDAT", zlib_deflate(raw));
    append_png_chunk(out, "IEND", "");
    write_file(path, out);
}

void write_csv(const DensityGrid& grid, const std::filesystem::path& path) {
    std::string out;
    out.reserve(grid.values.size() * 24 + 256);
    out += "# qcarpet grid v1\n";
    out += "# nz=" + std::to_string(grid.spec.nz) + " nt=" + std::to_string(grid.spec.nt) +
           " tmax=" + fmt(grid.spec.t_max) + " tend=" + fmt(grid.t_end) +
           " L=" + fmt(grid.box_length) + " model=" + std::string(to_string(grid.model)) +
           " q=" + fmt(grid.q_value) + "\n";
    out += "# rows: t in [0, tend] downward; cols: z in [0, L]\n";
    for (int it = 0; it < grid.spec.nt; ++it) {
        for (int iz = 0; iz < grid.spec.nz; ++iz) {
            if (iz) out += ',';
            out += fmt(grid.value(it, iz));
        }
        out += '\n';
    }
    write_file(path, out);
}

void write_csv(const RevivalReport& report, const std::filesystem::path& path) {
    std::string out;
    out += "# qcarpet revival report v1\n";
    out += "# model=" + std::string(to_string(report.model)) + " q=" + fmt(report.q_value) +
           " n0=" + std::to_string(report.central_index) +
           " trev=" + fmt(report.analytic_t_rev) +
           " threshold=" + fmt(report.threshold) + "\n";
    out += "# trace: t,A\n";
    for (const auto& s : report.trace) out += fmt(s.t) + "," + fmt(s.value) + "\n";
    out += "# peaks: t,A\n";
    for (const auto& p : report.peaks) out += fmt(p.t) + "," + fmt(p.value) + "\n";
    write_file(path, out);
}

DensityGrid read_grid_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw CsvParseError("cannot open: " + path.string());

    std::string line;
    if (!std::getline(in, line) || line.rfind("# qcarpet grid", 0) != 0) {
        throw CsvParseError("missing grid header: " + path.string());
    }
    if (!std::getline(in, line) || line.rfind("# ", 0) != 0) {
        throw CsvParseError("missing metadata line: " + path.string());
    }

    DensityGrid grid;
    bool have_nz = false, have_nt = false, have_tend = false, have_length = false;
    std::istringstream meta(line.substr(2));
    std::string token;
    while (meta >> token) {
        const auto eq = token.find('=');
        if (eq == std::string::npos) throw CsvParseError("bad metadata token: " + token);
        const std::string key = token.substr(0, eq);
        const std::string value = token.substr(eq + 1);
        try {
            if (key == "nz") { grid.spec.nz = std::stoi(value); have_nz = true; }
            else if (key == "nt") { grid.spec.nt = std::stoi(value); have_nt = true; }
            else if (key == "tmax") grid.spec.t_max = std::stod(value);
            else if (key == "tend") { grid.t_end = std::stod(value); have_tend = true; }
            else if (key == "L") { grid.box_length = std::stod(value); have_length = true; }
            else if (key == "model") grid.model = model_from_string(value);
            else if (key == "q") grid.q_value = std::stod(value);
            else throw CsvParseError("unknown metadata key: " + key);
        } catch (const CsvParseError&) {
            throw;
        } catch (const std::exception&) {
            throw CsvParseError("unparsable metadata value: " + token);
        }
    }
    if (!have_nz || !have_nt || !have_tend || !have_length) {
        throw CsvParseError("incomplete metadata header: " + path.string());
    }
    if (grid.spec.nz < 2 || grid.spec.nt < 2) throw CsvParseError("bad grid dimensions");

    grid.values.reserve(static_cast<std::size_t>(grid.spec.nz) * grid.spec.nt);
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::size_t pos = 0;
        while (pos < line.size()) {
            const char* begin = line.c_str() + pos;
            char* end = nullptr;
            const double v = std::strtod(begin, &end);
            if (end == begin) throw CsvParseError("unparsable density value");
            grid.values.push_back(v);
            pos = static_cast<std::size_t>(end - line.c_str());
            if (pos < line.size() && line[pos] == ',') ++pos;
        }
    }
    const auto expected = static_cast<std::size_t>(grid.spec.nz) * grid.spec.nt;
    if (grid.values.size() != expected) {
        throw CsvParseError("value count mismatch: got " + std::to_string(grid.values.size()) +
                            ", expected " + std::to_string(expected));
    }
    grid.norm0 = grid.row_integral(0);
    return grid;
}

PgmImage read_pgm(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw RenderError("cannot open: " + path.string());

    auto next_token = [&in]() {
        std::string token;
        while (in >> token) {
            if (token[0] == '#') {
                std::string rest;
                std::getline(in, rest);
                continue;
            }
            return token;
        }
        throw RenderError("truncated PGM header");
    };

    if (next_token() != "P5") throw RenderError("not a binary PGM file");
    PgmImage image;
    image.width = std::stoi(next_token());
    image.height = std::stoi(next_token());
    if (std::stoi(next_token()) != 65535) throw RenderError("expected 16-bit PGM");
    in.get();  // the single whitespace byte after maxval

    const std::size_t count = static_cast<std::size_t>(image.width) * image.height;
    std::vector<unsigned char> bytes(count * 2);
    in.read(reinterpret_cast<char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (static_cast<std::size_t>(in.gcount()) != bytes.size()) {
        throw RenderError("truncated PGM payload");
    }
    image.pixels.resize(count);
    for (std::size_t i = 0; i < count; ++i) {
        image.pixels[i] = static_cast<std::uint16_t>((bytes[2 * i] << 8) | bytes[2 * i + 1]);
    }
    return image;
}

}  // namespace qcarpet
