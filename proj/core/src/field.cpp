#include "sdfshadow/field.hpp"

#include <fstream>

#include "sdfshadow/error.hpp"
#include "sdfshadow/io_util.hpp"
#include "sdfshadow/parallel.hpp"

namespace sdfshadow {

DistanceField apply_bias(DistanceField field, double bias) {
    if (!(bias >= 0.0)) throw ConfigError("bias must be non-negative");
    const auto b = static_cast<float>(bias);
    if (b == 0.0f) return field;
    for (auto& v : field.values) v -= b;
    field.bias += b;
    return field;
}

namespace {

struct AxisTaps {
    std::vector<int> base;
    std::vector<double> frac;
    std::size_t step = 0;  // 1 when the axis has a second tap
};

// Same lattice arithmetic as sample_trilinear, tabulated per target index.
AxisTaps axis_taps(const GridSpec& source, const GridSpec& target, int a) {
    AxisTaps taps;
    const int n = source.dims[a];
    const double h = source.cell_size()[a];
    const double th = target.cell_size()[a];
    taps.step = n > 1 ? 1 : 0;
    for (int t = 0; t < target.dims[a]; ++t) {
        const double p = target.bounds.lo[a] + (t + 0.5) * th;
        double u = (p - source.bounds.lo[a]) / h - 0.5;
        u = std::clamp(u, 0.0, static_cast<double>(n - 1));
        int i0 = static_cast<int>(u);
        if (i0 > n - 2) i0 = std::max(0, n - 2);
        taps.base.push_back(i0);
        taps.frac.push_back(n > 1 ? u - i0 : 0.0);
    }
    return taps;
}

}  // namespace

DistanceField resample(const DistanceField& source, const GridSpec& target) {
    DistanceField out(target, 0.0f);
    out.beta = source.beta;
    out.bias = source.bias;
    out.frame = source.frame;
    const AxisTaps tx = axis_taps(source.grid, target, 0);
    const AxisTaps ty = axis_taps(source.grid, target, 1);
    const AxisTaps tz = axis_taps(source.grid, target, 2);
    const auto snx = static_cast<std::size_t>(source.grid.dims[0]);
    const auto sny = static_cast<std::size_t>(source.grid.dims[1]);
    const auto fnx = static_cast<std::size_t>(target.dims[0]);
    const auto fny = static_cast<std::size_t>(target.dims[1]);
    const float* v = source.values.data();
    parallel_for(0, static_cast<std::size_t>(target.dims[2]), 1, [&](std::size_t k_lo, std::size_t k_hi) {
        std::vector<double> rows(sny * fnx), layer[2];
        layer[0].resize(fny * fnx);
        layer[1].resize(fny * fnx);
        for (std::size_t k = k_lo; k < k_hi; ++k) {
            const std::size_t z0 = static_cast<std::size_t>(tz.base[k]);
            for (int l = 0; l < 2; ++l) {
                const float* plane = v + (z0 + l * tz.step) * snx * sny;
                for (std::size_t y = 0; y < sny; ++y) {
                    const float* row = plane + y * snx;
                    for (std::size_t x = 0; x < fnx; ++x) {
                        const double a = row[tx.base[x]];
                        const double b = row[tx.base[x] + tx.step];
                        rows[y * fnx + x] = a + tx.frac[x] * (b - a);
                    }
                }
                for (std::size_t y = 0; y < fny; ++y) {
                    const double fy = ty.frac[y];
                    const double* r0 = &rows[static_cast<std::size_t>(ty.base[y]) * fnx];
                    const double* r1 = r0 + ty.step * fnx;
                    double* dst = &layer[l][y * fnx];
                    for (std::size_t x = 0; x < fnx; ++x) dst[x] = r0[x] + fy * (r1[x] - r0[x]);
                }
            }
            const double fz = tz.frac[k];
            float* dst = &out.values[k * fnx * fny];
            for (std::size_t i = 0; i < fnx * fny; ++i) {
                dst[i] = static_cast<float>(layer[0][i] + fz * (layer[1][i] - layer[0][i]));
            }
        }
    });
    return out;
}

ScalarImage slice(const DistanceField& field, int axis, int index) {
    if (axis < 0 || axis > 2) throw UsageError("slice axis must be 0, 1 or 2");
    if (index < 0 || index >= field.grid.dims[axis]) {
        throw UsageError("slice index " + std::to_string(index) + " out of range [0, " +
                         std::to_string(field.grid.dims[axis]) + ")");
    }
    const int ax = axis == 0 ? 1 : 0;
    const int ay = axis == 2 ? 1 : 2;
    ScalarImage img{field.grid.dims[ax], field.grid.dims[ay], {}};
    img.pixels.resize(static_cast<std::size_t>(img.width) * img.height);
    for (int y = 0; y < img.height; ++y) {
        for (int x = 0; x < img.width; ++x) {
            int c[3];
            c[axis] = index;
            c[ax] = x;
            c[ay] = y;
            img.pixels[static_cast<std::size_t>(y) * img.width + x] = field.at(c[0], c[1], c[2]);
        }
    }
    return img;
}

std::vector<std::uint8_t> signed_colors(const ScalarImage& img, double scale) {
    std::vector<std::uint8_t> rgb;
    rgb.reserve(img.pixels.size() * 3);
    const auto to8 = [](double v) { return static_cast<std::uint8_t>(std::lround(std::clamp(v, 0.0, 1.0) * 255.0)); };
    for (const float v : img.pixels) {
        if (v < 0.0f) {
            const double s = std::min(1.0, -v / scale);
            rgb.insert(rgb.end(), {to8(0.6 + 0.4 * s), to8(0.15 * (1 - s)), to8(0.1 * (1 - s))});
        } else {
            const double s = std::min(1.0, v / scale);
            rgb.insert(rgb.end(), {to8(s), to8(0.2 + 0.8 * s), to8(0.5 + 0.5 * s)});
        }
    }
    return rgb;
}

void save_field(std::ostream& out, const DistanceField& field) {
    const GridSpec& g = field.grid;
    if (field.values.size() != g.count()) throw InvariantError("field value count does not match dims");
    out.write("RSDF", 4);
    io::write_le<std::uint32_t>(out, kFieldFormatVersion);
    for (int a = 0; a < 3; ++a) io::write_le<std::uint32_t>(out, static_cast<std::uint32_t>(g.dims[a]));
    for (int a = 0; a < 3; ++a) io::write_le<float>(out, static_cast<float>(g.bounds.lo[a]));
    for (int a = 0; a < 3; ++a) io::write_le<float>(out, static_cast<float>(g.bounds.hi[a]));
    io::write_le<float>(out, field.beta);
    io::write_le<float>(out, field.bias);
    io::write_le<std::uint64_t>(out, field.frame);
    for (const float v : field.values) io::write_le<float>(out, v);
    if (!out) throw IoError("failed writing field");
}

DistanceField load_field(std::istream& in) {
    char magic[4];
    if (!in.read(magic, 4)) throw FormatError("truncated field header");
    if (std::string_view(magic, 4) != "RSDF") throw FormatError("bad field magic");
    const auto version = io::read_le<std::uint32_t>(in);
    if (version != kFieldFormatVersion) throw UnsupportedVersionError(version, kFieldFormatVersion);
    DistanceField field;
    for (int a = 0; a < 3; ++a) field.grid.dims[a] = static_cast<int>(io::read_le<std::uint32_t>(in));
    for (int a = 0; a < 3; ++a) field.grid.bounds.lo[a] = io::read_le<float>(in);
    for (int a = 0; a < 3; ++a) field.grid.bounds.hi[a] = io::read_le<float>(in);
    try {
        field.grid.validate(1);
    } catch (const ConfigError& e) {
        throw FormatError(std::string("invalid field header: ") + e.what());
    }
    field.beta = io::read_le<float>(in);
    field.bias = io::read_le<float>(in);
    field.frame = io::read_le<std::uint64_t>(in);
    field.values.resize(field.grid.count());
    for (auto& v : field.values) {
        try {
            v = io::read_le<float>(in);
        } catch (const FormatError&) {
            throw FormatError("truncated field data");
        }
    }
    return field;
}

void save_field(const std::string& path, const DistanceField& field) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    save_field(out, field);
}

DistanceField load_field(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open field file '" + path + "'");
    return load_field(in);
}

}  // namespace sdfshadow
