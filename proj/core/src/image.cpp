#include "sdfshadow/image.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>

#include "sdfshadow/error.hpp"
#include "sdfshadow/io_util.hpp"

namespace sdfshadow {

ScalarImage make_image(int width, int height, float fill) {
    return {width, height, std::vector<float>(static_cast<std::size_t>(width) * height, fill)};
}

void write_pfm(std::ostream& out, const ScalarImage& img) {
    out << "Pf\n" << img.width << ' ' << img.height << "\n-1.0\n";
    for (int y = img.height - 1; y >= 0; --y) {
        for (int x = 0; x < img.width; ++x) io::write_le<float>(out, img.at(x, y));
    }
    if (!out) throw IoError("failed writing PFM");
}

void write_pfm(const std::string& path, const ScalarImage& img) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    write_pfm(out, img);
}

ScalarImage read_pfm(std::istream& in) {
    std::string magic;
    int w = 0, h = 0;
    double scale = 0;
    if (!(in >> magic >> w >> h >> scale)) throw FormatError("bad PFM header");
    in.get();
    const int channels = magic == "Pf" ? 1 : (magic == "PF" ? 3 : 0);
    if (channels == 0) throw FormatError("not a PFM file");
    if (w <= 0 || h <= 0) throw FormatError("bad PFM dimensions");
    const bool little = scale < 0;
    ScalarImage img = make_image(w, h);
    for (int y = h - 1; y >= 0; --y) {
        for (int x = 0; x < w; ++x) {
            double sum = 0;
            for (int c = 0; c < channels; ++c) {
                auto bits = io::read_le<std::uint32_t>(in);
                if (!little) bits = __builtin_bswap32(bits);
                float v;
                std::memcpy(&v, &bits, 4);
                sum += v;
            }
            img.pixels[static_cast<std::size_t>(y) * w + x] = static_cast<float>(sum / channels);
        }
    }
    return img;
}

ScalarImage read_pfm(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open image '" + path + "'");
    return read_pfm(in);
}

void write_ppm_rgb(const std::string& path, int width, int height, const std::vector<std::uint8_t>& rgb) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    out << "P6\n" << width << ' ' << height << "\n255\n";
    out.write(reinterpret_cast<const char*>(rgb.data()), static_cast<std::streamsize>(rgb.size()));
    if (!out) throw IoError("failed writing PPM");
}

void write_ppm(const std::string& path, const ScalarImage& img) {
    std::vector<std::uint8_t> rgb;
    rgb.reserve(img.pixels.size() * 3);
    for (const float v : img.pixels) {
        const double g = std::pow(std::clamp(static_cast<double>(v), 0.0, 1.0), 1.0 / 2.2);
        const auto b = static_cast<std::uint8_t>(std::lround(g * 255.0));
        rgb.insert(rgb.end(), {b, b, b});
    }
    write_ppm_rgb(path, img.width, img.height, rgb);
}

}  // namespace sdfshadow
