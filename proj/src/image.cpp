#include "mimic/image.hpp"

#include <cmath>
#include <cstdlib>
#include <sstream>

#include "mimic/errors.hpp"
#include "mimic/text_io.hpp"

namespace mimic {

Image Image::filled(int width, int height, std::uint8_t r, std::uint8_t g,
                    std::uint8_t b) {
    Image img;
    img.width = width;
    img.height = height;
    img.rgb.resize(static_cast<std::size_t>(width) * height * 3);
    for (std::size_t i = 0; i < img.rgb.size(); i += 3) {
        img.rgb[i] = r;
        img.rgb[i + 1] = g;
        img.rgb[i + 2] = b;
    }
    return img;
}

void Image::set_pixel(int y, int x, std::uint8_t r, std::uint8_t g, std::uint8_t b) {
    if (x < 0 || x >= width || y < 0 || y >= height) return;
    at(y, x, 0) = r;
    at(y, x, 1) = g;
    at(y, x, 2) = b;
}

void Image::draw_line(int y0, int x0, int y1, int x1, std::uint8_t r, std::uint8_t g,
                      std::uint8_t b) {
    // Bresenham.
    int dx = std::abs(x1 - x0), sx = x0 < x1 ? 1 : -1;
    int dy = -std::abs(y1 - y0), sy = y0 < y1 ? 1 : -1;
    int err = dx + dy;
    int x = x0, y = y0;
    while (true) {
        set_pixel(y, x, r, g, b);
        if (x == x1 && y == y1) break;
        int e2 = 2 * err;
        if (e2 >= dy) {
            err += dy;
            x += sx;
        }
        if (e2 <= dx) {
            err += dx;
            y += sy;
        }
    }
}

std::string encode_ppm(const Image& img) {
    std::ostringstream out;
    out << "P6\n" << img.width << " " << img.height << "\n255\n";
    out.write(reinterpret_cast<const char*>(img.rgb.data()),
              static_cast<std::streamsize>(img.rgb.size()));
    return out.str();
}

void write_ppm(const Image& img, const std::string& path) {
    write_file_atomic(path, encode_ppm(img));
}

Image read_ppm(const std::string& path) {
    const std::string bytes = read_file(path);
    std::istringstream in(bytes);
    std::string magic;
    int w = 0, h = 0, maxval = 0;
    in >> magic >> w >> h >> maxval;
    if (magic != "P6" || w <= 0 || h <= 0 || maxval != 255)
        throw FormatError("not a supported P6 PPM: " + path);
    in.get();  // single whitespace after header
    Image img;
    img.width = w;
    img.height = h;
    img.rgb.resize(static_cast<std::size_t>(w) * h * 3);
    in.read(reinterpret_cast<char*>(img.rgb.data()),
            static_cast<std::streamsize>(img.rgb.size()));
    if (in.gcount() != static_cast<std::streamsize>(img.rgb.size()))
        throw FormatError("truncated PPM: " + path);
    return img;
}

}  // namespace mimic
