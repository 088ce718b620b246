#include "hsi/pgm.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

namespace hsi {

namespace {

void write_p5(const std::filesystem::path& path, const std::vector<std::uint8_t>& gray,
              std::size_t height, std::size_t width) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::IoFailure, "cannot write " + path.string());
    out << "P5\n" << width << " " << height << "\n255\n";
    out.write(reinterpret_cast<const char*>(gray.data()), static_cast<std::streamsize>(gray.size()));
    if (!out) throw Error(ErrorCode::IoFailure, "short write on " + path.string());
}

} // namespace

void write_pgm_stretched(const std::filesystem::path& path, const std::vector<double>& plane,
                         std::size_t height, std::size_t width) {
    if (plane.size() != height * width)
        throw Error(ErrorCode::DimMismatch, "plane size disagrees with dimensions");
    double lo = plane.empty() ? 0.0 : plane[0];
    double hi = lo;
    for (double v : plane) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    std::vector<std::uint8_t> gray(plane.size(), 0);
    if (hi > lo) {
        const double scale = 255.0 / (hi - lo);
        for (std::size_t i = 0; i < plane.size(); ++i)
            gray[i] = static_cast<std::uint8_t>(std::lround((plane[i] - lo) * scale));
    }
    write_p5(path, gray, height, width);
}

void write_band_quicklook(const std::filesystem::path& path, const HyperCube& cube,
                          std::size_t band) {
    if (band >= cube.bands()) throw Error(ErrorCode::OutOfBounds, "band index past cube bands");
    std::vector<double> plane(cube.pixels());
    for (std::size_t r = 0; r < cube.height(); ++r)
        for (std::size_t c = 0; c < cube.width(); ++c)
            plane[r * cube.width() + c] = cube.at(r, c, band);
    write_pgm_stretched(path, plane, cube.height(), cube.width());
}

void write_label_quicklook(const std::filesystem::path& path, const std::vector<int>& labels,
                           std::size_t height, std::size_t width, int num_classes) {
    if (labels.size() != height * width)
        throw Error(ErrorCode::DimMismatch, "label count disagrees with dimensions");
    std::vector<std::uint8_t> gray(labels.size(), 0);
    const int c_max = std::max(1, num_classes);
    for (std::size_t i = 0; i < labels.size(); ++i) {
        int c = std::clamp(labels[i], 0, c_max);
        gray[i] = static_cast<std::uint8_t>(std::lround(255.0 * c / c_max));
    }
    write_p5(path, gray, height, width);
}

} // namespace hsi
