#include "hsi/cube.hpp"

namespace hsi {

const char* to_string(Quantity q) {
    switch (q) {
    case Quantity::DigitalNumber: return "digital_number";
    case Quantity::Radiance: return "radiance";
    case Quantity::Reflectance: return "reflectance";
    }
    return "unknown";
}

const char* to_string(Interleave il) {
    switch (il) {
    case Interleave::BSQ: return "bsq";
    case Interleave::BIL: return "bil";
    case Interleave::BIP: return "bip";
    }
    return "bsq";
}

bool SpectralAxis::valid() const {
    if (wavelengths.empty()) return false;
    if (wavelengths.front() <= 0.0) return false;
    for (std::size_t i = 1; i < wavelengths.size(); ++i)
        if (wavelengths[i] <= wavelengths[i - 1]) return false;
    if (!fwhm.empty() && fwhm.size() != wavelengths.size()) return false;
    return true;
}

SpectralAxis SpectralAxis::index_axis(std::size_t bands) {
    SpectralAxis axis;
    axis.wavelengths.resize(bands);
    for (std::size_t b = 0; b < bands; ++b) axis.wavelengths[b] = static_cast<double>(b);
    return axis;
}

const std::string* MetadataRecord::find_extra(const std::string& key) const {
    for (const auto& [k, v] : extra)
        if (k == key) return &v;
    return nullptr;
}

void MetadataRecord::set_extra(const std::string& key, const std::string& value) {
    for (auto& [k, v] : extra) {
        if (k == key) {
            v = value;
            return;
        }
    }
    extra.emplace_back(key, value);
}

std::size_t MaskPlane::count_observed() const {
    std::size_t n = 0;
    for (auto f : flags) n += (f != 0);
    return n;
}

MaskPlane MaskPlane::all_observed(std::size_t height, std::size_t width) {
    return MaskPlane{height, width, std::vector<std::uint8_t>(height * width, 1)};
}

HyperCube::HyperCube(std::size_t height, std::size_t width, std::size_t bands, Quantity quantity)
    : HyperCube(height, width, bands, quantity, SpectralAxis::index_axis(bands)) {
    // index axis starts at 0 which is not a physical wavelength; callers that
    // care about axis validity should supply one
}

HyperCube::HyperCube(std::size_t height, std::size_t width, std::size_t bands, Quantity quantity,
                     SpectralAxis axis)
    : height_(height), width_(width), bands_(bands),
      values_(height * width * bands, 0.0), quantity_(quantity), axis_(std::move(axis)) {
    if (axis_.wavelengths.empty()) axis_ = SpectralAxis::index_axis(bands);
}

std::vector<double> get_spectrum(const HyperCube& cube, std::size_t row, std::size_t col) {
    if (row >= cube.height() || col >= cube.width())
        throw Error(ErrorCode::OutOfBounds,
                    "pixel (" + std::to_string(row) + "," + std::to_string(col) + ") outside " +
                        std::to_string(cube.height()) + "x" + std::to_string(cube.width()));
    std::vector<double> s(cube.bands());
    for (std::size_t b = 0; b < cube.bands(); ++b) s[b] = cube.at(row, col, b);
    return s;
}

Matrix to_matrix(const HyperCube& cube) {
    const std::size_t l = cube.bands();
    const std::size_t n = cube.pixels();
    Matrix m(l, n);
    const double* v = cube.values().data();
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t b = 0; b < l; ++b) m(static_cast<Eigen::Index>(b), static_cast<Eigen::Index>(j)) = v[j * l + b];
    return m;
}

HyperCube from_matrix(const Matrix& data, std::size_t height, std::size_t width,
                      Quantity quantity, SpectralAxis axis) {
    const std::size_t l = static_cast<std::size_t>(data.rows());
    const std::size_t n = static_cast<std::size_t>(data.cols());
    if (n != height * width)
        throw Error(ErrorCode::DimMismatch, "matrix has " + std::to_string(n) + " columns, expected " +
                                                std::to_string(height * width));
    HyperCube cube(height, width, l, quantity, std::move(axis));
    double* v = cube.values().data();
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t b = 0; b < l; ++b) v[j * l + b] = data(static_cast<Eigen::Index>(b), static_cast<Eigen::Index>(j));
    return cube;
}

} // namespace hsi
