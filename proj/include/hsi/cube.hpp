#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hsi/errors.hpp"

namespace hsi {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

enum class Quantity { DigitalNumber, Radiance, Reflectance };
enum class Interleave { BSQ, BIL, BIP };
enum class ByteOrder { LittleEndian, BigEndian };

const char* to_string(Quantity q);
const char* to_string(Interleave il);

// Wavelength grid of a cube. Strictly increasing, positive, in nanometres.
struct SpectralAxis {
    std::vector<double> wavelengths;
    std::vector<double> fwhm; // empty when unknown

    std::size_t size() const { return wavelengths.size(); }
    bool valid() const;

    // 0..n-1 placeholder grid for headerless data
    static SpectralAxis index_axis(std::size_t bands);
};

// Header-level metadata. `extra` keeps unknown keys in file order so a
// read -> write round trip reproduces them untouched.
struct MetadataRecord {
    std::string sensor_name;
    std::optional<std::string> acquisition_time; // ISO-8601
    Interleave interleave = Interleave::BSQ;
    int data_type_code = 4; // ENVI convention, 4 = float32
    ByteOrder byte_order = ByteOrder::LittleEndian;
    std::string description;
    std::vector<std::pair<std::string, std::string>> extra;

    const std::string* find_extra(const std::string& key) const;
    void set_extra(const std::string& key, const std::string& value);
};

// Per-pixel observation flags (true = observed). Annotates a cube of the
// same spatial dimensions.
struct MaskPlane {
    std::size_t height = 0;
    std::size_t width = 0;
    std::vector<std::uint8_t> flags; // 1 = observed

    bool observed(std::size_t r, std::size_t c) const { return flags[r * width + c] != 0; }
    std::size_t count_observed() const;

    static MaskPlane all_observed(std::size_t height, std::size_t width);
};

// H x W x L cube of 64-bit reals. Storage is pixel-major (row, col, band),
// so a pixel's spectrum is contiguous. The on-disk interleave is a property
// of the file, not of this object.
class HyperCube {
public:
    HyperCube() = default;
    HyperCube(std::size_t height, std::size_t width, std::size_t bands,
              Quantity quantity = Quantity::Reflectance);
    HyperCube(std::size_t height, std::size_t width, std::size_t bands,
              Quantity quantity, SpectralAxis axis);

    std::size_t height() const { return height_; }
    std::size_t width() const { return width_; }
    std::size_t bands() const { return bands_; }
    std::size_t pixels() const { return height_ * width_; }
    std::size_t samples() const { return height_ * width_ * bands_; }

    double& at(std::size_t r, std::size_t c, std::size_t b) {
        return values_[(r * width_ + c) * bands_ + b];
    }
    double at(std::size_t r, std::size_t c, std::size_t b) const {
        return values_[(r * width_ + c) * bands_ + b];
    }

    std::vector<double>& values() { return values_; }
    const std::vector<double>& values() const { return values_; }

    Quantity quantity() const { return quantity_; }
    void set_quantity(Quantity q) { quantity_ = q; }

    SpectralAxis& axis() { return axis_; }
    const SpectralAxis& axis() const { return axis_; }

    MetadataRecord& metadata() { return metadata_; }
    const MetadataRecord& metadata() const { return metadata_; }

    bool same_shape(const HyperCube& other) const {
        return height_ == other.height_ && width_ == other.width_ && bands_ == other.bands_;
    }

private:
    std::size_t height_ = 0;
    std::size_t width_ = 0;
    std::size_t bands_ = 0;
    std::vector<double> values_;
    Quantity quantity_ = Quantity::Reflectance;
    SpectralAxis axis_;
    MetadataRecord metadata_;
};

// Copy of the per-band values at one pixel. Throws OutOfBounds.
std::vector<double> get_spectrum(const HyperCube& cube, std::size_t row, std::size_t col);

// l x n matrix, column j = spectrum of pixel (j / width, j % width).
Matrix to_matrix(const HyperCube& cube);

// Inverse of to_matrix for the given spatial shape.
HyperCube from_matrix(const Matrix& data, std::size_t height, std::size_t width,
                      Quantity quantity = Quantity::Reflectance,
                      SpectralAxis axis = {});

} // namespace hsi
