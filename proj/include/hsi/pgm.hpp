#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "hsi/cube.hpp"

namespace hsi {

// Binary (P5) 8-bit PGM quicklooks. Deterministic byte output.

// Min-max stretch of an arbitrary real-valued plane; constant planes map to 0.
void write_pgm_stretched(const std::filesystem::path& path, const std::vector<double>& plane,
                         std::size_t height, std::size_t width);

// One band of a cube.
void write_band_quicklook(const std::filesystem::path& path, const HyperCube& cube,
                          std::size_t band);

// Integer class map with the fixed palette gray(c) = round(255 c / C),
// 0 (unlabeled) stays black.
void write_label_quicklook(const std::filesystem::path& path, const std::vector<int>& labels,
                           std::size_t height, std::size_t width, int num_classes);

} // namespace hsi
