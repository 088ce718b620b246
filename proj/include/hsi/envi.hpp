#pragma once

#include <filesystem>
#include <string>

#include "hsi/cube.hpp"

namespace hsi {

// ENVI raw binary pair: <stem>.hdr text header + companion flat binary.
// Header grammar: first line is literally "ENVI"; then "key = value" pairs,
// keys case-insensitive, values may be "{ ... }" comma-separated lists that
// span lines. Binary holds samples in the declared interleave and byte
// order with no embedded header past `header offset`.

// Supported ENVI data type codes.
//   1 = uint8, 2 = int16, 4 = float32, 5 = float64, 12 = uint16
bool envi_data_type_supported(int code);
std::size_t envi_element_size(int code);

// Reads <header_path> and its companion binary (same stem, extension one of
// "", .img, .dat, .raw). Values are widened to doubles; the on-disk layout
// is normalized to the internal (row, col, band) order.
// Throws MissingField, SizeMismatch, UnsupportedDataType, ParseError, IoFailure.
HyperCube read_envi(const std::filesystem::path& header_path);

// Writes <stem>.hdr and <stem>.img. Values are narrowed to the requested
// data type; the default is little-endian float32.
void write_envi(const HyperCube& cube, const std::filesystem::path& stem,
                Interleave interleave = Interleave::BSQ, int data_type_code = 4,
                ByteOrder byte_order = ByteOrder::LittleEndian);

} // namespace hsi
