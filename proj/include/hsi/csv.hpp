#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "hsi/cube.hpp"

namespace hsi {

// Single spectrum: "wavelength,value" per line, optional header line.
struct SpectrumCsv {
    std::vector<double> wavelengths;
    std::vector<double> values;
};
SpectrumCsv read_spectrum_csv(const std::filesystem::path& path);

// Named spectra sharing one wavelength column. Header "wavelength,name1,...".
// Used for endmember sets and spectral libraries.
struct SpectraTable {
    std::vector<double> wavelengths;
    std::vector<std::string> names;
    Matrix spectra; // wavelengths.size() x names.size(), column per name
};
SpectraTable read_spectra_csv(const std::filesystem::path& path);
void write_spectra_csv(const std::filesystem::path& path, const std::vector<double>& wavelengths,
                       const std::vector<std::string>& names, const Matrix& spectra);

// Plain numeric matrix, one row per line. Used for blur kernels and
// spectral response functions.
Matrix read_matrix_csv(const std::filesystem::path& path);

} // namespace hsi
