#pragma once

#include <filesystem>
#include <fstream>
#include <random>
#include <string>

#include "hsi/cube.hpp"
#include "hsi/rng.hpp"

namespace testutil {

// Scratch directory removed on destruction.
struct TempDir {
    std::filesystem::path path;

    explicit TempDir(const std::string& tag) {
        static std::atomic<unsigned> counter{0};
        path = std::filesystem::temp_directory_path() /
               ("hsikit_" + tag + "_" + std::to_string(::getpid()) + "_" +
                std::to_string(counter++));
        std::filesystem::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path, ec);
    }
    std::filesystem::path operator/(const std::string& name) const { return path / name; }
};

// Random cube whose values are exactly representable in the given ENVI data
// type, so on-disk round trips are bit-exact.
inline hsi::HyperCube random_cube(std::size_t h, std::size_t w, std::size_t l, int data_type,
                                  std::uint64_t seed) {
    hsi::Rng rng(seed);
    hsi::SpectralAxis axis;
    axis.wavelengths.resize(l);
    for (std::size_t b = 0; b < l; ++b) axis.wavelengths[b] = 400.0 + 5.0 * static_cast<double>(b);
    hsi::HyperCube cube(h, w, l, hsi::Quantity::Radiance, axis);
    for (auto& v : cube.values()) {
        switch (data_type) {
        case 1: v = static_cast<double>(rng.below(256)); break;
        case 2: v = static_cast<double>(static_cast<long>(rng.below(65536)) - 32768); break;
        case 12: v = static_cast<double>(rng.below(65536)); break;
        case 4: v = static_cast<double>(static_cast<float>(rng.uniform(-10.0, 10.0))); break;
        case 5: v = rng.uniform(-10.0, 10.0); break;
        default: v = 0.0; break;
        }
    }
    return cube;
}

inline bool cubes_identical(const hsi::HyperCube& a, const hsi::HyperCube& b) {
    if (!a.same_shape(b)) return false;
    for (std::size_t i = 0; i < a.values().size(); ++i)
        if (a.values()[i] != b.values()[i]) return false;
    if (a.axis().wavelengths != b.axis().wavelengths) return false;
    return true;
}

inline void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path);
    out << text;
}

inline std::string read_binary(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

} // namespace testutil
