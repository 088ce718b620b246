#pragma once

#include <vector>

#include "hsi/cube.hpp"

namespace hsi {

// Dark/white reference panels reduced to per-band means. Bands where the
// white level does not clear the dark level are flagged dead instead of
// failing the whole frame.
struct ReferencePanels {
    std::vector<double> dark;  // per-band mean dark frame
    std::vector<double> white; // per-band mean white frame
    double white_reflectance = 1.0; // certified panel reflectance, in (0, 1]

    static ReferencePanels from_vectors(std::vector<double> dark, std::vector<double> white,
                                        double white_reflectance = 1.0);
    // spatial mean over all pixels of each panel cube
    static ReferencePanels from_cubes(const HyperCube& dark, const HyperCube& white,
                                      double white_reflectance = 1.0);

    std::size_t bands() const { return dark.size(); }
    std::vector<std::size_t> dead_bands() const; // white <= dark
};

// Per pixel/band: R = white_reflectance * (DN - dark_b) / (white_b - dark_b),
// clipped to [0, 1.05]. Dead bands are zero-filled and listed in the output
// metadata under "dead_bands". Throws BandCountMismatch, AllBandsDead.
HyperCube calibrate_reflectance(const HyperCube& raw, const ReferencePanels& panels);

// Piecewise-linear resampling of every pixel spectrum onto target_axis.
// Target wavelengths must lie inside the source range (no extrapolation).
HyperCube resample_wavelengths(const HyperCube& cube, const SpectralAxis& target_axis);

// Shared helper: linear interpolation of (x, y) samples at xq. x strictly
// increasing; xq must be within [x.front(), x.back()].
double interp_linear(const std::vector<double>& x, const std::vector<double>& y, double xq);

} // namespace hsi
