#pragma once

#include "hsi/cube.hpp"
#include "hsi/restore.hpp"

namespace hsi {

// Forward operators of the fusion model: a spatial blur-plus-decimation
// that simulates the low-resolution hyperspectral acquisition, and a
// nonnegative row-normalized spectral response that simulates the
// panchromatic / multispectral acquisition.
struct FusionOperators {
    Matrix blur_kernel;       // odd sides, sums to 1
    std::size_t scale = 1;    // decimation factor s
    Matrix spectral_response; // m x l, rows sum to 1

    void validate(std::size_t height, std::size_t width, std::size_t bands) const;
};

// Blur then decimate every band. Requires dims divisible by the scale.
HyperCube spatial_downsample(const HyperCube& cube, const FusionOperators& ops);

// Weighted band combination per pixel; output has one band per response row.
HyperCube spectral_project(const HyperCube& cube, const FusionOperators& ops);

// argmin_X ||D(X) - Y_lr||^2 + ||P(X) - Y_pan||^2 + lambda ||L X||^2 by
// gradient descent, initialized from nearest-neighbor upsampled lr_hs.
std::pair<HyperCube, SolveReport> fuse(const HyperCube& lr_hs, const HyperCube& hr_pan,
                                       const FusionOperators& ops, double lambda,
                                       const RestoreConfig& cfg);

// Init used by fuse, exposed for baselines: X0(r, c, b) = lr(r/s, c/s, b).
HyperCube upsample_nearest(const HyperCube& lr, std::size_t scale);

} // namespace hsi
