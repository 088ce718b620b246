#pragma once

#include <cstdint>
#include <limits>

#include "hsi/classify.hpp"
#include "hsi/cube.hpp"
#include "hsi/unmix.hpp"

namespace hsi {

// Ground-truth scene recipe. A SceneSpec (seed included) fully determines
// every output byte.
struct SceneSpec {
    std::size_t height = 64;
    std::size_t width = 64;
    std::size_t bands = 50;
    std::size_t endmember_count = 4;
    std::uint64_t seed = 0;
    bool pure_pixels = true;
    double max_abundance = 0.8; // cap when pure_pixels is false
    double snr_db = std::numeric_limits<double>::infinity();
    std::size_t class_regions = 4; // grid granularity of the abundance anchors
    // per-band noise sigma ramps linearly by this max/min ratio (1 = white
    // noise); the total noise power still matches snr_db. Real sensors have
    // band-dependent SNR, and the noise-whitening transform only separates
    // from plain PCA when the noise is anisotropic.
    double band_noise_ramp = 3.0;

    void validate() const;
};

struct GroundTruth {
    EndmemberSet endmembers;
    AbundanceMaps abundances; // Full mode
    LabelMap labels;          // argmax abundance, classes 1..p
    HyperCube clean_cube;
};

// Smooth positive spectra (baseline plus 2-4 Gaussian bumps) with pairwise
// SAD >= 0.15 enforced by rejection resampling (RejectionExhausted after
// 1000 attempts). Values stay inside (0, 1.2).
EndmemberSet generate_endmembers(std::size_t bands, std::size_t p, std::uint64_t seed);

// Per-pixel Dirichlet(1) draws blended toward block-level Dirichlet anchors
// (class_regions x class_regions grid), one 3x3 mean smoothing pass, then
// either exact one-hot pure pixels or the max-abundance cap.
AbundanceMaps generate_abundances(const SceneSpec& spec);

struct SceneResult {
    GroundTruth truth;
    HyperCube noisy_cube;
};

// Composes the generators, builds the clean cube, injects noise at the
// requested SNR (sigma^2 = P_signal / 10^(snr/10)).
SceneResult generate_scene(const SceneSpec& spec);

// default wavelength grid used for synthetic cubes: 400 + 10 b nm
SpectralAxis synth_axis(std::size_t bands);

} // namespace hsi
