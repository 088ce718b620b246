#include "hsi/synth.hpp"

#include <algorithm>
#include <cmath>

#include "hsi/rng.hpp"

namespace hsi {

namespace {

// per-stage stream offsets so the generators stay independent
constexpr std::uint64_t kEndmemberStream = 0;
constexpr std::uint64_t kAbundanceStream = 0x9E3779B97F4A7C15ULL;
constexpr std::uint64_t kNoiseStream = 0x6A09E667F3BCC909ULL;

Vector random_spectrum(std::size_t bands, Rng& rng, double base_lo, double base_hi) {
    Vector s = Vector::Constant(static_cast<Eigen::Index>(bands), rng.uniform(base_lo, base_hi));
    const int bumps = 2 + static_cast<int>(rng.below(3)); // 2..4
    for (int i = 0; i < bumps; ++i) {
        const double center = rng.uniform(0.0, static_cast<double>(bands - 1));
        const double width = rng.uniform(static_cast<double>(bands) / 20.0,
                                         static_cast<double>(bands) / 5.0);
        const double amp = rng.uniform(0.1, 0.45) * (rng.uniform() < 0.35 ? -1.0 : 1.0);
        for (std::size_t b = 0; b < bands; ++b) {
            const double d = (static_cast<double>(b) - center) / width;
            s(static_cast<Eigen::Index>(b)) += amp * std::exp(-0.5 * d * d);
        }
    }
    for (Eigen::Index b = 0; b < s.size(); ++b) s(b) = std::clamp(s(b), 0.02, 1.18);
    return s;
}

// cap enforcement: clip entries above the cap and redistribute the excess
// among the uncapped entries until the column sums to 1 again
void water_fill_cap(Vector& a, double cap) {
    for (int round = 0; round < 64; ++round) {
        double excess = 0.0;
        double free_mass = 0.0;
        for (Eigen::Index i = 0; i < a.size(); ++i) {
            if (a(i) > cap) {
                excess += a(i) - cap;
                a(i) = cap;
            } else {
                free_mass += a(i);
            }
        }
        if (excess <= 1e-15) return;
        if (free_mass <= 0.0) {
            // every entry at the cap: feasibility (cap p >= 1) makes sum >= 1
            return;
        }
        const double scale = (free_mass + excess) / free_mass;
        for (Eigen::Index i = 0; i < a.size(); ++i)
            if (a(i) < cap) a(i) *= scale;
    }
}

} // namespace

SpectralAxis synth_axis(std::size_t bands) {
    SpectralAxis axis;
    axis.wavelengths.resize(bands);
    for (std::size_t b = 0; b < bands; ++b) axis.wavelengths[b] = 400.0 + 10.0 * static_cast<double>(b);
    return axis;
}

void SceneSpec::validate() const {
    if (height == 0 || width == 0 || bands == 0)
        throw Error(ErrorCode::BadConfig, "scene dims must be positive");
    if (endmember_count < 1 || endmember_count > bands)
        throw Error(ErrorCode::BadConfig, "need 1 <= p <= bands");
    if (!(max_abundance > 0.0 && max_abundance <= 1.0))
        throw Error(ErrorCode::BadConfig, "max_abundance must lie in (0, 1]");
    if (!pure_pixels && max_abundance * static_cast<double>(endmember_count) < 1.0)
        throw Error(ErrorCode::InfeasibleCap,
                    "max_abundance * p < 1 leaves no feasible sum-to-one column");
    if (class_regions < 1) throw Error(ErrorCode::BadConfig, "class_regions must be >= 1");
    if (!(snr_db > 0.0))
        throw Error(ErrorCode::BadConfig, "snr_db must be positive (or infinite)");
    if (!(band_noise_ramp >= 1.0))
        throw Error(ErrorCode::BadConfig, "band_noise_ramp must be >= 1");
}

EndmemberSet generate_endmembers(std::size_t bands, std::size_t p, std::uint64_t seed) {
    if (p < 1) throw Error(ErrorCode::BadConfig, "need p >= 1");
    Rng rng(seed + kEndmemberStream);
    EndmemberSet set;
    set.spectra.resize(static_cast<Eigen::Index>(bands), static_cast<Eigen::Index>(p));
    set.names.resize(p);
    for (std::size_t i = 0; i < p; ++i) set.names[i] = "material_" + std::to_string(i + 1);

    constexpr double kMinSeparation = 0.15;
    for (std::size_t i = 0; i < p; ++i) {
        // stratified baseline slots keep the materials at distinct overall
        // brightness levels; the bumps carry the angular separation
        const double slot = 0.8 / static_cast<double>(p);
        const double base_lo = 0.1 + slot * (static_cast<double>(i) + 0.1);
        const double base_hi = 0.1 + slot * (static_cast<double>(i) + 0.6);
        bool placed = false;
        for (int attempt = 0; attempt < 1000; ++attempt) {
            Vector candidate = random_spectrum(bands, rng, base_lo, base_hi);
            bool distinct = true;
            for (std::size_t j = 0; j < i; ++j)
                if (sad(candidate, set.spectra.col(static_cast<Eigen::Index>(j))) < kMinSeparation) {
                    distinct = false;
                    break;
                }
            if (distinct) {
                set.spectra.col(static_cast<Eigen::Index>(i)) = candidate;
                placed = true;
                break;
            }
        }
        if (!placed)
            throw Error(ErrorCode::RejectionExhausted,
                        "could not place endmember " + std::to_string(i + 1) +
                            " with pairwise SAD >= 0.15 in 1000 attempts");
    }
    return set;
}

AbundanceMaps generate_abundances(const SceneSpec& spec) {
    spec.validate();
    const std::size_t h = spec.height, w = spec.width, p = spec.endmember_count;
    const std::size_t n = h * w;
    Rng rng(spec.seed + kAbundanceStream);

    // block anchors give the field its region structure
    const std::size_t g = std::min(spec.class_regions, std::min(h, w));
    std::vector<std::vector<double>> anchors(g * g);
    for (auto& a : anchors) a = rng.dirichlet_flat(p);

    constexpr double kAnchorWeight = 0.8;
    Matrix field(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(n));
    for (std::size_t r = 0; r < h; ++r) {
        for (std::size_t c = 0; c < w; ++c) {
            const std::size_t br = std::min(r * g / h, g - 1);
            const std::size_t bc = std::min(c * g / w, g - 1);
            const auto& anchor = anchors[br * g + bc];
            const auto draw = rng.dirichlet_flat(p);
            for (std::size_t i = 0; i < p; ++i)
                field(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(r * w + c)) =
                    kAnchorWeight * anchor[i] + (1.0 - kAnchorWeight) * draw[i];
        }
    }

    // one 3x3 mean pass per endmember plane (reflect edges), then renormalize
    Matrix smoothed = field;
    for (std::size_t i = 0; i < p; ++i) {
        for (std::size_t r = 0; r < h; ++r) {
            for (std::size_t c = 0; c < w; ++c) {
                double acc = 0.0;
                for (int dr = -1; dr <= 1; ++dr) {
                    for (int dc = -1; dc <= 1; ++dc) {
                        std::size_t rr = static_cast<std::size_t>(std::clamp<long>(
                            static_cast<long>(r) + dr, 0, static_cast<long>(h) - 1));
                        std::size_t cc = static_cast<std::size_t>(std::clamp<long>(
                            static_cast<long>(c) + dc, 0, static_cast<long>(w) - 1));
                        acc += field(static_cast<Eigen::Index>(i),
                                     static_cast<Eigen::Index>(rr * w + cc));
                    }
                }
                smoothed(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(r * w + c)) =
                    acc / 9.0;
            }
        }
    }
    for (Eigen::Index j = 0; j < smoothed.cols(); ++j) smoothed.col(j) /= smoothed.col(j).sum();

    if (spec.pure_pixels) {
        // one exact one-hot pixel per endmember, at distinct seeded positions
        std::vector<std::size_t> order(n);
        for (std::size_t i = 0; i < n; ++i) order[i] = i;
        rng.shuffle(order);
        for (std::size_t i = 0; i < p; ++i) {
            Vector onehot = Vector::Zero(static_cast<Eigen::Index>(p));
            onehot(static_cast<Eigen::Index>(i)) = 1.0;
            smoothed.col(static_cast<Eigen::Index>(order[i])) = onehot;
        }
    } else {
        for (Eigen::Index j = 0; j < smoothed.cols(); ++j) {
            Vector col = smoothed.col(j);
            water_fill_cap(col, spec.max_abundance);
            smoothed.col(j) = col / col.sum();
        }
    }

    AbundanceMaps out;
    out.coefficients = smoothed;
    out.constraint_mode = ConstraintMode::Full;
    return out;
}

SceneResult generate_scene(const SceneSpec& spec) {
    spec.validate();
    SceneResult result;
    result.truth.endmembers = generate_endmembers(spec.bands, spec.endmember_count, spec.seed);
    result.truth.abundances = generate_abundances(spec);

    const Matrix clean = result.truth.endmembers.spectra * result.truth.abundances.coefficients;
    result.truth.clean_cube =
        from_matrix(clean, spec.height, spec.width, Quantity::Radiance, synth_axis(spec.bands));
    result.truth.clean_cube.metadata().sensor_name = "synthetic";

    result.truth.labels.height = spec.height;
    result.truth.labels.width = spec.width;
    result.truth.labels.labels.resize(spec.height * spec.width);
    for (Eigen::Index j = 0; j < result.truth.abundances.coefficients.cols(); ++j) {
        Eigen::Index arg = 0;
        result.truth.abundances.coefficients.col(j).maxCoeff(&arg);
        result.truth.labels.labels[static_cast<std::size_t>(j)] = static_cast<int>(arg) + 1;
    }
    result.truth.labels.class_names = result.truth.endmembers.names;

    result.noisy_cube = result.truth.clean_cube;
    if (std::isfinite(spec.snr_db)) {
        const double power = clean.squaredNorm() / static_cast<double>(clean.size());
        const double sigma = std::sqrt(power / std::pow(10.0, spec.snr_db / 10.0));
        // band weights ramp from 1 to band_noise_ramp, scaled so the mean
        // squared weight is 1 and the total noise power matches snr_db
        std::vector<double> band_sigma(spec.bands, sigma);
        if (spec.band_noise_ramp > 1.0 && spec.bands > 1) {
            double sq_sum = 0.0;
            for (std::size_t b = 0; b < spec.bands; ++b) {
                const double t = static_cast<double>(b) / static_cast<double>(spec.bands - 1);
                band_sigma[b] = 1.0 + (spec.band_noise_ramp - 1.0) * t;
                sq_sum += band_sigma[b] * band_sigma[b];
            }
            const double scale = std::sqrt(static_cast<double>(spec.bands) / sq_sum);
            for (auto& s : band_sigma) s *= sigma * scale;
        }
        Rng rng(spec.seed + kNoiseStream);
        HyperCube& noisy = result.noisy_cube;
        for (std::size_t r = 0; r < spec.height; ++r)
            for (std::size_t c = 0; c < spec.width; ++c)
                for (std::size_t b = 0; b < spec.bands; ++b)
                    noisy.at(r, c, b) += band_sigma[b] * rng.gaussian();
    }
    return result;
}

} // namespace hsi
