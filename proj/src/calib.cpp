#include "hsi/calib.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace hsi {

namespace {

std::vector<double> band_means(const HyperCube& cube) {
    std::vector<double> mean(cube.bands(), 0.0);
    for (std::size_t r = 0; r < cube.height(); ++r)
        for (std::size_t c = 0; c < cube.width(); ++c)
            for (std::size_t b = 0; b < cube.bands(); ++b) mean[b] += cube.at(r, c, b);
    const double n = static_cast<double>(cube.pixels());
    for (auto& m : mean) m /= n;
    return mean;
}

} // namespace

ReferencePanels ReferencePanels::from_vectors(std::vector<double> dark, std::vector<double> white,
                                              double white_reflectance) {
    if (dark.size() != white.size())
        throw Error(ErrorCode::BandCountMismatch,
                    "dark has " + std::to_string(dark.size()) + " bands, white has " +
                        std::to_string(white.size()));
    if (!(white_reflectance > 0.0 && white_reflectance <= 1.0))
        throw Error(ErrorCode::BadConfig, "white_reflectance must lie in (0, 1]");
    return ReferencePanels{std::move(dark), std::move(white), white_reflectance};
}

ReferencePanels ReferencePanels::from_cubes(const HyperCube& dark, const HyperCube& white,
                                            double white_reflectance) {
    if (dark.bands() != white.bands())
        throw Error(ErrorCode::BandCountMismatch, "panel cubes disagree on band count");
    return from_vectors(band_means(dark), band_means(white), white_reflectance);
}

std::vector<std::size_t> ReferencePanels::dead_bands() const {
    std::vector<std::size_t> dead;
    for (std::size_t b = 0; b < dark.size(); ++b)
        if (white[b] <= dark[b]) dead.push_back(b);
    return dead;
}

HyperCube calibrate_reflectance(const HyperCube& raw, const ReferencePanels& panels) {
    if (raw.bands() != panels.bands())
        throw Error(ErrorCode::BandCountMismatch,
                    "cube has " + std::to_string(raw.bands()) + " bands, panels have " +
                        std::to_string(panels.bands()));
    const auto dead = panels.dead_bands();
    if (dead.size() == panels.bands())
        throw Error(ErrorCode::AllBandsDead, "white panel never exceeds dark panel");

    std::vector<std::uint8_t> is_dead(raw.bands(), 0);
    for (auto b : dead) is_dead[b] = 1;

    HyperCube out(raw.height(), raw.width(), raw.bands(), Quantity::Reflectance, raw.axis());
    out.metadata() = raw.metadata();
    for (std::size_t r = 0; r < raw.height(); ++r) {
        for (std::size_t c = 0; c < raw.width(); ++c) {
            for (std::size_t b = 0; b < raw.bands(); ++b) {
                if (is_dead[b]) {
                    out.at(r, c, b) = 0.0;
                    continue;
                }
                const double refl = panels.white_reflectance * (raw.at(r, c, b) - panels.dark[b]) /
                                    (panels.white[b] - panels.dark[b]);
                out.at(r, c, b) = std::clamp(refl, 0.0, 1.05);
            }
        }
    }
    if (!dead.empty()) {
        std::ostringstream list;
        for (std::size_t i = 0; i < dead.size(); ++i) list << (i ? " " : "") << dead[i];
        out.metadata().set_extra("dead_bands", "{" + list.str() + "}");
    }
    return out;
}

double interp_linear(const std::vector<double>& x, const std::vector<double>& y, double xq) {
    if (xq < x.front() || xq > x.back())
        throw Error(ErrorCode::ExtrapolationRequested,
                    std::to_string(xq) + " outside [" + std::to_string(x.front()) + ", " +
                        std::to_string(x.back()) + "]");
    auto it = std::lower_bound(x.begin(), x.end(), xq);
    if (it == x.begin()) return y.front();
    if (it != x.end() && *it == xq) return y[static_cast<std::size_t>(it - x.begin())];
    const std::size_t hi = static_cast<std::size_t>(it - x.begin());
    const std::size_t lo = hi - 1;
    const double t = (xq - x[lo]) / (x[hi] - x[lo]);
    return y[lo] + t * (y[hi] - y[lo]);
}

HyperCube resample_wavelengths(const HyperCube& cube, const SpectralAxis& target_axis) {
    const auto& src = cube.axis().wavelengths;
    const auto& dst = target_axis.wavelengths;
    if (src.size() < 2)
        throw Error(ErrorCode::DegenerateInput, "source axis needs at least two bands");
    for (double w : dst)
        if (w < src.front() || w > src.back())
            throw Error(ErrorCode::ExtrapolationRequested,
                        "target " + std::to_string(w) + " nm outside source range");

    HyperCube out(cube.height(), cube.width(), dst.size(), cube.quantity(), target_axis);
    out.metadata() = cube.metadata();
    std::vector<double> spectrum(src.size());
    for (std::size_t r = 0; r < cube.height(); ++r) {
        for (std::size_t c = 0; c < cube.width(); ++c) {
            for (std::size_t b = 0; b < src.size(); ++b) spectrum[b] = cube.at(r, c, b);
            for (std::size_t b = 0; b < dst.size(); ++b)
                out.at(r, c, b) = interp_linear(src, spectrum, dst[b]);
        }
    }
    return out;
}

} // namespace hsi
