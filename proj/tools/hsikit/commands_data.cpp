// info / synth / calibrate: acquisition-side commands

#include <cmath>
#include <cstdio>
#include <iostream>

#include "commands.hpp"
#include "context.hpp"
#include "hsi/calib.hpp"
#include "hsi/csv.hpp"
#include "hsi/pgm.hpp"
#include "hsi/synth.hpp"
#include "io_util.hpp"

namespace hsikit {

using namespace hsi;

int cmd_info(const std::string& cube_path) {
    HyperCube cube = load_cube(cube_path);
    std::printf("%zu x %zu pixels, %zu bands\n", cube.height(), cube.width(), cube.bands());
    std::printf("wavelengths: %.6g - %.6g nm\n", cube.axis().wavelengths.front(),
                cube.axis().wavelengths.back());
    std::printf("quantity: %s\n", to_string(cube.quantity()));
    if (!cube.metadata().sensor_name.empty())
        std::printf("sensor: %s\n", cube.metadata().sensor_name.c_str());
    std::printf("%-6s %-12s %-12s %-12s %-12s\n", "band", "wavelength", "min", "mean", "max");
    for (std::size_t b = 0; b < cube.bands(); ++b) {
        double lo = cube.at(0, 0, b), hi = lo, sum = 0.0;
        for (std::size_t r = 0; r < cube.height(); ++r)
            for (std::size_t c = 0; c < cube.width(); ++c) {
                const double v = cube.at(r, c, b);
                lo = std::min(lo, v);
                hi = std::max(hi, v);
                sum += v;
            }
        std::printf("%-6zu %-12.6g %-12.6g %-12.6g %-12.6g\n", b, cube.axis().wavelengths[b], lo,
                    sum / static_cast<double>(cube.pixels()), hi);
    }
    return 0;
}

int cmd_synth(const SynthArgs& args, const GlobalArgs& global) {
    SceneSpec spec;
    spec.height = args.height;
    spec.width = args.width;
    spec.bands = args.bands;
    spec.endmember_count = args.endmembers;
    spec.seed = global.seed;
    spec.pure_pixels = args.pure_pixels;
    spec.max_abundance = args.max_abundance;
    spec.snr_db = args.snr_db;
    spec.class_regions = args.regions;
    spec.band_noise_ramp = args.noise_ramp;
    spec.validate();

    RunContext ctx(global.out);
    SceneResult scene = generate_scene(spec);

    save_cube(ctx, scene.noisy_cube, "scene");
    save_cube(ctx, scene.truth.clean_cube, "clean");
    save_labels(ctx, scene.truth.labels, "labels");
    save_cube(ctx,
              from_matrix(scene.truth.abundances.coefficients, spec.height, spec.width,
                          Quantity::DigitalNumber),
              "abundances", Interleave::BSQ, 5);

    write_spectra_csv(ctx.path("endmembers.csv"), scene.truth.clean_cube.axis().wavelengths,
                      scene.truth.endmembers.names, scene.truth.endmembers.spectra);
    ctx.record(ctx.path("endmembers.csv"));

    ordered_json echo;
    echo["height"] = spec.height;
    echo["width"] = spec.width;
    echo["bands"] = spec.bands;
    echo["endmembers"] = spec.endmember_count;
    echo["seed"] = spec.seed;
    echo["pure_pixels"] = spec.pure_pixels;
    echo["max_abundance"] = spec.max_abundance;
    echo["snr_db"] = std::isfinite(spec.snr_db) ? ordered_json(spec.snr_db) : ordered_json(nullptr);
    echo["class_regions"] = spec.class_regions;
    echo["band_noise_ramp"] = spec.band_noise_ramp;
    ctx.write_json("scene.json", echo);

    write_band_quicklook(ctx.path("quicklook_band0.pgm"), scene.noisy_cube, 0);
    ctx.record(ctx.path("quicklook_band0.pgm"));
    write_label_quicklook(ctx.path("quicklook_labels.pgm"), scene.truth.labels.labels, spec.height,
                          spec.width, scene.truth.labels.num_classes());
    ctx.record(ctx.path("quicklook_labels.pgm"));

    auto lines = global_config_lines(global);
    lines.push_back(kv("height", spec.height));
    lines.push_back(kv("width", spec.width));
    lines.push_back(kv("bands", spec.bands));
    lines.push_back(kv("endmembers", spec.endmember_count));
    lines.push_back(kv("snr", spec.snr_db));
    lines.push_back(kv("pure", spec.pure_pixels ? "true" : "false"));
    lines.push_back(kv("cap", spec.max_abundance));
    lines.push_back(kv("regions", spec.class_regions));
    lines.push_back(kv("noise-ramp", spec.band_noise_ramp));
    ctx.write_manifest("synth", lines);
    return 0;
}

namespace {

// panels arrive as ENVI cubes or single-spectrum csv files
std::vector<double> load_panel(const std::string& path, std::size_t bands) {
    const std::filesystem::path p(path);
    if (p.extension() == ".csv") {
        SpectrumCsv csv = read_spectrum_csv(p);
        if (csv.values.size() != bands)
            throw Error(ErrorCode::BandCountMismatch,
                        path + " holds " + std::to_string(csv.values.size()) + " bands, cube has " +
                            std::to_string(bands));
        return csv.values;
    }
    HyperCube cube = load_cube(path);
    if (cube.bands() != bands)
        throw Error(ErrorCode::BandCountMismatch,
                    path + " holds " + std::to_string(cube.bands()) + " bands, cube has " +
                        std::to_string(bands));
    std::vector<double> mean(bands, 0.0);
    for (std::size_t r = 0; r < cube.height(); ++r)
        for (std::size_t c = 0; c < cube.width(); ++c)
            for (std::size_t b = 0; b < bands; ++b) mean[b] += cube.at(r, c, b);
    for (auto& m : mean) m /= static_cast<double>(cube.pixels());
    return mean;
}

} // namespace

int cmd_calibrate(const CalibrateArgs& args, const GlobalArgs& global) {
    HyperCube raw = load_cube(args.input);
    auto panels = ReferencePanels::from_vectors(load_panel(args.dark, raw.bands()),
                                                load_panel(args.white, raw.bands()),
                                                args.white_reflectance);
    RunContext ctx(global.out);
    HyperCube reflectance = calibrate_reflectance(raw, panels);
    save_cube(ctx, reflectance, "reflectance");
    write_band_quicklook(ctx.path("quicklook_band0.pgm"), reflectance, 0);
    ctx.record(ctx.path("quicklook_band0.pgm"));
    auto lines = global_config_lines(global);
    lines.push_back(kv("input", args.input));
    lines.push_back(kv("dark", args.dark));
    lines.push_back(kv("white", args.white));
    lines.push_back(kv("white-reflectance", args.white_reflectance));
    ctx.write_manifest("calibrate", lines);
    return 0;
}

} // namespace hsikit
