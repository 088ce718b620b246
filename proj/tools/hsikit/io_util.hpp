#pragma once

#include <filesystem>
#include <string>

#include "commands.hpp"
#include "context.hpp"
#include "hsi/classify.hpp"
#include "hsi/cube.hpp"
#include "hsi/envi.hpp"

namespace hsikit {

// write_envi emits <stem>.hdr + <stem>.img; registers both with the context
inline void save_cube(RunContext& ctx, const hsi::HyperCube& cube, const std::string& stem,
                      hsi::Interleave interleave = hsi::Interleave::BSQ, int data_type = 4) {
    const std::filesystem::path base = ctx.path(stem);
    hsi::write_envi(cube, base, interleave, data_type);
    ctx.record(base.string() + ".hdr");
    ctx.record(base.string() + ".img");
}

inline hsi::HyperCube load_cube(const std::string& path) { return hsi::read_envi(path); }

inline void save_labels(RunContext& ctx, const hsi::LabelMap& labels, const std::string& stem) {
    // int16 carrier keeps label planes integral on disk
    save_cube(ctx, labels.to_cube(), stem, hsi::Interleave::BSQ, 2);
}

inline hsi::LabelMap load_labels(const std::string& path) {
    return hsi::LabelMap::from_cube(hsi::read_envi(path));
}

} // namespace hsikit
