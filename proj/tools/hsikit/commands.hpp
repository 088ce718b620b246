#pragma once

#include <cstdint>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

namespace hsikit {

struct GlobalArgs {
    std::string out;
    std::uint64_t seed = 0;
    unsigned threads = 1;
};

// "key = value" lines echoed into the manifest
template <typename T>
std::string kv(const std::string& key, const T& value) {
    std::ostringstream out;
    out.precision(17);
    out << key << " = " << value;
    return out.str();
}

inline std::vector<std::string> global_config_lines(const GlobalArgs& global) {
    return {kv("out", global.out), kv("seed", global.seed), kv("threads", global.threads)};
}

struct SynthArgs {
    std::size_t height = 64;
    std::size_t width = 64;
    std::size_t bands = 50;
    std::size_t endmembers = 4;
    double snr_db = std::numeric_limits<double>::infinity();
    bool pure_pixels = true;
    double max_abundance = 0.8;
    std::size_t regions = 4;
    double noise_ramp = 3.0;
};

struct CalibrateArgs {
    std::string input;
    std::string dark;
    std::string white;
    double white_reflectance = 1.0;
};

struct RestoreArgs {
    std::string input;
    std::string op = "identity"; // identity | mask | blur
    std::string mask_path;
    std::string kernel = "box3"; // named kernel or csv path
    double lambda = 0.05;
    int iters = 2000;
    double tol = 1e-10;
    double step = 0.0;
};

struct FuseArgs {
    std::string lr;
    std::string pan;
    std::string srf;
    std::size_t scale = 2;
    std::string kernel = "box3";
    double lambda = 1e-3;
    int iters = 5000;
    double tol = 1e-12;
};

struct ReduceArgs {
    std::string input;
    std::string method = "pca"; // pca | mnf | bands
    std::size_t k = 5;
    std::string criterion = "mincorr"; // entropy | mincorr
};

struct ClassifyArgs {
    std::string input;
    std::string labels;
    std::string method = "knn"; // knn | lda | kmeans
    std::size_t neighbors = 15;
    std::string metric = "euclidean"; // euclidean | sad
    std::size_t clusters = 4;
    double train_fraction = 0.1;
    int kmeans_iters = 100;
};

struct UnmixArgs {
    std::string input;
    std::size_t endmembers = 4;
    std::string method = "vca"; // vca | nfindr | ppi | nmf
    std::string abundance = "fcls"; // ucls | sto | fcls
    std::string library;
    std::size_t skewers = 2000;
    std::size_t threshold = 5;
    int nmf_iters = 300;
    double nmf_tol = 1e-10;
    std::string nmf_init = "vca"; // vca | random
};

struct EvalArgs {
    std::string truth_dir;
    std::string pred_dir;
};

int cmd_info(const std::string& cube_path);
int cmd_synth(const SynthArgs& args, const GlobalArgs& global);
int cmd_calibrate(const CalibrateArgs& args, const GlobalArgs& global);
int cmd_restore(const RestoreArgs& args, const GlobalArgs& global);
int cmd_fuse(const FuseArgs& args, const GlobalArgs& global);
int cmd_reduce(const ReduceArgs& args, const GlobalArgs& global);
int cmd_classify(const ClassifyArgs& args, const GlobalArgs& global);
int cmd_unmix(const UnmixArgs& args, const GlobalArgs& global);
int cmd_eval(const EvalArgs& args, const GlobalArgs& global);

} // namespace hsikit
