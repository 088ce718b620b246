// hsikit: batch workflow driver for hyperspectral cube analysis.
// Exit codes: 0 success, 2 input parse failure, 3 shape/config error,
// 4 numerical failure.

#include <CLI11.hpp>
#include <iostream>

#include "commands.hpp"
#include "hsi/errors.hpp"
#include "hsi/parallel.hpp"

namespace {

int exit_code_for(const hsi::Error& error) {
    switch (error.category()) {
    case hsi::ErrorCategory::Parse: return 2;
    case hsi::ErrorCategory::Shape: return 3;
    case hsi::ErrorCategory::Numerical: return 4;
    }
    return 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"hyperspectral cube toolkit: synthesis, calibration, restoration, fusion,\n"
                 "dimensionality reduction, classification, unmixing, evaluation"};
    app.require_subcommand(1);
    app.set_config("--config", "", "INI config file; sections named after subcommands");
    app.allow_config_extras(false);

    hsikit::GlobalArgs global;
    app.add_option("--out", global.out, "output directory for the run")->configurable(true);
    app.add_option("--seed", global.seed, "seed for every random draw")->capture_default_str();
    app.add_option("--threads", global.threads, "worker thread cap for per-pixel loops")
        ->capture_default_str();

    std::string info_path;
    auto* info = app.add_subcommand("info", "print cube dimensions and per-band statistics");
    info->add_option("cube", info_path, "ENVI header path")->required();

    hsikit::SynthArgs synth;
    auto* synth_cmd = app.add_subcommand("synth", "generate a ground-truth scene");
    synth_cmd->add_option("--height", synth.height)->capture_default_str();
    synth_cmd->add_option("--width", synth.width)->capture_default_str();
    synth_cmd->add_option("--bands", synth.bands)->capture_default_str();
    synth_cmd->add_option("--endmembers", synth.endmembers)->capture_default_str();
    synth_cmd->add_option("--snr", synth.snr_db, "noise level in dB (omit for noiseless)");
    synth_cmd->add_flag("--pure,!--no-pure", synth.pure_pixels, "plant exact pure pixels")
        ->capture_default_str();
    synth_cmd->add_option("--cap", synth.max_abundance, "abundance ceiling when impure")
        ->capture_default_str();
    synth_cmd->add_option("--regions", synth.regions, "abundance anchor grid granularity")
        ->capture_default_str();
    synth_cmd->add_option("--noise-ramp", synth.noise_ramp, "band noise max/min sigma ratio")
        ->capture_default_str();

    hsikit::CalibrateArgs calibrate;
    auto* cal_cmd = app.add_subcommand("calibrate", "digital numbers to reflectance via panels");
    cal_cmd->add_option("--input", calibrate.input, "raw cube header")->required();
    cal_cmd->add_option("--dark", calibrate.dark, "dark panel (.hdr cube or .csv spectrum)")
        ->required();
    cal_cmd->add_option("--white", calibrate.white, "white panel (.hdr cube or .csv spectrum)")
        ->required();
    cal_cmd->add_option("--white-reflectance", calibrate.white_reflectance)->capture_default_str();

    hsikit::RestoreArgs restore;
    auto* restore_cmd = app.add_subcommand("restore", "regularized inverse of a degradation");
    restore_cmd->add_option("--input", restore.input, "observed cube header")->required();
    restore_cmd->add_option("--op", restore.op, "identity | mask | blur")->capture_default_str();
    restore_cmd->add_option("--mask", restore.mask_path, "single-band mask cube (mask op)");
    restore_cmd->add_option("--kernel", restore.kernel, "box3|box5|gauss3|gauss5 or csv path")
        ->capture_default_str();
    restore_cmd->add_option("--lambda", restore.lambda, "smoothness weight")->capture_default_str();
    restore_cmd->add_option("--iters", restore.iters)->capture_default_str();
    restore_cmd->add_option("--tol", restore.tol)->capture_default_str();
    restore_cmd->add_option("--step", restore.step, "0 = auto step from power iteration")
        ->capture_default_str();

    hsikit::FuseArgs fuse;
    auto* fuse_cmd = app.add_subcommand("fuse", "sharpen a low-res cube with a high-res pan image");
    fuse_cmd->add_option("--lr", fuse.lr, "low-resolution cube header")->required();
    fuse_cmd->add_option("--pan", fuse.pan, "high-resolution pan/multispectral header")->required();
    fuse_cmd->add_option("--srf", fuse.srf, "spectral response csv (rows = pan bands)")->required();
    fuse_cmd->add_option("--scale", fuse.scale, "spatial decimation factor")->capture_default_str();
    fuse_cmd->add_option("--kernel", fuse.kernel)->capture_default_str();
    fuse_cmd->add_option("--lambda", fuse.lambda)->capture_default_str();
    fuse_cmd->add_option("--iters", fuse.iters)->capture_default_str();
    fuse_cmd->add_option("--tol", fuse.tol)->capture_default_str();

    hsikit::ReduceArgs reduce;
    auto* reduce_cmd = app.add_subcommand("reduce", "pca / mnf / band selection");
    reduce_cmd->add_option("--input", reduce.input, "cube header")->required();
    reduce_cmd->add_option("--method", reduce.method, "pca | mnf | bands")->capture_default_str();
    reduce_cmd->add_option("--k", reduce.k, "components or bands to keep")->capture_default_str();
    reduce_cmd->add_option("--criterion", reduce.criterion, "entropy | mincorr (bands method)")
        ->capture_default_str();

    hsikit::ClassifyArgs classify;
    auto* classify_cmd = app.add_subcommand("classify", "pixel classification and clustering");
    classify_cmd->add_option("--input", classify.input, "feature cube header")->required();
    classify_cmd->add_option("--labels", classify.labels, "ground-truth label cube (supervised)");
    classify_cmd->add_option("--method", classify.method, "knn | lda | kmeans")
        ->capture_default_str();
    classify_cmd->add_option("--neighbors", classify.neighbors, "knn vote size")
        ->capture_default_str();
    classify_cmd->add_option("--metric", classify.metric, "euclidean | sad")->capture_default_str();
    classify_cmd->add_option("--clusters", classify.clusters, "kmeans cluster count")
        ->capture_default_str();
    classify_cmd->add_option("--train-fraction", classify.train_fraction)->capture_default_str();
    classify_cmd->add_option("--kmeans-iters", classify.kmeans_iters)->capture_default_str();

    hsikit::UnmixArgs unmix;
    auto* unmix_cmd = app.add_subcommand("unmix", "endmember extraction and abundance estimation");
    unmix_cmd->add_option("--input", unmix.input, "cube header")->required();
    unmix_cmd->add_option("--endmembers", unmix.endmembers, "endmember count p")
        ->capture_default_str();
    unmix_cmd->add_option("--method", unmix.method, "vca | nfindr | ppi | nmf")
        ->capture_default_str();
    unmix_cmd->add_option("--abundance", unmix.abundance, "ucls | sto | fcls")
        ->capture_default_str();
    unmix_cmd->add_option("--library", unmix.library, "spectral library csv for naming");
    unmix_cmd->add_option("--skewers", unmix.skewers, "ppi projection count")
        ->capture_default_str();
    unmix_cmd->add_option("--threshold", unmix.threshold, "ppi hit threshold")
        ->capture_default_str();
    unmix_cmd->add_option("--nmf-iters", unmix.nmf_iters)->capture_default_str();
    unmix_cmd->add_option("--nmf-tol", unmix.nmf_tol)->capture_default_str();
    unmix_cmd->add_option("--nmf-init", unmix.nmf_init, "vca | random")->capture_default_str();

    hsikit::EvalArgs eval;
    auto* eval_cmd = app.add_subcommand("eval", "score predictions against a ground-truth run");
    eval_cmd->add_option("--truth", eval.truth_dir, "ground-truth directory (synth output)")
        ->required();
    eval_cmd->add_option("--pred", eval.pred_dir, "prediction directory")->required();

    // global flags may appear after the subcommand name
    for (CLI::App* sub : app.get_subcommands(nullptr)) sub->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return (app.exit(e) == 0) ? 0 : 3;
    }

    hsi::set_max_threads(global.threads);

    const bool needs_out = !info->parsed();
    if (needs_out && global.out.empty()) {
        std::cerr << "error: --out <dir> is required for this command\n";
        return 3;
    }

    try {
        if (info->parsed()) return hsikit::cmd_info(info_path);
        if (synth_cmd->parsed()) return hsikit::cmd_synth(synth, global);
        if (cal_cmd->parsed()) return hsikit::cmd_calibrate(calibrate, global);
        if (restore_cmd->parsed()) return hsikit::cmd_restore(restore, global);
        if (fuse_cmd->parsed()) return hsikit::cmd_fuse(fuse, global);
        if (reduce_cmd->parsed()) return hsikit::cmd_reduce(reduce, global);
        if (classify_cmd->parsed()) return hsikit::cmd_classify(classify, global);
        if (unmix_cmd->parsed()) return hsikit::cmd_unmix(unmix, global);
        if (eval_cmd->parsed()) return hsikit::cmd_eval(eval, global);
    } catch (const hsi::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_code_for(e);
    } catch (const std::exception& e) {
        std::cerr << "unexpected error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
