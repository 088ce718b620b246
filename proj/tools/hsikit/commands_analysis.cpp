// reduce / classify / unmix / eval: analysis-side commands

#include <cmath>
#include <fstream>

#include "commands.hpp"
#include "context.hpp"
#include "hsi/classify.hpp"
#include "hsi/csv.hpp"
#include "hsi/dimred.hpp"
#include "hsi/pgm.hpp"
#include "hsi/restore.hpp"
#include "hsi/synth.hpp"
#include "hsi/unmix.hpp"
#include "io_util.hpp"

namespace hsikit {

using namespace hsi;

namespace {

SpectralAxis component_axis(std::size_t k) {
    SpectralAxis axis;
    axis.wavelengths.resize(k);
    for (std::size_t i = 0; i < k; ++i) axis.wavelengths[i] = static_cast<double>(i + 1);
    return axis;
}

Matrix columns_at(const Matrix& data, const std::vector<std::size_t>& indices) {
    Matrix out(data.rows(), static_cast<Eigen::Index>(indices.size()));
    for (std::size_t i = 0; i < indices.size(); ++i)
        out.col(static_cast<Eigen::Index>(i)) = data.col(static_cast<Eigen::Index>(indices[i]));
    return out;
}

} // namespace

int cmd_reduce(const ReduceArgs& args, const GlobalArgs& global) {
    HyperCube cube = load_cube(args.input);
    Matrix x = to_matrix(cube);

    RunContext ctx(global.out);
    if (args.method == "pca" || args.method == "mnf") {
        LinearProjection proj =
            (args.method == "pca")
                ? pca_fit(x, args.k)
                : mnf_fit(x, estimate_noise_covariance(cube), args.k);
        Matrix z = project(proj, x);
        HyperCube reduced = from_matrix(z, cube.height(), cube.width(), Quantity::DigitalNumber,
                                        component_axis(args.k));
        save_cube(ctx, reduced, "reduced", Interleave::BSQ, 5);

        std::ofstream out(ctx.path("projection.json"));
        out << proj.to_json() << "\n";
        out.close();
        ctx.record(ctx.path("projection.json"));

        ordered_json summary;
        summary["method"] = args.method;
        summary["k"] = args.k;
        summary["scores"] = std::vector<double>(proj.scores.data(),
                                                proj.scores.data() + proj.scores.size());
        ctx.write_json("reduce.json", summary);
    } else if (args.method == "bands") {
        BandCriterion criterion;
        if (args.criterion == "entropy") criterion = BandCriterion::MaxEntropy;
        else if (args.criterion == "mincorr") criterion = BandCriterion::MinCorrelation;
        else throw Error(ErrorCode::BadConfig, "unknown criterion \"" + args.criterion + "\"");

        BandSubset subset = select_bands(x, args.k, criterion);
        SpectralAxis axis;
        for (std::size_t b : subset.indices) axis.wavelengths.push_back(cube.axis().wavelengths[b]);
        HyperCube reduced(cube.height(), cube.width(), subset.indices.size(), cube.quantity(), axis);
        for (std::size_t r = 0; r < cube.height(); ++r)
            for (std::size_t c = 0; c < cube.width(); ++c)
                for (std::size_t i = 0; i < subset.indices.size(); ++i)
                    reduced.at(r, c, i) = cube.at(r, c, subset.indices[i]);
        save_cube(ctx, reduced, "reduced", Interleave::BSQ, 5);

        ordered_json summary;
        summary["method"] = "bands";
        summary["criterion"] = args.criterion;
        summary["indices"] = subset.indices;
        summary["score"] = subset.score;
        ctx.write_json("bands.json", summary);
    } else {
        throw Error(ErrorCode::BadConfig, "unknown method \"" + args.method + "\"");
    }
    write_band_quicklook(ctx.path("quicklook_band0.pgm"), load_cube(ctx.path("reduced.hdr")), 0);
    ctx.record(ctx.path("quicklook_band0.pgm"));
    auto lines = global_config_lines(global);
    lines.push_back(kv("input", args.input));
    lines.push_back(kv("method", args.method));
    lines.push_back(kv("k", args.k));
    if (args.method == "bands") lines.push_back(kv("criterion", args.criterion));
    ctx.write_manifest("reduce", lines);
    return 0;
}

int cmd_classify(const ClassifyArgs& args, const GlobalArgs& global) {
    HyperCube cube = load_cube(args.input);
    Matrix x = to_matrix(cube);
    RunContext ctx(global.out);

    LabelMap predicted;
    predicted.height = cube.height();
    predicted.width = cube.width();
    predicted.labels.assign(cube.pixels(), 0);
    ordered_json metrics;
    metrics["method"] = args.method;

    if (args.method == "kmeans") {
        KMeansResult result = kmeans(x, args.clusters, args.kmeans_iters, global.seed);
        for (std::size_t i = 0; i < predicted.labels.size(); ++i)
            predicted.labels[i] = result.assignments[i] + 1;
        metrics["clusters"] = args.clusters;
        metrics["inertia"] = result.inertia;
        metrics["iterations"] = result.iterations;
    } else {
        if (args.labels.empty())
            throw Error(ErrorCode::BadConfig, "--labels is required for supervised methods");
        LabelMap truth = load_labels(args.labels);
        if (truth.height != cube.height() || truth.width != cube.width())
            throw Error(ErrorCode::ShapeMismatch, "label map dims disagree with the cube");

        SplitResult sp = split(truth, SplitSpec{args.train_fraction, global.seed, true});
        Matrix train_x = columns_at(x, sp.train);
        std::vector<int> train_y;
        train_y.reserve(sp.train.size());
        for (std::size_t i : sp.train) train_y.push_back(truth.labels[i]);

        std::vector<int> all_pred;
        if (args.method == "knn") {
            DistanceMetric metric;
            if (args.metric == "euclidean") metric = DistanceMetric::Euclidean;
            else if (args.metric == "sad") metric = DistanceMetric::SpectralAngle;
            else throw Error(ErrorCode::BadConfig, "unknown metric \"" + args.metric + "\"");
            all_pred = knn_classify(train_x, train_y, x, args.neighbors, metric);
            metrics["neighbors"] = args.neighbors;
            metrics["metric"] = args.metric;
        } else if (args.method == "lda") {
            LdaModel model = lda_fit(train_x, train_y);
            all_pred = lda_predict(model, x);
        } else {
            throw Error(ErrorCode::BadConfig, "unknown method \"" + args.method + "\"");
        }
        predicted.labels = all_pred;

        // score on the held-out pixels only
        std::vector<int> test_pred, test_truth;
        for (std::size_t i : sp.test) {
            test_pred.push_back(all_pred[i]);
            test_truth.push_back(truth.labels[i]);
        }
        const int classes = truth.num_classes();
        metrics["train_fraction"] = args.train_fraction;
        metrics["train_count"] = sp.train.size();
        metrics["test_count"] = sp.test.size();
        metrics["oa"] = overall_accuracy(test_pred, test_truth);
        auto confusion = confusion_matrix(test_pred, test_truth, classes);
        metrics["per_class"] = per_class_accuracy(confusion);
        metrics["confusion"] = confusion;
    }

    save_labels(ctx, predicted, "predicted");
    ctx.write_json("metrics.json", metrics);
    write_label_quicklook(ctx.path("quicklook_predicted.pgm"), predicted.labels, predicted.height,
                          predicted.width, predicted.num_classes());
    ctx.record(ctx.path("quicklook_predicted.pgm"));
    auto lines = global_config_lines(global);
    lines.push_back(kv("input", args.input));
    if (!args.labels.empty()) lines.push_back(kv("labels", args.labels));
    lines.push_back(kv("method", args.method));
    if (args.method == "knn") {
        lines.push_back(kv("neighbors", args.neighbors));
        lines.push_back(kv("metric", args.metric));
    }
    if (args.method == "kmeans") {
        lines.push_back(kv("clusters", args.clusters));
        lines.push_back(kv("kmeans-iters", args.kmeans_iters));
    } else {
        lines.push_back(kv("train-fraction", args.train_fraction));
    }
    ctx.write_manifest("classify", lines);
    return 0;
}

int cmd_unmix(const UnmixArgs& args, const GlobalArgs& global) {
    HyperCube cube = load_cube(args.input);
    Matrix x = to_matrix(cube);
    const std::size_t p = args.endmembers;

    RunContext ctx(global.out);
    ordered_json report;
    report["method"] = args.method;
    report["endmembers"] = p;

    EndmemberSet endmembers;
    AbundanceMaps abundances;
    bool have_abundances = false;

    if (args.method == "vca") {
        endmembers = vca(x, p, global.seed);
    } else if (args.method == "nfindr") {
        endmembers = nfindr(x, p, global.seed);
    } else if (args.method == "ppi") {
        std::vector<std::size_t> counts;
        auto hits = ppi(x, args.skewers, global.seed, args.threshold, &counts);
        if (hits.size() < p)
            throw Error(ErrorCode::BadConfig,
                        "ppi found " + std::to_string(hits.size()) + " candidates at threshold " +
                            std::to_string(args.threshold) + ", need " + std::to_string(p));
        hits.resize(p);
        endmembers.spectra = columns_at(x, hits);
        report["candidate_indices"] = hits;
    } else if (args.method == "nmf") {
        NmfInit init;
        if (args.nmf_init == "vca") init = NmfInit::VCA;
        else if (args.nmf_init == "random") init = NmfInit::Random;
        else throw Error(ErrorCode::BadConfig, "unknown nmf init \"" + args.nmf_init + "\"");
        NmfResult result = nmf_unmix(x, p, init, global.seed, args.nmf_iters, args.nmf_tol);
        endmembers = result.endmembers;
        abundances = result.abundances;
        have_abundances = true;
        report["objective_trace"] = result.objective_trace;
        report["converged"] = result.converged;
        if (!result.warning.empty()) report["warning"] = result.warning;
    } else {
        throw Error(ErrorCode::BadConfig, "unknown method \"" + args.method + "\"");
    }

    if (!have_abundances) {
        FclsReport fcls_report;
        if (args.abundance == "ucls") {
            abundances = ucls(endmembers, x);
        } else if (args.abundance == "sto") {
            abundances = fcls(endmembers, x, ConstraintMode::SumToOne, &fcls_report);
        } else if (args.abundance == "fcls") {
            abundances = fcls(endmembers, x, ConstraintMode::Full, &fcls_report);
        } else {
            throw Error(ErrorCode::BadConfig, "unknown abundance mode \"" + args.abundance + "\"");
        }
        report["abundance_mode"] = args.abundance;
        if (fcls_report.stalled_pixels > 0) report["stalled_pixels"] = fcls_report.stalled_pixels;
    } else {
        report["abundance_mode"] = "nmf";
    }

    if (endmembers.names.empty()) {
        endmembers.names.resize(p);
        for (std::size_t i = 0; i < p; ++i) endmembers.names[i] = "em_" + std::to_string(i + 1);
    }

    write_spectra_csv(ctx.path("endmembers.csv"), cube.axis().wavelengths, endmembers.names,
                      endmembers.spectra);
    ctx.record(ctx.path("endmembers.csv"));

    save_cube(ctx,
              from_matrix(abundances.coefficients, cube.height(), cube.width(),
                          Quantity::DigitalNumber, component_axis(p)),
              "abundances", Interleave::BSQ, 5);

    if (!args.library.empty()) {
        SpectraTable table = read_spectra_csv(args.library);
        SpectralLibrary library;
        for (std::size_t i = 0; i < table.names.size(); ++i) {
            SpectralLibrary::Entry entry;
            entry.name = table.names[i];
            entry.axis.wavelengths = table.wavelengths;
            entry.values.assign(table.spectra.col(static_cast<Eigen::Index>(i)).data(),
                                table.spectra.col(static_cast<Eigen::Index>(i)).data() +
                                    table.spectra.rows());
            library.entries.push_back(std::move(entry));
        }
        auto matches = library_match(endmembers, cube.axis(), library);
        ordered_json match_json = ordered_json::array();
        for (std::size_t i = 0; i < matches.size(); ++i) {
            ordered_json entry;
            entry["endmember"] = endmembers.names[i];
            entry["best"] = matches[i].best().first;
            entry["score"] = matches[i].best().second;
            ordered_json ranking = ordered_json::array();
            for (const auto& [name, score] : matches[i].ranking)
                ranking.push_back({{"name", name}, {"score", score}});
            entry["ranking"] = ranking;
            match_json.push_back(entry);
        }
        report["library_matches"] = match_json;
    }

    ctx.write_json("report.json", report);
    for (std::size_t i = 0; i < p; ++i) {
        std::vector<double> plane(cube.pixels());
        for (std::size_t j = 0; j < cube.pixels(); ++j)
            plane[j] = abundances.coefficients(static_cast<Eigen::Index>(i),
                                               static_cast<Eigen::Index>(j));
        const std::string name = "quicklook_ab" + std::to_string(i + 1) + ".pgm";
        write_pgm_stretched(ctx.path(name), plane, cube.height(), cube.width());
        ctx.record(ctx.path(name));
    }
    auto lines = global_config_lines(global);
    lines.push_back(kv("input", args.input));
    lines.push_back(kv("endmembers", args.endmembers));
    lines.push_back(kv("method", args.method));
    lines.push_back(kv("abundance", args.abundance));
    if (!args.library.empty()) lines.push_back(kv("library", args.library));
    if (args.method == "ppi") {
        lines.push_back(kv("skewers", args.skewers));
        lines.push_back(kv("threshold", args.threshold));
    }
    if (args.method == "nmf") {
        lines.push_back(kv("nmf-iters", args.nmf_iters));
        lines.push_back(kv("nmf-tol", args.nmf_tol));
        lines.push_back(kv("nmf-init", args.nmf_init));
    }
    ctx.write_manifest("unmix", lines);
    return 0;
}

int cmd_eval(const EvalArgs& args, const GlobalArgs& global) {
    namespace fs = std::filesystem;
    const fs::path truth_dir(args.truth_dir);
    const fs::path pred_dir(args.pred_dir);

    RunContext ctx(global.out);
    ordered_json metrics;

    // classification accuracy
    if (fs::exists(truth_dir / "labels.hdr") && fs::exists(pred_dir / "predicted.hdr")) {
        LabelMap truth = load_labels((truth_dir / "labels.hdr").string());
        LabelMap predicted = load_labels((pred_dir / "predicted.hdr").string());
        const int classes = truth.num_classes();
        metrics["oa"] = overall_accuracy(predicted.labels, truth.labels);
        auto confusion = confusion_matrix(predicted.labels, truth.labels, classes);
        metrics["per_class"] = per_class_accuracy(confusion);
    }

    // endmember recovery, permutation-invariant
    bool have_assignment = false;
    EndmemberAssignment assignment;
    if (fs::exists(truth_dir / "endmembers.csv") && fs::exists(pred_dir / "endmembers.csv")) {
        SpectraTable truth_table = read_spectra_csv(truth_dir / "endmembers.csv");
        SpectraTable pred_table = read_spectra_csv(pred_dir / "endmembers.csv");
        if (truth_table.spectra.rows() != pred_table.spectra.rows())
            throw Error(ErrorCode::ShapeMismatch, "endmember tables disagree on band count");
        assignment = match_endmembers(truth_table.spectra, pred_table.spectra);
        have_assignment = true;
        metrics["sad_per_endmember"] = assignment.sad_per_reference;
        metrics["sad_mean"] = assignment.mean_sad;
        metrics["sad_max"] = assignment.max_sad;
    }

    // abundance error under the same endmember alignment
    if (fs::exists(truth_dir / "abundances.hdr") && fs::exists(pred_dir / "abundances.hdr")) {
        Matrix truth_ab = to_matrix(load_cube((truth_dir / "abundances.hdr").string()));
        Matrix pred_ab = to_matrix(load_cube((pred_dir / "abundances.hdr").string()));
        if (truth_ab.cols() != pred_ab.cols())
            throw Error(ErrorCode::ShapeMismatch, "abundance maps disagree on pixel count");
        if (truth_ab.rows() != pred_ab.rows())
            throw Error(ErrorCode::ShapeMismatch, "abundance maps disagree on endmember count");
        Matrix aligned = pred_ab;
        if (have_assignment)
            for (Eigen::Index i = 0; i < truth_ab.rows(); ++i)
                aligned.row(i) = pred_ab.row(static_cast<Eigen::Index>(
                    assignment.estimated_for_reference[static_cast<std::size_t>(i)]));
        const double rmse = std::sqrt((aligned - truth_ab).squaredNorm() /
                                      static_cast<double>(truth_ab.size()));
        metrics["abundance_rmse"] = rmse;
    }

    // reconstruction fidelity against the clean scene
    if (fs::exists(truth_dir / "clean.hdr")) {
        for (const char* candidate : {"restored.hdr", "fused.hdr", "reflectance.hdr", "scene.hdr"}) {
            if (!fs::exists(pred_dir / candidate)) continue;
            HyperCube clean = load_cube((truth_dir / "clean.hdr").string());
            HyperCube test = load_cube((pred_dir / candidate).string());
            if (!clean.same_shape(test)) continue;
            double peak = 0.0;
            for (double v : clean.values()) peak = std::max(peak, std::abs(v));
            const double value = psnr(clean, test, peak);
            metrics["psnr"] = std::isinf(value) ? ordered_json(nullptr) : ordered_json(value);
            metrics["psnr_against"] = candidate;
            break;
        }
    }

    if (metrics.empty())
        throw Error(ErrorCode::BadConfig,
                    "nothing to evaluate: no matching artifact pairs between " +
                        args.truth_dir + " and " + args.pred_dir);

    ctx.write_json("metrics.json", metrics);
    auto lines = global_config_lines(global);
    lines.push_back(kv("truth", args.truth_dir));
    lines.push_back(kv("pred", args.pred_dir));
    ctx.write_manifest("eval", lines);
    return 0;
}

} // namespace hsikit
