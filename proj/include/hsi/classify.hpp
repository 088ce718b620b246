#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hsi/cube.hpp"

namespace hsi {

// Per-pixel class annotations. 0 is the unlabeled sentinel; classes run
// 1..C. Stored row-major like cube pixels.
struct LabelMap {
    std::size_t height = 0;
    std::size_t width = 0;
    std::vector<int> labels;
    std::vector<std::string> class_names; // optional, index c-1 names class c

    int num_classes() const;
    std::size_t labeled_count() const;

    // single-band integer ENVI cube carrier
    HyperCube to_cube() const;
    static LabelMap from_cube(const HyperCube& cube);
};

struct SplitSpec {
    double train_fraction = 0.1; // in (0, 1]
    std::uint64_t seed = 0;
    bool stratified = true;
};

struct SplitResult {
    std::vector<std::size_t> train; // pixel indices, sorted
    std::vector<std::size_t> test;
};

// Splits the labeled pixels into disjoint, exhaustive train/test sets,
// deterministic per seed. Stratified mode samples each class separately and
// keeps at least one training pixel per class.
SplitResult split(const LabelMap& labels, const SplitSpec& spec);

enum class DistanceMetric { Euclidean, SpectralAngle };

// Brute-force k-nearest-neighbour vote. Ties break by smaller summed
// distance, then lower class id.
std::vector<int> knn_classify(const Matrix& train_x, const std::vector<int>& train_y,
                              const Matrix& test_x, std::size_t k,
                              DistanceMetric metric = DistanceMetric::Euclidean);

// Gaussian equal-covariance discriminant with pooled within-class
// covariance, regularized by eps I (eps = 1e-6 trace / f).
struct LdaModel {
    std::vector<int> class_ids;
    Matrix weights;      // f x C, column c = Sigma^-1 mu_c
    Vector offsets;      // C, -0.5 mu_c^T Sigma^-1 mu_c + log prior_c
};
LdaModel lda_fit(const Matrix& train_x, const std::vector<int>& train_y);
std::vector<int> lda_predict(const LdaModel& model, const Matrix& data);

struct KMeansResult {
    std::vector<int> assignments; // 0-based cluster ids
    Matrix centroids;             // f x K
    double inertia = 0.0;
    int iterations = 0;
    std::vector<double> inertia_trace;
};

// Lloyd iterations from a seeded k-means++ init; empty clusters are
// reseeded to the point farthest from its centroid.
KMeansResult kmeans(const Matrix& data, std::size_t k, int max_iters, std::uint64_t seed);

// Metrics over labeled entries only (truth 0 ignored).
double overall_accuracy(const std::vector<int>& predicted, const std::vector<int>& truth);
std::vector<std::vector<std::size_t>> confusion_matrix(const std::vector<int>& predicted,
                                                       const std::vector<int>& truth,
                                                       int num_classes);
std::vector<double> per_class_accuracy(const std::vector<std::vector<std::size_t>>& confusion);

} // namespace hsi
