#include "hsi/classify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>

#include "hsi/parallel.hpp"
#include "hsi/rng.hpp"

namespace hsi {

namespace {

double sq_euclidean(const Matrix& a, Eigen::Index ca, const Matrix& b, Eigen::Index cb) {
    return (a.col(ca) - b.col(cb)).squaredNorm();
}

double spectral_angle(const Matrix& a, Eigen::Index ca, const Matrix& b, Eigen::Index cb) {
    const double na = a.col(ca).norm();
    const double nb = b.col(cb).norm();
    if (na == 0.0 || nb == 0.0) return M_PI / 2.0;
    const double cosv = std::clamp(a.col(ca).dot(b.col(cb)) / (na * nb), -1.0, 1.0);
    return std::acos(cosv);
}

} // namespace

int LabelMap::num_classes() const {
    int c = 0;
    for (int v : labels) c = std::max(c, v);
    return c;
}

std::size_t LabelMap::labeled_count() const {
    std::size_t n = 0;
    for (int v : labels) n += (v > 0);
    return n;
}

HyperCube LabelMap::to_cube() const {
    HyperCube cube(height, width, 1, Quantity::DigitalNumber);
    for (std::size_t i = 0; i < labels.size(); ++i)
        cube.values()[i] = static_cast<double>(labels[i]);
    cube.metadata().set_extra("label map", "true");
    return cube;
}

LabelMap LabelMap::from_cube(const HyperCube& cube) {
    if (cube.bands() != 1)
        throw Error(ErrorCode::ShapeMismatch, "label map carrier must be single-band");
    LabelMap lm;
    lm.height = cube.height();
    lm.width = cube.width();
    lm.labels.resize(cube.pixels());
    for (std::size_t i = 0; i < lm.labels.size(); ++i) {
        const double v = cube.values()[i];
        const int label = static_cast<int>(std::llround(v));
        if (label < 0 || std::abs(v - label) > 1e-9)
            throw Error(ErrorCode::ParseError, "label plane holds non-integer value");
        lm.labels[i] = label;
    }
    return lm;
}

SplitResult split(const LabelMap& labels, const SplitSpec& spec) {
    if (!(spec.train_fraction > 0.0 && spec.train_fraction <= 1.0))
        throw Error(ErrorCode::BadConfig, "train_fraction must lie in (0, 1]");

    std::map<int, std::vector<std::size_t>> by_class;
    for (std::size_t i = 0; i < labels.labels.size(); ++i)
        if (labels.labels[i] > 0) by_class[labels.labels[i]].push_back(i);
    if (by_class.empty()) throw Error(ErrorCode::EmptyClass, "no labeled pixels");

    Rng rng(spec.seed);
    SplitResult result;
    if (spec.stratified) {
        for (auto& [cls, idx] : by_class) {
            rng.shuffle(idx);
            std::size_t take = static_cast<std::size_t>(
                std::llround(spec.train_fraction * static_cast<double>(idx.size())));
            take = std::clamp<std::size_t>(take, 1, idx.size());
            result.train.insert(result.train.end(), idx.begin(), idx.begin() + take);
            result.test.insert(result.test.end(), idx.begin() + take, idx.end());
        }
    } else {
        std::vector<std::size_t> all;
        for (const auto& [cls, idx] : by_class) all.insert(all.end(), idx.begin(), idx.end());
        std::sort(all.begin(), all.end());
        rng.shuffle(all);
        std::size_t take = static_cast<std::size_t>(
            std::llround(spec.train_fraction * static_cast<double>(all.size())));
        take = std::clamp<std::size_t>(take, 1, all.size());
        result.train.assign(all.begin(), all.begin() + take);
        result.test.assign(all.begin() + take, all.end());
        // the training side must still cover every class
        std::map<int, std::size_t> seen;
        for (std::size_t i : result.train) seen[labels.labels[i]]++;
        for (const auto& [cls, idx] : by_class)
            if (seen.find(cls) == seen.end())
                throw Error(ErrorCode::EmptyClass,
                            "class " + std::to_string(cls) + " missing from training split");
    }
    std::sort(result.train.begin(), result.train.end());
    std::sort(result.test.begin(), result.test.end());
    return result;
}

std::vector<int> knn_classify(const Matrix& train_x, const std::vector<int>& train_y,
                              const Matrix& test_x, std::size_t k, DistanceMetric metric) {
    const std::size_t m = static_cast<std::size_t>(train_x.cols());
    if (m == 0) throw Error(ErrorCode::EmptyTrainSet, "no training samples");
    if (train_y.size() != m)
        throw Error(ErrorCode::LengthMismatch, "train labels disagree with train matrix");
    if (k < 1 || k > m) throw Error(ErrorCode::KTooLarge, "k must lie in [1, train size]");
    if (train_x.rows() != test_x.rows())
        throw Error(ErrorCode::DimMismatch, "train and test feature dims disagree");

    const std::size_t n = static_cast<std::size_t>(test_x.cols());
    std::vector<int> predicted(n, 0);

    parallel_for(n, [&](std::size_t j) {
        std::vector<std::pair<double, std::size_t>> dist(m);
        for (std::size_t i = 0; i < m; ++i) {
            const double d = (metric == DistanceMetric::Euclidean)
                                 ? sq_euclidean(train_x, static_cast<Eigen::Index>(i), test_x,
                                                static_cast<Eigen::Index>(j))
                                 : spectral_angle(train_x, static_cast<Eigen::Index>(i), test_x,
                                                  static_cast<Eigen::Index>(j));
            dist[i] = {d, i};
        }
        std::partial_sort(dist.begin(), dist.begin() + static_cast<long>(k), dist.end());
        std::map<int, std::pair<std::size_t, double>> votes; // class -> (count, summed distance)
        for (std::size_t i = 0; i < k; ++i) {
            auto& v = votes[train_y[dist[i].second]];
            v.first += 1;
            v.second += dist[i].first;
        }
        int best_class = 0;
        std::size_t best_count = 0;
        double best_sum = std::numeric_limits<double>::infinity();
        for (const auto& [cls, v] : votes) {
            if (v.first > best_count ||
                (v.first == best_count && (v.second < best_sum ||
                                           (v.second == best_sum && cls < best_class)))) {
                best_class = cls;
                best_count = v.first;
                best_sum = v.second;
            }
        }
        predicted[j] = best_class;
    });
    return predicted;
}

LdaModel lda_fit(const Matrix& train_x, const std::vector<int>& train_y) {
    const std::size_t m = static_cast<std::size_t>(train_x.cols());
    const Eigen::Index f = train_x.rows();
    if (train_y.size() != m)
        throw Error(ErrorCode::LengthMismatch, "train labels disagree with train matrix");

    std::map<int, std::vector<std::size_t>> by_class;
    for (std::size_t i = 0; i < m; ++i) by_class[train_y[i]].push_back(i);
    if (by_class.size() < 2) throw Error(ErrorCode::SingleClass, "LDA needs at least two classes");

    LdaModel model;
    Matrix means(f, static_cast<Eigen::Index>(by_class.size()));
    Vector log_priors(static_cast<Eigen::Index>(by_class.size()));
    Matrix pooled = Matrix::Zero(f, f);
    Eigen::Index c = 0;
    for (const auto& [cls, idx] : by_class) {
        model.class_ids.push_back(cls);
        Vector mu = Vector::Zero(f);
        for (std::size_t i : idx) mu += train_x.col(static_cast<Eigen::Index>(i));
        mu /= static_cast<double>(idx.size());
        means.col(c) = mu;
        log_priors(c) = std::log(static_cast<double>(idx.size()) / static_cast<double>(m));
        for (std::size_t i : idx) {
            Vector d = train_x.col(static_cast<Eigen::Index>(i)) - mu;
            pooled += d * d.transpose();
        }
        ++c;
    }
    pooled /= static_cast<double>(m);
    const double eps = 1e-6 * pooled.trace() / static_cast<double>(f);
    pooled += std::max(eps, 1e-300) * Matrix::Identity(f, f);

    Eigen::LDLT<Matrix> chol(pooled);
    if (chol.info() != Eigen::Success)
        throw Error(ErrorCode::IllConditioned, "pooled covariance not factorizable");
    model.weights = chol.solve(means);
    model.offsets.resize(static_cast<Eigen::Index>(model.class_ids.size()));
    for (Eigen::Index i = 0; i < means.cols(); ++i)
        model.offsets(i) = -0.5 * means.col(i).dot(model.weights.col(i)) + log_priors(i);
    return model;
}

std::vector<int> lda_predict(const LdaModel& model, const Matrix& data) {
    if (data.rows() != model.weights.rows())
        throw Error(ErrorCode::DimMismatch, "feature dim disagrees with model");
    std::vector<int> out(static_cast<std::size_t>(data.cols()), 0);
    for (Eigen::Index j = 0; j < data.cols(); ++j) {
        int best = model.class_ids[0];
        double best_score = -std::numeric_limits<double>::infinity();
        for (std::size_t ci = 0; ci < model.class_ids.size(); ++ci) {
            const double score = model.weights.col(static_cast<Eigen::Index>(ci)).dot(data.col(j)) +
                                 model.offsets(static_cast<Eigen::Index>(ci));
            if (score > best_score ||
                (score == best_score && model.class_ids[ci] < best)) {
                best_score = score;
                best = model.class_ids[ci];
            }
        }
        out[static_cast<std::size_t>(j)] = best;
    }
    return out;
}

KMeansResult kmeans(const Matrix& data, std::size_t k, int max_iters, std::uint64_t seed) {
    const std::size_t n = static_cast<std::size_t>(data.cols());
    const Eigen::Index f = data.rows();
    if (k == 0 || k > n) throw Error(ErrorCode::KTooLarge, "k must lie in [1, samples]");

    Rng rng(seed);
    KMeansResult result;
    result.centroids.resize(f, static_cast<Eigen::Index>(k));

    // k-means++ style seeding
    std::vector<std::size_t> chosen;
    chosen.push_back(static_cast<std::size_t>(rng.below(n)));
    std::vector<double> d2(n, 0.0);
    while (chosen.size() < k) {
        double total = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double best = std::numeric_limits<double>::infinity();
            for (std::size_t c : chosen)
                best = std::min(best, sq_euclidean(data, static_cast<Eigen::Index>(i), data,
                                                   static_cast<Eigen::Index>(c)));
            d2[i] = best;
            total += best;
        }
        std::size_t pick = 0;
        if (total > 0.0) {
            const double target = rng.uniform() * total;
            double acc = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                acc += d2[i];
                if (acc >= target) {
                    pick = i;
                    break;
                }
            }
        } else {
            pick = static_cast<std::size_t>(rng.below(n));
        }
        chosen.push_back(pick);
    }
    for (std::size_t c = 0; c < k; ++c)
        result.centroids.col(static_cast<Eigen::Index>(c)) =
            data.col(static_cast<Eigen::Index>(chosen[c]));

    result.assignments.assign(n, -1);
    std::vector<int> next(n, -1);
    int it = 0;
    for (; it < max_iters; ++it) {
        // assign
        double inertia = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            int best = 0;
            double best_d = std::numeric_limits<double>::infinity();
            for (std::size_t c = 0; c < k; ++c) {
                const double d = sq_euclidean(data, static_cast<Eigen::Index>(i), result.centroids,
                                              static_cast<Eigen::Index>(c));
                if (d < best_d) {
                    best_d = d;
                    best = static_cast<int>(c);
                }
            }
            next[i] = best;
            inertia += best_d;
        }
        result.inertia = inertia;
        result.inertia_trace.push_back(inertia);
        if (next == result.assignments) break;
        result.assignments = next;

        // update
        Matrix sums = Matrix::Zero(f, static_cast<Eigen::Index>(k));
        std::vector<std::size_t> counts(k, 0);
        for (std::size_t i = 0; i < n; ++i) {
            sums.col(result.assignments[i]) += data.col(static_cast<Eigen::Index>(i));
            counts[static_cast<std::size_t>(result.assignments[i])]++;
        }
        for (std::size_t c = 0; c < k; ++c) {
            if (counts[c] > 0) {
                result.centroids.col(static_cast<Eigen::Index>(c)) =
                    sums.col(static_cast<Eigen::Index>(c)) / static_cast<double>(counts[c]);
            } else {
                // reseed to the point farthest from its centroid
                std::size_t far = 0;
                double far_d = -1.0;
                for (std::size_t i = 0; i < n; ++i) {
                    const double d = sq_euclidean(data, static_cast<Eigen::Index>(i),
                                                  result.centroids, result.assignments[i]);
                    if (d > far_d) {
                        far_d = d;
                        far = i;
                    }
                }
                result.centroids.col(static_cast<Eigen::Index>(c)) =
                    data.col(static_cast<Eigen::Index>(far));
            }
        }
    }
    result.iterations = it;
    return result;
}

double overall_accuracy(const std::vector<int>& predicted, const std::vector<int>& truth) {
    if (predicted.size() != truth.size())
        throw Error(ErrorCode::LengthMismatch, "prediction and truth lengths disagree");
    std::size_t labeled = 0, correct = 0;
    for (std::size_t i = 0; i < truth.size(); ++i) {
        if (truth[i] <= 0) continue;
        ++labeled;
        correct += (predicted[i] == truth[i]);
    }
    if (labeled == 0) throw Error(ErrorCode::EmptyClass, "no labeled pixels to score");
    return static_cast<double>(correct) / static_cast<double>(labeled);
}

std::vector<std::vector<std::size_t>> confusion_matrix(const std::vector<int>& predicted,
                                                       const std::vector<int>& truth,
                                                       int num_classes) {
    if (predicted.size() != truth.size())
        throw Error(ErrorCode::LengthMismatch, "prediction and truth lengths disagree");
    std::vector<std::vector<std::size_t>> confusion(
        static_cast<std::size_t>(num_classes),
        std::vector<std::size_t>(static_cast<std::size_t>(num_classes), 0));
    for (std::size_t i = 0; i < truth.size(); ++i) {
        if (truth[i] <= 0 || truth[i] > num_classes) continue;
        if (predicted[i] <= 0 || predicted[i] > num_classes) continue;
        confusion[static_cast<std::size_t>(truth[i] - 1)][static_cast<std::size_t>(predicted[i] - 1)]++;
    }
    return confusion;
}

std::vector<double> per_class_accuracy(const std::vector<std::vector<std::size_t>>& confusion) {
    std::vector<double> acc(confusion.size(), 0.0);
    for (std::size_t c = 0; c < confusion.size(); ++c) {
        const std::size_t total = std::accumulate(confusion[c].begin(), confusion[c].end(),
                                                  static_cast<std::size_t>(0));
        acc[c] = total ? static_cast<double>(confusion[c][c]) / static_cast<double>(total) : 0.0;
    }
    return acc;
}

} // namespace hsi
