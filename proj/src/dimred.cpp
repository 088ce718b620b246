#include "hsi/dimred.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include <json.hpp>

namespace hsi {

namespace {

using ordered_json = nlohmann::ordered_json;

// descending eigenpairs of a symmetric matrix with the sign convention
// applied to eigenvectors
void symmetric_eig_descending(const Matrix& sym, Matrix& vectors, Vector& values) {
    Eigen::SelfAdjointEigenSolver<Matrix> solver(sym);
    if (solver.info() != Eigen::Success)
        throw Error(ErrorCode::DegenerateInput, "eigendecomposition failed to converge");
    const Eigen::Index l = sym.rows();
    vectors.resize(l, l);
    values.resize(l);
    for (Eigen::Index i = 0; i < l; ++i) {
        values(i) = solver.eigenvalues()(l - 1 - i);
        vectors.col(i) = solver.eigenvectors().col(l - 1 - i);
    }
    for (Eigen::Index c = 0; c < l; ++c) {
        Eigen::Index arg = 0;
        double best = 0.0;
        for (Eigen::Index r = 0; r < l; ++r)
            if (std::abs(vectors(r, c)) > best) {
                best = std::abs(vectors(r, c));
                arg = r;
            }
        if (vectors(arg, c) < 0.0) vectors.col(c) = -vectors.col(c);
    }
}

Matrix covariance(const Matrix& data, const Vector& mean) {
    const Eigen::Index n = data.cols();
    Matrix centered = data.colwise() - mean;
    return (centered * centered.transpose()) / static_cast<double>(n);
}

// V diag(f(d)) V^T for a symmetric PSD input
Matrix symmetric_apply(const Matrix& sym, double (*f)(double)) {
    Eigen::SelfAdjointEigenSolver<Matrix> solver(sym);
    Vector d = solver.eigenvalues();
    for (Eigen::Index i = 0; i < d.size(); ++i) d(i) = f(d(i));
    return solver.eigenvectors() * d.asDiagonal() * solver.eigenvectors().transpose();
}

double inv_sqrt_clamped(double v) { return v > 0.0 ? 1.0 / std::sqrt(v) : 0.0; }
double sqrt_clamped(double v) { return v > 0.0 ? std::sqrt(v) : 0.0; }
double clamp_nonneg(double v) { return v > 0.0 ? v : 0.0; }

std::vector<std::size_t> sorted_copy(std::vector<std::size_t> v) {
    std::sort(v.begin(), v.end());
    return v;
}

double max_pairwise_abs_corr(const Matrix& corr, const std::vector<std::size_t>& subset) {
    double worst = 0.0;
    for (std::size_t i = 0; i < subset.size(); ++i)
        for (std::size_t j = i + 1; j < subset.size(); ++j)
            worst = std::max(worst, std::abs(corr(static_cast<Eigen::Index>(subset[i]),
                                                  static_cast<Eigen::Index>(subset[j]))));
    return worst;
}

// number of k-subsets of l items, saturating
double subset_count(std::size_t l, std::size_t k) {
    double c = 1.0;
    for (std::size_t i = 0; i < k; ++i) {
        c *= static_cast<double>(l - i) / static_cast<double>(i + 1);
        if (c > 1e9) return 1e9;
    }
    return c;
}

} // namespace

LinearProjection pca_fit(const Matrix& data, std::size_t k) {
    const std::size_t l = static_cast<std::size_t>(data.rows());
    const std::size_t n = static_cast<std::size_t>(data.cols());
    if (n < 2) throw Error(ErrorCode::DegenerateInput, "need at least 2 samples");
    if (k > l) throw Error(ErrorCode::KTooLarge, "k exceeds band count");

    LinearProjection proj;
    proj.kind = ProjectionKind::PCA;
    proj.mean = data.rowwise().mean();
    Matrix vectors;
    Vector values;
    symmetric_eig_descending(covariance(data, proj.mean), vectors, values);
    proj.basis = vectors.leftCols(static_cast<Eigen::Index>(k));
    proj.inverse = proj.basis;
    proj.scores = values.head(static_cast<Eigen::Index>(k));
    return proj;
}

Matrix project(const LinearProjection& proj, const Matrix& data) {
    if (data.rows() != proj.basis.rows())
        throw Error(ErrorCode::DimMismatch, "data rows disagree with projection input dim");
    return proj.basis.transpose() * (data.colwise() - proj.mean);
}

Matrix reconstruct(const LinearProjection& proj, const Matrix& scores) {
    if (scores.rows() != proj.basis.cols())
        throw Error(ErrorCode::DimMismatch, "score rows disagree with projection output dim");
    return (proj.inverse * scores).colwise() + proj.mean;
}

Matrix estimate_noise_covariance(const HyperCube& cube) {
    if (cube.width() < 2) throw Error(ErrorCode::TooNarrow, "need width >= 2 for shift differences");
    const std::size_t l = cube.bands();
    const std::size_t m = cube.height() * (cube.width() - 1);

    Matrix diffs(static_cast<Eigen::Index>(l), static_cast<Eigen::Index>(m));
    std::size_t col = 0;
    for (std::size_t r = 0; r < cube.height(); ++r)
        for (std::size_t c = 0; c + 1 < cube.width(); ++c, ++col)
            for (std::size_t b = 0; b < l; ++b)
                diffs(static_cast<Eigen::Index>(b), static_cast<Eigen::Index>(col)) =
                    cube.at(r, c, b) - cube.at(r, c + 1, b);

    Vector mean = diffs.rowwise().mean();
    Matrix cov = covariance(diffs, mean) * 0.5;
    return (cov + cov.transpose()) * 0.5;
}

LinearProjection mnf_fit(const Matrix& data, const Matrix& noise_cov, std::size_t k) {
    const std::size_t l = static_cast<std::size_t>(data.rows());
    if (static_cast<std::size_t>(noise_cov.rows()) != l || static_cast<std::size_t>(noise_cov.cols()) != l)
        throw Error(ErrorCode::DimMismatch, "noise covariance shape disagrees with data");
    if (data.cols() < 2) throw Error(ErrorCode::DegenerateInput, "need at least 2 samples");
    if (k > l) throw Error(ErrorCode::KTooLarge, "k exceeds band count");
    const double tr = noise_cov.trace();
    if (tr <= 0.0) throw Error(ErrorCode::SingularNoise, "noise covariance has zero trace");

    const double eps = 1e-10 * tr / static_cast<double>(l);
    Matrix noise_reg = noise_cov + eps * Matrix::Identity(static_cast<Eigen::Index>(l),
                                                          static_cast<Eigen::Index>(l));
    Matrix whiten = symmetric_apply(noise_reg, inv_sqrt_clamped);
    Matrix unwhiten = symmetric_apply(noise_reg, sqrt_clamped);

    LinearProjection proj;
    proj.kind = ProjectionKind::MNF;
    proj.mean = data.rowwise().mean();

    // SNR eigenproblem on the whitened signal covariance, with the signal
    // part clipped to PSD so scores stay nonnegative
    Matrix sig = covariance(data, proj.mean) - noise_cov;
    sig = (sig + sig.transpose()) * 0.5;
    sig = symmetric_apply(sig, clamp_nonneg);
    Matrix m = whiten * sig * whiten;
    m = (m + m.transpose()) * 0.5;

    Matrix vectors;
    Vector values;
    symmetric_eig_descending(m, vectors, values);
    proj.basis = whiten * vectors.leftCols(static_cast<Eigen::Index>(k));
    proj.inverse = unwhiten * vectors.leftCols(static_cast<Eigen::Index>(k));
    proj.scores = values.head(static_cast<Eigen::Index>(k));
    return proj;
}

double band_entropy(const Vector& band) {
    constexpr int kBins = 64;
    const double lo = band.minCoeff();
    const double hi = band.maxCoeff();
    if (!(hi > lo)) return 0.0;
    std::array<double, kBins> counts{};
    const double scale = kBins / (hi - lo);
    for (Eigen::Index i = 0; i < band.size(); ++i) {
        int bin = static_cast<int>((band(i) - lo) * scale);
        bin = std::clamp(bin, 0, kBins - 1);
        counts[static_cast<std::size_t>(bin)] += 1.0;
    }
    double h = 0.0;
    const double n = static_cast<double>(band.size());
    for (double c : counts)
        if (c > 0.0) {
            const double p = c / n;
            h -= p * std::log2(p);
        }
    return h;
}

Matrix band_correlation(const Matrix& data) {
    const Eigen::Index l = data.rows();
    const Eigen::Index n = data.cols();
    // scalar accumulation in index order throughout: duplicated bands then
    // tie exactly, so the documented lowest-index tie-break is reproducible
    Vector mean(l);
    for (Eigen::Index i = 0; i < l; ++i) {
        double acc = 0.0;
        for (Eigen::Index k = 0; k < n; ++k) acc += data(i, k);
        mean(i) = acc / static_cast<double>(n);
    }
    Matrix centered = data.colwise() - mean;
    Vector sd(l);
    for (Eigen::Index i = 0; i < l; ++i) {
        double acc = 0.0;
        for (Eigen::Index k = 0; k < n; ++k) acc += centered(i, k) * centered(i, k);
        sd(i) = std::sqrt(acc);
    }
    Matrix corr = Matrix::Identity(l, l);
    for (Eigen::Index i = 0; i < l; ++i)
        for (Eigen::Index j = i + 1; j < l; ++j) {
            double c = 0.0;
            if (sd(i) > 0.0 && sd(j) > 0.0) {
                double acc = 0.0;
                for (Eigen::Index k = 0; k < n; ++k) acc += centered(i, k) * centered(j, k);
                c = acc / (sd(i) * sd(j));
            }
            corr(i, j) = corr(j, i) = c;
        }
    return corr;
}

BandSubset select_bands(const Matrix& data, std::size_t k, BandCriterion criterion) {
    const std::size_t l = static_cast<std::size_t>(data.rows());
    if (k == 0 || k > l) throw Error(ErrorCode::KTooLarge, "k must lie in [1, bands]");

    BandSubset out;
    out.criterion = criterion;
    if (k == l) {
        out.indices.resize(l);
        for (std::size_t i = 0; i < l; ++i) out.indices[i] = i;
    }

    const Matrix corr = band_correlation(data);

    if (criterion == BandCriterion::MaxEntropy) {
        Vector entropy(static_cast<Eigen::Index>(l));
        for (std::size_t b = 0; b < l; ++b)
            entropy(static_cast<Eigen::Index>(b)) = band_entropy(data.row(static_cast<Eigen::Index>(b)));
        if (out.indices.empty()) {
            std::vector<std::size_t> chosen;
            std::vector<bool> used(l, false);
            while (chosen.size() < k) {
                std::size_t best = l;
                double best_score = -std::numeric_limits<double>::infinity();
                for (std::size_t b = 0; b < l; ++b) {
                    if (used[b]) continue;
                    double penalty = 0.0;
                    for (std::size_t s : chosen)
                        penalty += std::abs(corr(static_cast<Eigen::Index>(b),
                                                 static_cast<Eigen::Index>(s)));
                    if (!chosen.empty()) penalty /= static_cast<double>(chosen.size());
                    const double score = entropy(static_cast<Eigen::Index>(b)) - penalty;
                    if (score > best_score) {
                        best_score = score;
                        best = b;
                    }
                }
                used[best] = true;
                chosen.push_back(best);
            }
            out.indices = sorted_copy(chosen);
        }
        double h_sum = 0.0;
        for (std::size_t b : out.indices) h_sum += entropy(static_cast<Eigen::Index>(b));
        double pair_mean = 0.0;
        if (out.indices.size() >= 2) {
            std::size_t pairs = 0;
            for (std::size_t i = 0; i < out.indices.size(); ++i)
                for (std::size_t j = i + 1; j < out.indices.size(); ++j, ++pairs)
                    pair_mean += std::abs(corr(static_cast<Eigen::Index>(out.indices[i]),
                                               static_cast<Eigen::Index>(out.indices[j])));
            pair_mean /= static_cast<double>(pairs);
        }
        out.score = h_sum - pair_mean;
        return out;
    }

    // MinCorrelation: maximize J = -max pairwise |corr|
    if (out.indices.empty()) {
        if (k == 1) {
            out.indices = {0}; // all singletons tie at zero; lowest index wins
        } else if (subset_count(l, k) <= 100000.0) {
            // exact enumeration in lexicographic order; strict improvement
            // keeps the lexicographically smallest optimum
            std::vector<std::size_t> subset(k);
            for (std::size_t i = 0; i < k; ++i) subset[i] = i;
            std::vector<std::size_t> best = subset;
            double best_val = max_pairwise_abs_corr(corr, subset);
            while (true) {
                // next combination
                std::size_t i = k;
                while (i > 0 && subset[i - 1] == l - k + i - 1) --i;
                if (i == 0) break;
                ++subset[i - 1];
                for (std::size_t j = i; j < k; ++j) subset[j] = subset[j - 1] + 1;
                const double val = max_pairwise_abs_corr(corr, subset);
                if (val < best_val) {
                    best_val = val;
                    best = subset;
                }
            }
            out.indices = best;
        } else {
            // seeded greedy: best pair, then repeatedly add the band that
            // keeps the max correlation lowest, then single-swap refinement
            std::vector<std::size_t> chosen;
            {
                std::size_t bi = 0, bj = 1;
                double best = std::numeric_limits<double>::infinity();
                for (std::size_t i = 0; i < l; ++i)
                    for (std::size_t j = i + 1; j < l; ++j) {
                        const double c = std::abs(corr(static_cast<Eigen::Index>(i),
                                                       static_cast<Eigen::Index>(j)));
                        if (c < best) {
                            best = c;
                            bi = i;
                            bj = j;
                        }
                    }
                chosen = {bi, bj};
            }
            std::vector<bool> used(l, false);
            used[chosen[0]] = used[chosen[1]] = true;
            while (chosen.size() < k) {
                std::size_t best = l;
                double best_val = std::numeric_limits<double>::infinity();
                for (std::size_t b = 0; b < l; ++b) {
                    if (used[b]) continue;
                    double val = 0.0;
                    for (std::size_t s : chosen)
                        val = std::max(val, std::abs(corr(static_cast<Eigen::Index>(b),
                                                          static_cast<Eigen::Index>(s))));
                    if (val < best_val) {
                        best_val = val;
                        best = b;
                    }
                }
                used[best] = true;
                chosen.push_back(best);
            }
            bool improved = true;
            while (improved) {
                improved = false;
                double current = max_pairwise_abs_corr(corr, chosen);
                for (std::size_t pos = 0; pos < chosen.size() && !improved; ++pos) {
                    for (std::size_t b = 0; b < l && !improved; ++b) {
                        if (used[b]) continue;
                        std::vector<std::size_t> trial = chosen;
                        trial[pos] = b;
                        if (max_pairwise_abs_corr(corr, trial) < current) {
                            used[chosen[pos]] = false;
                            used[b] = true;
                            chosen = trial;
                            improved = true;
                        }
                    }
                }
            }
            out.indices = sorted_copy(chosen);
        }
    }
    out.score = -max_pairwise_abs_corr(corr, out.indices);
    return out;
}

BandSubset select_bands(const HyperCube& cube, std::size_t k, BandCriterion criterion) {
    return select_bands(to_matrix(cube), k, criterion);
}

std::string LinearProjection::to_json() const {
    ordered_json j;
    j["kind"] = (kind == ProjectionKind::PCA) ? "pca" : "mnf";
    j["mean"] = std::vector<double>(mean.data(), mean.data() + mean.size());
    j["scores"] = std::vector<double>(scores.data(), scores.data() + scores.size());
    auto dump_matrix = [](const Matrix& m) {
        std::vector<std::vector<double>> rows(static_cast<std::size_t>(m.rows()));
        for (Eigen::Index r = 0; r < m.rows(); ++r) {
            rows[static_cast<std::size_t>(r)].resize(static_cast<std::size_t>(m.cols()));
            for (Eigen::Index c = 0; c < m.cols(); ++c)
                rows[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)] = m(r, c);
        }
        return rows;
    };
    j["basis"] = dump_matrix(basis);
    j["inverse"] = dump_matrix(inverse);
    return j.dump(2);
}

LinearProjection LinearProjection::from_json(const std::string& text) {
    ordered_json j;
    try {
        j = ordered_json::parse(text);
    } catch (const std::exception& e) {
        throw Error(ErrorCode::ParseError, std::string("projection json: ") + e.what());
    }
    LinearProjection proj;
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "pca") proj.kind = ProjectionKind::PCA;
    else if (kind == "mnf") proj.kind = ProjectionKind::MNF;
    else throw Error(ErrorCode::ParseError, "unknown projection kind \"" + kind + "\"");
    auto mean = j.at("mean").get<std::vector<double>>();
    auto scores = j.at("scores").get<std::vector<double>>();
    auto load_matrix = [](const ordered_json& rows) {
        const std::size_t r = rows.size();
        const std::size_t c = r ? rows[0].size() : 0;
        Matrix m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
        for (std::size_t i = 0; i < r; ++i)
            for (std::size_t k2 = 0; k2 < c; ++k2)
                m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k2)) =
                    rows[i][k2].get<double>();
        return m;
    };
    proj.mean = Eigen::Map<Vector>(mean.data(), static_cast<Eigen::Index>(mean.size()));
    proj.scores = Eigen::Map<Vector>(scores.data(), static_cast<Eigen::Index>(scores.size()));
    proj.basis = load_matrix(j.at("basis"));
    proj.inverse = load_matrix(j.at("inverse"));
    return proj;
}

} // namespace hsi
