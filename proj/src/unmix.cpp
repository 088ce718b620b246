#include "hsi/unmix.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>

#include "hsi/calib.hpp"
#include "hsi/parallel.hpp"
#include "hsi/rng.hpp"

namespace hsi {

namespace {

void check_gram_conditioning(const Matrix& gram) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(gram);
    const double lo = es.eigenvalues().minCoeff();
    const double hi = es.eigenvalues().maxCoeff();
    if (lo <= 0.0 || hi / lo > 1e12)
        throw Error(ErrorCode::IllConditioned,
                    "endmember Gram matrix condition number exceeds 1e12");
}

// Solve min ||E_F a_F - x||^2 s.t. sum(a_F) = 1 via the KKT system of the
// Gram matrix restricted to the free support.
Vector equality_constrained_ls(const Matrix& gram, const Vector& rhs,
                               const std::vector<std::size_t>& support) {
    const std::size_t q = support.size();
    Matrix kkt = Matrix::Zero(static_cast<Eigen::Index>(q + 1), static_cast<Eigen::Index>(q + 1));
    Vector b(static_cast<Eigen::Index>(q + 1));
    for (std::size_t i = 0; i < q; ++i) {
        for (std::size_t j = 0; j < q; ++j)
            kkt(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                gram(static_cast<Eigen::Index>(support[i]), static_cast<Eigen::Index>(support[j]));
        kkt(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(q)) = 1.0;
        kkt(static_cast<Eigen::Index>(q), static_cast<Eigen::Index>(i)) = 1.0;
        b(static_cast<Eigen::Index>(i)) = rhs(static_cast<Eigen::Index>(support[i]));
    }
    b(static_cast<Eigen::Index>(q)) = 1.0;
    Vector sol = kkt.fullPivLu().solve(b);
    return sol.head(static_cast<Eigen::Index>(q));
}

void project_to_simplex_inplace(Vector& a) {
    for (Eigen::Index i = 0; i < a.size(); ++i) a(i) = std::max(a(i), 0.0);
    const double s = a.sum();
    if (s > 0.0)
        a /= s;
    else
        a.setConstant(1.0 / static_cast<double>(a.size()));
}

} // namespace

Matrix lmm_synthesize(const EndmemberSet& endmembers, const AbundanceMaps& abundances,
                      double noise_sigma, std::uint64_t seed) {
    if (endmembers.spectra.cols() != abundances.coefficients.rows())
        throw Error(ErrorCode::DimMismatch, "endmember count disagrees with abundance rows");
    Matrix x = endmembers.spectra * abundances.coefficients;
    if (noise_sigma > 0.0) {
        Rng rng(seed);
        for (Eigen::Index j = 0; j < x.cols(); ++j)
            for (Eigen::Index i = 0; i < x.rows(); ++i) x(i, j) += noise_sigma * rng.gaussian();
    }
    return x;
}

AbundanceMaps ucls(const EndmemberSet& endmembers, const Matrix& pixels) {
    if (endmembers.spectra.rows() != pixels.rows())
        throw Error(ErrorCode::DimMismatch, "endmember bands disagree with pixel bands");
    const Matrix& e = endmembers.spectra;
    Matrix gram = e.transpose() * e;
    check_gram_conditioning(gram);
    AbundanceMaps out;
    out.constraint_mode = ConstraintMode::Unconstrained;
    out.coefficients = gram.ldlt().solve(e.transpose() * pixels);
    return out;
}

AbundanceMaps fcls(const EndmemberSet& endmembers, const Matrix& pixels, ConstraintMode mode,
                   FclsReport* report) {
    if (endmembers.spectra.rows() != pixels.rows())
        throw Error(ErrorCode::DimMismatch, "endmember bands disagree with pixel bands");
    if (mode == ConstraintMode::Unconstrained) return ucls(endmembers, pixels);

    const Matrix& e = endmembers.spectra;
    const std::size_t p = endmembers.count();
    const std::size_t n = static_cast<std::size_t>(pixels.cols());
    Matrix gram = e.transpose() * e;
    check_gram_conditioning(gram);
    Matrix rhs_all = e.transpose() * pixels;

    AbundanceMaps out;
    out.constraint_mode = mode;
    out.coefficients.resize(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(n));

    std::vector<std::size_t> stalled(n, 0);
    const int cap = std::max(1, static_cast<int>(p * p));

    parallel_for(n, [&](std::size_t j) {
        const Vector rhs = rhs_all.col(static_cast<Eigen::Index>(j));
        std::vector<std::size_t> support(p);
        std::iota(support.begin(), support.end(), 0);
        Vector a_sup = equality_constrained_ls(gram, rhs, support);

        if (mode == ConstraintMode::Full) {
            int rounds = 0;
            while (rounds++ < cap) {
                Eigen::Index worst = -1;
                double worst_val = -1e-12;
                for (Eigen::Index i = 0; i < a_sup.size(); ++i)
                    if (a_sup(i) < worst_val) {
                        worst_val = a_sup(i);
                        worst = i;
                    }
                if (worst < 0) break; // feasible
                if (support.size() == 1) break;
                support.erase(support.begin() + worst);
                a_sup = equality_constrained_ls(gram, rhs, support);
            }
            Vector full = Vector::Zero(static_cast<Eigen::Index>(p));
            for (std::size_t i = 0; i < support.size(); ++i)
                full(static_cast<Eigen::Index>(support[i])) = a_sup(static_cast<Eigen::Index>(i));
            bool feasible = true;
            for (Eigen::Index i = 0; i < full.size(); ++i)
                if (full(i) < -1e-12) feasible = false;
            if (!feasible) {
                stalled[j] = 1;
                project_to_simplex_inplace(full);
            } else {
                for (Eigen::Index i = 0; i < full.size(); ++i) full(i) = std::max(full(i), 0.0);
                full /= full.sum();
            }
            out.coefficients.col(static_cast<Eigen::Index>(j)) = full;
        } else {
            out.coefficients.col(static_cast<Eigen::Index>(j)) = a_sup;
        }
    });

    if (report) {
        report->stalled_pixels = 0;
        for (std::size_t s : stalled) report->stalled_pixels += s;
    }
    return out;
}

std::vector<std::size_t> ppi(const Matrix& pixels, std::size_t n_skewers, std::uint64_t seed,
                             std::size_t threshold, std::vector<std::size_t>* counts_out) {
    if (n_skewers < 100) throw Error(ErrorCode::BadConfig, "need at least 100 skewers");
    const std::size_t n = static_cast<std::size_t>(pixels.cols());
    const Eigen::Index l = pixels.rows();
    Rng rng(seed);
    std::vector<std::size_t> counts(n, 0);
    Vector skewer(l);
    for (std::size_t s = 0; s < n_skewers; ++s) {
        for (Eigen::Index i = 0; i < l; ++i) skewer(i) = rng.gaussian();
        const double norm = skewer.norm();
        if (norm == 0.0) continue;
        skewer /= norm;
        Eigen::Index lo = 0, hi = 0;
        double lo_v = std::numeric_limits<double>::infinity();
        double hi_v = -std::numeric_limits<double>::infinity();
        for (Eigen::Index j = 0; j < pixels.cols(); ++j) {
            const double v = skewer.dot(pixels.col(j));
            if (v < lo_v) {
                lo_v = v;
                lo = j;
            }
            if (v > hi_v) {
                hi_v = v;
                hi = j;
            }
        }
        counts[static_cast<std::size_t>(lo)]++;
        if (hi != lo) counts[static_cast<std::size_t>(hi)]++;
    }
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return counts[a] > counts[b]; });
    std::vector<std::size_t> hits;
    for (std::size_t i : order)
        if (counts[i] >= threshold) hits.push_back(i);
    if (counts_out) *counts_out = counts;
    return hits;
}

namespace {

double simplex_volume(const Matrix& projected, const std::vector<std::size_t>& vertices) {
    const std::size_t p = vertices.size();
    Matrix m(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(p));
    for (std::size_t c = 0; c < p; ++c) {
        m(0, static_cast<Eigen::Index>(c)) = 1.0;
        for (std::size_t r = 0; r + 1 < p; ++r)
            m(static_cast<Eigen::Index>(r + 1), static_cast<Eigen::Index>(c)) =
                projected(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(vertices[c]));
    }
    double fact = 1.0;
    for (std::size_t i = 2; i < p; ++i) fact *= static_cast<double>(i);
    return std::abs(m.determinant()) / fact;
}

} // namespace

EndmemberSet nfindr(const Matrix& pixels, std::size_t p, std::uint64_t seed,
                    const LinearProjection* dimred, std::vector<double>* volume_trace,
                    std::vector<std::size_t>* indices_out) {
    const std::size_t n = static_cast<std::size_t>(pixels.cols());
    if (p < 1 || n < p) throw Error(ErrorCode::BadConfig, "need n >= p >= 1");

    LinearProjection local;
    if (p > 1) {
        if (dimred) {
            if (dimred->output_dim() != p - 1)
                throw Error(ErrorCode::DimMismatch, "projection must map to p-1 dims");
            local = *dimred;
        } else {
            local = pca_fit(pixels, p - 1);
        }
    }
    Matrix z = (p > 1) ? project(local, pixels) : Matrix::Zero(0, static_cast<Eigen::Index>(n));

    Rng rng(seed);
    auto random_vertices = [&]() {
        std::vector<std::size_t> idx(n);
        std::iota(idx.begin(), idx.end(), 0);
        rng.shuffle(idx);
        idx.resize(p);
        return idx;
    };

    auto ascend = [&](std::vector<std::size_t> vertices, std::vector<double>* trace) {
        double vol = simplex_volume(z, vertices);
        if (trace) trace->push_back(vol);
        if (vol == 0.0) return std::make_pair(vertices, vol);
        bool improved = true;
        while (improved) {
            improved = false;
            std::size_t best_slot = 0, best_pixel = 0;
            double best_vol = vol;
            for (std::size_t slot = 0; slot < p; ++slot) {
                std::vector<std::size_t> trial = vertices;
                for (std::size_t j = 0; j < n; ++j) {
                    trial[slot] = j;
                    const double v = simplex_volume(z, trial);
                    if (v > best_vol) {
                        best_vol = v;
                        best_slot = slot;
                        best_pixel = j;
                    }
                }
            }
            if (best_vol > vol) {
                vertices[best_slot] = best_pixel;
                vol = best_vol;
                improved = true;
                if (trace) trace->push_back(vol);
            }
        }
        return std::make_pair(vertices, vol);
    };

    // vca seeding plus random restarts; vca needs p <= bands, pure random
    // restarts cover the p = bands + 1 corner
    std::vector<std::size_t> vca_idx;
    if (p <= static_cast<std::size_t>(pixels.rows())) vca(pixels, p, seed, &vca_idx);

    std::vector<std::size_t> best_vertices;
    double best_vol = 0.0;
    std::vector<double> best_trace;
    for (int attempt = 0; attempt < 11; ++attempt) {
        std::vector<std::size_t> init =
            (attempt == 0 && !vca_idx.empty()) ? vca_idx : random_vertices();
        std::vector<double> trace;
        auto [vertices, vol] = ascend(std::move(init), &trace);
        if (vol > best_vol) {
            best_vol = vol;
            best_vertices = vertices;
            best_trace = trace;
        }
    }
    if (best_vol == 0.0)
        throw Error(ErrorCode::DegenerateSimplex, "zero simplex volume after 10 restarts");

    if (volume_trace) *volume_trace = best_trace;
    if (indices_out) *indices_out = best_vertices;
    EndmemberSet out;
    out.spectra.resize(pixels.rows(), static_cast<Eigen::Index>(p));
    for (std::size_t c = 0; c < p; ++c)
        out.spectra.col(static_cast<Eigen::Index>(c)) =
            pixels.col(static_cast<Eigen::Index>(best_vertices[c]));
    return out;
}

EndmemberSet vca(const Matrix& pixels, std::size_t p, std::uint64_t seed,
                 std::vector<std::size_t>* indices_out) {
    const std::size_t n = static_cast<std::size_t>(pixels.cols());
    const std::size_t l = static_cast<std::size_t>(pixels.rows());
    if (p < 1 || p > l || n < p)
        throw Error(ErrorCode::BadConfig, "need bands >= p >= 1 and n >= p");

    // SNR estimate decides between the projective and subspace embeddings
    Vector mean = pixels.rowwise().mean();
    Matrix centered = pixels.colwise() - mean;
    const double power_total = pixels.squaredNorm() / static_cast<double>(n);

    Matrix y; // p x n embedded data
    if (p == 1) {
        y = Matrix::Ones(1, static_cast<Eigen::Index>(n));
        // single endmember: the extreme pixel along the mean direction
        Eigen::Index arg = 0;
        double best = -std::numeric_limits<double>::infinity();
        for (Eigen::Index j = 0; j < pixels.cols(); ++j) {
            const double v = std::abs(mean.dot(pixels.col(j)));
            if (v > best) {
                best = v;
                arg = j;
            }
        }
        if (indices_out) *indices_out = {static_cast<std::size_t>(arg)};
        EndmemberSet out;
        out.spectra = pixels.col(arg);
        return out;
    }

    LinearProjection pca_p = pca_fit(pixels, std::min(p, l));
    Matrix zp = project(pca_p, pixels);
    const double power_proj = (zp.squaredNorm() / static_cast<double>(n)) + mean.squaredNorm();
    double snr_db = std::numeric_limits<double>::infinity();
    if (power_total > power_proj) {
        const double num = power_proj - (static_cast<double>(p) / static_cast<double>(l)) * power_total;
        snr_db = (num > 0.0) ? 10.0 * std::log10(num / (power_total - power_proj))
                             : -std::numeric_limits<double>::infinity();
    }
    const double snr_threshold = 15.0 + 10.0 * std::log10(static_cast<double>(p));

    if (snr_db > snr_threshold) {
        // projective mode: p-dim subspace of the raw correlation, rays
        // normalized against the projected mean
        Eigen::SelfAdjointEigenSolver<Matrix> es(pixels * pixels.transpose() /
                                                 static_cast<double>(n));
        Matrix ud(static_cast<Eigen::Index>(l), static_cast<Eigen::Index>(p));
        for (std::size_t i = 0; i < p; ++i)
            ud.col(static_cast<Eigen::Index>(i)) =
                es.eigenvectors().col(static_cast<Eigen::Index>(l - 1 - i));
        Matrix xp = ud.transpose() * pixels;
        Vector u = xp.rowwise().mean();
        y.resize(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(n));
        for (Eigen::Index j = 0; j < xp.cols(); ++j) {
            const double denom = xp.col(j).dot(u);
            if (std::abs(denom) < 1e-300)
                throw Error(ErrorCode::RankCollapse, "projective normalization degenerate");
            y.col(j) = xp.col(j) / denom;
        }
    } else {
        // subspace mode: PCA to p-1 dims plus a constant coordinate
        LinearProjection pca_sub = pca_fit(pixels, p - 1);
        Matrix zs = project(pca_sub, pixels);
        double c = 0.0;
        for (Eigen::Index j = 0; j < zs.cols(); ++j) c = std::max(c, zs.col(j).norm());
        if (c == 0.0) c = 1.0;
        y.resize(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(n));
        y.topRows(static_cast<Eigen::Index>(p - 1)) = zs;
        y.row(static_cast<Eigen::Index>(p - 1)).setConstant(c);
    }

    Rng rng(seed);
    Matrix a = Matrix::Zero(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(p));
    a(static_cast<Eigen::Index>(p - 1), 0) = 1.0;
    std::vector<std::size_t> indices(p, 0);
    Vector w(static_cast<Eigen::Index>(p)), f(static_cast<Eigen::Index>(p));
    for (std::size_t i = 0; i < p; ++i) {
        for (Eigen::Index r = 0; r < w.size(); ++r) w(r) = rng.gaussian();
        Matrix pinv = a.completeOrthogonalDecomposition().pseudoInverse();
        f = w - a * (pinv * w);
        const double norm = f.norm();
        if (norm < 1e-12) throw Error(ErrorCode::RankCollapse, "no direction orthogonal to span");
        f /= norm;
        Eigen::Index arg = 0;
        double best = -std::numeric_limits<double>::infinity();
        for (Eigen::Index j = 0; j < y.cols(); ++j) {
            const double v = std::abs(f.dot(y.col(j)));
            if (v > best) {
                best = v;
                arg = j;
            }
        }
        a.col(static_cast<Eigen::Index>(i)) = y.col(arg);
        indices[i] = static_cast<std::size_t>(arg);
    }

    if (indices_out) *indices_out = indices;
    EndmemberSet out;
    out.spectra.resize(static_cast<Eigen::Index>(l), static_cast<Eigen::Index>(p));
    for (std::size_t i = 0; i < p; ++i)
        out.spectra.col(static_cast<Eigen::Index>(i)) =
            pixels.col(static_cast<Eigen::Index>(indices[i]));
    return out;
}

NmfResult nmf_unmix(const Matrix& pixels, std::size_t p, NmfInit init, std::uint64_t seed,
                    int max_iters, double tol, double delta) {
    const std::size_t l = static_cast<std::size_t>(pixels.rows());
    const std::size_t n = static_cast<std::size_t>(pixels.cols());
    if (p < 1 || n < p) throw Error(ErrorCode::BadConfig, "need n >= p >= 1");

    NmfResult result;
    Matrix x = pixels;
    if (x.minCoeff() < 0.0) {
        result.warning = "input clipped to nonnegative";
        x = x.cwiseMax(0.0);
    }

    Matrix e; // l x p
    Matrix a; // p x n
    if (init == NmfInit::VCA) {
        e = vca(x, p, seed).spectra.cwiseMax(0.0);
        a = fcls(EndmemberSet{e, {}}, x, ConstraintMode::Full).coefficients;
        a = a.cwiseMax(1e-6); // multiplicative updates cannot leave zero
    } else {
        Rng rng(seed);
        const double hi = std::max(x.maxCoeff(), 1e-6);
        e.resize(static_cast<Eigen::Index>(l), static_cast<Eigen::Index>(p));
        for (Eigen::Index j = 0; j < e.cols(); ++j)
            for (Eigen::Index i = 0; i < e.rows(); ++i) e(i, j) = hi * rng.uniform();
        a.resize(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(n));
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            auto col = rng.dirichlet_flat(p);
            for (std::size_t i = 0; i < p; ++i)
                a(static_cast<Eigen::Index>(i), j) = std::max(col[i], 1e-6);
        }
    }

    const Eigen::RowVectorXd delta_row = Eigen::RowVectorXd::Constant(static_cast<Eigen::Index>(n), delta);
    constexpr double kEps = 1e-12;

    auto objective = [&](const Matrix& ee, const Matrix& aa) {
        const double top = (ee * aa - x).squaredNorm();
        const double asc = (Eigen::RowVectorXd::Constant(static_cast<Eigen::Index>(p), delta) * aa -
                            delta_row)
                               .squaredNorm();
        return top + asc;
    };

    double f = objective(e, a);
    result.objective_trace.push_back(f);
    bool converged = false;
    for (int it = 0; it < max_iters && !converged; ++it) {
        // E step on the plain system (the delta row of the augmented E is constant)
        Matrix aat = a * a.transpose();
        Matrix e_denom = (e * aat).array() + kEps;
        e = e.cwiseProduct((x * a.transpose()).cwiseQuotient(e_denom));

        // A step on the augmented system
        Matrix e_aug(static_cast<Eigen::Index>(l + 1), static_cast<Eigen::Index>(p));
        e_aug.topRows(static_cast<Eigen::Index>(l)) = e;
        e_aug.row(static_cast<Eigen::Index>(l)).setConstant(delta);
        Matrix x_aug(static_cast<Eigen::Index>(l + 1), static_cast<Eigen::Index>(n));
        x_aug.topRows(static_cast<Eigen::Index>(l)) = x;
        x_aug.row(static_cast<Eigen::Index>(l)) = delta_row;
        Matrix ete = e_aug.transpose() * e_aug;
        Matrix a_denom = (ete * a).array() + kEps;
        a = a.cwiseProduct((e_aug.transpose() * x_aug).cwiseQuotient(a_denom));

        const double f_new = objective(e, a);
        result.objective_trace.push_back(f_new);
        if (f > 0.0 && (f - f_new) / f < tol && f_new <= f) converged = true;
        f = f_new;
    }
    result.converged = converged;
    if (!converged && result.warning.empty())
        result.warning = "NonConvergence: tol not reached within max_iters";

    // final cleanup to exact Full-mode invariants
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
        Vector col = a.col(j).cwiseMax(0.0);
        const double s = col.sum();
        a.col(j) = (s > 0.0) ? Vector(col / s)
                             : Vector(Vector::Constant(static_cast<Eigen::Index>(p),
                                                       1.0 / static_cast<double>(p)));
    }
    result.endmembers.spectra = e;
    result.abundances.coefficients = a;
    result.abundances.constraint_mode = ConstraintMode::Full;
    return result;
}

double sad(const Vector& a, const Vector& b) {
    if (a.size() != b.size()) throw Error(ErrorCode::LengthMismatch, "spectra lengths disagree");
    const double na = a.norm(), nb = b.norm();
    if (na == 0.0 || nb == 0.0) throw Error(ErrorCode::ZeroVector, "sad of zero spectrum");
    const double cosv = std::clamp(a.dot(b) / (na * nb), -1.0, 1.0);
    return std::acos(cosv);
}

std::vector<LibraryMatch> library_match(const EndmemberSet& endmembers, const SpectralAxis& axis,
                                        const SpectralLibrary& library, MatchMetric metric) {
    if (axis.wavelengths.size() != endmembers.bands())
        throw Error(ErrorCode::LengthMismatch, "axis length disagrees with endmember bands");
    if (library.entries.empty()) throw Error(ErrorCode::BadConfig, "library is empty");

    // resample every entry onto the query axis once
    Matrix lib(static_cast<Eigen::Index>(endmembers.bands()),
               static_cast<Eigen::Index>(library.entries.size()));
    for (std::size_t k = 0; k < library.entries.size(); ++k) {
        const auto& entry = library.entries[k];
        for (std::size_t b = 0; b < axis.wavelengths.size(); ++b)
            lib(static_cast<Eigen::Index>(b), static_cast<Eigen::Index>(k)) =
                interp_linear(entry.axis.wavelengths, entry.values, axis.wavelengths[b]);
    }

    std::vector<LibraryMatch> matches(endmembers.count());
    for (std::size_t i = 0; i < endmembers.count(); ++i) {
        auto& m = matches[i];
        for (std::size_t k = 0; k < library.entries.size(); ++k) {
            double score;
            if (metric == MatchMetric::SpectralAngle)
                score = sad(endmembers.spectra.col(static_cast<Eigen::Index>(i)),
                            lib.col(static_cast<Eigen::Index>(k)));
            else
                score = (endmembers.spectra.col(static_cast<Eigen::Index>(i)) -
                         lib.col(static_cast<Eigen::Index>(k)))
                            .norm();
            m.ranking.emplace_back(library.entries[k].name, score);
        }
        std::stable_sort(m.ranking.begin(), m.ranking.end(),
                         [](const auto& a, const auto& b) { return a.second < b.second; });
    }
    return matches;
}

EndmemberAssignment match_endmembers(const Matrix& reference, const Matrix& estimate) {
    if (reference.rows() != estimate.rows())
        throw Error(ErrorCode::DimMismatch, "endmember band counts disagree");
    const std::size_t p = static_cast<std::size_t>(reference.cols());
    const std::size_t q = static_cast<std::size_t>(estimate.cols());
    if (q < p) throw Error(ErrorCode::DimMismatch, "estimate has fewer endmembers than reference");

    Matrix cost(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(q));
    for (std::size_t i = 0; i < p; ++i)
        for (std::size_t j = 0; j < q; ++j)
            cost(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                sad(reference.col(static_cast<Eigen::Index>(i)),
                    estimate.col(static_cast<Eigen::Index>(j)));

    EndmemberAssignment out;
    out.estimated_for_reference.resize(p);
    if (p <= 8) {
        std::vector<std::size_t> perm(q);
        std::iota(perm.begin(), perm.end(), 0);
        std::vector<std::size_t> best(perm.begin(), perm.begin() + static_cast<long>(p));
        double best_cost = std::numeric_limits<double>::infinity();
        // exhaustive over ordered selections of p columns out of q
        std::vector<std::size_t> sel(p);
        std::vector<bool> used(q, false);
        std::function<void(std::size_t, double)> recurse = [&](std::size_t i, double acc) {
            if (acc >= best_cost) return;
            if (i == p) {
                best_cost = acc;
                best = sel;
                return;
            }
            for (std::size_t j = 0; j < q; ++j) {
                if (used[j]) continue;
                used[j] = true;
                sel[i] = j;
                recurse(i + 1, acc + cost(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)));
                used[j] = false;
            }
        };
        recurse(0, 0.0);
        out.estimated_for_reference = best;
    } else {
        // greedy fallback for large p
        std::vector<bool> used(q, false);
        for (std::size_t i = 0; i < p; ++i) {
            std::size_t arg = 0;
            double bestv = std::numeric_limits<double>::infinity();
            for (std::size_t j = 0; j < q; ++j) {
                if (used[j]) continue;
                if (cost(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) < bestv) {
                    bestv = cost(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
                    arg = j;
                }
            }
            used[arg] = true;
            out.estimated_for_reference[i] = arg;
        }
    }
    out.sad_per_reference.resize(p);
    out.mean_sad = 0.0;
    out.max_sad = 0.0;
    for (std::size_t i = 0; i < p; ++i) {
        const double v = cost(static_cast<Eigen::Index>(i),
                              static_cast<Eigen::Index>(out.estimated_for_reference[i]));
        out.sad_per_reference[i] = v;
        out.mean_sad += v;
        out.max_sad = std::max(out.max_sad, v);
    }
    out.mean_sad /= static_cast<double>(p);
    return out;
}

} // namespace hsi
