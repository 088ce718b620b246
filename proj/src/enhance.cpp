#include "hsi/enhance.hpp"

#include <cmath>
#include <sstream>

#include "hsi/imgops.hpp"
#include "hsi/rng.hpp"

namespace hsi {

namespace {

// cube as band planes for the plane operators
std::vector<std::vector<double>> to_planes(const HyperCube& cube) {
    std::vector<std::vector<double>> planes(cube.bands(),
                                            std::vector<double>(cube.pixels()));
    for (std::size_t b = 0; b < cube.bands(); ++b)
        for (std::size_t r = 0; r < cube.height(); ++r)
            for (std::size_t c = 0; c < cube.width(); ++c)
                planes[b][r * cube.width() + c] = cube.at(r, c, b);
    return planes;
}

HyperCube from_planes(const std::vector<std::vector<double>>& planes, std::size_t h,
                      std::size_t w, Quantity q, const SpectralAxis& axis) {
    HyperCube cube(h, w, planes.size(), q, axis);
    for (std::size_t b = 0; b < planes.size(); ++b)
        for (std::size_t r = 0; r < h; ++r)
            for (std::size_t c = 0; c < w; ++c) cube.at(r, c, b) = planes[b][r * w + c];
    return cube;
}

struct FuseWork {
    const FusionOperators* ops;
    std::size_t h, w, l;        // high-resolution geometry
    std::size_t lh, lw;         // low-resolution geometry
    std::size_t m;              // pan band count
    mutable std::vector<double> blur_buf, low_buf, up_buf;

    // D: blur + decimate, per band
    void spatial_fwd(const std::vector<double>& x, std::vector<double>& out) const {
        conv2_reflect(x.data(), blur_buf.data(), h, w, ops->blur_kernel);
        decimate(blur_buf.data(), out.data(), h, w, ops->scale);
    }
    void spatial_adj(const std::vector<double>& y, std::vector<double>& out) const {
        decimate_adjoint(y.data(), up_buf.data(), h, w, ops->scale);
        conv2_reflect_adjoint(up_buf.data(), out.data(), h, w, ops->blur_kernel);
    }
};

} // namespace

void FusionOperators::validate(std::size_t height, std::size_t width, std::size_t bands) const {
    if (scale < 1) throw Error(ErrorCode::BadConfig, "scale must be >= 1");
    if (height % scale != 0 || width % scale != 0)
        throw Error(ErrorCode::IndivisibleDims,
                    std::to_string(height) + "x" + std::to_string(width) +
                        " not divisible by scale " + std::to_string(scale));
    if (blur_kernel.rows() % 2 == 0 || blur_kernel.cols() % 2 == 0)
        throw Error(ErrorCode::BadConfig, "blur kernel sides must be odd");
    if (std::abs(blur_kernel.sum() - 1.0) > 1e-12)
        throw Error(ErrorCode::BadConfig, "blur kernel must sum to 1");
    if (spectral_response.cols() != static_cast<Eigen::Index>(bands))
        throw Error(ErrorCode::ShapeMismatch,
                    "spectral response has " + std::to_string(spectral_response.cols()) +
                        " columns for " + std::to_string(bands) + " bands");
    for (Eigen::Index r = 0; r < spectral_response.rows(); ++r) {
        double sum = 0.0;
        for (Eigen::Index c = 0; c < spectral_response.cols(); ++c) {
            if (spectral_response(r, c) < 0.0)
                throw Error(ErrorCode::BadConfig, "spectral response weights must be nonnegative");
            sum += spectral_response(r, c);
        }
        if (std::abs(sum - 1.0) > 1e-9)
            throw Error(ErrorCode::BadConfig,
                        "spectral response row " + std::to_string(r) + " sums to " +
                            std::to_string(sum) + ", expected 1");
    }
}

HyperCube spatial_downsample(const HyperCube& cube, const FusionOperators& ops) {
    ops.validate(cube.height(), cube.width(), cube.bands());
    const std::size_t s = ops.scale;
    const std::size_t oh = cube.height() / s, ow = cube.width() / s;
    HyperCube out(oh, ow, cube.bands(), cube.quantity(), cube.axis());
    out.metadata() = cube.metadata();
    std::vector<double> in(cube.pixels()), blurred(cube.pixels()), low(oh * ow);
    for (std::size_t b = 0; b < cube.bands(); ++b) {
        for (std::size_t r = 0; r < cube.height(); ++r)
            for (std::size_t c = 0; c < cube.width(); ++c)
                in[r * cube.width() + c] = cube.at(r, c, b);
        conv2_reflect(in.data(), blurred.data(), cube.height(), cube.width(), ops.blur_kernel);
        decimate(blurred.data(), low.data(), cube.height(), cube.width(), s);
        for (std::size_t r = 0; r < oh; ++r)
            for (std::size_t c = 0; c < ow; ++c) out.at(r, c, b) = low[r * ow + c];
    }
    return out;
}

HyperCube spectral_project(const HyperCube& cube, const FusionOperators& ops) {
    ops.validate(cube.height(), cube.width(), cube.bands());
    const Matrix& P = ops.spectral_response;
    const std::size_t m = static_cast<std::size_t>(P.rows());

    // output band centers: response-weighted mean of the input centers
    SpectralAxis axis;
    axis.wavelengths.resize(m);
    for (std::size_t j = 0; j < m; ++j) {
        double acc = 0.0;
        for (std::size_t b = 0; b < cube.bands(); ++b)
            acc += P(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(b)) *
                   cube.axis().wavelengths[b];
        axis.wavelengths[j] = acc;
    }

    HyperCube out(cube.height(), cube.width(), m, cube.quantity(), axis);
    out.metadata() = cube.metadata();
    for (std::size_t r = 0; r < cube.height(); ++r)
        for (std::size_t c = 0; c < cube.width(); ++c)
            for (std::size_t j = 0; j < m; ++j) {
                double acc = 0.0;
                for (std::size_t b = 0; b < cube.bands(); ++b)
                    acc += P(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(b)) *
                           cube.at(r, c, b);
                out.at(r, c, j) = acc;
            }
    return out;
}

HyperCube upsample_nearest(const HyperCube& lr, std::size_t scale) {
    HyperCube out(lr.height() * scale, lr.width() * scale, lr.bands(), lr.quantity(), lr.axis());
    out.metadata() = lr.metadata();
    for (std::size_t r = 0; r < out.height(); ++r)
        for (std::size_t c = 0; c < out.width(); ++c)
            for (std::size_t b = 0; b < lr.bands(); ++b)
                out.at(r, c, b) = lr.at(r / scale, c / scale, b);
    return out;
}

std::pair<HyperCube, SolveReport> fuse(const HyperCube& lr_hs, const HyperCube& hr_pan,
                                       const FusionOperators& ops, double lambda,
                                       const RestoreConfig& cfg) {
    const std::size_t h = hr_pan.height(), w = hr_pan.width(), l = lr_hs.bands();
    ops.validate(h, w, l);
    if (lr_hs.height() * ops.scale != h || lr_hs.width() * ops.scale != w)
        throw Error(ErrorCode::ShapeMismatch, "lr_hs dims must equal hr_pan dims / scale");
    if (static_cast<Eigen::Index>(hr_pan.bands()) != ops.spectral_response.rows())
        throw Error(ErrorCode::ShapeMismatch, "hr_pan bands must match spectral response rows");
    if (cfg.max_iters < 1) throw Error(ErrorCode::BadConfig, "max_iters must be >= 1");
    if (!(cfg.tol > 0.0)) throw Error(ErrorCode::BadConfig, "tol must be > 0");

    FuseWork work{&ops, h, w, l, lr_hs.height(), lr_hs.width(), hr_pan.bands(), {}, {}, {}};
    work.blur_buf.resize(h * w);
    work.low_buf.resize(work.lh * work.lw);
    work.up_buf.resize(h * w);

    const auto y_lr = to_planes(lr_hs);
    const auto y_pan = to_planes(hr_pan);
    const Matrix& P = ops.spectral_response;

    auto x = to_planes(upsample_nearest(lr_hs, ops.scale));

    const std::size_t n = h * w;
    const std::size_t ln = work.lh * work.lw;

    std::vector<double> low(ln), lx(n), buf(n);

    auto objective = [&](const std::vector<std::vector<double>>& xs, double* fid_spatial,
                         double* fid_spectral) {
        double fs = 0.0;
        for (std::size_t b = 0; b < l; ++b) {
            work.spatial_fwd(xs[b], low);
            for (std::size_t i = 0; i < ln; ++i) {
                const double d = low[i] - y_lr[b][i];
                fs += d * d;
            }
        }
        double fp = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < work.m; ++j) {
                double acc = 0.0;
                for (std::size_t b = 0; b < l; ++b)
                    acc += P(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(b)) * xs[b][i];
                const double d = acc - y_pan[j][i];
                fp += d * d;
            }
        }
        double freg = 0.0;
        if (lambda > 0.0) {
            for (std::size_t b = 0; b < l; ++b) {
                conv2_reflect(xs[b].data(), lx.data(), h, w, laplacian_kernel());
                for (std::size_t i = 0; i < n; ++i) freg += lambda * lx[i] * lx[i];
            }
        }
        if (fid_spatial) *fid_spatial = fs;
        if (fid_spectral) *fid_spectral = fp;
        return fs + fp + freg;
    };

    // Lipschitz estimate over the whole cube operator
    double step = cfg.step;
    if (step <= 0.0) {
        Rng rng(0x2545F4914F6CDD1DULL);
        std::vector<std::vector<double>> v(l, std::vector<double>(n));
        std::vector<std::vector<double>> tv(l, std::vector<double>(n));
        for (auto& plane : v)
            for (auto& e : plane) e = rng.uniform() - 0.5;
        double lam = 1.0;
        for (int round = 0; round < 20; ++round) {
            double norm = 0.0;
            for (const auto& plane : v)
                for (double e : plane) norm += e * e;
            norm = std::sqrt(norm);
            if (norm == 0.0) break;
            for (auto& plane : v)
                for (auto& e : plane) e /= norm;
            for (std::size_t b = 0; b < l; ++b) {
                work.spatial_fwd(v[b], low);
                work.spatial_adj(low, tv[b]);
            }
            for (std::size_t i = 0; i < n; ++i) {
                for (std::size_t j = 0; j < work.m; ++j) {
                    double acc = 0.0;
                    for (std::size_t b = 0; b < l; ++b)
                        acc += P(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(b)) * v[b][i];
                    for (std::size_t b = 0; b < l; ++b)
                        tv[b][i] += P(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(b)) * acc;
                }
            }
            if (lambda > 0.0) {
                for (std::size_t b = 0; b < l; ++b) {
                    conv2_reflect(v[b].data(), lx.data(), h, w, laplacian_kernel());
                    conv2_reflect_adjoint(lx.data(), buf.data(), h, w, laplacian_kernel());
                    for (std::size_t i = 0; i < n; ++i) tv[b][i] += lambda * buf[i];
                }
            }
            double rayleigh = 0.0;
            for (std::size_t b = 0; b < l; ++b)
                for (std::size_t i = 0; i < n; ++i) {
                    tv[b][i] *= 2.0;
                    rayleigh += tv[b][i] * v[b][i];
                }
            lam = std::abs(rayleigh);
            std::swap(v, tv);
        }
        step = 1.0 / std::max(1.05 * lam, 1e-12);
    }

    SolveReport report;
    double f = objective(x, nullptr, nullptr);
    report.objective_trace.push_back(f);
    bool converged = (f == 0.0);

    std::vector<std::vector<double>> grad(l, std::vector<double>(n));
    int it = 0;
    for (; it < cfg.max_iters && !converged; ++it) {
        for (std::size_t b = 0; b < l; ++b) {
            work.spatial_fwd(x[b], low);
            for (std::size_t i = 0; i < ln; ++i) low[i] -= y_lr[b][i];
            work.spatial_adj(low, grad[b]);
        }
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < work.m; ++j) {
                double acc = 0.0;
                for (std::size_t b = 0; b < l; ++b)
                    acc += P(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(b)) * x[b][i];
                acc -= y_pan[j][i];
                for (std::size_t b = 0; b < l; ++b)
                    grad[b][i] += P(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(b)) * acc;
            }
        }
        if (lambda > 0.0) {
            for (std::size_t b = 0; b < l; ++b) {
                conv2_reflect(x[b].data(), lx.data(), h, w, laplacian_kernel());
                conv2_reflect_adjoint(lx.data(), buf.data(), h, w, laplacian_kernel());
                for (std::size_t i = 0; i < n; ++i) grad[b][i] += lambda * buf[i];
            }
        }
        for (std::size_t b = 0; b < l; ++b)
            for (std::size_t i = 0; i < n; ++i) x[b][i] -= step * 2.0 * grad[b][i];

        const double f_new = objective(x, nullptr, nullptr);
        report.objective_trace.push_back(f_new);
        if (f > 0.0 && (f - f_new) / f < cfg.tol) converged = true;
        if (f_new == 0.0) converged = true;
        f = f_new;
    }
    report.iterations = it;
    report.converged = converged;
    if (!converged) report.warning = "NonConvergence: tol not reached within max_iters";

    HyperCube fused = from_planes(x, h, w, lr_hs.quantity(), lr_hs.axis());
    fused.metadata() = lr_hs.metadata();
    return {std::move(fused), std::move(report)};
}

} // namespace hsi
