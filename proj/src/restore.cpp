#include "hsi/restore.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "hsi/imgops.hpp"
#include "hsi/rng.hpp"

namespace hsi {

namespace {

constexpr double kKernelSumTol = 1e-12;

// Per-band linear operator machinery. A band plane is h*w doubles.
struct BandOperator {
    const DegradationSpec* spec;
    std::size_t h, w;

    void forward(const double* in, double* out) const {
        if (std::holds_alternative<IdentityOp>(spec->op)) {
            std::copy(in, in + h * w, out);
        } else if (const auto* m = std::get_if<MaskOp>(&spec->op)) {
            for (std::size_t i = 0; i < h * w; ++i) out[i] = m->mask.flags[i] ? in[i] : 0.0;
        } else {
            conv2_reflect(in, out, h, w, std::get<BlurOp>(spec->op).kernel);
        }
    }

    void adjoint(const double* in, double* out) const {
        if (std::holds_alternative<IdentityOp>(spec->op)) {
            std::copy(in, in + h * w, out);
        } else if (const auto* m = std::get_if<MaskOp>(&spec->op)) {
            for (std::size_t i = 0; i < h * w; ++i) out[i] = m->mask.flags[i] ? in[i] : 0.0;
        } else {
            conv2_reflect_adjoint(in, out, h, w, std::get<BlurOp>(spec->op).kernel);
        }
    }
};

// gradient operator T(v) = 2 (H^T H v + lambda L^T L v); its largest
// eigenvalue is the Lipschitz constant of the objective gradient
double lipschitz_estimate(const BandOperator& op, double lambda) {
    const std::size_t n = op.h * op.w;
    Rng rng(0x5DEECE66DULL);
    std::vector<double> v(n), hv(n), thv(n), lv(n), tlv(n), tv(n);
    for (auto& x : v) x = rng.uniform() - 0.5;
    double lam = 1.0;
    for (int round = 0; round < 20; ++round) {
        double norm = 0.0;
        for (double x : v) norm += x * x;
        norm = std::sqrt(norm);
        if (norm == 0.0) break;
        for (auto& x : v) x /= norm;
        op.forward(v.data(), hv.data());
        op.adjoint(hv.data(), thv.data());
        conv2_reflect(v.data(), lv.data(), op.h, op.w, laplacian_kernel());
        conv2_reflect_adjoint(lv.data(), tlv.data(), op.h, op.w, laplacian_kernel());
        double rayleigh = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            tv[i] = 2.0 * (thv[i] + lambda * tlv[i]);
            rayleigh += tv[i] * v[i];
        }
        lam = std::abs(rayleigh);
        v = tv;
    }
    return lam;
}

} // namespace

void DegradationSpec::validate(std::size_t height, std::size_t width) const {
    if (noise_sigma < 0.0) throw Error(ErrorCode::BadConfig, "noise_sigma must be >= 0");
    if (const auto* m = std::get_if<MaskOp>(&op)) {
        if (m->mask.height != height || m->mask.width != width)
            throw Error(ErrorCode::DimMismatch,
                        "mask is " + std::to_string(m->mask.height) + "x" +
                            std::to_string(m->mask.width) + ", cube is " + std::to_string(height) +
                            "x" + std::to_string(width));
    } else if (const auto* bl = std::get_if<BlurOp>(&op)) {
        if (bl->kernel.rows() % 2 == 0 || bl->kernel.cols() % 2 == 0)
            throw Error(ErrorCode::BadConfig, "blur kernel sides must be odd");
        if (std::abs(bl->kernel.sum() - 1.0) > kKernelSumTol)
            throw Error(ErrorCode::BadConfig, "blur kernel must sum to 1");
    }
}

HyperCube degrade(const HyperCube& clean, const DegradationSpec& spec) {
    spec.validate(clean.height(), clean.width());
    const std::size_t h = clean.height(), w = clean.width(), l = clean.bands();
    BandOperator op{&spec, h, w};

    HyperCube out(h, w, l, clean.quantity(), clean.axis());
    out.metadata() = clean.metadata();
    std::vector<double> in(h * w), res(h * w);
    for (std::size_t b = 0; b < l; ++b) {
        for (std::size_t r = 0; r < h; ++r)
            for (std::size_t c = 0; c < w; ++c) in[r * w + c] = clean.at(r, c, b);
        op.forward(in.data(), res.data());
        for (std::size_t r = 0; r < h; ++r)
            for (std::size_t c = 0; c < w; ++c) out.at(r, c, b) = res[r * w + c];
    }
    if (spec.noise_sigma > 0.0) {
        Rng rng(spec.seed);
        for (auto& v : out.values()) v += spec.noise_sigma * rng.gaussian();
    }
    return out;
}

std::pair<HyperCube, SolveReport> restore(const HyperCube& observed, const DegradationSpec& spec,
                                          const RestoreConfig& cfg) {
    spec.validate(observed.height(), observed.width());
    if (cfg.max_iters < 1) throw Error(ErrorCode::BadConfig, "max_iters must be >= 1");
    if (!(cfg.tol > 0.0)) throw Error(ErrorCode::BadConfig, "tol must be > 0");
    if (cfg.lambda < 0.0) throw Error(ErrorCode::BadConfig, "lambda must be >= 0");

    const std::size_t h = observed.height(), w = observed.width(), l = observed.bands();
    const std::size_t n = h * w;
    BandOperator op{&spec, h, w};

    // fold the mask into Y so unobserved entries carry no fidelity signal
    std::vector<std::vector<double>> y(l, std::vector<double>(n));
    for (std::size_t b = 0; b < l; ++b)
        for (std::size_t r = 0; r < h; ++r)
            for (std::size_t c = 0; c < w; ++c) y[b][r * w + c] = observed.at(r, c, b);
    if (const auto* m = std::get_if<MaskOp>(&spec.op))
        for (std::size_t b = 0; b < l; ++b)
            for (std::size_t i = 0; i < n; ++i)
                if (!m->mask.flags[i]) y[b][i] = 0.0;

    double step = cfg.step;
    if (step <= 0.0) {
        const double lip = lipschitz_estimate(op, cfg.lambda);
        step = 1.0 / std::max(1.05 * lip, 1e-12);
    }

    // init: adjoint of the observation (identity/mask: Y itself)
    std::vector<std::vector<double>> x(l, std::vector<double>(n));
    for (std::size_t b = 0; b < l; ++b) op.adjoint(y[b].data(), x[b].data());

    std::vector<double> hx(n), residual(n), grad_fid(n), lx(n), ltlx(n);
    auto objective = [&](const std::vector<std::vector<double>>& xs) {
        double f = 0.0;
        for (std::size_t b = 0; b < l; ++b) {
            op.forward(xs[b].data(), hx.data());
            for (std::size_t i = 0; i < n; ++i) {
                const double d = hx[i] - y[b][i];
                f += d * d;
            }
            if (cfg.lambda > 0.0) {
                conv2_reflect(xs[b].data(), lx.data(), h, w, laplacian_kernel());
                for (std::size_t i = 0; i < n; ++i) f += cfg.lambda * lx[i] * lx[i];
            }
        }
        return f;
    };

    SolveReport report;
    double f = objective(x);
    report.objective_trace.push_back(f);
    bool converged = (f == 0.0);

    int it = 0;
    for (; it < cfg.max_iters && !converged; ++it) {
        for (std::size_t b = 0; b < l; ++b) {
            op.forward(x[b].data(), hx.data());
            for (std::size_t i = 0; i < n; ++i) hx[i] -= y[b][i];
            op.adjoint(hx.data(), grad_fid.data());
            if (cfg.lambda > 0.0) {
                conv2_reflect(x[b].data(), lx.data(), h, w, laplacian_kernel());
                conv2_reflect_adjoint(lx.data(), ltlx.data(), h, w, laplacian_kernel());
                for (std::size_t i = 0; i < n; ++i)
                    x[b][i] -= step * 2.0 * (grad_fid[i] + cfg.lambda * ltlx[i]);
            } else {
                for (std::size_t i = 0; i < n; ++i) x[b][i] -= step * 2.0 * grad_fid[i];
            }
        }
        const double f_new = objective(x);
        report.objective_trace.push_back(f_new);
        if (f > 0.0 && (f - f_new) / f < cfg.tol) converged = true;
        if (f_new == 0.0) converged = true;
        f = f_new;
    }
    report.iterations = it;
    report.converged = converged;
    if (!converged) {
        std::ostringstream msg;
        msg << "NonConvergence: relative decrease still above tol after " << cfg.max_iters
            << " iterations";
        report.warning = msg.str();
    }

    HyperCube out(h, w, l, observed.quantity(), observed.axis());
    out.metadata() = observed.metadata();
    for (std::size_t b = 0; b < l; ++b)
        for (std::size_t r = 0; r < h; ++r)
            for (std::size_t c = 0; c < w; ++c) out.at(r, c, b) = x[b][r * w + c];
    return {std::move(out), std::move(report)};
}

std::string SolveReport::to_json() const {
    std::ostringstream out;
    out.precision(17);
    out << "{\"iterations\": " << iterations << ", \"objective_trace\": [";
    for (std::size_t i = 0; i < objective_trace.size(); ++i)
        out << (i ? ", " : "") << objective_trace[i];
    out << "], \"converged\": " << (converged ? "true" : "false") << "}";
    return out.str();
}

double mse(const HyperCube& reference, const HyperCube& test) {
    if (!reference.same_shape(test))
        throw Error(ErrorCode::DimMismatch, "mse inputs disagree on shape");
    double acc = 0.0;
    const auto& a = reference.values();
    const auto& b = test.values();
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        acc += d * d;
    }
    return acc / static_cast<double>(a.size());
}

double psnr(const HyperCube& reference, const HyperCube& test, double peak) {
    const double m = mse(reference, test);
    if (m == 0.0) return std::numeric_limits<double>::infinity();
    return 10.0 * std::log10(peak * peak / m);
}

Matrix make_kernel(const std::string& name) {
    auto box = [](int side) {
        Matrix k = Matrix::Constant(side, side, 1.0 / (side * side));
        return k;
    };
    auto gauss = [](int side, double sigma) {
        Matrix k(side, side);
        const int c = side / 2;
        for (int i = 0; i < side; ++i)
            for (int j = 0; j < side; ++j)
                k(i, j) = std::exp(-((i - c) * (i - c) + (j - c) * (j - c)) / (2.0 * sigma * sigma));
        k /= k.sum();
        return k;
    };
    if (name == "box3") return box(3);
    if (name == "box5") return box(5);
    if (name == "gauss3") return gauss(3, 0.8);
    if (name == "gauss5") return gauss(5, 1.1);
    throw Error(ErrorCode::BadConfig, "unknown kernel \"" + name + "\"");
}

} // namespace hsi
