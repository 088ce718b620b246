#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "hsi/imgops.hpp"
#include "hsi/restore.hpp"
#include "hsi/rng.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

using namespace hsi;

namespace {

// solve the restoration problem per band with the materialized-operator
// oracle and compare against the gradient-descent path
double restore_vs_oracle(const HyperCube& clean, const DegradationSpec& spec, double lambda) {
    HyperCube observed = degrade(clean, spec);
    const std::size_t h = clean.height(), w = clean.width();

    oracle::Matrix h_mat;
    if (std::holds_alternative<IdentityOp>(spec.op))
        h_mat = oracle::Matrix::Identity(static_cast<long>(h * w), static_cast<long>(h * w));
    else if (const auto* m = std::get_if<MaskOp>(&spec.op))
        h_mat = oracle::mask_matrix(h, w, m->mask.flags);
    else
        h_mat = oracle::conv_matrix(h, w, std::get<BlurOp>(spec.op).kernel);
    oracle::Matrix l_mat = oracle::laplacian_matrix(h, w);

    RestoreConfig cfg;
    cfg.lambda = lambda;
    cfg.max_iters = 50000;
    cfg.tol = 1e-14;
    auto [restored, report] = restore(observed, spec, cfg);

    double num = 0.0, den = 0.0;
    for (std::size_t b = 0; b < clean.bands(); ++b) {
        oracle::Vector y(static_cast<long>(h * w));
        for (std::size_t r = 0; r < h; ++r)
            for (std::size_t c = 0; c < w; ++c) {
                double v = observed.at(r, c, b);
                if (const auto* m = std::get_if<MaskOp>(&spec.op))
                    if (!m->mask.flags[r * w + c]) v = 0.0;
                y(static_cast<long>(r * w + c)) = v;
            }
        oracle::Vector x_star = oracle::tikhonov_solve(h_mat, l_mat, lambda, y);
        for (std::size_t r = 0; r < h; ++r)
            for (std::size_t c = 0; c < w; ++c) {
                const double d = restored.at(r, c, b) - x_star(static_cast<long>(r * w + c));
                num += d * d;
                den += x_star(static_cast<long>(r * w + c)) * x_star(static_cast<long>(r * w + c));
            }
    }
    return std::sqrt(num / den);
}

HyperCube smooth_cube(std::size_t h, std::size_t w, std::size_t l, std::uint64_t seed) {
    Rng rng(seed);
    HyperCube cube(h, w, l, Quantity::Radiance);
    for (std::size_t b = 0; b < l; ++b) {
        const double fx = rng.uniform(0.15, 0.5), fy = rng.uniform(0.15, 0.5);
        const double phase = rng.uniform(0.0, 6.28);
        for (std::size_t r = 0; r < h; ++r)
            for (std::size_t c = 0; c < w; ++c)
                cube.at(r, c, b) =
                    0.5 + 0.3 * std::sin(fx * static_cast<double>(r) + phase) *
                              std::cos(fy * static_cast<double>(c));
    }
    return cube;
}

} // namespace

TEST_CASE("identity degradation with zero noise is the identity") {
    HyperCube cube = smooth_cube(5, 4, 3, 1);
    DegradationSpec spec{IdentityOp{}, 0.0, 0};
    CHECK(testutil::cubes_identical(cube, degrade(cube, spec)));

    MaskPlane all = MaskPlane::all_observed(5, 4);
    DegradationSpec mask_spec{MaskOp{all}, 0.0, 0};
    CHECK(testutil::cubes_identical(cube, degrade(cube, mask_spec)));
}

TEST_CASE("box blur spreads a one-hot band into ninths") {
    HyperCube cube(5, 5, 1, Quantity::Radiance);
    cube.at(2, 2, 0) = 1.0;
    DegradationSpec spec{BlurOp{make_kernel("box3")}, 0.0, 0};
    HyperCube blurred = degrade(cube, spec);
    for (std::size_t r = 0; r < 5; ++r)
        for (std::size_t c = 0; c < 5; ++c) {
            const bool inside = r >= 1 && r <= 3 && c >= 1 && c <= 3;
            CHECK(blurred.at(r, c, 0) == doctest::Approx(inside ? 1.0 / 9.0 : 0.0));
        }
}

TEST_CASE("reflect padding keeps constants constant under blur and kills them under laplacian") {
    HyperCube cube(4, 4, 1, Quantity::Radiance);
    for (auto& v : cube.values()) v = 0.7;
    DegradationSpec spec{BlurOp{make_kernel("gauss5")}, 0.0, 0};
    HyperCube blurred = degrade(cube, spec);
    for (double v : blurred.values()) CHECK(v == doctest::Approx(0.7).epsilon(1e-12));

    std::vector<double> plane(16, 0.7), lap(16);
    conv2_reflect(plane.data(), lap.data(), 4, 4, laplacian_kernel());
    for (double v : lap) CHECK(v == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("degradation is deterministic per seed") {
    HyperCube cube = smooth_cube(6, 6, 2, 9);
    DegradationSpec spec{IdentityOp{}, 0.05, 77};
    HyperCube a = degrade(cube, spec);
    HyperCube b = degrade(cube, spec);
    CHECK(testutil::cubes_identical(a, b));
    spec.seed = 78;
    HyperCube c = degrade(cube, spec);
    CHECK_FALSE(testutil::cubes_identical(a, c));
}

TEST_CASE("conv and decimation adjoints satisfy the inner-product identity") {
    Rng rng(11);
    const std::size_t h = 7, w = 5;
    Matrix kernel = make_kernel("gauss3");
    std::vector<double> x(h * w), ax(h * w), y(h * w), aty(h * w);
    for (auto& v : x) v = rng.uniform(-1.0, 1.0);
    for (auto& v : y) v = rng.uniform(-1.0, 1.0);
    conv2_reflect(x.data(), ax.data(), h, w, kernel);
    conv2_reflect_adjoint(y.data(), aty.data(), h, w, kernel);
    double lhs = 0.0, rhs = 0.0;
    for (std::size_t i = 0; i < h * w; ++i) {
        lhs += ax[i] * y[i];
        rhs += x[i] * aty[i];
    }
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));

    // decimation pair (use 8x6 so the scale divides)
    const std::size_t h2 = 8, w2 = 6, s = 2;
    std::vector<double> x2(h2 * w2), dx(h2 * w2 / (s * s)), y2(h2 * w2 / (s * s)), dty(h2 * w2);
    for (auto& v : x2) v = rng.uniform(-1.0, 1.0);
    for (auto& v : y2) v = rng.uniform(-1.0, 1.0);
    decimate(x2.data(), dx.data(), h2, w2, s);
    decimate_adjoint(y2.data(), dty.data(), h2, w2, s);
    lhs = rhs = 0.0;
    for (std::size_t i = 0; i < dx.size(); ++i) lhs += dx[i] * y2[i];
    for (std::size_t i = 0; i < x2.size(); ++i) rhs += x2[i] * dty[i];
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
}

TEST_CASE("noiseless identity observation is already the solution") {
    HyperCube cube = smooth_cube(4, 4, 2, 3);
    DegradationSpec spec{IdentityOp{}, 0.0, 0};
    RestoreConfig cfg;
    cfg.lambda = 0.0;
    auto [restored, report] = restore(cube, spec, cfg);
    CHECK(testutil::cubes_identical(cube, restored));
    CHECK(report.iterations == 0);
    CHECK(report.converged);
    CHECK(report.objective_trace.front() == 0.0);
}

TEST_CASE("blur restoration matches the dense normal-equation oracle") {
    HyperCube cube = smooth_cube(8, 8, 2, 21);
    DegradationSpec spec{BlurOp{make_kernel("box3")}, 0.0, 0};
    CHECK(restore_vs_oracle(cube, spec, 0.1) < 1e-4);
}

TEST_CASE("inpainting restoration matches the oracle and fills plausibly") {
    HyperCube cube = smooth_cube(8, 8, 2, 22);
    MaskPlane mask = MaskPlane::all_observed(8, 8);
    Rng rng(4);
    std::size_t hidden = 0;
    for (auto& f : mask.flags)
        if (rng.uniform() < 0.3) {
            f = 0;
            ++hidden;
        }
    REQUIRE(hidden > 5);
    DegradationSpec spec{MaskOp{mask}, 0.0, 0};
    CHECK(restore_vs_oracle(cube, spec, 0.05) < 1e-4);

    HyperCube observed = degrade(cube, spec);
    RestoreConfig cfg;
    cfg.lambda = 0.05;
    cfg.max_iters = 20000;
    cfg.tol = 1e-13;
    auto [restored, report] = restore(observed, spec, cfg);
    double lo = 1e300, hi = -1e300;
    for (double v : cube.values()) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    for (std::size_t r = 0; r < 8; ++r)
        for (std::size_t c = 0; c < 8; ++c)
            for (std::size_t b = 0; b < 2; ++b) {
                const double v = restored.at(r, c, b);
                CHECK(std::isfinite(v));
                if (mask.observed(r, c))
                    CHECK(std::abs(v - observed.at(r, c, b)) < 0.02);
                else {
                    CHECK(v > lo - 0.1);
                    CHECK(v < hi + 0.1);
                }
            }
}

TEST_CASE("objective trace never increases") {
    HyperCube cube = smooth_cube(8, 8, 3, 30);
    for (int variant = 0; variant < 3; ++variant) {
        DegradationSpec spec{IdentityOp{}, 0.03, 5};
        if (variant == 1) spec.op = BlurOp{make_kernel("gauss3")};
        if (variant == 2) {
            MaskPlane mask = MaskPlane::all_observed(8, 8);
            for (std::size_t i = 0; i < mask.flags.size(); i += 3) mask.flags[i] = 0;
            spec.op = MaskOp{mask};
        }
        HyperCube observed = degrade(cube, spec);
        RestoreConfig cfg;
        cfg.lambda = 0.08;
        cfg.max_iters = 300;
        cfg.tol = 1e-15;
        auto [restored, report] = restore(observed, spec, cfg);
        for (std::size_t i = 1; i < report.objective_trace.size(); ++i)
            CHECK(report.objective_trace[i] <= report.objective_trace[i - 1]);
    }
}

TEST_CASE("denoising with a tuned prior beats the observation") {
    HyperCube clean = smooth_cube(16, 16, 4, 55);
    DegradationSpec spec{IdentityOp{}, 0.05, 123};
    HyperCube observed = degrade(clean, spec);
    double best = -1e300;
    for (double lambda : {0.1, 0.3, 1.0, 3.0, 10.0}) {
        RestoreConfig cfg;
        cfg.lambda = lambda;
        cfg.max_iters = 2000;
        cfg.tol = 1e-12;
        auto [restored, report] = restore(observed, spec, cfg);
        best = std::max(best, psnr(clean, restored, 1.0));
    }
    CHECK(best > psnr(clean, observed, 1.0));
}

TEST_CASE("mse and psnr agree with hand arithmetic") {
    HyperCube a = smooth_cube(3, 3, 2, 2);
    CHECK(mse(a, a) == 0.0);
    CHECK(std::isinf(psnr(a, a, 1.0)));

    HyperCube b = a;
    for (auto& v : b.values()) v += 0.1;
    CHECK(mse(a, b) == doctest::Approx(0.01).epsilon(1e-12));
    CHECK(psnr(a, b, 1.0) == doctest::Approx(20.0).epsilon(1e-9));

    Rng rng(8);
    HyperCube c = a;
    double acc = 0.0;
    for (auto& v : c.values()) {
        const double delta = rng.uniform(-0.5, 0.5);
        v += delta;
        acc += delta * delta;
    }
    CHECK(mse(a, c) ==
          doctest::Approx(acc / static_cast<double>(a.samples())).epsilon(1e-12));
}

TEST_CASE("shape mismatches are rejected") {
    HyperCube a(2, 2, 2), b(2, 3, 2);
    CHECK_THROWS_AS((void)mse(a, b), Error);
    MaskPlane mask = MaskPlane::all_observed(4, 4);
    DegradationSpec spec{MaskOp{mask}, 0.0, 0};
    CHECK_THROWS_AS((void)degrade(a, spec), Error);
}

TEST_CASE("kernels must be odd-sided and normalized") {
    Matrix even = Matrix::Constant(2, 2, 0.25);
    DegradationSpec spec{BlurOp{even}, 0.0, 0};
    HyperCube cube(4, 4, 1);
    CHECK_THROWS_AS((void)degrade(cube, spec), Error);

    Matrix unnormalized = Matrix::Constant(3, 3, 1.0);
    spec.op = BlurOp{unnormalized};
    CHECK_THROWS_AS((void)degrade(cube, spec), Error);
}

TEST_CASE("hitting the iteration cap reports non-convergence softly") {
    HyperCube cube = smooth_cube(8, 8, 1, 77);
    DegradationSpec spec{BlurOp{make_kernel("gauss5")}, 0.0, 0};
    HyperCube observed = degrade(cube, spec);
    RestoreConfig cfg;
    cfg.lambda = 0.1;
    cfg.max_iters = 3;
    cfg.tol = 1e-15;
    auto [restored, report] = restore(observed, spec, cfg);
    CHECK_FALSE(report.converged);
    CHECK(report.iterations == 3);
    CHECK(report.warning.find("NonConvergence") != std::string::npos);
    CHECK(report.objective_trace.size() == 4);
}

TEST_CASE("striping masks restore like any other mask") {
    HyperCube cube = smooth_cube(8, 8, 2, 78);
    MaskPlane mask = MaskPlane::all_observed(8, 8);
    for (std::size_t r = 0; r < 8; ++r) {
        mask.flags[r * 8 + 2] = 0; // dead columns
        mask.flags[r * 8 + 5] = 0;
    }
    DegradationSpec spec{MaskOp{mask}, 0.0, 0};
    CHECK(restore_vs_oracle(cube, spec, 0.05) < 1e-4);
}
