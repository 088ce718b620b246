#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "hsi/cube.hpp"

namespace hsi {

// Forward degradation operators, applied band by band.
struct IdentityOp {};
struct MaskOp {
    MaskPlane mask;
};
struct BlurOp {
    Matrix kernel; // odd side lengths, entries sum to 1 (+- 1e-12)
};

// Y = H(X) + N. `seed` drives the additive white Gaussian noise stream.
struct DegradationSpec {
    std::variant<IdentityOp, MaskOp, BlurOp> op;
    double noise_sigma = 0.0;
    std::uint64_t seed = 0;

    void validate(std::size_t height, std::size_t width) const;
};

struct RestoreConfig {
    double lambda = 0.0;   // smoothness weight
    int max_iters = 500;
    double tol = 1e-9;     // relative objective-decrease stop
    double step = 0.0;     // <= 0 means auto (1 / power-iteration Lipschitz estimate)
};

struct SolveReport {
    int iterations = 0;
    std::vector<double> objective_trace; // objective at every iterate, index 0 = init
    bool converged = false;
    std::string warning;

    double final_objective() const {
        return objective_trace.empty() ? 0.0 : objective_trace.back();
    }
    std::string to_json() const;
};

// Applies the forward model and adds seeded Gaussian noise. Deterministic
// for a fixed spec.
HyperCube degrade(const HyperCube& clean, const DegradationSpec& spec);

// argmin_X ||H(X) - Y||_F^2 + lambda ||L X||_F^2 by fixed-step gradient
// descent, L = per-band discrete Laplacian. Masked entries of Y are treated
// as exact zeros (the mask is folded into H, so they never enter the
// fidelity term). Non-convergence is reported in the SolveReport, not thrown.
std::pair<HyperCube, SolveReport> restore(const HyperCube& observed, const DegradationSpec& spec,
                                          const RestoreConfig& cfg);

// Quality metrics. psnr returns +infinity when mse is exactly zero.
double mse(const HyperCube& reference, const HyperCube& test);
double psnr(const HyperCube& reference, const HyperCube& test, double peak);

// Named kernels for the CLI: "box3", "box5", "gauss3", "gauss5".
Matrix make_kernel(const std::string& name);

} // namespace hsi
