#pragma once

#include <cstddef>
#include <vector>

#include "hsi/cube.hpp"

namespace hsi {

// 2-D plane operators shared by the degradation model and the inverse
// solvers. All spatial filtering uses symmetric reflect padding (edge pixel
// repeated); the restoration gradient and the dense test oracles must agree
// on this convention, so it lives in exactly one place.

// index mirrored back into [0, n)
std::size_t reflect_index(long i, std::size_t n);

// correlation of plane (h x w, row-major) with kernel (kh x kw, row-major),
// reflect padding, same-size output
void conv2_reflect(const double* in, double* out, std::size_t h, std::size_t w,
                   const Matrix& kernel);

// exact adjoint of conv2_reflect (scatter form)
void conv2_reflect_adjoint(const double* in, double* out, std::size_t h, std::size_t w,
                           const Matrix& kernel);

// 5-point discrete Laplacian as a reflect-padded stencil
const Matrix& laplacian_kernel();

// subsample at stride s starting from (0, 0): out(r, c) = in(r s, c s)
void decimate(const double* in, double* out, std::size_t h, std::size_t w, std::size_t s);

// adjoint of decimate: zero insertion
void decimate_adjoint(const double* in, double* out, std::size_t h, std::size_t w, std::size_t s);

} // namespace hsi
