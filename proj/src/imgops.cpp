#include "hsi/imgops.hpp"

#include <cstring>

namespace hsi {

std::size_t reflect_index(long i, std::size_t n) {
    const long len = static_cast<long>(n);
    if (len == 1) return 0;
    const long period = 2 * len;
    long m = i % period;
    if (m < 0) m += period;
    if (m >= len) m = period - 1 - m;
    return static_cast<std::size_t>(m);
}

void conv2_reflect(const double* in, double* out, std::size_t h, std::size_t w,
                   const Matrix& kernel) {
    const long kh = kernel.rows(), kw = kernel.cols();
    const long ch = kh / 2, cw = kw / 2;
    for (std::size_t r = 0; r < h; ++r) {
        for (std::size_t c = 0; c < w; ++c) {
            double acc = 0.0;
            for (long i = 0; i < kh; ++i) {
                const std::size_t rr = reflect_index(static_cast<long>(r) + i - ch, h);
                for (long j = 0; j < kw; ++j) {
                    const std::size_t cc = reflect_index(static_cast<long>(c) + j - cw, w);
                    acc += kernel(i, j) * in[rr * w + cc];
                }
            }
            out[r * w + c] = acc;
        }
    }
}

void conv2_reflect_adjoint(const double* in, double* out, std::size_t h, std::size_t w,
                           const Matrix& kernel) {
    const long kh = kernel.rows(), kw = kernel.cols();
    const long ch = kh / 2, cw = kw / 2;
    std::memset(out, 0, h * w * sizeof(double));
    for (std::size_t r = 0; r < h; ++r) {
        for (std::size_t c = 0; c < w; ++c) {
            const double v = in[r * w + c];
            if (v == 0.0) continue;
            for (long i = 0; i < kh; ++i) {
                const std::size_t rr = reflect_index(static_cast<long>(r) + i - ch, h);
                for (long j = 0; j < kw; ++j) {
                    const std::size_t cc = reflect_index(static_cast<long>(c) + j - cw, w);
                    out[rr * w + cc] += kernel(i, j) * v;
                }
            }
        }
    }
}

const Matrix& laplacian_kernel() {
    static const Matrix k = [] {
        Matrix m(3, 3);
        m << 0, 1, 0, 1, -4, 1, 0, 1, 0;
        return m;
    }();
    return k;
}

void decimate(const double* in, double* out, std::size_t h, std::size_t w, std::size_t s) {
    const std::size_t oh = h / s, ow = w / s;
    for (std::size_t r = 0; r < oh; ++r)
        for (std::size_t c = 0; c < ow; ++c) out[r * ow + c] = in[(r * s) * w + c * s];
}

void decimate_adjoint(const double* in, double* out, std::size_t h, std::size_t w, std::size_t s) {
    const std::size_t oh = h / s, ow = w / s;
    std::memset(out, 0, h * w * sizeof(double));
    for (std::size_t r = 0; r < oh; ++r)
        for (std::size_t c = 0; c < ow; ++c) out[(r * s) * w + c * s] = in[r * ow + c];
}

} // namespace hsi
