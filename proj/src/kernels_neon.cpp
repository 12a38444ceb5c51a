#include "levcool/kernels.hpp"

#if defined(__aarch64__)
#include <arm_neon.h>

namespace levcool::kernels::detail {
namespace {

void axpy_neon(double a, const double* x, double* y, std::size_t n)
{
    const float64x2_t va = vdupq_n_f64(a);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        float64x2_t y0 = vld1q_f64(y + i);
        float64x2_t y1 = vld1q_f64(y + i + 2);
        y0 = vfmaq_f64(y0, va, vld1q_f64(x + i));
        y1 = vfmaq_f64(y1, va, vld1q_f64(x + i + 2));
        vst1q_f64(y + i, y0);
        vst1q_f64(y + i + 2, y1);
    }
    for (; i < n; ++i)
        y[i] += a * x[i];
}

double dot_neon(const double* x, const double* y, std::size_t n)
{
    float64x2_t acc0 = vdupq_n_f64(0.0);
    float64x2_t acc1 = vdupq_n_f64(0.0);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        acc0 = vfmaq_f64(acc0, vld1q_f64(x + i), vld1q_f64(y + i));
        acc1 = vfmaq_f64(acc1, vld1q_f64(x + i + 2), vld1q_f64(y + i + 2));
    }
    double s = vaddvq_f64(vaddq_f64(acc0, acc1));
    for (; i < n; ++i)
        s += x[i] * y[i];
    return s;
}

void gemm_neon(std::size_t m, std::size_t n, std::size_t k, const double* a, const double* b, double* c)
{
    for (std::size_t j = 0; j < n; ++j) {
        double* cj = c + j * m;
        for (std::size_t i = 0; i < m; ++i)
            cj[i] = 0.0;
        for (std::size_t p = 0; p < k; ++p)
            axpy_neon(b[p + j * k], a + p * m, cj, m);
    }
}

}  // namespace

const Table neon_table{axpy_neon, dot_neon, gemm_neon};

}  // namespace levcool::kernels::detail
#endif
