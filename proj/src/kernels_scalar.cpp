#include "levcool/kernels.hpp"

namespace levcool::kernels::detail {
namespace {

void axpy_ref(double a, const double* x, double* y, std::size_t n)
{
    for (std::size_t i = 0; i < n; ++i)
        y[i] += a * x[i];
}

double dot_ref(const double* x, const double* y, std::size_t n)
{
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        s += x[i] * y[i];
    return s;
}

void gemm_ref(std::size_t m, std::size_t n, std::size_t k, const double* a, const double* b, double* c)
{
    for (std::size_t j = 0; j < n; ++j) {
        double* cj = c + j * m;
        for (std::size_t i = 0; i < m; ++i)
            cj[i] = 0.0;
        for (std::size_t p = 0; p < k; ++p)
            axpy_ref(b[p + j * k], a + p * m, cj, m);
    }
}

}  // namespace

const Table scalar_table{axpy_ref, dot_ref, gemm_ref};

}  // namespace levcool::kernels::detail
