#pragma once

#include <cstddef>
#include <string_view>

// Small dense kernels used by the Lyapunov solver and the covariance
// integrator. Every kernel has a scalar reference and optional SIMD variants
// picked at runtime; all variants must agree to rounding.
namespace levcool::kernels {

enum class Backend { scalar, avx2, neon };

struct Table {
    // y += a * x
    void (*axpy)(double a, const double* x, double* y, std::size_t n);
    double (*dot)(const double* x, const double* y, std::size_t n);
    // C = A * B, all column-major; A is m x k, B is k x n, C is m x n.
    void (*gemm)(std::size_t m, std::size_t n, std::size_t k,
                 const double* a, const double* b, double* c);
};

bool available(Backend b);
std::string_view name(Backend b);
const Table& table(Backend b);

// Best available backend unless LEVCOOL_KERNELS names another one.
Backend active();
// Throws std::invalid_argument if the backend is not available here.
void set_active(Backend b);

inline void axpy(double a, const double* x, double* y, std::size_t n) { table(active()).axpy(a, x, y, n); }
inline double dot(const double* x, const double* y, std::size_t n) { return table(active()).dot(x, y, n); }
inline void gemm(std::size_t m, std::size_t n, std::size_t k, const double* a, const double* b, double* c)
{
    table(active()).gemm(m, n, k, a, b, c);
}

namespace detail {
extern const Table scalar_table;
#if defined(__x86_64__) || defined(_M_X64)
extern const Table avx2_table;
#endif
#if defined(__aarch64__)
extern const Table neon_table;
#endif
}  // namespace detail

}  // namespace levcool::kernels
