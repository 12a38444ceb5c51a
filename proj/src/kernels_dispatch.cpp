#include "levcool/kernels.hpp"

#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <string>

namespace levcool::kernels {
namespace {

Backend best_available()
{
    if (available(Backend::avx2))
        return Backend::avx2;
    if (available(Backend::neon))
        return Backend::neon;
    return Backend::scalar;
}

Backend initial_backend()
{
    const char* env = std::getenv("LEVCOOL_KERNELS");
    if (env != nullptr) {
        const std::string v(env);
        for (Backend b : {Backend::scalar, Backend::avx2, Backend::neon})
            if (v == name(b) && available(b))
                return b;
    }
    return best_available();
}

std::atomic<Backend>& current()
{
    static std::atomic<Backend> b{initial_backend()};
    return b;
}

}  // namespace

bool available(Backend b)
{
    switch (b) {
    case Backend::scalar:
        return true;
    case Backend::avx2:
#if defined(__x86_64__) || defined(_M_X64)
        return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
        return false;
#endif
    case Backend::neon:
#if defined(__aarch64__)
        return true;
#else
        return false;
#endif
    }
    return false;
}

std::string_view name(Backend b)
{
    switch (b) {
    case Backend::scalar: return "scalar";
    case Backend::avx2: return "avx2";
    case Backend::neon: return "neon";
    }
    return "unknown";
}

const Table& table(Backend b)
{
    switch (b) {
#if defined(__x86_64__) || defined(_M_X64)
    case Backend::avx2:
        if (available(b))
            return detail::avx2_table;
        break;
#endif
#if defined(__aarch64__)
    case Backend::neon:
        return detail::neon_table;
#endif
    default:
        break;
    }
    return detail::scalar_table;
}

Backend active() { return current().load(std::memory_order_relaxed); }

void set_active(Backend b)
{
    if (!available(b))
        throw std::invalid_argument("kernel backend not available: " + std::string(name(b)));
    current().store(b, std::memory_order_relaxed);
}

}  // namespace levcool::kernels
