#include <atomic>
#include <cstdlib>
#include <cstring>

#include "vbesov/error.hpp"
#include "vbesov/simd/kernels.hpp"

namespace vbesov::simd {

namespace {

Backend initial_backend() noexcept {
    if (const char* env = std::getenv("VBESOV_SIMD"); env && std::strcmp(env, "scalar") == 0)
        return Backend::scalar;
    return backend_available(Backend::avx2) ? Backend::avx2 : Backend::scalar;
}

std::atomic<Backend>& current() {
    static std::atomic<Backend> b{initial_backend()};
    return b;
}

}  // namespace

std::string_view to_string(Backend b) noexcept { return b == Backend::avx2 ? "avx2" : "scalar"; }

bool backend_available(Backend b) noexcept {
    if (b == Backend::scalar) return true;
#if defined(VBESOV_HAVE_AVX2)
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

const KernelTable& kernels(Backend b) {
    require(backend_available(b), ErrorKind::unsupported,
            "SIMD backend " + std::string(to_string(b)) + " is not available on this host");
#if defined(VBESOV_HAVE_AVX2)
    if (b == Backend::avx2) return detail::avx2_table;
#endif
    return detail::scalar_table;
}

const KernelTable& kernels() noexcept {
#if defined(VBESOV_HAVE_AVX2)
    if (current().load(std::memory_order_relaxed) == Backend::avx2) return detail::avx2_table;
#endif
    return detail::scalar_table;
}

Backend active_backend() noexcept { return current().load(); }

void set_backend(Backend b) {
    require(backend_available(b), ErrorKind::unsupported,
            "SIMD backend " + std::string(to_string(b)) + " is not available on this host");
    current().store(b);
}

}  // namespace vbesov::simd
