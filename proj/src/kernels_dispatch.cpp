#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <string>

#include "pudsim/kernels.hpp"

namespace pudsim::kernels {
namespace {

const Backend* resolve_auto() {
#if defined(__x86_64__) || defined(_M_X64)
    if (avx2_available()) return &avx2_backend;
#endif
    return &scalar_backend;
}

const Backend* initial_backend() {
    if (const char* env = std::getenv("PUDSIM_KERNELS")) {
        const std::string name(env);
        if (name == "scalar") return &scalar_backend;
#if defined(__x86_64__) || defined(_M_X64)
        if (name == "avx2" && avx2_available()) return &avx2_backend;
#endif
        // unknown or unavailable: fall through to auto
    }
    return resolve_auto();
}

std::atomic<const Backend*> g_active{nullptr};

}  // namespace

bool avx2_available() {
#if defined(__x86_64__) || defined(_M_X64)
    return __builtin_cpu_supports("avx2");
#else
    return false;
#endif
}

const Backend& active() {
    const Backend* b = g_active.load(std::memory_order_acquire);
    if (!b) {
        b = initial_backend();
        g_active.store(b, std::memory_order_release);
    }
    return *b;
}

void select(std::string_view name) {
    if (name == "scalar") {
        g_active.store(&scalar_backend, std::memory_order_release);
        return;
    }
    if (name == "auto") {
        g_active.store(resolve_auto(), std::memory_order_release);
        return;
    }
#if defined(__x86_64__) || defined(_M_X64)
    if (name == "avx2") {
        if (!avx2_available()) throw std::invalid_argument("avx2 not supported on this CPU");
        g_active.store(&avx2_backend, std::memory_order_release);
        return;
    }
#endif
    throw std::invalid_argument("unknown kernel backend: " + std::string(name));
}

}  // namespace pudsim::kernels
