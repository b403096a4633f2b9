#include <cstdlib>
#include <string_view>

#include "doseplane/kernels/kernels.hpp"

namespace doseplane::kernels {

#if defined(DOSEPLANE_HAVE_AVX2)
extern const KernelSet kAvx2Kernels;
#endif

namespace {

bool cpu_has_avx2_fma() noexcept {
#if defined(DOSEPLANE_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
    __builtin_cpu_init();
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

const KernelSet& resolve() noexcept {
    if (const char* forced = std::getenv("DOSEPLANE_KERNELS"); forced && std::string_view(forced) == "scalar") {
        return scalar_kernels();
    }
    if (const KernelSet* v = avx2_kernels()) return *v;
    return scalar_kernels();
}

}  // namespace

const KernelSet* avx2_kernels() noexcept {
#if defined(DOSEPLANE_HAVE_AVX2)
    static const bool ok = cpu_has_avx2_fma();
    return ok ? &kAvx2Kernels : nullptr;
#else
    return nullptr;
#endif
}

const KernelSet& active_kernels() noexcept {
    static const KernelSet& k = resolve();
    return k;
}

}  // namespace doseplane::kernels
