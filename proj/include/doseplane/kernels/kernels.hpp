#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>

// Data-parallel inner loops. Every routine has a scalar reference implementation and,
// where the target supports it, an AVX2+FMA variant picked at runtime. Variants agree to
// rounding (see tests/unit/test_kernels.cpp); they are not required to be bit-identical.
//
// Feature blocks are column-major: cols[k][i] is feature k of row i.

namespace doseplane::kernels {

struct KernelSet {
    std::string_view name;

    /// out[i] = sum_k coef[k] * cols[k][i]
    void (*linear_predictor)(const double* const* cols, const double* coef, std::size_t k, std::size_t n,
                             double* out);

    /// sum_i log(clamp(Phi(sign[i] * eta_i), lo, 1 - lo)), eta_i = sum_k coef[k] * cols[k][i].
    /// sign[i] is +1 for an observed event and -1 for a non-event.
    double (*probit_loglik)(const double* const* cols, const double* coef, std::size_t k, const double* sign,
                            std::size_t n, double lo);

    /// counts[g] = #{d : sum_k draws[k][d] * feats[k][g] > threshold}
    void (*exceedance_counts)(const double* const* draws, std::size_t n_draws, const double* const* feats,
                              std::size_t n_grid, std::size_t k, double threshold, std::uint32_t* counts);

    /// out[d] = (target - a0[d] - a_fixed[d] * v) / (a_free[d] + a3[d] * v)
    void (*conditional_solve)(const double* a0, const double* a_fixed, const double* a_free, const double* a3,
                              double target, double v, std::size_t n, double* out);
};

const KernelSet& scalar_kernels() noexcept;

/// nullptr when the build has no AVX2 variant or the CPU lacks AVX2/FMA.
const KernelSet* avx2_kernels() noexcept;

/// The variant used by the library: AVX2 when available, unless the environment variable
/// DOSEPLANE_KERNELS=scalar forces the reference path. Resolved once per process.
const KernelSet& active_kernels() noexcept;

}  // namespace doseplane::kernels
