#include <cmath>

#include "doseplane/kernels/kernels.hpp"

namespace doseplane::kernels {
namespace {

void linear_predictor(const double* const* cols, const double* coef, std::size_t k, std::size_t n, double* out) {
    for (std::size_t i = 0; i < n; ++i) {
        double eta = 0.0;
        for (std::size_t j = 0; j < k; ++j) eta += coef[j] * cols[j][i];
        out[i] = eta;
    }
}

double probit_loglik(const double* const* cols, const double* coef, std::size_t k, const double* sign,
                     std::size_t n, double lo) {
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double eta = 0.0;
        for (std::size_t j = 0; j < k; ++j) eta += coef[j] * cols[j][i];
        double p = 0.5 * std::erfc(-sign[i] * eta * M_SQRT1_2);
        if (p < lo) p = lo;
        if (p > 1.0 - lo) p = 1.0 - lo;
        total += std::log(p);
    }
    return total;
}

void exceedance_counts(const double* const* draws, std::size_t n_draws, const double* const* feats,
                       std::size_t n_grid, std::size_t k, double threshold, std::uint32_t* counts) {
    for (std::size_t g = 0; g < n_grid; ++g) {
        std::uint32_t c = 0;
        for (std::size_t d = 0; d < n_draws; ++d) {
            double eta = 0.0;
            for (std::size_t j = 0; j < k; ++j) eta += draws[j][d] * feats[j][g];
            c += eta > threshold ? 1u : 0u;
        }
        counts[g] = c;
    }
}

void conditional_solve(const double* a0, const double* a_fixed, const double* a_free, const double* a3,
                       double target, double v, std::size_t n, double* out) {
    for (std::size_t d = 0; d < n; ++d) out[d] = (target - a0[d] - a_fixed[d] * v) / (a_free[d] + a3[d] * v);
}

const KernelSet kScalar{"scalar", &linear_predictor, &probit_loglik, &exceedance_counts, &conditional_solve};

}  // namespace

const KernelSet& scalar_kernels() noexcept { return kScalar; }

}  // namespace doseplane::kernels
