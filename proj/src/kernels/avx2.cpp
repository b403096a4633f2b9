// AVX2 + FMA variants. This translation unit is compiled with -mavx2 -mfma and must only be
// entered after a runtime CPU check (see dispatch.cpp).

#include <immintrin.h>

#include <cmath>

#include "doseplane/kernels/kernels.hpp"

namespace doseplane::kernels {
namespace {

constexpr std::size_t kLanes = 4;

inline double hsum(__m256d v) {
    const __m128d lo = _mm256_castpd256_pd128(v);
    const __m128d hi = _mm256_extractf128_pd(v, 1);
    const __m128d s = _mm_add_pd(lo, hi);
    return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

template <std::size_t N>
inline __m256d horner(__m256d x, const double (&c)[N]) {
    // c[0] is the constant term.
    __m256d r = _mm256_set1_pd(c[N - 1]);
    for (std::size_t i = N - 1; i-- > 0;) r = _mm256_fmadd_pd(r, x, _mm256_set1_pd(c[i]));
    return r;
}

// exp(x) for x in [-745, 0]; Cody-Waite reduction by ln2 and a degree-12 Taylor polynomial.
inline __m256d exp_neg(__m256d x) {
    const __m256d ln2_hi = _mm256_set1_pd(6.93147180369123816490e-01);
    const __m256d ln2_lo = _mm256_set1_pd(1.90821492927058770002e-10);
    const __m256d inv_ln2 = _mm256_set1_pd(1.44269504088896338700e+00);
    x = _mm256_max_pd(x, _mm256_set1_pd(-708.0));
    const __m256d n = _mm256_round_pd(_mm256_mul_pd(x, inv_ln2), _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
    __m256d r = _mm256_fnmadd_pd(n, ln2_hi, x);
    r = _mm256_fnmadd_pd(n, ln2_lo, r);
    static constexpr double c[] = {1.0,
                                   1.0,
                                   1.0 / 2.0,
                                   1.0 / 6.0,
                                   1.0 / 24.0,
                                   1.0 / 120.0,
                                   1.0 / 720.0,
                                   1.0 / 5040.0,
                                   1.0 / 40320.0,
                                   1.0 / 362880.0,
                                   1.0 / 3628800.0,
                                   1.0 / 39916800.0,
                                   1.0 / 479001600.0};
    const __m256d p = horner(r, c);
    // 2^n: place (n + 1023) in the exponent field.
    const __m256d magic = _mm256_set1_pd(6755399441055744.0);  // 2^52 + 2^51
    __m256i bits = _mm256_castpd_si256(_mm256_add_pd(n, magic));
    bits = _mm256_sub_epi64(bits, _mm256_castpd_si256(magic));
    bits = _mm256_slli_epi64(_mm256_add_epi64(bits, _mm256_set1_epi64x(1023)), 52);
    return _mm256_mul_pd(p, _mm256_castsi256_pd(bits));
}

// log(x) for normal positive x.
inline __m256d log_pos(__m256d x) {
    const __m256i bits = _mm256_castpd_si256(x);
    // Exponent as a double via the 2^52 trick.
    const __m256i exp_bits = _mm256_srli_epi64(bits, 52);
    const __m256d two52 = _mm256_set1_pd(4503599627370496.0);
    __m256d e = _mm256_sub_pd(_mm256_castsi256_pd(_mm256_or_si256(exp_bits, _mm256_castpd_si256(two52))), two52);
    e = _mm256_sub_pd(e, _mm256_set1_pd(1023.0));
    // Mantissa in [1, 2).
    const __m256i mant_mask = _mm256_set1_epi64x(0x000FFFFFFFFFFFFFLL);
    const __m256i one_bits = _mm256_set1_epi64x(0x3FF0000000000000LL);
    __m256d m = _mm256_castsi256_pd(_mm256_or_si256(_mm256_and_si256(bits, mant_mask), one_bits));
    // Fold into [sqrt(1/2), sqrt(2)).
    const __m256d big = _mm256_cmp_pd(m, _mm256_set1_pd(M_SQRT2), _CMP_GT_OQ);
    m = _mm256_blendv_pd(m, _mm256_mul_pd(m, _mm256_set1_pd(0.5)), big);
    e = _mm256_add_pd(e, _mm256_and_pd(big, _mm256_set1_pd(1.0)));

    const __m256d f = _mm256_sub_pd(m, _mm256_set1_pd(1.0));
    const __m256d s = _mm256_div_pd(f, _mm256_add_pd(f, _mm256_set1_pd(2.0)));
    const __m256d s2 = _mm256_mul_pd(s, s);
    // 2 atanh(s) = 2 s (1 + s^2/3 + s^4/5 + ...)
    static constexpr double c[] = {1.0,        1.0 / 3.0,  1.0 / 5.0,  1.0 / 7.0,  1.0 / 9.0, 1.0 / 11.0,
                                   1.0 / 13.0, 1.0 / 15.0, 1.0 / 17.0, 1.0 / 19.0, 1.0 / 21.0};
    const __m256d series = horner(s2, c);
    const __m256d log_m = _mm256_mul_pd(_mm256_add_pd(s, s), series);
    const __m256d ln2_hi = _mm256_set1_pd(6.93147180369123816490e-01);
    const __m256d ln2_lo = _mm256_set1_pd(1.90821492927058770002e-10);
    return _mm256_fmadd_pd(e, ln2_hi, _mm256_fmadd_pd(e, ln2_lo, log_m));
}

// Rational pieces of erf/erfc for double precision (Boost.Math's 53-bit minimax fits).
inline __m256d erf_small(__m256d z) {
    static constexpr double P[] = {0.0834305892146531832907, -0.338165134459360935041, -0.0509990735146777432841,
                                   -0.00772758345802133288487, -0.000322780120964605683831};
    static constexpr double Q[] = {1.0, 0.455004033050794024546, 0.0875222600142252549554, 0.00858571925074406212772,
                                   0.000370900071787748000569};
    const __m256d zz = _mm256_mul_pd(z, z);
    const __m256d r = _mm256_div_pd(horner(zz, P), horner(zz, Q));
    return _mm256_mul_pd(z, _mm256_add_pd(_mm256_set1_pd(1.044948577880859375), r));
}

// erfc(z) for z >= 0.5, all four ranges evaluated and blended.
inline __m256d erfc_large(__m256d z) {
    static constexpr double P1[] = {-0.098090592216281240205, 0.178114665841120341155,  0.191003695796775433986,
                                    0.0888900368967884466578, 0.0195049001251218801359, 0.00180424538297014223957};
    static constexpr double Q1[] = {1.0,
                                    1.84759070983002217845,
                                    1.42628004845511324508,
                                    0.578052804889902404909,
                                    0.12385097467900864233,
                                    0.0113385233577001411017,
                                    0.337511472483094676155e-5};
    static constexpr double P2[] = {-0.0243500476207698441272, 0.0386540375035707201728,  0.04394818964209516296,
                                    0.0175679436311802092299,  0.00323962406290842133584, 0.000235839115596880717416};
    static constexpr double Q2[] = {1.0,
                                    1.53991494948552447182,
                                    0.982403709157920235114,
                                    0.325732924782444448493,
                                    0.0563921837420478160373,
                                    0.00410369723978904575884};
    static constexpr double P3[] = {0.00295276716530971662634,   0.0137384425896355332126,
                                    0.00840807615555585383007,   0.00212825620914618649141,
                                    0.000250269961544794627958,  0.113212406648847561139e-4};
    static constexpr double Q3[] = {1.0,
                                    1.04217814166938418171,
                                    0.442597659481563127003,
                                    0.0958492726301061423444,
                                    0.0105982906484876531489,
                                    0.000479411269521714493907};
    static constexpr double P4[] = {0.00628057170626964891937, 0.0175389834052493308818, -0.212652252872804219852,
                                    -0.687717681153649930619,  -2.5518551727311523996,   -3.22729451764143718517,
                                    -2.8175401114513378771};
    static constexpr double Q4[] = {1.0,
                                    2.79257750980575282228,
                                    11.0567237927800161565,
                                    15.930646027911794143,
                                    22.9367376522880577224,
                                    13.5064170191802889145,
                                    5.48409182238641741584};

    const __m256d t1 = _mm256_sub_pd(z, _mm256_set1_pd(0.5));
    const __m256d t2 = _mm256_sub_pd(z, _mm256_set1_pd(1.5));
    const __m256d t3 = _mm256_sub_pd(z, _mm256_set1_pd(3.5));
    const __m256d t4 = _mm256_div_pd(_mm256_set1_pd(1.0), z);
    const __m256d r1 = _mm256_add_pd(_mm256_set1_pd(0.405935764312744140625), _mm256_div_pd(horner(t1, P1), horner(t1, Q1)));
    const __m256d r2 = _mm256_add_pd(_mm256_set1_pd(0.50672817230224609375), _mm256_div_pd(horner(t2, P2), horner(t2, Q2)));
    const __m256d r3 = _mm256_add_pd(_mm256_set1_pd(0.5405750274658203125), _mm256_div_pd(horner(t3, P3), horner(t3, Q3)));
    const __m256d r4 = _mm256_add_pd(_mm256_set1_pd(0.5579090118408203125), _mm256_div_pd(horner(t4, P4), horner(t4, Q4)));

    __m256d r = r4;
    r = _mm256_blendv_pd(r, r3, _mm256_cmp_pd(z, _mm256_set1_pd(4.5), _CMP_LT_OQ));
    r = _mm256_blendv_pd(r, r2, _mm256_cmp_pd(z, _mm256_set1_pd(2.5), _CMP_LT_OQ));
    r = _mm256_blendv_pd(r, r1, _mm256_cmp_pd(z, _mm256_set1_pd(1.5), _CMP_LT_OQ));

    // exp(-z^2) with the rounding error of z^2 folded back in.
    const __m256d sq = _mm256_mul_pd(z, z);
    const __m256d err = _mm256_fmsub_pd(z, z, sq);
    const __m256d g = _mm256_mul_pd(exp_neg(_mm256_sub_pd(_mm256_setzero_pd(), sq)),
                                    _mm256_sub_pd(_mm256_set1_pd(1.0), err));
    __m256d res = _mm256_div_pd(_mm256_mul_pd(r, g), z);
    // Beyond 28 the result underflows.
    res = _mm256_andnot_pd(_mm256_cmp_pd(z, _mm256_set1_pd(28.0), _CMP_GE_OQ), res);
    return res;
}

// Phi(v) = erfc(-v / sqrt 2) / 2.
inline __m256d std_normal_cdf(__m256d v) {
    const __m256d w = _mm256_mul_pd(v, _mm256_set1_pd(-M_SQRT1_2));
    const __m256d sign_mask = _mm256_set1_pd(-0.0);
    const __m256d z = _mm256_andnot_pd(sign_mask, w);
    const __m256d half = _mm256_set1_pd(0.5);

    const __m256d small = _mm256_cmp_pd(z, half, _CMP_LT_OQ);
    const __m256d erf_s = erf_small(z);
    // Keep erfc_large away from its pole at 0 in the lanes that take the small branch.
    const __m256d ec_l = erfc_large(_mm256_max_pd(z, half));
    const __m256d erfc_z = _mm256_blendv_pd(ec_l, _mm256_sub_pd(_mm256_set1_pd(1.0), erf_s), small);

    // w >= 0: Phi = erfc(z)/2.  w < 0: Phi = 1 - erfc(z)/2.
    const __m256d half_ec = _mm256_mul_pd(half, erfc_z);
    const __m256d neg = _mm256_cmp_pd(w, _mm256_setzero_pd(), _CMP_LT_OQ);
    const __m256d upper = _mm256_sub_pd(_mm256_set1_pd(1.0), half_ec);
    // In the small branch compute 1/2 (1 + erf) directly rather than through 1 - erfc/2.
    const __m256d upper_small = _mm256_mul_pd(half, _mm256_add_pd(_mm256_set1_pd(1.0), erf_s));
    const __m256d up = _mm256_blendv_pd(upper, upper_small, small);
    return _mm256_blendv_pd(half_ec, up, neg);
}

void linear_predictor(const double* const* cols, const double* coef, std::size_t k, std::size_t n, double* out) {
    std::size_t i = 0;
    for (; i + kLanes <= n; i += kLanes) {
        __m256d eta = _mm256_setzero_pd();
        for (std::size_t j = 0; j < k; ++j) {
            eta = _mm256_add_pd(eta, _mm256_mul_pd(_mm256_set1_pd(coef[j]), _mm256_loadu_pd(cols[j] + i)));
        }
        _mm256_storeu_pd(out + i, eta);
    }
    for (; i < n; ++i) {
        double eta = 0.0;
        for (std::size_t j = 0; j < k; ++j) eta += coef[j] * cols[j][i];
        out[i] = eta;
    }
}

double probit_loglik(const double* const* cols, const double* coef, std::size_t k, const double* sign,
                     std::size_t n, double lo) {
    const __m256d vlo = _mm256_set1_pd(lo);
    const __m256d vhi = _mm256_set1_pd(1.0 - lo);
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + kLanes <= n; i += kLanes) {
        __m256d eta = _mm256_setzero_pd();
        for (std::size_t j = 0; j < k; ++j) {
            eta = _mm256_fmadd_pd(_mm256_set1_pd(coef[j]), _mm256_loadu_pd(cols[j] + i), eta);
        }
        const __m256d v = _mm256_mul_pd(eta, _mm256_loadu_pd(sign + i));
        __m256d p = std_normal_cdf(v);
        p = _mm256_min_pd(_mm256_max_pd(p, vlo), vhi);
        acc = _mm256_add_pd(acc, log_pos(p));
    }
    double total = hsum(acc);
    if (i < n) {
        // Pad the tail into one more vector so every row goes through the same arithmetic.
        alignas(32) double eta_buf[kLanes] = {0.0, 0.0, 0.0, 0.0};
        alignas(32) double res[kLanes];
        const std::size_t rem = n - i;
        for (std::size_t r = 0; r < rem; ++r) {
            double eta = 0.0;
            for (std::size_t j = 0; j < k; ++j) eta = std::fma(coef[j], cols[j][i + r], eta);
            eta_buf[r] = eta * sign[i + r];
        }
        __m256d p = std_normal_cdf(_mm256_load_pd(eta_buf));
        p = _mm256_min_pd(_mm256_max_pd(p, vlo), vhi);
        _mm256_store_pd(res, log_pos(p));
        for (std::size_t r = 0; r < rem; ++r) total += res[r];
    }
    return total;
}

void exceedance_counts(const double* const* draws, std::size_t n_draws, const double* const* feats,
                       std::size_t n_grid, std::size_t k, double threshold, std::uint32_t* counts) {
    const __m256d thr = _mm256_set1_pd(threshold);
    for (std::size_t g = 0; g < n_grid; ++g) {
        std::uint32_t c = 0;
        std::size_t d = 0;
        for (; d + kLanes <= n_draws; d += kLanes) {
            __m256d eta = _mm256_setzero_pd();
            for (std::size_t j = 0; j < k; ++j) {
                eta = _mm256_add_pd(eta, _mm256_mul_pd(_mm256_loadu_pd(draws[j] + d), _mm256_set1_pd(feats[j][g])));
            }
            c += static_cast<std::uint32_t>(__builtin_popcount(_mm256_movemask_pd(_mm256_cmp_pd(eta, thr, _CMP_GT_OQ))));
        }
        for (; d < n_draws; ++d) {
            double eta = 0.0;
            for (std::size_t j = 0; j < k; ++j) eta += draws[j][d] * feats[j][g];
            c += eta > threshold ? 1u : 0u;
        }
        counts[g] = c;
    }
}

void conditional_solve(const double* a0, const double* a_fixed, const double* a_free, const double* a3,
                       double target, double v, std::size_t n, double* out) {
    const __m256d vt = _mm256_set1_pd(target);
    const __m256d vv = _mm256_set1_pd(v);
    std::size_t d = 0;
    for (; d + kLanes <= n; d += kLanes) {
        const __m256d num = _mm256_sub_pd(_mm256_sub_pd(vt, _mm256_loadu_pd(a0 + d)),
                                          _mm256_mul_pd(_mm256_loadu_pd(a_fixed + d), vv));
        const __m256d den = _mm256_add_pd(_mm256_loadu_pd(a_free + d), _mm256_mul_pd(_mm256_loadu_pd(a3 + d), vv));
        _mm256_storeu_pd(out + d, _mm256_div_pd(num, den));
    }
    for (; d < n; ++d) out[d] = (target - a0[d] - a_fixed[d] * v) / (a_free[d] + a3[d] * v);
}

}  // namespace

extern const KernelSet kAvx2Kernels;
const KernelSet kAvx2Kernels{"avx2", &linear_predictor, &probit_loglik, &exceedance_counts, &conditional_solve};

}  // namespace doseplane::kernels
