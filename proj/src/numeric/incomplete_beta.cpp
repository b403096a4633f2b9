#include "doseplane/numeric/incomplete_beta.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "doseplane/errors.hpp"

namespace doseplane::numeric {
namespace {

void check_args(double a, double b, double x) {
    if (!(a > 0.0) || !(b > 0.0) || !(x >= 0.0 && x <= 1.0)) {
        std::ostringstream os;
        os << "regularized_incomplete_beta: invalid arguments a=" << a << " b=" << b << " x=" << x;
        throw DomainError(os.str());
    }
}

// Continued fraction for I_x(a,b) * B(a,b) / (x^a (1-x)^b / a); converges for x < (a+1)/(a+b+2).
double beta_continued_fraction(double a, double b, double x) {
    constexpr int max_iter = 10000;
    constexpr double eps = 1e-16;
    constexpr double tiny = 1e-300;

    const double qab = a + b;
    const double qap = a + 1.0;
    const double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::abs(d) < tiny) d = tiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= max_iter; ++m) {
        const double m2 = 2.0 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < tiny) d = tiny;
        c = 1.0 + aa / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < tiny) d = tiny;
        c = 1.0 + aa / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < eps) break;
    }
    return h;
}

// x^a (1-x)^b / B(a,b), in log space.
double log_prefactor(double a, double b, double x) {
    return std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + a * std::log(x) + b * std::log1p(-x);
}

// Returns {lower, upper} tails.
std::pair<double, double> both_tails(double a, double b, double x) {
    check_args(a, b, x);
    if (x == 0.0) return {0.0, 1.0};
    if (x == 1.0) return {1.0, 0.0};
    const double front = std::exp(log_prefactor(a, b, x));
    if (x < (a + 1.0) / (a + b + 2.0)) {
        const double lower = front * beta_continued_fraction(a, b, x) / a;
        return {lower, 1.0 - lower};
    }
    const double upper = front * beta_continued_fraction(b, a, 1.0 - x) / b;
    return {1.0 - upper, upper};
}

}  // namespace

double regularized_incomplete_beta(double a, double b, double x) { return both_tails(a, b, x).first; }

double regularized_incomplete_beta_upper(double a, double b, double x) { return both_tails(a, b, x).second; }

}  // namespace doseplane::numeric
