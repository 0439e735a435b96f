#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>

namespace vrrw {

namespace detail {

// Continued fraction for the regularized incomplete beta (modified Lentz).
inline double beta_cf(double a, double b, double x) {
    constexpr int kMaxIter = 300;
    constexpr double kEps = 3e-16;
    constexpr double kTiny = 1e-300;
    double qab = a + b, qap = a + 1.0, qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::fabs(d) < kTiny) d = kTiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= kMaxIter; ++m) {
        int m2 = 2 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < kEps) break;
    }
    return h;
}

}  // namespace detail

// Regularized incomplete beta I_x(a, b).
inline double incomplete_beta(double a, double b, double x) {
    if (!(a > 0) || !(b > 0)) throw std::invalid_argument("incomplete_beta: a,b must be > 0");
    if (x <= 0) return 0.0;
    if (x >= 1) return 1.0;
    double ln_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + a * std::log(x) +
                      b * std::log1p(-x);
    double front = std::exp(ln_front);
    if (x < (a + 1.0) / (a + b + 2.0)) return front * detail::beta_cf(a, b, x) / a;
    return 1.0 - front * detail::beta_cf(b, a, 1.0 - x) / b;
}

// Inverse of x -> I_x(a, b) by bisection (monotone increasing).
inline double incomplete_beta_inv(double a, double b, double p) {
    if (p <= 0) return 0.0;
    if (p >= 1) return 1.0;
    double lo = 0.0, hi = 1.0;
    for (int it = 0; it < 200; ++it) {
        double mid = 0.5 * (lo + hi);
        (incomplete_beta(a, b, mid) < p ? lo : hi) = mid;
        if (hi - lo < 1e-15) break;
    }
    return 0.5 * (lo + hi);
}

// Exact binomial (Clopper-Pearson) bounds on a success probability.
inline double clopper_pearson_lower(std::uint64_t successes, std::uint64_t n, double confidence) {
    if (n == 0) throw std::invalid_argument("clopper_pearson: n must be >= 1");
    if (successes > n) throw std::invalid_argument("clopper_pearson: successes > n");
    if (successes == 0) return 0.0;
    double a2 = (1.0 - confidence) / 2.0;
    return incomplete_beta_inv(static_cast<double>(successes),
                               static_cast<double>(n - successes) + 1.0, a2);
}

inline double clopper_pearson_upper(std::uint64_t successes, std::uint64_t n, double confidence) {
    if (n == 0) throw std::invalid_argument("clopper_pearson: n must be >= 1");
    if (successes > n) throw std::invalid_argument("clopper_pearson: successes > n");
    if (successes == n) return 1.0;
    double a2 = (1.0 - confidence) / 2.0;
    return incomplete_beta_inv(static_cast<double>(successes) + 1.0,
                               static_cast<double>(n - successes), 1.0 - a2);
}

// Monte Carlo tally for a stopping-time event. Runs that hit their step cap
// undecided are ambiguous: they widen the bracket and never count as
// occurrences. The headline interval combines the exact binomial CI on the
// occurred count with the ambiguity mass.
struct Estimate {
    std::uint64_t occurred = 0;
    std::uint64_t refuted = 0;
    std::uint64_t ambiguous = 0;
    std::uint64_t trials = 0;
    std::uint64_t master_seed = 0;
    double confidence = 0.99;

    double point_lo() const { return static_cast<double>(occurred) / static_cast<double>(trials); }
    double point_hi() const {
        return static_cast<double>(occurred + ambiguous) / static_cast<double>(trials);
    }
    // CI on "occurred" resolving all ambiguity downward / upward.
    double ci_lo() const { return clopper_pearson_lower(occurred, trials, confidence); }
    double ci_hi() const { return clopper_pearson_upper(occurred + ambiguous, trials, confidence); }

    bool consistent() const { return occurred + refuted + ambiguous == trials; }
};

}  // namespace vrrw
