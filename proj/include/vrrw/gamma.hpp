#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <vector>

#include "vrrw/rational.hpp"

namespace vrrw {

// Exponent machinery: gamma_1 = 1, gamma_2 = 1/alpha - eps, and
//   gamma_{i+2} = gamma_i (1 - eps_i) + (1/alpha)(gamma_{i+1} - gamma_i),
// with eps_i = eps (Fixed) or eps_i = r/i^2 (InverseSquare).
//
// Works over double or Rational; rational inputs make every value exact.
// Defined for alpha in (0,1) only: the recursion divides by alpha, and the
// regime alpha >= 1 is rejected.
enum class EpsMode { Fixed, InverseSquare };

template <class T>
struct GammaParams {
    T alpha{};
    EpsMode mode = EpsMode::Fixed;
    T eps_or_r{};  // Fixed: eps in [0,1); InverseSquare: r >= 0
    int depth = 2;
};

template <class T>
struct GammaSequence {
    std::vector<T> values;      // values[i-1] = gamma_i, i = 1..depth
    std::vector<T> increments;  // increments[i-1] = gamma_{i+1} - gamma_i
    // First j >= 2 with gamma_j <= gamma_{j-1}, if any.
    std::optional<int> first_nonmonotone_index;
    // First i >= 2 with increment_i <= increment_{i-1}: the point where the
    // error term has caught up with the geometric growth.
    std::optional<int> first_nonincreasing_increment;
};

namespace detail {

template <class T>
void validate_gamma_params(const GammaParams<T>& p) {
    if (!(p.alpha > T(0)) || !(p.alpha < T(1)))
        throw std::invalid_argument("gamma: alpha must lie in (0,1)");
    if (p.mode == EpsMode::Fixed) {
        if (!(p.eps_or_r >= T(0)) || !(p.eps_or_r < T(1)))
            throw std::invalid_argument("gamma: fixed eps must lie in [0,1)");
    } else if (!(p.eps_or_r >= T(0))) {
        throw std::invalid_argument("gamma: r must be >= 0");
    }
    if (p.depth < 2) throw std::invalid_argument("gamma: depth must be >= 2");
}

template <class T>
T eps_at(const GammaParams<T>& p, int i) {
    if (p.mode == EpsMode::Fixed) return p.eps_or_r;
    return p.eps_or_r / T(i * i);
}

template <class T>
T inv(const T& x) {
    return T(1) / x;
}

}  // namespace detail

template <class T>
GammaSequence<T> gamma_sequence(const GammaParams<T>& p) {
    detail::validate_gamma_params(p);
    GammaSequence<T> out;
    out.values.reserve(static_cast<std::size_t>(p.depth));
    T inv_alpha = detail::inv(p.alpha);
    out.values.push_back(T(1));
    out.values.push_back(inv_alpha - p.eps_or_r);
    for (int i = 1; i + 2 <= p.depth; ++i) {
        const T& g_i = out.values[static_cast<std::size_t>(i - 1)];
        const T& g_i1 = out.values[static_cast<std::size_t>(i)];
        T eps_i = detail::eps_at(p, i);
        out.values.push_back(g_i * (T(1) - eps_i) + inv_alpha * (g_i1 - g_i));
    }
    for (std::size_t j = 1; j < out.values.size(); ++j) {
        out.increments.push_back(out.values[j] - out.values[j - 1]);
        if (!out.first_nonmonotone_index && !(out.values[j] > out.values[j - 1]))
            out.first_nonmonotone_index = static_cast<int>(j) + 1;
    }
    for (std::size_t j = 1; j < out.increments.size(); ++j) {
        if (!(out.increments[j] > out.increments[j - 1])) {
            out.first_nonincreasing_increment = static_cast<int>(j) + 1;
            break;
        }
    }
    return out;
}

// gamma_{i+2} - gamma_{i+1} by the closed form
//   (gamma_2 - gamma_1)(1/alpha - 1)^i - sum_{j=1}^i eps_j gamma_j (1/alpha - 1)^{i-j}.
// `gammas` must hold at least gamma_1..gamma_i (i.e. i entries, i >= 1).
template <class T>
T increment_closed_form(const GammaParams<T>& p, const std::vector<T>& gammas, int i) {
    detail::validate_gamma_params(p);
    if (i < 1) throw std::invalid_argument("increment_closed_form: i must be >= 1");
    if (gammas.size() < static_cast<std::size_t>(std::max(i, 2)))
        throw std::invalid_argument("increment_closed_form: gamma prefix too short");
    T q = detail::inv(p.alpha) - T(1);
    T q_pow = T(1);  // q^{i-j}, built from j = i down to 1
    T correction = T(0);
    for (int j = i; j >= 1; --j) {
        correction += detail::eps_at(p, j) * gammas[static_cast<std::size_t>(j - 1)] * q_pow;
        q_pow *= q;
    }
    // q_pow is now q^i
    return (gammas[1] - gammas[0]) * q_pow - correction;
}

// Ratios gamma_i / (1/alpha - 1)^i over the computed depth: a bounded band
// confirms the geometric growth regime, an expanding band the boundary
// blow-up. The band threshold is a toolkit choice, not a paper constant.
struct EnvelopeReport {
    std::vector<double> ratios;  // ratios[i-1] = gamma_i / (1/alpha-1)^i
    double min_ratio = 0;
    double max_ratio = 0;
    double tail_band = 0;  // max/min ratio over the second half of the range
    bool bounded = false;
    std::optional<int> failure_index;  // first non-increasing increment, if any
};

inline constexpr double kEnvelopeTailBandThreshold = 1.5;

inline EnvelopeReport growth_envelope(const GammaParams<double>& p) {
    auto seq = gamma_sequence(p);
    EnvelopeReport rep;
    double q = 1.0 / p.alpha - 1.0;
    double q_pow = 1.0;
    for (std::size_t j = 0; j < seq.values.size(); ++j) {
        q_pow *= q;
        rep.ratios.push_back(seq.values[j] / q_pow);
    }
    rep.min_ratio = *std::min_element(rep.ratios.begin(), rep.ratios.end());
    rep.max_ratio = *std::max_element(rep.ratios.begin(), rep.ratios.end());
    std::size_t half = rep.ratios.size() / 2;
    double tmin = rep.ratios[half], tmax = rep.ratios[half];
    for (std::size_t j = half; j < rep.ratios.size(); ++j) {
        tmin = std::min(tmin, rep.ratios[j]);
        tmax = std::max(tmax, rep.ratios[j]);
    }
    rep.tail_band = tmin > 0 ? tmax / tmin : std::numeric_limits<double>::infinity();
    rep.failure_index = seq.first_nonincreasing_increment;
    rep.bounded = rep.min_ratio > 0 && !seq.first_nonmonotone_index &&
                  rep.tail_band <= kEnvelopeTailBandThreshold;
    return rep;
}

// Largest r (within [0, r_hi]) such that the InverseSquare sequence is
// strictly increasing up to `depth`, located by bisection.
inline double find_monotone_r_star(double alpha, int depth, double r_hi = 2.0, int iters = 60) {
    auto monotone = [&](double r) {
        GammaParams<double> p{alpha, EpsMode::InverseSquare, r, depth};
        return !gamma_sequence(p).first_nonmonotone_index.has_value();
    };
    double lo = 0.0;
    if (!monotone(1e-9)) return 0.0;
    lo = 1e-9;
    double hi = r_hi;
    if (monotone(hi)) return hi;
    for (int it = 0; it < iters; ++it) {
        double mid = 0.5 * (lo + hi);
        (monotone(mid) ? lo : hi) = mid;
    }
    return lo;
}

}  // namespace vrrw
