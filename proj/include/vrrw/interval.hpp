#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>

namespace vrrw {

// Closed interval [lo, hi] for nonnegative quantities (probabilities,
// weights), with outward rounding by one ulp after every operation. Used by
// the oracle's float mode to keep truncation bookkeeping honest when exact
// rationals are unavailable.
struct ProbInterval {
    double lo = 0;
    double hi = 0;

    static double down(double x) {
        return std::nextafter(x, -std::numeric_limits<double>::infinity());
    }
    static double up(double x) {
        return std::nextafter(x, std::numeric_limits<double>::infinity());
    }

    static ProbInterval exact(double x) { return {x, x}; }

    // Point value with +-ulps of evaluation slack (e.g. a std::pow result).
    static ProbInterval around(double x, int ulps = 2) {
        ProbInterval r{x, x};
        for (int i = 0; i < ulps; ++i) {
            r.lo = down(r.lo);
            r.hi = up(r.hi);
        }
        if (r.lo < 0) r.lo = 0;
        return r;
    }

    ProbInterval operator+(const ProbInterval& o) const {
        return {down(lo + o.lo), up(hi + o.hi)};
    }
    ProbInterval& operator+=(const ProbInterval& o) {
        *this = *this + o;
        return *this;
    }
    ProbInterval operator*(const ProbInterval& o) const {
        return {down(lo * o.lo), up(hi * o.hi)};
    }
    // Requires a strictly positive denominator interval.
    ProbInterval operator/(const ProbInterval& o) const {
        if (!(o.lo > 0)) throw std::domain_error("ProbInterval: division by interval touching 0");
        return {down(lo / o.hi), up(hi / o.lo)};
    }

    bool contains(double x) const { return lo <= x && x <= hi; }
    double width() const { return hi - lo; }
};

}  // namespace vrrw
