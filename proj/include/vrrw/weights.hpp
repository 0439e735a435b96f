#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "vrrw/rational.hpp"

namespace vrrw {

// Rule for extending a table weight beyond its last entry. None makes such a
// query an error rather than silently extrapolating.
struct TailRule {
    enum class Kind { None, Constant, Power };
    Kind kind = Kind::None;
    double exponent = 0.0;  // Power only

    static TailRule none() { return {Kind::None, 0.0}; }
    static TailRule constant() { return {Kind::Constant, 0.0}; }
    static TailRule power(double exponent) { return {Kind::Power, exponent}; }

    bool operator==(const TailRule&) const = default;
};

// A reinforcement weight sequence w_k, k >= 0. Immutable after construction
// and safe to share across concurrent replicas.
//
// Kinds:
//   power(a)   w_k = (k+1)^a, a >= 0   (a=0 constant, a=1 linear, a=2 the
//                                       summable-reciprocal family)
//   linear     w_k = k+1
//   table      explicit positive values, extended by a tail rule
//   custom     named formula with parameters:
//     "scaled_power"  {c, alpha}    w_k = c*(k+1)^alpha
//     "shifted_power" {alpha, shift} w_k = (k+1+shift)^alpha
//     "log_power"     {alpha, beta}  w_k = (k+1)^alpha * ln(k+2)^beta
class WeightSpec {
public:
    enum class Kind { Power, Linear, Table, Custom };

    WeightSpec() : kind_(Kind::Linear) {}

    static WeightSpec power(double alpha) {
        if (!std::isfinite(alpha) || alpha < 0)
            throw std::invalid_argument("WeightSpec::power: alpha must be finite and >= 0");
        WeightSpec s;
        s.kind_ = Kind::Power;
        s.alpha_ = alpha;
        s.int_exponent_ = integer_exponent(alpha);
        s.fill_cache();
        return s;
    }

    static WeightSpec linear() { return WeightSpec{}; }

    static WeightSpec table(std::vector<double> values, TailRule tail) {
        if (values.empty()) throw std::invalid_argument("WeightSpec::table: empty table");
        for (double v : values)
            if (!std::isfinite(v) || v <= 0)
                throw std::invalid_argument("WeightSpec::table: values must be finite and > 0");
        if (tail.kind == TailRule::Kind::Power && !std::isfinite(tail.exponent))
            throw std::invalid_argument("WeightSpec::table: non-finite tail exponent");
        WeightSpec s;
        s.kind_ = Kind::Table;
        s.values_ = std::move(values);
        s.tail_ = tail;
        return s;
    }

    static WeightSpec custom(const std::string& formula, std::map<std::string, double> params) {
        WeightSpec s;
        s.kind_ = Kind::Custom;
        s.formula_ = formula;
        s.params_ = std::move(params);
        if (formula == "scaled_power") {
            double c = s.param("c");
            double a = s.param("alpha");
            if (!(std::isfinite(c) && c > 0) || !(std::isfinite(a) && a >= 0))
                throw std::invalid_argument("scaled_power: need c > 0 and alpha >= 0");
            s.int_exponent_ = integer_exponent(a);
        } else if (formula == "shifted_power") {
            double a = s.param("alpha");
            double sh = s.param("shift");
            if (!(std::isfinite(a) && a >= 0) || !(std::isfinite(sh) && sh >= 0 && sh == std::floor(sh)))
                throw std::invalid_argument("shifted_power: need alpha >= 0 and integer shift >= 0");
            s.int_exponent_ = integer_exponent(a);
        } else if (formula == "log_power") {
            double a = s.param("alpha");
            double b = s.param("beta");
            if (!(std::isfinite(a) && a >= 0) || !std::isfinite(b))
                throw std::invalid_argument("log_power: need alpha >= 0 and finite beta");
        } else {
            throw std::invalid_argument("WeightSpec::custom: unknown formula '" + formula + "'");
        }
        s.fill_cache();
        return s;
    }

    // w_k. Strictly positive and finite, or throws.
    double at(std::int64_t k) const {
        if (k < 0) throw std::invalid_argument("WeightSpec::at: k must be >= 0");
        double w = static_cast<std::uint64_t>(k) < cache_.size()
                       ? cache_[static_cast<std::size_t>(k)]
                       : eval(k);
        if (!std::isfinite(w) || w <= 0)
            throw std::domain_error("WeightSpec::at: weight not in (0,inf) at k=" + std::to_string(k));
        return w;
    }

    // Exact value when the sequence is exactly representable (integer power
    // exponents, tables with constant tails). nullopt means "float only".
    std::optional<Rational> exact_at(std::int64_t k) const {
        if (k < 0) return std::nullopt;
        switch (kind_) {
            case Kind::Linear:
                return Rational(static_cast<long>(k + 1));
            case Kind::Power:
                if (int_exponent_ < 0) return std::nullopt;
                return rational_pow_int(Rational(static_cast<long>(k + 1)), int_exponent_);
            case Kind::Table: {
                std::size_t n = values_.size();
                if (k < static_cast<std::int64_t>(n)) return rational_from_double(values_[k]);
                if (tail_.kind == TailRule::Kind::Constant) return rational_from_double(values_.back());
                return std::nullopt;
            }
            case Kind::Custom:
                if (formula_ == "scaled_power" && int_exponent_ >= 0)
                    return rational_from_double(param("c")) *
                           rational_pow_int(Rational(static_cast<long>(k + 1)), int_exponent_);
                if (formula_ == "shifted_power" && int_exponent_ >= 0)
                    return rational_pow_int(
                        Rational(static_cast<long>(k + 1 + static_cast<std::int64_t>(param("shift")))),
                        int_exponent_);
                return std::nullopt;
        }
        return std::nullopt;
    }

    Kind kind() const { return kind_; }
    double alpha() const { return alpha_; }
    const std::vector<double>& values() const { return values_; }
    TailRule tail() const { return tail_; }
    const std::string& formula() const { return formula_; }
    const std::map<std::string, double>& params() const { return params_; }

    bool operator==(const WeightSpec& o) const {
        return kind_ == o.kind_ && alpha_ == o.alpha_ && values_ == o.values_ &&
               tail_ == o.tail_ && formula_ == o.formula_ && params_ == o.params_;
    }

private:
    // Memoizes the head of sequences whose evaluation needs std::pow; local
    // times in the simulator's hot loop nearly always land here.
    static constexpr std::size_t kCacheSize = 16384;

    void fill_cache() {
        bool needs_pow = (kind_ == Kind::Power && int_exponent_ < 0) ||
                         (kind_ == Kind::Custom && (int_exponent_ < 0 || formula_ == "log_power"));
        if (!needs_pow) return;
        cache_.resize(kCacheSize);
        for (std::size_t k = 0; k < kCacheSize; ++k)
            cache_[k] = eval(static_cast<std::int64_t>(k));
    }
    double eval(std::int64_t k) const {
        switch (kind_) {
            case Kind::Linear:
                return static_cast<double>(k + 1);
            case Kind::Power:
                return pow_maybe_int(static_cast<double>(k + 1), alpha_, int_exponent_);
            case Kind::Table: {
                std::size_t n = values_.size();
                if (k < static_cast<std::int64_t>(n)) return values_[static_cast<std::size_t>(k)];
                switch (tail_.kind) {
                    case TailRule::Kind::Constant:
                        return values_.back();
                    case TailRule::Kind::Power:
                        return values_.back() *
                               std::pow(static_cast<double>(k + 1) / static_cast<double>(n),
                                        tail_.exponent);
                    case TailRule::Kind::None:
                        throw std::out_of_range(
                            "WeightSpec: table query at k=" + std::to_string(k) +
                            " beyond length " + std::to_string(n) + " with no tail rule");
                }
                return 0;
            }
            case Kind::Custom: {
                if (formula_ == "scaled_power")
                    return param("c") *
                           pow_maybe_int(static_cast<double>(k + 1), param("alpha"), int_exponent_);
                if (formula_ == "shifted_power")
                    return pow_maybe_int(static_cast<double>(k + 1) + param("shift"), param("alpha"),
                                         int_exponent_);
                // log_power
                return std::pow(static_cast<double>(k + 1), param("alpha")) *
                       std::pow(std::log(static_cast<double>(k + 2)), param("beta"));
            }
        }
        return 0;
    }

    double param(const std::string& name) const {
        auto it = params_.find(name);
        if (it == params_.end())
            throw std::invalid_argument("WeightSpec: missing parameter '" + name + "'");
        return it->second;
    }

    static long integer_exponent(double a) {
        if (a == std::floor(a) && a >= 0 && a <= 64) return static_cast<long>(a);
        return -1;
    }

    static double pow_maybe_int(double base, double exponent, long int_exp) {
        if (int_exp < 0) return std::pow(base, exponent);
        double r = 1.0;
        double b = base;
        for (long e = int_exp; e > 0; e >>= 1) {
            if (e & 1) r *= b;
            if (e > 1) b *= b;
        }
        return r;
    }

    Kind kind_;
    double alpha_ = 1.0;             // Power
    long int_exponent_ = 1;          // >=0 when the effective exponent is a small integer
    std::vector<double> values_;     // Table
    TailRule tail_;                  // Table
    std::string formula_;            // Custom
    std::map<std::string, double> params_;  // Custom
    std::vector<double> cache_;      // derived, excluded from equality
};

// Site-dependent weight family w_k(x): a default sequence plus finitely many
// per-site overrides. Empty overrides reproduce the homogeneous law.
class Environment {
public:
    Environment() : default_(WeightSpec::linear()) {}

    explicit Environment(WeightSpec default_spec,
                         std::map<std::int64_t, WeightSpec> overrides = {})
        : default_(std::move(default_spec)) {
        overrides_.assign(overrides.begin(), overrides.end());
        for (const auto& [site, spec] : overrides_) spec.at(0);  // positivity probe
    }

    const WeightSpec& spec_at(std::int64_t x) const {
        if (!overrides_.empty()) {
            auto it = std::lower_bound(
                overrides_.begin(), overrides_.end(), x,
                [](const auto& entry, std::int64_t site) { return entry.first < site; });
            if (it != overrides_.end() && it->first == x) return it->second;
        }
        return default_;
    }

    double weight(std::int64_t x, std::int64_t k) const { return spec_at(x).at(k); }

    std::optional<Rational> exact_weight(std::int64_t x, std::int64_t k) const {
        return spec_at(x).exact_at(k);
    }

    bool homogeneous() const { return overrides_.empty(); }
    const WeightSpec& default_spec() const { return default_; }
    const std::vector<std::pair<std::int64_t, WeightSpec>>& overrides() const { return overrides_; }

    // True when both environments define the same sequences at every site
    // x >= 0 (the hypothesis of the law-invariance check).
    static bool agree_on_nonnegative_sites(const Environment& a, const Environment& b) {
        if (!(a.default_ == b.default_)) {
            // Differing defaults can still agree on x >= 0 if every
            // nonnegative site is overridden back; finite overrides make
            // that impossible, so defaults must match.
            return false;
        }
        auto effective = [](const Environment& e, std::int64_t x) -> const WeightSpec& {
            return e.spec_at(x);
        };
        for (const auto& [site, spec] : a.overrides_)
            if (site >= 0 && !(spec == effective(b, site))) return false;
        for (const auto& [site, spec] : b.overrides_)
            if (site >= 0 && !(spec == effective(a, site))) return false;
        return true;
    }

    bool operator==(const Environment&) const = default;

private:
    WeightSpec default_;
    std::vector<std::pair<std::int64_t, WeightSpec>> overrides_;  // sorted by site
};

}  // namespace vrrw
