#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <vector>

#include "vrrw/events.hpp"
#include "vrrw/interval.hpp"
#include "vrrw/rational.hpp"
#include "vrrw/weights.hpp"

namespace vrrw {

// Brute-force enumeration of all length-n sign sequences with the exact
// conditional probability product of each path. Ground truth for engine
// validation, event probabilities, and the environment-invariance property.
//
// Two arithmetic modes:
//   rational  exact big-rational masses; requires every queried weight to be
//             exactly representable (integer power exponents, tables, ...)
//   interval  directed-rounding double intervals; always available
inline constexpr int kDefaultEnumerationLimit = 24;

struct RationalArith {
    using Mass = Rational;
    static Mass one() { return Rational(1); }
    static Mass zero() { return Rational(0); }
    static Mass weight(const Environment& env, std::int64_t x, std::uint64_t k) {
        auto w = env.exact_weight(x, static_cast<std::int64_t>(k));
        if (!w)
            throw std::domain_error(
                "oracle rational mode: weight at site " + std::to_string(x) +
                " is not exactly representable");
        return *w;
    }
    static Mass ratio(const Mass& num, const Mass& den_sum) { return num / den_sum; }
    static double lo(const Mass& m) { return to_double(m); }
    static double hi(const Mass& m) { return to_double(m); }
};

struct IntervalArith {
    using Mass = ProbInterval;
    static Mass one() { return ProbInterval::exact(1.0); }
    static Mass zero() { return ProbInterval::exact(0.0); }
    static Mass weight(const Environment& env, std::int64_t x, std::uint64_t k) {
        return ProbInterval::around(env.weight(x, static_cast<std::int64_t>(k)));
    }
    static Mass ratio(const Mass& num, const Mass& den_sum) { return num / den_sum; }
    static double lo(const Mass& m) { return m.lo; }
    static double hi(const Mass& m) { return m.hi; }
};

template <class Mass>
struct BasicPathAtom {
    std::vector<std::int8_t> steps;  // +-1
    Mass probability;
};

using RationalPathAtom = BasicPathAtom<Rational>;
using IntervalPathAtom = BasicPathAtom<ProbInterval>;

namespace detail {

// Shared DFS scaffolding: dense local times over [-n, n], one mass per depth.
template <class Arith>
class Enumerator {
public:
    using Mass = typename Arith::Mass;

    Enumerator(const Environment& env, int horizon)
        : env_(env),
          horizon_(horizon),
          counts_(static_cast<std::size_t>(2 * horizon + 1), 0),
          origin_(horizon),
          mass_(static_cast<std::size_t>(horizon) + 1, Arith::zero()) {
        counts_[static_cast<std::size_t>(origin_)] = 1;  // Z_0(0) = 1
        mass_[0] = Arith::one();
        steps_.reserve(static_cast<std::size_t>(horizon));
    }

    std::uint64_t count_at(std::int64_t pos) const {
        return counts_[static_cast<std::size_t>(origin_ + pos)];
    }

    // Splits the current node's mass into (left, right); exact partition of
    // unity in rational mode.
    std::pair<Mass, Mass> branch_masses(std::int64_t pos, int depth) const {
        Mass wl = Arith::weight(env_, pos - 1, count_at(pos - 1));
        Mass wr = Arith::weight(env_, pos + 1, count_at(pos + 1));
        Mass den = wl + wr;
        const Mass& m = mass_[static_cast<std::size_t>(depth)];
        return {m * Arith::ratio(wl, den), m * Arith::ratio(wr, den)};
    }

    void push(std::int64_t new_pos, int new_depth, Mass m, std::int8_t dir) {
        ++counts_[static_cast<std::size_t>(origin_ + new_pos)];
        mass_[static_cast<std::size_t>(new_depth)] = std::move(m);
        steps_.push_back(dir);
    }

    void pop(std::int64_t new_pos) {
        --counts_[static_cast<std::size_t>(origin_ + new_pos)];
        steps_.pop_back();
    }

    const std::vector<std::int8_t>& steps() const { return steps_; }
    const Mass& mass_at(int depth) const { return mass_[static_cast<std::size_t>(depth)]; }
    int horizon() const { return horizon_; }

private:
    const Environment& env_;
    int horizon_;
    std::vector<std::uint64_t> counts_;
    std::int64_t origin_;
    std::vector<Mass> mass_;
    std::vector<std::int8_t> steps_;
};

inline void check_horizon(int horizon, int limit) {
    if (horizon < 0) throw std::invalid_argument("oracle: horizon must be >= 0");
    if (horizon > limit)
        throw std::invalid_argument("oracle: horizon " + std::to_string(horizon) +
                                    " exceeds enumeration limit " + std::to_string(limit));
}

}  // namespace detail

// Visits all 2^n paths with their exact probabilities.
// visit(steps, probability) is called once per path, in lexicographic order
// with left (-1) before right (+1).
template <class Arith, class Visitor>
void enumerate_paths(const Environment& env, int horizon, Visitor&& visit,
                     int limit = kDefaultEnumerationLimit) {
    detail::check_horizon(horizon, limit);
    detail::Enumerator<Arith> e(env, horizon);
    auto dfs = [&](auto&& self, std::int64_t pos, int depth) -> void {
        if (depth == horizon) {
            visit(e.steps(), e.mass_at(depth));
            return;
        }
        auto [left, right] = e.branch_masses(pos, depth);
        e.push(pos - 1, depth + 1, std::move(left), -1);
        self(self, pos - 1, depth + 1);
        e.pop(pos - 1);
        e.push(pos + 1, depth + 1, std::move(right), +1);
        self(self, pos + 1, depth + 1);
        e.pop(pos + 1);
    };
    dfs(dfs, 0, 0);
}

inline std::vector<RationalPathAtom> enumerate_rational(const Environment& env, int horizon,
                                                        int limit = kDefaultEnumerationLimit) {
    std::vector<RationalPathAtom> atoms;
    atoms.reserve(horizon <= 20 ? (1u << horizon) : 0);
    enumerate_paths<RationalArith>(
        env, horizon,
        [&](const std::vector<std::int8_t>& s, const Rational& p) { atoms.push_back({s, p}); },
        limit);
    return atoms;
}

inline std::vector<IntervalPathAtom> enumerate_interval(const Environment& env, int horizon,
                                                        int limit = kDefaultEnumerationLimit) {
    std::vector<IntervalPathAtom> atoms;
    enumerate_paths<IntervalArith>(
        env, horizon,
        [&](const std::vector<std::int8_t>& s, const ProbInterval& p) { atoms.push_back({s, p}); },
        limit);
    return atoms;
}

// Marginal law of X_n.
template <class Arith>
std::map<std::int64_t, typename Arith::Mass> endpoint_distribution(
    const Environment& env, int horizon, int limit = kDefaultEnumerationLimit) {
    std::map<std::int64_t, typename Arith::Mass> dist;
    enumerate_paths<Arith>(
        env, horizon,
        [&](const std::vector<std::int8_t>& steps, const typename Arith::Mass& p) {
            std::int64_t pos = 0;
            for (auto s : steps) pos += s;
            auto [it, fresh] = dist.try_emplace(pos, p);
            if (!fresh) it->second = it->second + p;
        },
        limit);
    return dist;
}

// Probability bracket for a stopping-time race over a finite horizon:
// [mass decided-occurred, same + mass undecided at the horizon]. Decided
// paths are pruned, not extended.
struct EventProbabilityBracket {
    double lower = 0;
    double upper = 0;
    std::optional<Rational> exact_lower;  // rational mode only
    std::optional<Rational> exact_upper;

    bool contains(double p) const { return lower <= p && p <= upper; }
    double width() const { return upper - lower; }
};

namespace detail {

// Watch table over one enumeration path, with O(1) undo per step. At most
// one watch can fire per step (thresholds are deduplicated), so the undo
// token is just the fired watch's index.
class PathClock {
public:
    explicit PathClock(const CompiledEvent& ev) {
        for (const auto& w : ev.watches) watches_.push_back({w.site, w.threshold, std::nullopt});
        ids_.resize(watches_.size());
        for (std::size_t i = 0; i < ids_.size(); ++i) ids_[i] = i;
    }

    std::optional<std::uint64_t> fired_at(std::size_t id) const { return watches_[id].fired; }
    const std::vector<std::size_t>& identity_ids() const { return ids_; }

    // Z_n(site) just reached count at step n; returns fired watch id or npos.
    std::size_t on_visit(std::int64_t site, std::uint64_t count, std::uint64_t n) {
        for (std::size_t i = 0; i < watches_.size(); ++i) {
            auto& w = watches_[i];
            if (w.site == site && w.threshold == count && !w.fired) {
                w.fired = n;
                return i;
            }
        }
        return npos;
    }

    void unfire(std::size_t id) {
        if (id != npos) watches_[id].fired = std::nullopt;
    }

    static constexpr std::size_t npos = static_cast<std::size_t>(-1);

private:
    struct W {
        std::int64_t site;
        std::uint64_t threshold;
        std::optional<std::uint64_t> fired;
    };
    std::vector<W> watches_;
    std::vector<std::size_t> ids_;
};

template <class Arith>
struct BracketAccumulator {
    typename Arith::Mass occurred = Arith::zero();
    typename Arith::Mass refuted = Arith::zero();
    typename Arith::Mass undecided = Arith::zero();
};

template <class Arith>
BracketAccumulator<Arith> event_masses(const Environment& env, int horizon, const EventSpec& spec,
                                       int limit, bool prune) {
    check_horizon(horizon, limit);
    CompiledEvent ev = compile_event(spec);
    Enumerator<Arith> e(env, horizon);
    PathClock clock(ev);
    BracketAccumulator<Arith> acc;

    // Arm at time 0: Z_0(0) = 1.
    std::size_t root_fired = clock.on_visit(0, 1, 0);
    EventStatus root_status = event_status(ev, clock.identity_ids(), clock);

    auto dfs = [&](auto&& self, std::int64_t pos, int depth, EventStatus status) -> void {
        if (status == EventStatus::Occurred || status == EventStatus::Refuted) {
            // In pruned mode a decided prefix contributes its whole mass; the
            // unpruned variant extends to the horizon for cross-checking.
            if (prune || depth == horizon) {
                auto& slot = status == EventStatus::Occurred ? acc.occurred : acc.refuted;
                slot = slot + e.mass_at(depth);
                return;
            }
        } else if (depth == horizon) {
            acc.undecided = acc.undecided + e.mass_at(depth);
            return;
        }
        auto [left, right] = e.branch_masses(pos, depth);
        for (int dir = 0; dir < 2; ++dir) {
            std::int64_t np = dir == 0 ? pos - 1 : pos + 1;
            e.push(np, depth + 1, dir == 0 ? std::move(left) : std::move(right),
                   dir == 0 ? std::int8_t{-1} : std::int8_t{+1});
            EventStatus next_status = status;
            std::size_t fired = PathClock::npos;
            if (status == EventStatus::Undecided) {
                fired = clock.on_visit(np, e.count_at(np), static_cast<std::uint64_t>(depth + 1));
                if (fired != PathClock::npos)
                    next_status = event_status(ev, clock.identity_ids(), clock);
            }
            self(self, np, depth + 1, next_status);
            clock.unfire(fired);
            e.pop(np);
        }
    };
    dfs(dfs, 0, 0, root_status);
    (void)root_fired;
    return acc;
}

}  // namespace detail

inline EventProbabilityBracket event_probability(const Environment& env, int horizon,
                                                 const EventSpec& spec,
                                                 int limit = kDefaultEnumerationLimit,
                                                 bool prune = true) {
    bool rational_ok = true;
    try {
        env.exact_weight(0, 0).value();
        auto acc = detail::event_masses<RationalArith>(env, horizon, spec, limit, prune);
        EventProbabilityBracket b;
        b.exact_lower = acc.occurred;
        b.exact_upper = acc.occurred + acc.undecided;
        b.lower = to_double(*b.exact_lower);
        b.upper = to_double(*b.exact_upper);
        return b;
    } catch (const std::domain_error&) {
        rational_ok = false;
    } catch (const std::bad_optional_access&) {
        rational_ok = false;
    }
    (void)rational_ok;
    auto acc = detail::event_masses<IntervalArith>(env, horizon, spec, limit, prune);
    EventProbabilityBracket b;
    b.lower = acc.occurred.lo;
    b.upper = (acc.occurred + acc.undecided).hi;
    return b;
}

// Environment-invariance check: two environments that agree at every site
// x >= 0 give identical conditional probabilities to every continuation that
// stays strictly positive after the conditioning prefix, because such
// continuations only ever query weights at sites >= 0.
struct InvarianceReport {
    bool equal = false;
    double max_discrepancy = 0;
    bool exact = false;           // compared with exact rationals
    std::uint64_t continuations = 0;
    double total_a = 0;           // aggregated conditional mass of positive continuations
    double total_b = 0;
};

namespace detail {

template <class Arith>
InvarianceReport invariance_check(const Environment& env_a, const Environment& env_b, int horizon,
                                  const std::vector<std::int8_t>& prefix, int limit) {
    check_horizon(horizon, limit);
    int m = static_cast<int>(prefix.size());
    if (m == 0 || m > horizon)
        throw std::invalid_argument("env_invariance_check: need 1 <= prefix length <= horizon");

    Enumerator<Arith> ea(env_a, horizon);
    Enumerator<Arith> eb(env_b, horizon);
    std::int64_t pos = 0;
    for (int d = 0; d < m; ++d) {
        auto [la, ra] = ea.branch_masses(pos, d);
        auto [lb, rb] = eb.branch_masses(pos, d);
        std::int8_t s = prefix[static_cast<std::size_t>(d)];
        if (s != 1 && s != -1) throw std::invalid_argument("prefix steps must be +-1");
        pos += s;
        ea.push(pos, d + 1, s > 0 ? std::move(ra) : std::move(la), s);
        eb.push(pos, d + 1, s > 0 ? std::move(rb) : std::move(lb), s);
    }
    if (pos <= 0)
        throw std::invalid_argument("env_invariance_check: prefix must end at a positive site");

    InvarianceReport rep;
    rep.equal = true;
    typename Arith::Mass tot_a = Arith::zero();
    typename Arith::Mass tot_b = Arith::zero();
    // Conditional masses: products of step probabilities after the prefix.
    auto dfs = [&](auto&& self, std::int64_t p, int depth, typename Arith::Mass ma,
                   typename Arith::Mass mb) -> void {
        if (depth == horizon) {
            ++rep.continuations;
            double da = Arith::lo(ma), db = Arith::lo(mb);
            rep.max_discrepancy = std::max(rep.max_discrepancy, std::abs(da - db));
            if (!(ma == mb)) rep.equal = false;
            tot_a = tot_a + ma;
            tot_b = tot_b + mb;
            return;
        }
        auto [la, ra] = ea.branch_masses(p, depth);
        auto [lb, rb] = eb.branch_masses(p, depth);
        if (p - 1 > 0) {
            ea.push(p - 1, depth + 1, Arith::one(), -1);
            eb.push(p - 1, depth + 1, Arith::one(), -1);
            self(self, p - 1, depth + 1, ma * la, mb * lb);
            ea.pop(p - 1);
            eb.pop(p - 1);
        }
        ea.push(p + 1, depth + 1, Arith::one(), +1);
        eb.push(p + 1, depth + 1, Arith::one(), +1);
        self(self, p + 1, depth + 1, ma * ra, mb * rb);
        ea.pop(p + 1);
        eb.pop(p + 1);
    };
    dfs(dfs, pos, m, Arith::one(), Arith::one());
    rep.total_a = Arith::lo(tot_a);
    rep.total_b = Arith::lo(tot_b);
    if (!(tot_a == tot_b)) rep.equal = false;
    return rep;
}

}  // namespace detail

inline InvarianceReport env_invariance_check(const Environment& env_a, const Environment& env_b,
                                             int horizon, const std::vector<std::int8_t>& prefix,
                                             int limit = kDefaultEnumerationLimit) {
    if (!Environment::agree_on_nonnegative_sites(env_a, env_b))
        throw std::invalid_argument(
            "env_invariance_check: environments must agree at all sites x >= 0");
    try {
        auto rep = detail::invariance_check<RationalArith>(env_a, env_b, horizon, prefix, limit);
        rep.exact = true;
        return rep;
    } catch (const std::domain_error&) {
        // fall through to float mode
    }
    auto rep = detail::invariance_check<IntervalArith>(env_a, env_b, horizon, prefix, limit);
    rep.exact = false;
    return rep;
}

}  // namespace vrrw
