#pragma once

#include <algorithm>
#include <cassert>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "vrrw/rng.hpp"
#include "vrrw/weights.hpp"

namespace vrrw {

// Dense local-time storage. The visited set of a nearest-neighbor walk
// started at 0 is always an integer interval containing 0, so counts live in
// a flat buffer indexed by offset; extension on either side keeps headroom to
// stay amortized O(1).
class LocalTimes {
public:
    LocalTimes() : counts_(1, 0), buf_lo_(0) {}

    std::uint64_t at(std::int64_t y) const {
        if (total_ == 0 || y < min_site_ || y > max_site_) return 0;
        return counts_[static_cast<std::size_t>(y - buf_lo_)];
    }

    // Returns the new count at y.
    std::uint64_t increment(std::int64_t y) {
        if (total_ == 0) {
            buf_lo_ = y;
            min_site_ = max_site_ = y;
        } else if (y < min_site_) {
            if (y < buf_lo_) grow_left(y);
            min_site_ = y;
        } else if (y > max_site_) {
            if (y - buf_lo_ >= static_cast<std::int64_t>(counts_.size())) grow_right(y);
            max_site_ = y;
        }
        ++total_;
        return ++counts_[static_cast<std::size_t>(y - buf_lo_)];
    }

    std::int64_t min_site() const { return min_site_; }
    std::int64_t max_site() const { return max_site_; }
    std::uint64_t total() const { return total_; }

private:
    void grow_left(std::int64_t y) {
        std::int64_t pad = std::max<std::int64_t>(64, static_cast<std::int64_t>(counts_.size()));
        std::int64_t new_lo = y - pad;
        std::vector<std::uint64_t> next(counts_.size() + static_cast<std::size_t>(buf_lo_ - new_lo), 0);
        std::copy(counts_.begin(), counts_.end(),
                  next.begin() + static_cast<std::ptrdiff_t>(buf_lo_ - new_lo));
        counts_ = std::move(next);
        buf_lo_ = new_lo;
    }

    void grow_right(std::int64_t y) {
        std::int64_t pad = std::max<std::int64_t>(64, static_cast<std::int64_t>(counts_.size()));
        counts_.resize(static_cast<std::size_t>(y - buf_lo_ + pad) + 1, 0);
    }

    std::vector<std::uint64_t> counts_;
    std::int64_t buf_lo_;
    std::int64_t min_site_ = 0;
    std::int64_t max_site_ = 0;
    std::uint64_t total_ = 0;
};

// Walk state: position X_n, step count n, and local times Z_n(.).
// Invariant: sum of local times == n + 1 (X_0..X_n each counted once).
struct WalkState {
    std::int64_t position = 0;
    std::uint64_t step_count = 0;
    LocalTimes local_times;

    std::uint64_t local_time(std::int64_t y) const { return local_times.at(y); }
    std::int64_t min_site() const { return local_times.min_site(); }
    std::int64_t max_site() const { return local_times.max_site(); }
};

// X_0 = 0 with Z_0(0) = 1.
inline WalkState init_walk(const Environment& env) {
    env.weight(0, 0);  // environment validity probe
    WalkState s;
    s.local_times.increment(0);
    return s;
}

// Online stopping-time bookkeeping. A watch is a pair (site x, threshold k)
// standing for T_x(k) = inf{n >= 0 : Z_n(x) >= k}; hitting times are the
// k = 1 case. Once fired a watch never unfires, and per site the firing
// indices are nondecreasing in the threshold.
class StoppingClock {
public:
    struct Watch {
        std::int64_t site;
        std::uint64_t threshold;
        std::optional<std::uint64_t> fired_at;
    };

    // T_site(threshold); returns the watch id.
    std::size_t watch_visits(std::int64_t site, std::uint64_t threshold) {
        if (threshold == 0) throw std::invalid_argument("StoppingClock: threshold must be >= 1");
        std::size_t id = watches_.size();
        watches_.push_back(Watch{site, threshold, std::nullopt});
        auto it = std::lower_bound(sites_.begin(), sites_.end(), site,
                                   [](const SiteQueue& q, std::int64_t s) { return q.site < s; });
        if (it == sites_.end() || it->site != site) it = sites_.insert(it, SiteQueue{site, {}, 0});
        auto& ids = it->ids;
        auto pos = std::upper_bound(ids.begin(), ids.end(), threshold,
                                    [this](std::uint64_t t, std::size_t i) {
                                        return t < watches_[i].threshold;
                                    });
        std::size_t insert_at = static_cast<std::size_t>(pos - ids.begin());
        if (insert_at < it->next)
            throw std::logic_error("StoppingClock: watch added below an already-fired threshold");
        ids.insert(pos, id);
        return id;
    }

    std::size_t watch_hit(std::int64_t site) { return watch_visits(site, 1); }

    // Fires every watch already satisfied by the current local times, at the
    // current step index (covers T_0(1) = 0 and late-added watches).
    bool arm(const WalkState& state) {
        bool any = false;
        for (auto& q : sites_) any |= advance(q, state.local_times.at(q.site), state.step_count);
        return any;
    }

    // Called when Z_n(site) just reached `count` at step index n.
    // Returns true if at least one watch fired now.
    bool notify(std::int64_t site, std::uint64_t count, std::uint64_t n) {
        auto it = std::lower_bound(sites_.begin(), sites_.end(), site,
                                   [](const SiteQueue& q, std::int64_t s) { return q.site < s; });
        if (it == sites_.end() || it->site != site) return false;
        return advance(*it, count, n);
    }

    const Watch& watch(std::size_t id) const { return watches_.at(id); }
    std::optional<std::uint64_t> fired_at(std::size_t id) const { return watches_.at(id).fired_at; }
    std::size_t size() const { return watches_.size(); }

    bool any_fired() const {
        for (const auto& w : watches_)
            if (w.fired_at) return true;
        return false;
    }

private:
    struct SiteQueue {
        std::int64_t site;
        std::vector<std::size_t> ids;  // watch ids, sorted by threshold
        std::size_t next;              // first unfired position in ids
    };

    bool advance(SiteQueue& q, std::uint64_t count, std::uint64_t n) {
        bool any = false;
        while (q.next < q.ids.size() && watches_[q.ids[q.next]].threshold <= count) {
            watches_[q.ids[q.next]].fired_at = n;
            ++q.next;
            any = true;
        }
        return any;
    }

    std::vector<Watch> watches_;
    std::vector<SiteQueue> sites_;  // sorted by site
};

// P(X_{n+1} = x+1 | F_n) = w_{Z(x+1)}(x+1) / (w_{Z(x-1)}(x-1) + w_{Z(x+1)}(x+1)).
inline double step_probability_right(const WalkState& s, const Environment& env) {
    std::int64_t x = s.position;
    double wl = env.weight(x - 1, static_cast<std::int64_t>(s.local_times.at(x - 1)));
    double wr = env.weight(x + 1, static_cast<std::int64_t>(s.local_times.at(x + 1)));
    return wr / (wl + wr);
}

// One transition. Right iff the uniform variate u satisfies u < p_right
// (half-open convention, so u = p_right steps left).
template <class Rng>
void step(WalkState& s, const Environment& env, Rng& rng, StoppingClock* clock = nullptr) {
    double p_right = step_probability_right(s, env);
    double u = rng.next_unit();
    s.position += (u < p_right) ? 1 : -1;
    ++s.step_count;
    std::uint64_t count = s.local_times.increment(s.position);
    assert(s.local_times.total() == s.step_count + 1);
    if (clock) clock->notify(s.position, count, s.step_count);
}

enum class RunOutcome { Fired, CapHit };

// Runs until `stop(clock)` is satisfied (re-checked whenever a watch fires,
// and once up front after arming) or until step_count reaches `cap`.
template <class Rng, class StopPred>
RunOutcome run_until(WalkState& s, const Environment& env, Rng& rng, StoppingClock& clock,
                     std::uint64_t cap, StopPred&& stop) {
    if (cap < 1) throw std::invalid_argument("run_until: cap must be >= 1");
    clock.arm(s);
    if (stop(clock)) return RunOutcome::Fired;
    while (s.step_count < cap) {
        double p_right = step_probability_right(s, env);
        double u = rng.next_unit();
        s.position += (u < p_right) ? 1 : -1;
        ++s.step_count;
        std::uint64_t count = s.local_times.increment(s.position);
        if (clock.notify(s.position, count, s.step_count) && stop(clock)) return RunOutcome::Fired;
    }
    return RunOutcome::CapHit;
}

// Default race semantics: stop at the first firing of any watched item.
template <class Rng>
RunOutcome run_until(WalkState& s, const Environment& env, Rng& rng, StoppingClock& clock,
                     std::uint64_t cap) {
    return run_until(s, env, rng, clock, cap,
                     [](const StoppingClock& c) { return c.any_fired(); });
}

}  // namespace vrrw
