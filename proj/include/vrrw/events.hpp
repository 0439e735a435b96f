#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "vrrw/walk.hpp"

namespace vrrw {

// Declarative description of the stopping-time events studied by the
// toolkit. Every kind is a race among finitely many clocks, decidable online
// from the trajectory prefix; a run that hits its cap undecided is ambiguous.
//
//   E(x, m)        {T_x(m) < T_{x-1}}
//   Eprime(x, m)   {T_x(m) < T_{x+1}}
//   A0(x, k, g, g')  {T_{x+1}(ceil(k^g)) < T_x(ceil(k)) ^ T_{x+2}(ceil(k^g'))}
//   Ftrunc(x, m, gammas, D)
//                  {T_{x+i}(ceil(m^{gamma_{i+1}})) < T_{x+i-1}(ceil(m^{gamma_i}))
//                   for i = 1..D}   (finite truncation of the full event)
struct EventSpec {
    enum class Kind { E, Eprime, A0, Ftrunc };

    Kind kind = Kind::E;
    std::int64_t x = 0;
    std::uint64_t m = 1;                // E / Eprime level; Ftrunc base m
    double k = 1;                       // A0 base count
    double gamma = 1;                   // A0 exponent
    double gamma_prime = 1;             // A0 competitor exponent
    std::vector<double> gammas;         // Ftrunc gamma_1..gamma_{D+1}
    int depth = 0;                      // Ftrunc D

    static EventSpec E(std::int64_t x, std::uint64_t m) {
        EventSpec e;
        e.kind = Kind::E;
        e.x = x;
        e.m = m;
        return e;
    }
    static EventSpec Eprime(std::int64_t x, std::uint64_t m) {
        EventSpec e;
        e.kind = Kind::Eprime;
        e.x = x;
        e.m = m;
        return e;
    }
    static EventSpec A0(std::int64_t x, double k, double gamma, double gamma_prime) {
        EventSpec e;
        e.kind = Kind::A0;
        e.x = x;
        e.k = k;
        e.gamma = gamma;
        e.gamma_prime = gamma_prime;
        return e;
    }
    static EventSpec Ftrunc(std::int64_t x, std::uint64_t m, std::vector<double> gammas, int depth) {
        EventSpec e;
        e.kind = Kind::Ftrunc;
        e.x = x;
        e.m = m;
        e.gammas = std::move(gammas);
        e.depth = depth;
        return e;
    }

    std::string name() const {
        switch (kind) {
            case Kind::E: return "E";
            case Kind::Eprime: return "Eprime";
            case Kind::A0: return "A0";
            case Kind::Ftrunc: return "Ftrunc";
        }
        return "?";
    }
};

enum class EventStatus { Undecided, Occurred, Refuted };

// Non-integer thresholds round up to the next integer visit count
// (local times are integers and the defining inequality is Z >= threshold).
inline std::uint64_t ceil_threshold(double v) {
    if (!std::isfinite(v)) throw std::invalid_argument("event threshold not finite");
    if (v <= 1.0) return 1;
    if (v > 9.0e18) throw std::invalid_argument("event threshold too large");
    return static_cast<std::uint64_t>(std::ceil(v));
}

// An event lowered to watch specs plus pairwise races. The event occurs iff
// in every clause the `win` watch fires strictly before the `lose` watch;
// it is refuted as soon as some clause is lost.
struct CompiledEvent {
    struct WatchSpec {
        std::int64_t site;
        std::uint64_t threshold;
    };
    struct Clause {
        std::size_t win;   // index into watches
        std::size_t lose;
    };

    std::vector<WatchSpec> watches;
    std::vector<Clause> clauses;

    std::size_t add_watch(std::int64_t site, std::uint64_t threshold) {
        for (std::size_t i = 0; i < watches.size(); ++i)
            if (watches[i].site == site && watches[i].threshold == threshold) return i;
        watches.push_back({site, threshold});
        return watches.size() - 1;
    }
};

inline CompiledEvent compile_event(const EventSpec& spec) {
    CompiledEvent ev;
    switch (spec.kind) {
        case EventSpec::Kind::E: {
            if (spec.m < 1) throw std::invalid_argument("E(x,m): m must be >= 1");
            std::size_t win = ev.add_watch(spec.x, spec.m);
            std::size_t lose = ev.add_watch(spec.x - 1, 1);
            ev.clauses.push_back({win, lose});
            break;
        }
        case EventSpec::Kind::Eprime: {
            if (spec.m < 1) throw std::invalid_argument("Eprime(x,m): m must be >= 1");
            std::size_t win = ev.add_watch(spec.x, spec.m);
            std::size_t lose = ev.add_watch(spec.x + 1, 1);
            ev.clauses.push_back({win, lose});
            break;
        }
        case EventSpec::Kind::A0: {
            if (!(spec.k >= 1)) throw std::invalid_argument("A0: k must be >= 1");
            std::size_t win = ev.add_watch(spec.x + 1, ceil_threshold(std::pow(spec.k, spec.gamma)));
            std::size_t lose1 = ev.add_watch(spec.x, ceil_threshold(spec.k));
            std::size_t lose2 =
                ev.add_watch(spec.x + 2, ceil_threshold(std::pow(spec.k, spec.gamma_prime)));
            ev.clauses.push_back({win, lose1});
            ev.clauses.push_back({win, lose2});
            break;
        }
        case EventSpec::Kind::Ftrunc: {
            if (spec.depth < 1) throw std::invalid_argument("Ftrunc: depth must be >= 1");
            if (spec.gammas.size() < static_cast<std::size_t>(spec.depth) + 1)
                throw std::invalid_argument("Ftrunc: need gamma_1..gamma_{D+1}");
            if (spec.m < 1) throw std::invalid_argument("Ftrunc: m must be >= 1");
            double base = static_cast<double>(spec.m);
            for (int i = 1; i <= spec.depth; ++i) {
                std::size_t win = ev.add_watch(
                    spec.x + i, ceil_threshold(std::pow(base, spec.gammas[static_cast<std::size_t>(i)])));
                std::size_t lose = ev.add_watch(
                    spec.x + i - 1,
                    ceil_threshold(std::pow(base, spec.gammas[static_cast<std::size_t>(i - 1)])));
                ev.clauses.push_back({win, lose});
            }
            break;
        }
    }
    return ev;
}

// Evaluates the race against any clock exposing
// std::optional<uint64_t> fired_at(size_t watch_id).
// `watch_ids[i]` is the clock id of `ev.watches[i]`.
template <class Clock>
EventStatus event_status(const CompiledEvent& ev, const std::vector<std::size_t>& watch_ids,
                         const Clock& clock) {
    bool all_won = true;
    for (const auto& clause : ev.clauses) {
        auto tw = clock.fired_at(watch_ids[clause.win]);
        auto tl = clock.fired_at(watch_ids[clause.lose]);
        if (tl && (!tw || *tl <= *tw)) return EventStatus::Refuted;
        if (!tw) all_won = false;
    }
    return all_won ? EventStatus::Occurred : EventStatus::Undecided;
}

// Registers the event's watches on a StoppingClock.
inline std::vector<std::size_t> attach_event(const CompiledEvent& ev, StoppingClock& clock) {
    std::vector<std::size_t> ids;
    ids.reserve(ev.watches.size());
    for (const auto& w : ev.watches) ids.push_back(clock.watch_visits(w.site, w.threshold));
    return ids;
}

}  // namespace vrrw
