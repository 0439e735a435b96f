#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <exception>
#include <map>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "vrrw/estimate.hpp"
#include "vrrw/events.hpp"
#include "vrrw/rng.hpp"
#include "vrrw/walk.hpp"
#include "vrrw/weights.hpp"

namespace vrrw {

namespace detail {

// Runs fn(replica) for replica = 0..trials-1 across up to `threads` workers.
// Replica r always uses RNG stream r, so results are a pure function of the
// replica index and aggregation is scheduling-independent.
template <class Fn>
void for_each_replica(std::uint64_t trials, int threads, Fn&& fn) {
    if (threads < 1) threads = 1;
    std::uint64_t workers = std::min<std::uint64_t>(static_cast<std::uint64_t>(threads), trials);
    if (workers <= 1) {
        for (std::uint64_t r = 0; r < trials; ++r) fn(r);
        return;
    }
    std::exception_ptr first_error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    std::uint64_t chunk = (trials + workers - 1) / workers;
    for (std::uint64_t w = 0; w < workers; ++w) {
        std::uint64_t lo = w * chunk;
        std::uint64_t hi = std::min(trials, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([&, lo, hi] {
            try {
                for (std::uint64_t r = lo; r < hi; ++r) fn(r);
            } catch (...) {
                std::scoped_lock lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
}

}  // namespace detail

// Classifies `trials` independent replicas of a stopping-time race.
// Deterministic in (env, event, trials, cap, master_seed) regardless of
// thread count; replica r runs on stream r, so sweeps sharing a master seed
// reuse trajectories (common random numbers).
inline Estimate estimate_event(const Environment& env, const EventSpec& spec, std::uint64_t trials,
                               std::uint64_t cap, std::uint64_t master_seed, int threads = 1) {
    if (trials < 1) throw std::invalid_argument("estimate_event: trials must be >= 1");
    if (cap < 1) throw std::invalid_argument("estimate_event: cap must be >= 1");
    CompiledEvent ev = compile_event(spec);

    std::vector<std::uint8_t> outcome(trials);  // 0 occurred, 1 refuted, 2 ambiguous
    detail::for_each_replica(trials, threads, [&](std::uint64_t r) {
        RngStream rng(master_seed, r);
        WalkState state = init_walk(env);
        StoppingClock clock;
        std::vector<std::size_t> ids = attach_event(ev, clock);
        EventStatus status = EventStatus::Undecided;
        RunOutcome run = run_until(state, env, rng, clock, cap, [&](const StoppingClock& c) {
            status = event_status(ev, ids, c);
            return status != EventStatus::Undecided;
        });
        outcome[r] = run == RunOutcome::CapHit ? 2 : (status == EventStatus::Occurred ? 0 : 1);
    });

    Estimate est;
    est.trials = trials;
    est.master_seed = master_seed;
    for (std::uint8_t o : outcome) {
        if (o == 0) ++est.occurred;
        else if (o == 1) ++est.refuted;
        else ++est.ambiguous;
    }
    return est;
}

// A0 estimation with the derived competitor exponent
// gamma' = (gamma-1)/alpha + 1 - eps and the induction bound
// exp(-c k^{1-alpha} / |ln eps|^{1/(1-alpha)}) recorded alongside (c is a fit
// constant, not a derived one).
struct A0Result {
    Estimate estimate;
    double gamma_prime = 0;
    std::uint64_t threshold_up = 0;     // visits demanded at x+1
    std::uint64_t threshold_base = 0;   // visits at x
    std::uint64_t threshold_right = 0;  // visits at x+2
    double bound = 0;
};

inline A0Result estimate_A0(const Environment& env, std::int64_t x, double k, double gamma,
                            double eps, std::uint64_t trials, std::uint64_t cap,
                            std::uint64_t master_seed, int threads = 1, double fit_c = 1.0) {
    const WeightSpec& def = env.default_spec();
    if (def.kind() != WeightSpec::Kind::Power || !(def.alpha() > 0) || !(def.alpha() < 1))
        throw std::invalid_argument("estimate_A0: needs a power-law environment with alpha in (0,1)");
    double alpha = def.alpha();
    if (!(gamma > 1)) throw std::invalid_argument("estimate_A0: gamma must be > 1");
    if (!(eps > 0 && eps < alpha)) throw std::invalid_argument("estimate_A0: eps must lie in (0,alpha)");

    A0Result res;
    res.gamma_prime = (gamma - 1) / alpha + 1 - eps;
    EventSpec spec = EventSpec::A0(x, k, gamma, res.gamma_prime);
    CompiledEvent ev = compile_event(spec);
    res.threshold_up = ev.watches[0].threshold;
    res.threshold_base = ev.watches[1].threshold;
    res.threshold_right = ev.watches[2].threshold;
    res.bound = std::exp(-fit_c * std::pow(k, 1.0 - alpha) /
                         std::pow(std::fabs(std::log(eps)), 1.0 / (1.0 - alpha)));
    res.estimate = estimate_event(env, spec, trials, cap, master_seed, threads);
    return res;
}

// Distinct sites visited during the trailing window of each run. For a
// nearest-neighbor walk the visited set of any time window is an interval,
// so the support is [min, max] over the window.
struct LocalizationRun {
    std::uint64_t window_start = 0;  // first step index inside the window
    std::int64_t support_min = 0;
    std::int64_t support_max = 0;
    std::uint64_t support_size = 0;
};

struct LocalizationProfile {
    std::uint64_t horizon = 0;
    double window_fraction = 0;
    std::vector<LocalizationRun> runs;
    std::map<std::uint64_t, std::uint64_t> histogram;  // support size -> count
};

inline LocalizationProfile localization_profile(const Environment& env, std::uint64_t horizon,
                                                double window_fraction, std::uint64_t trials,
                                                std::uint64_t master_seed, int threads = 1) {
    if (!(window_fraction > 0 && window_fraction < 1))
        throw std::invalid_argument("localization_profile: window_fraction must lie in (0,1)");
    if (horizon < 2) throw std::invalid_argument("localization_profile: horizon must be >= 2");
    if (trials < 1) throw std::invalid_argument("localization_profile: trials must be >= 1");

    std::uint64_t window_len = std::max<std::uint64_t>(
        2, static_cast<std::uint64_t>(std::llround(window_fraction * static_cast<double>(horizon))));
    std::uint64_t window_start = horizon - window_len + 1;  // window covers X_n, n in [start, horizon]

    LocalizationProfile prof;
    prof.horizon = horizon;
    prof.window_fraction = window_fraction;
    prof.runs.resize(trials);
    detail::for_each_replica(trials, threads, [&](std::uint64_t r) {
        RngStream rng(master_seed, r);
        WalkState s = init_walk(env);
        std::int64_t wmin = 0, wmax = 0;
        bool window_open = false;
        while (s.step_count < horizon) {
            step(s, env, rng);
            if (s.step_count >= window_start) {
                if (!window_open) {
                    wmin = wmax = s.position;
                    window_open = true;
                } else {
                    wmin = std::min(wmin, s.position);
                    wmax = std::max(wmax, s.position);
                }
            }
        }
        prof.runs[r] = LocalizationRun{window_start, wmin, wmax,
                                       static_cast<std::uint64_t>(wmax - wmin + 1)};
    });
    for (const auto& run : prof.runs) ++prof.histogram[run.support_size];
    return prof;
}

// Local-time exponents at the range edge: the first time the leftmost
// visited site holds local time k, record log_k Z(leftmost + i) for
// i = 1..depth. Offsets never visited are flagged undefined rather than
// mapped to -infinity. Unconditioned runs: no rare-event rejection step.
struct ExponentSample {
    std::uint64_t level = 0;  // k
    bool reached = false;
    std::uint64_t at_step = 0;
    std::vector<double> log_ratio;   // index i-1 <-> offset i
    std::vector<bool> defined;
};

struct ExponentProfile {
    std::vector<std::vector<ExponentSample>> runs;  // runs[r][level_index]
    int depth = 0;
};

inline ExponentProfile exponent_profile(const Environment& env,
                                        const std::vector<std::uint64_t>& k_levels, int depth,
                                        std::uint64_t cap, std::uint64_t trials,
                                        std::uint64_t master_seed, int threads = 1) {
    if (k_levels.empty()) throw std::invalid_argument("exponent_profile: need at least one level");
    for (std::size_t j = 0; j < k_levels.size(); ++j) {
        if (k_levels[j] < 2) throw std::invalid_argument("exponent_profile: levels must be >= 2");
        if (j > 0 && k_levels[j] <= k_levels[j - 1])
            throw std::invalid_argument("exponent_profile: levels must be strictly increasing");
    }
    if (depth < 1) throw std::invalid_argument("exponent_profile: depth must be >= 1");
    if (trials < 1) throw std::invalid_argument("exponent_profile: trials must be >= 1");

    ExponentProfile prof;
    prof.depth = depth;
    prof.runs.resize(trials);
    detail::for_each_replica(trials, threads, [&](std::uint64_t r) {
        RngStream rng(master_seed, r);
        WalkState s = init_walk(env);
        auto& samples = prof.runs[r];
        samples.resize(k_levels.size());
        for (std::size_t j = 0; j < k_levels.size(); ++j) samples[j].level = k_levels[j];
        std::size_t next = 0;
        auto probe = [&]() {
            std::uint64_t z_edge = s.local_times.at(s.min_site());
            while (next < k_levels.size() && z_edge >= k_levels[next]) {
                auto& sample = samples[next];
                sample.reached = true;
                sample.at_step = s.step_count;
                double log_k = std::log(static_cast<double>(k_levels[next]));
                for (int i = 1; i <= depth; ++i) {
                    std::uint64_t z = s.local_times.at(s.min_site() + i);
                    sample.defined.push_back(z > 0);
                    sample.log_ratio.push_back(
                        z > 0 ? std::log(static_cast<double>(z)) / log_k : 0.0);
                }
                ++next;
            }
        };
        probe();  // Z_0(0) = 1 can already satisfy nothing (levels >= 2), but keeps the logic uniform
        while (next < k_levels.size() && s.step_count < cap) {
            step(s, env, rng);
            probe();
        }
    });
    return prof;
}

// Returns-to-origin counts and range widths at logarithmically spaced probe
// times; descriptive only.
struct DiagnosticsPoint {
    std::uint64_t n = 0;
    std::uint64_t returns = 0;  // visits to 0 after time 0, i.e. Z_n(0) - 1
    std::int64_t min_site = 0;
    std::int64_t max_site = 0;
};

struct DiagnosticsRun {
    std::vector<DiagnosticsPoint> points;
};

inline std::vector<std::uint64_t> diagnostics_probe_grid(std::uint64_t horizon) {
    std::vector<std::uint64_t> grid;
    for (std::uint64_t n = 1; n < horizon; n *= 2) grid.push_back(n);
    if (horizon >= 1) grid.push_back(horizon);
    return grid;
}

inline std::vector<DiagnosticsRun> recurrence_diagnostics(const Environment& env,
                                                          std::uint64_t horizon,
                                                          std::uint64_t trials,
                                                          std::uint64_t master_seed,
                                                          int threads = 1) {
    if (trials < 1) throw std::invalid_argument("recurrence_diagnostics: trials must be >= 1");
    std::vector<std::uint64_t> grid = diagnostics_probe_grid(horizon);
    std::vector<DiagnosticsRun> runs(trials);
    detail::for_each_replica(trials, threads, [&](std::uint64_t r) {
        RngStream rng(master_seed, r);
        WalkState s = init_walk(env);
        auto& run = runs[r];
        std::size_t next = 0;
        while (next < grid.size()) {
            while (s.step_count < grid[next]) step(s, env, rng);
            run.points.push_back(DiagnosticsPoint{s.step_count, s.local_times.at(0) - 1,
                                                  s.min_site(), s.max_site()});
            ++next;
        }
    });
    return runs;
}

// Least-squares fit of -log p against m^{r*alpha}; kappa is the slope,
// reported as a descriptive parameter.
struct DecayFit {
    bool fitted = false;
    std::string refusal;  // set when the fit was refused (all zero occurrence)
    double kappa = 0;
    double intercept = 0;
    double r_squared = 0;
    double max_abs_residual = 0;
    std::size_t points_used = 0;
};

inline DecayFit decay_fit(const std::vector<std::pair<double, double>>& m_and_p, double r_alpha) {
    if (m_and_p.size() < 3)
        throw std::invalid_argument("decay_fit: need at least 3 estimates");
    if (!(r_alpha > 0)) throw std::invalid_argument("decay_fit: r*alpha must be > 0");

    std::vector<std::pair<double, double>> pts;  // (x, y) = (m^{r a}, -log p)
    for (auto [m, p] : m_and_p) {
        if (!(m > 0)) throw std::invalid_argument("decay_fit: m must be > 0");
        if (p < 0 || p > 1) throw std::invalid_argument("decay_fit: p must lie in [0,1]");
        if (p > 0) pts.emplace_back(std::pow(m, r_alpha), -std::log(p));
    }
    DecayFit fit;
    if (pts.empty()) {
        fit.refusal = "all estimates have zero occurrences; only lower bounds are available";
        return fit;
    }
    if (pts.size() < 3)
        throw std::invalid_argument("decay_fit: fewer than 3 non-degenerate estimates");

    double n = static_cast<double>(pts.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (auto [x, y] : pts) {
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    double denom = n * sxx - sx * sx;
    if (denom == 0) throw std::invalid_argument("decay_fit: degenerate abscissae");
    fit.kappa = (n * sxy - sx * sy) / denom;
    fit.intercept = (sy - fit.kappa * sx) / n;
    double ss_res = 0, ss_tot = 0, mean_y = sy / n;
    for (auto [x, y] : pts) {
        double resid = y - (fit.kappa * x + fit.intercept);
        ss_res += resid * resid;
        ss_tot += (y - mean_y) * (y - mean_y);
        fit.max_abs_residual = std::max(fit.max_abs_residual, std::fabs(resid));
    }
    fit.r_squared = ss_tot > 0 ? 1.0 - ss_res / ss_tot : 1.0;
    fit.points_used = pts.size();
    fit.fitted = true;
    return fit;
}

inline DecayFit decay_fit_estimates(const std::vector<std::pair<double, Estimate>>& estimates,
                                    double r_alpha) {
    std::vector<std::pair<double, double>> pts;
    pts.reserve(estimates.size());
    for (const auto& [m, est] : estimates) pts.emplace_back(m, est.point_lo());
    return decay_fit(pts, r_alpha);
}

}  // namespace vrrw
