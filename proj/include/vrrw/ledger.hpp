#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace vrrw {

// Deterministic staging ledger behind the induction bound: K stages of visit
// thresholds at x+1, block sizes N_i, jump-probability floors p_i, and the
// lower bound each N_i p_i must meet. The existence constants c_0 and C are
// explicit inputs (the analysis only asserts they exist); every output
// records the values used.
struct DominoLedgerRow {
    int i = 0;
    double level = 0;        // k^gamma / (K-i+1)^2, the stage-i visit threshold
    double block = 0;        // N_i
    double p = 0;            // p_i
    double block_times_p = 0;
    double lower_bound = 0;  // 2 (c0/2)^{1+a+...+a^i} k^{1-a^i+a*eps} / (prod_i)^3
    double partial_product = 0;  // prod_{j=1}^i (K-j+2)^{a^{i-j}}
    bool meets_bound = false;
    bool block_cubed_ok = false;  // N_i >= k^gamma / (K-i+2)^3
};

struct DominoLedger {
    double k = 0, gamma = 0, alpha = 0, eps = 0, c0 = 0, big_c = 0;
    int stages = 0;  // K
    double gamma_prime = 0;
    bool largeness_ok = false;  // k >= e^{C/eps}
    std::vector<DominoLedgerRow> rows;
    bool levels_increasing = false;
    bool all_bounds_met = false;
    double product_sup = 0;
    bool eps_large_enough = false;  // eps >= C / ln k
    bool final_check = false;       // N_K p_K / 2 > k + 1
};

// How to read the bracket in K = [3 ln eps / ln alpha]. Both logarithms are
// negative, so the quantity is positive; Floor is the documented default.
enum class BracketRounding { Floor, Nearest };

inline DominoLedger domino_ledger(double k, double gamma, double alpha, double eps,
                                  double c0 = 0.5, double big_c = 1.0,
                                  BracketRounding rounding = BracketRounding::Floor) {
    if (!(alpha > 0 && alpha < 1)) throw std::invalid_argument("ledger: alpha must lie in (0,1)");
    if (!(gamma > 1)) throw std::invalid_argument("ledger: gamma must be > 1");
    if (!(eps > 0 && eps < alpha)) throw std::invalid_argument("ledger: eps must lie in (0,alpha)");
    if (!(c0 > 0 && c0 < 1)) throw std::invalid_argument("ledger: c0 must lie in (0,1)");
    if (!(big_c > 0)) throw std::invalid_argument("ledger: C must be > 0");
    if (!(k >= 1)) throw std::invalid_argument("ledger: k must be >= 1");

    double raw = 3.0 * std::log(eps) / std::log(alpha);
    int stages = rounding == BracketRounding::Floor ? static_cast<int>(std::floor(raw))
                                                    : static_cast<int>(std::lround(raw));
    if (stages < 1)
        throw std::invalid_argument("ledger: K = [3 ln eps / ln alpha] < 1 (eps too large for alpha)");

    DominoLedger led;
    led.k = k;
    led.gamma = gamma;
    led.alpha = alpha;
    led.eps = eps;
    led.c0 = c0;
    led.big_c = big_c;
    led.stages = stages;
    led.gamma_prime = (gamma - 1) / alpha + 1 - eps;
    led.largeness_ok = k >= std::exp(big_c / eps);

    double kg = std::pow(k, gamma);
    double k_agp = std::pow(k, -alpha * led.gamma_prime);

    led.rows.resize(static_cast<std::size_t>(stages));
    double exponent_sum = 1.0;  // 1 + alpha + ... + alpha^i, built incrementally
    double alpha_pow = 1.0;     // alpha^i
    led.levels_increasing = true;
    led.all_bounds_met = true;
    for (int i = 1; i <= stages; ++i) {
        auto& row = led.rows[static_cast<std::size_t>(i - 1)];
        row.i = i;
        double km1 = static_cast<double>(stages - i + 1);  // K-i+1
        double km2 = km1 + 1;                              // K-i+2
        row.level = kg / (km1 * km1);
        row.block = i == 1 ? kg / (static_cast<double>(stages) * stages)
                           : row.level - kg / (km2 * km2);
        if (i == 1) {
            row.p = c0 * k_agp;
        } else {
            const auto& prev = led.rows[static_cast<std::size_t>(i - 2)];
            row.p = c0 * std::pow(prev.block_times_p / 2.0, alpha) * k_agp;
        }
        row.block_times_p = row.block * row.p;

        alpha_pow *= alpha;
        exponent_sum += alpha_pow;  // now 1 + ... + alpha^i
        double prod = 1.0;
        for (int j = 1; j <= i; ++j)
            prod *= std::pow(static_cast<double>(stages - j + 2), std::pow(alpha, i - j));
        row.partial_product = prod;
        row.lower_bound = 2.0 * std::pow(c0 / 2.0, exponent_sum) / std::pow(prod, 3) *
                          std::pow(k, 1.0 - alpha_pow + alpha * eps);
        row.meets_bound = row.block_times_p >= row.lower_bound;
        row.block_cubed_ok = row.block >= kg / (km2 * km2 * km2);

        led.all_bounds_met = led.all_bounds_met && row.meets_bound;
        led.product_sup = std::max(led.product_sup, prod);
        if (i >= 2 &&
            !(row.level > led.rows[static_cast<std::size_t>(i - 2)].level))
            led.levels_increasing = false;
    }
    led.eps_large_enough = eps >= big_c / std::log(k);
    led.final_check = led.rows.back().block_times_p / 2.0 > k + 1.0;
    return led;
}

// Partial products prod_{j=1}^i (K-j+2)^{alpha^{i-j}} for K = 1..k_max and
// every i <= K, checked against the (K+1)^{1/(1-alpha)} bound; the full
// products (i = K) have a finite sup over K.
struct ProductBoundScan {
    double alpha = 0;
    std::vector<double> full_products;  // index K-1
    double running_sup = 0;
    bool all_partials_bounded = false;
    double worst_ratio = 0;  // max over (K,i) of product / bound
};

inline ProductBoundScan product_bound_scan(double alpha, int k_max) {
    if (!(alpha > 0 && alpha < 1))
        throw std::invalid_argument("product_bound_scan: alpha must lie in (0,1)");
    if (k_max < 1) throw std::invalid_argument("product_bound_scan: K_max must be >= 1");
    ProductBoundScan scan;
    scan.alpha = alpha;
    scan.all_partials_bounded = true;
    for (int K = 1; K <= k_max; ++K) {
        double bound = std::pow(static_cast<double>(K + 1), 1.0 / (1.0 - alpha));
        double full = 0;
        for (int i = 1; i <= K; ++i) {
            double prod = 1.0;
            for (int j = 1; j <= i; ++j)
                prod *= std::pow(static_cast<double>(K - j + 2), std::pow(alpha, i - j));
            scan.worst_ratio = std::max(scan.worst_ratio, prod / bound);
            if (prod > bound) scan.all_partials_bounded = false;
            if (i == K) full = prod;
        }
        scan.full_products.push_back(full);
        scan.running_sup = std::max(scan.running_sup, full);
    }
    return scan;
}

}  // namespace vrrw
