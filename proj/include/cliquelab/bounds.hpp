#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace cliquelab {

// Closed-form clique-count baselines for G(n, p). Everything is evaluated
// in natural-log space through lgamma, so the formulas stay exact to
// double precision far beyond the range where the counts overflow.

inline double log_choose(double n, double k) {
    if (k < 0 || k > n) return -std::numeric_limits<double>::infinity();
    return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

inline double pairs(double k) { return 0.5 * k * (k - 1.0); }

// ln of the expected number of k-cliques: ln[ C(n,k) p^{k(k-1)/2} ].
inline double log_expected_cliques(std::uint64_t n, std::uint64_t k, double p) {
    if (!(p > 0.0 && p < 1.0))
        throw std::domain_error("log_expected_cliques requires p in (0,1)");
    if (k > n)
        throw std::domain_error("log_expected_cliques requires k <= n");
    return log_choose(double(n), double(k)) + pairs(double(k)) * std::log(p);
}

// Largest k whose expected clique count is still >= 1. The count is >= 1 at
// k = 0 and unimodal in k, so the admissible k form a prefix.
inline std::uint64_t k_max(std::uint64_t n, double p) {
    if (n < 2) throw std::domain_error("k_max requires n >= 2");
    std::uint64_t k = 1;
    while (k < n && log_expected_cliques(n, k + 1, p) >= 0.0) ++k;
    return k;
}

// Continuous solution R of E(R) = 1 via the Stirling expansion:
// R = 2 log_b n - 2 log_b log_b n + 2 log_b (e/2) + 1, with b = 1/p.
inline double r_continuous(std::uint64_t n, double p) {
    if (!(p > 0.0 && p < 1.0))
        throw std::domain_error("r_continuous requires p in (0,1)");
    const double lb = 1.0 / std::log(1.0 / p); // 1/ln b
    const double logb_n = std::log(double(n)) * lb;
    if (logb_n <= 0.0)
        throw std::domain_error("r_continuous: inner logarithm undefined");
    const double e_half = 2.718281828459045235 / 2.0;
    return 2.0 * logb_n - 2.0 * (std::log(logb_n) * lb) +
           2.0 * (std::log(e_half) * lb) + 1.0;
}

struct StepBounds {
    std::uint64_t k = 0;
    double lower = 0.0;
    double upper = 0.0;
    bool lower_clamped = false;
    bool upper_clamped = false;
};

// First-moment upper and second-moment lower bounds on
// Prob(max clique size >= k). The lower bound is the reciprocal of
// sum_j C(n-k, k-j) C(k, j) / C(n,k) * p^{-j(j-1)/2}, summed in log space
// with descending-term accumulation.
inline StepBounds prob_kmax_bounds(std::uint64_t n, std::uint64_t k, double p) {
    if (!(p > 0.0 && p < 1.0))
        throw std::domain_error("prob_kmax_bounds requires p in (0,1)");
    if (k > n) throw std::domain_error("prob_kmax_bounds requires k <= n");
    StepBounds out;
    out.k = k;
    if (k == 0) {
        out.lower = out.upper = 1.0;
        return out;
    }
    const double log_e = log_expected_cliques(n, k, p);
    if (log_e >= 0.0) {
        out.upper = 1.0;
        out.upper_clamped = true;
    } else {
        out.upper = std::exp(log_e);
    }

    const double ln_p = std::log(p);
    const std::uint64_t j_lo = (2 * k > n) ? 2 * k - n : 0;
    std::vector<double> log_terms;
    log_terms.reserve(k - j_lo + 1);
    const double log_cnk = log_choose(double(n), double(k));
    for (std::uint64_t j = j_lo; j <= k; ++j) {
        const double t = log_choose(double(n - k), double(k - j)) +
                         log_choose(double(k), double(j)) - log_cnk -
                         pairs(double(j)) * ln_p;
        log_terms.push_back(t);
    }
    std::sort(log_terms.begin(), log_terms.end(), std::greater<>());
    const double top = log_terms.front();
    double acc = 0.0;
    for (double t : log_terms) {
        const double d = t - top;
        if (d < -745.0) break; // below double underflow relative to the max
        acc += std::exp(d);
    }
    const double log_sum = top + std::log(acc);
    double lower = std::exp(-log_sum);
    if (lower > 1.0) {
        lower = 1.0;
        out.lower_clamped = true;
    }
    if (lower < 0.0) {
        lower = 0.0;
        out.lower_clamped = true;
    }
    out.lower = std::min(lower, out.upper);
    return out;
}

enum class StaircaseReading {
    largest, // largest K with the conditioned expectation >= 1
    smallest // literal smallest K >= i satisfying it (degenerates to K = i)
};

// Extreme K with C(n-i, K-i) p^{C(K,2)-C(i,2)} >= 1: the expected count of
// K-cliques through a fixed i-clique. The condition holds on a prefix
// starting at K = i (where the expectation is exactly 1), so the
// "smallest" reading trivially returns i; the default "largest" reading
// matches k_max when i = 0.
inline std::uint64_t conditioned_staircase(
    std::uint64_t n, std::uint64_t i, double p,
    StaircaseReading reading = StaircaseReading::largest) {
    if (!(p > 0.0 && p < 1.0))
        throw std::domain_error("conditioned_staircase requires p in (0,1)");
    if (i > n) throw std::domain_error("conditioned_staircase requires i <= n");
    auto log_expectation = [&](std::uint64_t K) {
        return log_choose(double(n - i), double(K - i)) +
               (pairs(double(K)) - pairs(double(i))) * std::log(p);
    };
    if (reading == StaircaseReading::smallest) return i;
    std::uint64_t K = i;
    while (K < n && log_expectation(K + 1) >= 0.0) ++K;
    return K;
}

// Probability that a clique of size k has no extension among the other
// n - k vertices: (1 - p^k)^(n-k), evaluated stably.
inline double stop_probability(std::uint64_t n, std::uint64_t k, double p = 0.5) {
    if (!(p > 0.0 && p < 1.0))
        throw std::domain_error("stop_probability requires p in (0,1)");
    if (k > n) throw std::domain_error("stop_probability requires k <= n");
    if (k == 0) return 0.0;
    if (k == n) return 1.0;
    const double log_pk = double(k) * std::log(p);
    // ln(1 - p^k) via log1p(-e^{log_pk})
    const double log_one_minus = std::log1p(-std::exp(log_pk));
    return std::exp(double(n - k) * log_one_minus);
}

} // namespace cliquelab
