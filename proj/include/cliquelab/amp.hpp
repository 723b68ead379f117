#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <vector>

#include "graph.hpp"

namespace cliquelab {

struct NumericalBlowup : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Message-passing state: messages[i*n + j] holds the log odds sent from i
// to j (diagonal unused), marginals[i] the per-site log odds of membership
// in the hidden set. Message storage is single precision in production
// (the n x n matrix dominates memory); all accumulation runs in double.
template <typename Scalar>
struct AmpStateT {
    std::uint32_t n = 0;
    std::uint32_t k_hc = 0;
    std::uint32_t t = 0;
    std::vector<Scalar> messages;
    std::vector<double> marginals;
};

using AmpState = AmpStateT<float>;

// Messages start random and strictly negative (uniform on [-1, 0));
// marginals start at zero.
template <typename Scalar = float>
AmpStateT<Scalar> amp_init(std::uint32_t n, std::uint32_t k_hc, Rng& rng) {
    if (n < 2 || k_hc < 1 || k_hc > n)
        throw std::invalid_argument("amp_init requires n >= 2, 1 <= k_hc <= n");
    AmpStateT<Scalar> st;
    st.n = n;
    st.k_hc = k_hc;
    st.t = 0;
    st.messages.resize(std::size_t(n) * n);
    for (auto& m : st.messages) m = Scalar(rng.next_double() - 1.0);
    st.marginals.assign(n, 0.0);
    return st;
}

namespace detail {

// Per-link odds contribution: log(1 + (1 + a~) e^g / sqrt(N)) -
// log(1 + e^g / sqrt(N)) with a~ = +/-1, i.e. log1p(x/(1+x)) on a present
// link and -log1p(x) on an absent one. The exponent is clamped at 700
// before exponentiation.
inline double amp_link_term(double gamma, bool present, double inv_root_n) {
    const double e = std::exp(std::min(gamma, 700.0));
    const double x = e * inv_root_n;
    return present ? std::log1p(x / (1.0 + x)) : -std::log1p(x);
}

inline double amp_link_term_f(float gamma, bool present, float inv_root_n) {
    if (gamma < 80.0f) {
        const float x = std::exp(gamma) * inv_root_n;
        return present ? double(std::log1p(x / (1.0f + x)))
                       : -double(std::log1p(x));
    }
    return amp_link_term(double(gamma), present, double(inv_root_n));
}

} // namespace detail

// One synchronous update: marginals from all incoming link terms, then
// every message as the marginal minus the term contributed by its
// recipient. Cost O(N^2); the link terms overwrite the message matrix in
// place, so no second N x N buffer is needed.
template <typename Scalar>
void amp_step(AmpStateT<Scalar>& st, const Graph& g) {
    const std::uint32_t n = st.n;
    if (g.order() != n)
        throw std::invalid_argument("amp_step: state/graph size mismatch");
    const double root_n = std::sqrt(double(n));
    const double inv_root_n = 1.0 / root_n;
    const double log_prior = std::log(double(st.k_hc) / root_n);

    std::vector<double> col_sum(n, 0.0);
    for (Vertex l = 0; l < n; ++l) {
        Scalar* row = st.messages.data() + std::size_t(l) * n;
        const std::uint64_t* adj = g.row_data(l);
        for (Vertex i = 0; i < n; ++i) {
            if (i == l) continue;
            const bool present = (adj[i >> 6] >> (i & 63)) & 1u;
            double c;
            if constexpr (std::is_same_v<Scalar, float>)
                c = detail::amp_link_term_f(row[i], present, float(inv_root_n));
            else
                c = detail::amp_link_term(row[i], present, inv_root_n);
            row[i] = Scalar(c);
            col_sum[i] += c;
        }
    }
    for (Vertex i = 0; i < n; ++i) {
        st.marginals[i] = log_prior + col_sum[i];
        if (!std::isfinite(st.marginals[i]))
            throw NumericalBlowup("amp_step: non-finite marginal at site " +
                                  std::to_string(i));
    }
    // messages: marginal of the sender minus the recipient's link term;
    // tiled pairwise swap keeps the transposed access cache-resident
    constexpr std::uint32_t kTile = 128;
    for (std::uint32_t bi = 0; bi < n; bi += kTile) {
        for (std::uint32_t bj = bi; bj < n; bj += kTile) {
            const std::uint32_t ih = std::min(n, bi + kTile);
            const std::uint32_t jh = std::min(n, bj + kTile);
            for (std::uint32_t i = bi; i < ih; ++i) {
                Scalar* row_i = st.messages.data() + std::size_t(i) * n;
                const std::uint32_t j0 = std::max(bj, i + 1);
                for (std::uint32_t j = j0; j < jh; ++j) {
                    Scalar* pij = row_i + j;
                    Scalar* pji = st.messages.data() + std::size_t(j) * n + i;
                    const double cij = double(*pij);
                    const double cji = double(*pji);
                    *pij = Scalar(st.marginals[i] - cji);
                    *pji = Scalar(st.marginals[j] - cij);
                }
            }
        }
    }
    ++st.t;
}

// Convergence is judged on marginals: largest absolute change <= eps.
inline bool amp_converged(const std::vector<double>& prev,
                          const std::vector<double>& next, double eps) {
    if (prev.size() != next.size())
        throw std::invalid_argument("amp_converged: size mismatch");
    double worst = 0.0;
    for (std::size_t i = 0; i < prev.size(); ++i)
        worst = std::max(worst, std::abs(next[i] - prev[i]));
    return worst <= eps;
}

enum class AmpOutcome { success, wrong_set, non_convergence, blowup };

inline const char* amp_outcome_name(AmpOutcome o) {
    switch (o) {
        case AmpOutcome::success: return "success";
        case AmpOutcome::wrong_set: return "wrong_set";
        case AmpOutcome::non_convergence: return "non_convergence";
        case AmpOutcome::blowup: return "blowup";
    }
    return "?";
}

struct AmpResult {
    AmpOutcome outcome = AmpOutcome::non_convergence;
    std::optional<Clique> clique;
    std::uint32_t iterations = 0;
    bool converged = false;
};

// Full recovery protocol: iterate to convergence (at most t_max sweeps),
// sort marginals in descending order, take the top k_hc sites and verify
// them as a clique. Non-convergence, blowup and a non-clique top set are
// all failures, tallied separately.
inline AmpResult amp_recover(const Graph& g, std::uint32_t k_hc, Rng& rng,
                             std::uint32_t t_max = 100, double eps = 1e-6) {
    AmpResult res;
    AmpState st = amp_init<float>(g.order(), k_hc, rng);
    std::vector<double> prev = st.marginals;
    for (std::uint32_t t = 1; t <= t_max; ++t) {
        try {
            amp_step(st, g);
        } catch (const NumericalBlowup&) {
            res.outcome = AmpOutcome::blowup;
            res.iterations = t;
            return res;
        }
        res.iterations = t;
        if (amp_converged(prev, st.marginals, eps)) {
            res.converged = true;
            break;
        }
        prev = st.marginals;
    }
    if (!res.converged) {
        res.outcome = AmpOutcome::non_convergence;
        return res;
    }
    std::vector<Vertex> order(g.order());
    std::iota(order.begin(), order.end(), 0u);
    std::stable_sort(order.begin(), order.end(), [&](Vertex a, Vertex b) {
        return st.marginals[a] > st.marginals[b];
    });
    VertexList top(order.begin(), order.begin() + k_hc);
    if (is_clique(g, top)) {
        std::sort(top.begin(), top.end());
        res.outcome = AmpOutcome::success;
        res.clique = Clique{std::move(top)};
    } else {
        res.outcome = AmpOutcome::wrong_set;
    }
    return res;
}

} // namespace cliquelab
