#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <vector>

#include "graph.hpp"
#include "greedy.hpp"

namespace cliquelab {

enum class MatrixKind {
    zero_one_scaled, // a_ij / sqrt(N)
    plus_minus       // +1 present / -1 absent, optionally / sqrt(N)
};

struct SpectralConfig {
    MatrixKind kind = MatrixKind::plus_minus;
    bool pm_normalized = false; // divide the +/-1 matrix by sqrt(N)
    std::optional<Vertex> hint_site;
    double e0 = 0.0; // diagonal boost on hint_site, in the chosen matrix scale
    double tol = 1e-8;
    std::uint32_t max_iter = 0; // 0: 10 * ceil(ln N) * 100

    std::uint32_t iter_budget(std::uint32_t n) const {
        if (max_iter) return max_iter;
        return 10u * std::uint32_t(std::ceil(std::log(double(n)))) * 100u;
    }
};

struct EigenPair {
    double value = 0.0;
    std::vector<double> vector;
    double residual = 0.0;
    std::uint32_t iterations = 0;
    bool converged = false;
};

// Boosts quoted on the 0/1-scaled matrix translate to the +/-1 matrix via
// the off-diagonal identity 2a - 1: eigenstates off the uniform direction
// coincide once the boost is doubled (and rescaled when the +/-1 matrix is
// left unnormalized).
inline double hint_boost_from_scaled(double e0_scaled, std::uint32_t n,
                                     MatrixKind kind, bool pm_normalized) {
    if (kind == MatrixKind::zero_one_scaled) return e0_scaled;
    return pm_normalized ? 2.0 * e0_scaled
                         : 2.0 * std::sqrt(double(n)) * e0_scaled;
}

namespace detail {

// y_i = sum over neighbours j of x[j]; x must be padded to words*64 doubles.
inline void raw_adjacency_product(const Graph& g, const double* x, double* y) {
    const std::uint32_t n = g.order();
    const std::size_t words = g.words_per_row();
#if defined(__AVX512F__)
    for (Vertex i = 0; i < n; ++i) {
        const auto* bytes =
            reinterpret_cast<const unsigned char*>(g.row_data(i));
        const std::size_t nb = words * 8;
        __m512d acc0 = _mm512_setzero_pd(), acc1 = _mm512_setzero_pd();
        __m512d acc2 = _mm512_setzero_pd(), acc3 = _mm512_setzero_pd();
        std::size_t b = 0;
        for (; b + 4 <= nb; b += 4) {
            acc0 = _mm512_mask_add_pd(acc0, bytes[b], acc0,
                                      _mm512_loadu_pd(x + 8 * b));
            acc1 = _mm512_mask_add_pd(acc1, bytes[b + 1], acc1,
                                      _mm512_loadu_pd(x + 8 * b + 8));
            acc2 = _mm512_mask_add_pd(acc2, bytes[b + 2], acc2,
                                      _mm512_loadu_pd(x + 8 * b + 16));
            acc3 = _mm512_mask_add_pd(acc3, bytes[b + 3], acc3,
                                      _mm512_loadu_pd(x + 8 * b + 24));
        }
        for (; b < nb; ++b)
            acc0 = _mm512_mask_add_pd(acc0, bytes[b], acc0,
                                      _mm512_loadu_pd(x + 8 * b));
        const __m512d s01 = _mm512_add_pd(acc0, acc1);
        const __m512d s23 = _mm512_add_pd(acc2, acc3);
        y[i] = _mm512_reduce_add_pd(_mm512_add_pd(s01, s23));
    }
#else
    for (Vertex i = 0; i < n; ++i) {
        const std::uint64_t* r = g.row_data(i);
        double acc = 0.0;
        for (std::size_t w = 0; w < words; ++w) {
            std::uint64_t bits = r[w];
            while (bits) {
                const int bpos = std::countr_zero(bits);
                bits &= bits - 1;
                acc += x[w * 64 + std::size_t(bpos)];
            }
        }
        y[i] = acc;
    }
#endif
}

} // namespace detail

// Matrix-free product in the chosen convention. The reduction order within
// each row is fixed (lane-strided then sequential), so repeated calls and
// any worker count give bit-identical results.
inline std::vector<double> matvec(const Graph& g, const SpectralConfig& cfg,
                                  const std::vector<double>& x) {
    const std::uint32_t n = g.order();
    if (x.size() != n) throw std::invalid_argument("matvec: dimension mismatch");
    const std::size_t padded = g.words_per_row() * 64;
    std::vector<double> xp(padded, 0.0);
    std::copy(x.begin(), x.end(), xp.begin());
    std::vector<double> y(n, 0.0);
    detail::raw_adjacency_product(g, xp.data(), y.data());
    const double root_n = std::sqrt(double(n));
    if (cfg.kind == MatrixKind::zero_one_scaled) {
        for (Vertex i = 0; i < n; ++i) y[i] /= root_n;
    } else {
        double sum = 0.0;
        for (double v : x) sum += v;
        for (Vertex i = 0; i < n; ++i) y[i] = 2.0 * y[i] - (sum - x[i]);
        if (cfg.pm_normalized)
            for (Vertex i = 0; i < n; ++i) y[i] /= root_n;
    }
    if (cfg.hint_site) {
        const Vertex h = *cfg.hint_site;
        if (h >= n) throw std::invalid_argument("matvec: hint site out of range");
        y[h] += cfg.e0 * x[h];
    }
    return y;
}

namespace detail {

inline double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

inline double norm(const std::vector<double>& a) {
    return std::sqrt(dot(a, a));
}

inline void normalize(std::vector<double>& a) {
    const double nrm = norm(a);
    if (nrm == 0.0) throw std::runtime_error("cannot normalize a zero vector");
    for (double& v : a) v /= nrm;
}

struct PowerOptions {
    const EigenPair* deflate = nullptr;
};

inline EigenPair power_iterate(const Graph& g, const SpectralConfig& cfg,
                               Rng& rng, const PowerOptions& opt) {
    const std::uint32_t n = g.order();
    if (cfg.tol <= 0.0) throw std::invalid_argument("tol must be positive");
    const std::uint32_t budget = cfg.iter_budget(n);

    std::vector<double> v(n);
    for (double& y : v) y = rng.gaussian();
    if (opt.deflate) {
        const double c = dot(v, opt.deflate->vector);
        for (Vertex i = 0; i < n; ++i) v[i] -= c * opt.deflate->vector[i];
    }
    normalize(v);

    // The band is nearly sign-symmetric in both conventions (for the
    // scaled 0/1 matrix once the uniform state is deflated away), so plain
    // iteration can lock onto its bottom. A short norm-growth probe
    // estimates the spectral radius of the iterated operator; shifting by
    // a bit more than that makes the algebraic top dominant. Rayleigh
    // quotients and residuals are computed for M itself and are
    // shift-invariant.
    double rho = 0.0;
    {
        std::vector<double> pv = v;
        for (int it = 0; it < 12; ++it) {
            std::vector<double> w = matvec(g, cfg, pv);
            if (opt.deflate) {
                const double c = dot(w, opt.deflate->vector);
                for (Vertex i = 0; i < n; ++i)
                    w[i] -= c * opt.deflate->vector[i];
            }
            rho = norm(w);
            if (rho == 0.0) break;
            for (Vertex i = 0; i < n; ++i) w[i] /= rho;
            pv = std::move(w);
        }
    }
    const double shift = 1.25 * rho;

    EigenPair out;
    for (std::uint32_t it = 1; it <= budget; ++it) {
        std::vector<double> w = matvec(g, cfg, v);
        if (opt.deflate) {
            const double c = dot(w, opt.deflate->vector);
            for (Vertex i = 0; i < n; ++i) w[i] -= c * opt.deflate->vector[i];
        }
        const double lambda = dot(v, w);
        double res2 = 0.0;
        for (Vertex i = 0; i < n; ++i) {
            const double r = w[i] - lambda * v[i];
            res2 += r * r;
        }
        out.value = lambda;
        out.residual = std::sqrt(res2);
        out.iterations = it;
        if (out.residual <= cfg.tol) {
            out.converged = true;
            out.vector = std::move(v);
            return out;
        }
        for (Vertex i = 0; i < n; ++i) w[i] += shift * v[i];
        if (opt.deflate) {
            const double c = dot(w, opt.deflate->vector);
            for (Vertex i = 0; i < n; ++i) w[i] -= c * opt.deflate->vector[i];
        }
        normalize(w);
        v = std::move(w);
    }
    out.vector = std::move(v);
    out.converged = false;
    return out;
}

} // namespace detail

// Power iteration from a random unit start; the returned value is the
// Rayleigh quotient and the residual is ||M v - lambda v||.
inline EigenPair power_top(const Graph& g, const SpectralConfig& cfg, Rng& rng) {
    return detail::power_iterate(g, cfg, rng, {});
}

// Deflated power iteration, re-orthogonalized against the top vector at
// every step.
inline EigenPair second_eigen(const Graph& g, const SpectralConfig& cfg,
                              const EigenPair& top, Rng& rng) {
    if (!top.converged)
        throw std::invalid_argument("second_eigen requires a converged top pair");
    detail::PowerOptions opt;
    opt.deflate = &top;
    return detail::power_iterate(g, cfg, rng, opt);
}

struct GapScanRow {
    double alpha = 0.0;
    std::uint64_t seed = 0;
    double lambda1 = 0.0;
    double lambda2 = 0.0;
    double gap = 0.0;
    std::uint32_t iterations = 0;
    bool converged = false;
};

// Plants a clique of size round(alpha * sqrt(n)) per seed (alpha = 0 keeps
// the control graph unplanted), measures lambda1 - lambda2 and flags rows
// whose iteration did not converge.
inline std::vector<GapScanRow> spectral_gap_scan(
    std::uint32_t n, double p, const std::vector<double>& alphas,
    const std::vector<std::uint64_t>& seeds, const SpectralConfig& cfg) {
    std::vector<GapScanRow> rows;
    for (double alpha : alphas) {
        for (std::uint64_t seed : seeds) {
            const std::uint64_t gseed =
                mix_seed(mix_seed(mix_seed(0x9a9a5cLL, "gap"), alpha), seed);
            Graph g = gen_gnp(n, p, mix_seed(gseed, "graph"));
            if (alpha > 0.0) {
                const auto k_hc = std::uint32_t(
                    std::lround(alpha * std::sqrt(double(n))));
                g = plant_naive(g, std::max(1u, k_hc)).first;
            }
            Rng rng1(mix_seed(gseed, "power1"));
            Rng rng2(mix_seed(gseed, "power2"));
            GapScanRow row;
            row.alpha = alpha;
            row.seed = seed;
            const EigenPair top = power_top(g, cfg, rng1);
            row.iterations = top.iterations;
            row.converged = top.converged;
            row.lambda1 = top.value;
            if (top.converged) {
                const EigenPair snd = second_eigen(g, cfg, top, rng2);
                row.iterations += snd.iterations;
                row.converged = snd.converged;
                row.lambda2 = snd.value;
                row.gap = row.lambda1 - row.lambda2;
            }
            rows.push_back(row);
        }
    }
    return rows;
}

// Orients the vector so the planted-dominated sign is positive, sorts
// components in descending order and reports the running fraction of
// planted sites per rank. Orientation follows the third moment: the
// planted block skews one tail of the component distribution, which stays
// reliable near the detection threshold where the single largest
// magnitude can come from the bulk.
inline std::vector<double> rank_components(const EigenPair& top,
                                           const PlantSpec& plant) {
    const std::size_t n = top.vector.size();
    double m3 = 0.0;
    for (double c : top.vector) m3 += c * c * c;
    const double sign = m3 < 0.0 ? -1.0 : 1.0;

    std::vector<std::uint32_t> order(n);
    std::iota(order.begin(), order.end(), 0u);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::uint32_t a, std::uint32_t b) {
                         return sign * top.vector[a] > sign * top.vector[b];
                     });
    std::vector<bool> planted(n, false);
    for (Vertex v : plant.vertices) planted[v] = true;
    std::vector<double> curve(n);
    std::size_t hits = 0;
    for (std::size_t r = 0; r < n; ++r) {
        if (planted[order[r]]) ++hits;
        curve[r] = double(hits) / double(r + 1);
    }
    return curve;
}

// Fraction of planted sites among the leading k_hc components.
inline double rank_plateau(const std::vector<double>& curve,
                           std::uint32_t k_hc) {
    if (k_hc == 0 || k_hc > curve.size())
        throw std::invalid_argument("rank_plateau: k_hc out of range");
    return curve[k_hc - 1];
}

// Boosted-site state extraction. A diagonal hint pins the sought state by
// its dominant component on the boosted site, not by being the topmost
// eigenvalue: right at the detection edge a band state can sit above the
// impurity level. Takes the top pair and, when the hint site does not
// dominate it, the deflated second pair, and returns whichever carries
// the larger hint-site weight.
inline EigenPair hinted_top_state(const Graph& g, const SpectralConfig& cfg,
                                  Rng& rng) {
    EigenPair top = power_top(g, cfg, rng);
    if (!cfg.hint_site || !top.converged) return top;
    const Vertex h = *cfg.hint_site;
    const double w_top = std::abs(top.vector[h]);
    // a clearly dominant hint component needs no second look
    double scale = 0.0;
    for (double c : top.vector) scale = std::max(scale, std::abs(c));
    if (w_top >= 0.5 * scale) return top;
    EigenPair snd = second_eigen(g, cfg, top, rng);
    if (!snd.converged) return top;
    return std::abs(snd.vector[h]) > w_top ? snd : top;
}

struct SpectralRecoverInfo {
    double lambda1 = 0.0;
    std::uint32_t iterations = 0;
    bool converged = false;
};

// Candidate extraction from the top eigenvector: take the 2*k_hc leading
// components, keep those adjacent to at least half of the candidate set,
// seed a greedy clique from the survivors and hand it to cleanup. Success
// is a clique of size >= k_hc that contains the hint site when one is set.
inline std::optional<Clique> spectral_recover(const Graph& g,
                                              std::uint32_t k_hc,
                                              const SpectralConfig& cfg,
                                              Rng& rng,
                                              SpectralRecoverInfo* info = nullptr) {
    const std::uint32_t n = g.order();
    if (k_hc < 2 || k_hc > n)
        throw std::invalid_argument("spectral_recover requires 2 <= k_hc <= n");
    const EigenPair top = power_top(g, cfg, rng);
    if (info) {
        info->lambda1 = top.value;
        info->iterations = top.iterations;
        info->converged = top.converged;
    }
    if (!top.converged) return std::nullopt;

    std::size_t arg_abs = 0;
    for (std::size_t i = 1; i < n; ++i)
        if (std::abs(top.vector[i]) > std::abs(top.vector[arg_abs])) arg_abs = i;
    const double sign = top.vector[arg_abs] < 0.0 ? -1.0 : 1.0;
    std::vector<std::uint32_t> order(n);
    std::iota(order.begin(), order.end(), 0u);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::uint32_t a, std::uint32_t b) {
                         return sign * top.vector[a] > sign * top.vector[b];
                     });

    const std::uint32_t budget = std::min(2 * k_hc, n);
    const std::size_t words = g.words_per_row();
    std::vector<std::uint64_t> cand_mask(words, 0);
    for (std::uint32_t r = 0; r < budget; ++r)
        bitrow::set(cand_mask, order[r]);

    std::vector<std::uint64_t> core_mask(words, 0);
    std::uint32_t kept = 0;
    for (std::uint32_t r = 0; r < budget; ++r) {
        const Vertex v = order[r];
        const std::uint32_t inside =
            bitrow::popcount_and(g.row_data(v), cand_mask.data(), words);
        if (2 * inside >= budget) {
            bitrow::set(core_mask, v);
            ++kept;
        }
    }
    if (kept < 2) return std::nullopt;
    VertexList seed = detail::refilter_to_clique(g, core_mask);
    if (seed.size() < 2) return std::nullopt;
    std::sort(seed.begin(), seed.end());
    const Clique out = cleanup(g, Clique{seed}, k_hc);
    if (out.size() < k_hc) return std::nullopt;
    if (cfg.hint_site && !out.contains(*cfg.hint_site)) return std::nullopt;
    return out;
}

} // namespace cliquelab
