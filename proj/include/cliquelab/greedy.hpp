#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "graph.hpp"

namespace cliquelab {

struct SearchOutcome {
    Clique clique;
    std::uint64_t starts_used = 0;
    double delta = 0.0; // starts_used / total start count
    bool stopped_early = false;
    std::uint32_t iterations = 0; // passes, for the iterated variant
};

namespace detail {

// Greedy growth core: starting from `members` (a clique), repeatedly add
// the frontier vertex of maximum degree restricted to the frontier, ties
// broken uniformly at random, until the frontier is empty. Candidates are
// visited in ascending vertex id and the rng is consumed once per tie, so
// a fixed stream replays the exact trajectory.
//
// abort_below > 0 turns on hopeless-start pruning for early-stopped
// multistart search: once |members| + |frontier| < abort_below no
// completion of this start can reach abort_below, so we stop growing it.
inline void sm0_grow(const Graph& g, Rng& rng, VertexList& members,
                     std::vector<std::uint64_t>& frontier,
                     std::uint32_t abort_below = 0) {
    const std::size_t words = frontier.size();
    thread_local VertexList cand; // scratch; multistart callers are hot
    for (;;) {
        const std::uint32_t fsize = bitrow::popcount(frontier.data(), words);
        if (fsize == 0) break;
        if (abort_below && members.size() + fsize < abort_below) break;

        cand.clear();
        bitrow::for_each_bit(frontier.data(), words,
                             [&](Vertex v) { cand.push_back(v); });

        Vertex best_v = 0;
        std::uint32_t best_deg = 0;
        std::uint64_t tie_count = 0;
        for (std::size_t idx = 0; idx < cand.size(); ++idx) {
            if (idx + 2 < cand.size())
                __builtin_prefetch(g.row_data(cand[idx + 2]));
            const std::uint32_t d = bitrow::popcount_and(
                g.row_data(cand[idx]), frontier.data(), words);
            if (tie_count == 0 || d > best_deg) {
                best_deg = d;
                best_v = cand[idx];
                tie_count = 1;
            } else if (d == best_deg) {
                ++tie_count;
                if (rng.below(tie_count) == 0) best_v = cand[idx];
            }
        }
        members.push_back(best_v);
        const std::uint64_t* r = g.row_data(best_v);
        for (std::size_t w = 0; w < words; ++w) frontier[w] &= r[w];
    }
}

inline Clique sorted_clique(VertexList members) {
    std::sort(members.begin(), members.end());
    return Clique{std::move(members)};
}

} // namespace detail

// Single greedy construction. The result is maximal and contains the seed
// clique when one is given.
inline Clique sm0(const Graph& g, Rng& rng,
                  const VertexList* seed_clique = nullptr) {
    VertexList members;
    if (seed_clique) {
        if (!is_clique(g, *seed_clique))
            throw std::invalid_argument("sm0: seed is not a clique");
        members = *seed_clique;
    }
    auto frontier = frontier_mask(g, members);
    detail::sm0_grow(g, rng, members, frontier);
    return detail::sorted_clique(std::move(members));
}

namespace detail {

// Enumerates every complete i-subgraph in ascending lexicographic order and
// invokes fn(members). cand restricts candidates to ids above the last
// chosen vertex intersected with its neighborhood.
template <typename Fn>
inline void for_each_complete_subgraph(const Graph& g, std::uint32_t i,
                                       Fn&& fn) {
    const std::uint32_t n = g.order();
    const std::size_t words = (std::size_t(n) + 63) / 64;
    VertexList members;
    std::vector<std::vector<std::uint64_t>> cand_stack(
        i, std::vector<std::uint64_t>(words));

    auto recurse = [&](auto&& self, std::uint32_t depth,
                       const std::vector<std::uint64_t>* cand) -> void {
        if (depth == i) {
            fn(members);
            return;
        }
        auto visit = [&](Vertex v) {
            members.push_back(v);
            if (depth + 1 == i) {
                fn(members);
            } else {
                auto& next = cand_stack[depth];
                const std::uint64_t* r = g.row_data(v);
                if (cand) {
                    for (std::size_t w = 0; w < words; ++w)
                        next[w] = (*cand)[w] & r[w];
                } else {
                    std::copy(r, r + words, next.begin());
                }
                // only ids above v
                const std::size_t vw = v >> 6;
                for (std::size_t w = 0; w < vw; ++w) next[w] = 0;
                if ((v & 63) != 63)
                    next[vw] &= ~((2ull << (v & 63)) - 1);
                else
                    next[vw] = 0;
                self(self, depth + 1, &next);
            }
            members.pop_back();
        };
        if (cand) {
            bitrow::for_each_bit(cand->data(), words, visit);
        } else {
            for (Vertex v = 0; v < n; ++v) visit(v);
        }
    };
    recurse(recurse, 0, nullptr);
}

} // namespace detail

// Multistart greedy seeded with every complete i-subgraph; returns the
// largest clique found. O(N^{i+2}). Falls back to a plain unseeded run when
// no complete i-subgraph exists.
inline Clique smi(const Graph& g, std::uint32_t i, Rng& rng) {
    if (i < 1) throw std::invalid_argument("smi requires i >= 1");
    const std::size_t words = (std::size_t(g.order()) + 63) / 64;
    VertexList best;
    bool any = false;
    std::vector<std::uint64_t> mask(words);
    VertexList members;
    detail::for_each_complete_subgraph(g, i, [&](const VertexList& seed) {
        any = true;
        members.assign(seed.begin(), seed.end());
        bitrow::fill_universe(mask, g.order());
        for (Vertex v : seed) {
            const std::uint64_t* r = g.row_data(v);
            for (std::size_t w = 0; w < words; ++w) mask[w] &= r[w];
        }
        detail::sm0_grow(g, rng, members, mask);
        if (members.size() > best.size()) best = members;
    });
    if (!any) return sm0(g, rng);
    return detail::sorted_clique(std::move(best));
}

namespace detail {

// One pass of restricted multistart growth over all i-subsets of `base`;
// returns the best clique found, never smaller than base itself.
inline VertexList best_over_subsets(const Graph& g, const VertexList& base,
                                    std::uint32_t i, Rng& rng,
                                    std::uint64_t* starts_counter = nullptr) {
    VertexList best = base;
    if (i > base.size()) return best;
    const std::size_t words = (std::size_t(g.order()) + 63) / 64;
    std::vector<std::uint32_t> pick(i);
    for (std::uint32_t t = 0; t < i; ++t) pick[t] = t;
    VertexList members;
    std::vector<std::uint64_t> mask(words);
    for (;;) {
        members.clear();
        bitrow::fill_universe(mask, g.order());
        for (std::uint32_t t = 0; t < i; ++t) {
            const Vertex v = base[pick[t]];
            members.push_back(v);
            const std::uint64_t* r = g.row_data(v);
            for (std::size_t w = 0; w < words; ++w) mask[w] &= r[w];
        }
        sm0_grow(g, rng, members, mask);
        if (starts_counter) ++*starts_counter;
        if (members.size() > best.size()) best = members;
        // next combination
        std::uint32_t t = i;
        while (t > 0 && pick[t - 1] == base.size() - i + (t - 1)) --t;
        if (t == 0) break;
        ++pick[t - 1];
        for (std::uint32_t s = t; s < i; ++s) pick[s] = pick[s - 1] + 1;
    }
    return best;
}

} // namespace detail

// Runs sm0 once, then restarts from every i-subset of the found clique;
// each restart grows inside the common neighborhood of its subset. The
// original clique is retained as a candidate, so the result never shrinks.
inline Clique sm0_then_smi(const Graph& g, std::uint32_t i, Rng& rng) {
    if (i < 1) throw std::invalid_argument("sm0_then_smi requires i >= 1");
    Clique first = sm0(g, rng);
    VertexList best = detail::best_over_subsets(g, first.vertices, i, rng);
    return detail::sorted_clique(std::move(best));
}

// Iterates the subset sweep while the clique keeps growing strictly.
// iterations counts the sweeps performed, including the final one that
// found no improvement.
inline SearchOutcome sm0_iter_smi(const Graph& g, std::uint32_t i, Rng& rng) {
    if (i < 1) throw std::invalid_argument("sm0_iter_smi requires i >= 1");
    Clique cur = sm0(g, rng);
    std::uint64_t starts = 0;
    std::uint32_t passes = 0;
    for (;;) {
        ++passes;
        VertexList improved =
            detail::best_over_subsets(g, cur.vertices, i, rng, &starts);
        if (improved.size() <= cur.vertices.size()) break;
        cur = detail::sorted_clique(std::move(improved));
    }
    SearchOutcome out;
    out.clique = std::move(cur);
    out.starts_used = starts;
    out.delta = 1.0;
    out.stopped_early = false;
    out.iterations = passes;
    return out;
}

// Subset order observed to work well for the iterated sweep at each scale.
inline std::uint32_t choose_i(std::uint64_t n) {
    if (n < 590) return 2; // includes the < 100 clamp
    if (n < 1500) return 3;
    if (n < 7500) return 4;
    if (n < 13000) return 5;
    if (n < 65000) return 6;
    if (n <= 100000) return 7;
    // continue the pattern: one more per decade past 1e5
    std::uint32_t extra = 0;
    double bound = 1e5;
    while (double(n) > bound) {
        bound *= 10.0;
        ++extra;
    }
    return 7 + extra;
}

// Multistart greedy over rng-shuffled starts (level 1: one start per
// vertex, level 2: one per edge), stopping at the first clique of size
// >= k_stop. Starts that provably cannot reach k_stop
// (|clique| + |frontier| < k_stop) are abandoned early; that never skips a
// stop, since no completion of such a start reaches k_stop.
inline SearchOutcome early_stop_search(const Graph& g, int level,
                                       std::uint32_t k_stop, Rng& rng) {
    if (level != 1 && level != 2)
        throw std::invalid_argument("early_stop_search: level must be 1 or 2");
    if (k_stop < 1)
        throw std::invalid_argument("early_stop_search: k_stop must be >= 1");
    const std::uint32_t n = g.order();
    const std::size_t words = (std::size_t(n) + 63) / 64;

    std::vector<std::uint64_t> starts; // packed (u << 32) | v, v == u for level 1
    if (level == 1) {
        starts.reserve(n);
        for (Vertex v = 0; v < n; ++v)
            starts.push_back((std::uint64_t(v) << 32) | v);
    } else {
        starts.reserve(g.edge_count());
        for (Vertex u = 0; u < n; ++u) {
            const std::uint64_t* r = g.row_data(u);
            for (std::size_t w = (u >> 6); w < words; ++w) {
                std::uint64_t bits = r[w];
                if (w == (u >> 6)) {
                    if ((u & 63) == 63)
                        bits = 0;
                    else
                        bits &= ~((2ull << (u & 63)) - 1);
                }
                while (bits) {
                    const Vertex v = Vertex(w * 64 + std::countr_zero(bits));
                    bits &= bits - 1;
                    starts.push_back((std::uint64_t(u) << 32) | v);
                }
            }
        }
    }
    // Fisher-Yates shuffle of the start order
    for (std::size_t s = starts.size(); s > 1; --s)
        std::swap(starts[s - 1], starts[rng.below(s)]);

    VertexList best;
    std::vector<std::uint64_t> mask(words);
    VertexList members;
    SearchOutcome out;
    for (std::size_t s = 0; s < starts.size(); ++s) {
        members.clear();
        const Vertex u = Vertex(starts[s] >> 32), v = Vertex(starts[s]);
        members.push_back(u);
        if (v != u) members.push_back(v);
        const std::uint64_t* ru = g.row_data(u);
        if (v != u) {
            const std::uint64_t* rv = g.row_data(v);
            for (std::size_t w = 0; w < words; ++w) mask[w] = ru[w] & rv[w];
        } else {
            std::copy(ru, ru + words, mask.begin());
        }
        detail::sm0_grow(g, rng, members, mask, k_stop);
        if (members.size() > best.size()) best = members;
        if (members.size() >= k_stop) {
            out.clique = detail::sorted_clique(std::move(members));
            out.starts_used = s + 1;
            out.delta = double(s + 1) / double(starts.size());
            out.stopped_early = true;
            return out;
        }
    }
    out.clique = detail::sorted_clique(std::move(best));
    out.starts_used = starts.size();
    out.delta = 1.0;
    out.stopped_early = false;
    return out;
}

namespace detail {

// Greedy clique over the pool: visit candidates by descending degree
// within the pool (ties by ascending id) and keep each vertex compatible
// with everything kept so far.
inline VertexList refilter_to_clique(const Graph& g,
                                     const std::vector<std::uint64_t>& pool) {
    const std::size_t words = pool.size();
    struct Entry {
        Vertex v;
        std::uint32_t deg;
    };
    std::vector<Entry> order;
    bitrow::for_each_bit(pool.data(), words, [&](Vertex v) {
        order.push_back(
            {v, bitrow::popcount_and(g.row_data(v), pool.data(), words)});
    });
    std::stable_sort(order.begin(), order.end(),
                     [](const Entry& a, const Entry& b) {
                         if (a.deg != b.deg) return a.deg > b.deg;
                         return a.v < b.v;
                     });
    std::vector<std::uint64_t> allowed = pool;
    VertexList members;
    for (const Entry& e : order) {
        if (!bitrow::test(allowed, e.v)) continue;
        members.push_back(e.v);
        const std::uint64_t* r = g.row_data(e.v);
        for (std::size_t w = 0; w < words; ++w) allowed[w] &= r[w];
    }
    return members;
}

} // namespace detail

// Completes a partial (possibly impure) hidden-clique seed. Each round
// pools the current members with every vertex adjacent to at least
// |current|-1 of them, rebuilds a clique greedily by descending degree
// within the pool, then prunes members adjacent to fewer than |current|-1
// others. The one-miss pool admission is what lets an impostor member be
// out-voted: true sites blocked by the impostor re-enter the pool and the
// degree ordering drops the impostor during the rebuild. Rounds repeat to
// a fixed point; the largest clique seen (never smaller than the seed) is
// returned.
inline Clique cleanup(const Graph& g, const Clique& seed,
                      std::uint32_t k_target) {
    if (seed.vertices.size() < 2)
        throw std::invalid_argument("cleanup requires |seed| >= 2");
    if (!is_clique(g, seed.vertices))
        throw std::invalid_argument("cleanup: seed is not a clique");
    (void)k_target; // reached along the trajectory; best clique is returned

    const std::uint32_t n = g.order();
    const std::size_t words = (std::size_t(n) + 63) / 64;
    VertexList current = seed.vertices;
    VertexList best = current;
    constexpr int kMaxRounds = 100;
    std::vector<std::uint64_t> pool(words);

    for (int round = 0; round < kMaxRounds; ++round) {
        // pool admission: |N(v) /\ current| >= |current| - 1 (members pass
        // with equality)
        std::vector<std::uint32_t> hits(n, 0);
        for (Vertex m : current) {
            const std::uint64_t* r = g.row_data(m);
            bitrow::for_each_bit(r, words, [&](Vertex v) { ++hits[v]; });
        }
        std::fill(pool.begin(), pool.end(), 0);
        const std::uint32_t need = std::uint32_t(current.size()) - 1;
        for (Vertex v = 0; v < n; ++v)
            if (hits[v] >= need) bitrow::set(pool, v);
        for (Vertex m : current) bitrow::set(pool, m);

        VertexList next = detail::refilter_to_clique(g, pool);
        // prune members adjacent to fewer than |next|-1 others; a rebuild
        // already yields a clique, so this is a safety pass
        for (bool changed = true; changed && !next.empty();) {
            changed = false;
            for (std::size_t a = 0; a < next.size(); ++a) {
                std::uint32_t adj = 0;
                for (std::size_t b = 0; b < next.size(); ++b)
                    if (b != a && g.has_edge(next[a], next[b])) ++adj;
                if (adj + 1 < next.size()) {
                    next.erase(next.begin() + std::ptrdiff_t(a));
                    changed = true;
                    break;
                }
            }
        }
        std::sort(next.begin(), next.end());
        if (next.size() > best.size()) best = next;
        if (next == current) break;
        current = std::move(next);
    }
    return Clique{std::move(best)};
}

// ---------------------------------------------------------------------------
// exact oracle (n <= 64): branch and bound over single-word bitsets with a
// greedy colouring bound

namespace detail {

struct ExactState {
    const Graph* g;
    std::uint64_t rows[64];
    std::uint64_t best_mask;
    std::uint32_t best_size;
};

inline void exact_expand(ExactState& st, std::uint64_t cur_mask,
                         std::uint32_t cur_size, std::uint64_t cand) {
    if (cand == 0) {
        if (cur_size > st.best_size) {
            st.best_size = cur_size;
            st.best_mask = cur_mask;
        }
        return;
    }
    // greedy colouring bound on the candidate set
    std::uint32_t colors = 0;
    std::uint64_t rest = cand;
    while (rest) {
        ++colors;
        std::uint64_t avail = rest;
        while (avail) {
            const int v = std::countr_zero(avail);
            avail &= ~st.rows[v]; // this colour class stays independent
            avail &= ~(1ull << v);
            rest &= ~(1ull << v);
        }
    }
    if (cur_size + colors <= st.best_size) return;

    while (cand) {
        if (cur_size + std::uint32_t(std::popcount(cand)) <= st.best_size)
            return;
        const int v = std::countr_zero(cand);
        cand &= cand - 1;
        exact_expand(st, cur_mask | (1ull << v), cur_size + 1,
                     cand & st.rows[v]);
    }
}

} // namespace detail

// Provably maximum clique, enforced n <= 64.
inline Clique exact_max_clique(const Graph& g) {
    const std::uint32_t n = g.order();
    if (n > 64)
        throw std::invalid_argument("exact_max_clique is limited to n <= 64");
    detail::ExactState st{};
    st.g = &g;
    for (Vertex v = 0; v < n; ++v) st.rows[v] = g.row_data(v)[0];
    st.best_mask = 1ull; // vertex 0 alone; any graph has a 1-clique
    st.best_size = 1;
    const std::uint64_t all =
        (n == 64) ? ~0ull : ((1ull << n) - 1);
    detail::exact_expand(st, 0, 0, all);
    VertexList members;
    std::uint64_t m = st.best_mask;
    while (m) {
        members.push_back(Vertex(std::countr_zero(m)));
        m &= m - 1;
    }
    return Clique{std::move(members)};
}

} // namespace cliquelab
