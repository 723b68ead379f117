#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#if defined(__AVX512VPOPCNTDQ__) && defined(__AVX512F__)
#include <immintrin.h>
#endif

#include "rng.hpp"

namespace cliquelab {

using Vertex = std::uint32_t;
using VertexList = std::vector<Vertex>;

// Simple undirected graph over vertices 0..n-1, bit-packed symmetric
// adjacency (both triangles stored), zero diagonal. Immutable once built;
// safe to share across threads.
class Graph {
public:
    static constexpr std::uint32_t kDefaultMaxVertices = 65536;

    std::uint32_t order() const { return n_; }
    std::uint64_t edge_count() const { return edges_; }
    std::size_t words_per_row() const { return words_; }

    std::span<const std::uint64_t> row(Vertex v) const {
        return {bits_.data() + std::size_t(v) * words_, words_};
    }
    const std::uint64_t* row_data(Vertex v) const {
        return bits_.data() + std::size_t(v) * words_;
    }

    bool has_edge(Vertex u, Vertex v) const {
        return (bits_[std::size_t(u) * words_ + (v >> 6)] >> (v & 63)) & 1u;
    }

    std::uint32_t degree(Vertex v) const {
        std::uint32_t d = 0;
        const std::uint64_t* r = row_data(v);
        for (std::size_t w = 0; w < words_; ++w) d += std::popcount(r[w]);
        return d;
    }

    std::vector<std::uint32_t> degrees() const {
        std::vector<std::uint32_t> ds(n_);
        for (Vertex v = 0; v < n_; ++v) ds[v] = degree(v);
        return ds;
    }

private:
    friend class GraphBuilder;
    std::uint32_t n_ = 0;
    std::size_t words_ = 0;
    std::uint64_t edges_ = 0;
    std::vector<std::uint64_t> bits_;
};

// Mutable staging area; every Graph constructor in this library funnels
// through here so symmetry and the zero diagonal hold by construction.
class GraphBuilder {
public:
    explicit GraphBuilder(std::uint32_t n, bool allow_large = false)
        : n_(n), words_((std::size_t(n) + 63) / 64) {
        if (n == 0) throw std::invalid_argument("graph order must be >= 1");
        if (n > Graph::kDefaultMaxVertices && !allow_large)
            throw std::invalid_argument(
                "graph order " + std::to_string(n) +
                " exceeds default cap 65536; pass allow_large to override");
        bits_.assign(words_ * n_, 0);
    }

    explicit GraphBuilder(const Graph& g)
        : n_(g.order()), words_(g.words_per_row()),
          bits_(g.row_data(0), g.row_data(0) + g.words_per_row() * g.order()) {}

    std::uint32_t order() const { return n_; }

    bool has_edge(Vertex u, Vertex v) const {
        return (bits_[std::size_t(u) * words_ + (v >> 6)] >> (v & 63)) & 1u;
    }

    void set_edge(Vertex u, Vertex v) {
        if (u == v) throw std::invalid_argument("self loops are not allowed");
        bits_[std::size_t(u) * words_ + (v >> 6)] |= 1ull << (v & 63);
        bits_[std::size_t(v) * words_ + (u >> 6)] |= 1ull << (u & 63);
    }

    void clear_edge(Vertex u, Vertex v) {
        bits_[std::size_t(u) * words_ + (v >> 6)] &= ~(1ull << (v & 63));
        bits_[std::size_t(v) * words_ + (u >> 6)] &= ~(1ull << (u & 63));
    }

    Graph build() && {
        Graph g;
        g.n_ = n_;
        g.words_ = words_;
        g.bits_ = std::move(bits_);
        std::uint64_t total = 0;
        for (std::uint64_t w : g.bits_) total += std::popcount(w);
        g.edges_ = total / 2;
        return g;
    }

private:
    std::uint32_t n_;
    std::size_t words_;
    std::vector<std::uint64_t> bits_;
};

// ---------------------------------------------------------------------------
// bit-row helpers shared by the search algorithms

namespace bitrow {

#if defined(__AVX512VPOPCNTDQ__) && defined(__AVX512F__)
inline std::uint32_t popcount_and(const std::uint64_t* a, const std::uint64_t* b,
                                  std::size_t words) {
    __m512i acc = _mm512_setzero_si512();
    std::size_t w = 0;
    for (; w + 8 <= words; w += 8) {
        const __m512i x = _mm512_and_si512(
            _mm512_loadu_si512(reinterpret_cast<const void*>(a + w)),
            _mm512_loadu_si512(reinterpret_cast<const void*>(b + w)));
        acc = _mm512_add_epi64(acc, _mm512_popcnt_epi64(x));
    }
    auto sum = std::uint32_t(_mm512_reduce_add_epi64(acc));
    for (; w < words; ++w) sum += std::popcount(a[w] & b[w]);
    return sum;
}
#else
inline std::uint32_t popcount_and(const std::uint64_t* a, const std::uint64_t* b,
                                  std::size_t words) {
    std::uint32_t sum = 0;
    std::size_t w = 0;
    for (; w + 4 <= words; w += 4) {
        sum += std::popcount(a[w] & b[w]);
        sum += std::popcount(a[w + 1] & b[w + 1]);
        sum += std::popcount(a[w + 2] & b[w + 2]);
        sum += std::popcount(a[w + 3] & b[w + 3]);
    }
    for (; w < words; ++w) sum += std::popcount(a[w] & b[w]);
    return sum;
}
#endif

inline std::uint32_t popcount(const std::uint64_t* a, std::size_t words) {
    std::uint32_t sum = 0;
    for (std::size_t w = 0; w < words; ++w) sum += std::popcount(a[w]);
    return sum;
}

inline void fill_universe(std::vector<std::uint64_t>& mask, std::uint32_t n) {
    mask.assign((std::size_t(n) + 63) / 64, ~0ull);
    if (n & 63) mask.back() = (1ull << (n & 63)) - 1;
}

inline bool test(const std::vector<std::uint64_t>& mask, Vertex v) {
    return (mask[v >> 6] >> (v & 63)) & 1u;
}

inline void set(std::vector<std::uint64_t>& mask, Vertex v) {
    mask[v >> 6] |= 1ull << (v & 63);
}

inline void clear(std::vector<std::uint64_t>& mask, Vertex v) {
    mask[v >> 6] &= ~(1ull << (v & 63));
}

template <typename Fn>
inline void for_each_bit(const std::uint64_t* mask, std::size_t words, Fn&& fn) {
    for (std::size_t w = 0; w < words; ++w) {
        std::uint64_t bits = mask[w];
        while (bits) {
            const int b = std::countr_zero(bits);
            bits &= bits - 1;
            fn(static_cast<Vertex>(w * 64 + b));
        }
    }
}

inline VertexList to_list(const std::vector<std::uint64_t>& mask) {
    VertexList out;
    for_each_bit(mask.data(), mask.size(), [&](Vertex v) { out.push_back(v); });
    return out;
}

} // namespace bitrow

// ---------------------------------------------------------------------------
// domain types

// Sorted vertex set whose pairwise adjacency was checked on construction.
struct Clique {
    VertexList vertices;

    std::uint32_t size() const { return std::uint32_t(vertices.size()); }

    static Clique verified(const Graph& g, VertexList vs) {
        std::sort(vs.begin(), vs.end());
        for (std::size_t a = 0; a < vs.size(); ++a) {
            if (vs[a] >= g.order())
                throw std::out_of_range("clique vertex out of range");
            for (std::size_t b = a + 1; b < vs.size(); ++b)
                if (!g.has_edge(vs[a], vs[b]))
                    throw std::invalid_argument("vertex set is not a clique");
        }
        return Clique{std::move(vs)};
    }

    bool contains(Vertex v) const {
        return std::binary_search(vertices.begin(), vertices.end(), v);
    }
};

enum class PlantMethod { naive, degree_preserving };

enum class Placement { first_sites, random_sites };

// Record of a hidden clique insertion.
struct PlantSpec {
    VertexList vertices;
    PlantMethod method = PlantMethod::naive;
    std::uint32_t k_hc = 0;
    double alpha = 0.0; // k_hc / sqrt(n), as stored
    std::uint64_t base_seed = 0;
};

struct RewireExhaustedError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// constructors and primitives

// G(n, p): every unordered pair drawn independently, row-major pair order,
// so the graph is a pure function of (n, p, seed).
inline Graph gen_gnp(std::uint32_t n, double p, std::uint64_t seed,
                     bool allow_large = false) {
    if (n < 1) throw std::invalid_argument("gen_gnp requires n >= 1");
    if (!(p > 0.0 && p < 1.0))
        throw std::invalid_argument("gen_gnp requires p in (0, 1)");
    GraphBuilder b(n, allow_large);
    Rng rng(seed);
    for (Vertex i = 0; i + 1 < n; ++i)
        for (Vertex j = i + 1; j < n; ++j)
            if (rng.bernoulli(p)) b.set_edge(i, j);
    return std::move(b).build();
}

inline Graph complement(const Graph& g) {
    const std::uint32_t n = g.order();
    GraphBuilder b(n, /*allow_large=*/true);
    for (Vertex i = 0; i + 1 < n; ++i)
        for (Vertex j = i + 1; j < n; ++j)
            if (!g.has_edge(i, j)) b.set_edge(i, j);
    return std::move(b).build();
}

inline bool is_clique(const Graph& g, const VertexList& vs) {
    for (std::size_t a = 0; a < vs.size(); ++a) {
        if (vs[a] >= g.order())
            throw std::out_of_range("is_clique: vertex id out of range");
        for (std::size_t b = a + 1; b < vs.size(); ++b)
            if (!g.has_edge(vs[a], vs[b])) return false;
    }
    return true;
}

// Vertices adjacent to every member of c and not in c; all vertices when c
// is empty. Bit-row intersection.
inline std::vector<std::uint64_t> frontier_mask(const Graph& g,
                                                const VertexList& c) {
    std::vector<std::uint64_t> mask;
    bitrow::fill_universe(mask, g.order());
    for (Vertex v : c) {
        const std::uint64_t* r = g.row_data(v);
        for (std::size_t w = 0; w < mask.size(); ++w) mask[w] &= r[w];
    }
    for (Vertex v : c) bitrow::clear(mask, v);
    return mask;
}

inline VertexList frontier(const Graph& g, const VertexList& c) {
    for (Vertex v : c)
        if (v >= g.order())
            throw std::out_of_range("frontier: vertex id out of range");
    return bitrow::to_list(frontier_mask(g, c));
}

namespace detail {

inline VertexList pick_planted_sites(std::uint32_t n, std::uint32_t k_hc,
                                     Placement placement,
                                     std::uint64_t placement_seed) {
    VertexList sites;
    sites.reserve(k_hc);
    if (placement == Placement::first_sites) {
        for (Vertex v = 0; v < k_hc; ++v) sites.push_back(v);
    } else {
        // partial Fisher-Yates over 0..n-1
        Rng rng(placement_seed);
        std::vector<Vertex> ids(n);
        for (Vertex v = 0; v < n; ++v) ids[v] = v;
        for (std::uint32_t j = 0; j < k_hc; ++j) {
            const std::uint64_t pick = j + rng.below(n - j);
            std::swap(ids[j], ids[pick]);
            sites.push_back(ids[j]);
        }
        std::sort(sites.begin(), sites.end());
    }
    return sites;
}

} // namespace detail

// Completes the chosen k_hc sites into a clique by restoring their missing
// edges; no other edge is touched. Planted sites default to ids 0..k_hc-1;
// Placement::random_sites draws them instead, for checks that an algorithm
// is genuinely oblivious to vertex ids.
inline std::pair<Graph, PlantSpec> plant_naive(
    const Graph& g, std::uint32_t k_hc,
    Placement placement = Placement::first_sites,
    std::uint64_t placement_seed = 0) {
    const std::uint32_t n = g.order();
    if (k_hc < 1 || k_hc > n)
        throw std::invalid_argument("plant_naive requires 1 <= k_hc <= n");
    VertexList sites =
        detail::pick_planted_sites(n, k_hc, placement, placement_seed);
    GraphBuilder b(g);
    for (std::size_t a = 0; a + 1 < sites.size(); ++a)
        for (std::size_t c = a + 1; c < sites.size(); ++c)
            b.set_edge(sites[a], sites[c]);
    PlantSpec spec{sites, PlantMethod::naive, k_hc,
                   double(k_hc) / std::sqrt(double(n)), placement_seed};
    return {std::move(b).build(), std::move(spec)};
}

// Degree-preserving planting. For every missing clique edge (i, j) we draw
// external sites k ~ i and l ~ j, with k != l, both outside the clique and
// (k, l) absent, then swap: remove (i,k) and (j,l), add (k,l) and (i,j).
// Every vertex keeps its exact degree. A draw that violates a constraint is
// retried; retry_cap consecutive failures for one edge raise
// RewireExhaustedError.
inline std::pair<Graph, PlantSpec> plant_rewired(
    const Graph& g, std::uint32_t k_hc, std::uint64_t retry_cap,
    std::uint64_t seed, Placement placement = Placement::first_sites,
    std::uint64_t placement_seed = 0) {
    const std::uint32_t n = g.order();
    if (k_hc < 1 || k_hc > n)
        throw std::invalid_argument("plant_rewired requires 1 <= k_hc <= n");
    if (retry_cap == 0)
        throw std::invalid_argument("plant_rewired requires retry_cap >= 1");
    VertexList sites =
        detail::pick_planted_sites(n, k_hc, placement, placement_seed);
    std::vector<std::uint64_t> in_clique;
    in_clique.assign((std::size_t(n) + 63) / 64, 0);
    for (Vertex v : sites) bitrow::set(in_clique, v);

    GraphBuilder b(g);
    Rng rng(seed);
    // Outside pool for uniform draws of k and l.
    VertexList outside;
    outside.reserve(n - k_hc);
    for (Vertex v = 0; v < n; ++v)
        if (!bitrow::test(in_clique, v)) outside.push_back(v);
    if (outside.empty() && k_hc < n)
        throw std::logic_error("plant_rewired: no outside vertices");

    for (std::size_t a = 0; a + 1 < sites.size(); ++a) {
        for (std::size_t c = a + 1; c < sites.size(); ++c) {
            const Vertex i = sites[a], j = sites[c];
            if (b.has_edge(i, j)) continue;
            bool placed = false;
            for (std::uint64_t attempt = 0; attempt < retry_cap; ++attempt) {
                const Vertex k = outside[rng.below(outside.size())];
                const Vertex l = outside[rng.below(outside.size())];
                if (k == l) continue;
                if (!b.has_edge(i, k) || !b.has_edge(j, l)) continue;
                if (b.has_edge(k, l)) continue;
                b.clear_edge(i, k);
                b.clear_edge(j, l);
                b.set_edge(k, l);
                b.set_edge(i, j);
                placed = true;
                break;
            }
            if (!placed)
                throw RewireExhaustedError(
                    "plant_rewired: no admissible rewire for edge (" +
                    std::to_string(i) + "," + std::to_string(j) + ") after " +
                    std::to_string(retry_cap) + " draws");
        }
    }
    PlantSpec spec{sites, PlantMethod::degree_preserving, k_hc,
                   double(k_hc) / std::sqrt(double(n)), seed};
    return {std::move(b).build(), std::move(spec)};
}

} // namespace cliquelab
