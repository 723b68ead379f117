#include <doctest.h>

#include <chrono>

#include <cliquelab/amp.hpp>
#include <cliquelab/graph.hpp>

using namespace cliquelab;

namespace {

Graph complete_graph(std::uint32_t n) {
    GraphBuilder b(n);
    for (Vertex i = 0; i + 1 < n; ++i)
        for (Vertex j = i + 1; j < n; ++j) b.set_edge(i, j);
    return std::move(b).build();
}

// Independent update written straight from the message/marginal sums, each
// outgoing term recomputed from scratch.
struct SlowAmp {
    std::uint32_t n, k_hc;
    std::vector<double> msgs; // [l*n+i] = message l -> i

    static double term(double gamma, bool present, double root_n) {
        const double x = std::exp(std::min(gamma, 700.0)) / root_n;
        return present ? std::log1p(2.0 * x) - std::log1p(x) : -std::log1p(x);
    }

    void step(const Graph& g, std::vector<double>& out_marg) {
        const double root_n = std::sqrt(double(n));
        const double log_prior = std::log(double(k_hc) / root_n);
        std::vector<double> next(std::size_t(n) * n, 0.0);
        out_marg.assign(n, 0.0);
        for (Vertex i = 0; i < n; ++i) {
            for (Vertex j = 0; j < n; ++j) {
                if (i == j) continue;
                double acc = log_prior;
                for (Vertex l = 0; l < n; ++l) {
                    if (l == i || l == j) continue;
                    acc += term(msgs[std::size_t(l) * n + i], g.has_edge(l, i),
                                root_n);
                }
                next[std::size_t(i) * n + j] = acc;
            }
            double acc = log_prior;
            for (Vertex l = 0; l < n; ++l) {
                if (l == i) continue;
                acc += term(msgs[std::size_t(l) * n + i], g.has_edge(l, i),
                            root_n);
            }
            out_marg[i] = acc;
        }
        msgs = std::move(next);
    }
};

} // namespace

TEST_CASE("amp_init draws strictly negative messages, deterministically") {
    Rng r1(9), r2(9);
    const auto a = amp_init<float>(50, 7, r1);
    const auto b = amp_init<float>(50, 7, r2);
    CHECK(a.messages == b.messages);
    CHECK(a.t == 0);
    CHECK(a.marginals == std::vector<double>(50, 0.0));
    for (float m : a.messages) {
        CHECK(m < 0.0f);
        CHECK(m >= -1.0f);
    }
    CHECK_THROWS_AS(amp_init<float>(10, 11, r1), std::invalid_argument);
}

TEST_CASE("fast message update equals the direct recomputation") {
    for (std::uint64_t seed = 0; seed < 3; ++seed) {
        const std::uint32_t n = 96 + 16 * std::uint32_t(seed);
        Graph g = gen_gnp(n, 0.5, 100 + seed);
        if (seed == 1) g = plant_naive(g, n / 6).first;
        const std::uint32_t k_hc = std::max(2u, n / 6);

        Rng rng(seed);
        auto fast = amp_init<double>(n, k_hc, rng);
        SlowAmp slow{n, k_hc, fast.messages};

        for (int t = 0; t < 3; ++t) {
            std::vector<double> slow_marg;
            slow.step(g, slow_marg);
            amp_step(fast, g);
            for (Vertex i = 0; i < n; ++i) {
                const double scale = std::max(1.0, std::abs(slow_marg[i]));
                CHECK(std::abs(fast.marginals[i] - slow_marg[i]) / scale <
                      1e-6);
            }
            for (Vertex i = 0; i < n; ++i)
                for (Vertex j = 0; j < n; ++j) {
                    if (i == j) continue;
                    const double want = slow.msgs[std::size_t(i) * n + j];
                    const double got = fast.messages[std::size_t(i) * n + j];
                    const double scale = std::max(1.0, std::abs(want));
                    CHECK(std::abs(got - want) / scale < 1e-6);
                }
        }
    }
}

TEST_CASE("complete-graph symmetry forces equal marginals") {
    const std::uint32_t n = 40;
    const Graph g = complete_graph(n);
    Rng rng(4);
    auto st = amp_init<double>(n, n, rng);
    // symmetric initial condition: identical messages everywhere
    std::fill(st.messages.begin(), st.messages.end(), -0.5);
    for (int t = 0; t < 4; ++t) {
        amp_step(st, g);
        for (Vertex i = 1; i < n; ++i)
            CHECK(st.marginals[i] ==
                  doctest::Approx(st.marginals[0]).epsilon(1e-12));
    }
}

TEST_CASE("amp_converged basics") {
    std::vector<double> a{1.0, 2.0, 3.0};
    std::vector<double> b{1.0, 2.0, 3.0};
    CHECK(amp_converged(a, b, 0.0));
    b[2] = 3.5;
    CHECK_FALSE(amp_converged(a, b, 0.1));
    CHECK(amp_converged(a, b, 0.5));
    CHECK(amp_converged(a, b, std::numeric_limits<double>::infinity()));
}

TEST_CASE("planted marginals drift positive and recovery succeeds") {
    const std::uint32_t n = 2000;
    const auto k_hc = std::uint32_t(std::lround(1.2 * std::sqrt(double(n))));
    const Graph base = gen_gnp(n, 0.5, 777);
    const auto [g, spec] = plant_naive(base, k_hc);

    Rng rng(5);
    auto st = amp_init<float>(n, k_hc, rng);
    std::vector<double> prev = st.marginals;
    bool converged = false;
    std::uint32_t t = 0;
    while (t < 100 && !converged) {
        amp_step(st, g);
        ++t;
        converged = amp_converged(prev, st.marginals, 1e-6);
        prev = st.marginals;
    }
    REQUIRE(converged);
    CHECK(t < 40); // O(log N) sweeps
    double planted_mean = 0.0, other_mean = 0.0;
    for (Vertex v = 0; v < n; ++v)
        (v < k_hc ? planted_mean : other_mean) += st.marginals[v];
    planted_mean /= k_hc;
    other_mean /= double(n - k_hc);
    CHECK(planted_mean > 0.0);
    CHECK(other_mean < 0.0);

    Rng rng2(5);
    const AmpResult res = amp_recover(g, k_hc, rng2);
    REQUIRE(res.outcome == AmpOutcome::success);
    REQUIRE(res.clique.has_value());
    CHECK(res.clique->vertices == spec.vertices);
}

TEST_CASE("amp_recover trivially succeeds when everything is planted") {
    const Graph g = complete_graph(30);
    Rng rng(6);
    const AmpResult res = amp_recover(g, 30, rng);
    CHECK(res.outcome == AmpOutcome::success);
    CHECK(res.clique->size() == 30);
}

TEST_CASE("amp_recover reports failure on unplantable targets") {
    const Graph g = gen_gnp(300, 0.5, 9);
    Rng rng(7);
    const AmpResult res = amp_recover(g, 60, rng); // no such clique exists
    CHECK(res.outcome != AmpOutcome::success);
    CHECK_FALSE(res.clique.has_value());
}

TEST_CASE("relabeling vertices permutes marginals identically") {
    const std::uint32_t n = 64;
    const Graph g = gen_gnp(n, 0.5, 11);
    const std::uint32_t k_hc = 10;

    // permutation: reverse
    std::vector<Vertex> perm(n);
    for (Vertex v = 0; v < n; ++v) perm[v] = n - 1 - v;
    GraphBuilder pb(n);
    for (Vertex i = 0; i < n; ++i)
        for (Vertex j = i + 1; j < n; ++j)
            if (g.has_edge(i, j)) pb.set_edge(perm[i], perm[j]);
    const Graph pg = std::move(pb).build();

    Rng rng(12);
    auto st = amp_init<double>(n, k_hc, rng);
    auto pst = st;
    for (Vertex i = 0; i < n; ++i)
        for (Vertex j = 0; j < n; ++j)
            pst.messages[std::size_t(perm[i]) * n + perm[j]] =
                st.messages[std::size_t(i) * n + j];

    for (int t = 0; t < 3; ++t) {
        amp_step(st, g);
        amp_step(pst, pg);
        for (Vertex i = 0; i < n; ++i)
            CHECK(pst.marginals[perm[i]] ==
                  doctest::Approx(st.marginals[i]).epsilon(1e-9));
    }
}

TEST_CASE("amp_step cost scales like N^2") {
    const std::uint32_t k = 20;
    auto time_step = [&](std::uint32_t n) {
        const Graph g = gen_gnp(n, 0.5, 31);
        Rng rng(13);
        auto st = amp_init<float>(n, k, rng);
        amp_step(st, g); // warm up
        const auto t0 = std::chrono::steady_clock::now();
        for (int r = 0; r < 3; ++r) amp_step(st, g);
        const auto t1 = std::chrono::steady_clock::now();
        return std::chrono::duration<double>(t1 - t0).count() / 3;
    };
    const double small = time_step(1000);
    const double big = time_step(2000);
    CHECK(big / small > 2.0);
    CHECK(big / small < 8.0);
}
