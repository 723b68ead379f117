// cliquelab: clique search on Erdos-Renyi graphs and hidden-clique
// recovery experiments. Subcommands emit CSV; deterministic given the
// base seed. Worker count comes from the CLIQUELAB_WORKERS environment
// variable (default: hardware concurrency).

#include <cstdio>
#include <iostream>

#include <CLI11.hpp>

#include <cliquelab/amp.hpp>
#include <cliquelab/bounds.hpp>
#include <cliquelab/dimacs.hpp>
#include <cliquelab/graph.hpp>
#include <cliquelab/greedy.hpp>
#include <cliquelab/harness.hpp>
#include <cliquelab/spectral.hpp>

using namespace cliquelab;

namespace {

std::vector<SolveSpec> parse_algos(const std::vector<std::string>& names,
                                   std::uint32_t subset_i) {
    std::vector<SolveSpec> out;
    for (const auto& name : names) out.push_back({name, subset_i});
    return out;
}

std::uint32_t default_samples(const std::string& algo) {
    if (algo == "sm0") return 2000;
    if (algo == "sm1" || algo == "sm1_es") return 500;
    if (algo == "sm2") return 100;
    if (algo == "sm2_es") return 5;
    return 100; // amp, spectral, chained variants
}

std::uint32_t k_hc_from_alpha(std::uint32_t n, double alpha) {
    return std::max<std::uint32_t>(
        2, std::uint32_t(std::lround(alpha * std::sqrt(double(n)))));
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"clique search and hidden-clique recovery lab"};
    app.require_subcommand(1);

    // ---------------------------------------------------------------- gen
    auto* gen = app.add_subcommand("gen", "generate a G(n,p) graph as DIMACS");
    struct {
        std::uint32_t n = 1000;
        double p = 0.5;
        std::uint64_t seed = 1;
        std::string out;
        std::uint32_t plant_k = 0;
        std::string method = "naive";
        std::string placement = "first";
        std::uint64_t retry_cap = 1000000;
        bool allow_large = false;
    } gen_opt;
    gen->add_option("--n", gen_opt.n, "vertex count")->required();
    gen->add_option("--p", gen_opt.p, "edge probability");
    gen->add_option("--seed", gen_opt.seed, "generation seed");
    gen->add_option("--out", gen_opt.out, "output DIMACS path")->required();
    gen->add_option("--plant", gen_opt.plant_k, "hidden clique size");
    gen->add_option("--plant-method", gen_opt.method, "naive|rewired");
    gen->add_option("--placement", gen_opt.placement, "first|random");
    gen->add_option("--retry-cap", gen_opt.retry_cap,
                    "rewire draws per edge before giving up");
    gen->add_flag("--allow-large", gen_opt.allow_large,
                  "lift the 65536-vertex cap");

    // ------------------------------------------------------------- bounds
    auto* bounds_cmd =
        app.add_subcommand("bounds", "closed-form clique-count baselines");
    struct {
        std::vector<std::uint64_t> ns;
        double p = 0.5;
        std::vector<std::uint64_t> ks;
        std::string out;
    } bounds_opt;
    bounds_cmd->add_option("--n", bounds_opt.ns, "graph orders")->required();
    bounds_cmd->add_option("--p", bounds_opt.p, "edge probability");
    bounds_cmd->add_option("--k", bounds_opt.ks,
                           "clique sizes (default 1..k_max+3)");
    bounds_cmd->add_option("--out", bounds_opt.out, "output CSV")->required();

    // -------------------------------------------------------------- solve
    auto* solve_cmd =
        app.add_subcommand("solve", "run a greedy construction on G(n,p)");
    struct {
        std::string algo = "sm0";
        std::uint32_t subset_i = 0;
        std::uint32_t n = 1000;
        double p = 0.5;
        std::uint32_t samples = 0;
        std::uint64_t seed = 1;
        std::string out;
        bool allow_large = false;
    } solve_opt;
    solve_cmd
        ->add_option("--algo", solve_opt.algo,
                     "sm0|sm1|sm2|smi|sm0_smi|sm0_iter")
        ->required();
    solve_cmd->add_option("--i", solve_opt.subset_i,
                          "subset order for smi/chains");
    solve_cmd->add_option("--n", solve_opt.n, "vertex count")->required();
    solve_cmd->add_option("--p", solve_opt.p, "edge probability");
    solve_cmd->add_option("--samples", solve_opt.samples,
                          "instances (default per algorithm)");
    solve_cmd->add_option("--seed", solve_opt.seed, "base seed");
    solve_cmd->add_option("--out", solve_opt.out, "output CSV");
    solve_cmd->add_flag("--allow-large", solve_opt.allow_large, "");

    // ------------------------------------------------------------ recover
    auto* recover_cmd = app.add_subcommand(
        "recover", "hidden-clique recovery on planted instances");
    struct {
        std::vector<std::string> methods{"sm1_es"};
        std::uint32_t n = 10000;
        double p = 0.5;
        std::vector<double> alphas{1.0};
        std::uint32_t samples = 0;
        std::uint64_t seed = 1;
        std::uint32_t t_max = 100;
        double eps = 1e-6;
        std::uint32_t k_stop_extra = 2;
        double e0 = 0.0;
        std::string plant = "naive";
        std::string out;
        std::string summary;
        bool plot = false;
    } rec_opt;
    recover_cmd
        ->add_option("--method", rec_opt.methods,
                     "amp|sm1_es|sm2_es|spectral (repeatable)")
        ->required();
    recover_cmd->add_option("--n", rec_opt.n, "vertex count");
    recover_cmd->add_option("--p", rec_opt.p, "edge probability");
    recover_cmd->add_option("--alpha", rec_opt.alphas, "k_hc / sqrt(n) grid")
        ->required();
    recover_cmd->add_option("--samples", rec_opt.samples,
                            "instances per cell (default per method)");
    recover_cmd->add_option("--seed", rec_opt.seed, "base seed");
    recover_cmd->add_option("--t-max", rec_opt.t_max, "message-passing cap");
    recover_cmd->add_option("--eps", rec_opt.eps, "convergence threshold");
    recover_cmd->add_option("--k-stop-extra", rec_opt.k_stop_extra,
                            "early-stop margin above ceil(R(N))");
    recover_cmd->add_option("--e0", rec_opt.e0,
                            "spectral hint boost (0/1-matrix scale)");
    recover_cmd->add_option("--plant", rec_opt.plant, "naive|rewired");
    recover_cmd->add_option("--out", rec_opt.out, "per-run CSV")->required();
    recover_cmd->add_option("--summary", rec_opt.summary, "summary CSV");
    recover_cmd->add_flag("--plot", rec_opt.plot, "emit gnuplot companion");

    // ---------------------------------------------------------- amp-recover
    auto* amp_cmd = app.add_subcommand(
        "amp-recover", "message-passing recovery with failure taxonomy");
    struct {
        std::uint32_t n = 10000;
        double p = 0.5;
        double alpha = 1.0;
        std::uint32_t samples = 100;
        std::uint64_t seed = 1;
        std::uint32_t t_max = 100;
        double eps = 1e-6;
        std::string out;
    } amp_opt;
    amp_cmd->add_option("--n", amp_opt.n, "vertex count");
    amp_cmd->add_option("--p", amp_opt.p, "edge probability");
    amp_cmd->add_option("--alpha", amp_opt.alpha, "k_hc / sqrt(n)")->required();
    amp_cmd->add_option("--samples", amp_opt.samples, "seeds");
    amp_cmd->add_option("--seed", amp_opt.seed, "base seed");
    amp_cmd->add_option("--t-max", amp_opt.t_max, "iteration cap");
    amp_cmd->add_option("--eps", amp_opt.eps, "convergence threshold");
    amp_cmd->add_option("--out", amp_opt.out, "output CSV")->required();

    // ------------------------------------------------------------ gap-scan
    auto* gap_cmd = app.add_subcommand(
        "gap-scan", "top spectral gap against the planted-clique size");
    struct {
        std::uint32_t n = 2500;
        double p = 0.5;
        std::vector<double> alphas;
        std::uint32_t seeds = 20;
        std::uint64_t seed = 1;
        double tol = 1e-8;
        std::uint32_t max_iter = 0;
        std::string out;
        bool plot = false;
    } gap_opt;
    gap_cmd->add_option("--n", gap_opt.n, "vertex count");
    gap_cmd->add_option("--p", gap_opt.p, "edge probability");
    gap_cmd->add_option("--alpha", gap_opt.alphas,
                        "alpha grid (0 = unplanted control)")
        ->required();
    gap_cmd->add_option("--seeds", gap_opt.seeds, "seeds per alpha");
    gap_cmd->add_option("--seed", gap_opt.seed, "base seed");
    gap_cmd->add_option("--tol", gap_opt.tol, "residual tolerance");
    gap_cmd->add_option("--max-iter", gap_opt.max_iter, "iteration cap");
    gap_cmd->add_option("--out", gap_opt.out, "output CSV")->required();
    gap_cmd->add_flag("--plot", gap_opt.plot, "emit gnuplot companion");

    // ----------------------------------------------------------- rank-curve
    auto* rank_cmd = app.add_subcommand(
        "rank-curve",
        "fraction of planted sites among the leading eigenvector components");
    struct {
        std::uint32_t n = 10000;
        double p = 0.5;
        std::vector<double> alphas{1.0};
        double e0 = 0.0;
        std::uint32_t seeds = 20;
        std::uint64_t seed = 1;
        double tol = 0.5;
        std::uint32_t max_rank = 0;
        std::string out;
    } rank_opt;
    rank_cmd->add_option("--n", rank_opt.n, "vertex count");
    rank_cmd->add_option("--p", rank_opt.p, "edge probability");
    rank_cmd->add_option("--alpha", rank_opt.alphas, "alpha grid")->required();
    rank_cmd->add_option("--e0", rank_opt.e0,
                         "hint boost on site 0 (0/1-matrix scale)");
    rank_cmd->add_option("--seeds", rank_opt.seeds, "seeds per alpha");
    rank_cmd->add_option("--seed", rank_opt.seed, "base seed");
    rank_cmd->add_option("--tol", rank_opt.tol,
                         "residual tolerance (component ranking scale)");
    rank_cmd->add_option("--max-rank", rank_opt.max_rank,
                         "emit curve rows up to this rank (default 2 k_hc)");
    rank_cmd->add_option("--out", rank_opt.out, "output CSV")->required();

    // ----------------------------------------------------- spectral-recover
    auto* srec_cmd = app.add_subcommand(
        "spectral-recover", "eigenvector candidates plus cleanup");
    struct {
        std::uint32_t n = 10000;
        double p = 0.5;
        std::vector<double> alphas{1.5};
        double e0 = 0.0;
        std::uint32_t seeds = 20;
        std::uint64_t seed = 1;
        double tol = 1e-6;
        std::string out;
    } srec_opt;
    srec_cmd->add_option("--n", srec_opt.n, "vertex count");
    srec_cmd->add_option("--p", srec_opt.p, "edge probability");
    srec_cmd->add_option("--alpha", srec_opt.alphas, "alpha grid")->required();
    srec_cmd->add_option("--e0", srec_opt.e0, "hint boost (0/1-matrix scale)");
    srec_cmd->add_option("--seeds", srec_opt.seeds, "seeds per alpha");
    srec_cmd->add_option("--seed", srec_opt.seed, "base seed");
    srec_cmd->add_option("--tol", srec_opt.tol, "residual tolerance");
    srec_cmd->add_option("--out", srec_opt.out, "output CSV")->required();

    // ------------------------------------------------------------ staircase
    auto* stair_cmd = app.add_subcommand(
        "staircase", "mean found-clique size against the k_max staircase");
    struct {
        std::vector<std::uint32_t> ns;
        std::string geom;
        double p = 0.5;
        std::vector<std::string> algos{"sm0"};
        std::uint32_t subset_i = 0;
        std::uint32_t samples = 0;
        std::uint64_t seed = 1;
        std::string out;
        std::string raw;
        bool plot = false;
        bool allow_large = false;
    } stair_opt;
    stair_cmd->add_option("--n", stair_opt.ns, "grid points");
    stair_cmd->add_option("--geom", stair_opt.geom,
                          "geometric grid start:end:num (e.g. 128:16384:8)");
    stair_cmd->add_option("--p", stair_opt.p, "edge probability");
    stair_cmd->add_option("--algo", stair_opt.algos, "algorithms (repeatable)");
    stair_cmd->add_option("--i", stair_opt.subset_i, "subset order");
    stair_cmd->add_option("--samples", stair_opt.samples,
                          "samples per grid point (default per algorithm)");
    stair_cmd->add_option("--seed", stair_opt.seed, "base seed");
    stair_cmd->add_option("--out", stair_opt.out, "summary CSV")->required();
    stair_cmd->add_option("--raw", stair_opt.raw, "per-run CSV");
    stair_cmd->add_flag("--plot", stair_opt.plot, "emit gnuplot companion");
    stair_cmd->add_flag("--allow-large", stair_opt.allow_large, "");

    // -------------------------------------------------------- step-fractions
    auto* frac_cmd = app.add_subcommand(
        "step-fractions",
        "fractions of runs on each step value against the bound envelopes");
    struct {
        std::vector<std::uint32_t> ns;
        double p = 0.5;
        std::vector<std::string> algos{"sm2"};
        std::uint32_t samples = 500;
        std::uint64_t seed = 1;
        std::string out;
        std::string raw;
    } frac_opt;
    frac_cmd->add_option("--n", frac_opt.ns, "grid points")->required();
    frac_cmd->add_option("--p", frac_opt.p, "edge probability");
    frac_cmd->add_option("--algo", frac_opt.algos, "algorithms");
    frac_cmd->add_option("--samples", frac_opt.samples, "samples per point");
    frac_cmd->add_option("--seed", frac_opt.seed, "base seed");
    frac_cmd->add_option("--out", frac_opt.out, "summary CSV")->required();
    frac_cmd->add_option("--raw", frac_opt.raw, "per-run CSV");

    // -------------------------------------------------------- recovery-sweep
    auto* sweep_cmd = app.add_subcommand(
        "recovery-sweep", "success/cost sweep over alpha and method");
    struct {
        std::uint32_t n = 10000;
        double p = 0.5;
        std::vector<double> alphas;
        std::vector<std::string> methods;
        std::uint32_t samples = 0;
        std::uint64_t seed = 1;
        std::string out;
        std::string summary;
        bool plot = false;
    } sweep_opt;
    sweep_cmd->add_option("--n", sweep_opt.n, "vertex count");
    sweep_cmd->add_option("--p", sweep_opt.p, "edge probability");
    sweep_cmd->add_option("--alpha", sweep_opt.alphas, "alpha grid")
        ->required();
    sweep_cmd->add_option("--method", sweep_opt.methods, "methods")->required();
    sweep_cmd->add_option("--samples", sweep_opt.samples,
                          "per cell (default per method)");
    sweep_cmd->add_option("--seed", sweep_opt.seed, "base seed");
    sweep_cmd->add_option("--out", sweep_opt.out, "per-run CSV")->required();
    sweep_cmd->add_option("--summary", sweep_opt.summary, "summary CSV");
    sweep_cmd->add_flag("--plot", sweep_opt.plot, "emit gnuplot companion");

    // ----------------------------------------------------------- extrapolate
    auto* extra_cmd = app.add_subcommand(
        "extrapolate", "fit K/(2 log2 N) = A log2 N + B from a staircase CSV");
    struct {
        std::string in;
        std::string algo = "sm0";
    } extra_opt;
    extra_cmd->add_option("--in", extra_opt.in, "staircase summary CSV")
        ->required();
    extra_cmd->add_option("--algo", extra_opt.algo, "algorithm to fit");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*gen) {
            const Graph base = gen_gnp(gen_opt.n, gen_opt.p, gen_opt.seed,
                                       gen_opt.allow_large);
            if (gen_opt.plant_k > 0) {
                const Placement place = gen_opt.placement == "random"
                                            ? Placement::random_sites
                                            : Placement::first_sites;
                const auto planted =
                    gen_opt.method == "rewired"
                        ? plant_rewired(base, gen_opt.plant_k,
                                        gen_opt.retry_cap,
                                        mix_seed(gen_opt.seed, "rewire"),
                                        place, mix_seed(gen_opt.seed, "place"))
                        : plant_naive(base, gen_opt.plant_k, place,
                                      mix_seed(gen_opt.seed, "place"));
                write_dimacs(planted.first, gen_opt.out);
                write_plant_spec(planted.second, gen_opt.out + ".plant.json");
                std::cout << "wrote " << gen_opt.out << " (+ plant sidecar), "
                          << planted.first.edge_count() << " edges\n";
            } else {
                write_dimacs(base, gen_opt.out);
                std::cout << "wrote " << gen_opt.out << ", "
                          << base.edge_count() << " edges\n";
            }
        } else if (*bounds_cmd) {
            std::vector<std::string> rows;
            for (std::uint64_t n : bounds_opt.ns) {
                const std::uint64_t km = k_max(n, bounds_opt.p);
                const double r = r_continuous(n, bounds_opt.p);
                std::vector<std::uint64_t> ks = bounds_opt.ks;
                if (ks.empty())
                    for (std::uint64_t k = 1; k <= km + 3; ++k)
                        ks.push_back(k);
                for (std::uint64_t k : ks) {
                    const double log_e =
                        log_expected_cliques(n, k, bounds_opt.p);
                    const StepBounds sb = prob_kmax_bounds(n, k, bounds_opt.p);
                    std::ostringstream os;
                    os.precision(12);
                    os << n << ',' << bounds_opt.p << ',' << k << ',' << log_e
                       << ',' << km << ',' << r << ',' << sb.lower << ','
                       << sb.upper;
                    rows.push_back(os.str());
                }
            }
            write_csv(bounds_opt.out, "n,p,k,log_E,k_max,R,lower,upper", rows);
            std::cout << "wrote " << bounds_opt.out << " (" << rows.size()
                      << " rows)\n";
        } else if (*solve_cmd) {
            StaircaseParams prm;
            prm.n_grid = {solve_opt.n};
            prm.p = solve_opt.p;
            prm.algos = parse_algos({solve_opt.algo}, solve_opt.subset_i);
            prm.samples = solve_opt.samples ? solve_opt.samples
                                            : default_samples(solve_opt.algo);
            prm.base_seed = solve_opt.seed;
            prm.allow_large = solve_opt.allow_large;
            const StaircaseResult result = exp_staircase(prm);
            if (!solve_opt.out.empty())
                write_records_csv(solve_opt.out, result.records);
            for (const auto& s : result.summaries)
                std::cout << s.algorithm << " n=" << s.n << " mean=" << s.mean
                          << " std=" << s.stddev << " k_max=" << s.k_max_pred
                          << " R=" << s.r_pred << "\n";
        } else if (*recover_cmd || *sweep_cmd) {
            RecoveryParams prm;
            const auto& o_methods =
                *recover_cmd ? rec_opt.methods : sweep_opt.methods;
            prm.n = *recover_cmd ? rec_opt.n : sweep_opt.n;
            prm.p = *recover_cmd ? rec_opt.p : sweep_opt.p;
            prm.alphas = *recover_cmd ? rec_opt.alphas : sweep_opt.alphas;
            prm.base_seed = *recover_cmd ? rec_opt.seed : sweep_opt.seed;
            if (*recover_cmd) {
                prm.t_max = rec_opt.t_max;
                prm.eps = rec_opt.eps;
                prm.k_stop_extra = rec_opt.k_stop_extra;
                prm.e0_scaled = rec_opt.e0;
                prm.plant = rec_opt.plant == "rewired"
                                ? PlantMethod::degree_preserving
                                : PlantMethod::naive;
            }
            const std::uint32_t samples_flag =
                *recover_cmd ? rec_opt.samples : sweep_opt.samples;
            const std::string out = *recover_cmd ? rec_opt.out : sweep_opt.out;
            const std::string summary =
                *recover_cmd ? rec_opt.summary : sweep_opt.summary;
            const bool plot = *recover_cmd ? rec_opt.plot : sweep_opt.plot;

            std::vector<ExperimentRecord> records;
            std::vector<RecoverySummary> summaries;
            for (const auto& method : o_methods) {
                prm.methods = {method};
                prm.samples =
                    samples_flag ? samples_flag : default_samples(method);
                RecoveryResult r = exp_recovery_sweep(prm);
                records.insert(records.end(), r.records.begin(),
                               r.records.end());
                summaries.insert(summaries.end(), r.summaries.begin(),
                                 r.summaries.end());
            }
            write_records_csv(out, records);
            if (plot) write_plot_script(out, "recovery");
            std::vector<std::string> srows;
            for (const auto& s : summaries) {
                std::ostringstream os;
                os.precision(12);
                os << s.alpha << ',' << s.method << ',' << s.samples << ','
                   << s.success_rate << ',' << s.mean_delta << ','
                   << s.mean_seconds;
                srows.push_back(os.str());
                std::cout << s.method << " alpha=" << s.alpha
                          << " success=" << s.success_rate
                          << " mean_delta=" << s.mean_delta
                          << " mean_seconds=" << s.mean_seconds << "\n";
            }
            if (!summary.empty())
                write_csv(summary,
                          "alpha,method,samples,success,mean_delta,"
                          "mean_seconds",
                          srows);
        } else if (*amp_cmd) {
            std::vector<std::string> rows;
            for (std::uint32_t rep = 0; rep < amp_opt.samples; ++rep) {
                const std::uint64_t seed =
                    instance_seed(amp_opt.seed, "amp-recover", amp_opt.n,
                                  amp_opt.p, amp_opt.alpha, rep);
                const Timer timer;
                const Graph base =
                    gen_gnp(amp_opt.n, amp_opt.p, mix_seed(seed, "graph"));
                const auto k_hc = k_hc_from_alpha(amp_opt.n, amp_opt.alpha);
                const auto [g, spec] = plant_naive(base, k_hc);
                Rng rng(mix_seed(seed, "algo"));
                const AmpResult res =
                    amp_recover(g, k_hc, rng, amp_opt.t_max, amp_opt.eps);
                std::ostringstream os;
                os << seed << ',' << int(res.converged) << ',' << res.iterations
                   << ',' << int(res.outcome == AmpOutcome::success) << ','
                   << amp_outcome_name(res.outcome) << ',' << timer.seconds();
                rows.push_back(os.str());
            }
            write_csv(amp_opt.out,
                      "seed,converged,iterations,success,failure_kind,seconds",
                      rows);
            std::cout << "wrote " << amp_opt.out << " (" << rows.size()
                      << " rows)\n";
        } else if (*gap_cmd) {
            SpectralConfig cfg;
            cfg.kind = MatrixKind::plus_minus;
            cfg.tol = gap_opt.tol;
            cfg.max_iter = gap_opt.max_iter;
            std::vector<std::uint64_t> seeds;
            for (std::uint32_t s = 0; s < gap_opt.seeds; ++s)
                seeds.push_back(mix_seed(gap_opt.seed, std::uint64_t(s)));
            const auto rows = spectral_gap_scan(gap_opt.n, gap_opt.p,
                                                gap_opt.alphas, seeds, cfg);
            std::vector<std::string> out;
            for (const auto& r : rows) {
                std::ostringstream os;
                os.precision(12);
                os << gap_opt.n << ',' << gap_opt.p << ',' << r.alpha << ','
                   << cfg.e0 << ',' << r.lambda1 << ',' << r.lambda2 << ','
                   << r.gap << ',' << r.iterations << ',' << int(r.converged);
                out.push_back(os.str());
            }
            write_csv(gap_opt.out,
                      "n,p,alpha,e0,lambda1,lambda2,gap,iterations,success",
                      out);
            if (gap_opt.plot) write_plot_script(gap_opt.out, "gap");
            std::cout << "wrote " << gap_opt.out << " (" << out.size()
                      << " rows)\n";
        } else if (*rank_cmd) {
            std::vector<std::string> rows;
            for (double alpha : rank_opt.alphas) {
                const auto k_hc = k_hc_from_alpha(rank_opt.n, alpha);
                double plateau_sum = 0.0;
                for (std::uint32_t s = 0; s < rank_opt.seeds; ++s) {
                    const std::uint64_t seed =
                        instance_seed(rank_opt.seed, "rank-curve", rank_opt.n,
                                      rank_opt.p, alpha, s);
                    const Graph base = gen_gnp(rank_opt.n, rank_opt.p,
                                               mix_seed(seed, "graph"));
                    const auto [g, spec] = plant_naive(base, k_hc);
                    SpectralConfig cfg;
                    cfg.kind = MatrixKind::plus_minus;
                    cfg.tol = rank_opt.tol;
                    if (rank_opt.e0 != 0.0) {
                        cfg.hint_site = spec.vertices.front();
                        cfg.e0 = hint_boost_from_scaled(rank_opt.e0, rank_opt.n,
                                                        cfg.kind,
                                                        cfg.pm_normalized);
                    }
                    Rng rng(mix_seed(seed, "power"));
                    const EigenPair top = hinted_top_state(g, cfg, rng);
                    const auto curve = rank_components(top, spec);
                    plateau_sum += rank_plateau(curve, k_hc);
                    const std::uint32_t max_rank =
                        rank_opt.max_rank ? rank_opt.max_rank
                                          : std::min(2 * k_hc, rank_opt.n);
                    for (std::uint32_t r = 1; r <= max_rank; ++r) {
                        std::ostringstream os;
                        os.precision(10);
                        os << rank_opt.n << ',' << rank_opt.p << ',' << alpha
                           << ',' << rank_opt.e0 << ',' << seed << ',' << r
                           << ',' << curve[r - 1];
                        rows.push_back(os.str());
                    }
                }
                std::cout << "alpha=" << alpha << " e0=" << rank_opt.e0
                          << " plateau@" << k_hc << "="
                          << plateau_sum / rank_opt.seeds << "\n";
            }
            write_csv(rank_opt.out, "n,p,alpha,e0,seed,rank,fraction", rows);
        } else if (*srec_cmd) {
            std::vector<std::string> rows;
            for (double alpha : srec_opt.alphas) {
                const auto k_hc = k_hc_from_alpha(srec_opt.n, alpha);
                double success_sum = 0.0;
                for (std::uint32_t s = 0; s < srec_opt.seeds; ++s) {
                    const std::uint64_t seed = instance_seed(
                        srec_opt.seed, "spectral-recover", srec_opt.n,
                        srec_opt.p, alpha, s);
                    const Graph base = gen_gnp(srec_opt.n, srec_opt.p,
                                               mix_seed(seed, "graph"));
                    const auto [g, spec] = plant_naive(base, k_hc);
                    SpectralConfig cfg;
                    cfg.kind = MatrixKind::plus_minus;
                    cfg.tol = srec_opt.tol;
                    if (srec_opt.e0 != 0.0) {
                        cfg.hint_site = spec.vertices.front();
                        cfg.e0 = hint_boost_from_scaled(srec_opt.e0, srec_opt.n,
                                                        cfg.kind,
                                                        cfg.pm_normalized);
                    }
                    Rng rng(mix_seed(seed, "power"));
                    SpectralRecoverInfo info;
                    const auto res = spectral_recover(g, k_hc, cfg, rng, &info);
                    success_sum += res ? 1.0 : 0.0;
                    std::ostringstream os;
                    os.precision(12);
                    os << srec_opt.n << ',' << srec_opt.p << ',' << alpha << ','
                       << srec_opt.e0 << ',' << info.lambda1 << ",,,"
                       << info.iterations << ',' << int(bool(res));
                    rows.push_back(os.str());
                }
                std::cout << "alpha=" << alpha
                          << " success=" << success_sum / srec_opt.seeds
                          << "\n";
            }
            write_csv(srec_opt.out,
                      "n,p,alpha,e0,lambda1,lambda2,gap,iterations,success",
                      rows);
        } else if (*stair_cmd) {
            std::vector<std::uint32_t> grid = stair_opt.ns;
            if (!stair_opt.geom.empty()) {
                std::uint32_t lo, hi, num;
                if (std::sscanf(stair_opt.geom.c_str(), "%u:%u:%u", &lo, &hi,
                                &num) != 3 ||
                    num < 2 || lo < 2 || hi <= lo)
                    throw std::invalid_argument("bad --geom spec");
                for (std::uint32_t k = 0; k < num; ++k)
                    grid.push_back(std::uint32_t(std::lround(
                        lo *
                        std::pow(double(hi) / lo, double(k) / (num - 1)))));
            }
            if (grid.empty())
                throw std::invalid_argument("staircase needs --n or --geom");
            std::vector<ExperimentRecord> records;
            std::vector<StaircaseSummary> summaries;
            for (const auto& algo : stair_opt.algos) {
                StaircaseParams prm;
                prm.n_grid = grid;
                prm.p = stair_opt.p;
                prm.algos = parse_algos({algo}, stair_opt.subset_i);
                prm.samples = stair_opt.samples ? stair_opt.samples
                                                : default_samples(algo);
                prm.base_seed = stair_opt.seed;
                prm.allow_large = stair_opt.allow_large;
                StaircaseResult r = exp_staircase(prm);
                records.insert(records.end(), r.records.begin(),
                               r.records.end());
                summaries.insert(summaries.end(), r.summaries.begin(),
                                 r.summaries.end());
            }
            StaircaseResult merged;
            merged.p = stair_opt.p;
            merged.summaries = std::move(summaries);
            write_staircase_summary(stair_opt.out, merged);
            if (!stair_opt.raw.empty())
                write_records_csv(stair_opt.raw, records);
            if (stair_opt.plot) write_plot_script(stair_opt.out, "staircase");
            std::cout << "wrote " << stair_opt.out << "\n";
        } else if (*frac_cmd) {
            StepFractionsParams prm;
            prm.n_grid = frac_opt.ns;
            prm.p = frac_opt.p;
            prm.algos = parse_algos(frac_opt.algos, 0);
            prm.samples = frac_opt.samples;
            prm.base_seed = frac_opt.seed;
            const StepFractionsResult r = exp_step_fractions(prm);
            write_step_fractions_summary(frac_opt.out, r);
            if (!frac_opt.raw.empty())
                write_records_csv(frac_opt.raw, r.records);
            for (const auto& s : r.summaries)
                std::cout << s.algorithm << " n=" << s.n
                          << " k_max=" << s.k_max_pred
                          << " frac(at)=" << s.frac[1] << " env=["
                          << s.env_lo[1] << "," << s.env_hi[1] << "]\n";
        } else if (*extra_cmd) {
            std::ifstream in(extra_opt.in);
            if (!in) throw std::runtime_error("cannot open " + extra_opt.in);
            std::string line;
            std::getline(in, line); // header
            std::vector<std::pair<double, double>> pts;
            while (std::getline(in, line)) {
                std::istringstream ls(line);
                std::string n_s, p_s, algo, samples_s, mean_s;
                std::getline(ls, n_s, ',');
                std::getline(ls, p_s, ',');
                std::getline(ls, algo, ',');
                std::getline(ls, samples_s, ',');
                std::getline(ls, mean_s, ',');
                if (algo == extra_opt.algo)
                    pts.emplace_back(std::stod(n_s), std::stod(mean_s));
            }
            const ExtrapolationFit fit = exp_extrapolate(pts);
            std::cout << "algo=" << extra_opt.algo << " points=" << pts.size()
                      << " A=" << fit.a << " B=" << fit.b
                      << " crossing_N=" << fit.crossing_n << "\n";
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
