#pragma once

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <mutex>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "amp.hpp"
#include "bounds.hpp"
#include "graph.hpp"
#include "greedy.hpp"
#include "spectral.hpp"

namespace cliquelab {

inline unsigned worker_count() {
    if (const char* env = std::getenv("CLIQUELAB_WORKERS")) {
        const int v = std::atoi(env);
        if (v >= 1) return unsigned(v);
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw ? hw : 1u;
}

// Work-stealing over an index range; job i writes only its own slot, so
// results are identical at any worker count and assemble in config order.
template <typename Fn>
void parallel_for(std::size_t count, Fn&& fn, unsigned workers = 0) {
    if (workers == 0) workers = worker_count();
    workers = unsigned(std::min<std::size_t>(workers, count));
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};
    std::vector<std::thread> pool;
    std::exception_ptr first_error;
    std::mutex err_mutex;
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (;;) {
                const std::size_t i = next.fetch_add(1);
                if (i >= count || failed.load(std::memory_order_relaxed))
                    return;
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(err_mutex);
                    if (!first_error) first_error = std::current_exception();
                    failed.store(true, std::memory_order_relaxed);
                    return;
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
}

// Seed for one experiment instance. Extending a grid adds new
// (config, replicate) tuples without reshuffling the seeds of old rows.
inline std::uint64_t instance_seed(std::uint64_t base_seed,
                                   std::string_view experiment,
                                   std::uint64_t n, double p, double alpha,
                                   std::uint64_t replicate) {
    std::uint64_t h = mix_seed(base_seed, experiment);
    h = mix_seed(h, n);
    h = mix_seed(h, p);
    h = mix_seed(h, alpha);
    h = mix_seed(h, replicate);
    return h;
}

class Timer {
public:
    Timer() : start_(std::chrono::steady_clock::now()) {}
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                             start_)
            .count();
    }

private:
    std::chrono::steady_clock::time_point start_;
};

// ---------------------------------------------------------------------------
// CSV records

// One experiment row. Config columns determine every result column except
// seconds; NaN / -1 mark fields a given experiment does not use.
struct ExperimentRecord {
    std::string experiment;
    std::uint32_t n = 0;
    double p = 0.0;
    double alpha = std::nan("");
    std::string algorithm;
    int i = -1;
    double e0 = std::nan("");
    std::uint64_t seed = 0;
    int k_found = -1;
    int k_max_pred = -1;
    int success = -1; // -1: not applicable
    double delta = std::nan("");
    std::uint64_t iterations = 0;
    double seconds = 0.0;

    static const char* csv_header() {
        return "experiment,n,p,alpha,algorithm,i,e0,seed,k_found,k_max_pred,"
               "success,delta,iterations,seconds";
    }

    std::string csv_row() const {
        std::ostringstream os;
        os.precision(17);
        auto opt_num = [&](double v) {
            if (std::isnan(v))
                os << ',';
            else
                os << ',' << v;
        };
        auto opt_int = [&](int v) {
            if (v < 0)
                os << ',';
            else
                os << ',' << v;
        };
        os << experiment << ',' << n << ',' << p;
        opt_num(alpha);
        os << ',' << algorithm;
        opt_int(i);
        opt_num(e0);
        os << ',' << seed;
        opt_int(k_found);
        opt_int(k_max_pred);
        opt_int(success);
        opt_num(delta);
        os << ',' << iterations << ',' << seconds;
        return os.str();
    }
};

inline void write_csv(const std::string& path, const char* header,
                      const std::vector<std::string>& rows) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path);
    out << header << "\n";
    for (const auto& r : rows) out << r << "\n";
}

inline void write_records_csv(const std::string& path,
                              const std::vector<ExperimentRecord>& records) {
    std::vector<std::string> rows;
    rows.reserve(records.size());
    for (const auto& r : records) rows.push_back(r.csv_row());
    write_csv(path, ExperimentRecord::csv_header(), rows);
}

// ---------------------------------------------------------------------------
// single-instance solvers

struct SolveSpec {
    std::string algo;          // sm0 | sm1 | sm2 | smi | sm0_smi | sm0_iter
    std::uint32_t subset_i = 0; // 0: per-algo default (table-driven for iter)

    std::string label() const {
        if (algo == "smi") return "sm" + std::to_string(subset_i);
        return algo;
    }
};

struct SolveOutcome {
    std::uint32_t k_found = 0;
    std::uint64_t iterations = 0;
    double delta = std::nan("");
    int used_i = -1;
};

inline SolveOutcome solve_instance(const Graph& g, const SolveSpec& spec,
                                   Rng& rng) {
    SolveOutcome out;
    if (spec.algo == "sm0") {
        out.k_found = sm0(g, rng).size();
    } else if (spec.algo == "sm1" || spec.algo == "sm2" || spec.algo == "smi") {
        std::uint32_t i = spec.subset_i;
        if (spec.algo == "sm1") i = 1;
        if (spec.algo == "sm2") i = 2;
        if (i == 0) throw std::invalid_argument("smi requires --i");
        out.k_found = smi(g, i, rng).size();
        out.used_i = int(i);
    } else if (spec.algo == "sm0_smi") {
        const std::uint32_t i = spec.subset_i ? spec.subset_i : 4;
        out.k_found = sm0_then_smi(g, i, rng).size();
        out.used_i = int(i);
    } else if (spec.algo == "sm0_iter") {
        const std::uint32_t i =
            spec.subset_i ? spec.subset_i : choose_i(g.order());
        const SearchOutcome so = sm0_iter_smi(g, i, rng);
        out.k_found = so.clique.size();
        out.iterations = so.iterations;
        out.used_i = int(i);
    } else {
        throw std::invalid_argument("unknown algorithm '" + spec.algo + "'");
    }
    return out;
}

// ---------------------------------------------------------------------------
// staircase experiment: mean/std of found clique size per (n, algorithm)

struct StaircaseParams {
    std::vector<std::uint32_t> n_grid;
    double p = 0.5;
    std::vector<SolveSpec> algos;
    std::uint32_t samples = 100;
    std::uint64_t base_seed = 1;
    bool allow_large = false;
    unsigned workers = 0;
};

struct StaircaseSummary {
    std::uint32_t n = 0;
    std::string algorithm;
    std::uint32_t samples = 0;
    double mean = 0.0;
    double stddev = 0.0;
    std::uint64_t k_max_pred = 0;
    double r_pred = 0.0;

    static const char* csv_header() {
        return "n,p,algorithm,samples,mean_k,std_k,k_max,r_continuous";
    }
};

struct StaircaseResult {
    std::vector<ExperimentRecord> records;
    std::vector<StaircaseSummary> summaries;
    double p = 0.5;
};

inline StaircaseResult exp_staircase(const StaircaseParams& prm) {
    struct Job {
        std::uint32_t n;
        const SolveSpec* spec;
        std::uint32_t rep;
    };
    std::vector<Job> jobs;
    for (std::uint32_t n : prm.n_grid)
        for (const auto& spec : prm.algos)
            for (std::uint32_t rep = 0; rep < prm.samples; ++rep)
                jobs.push_back({n, &spec, rep});

    StaircaseResult result;
    result.p = prm.p;
    result.records.resize(jobs.size());
    parallel_for(
        jobs.size(),
        [&](std::size_t idx) {
            const Job& job = jobs[idx];
            const std::uint64_t seed = instance_seed(
                prm.base_seed, "staircase:" + job.spec->label(), job.n, prm.p,
                0.0, job.rep);
            const Timer timer;
            const Graph g = gen_gnp(job.n, prm.p, mix_seed(seed, "graph"),
                                    prm.allow_large);
            Rng rng(mix_seed(seed, "algo"));
            const SolveOutcome so = solve_instance(g, *job.spec, rng);
            ExperimentRecord rec;
            rec.experiment = "staircase";
            rec.n = job.n;
            rec.p = prm.p;
            rec.algorithm = job.spec->label();
            rec.i = so.used_i;
            rec.seed = seed;
            rec.k_found = int(so.k_found);
            rec.k_max_pred = int(k_max(job.n, prm.p));
            rec.delta = so.delta;
            rec.iterations = so.iterations;
            rec.seconds = timer.seconds();
            result.records[idx] = std::move(rec);
        },
        prm.workers);

    for (std::uint32_t n : prm.n_grid) {
        for (const auto& spec : prm.algos) {
            StaircaseSummary s;
            s.n = n;
            s.algorithm = spec.label();
            double sum = 0.0, sum2 = 0.0;
            for (const auto& rec : result.records)
                if (rec.n == n && rec.algorithm == s.algorithm) {
                    sum += rec.k_found;
                    sum2 += double(rec.k_found) * rec.k_found;
                    ++s.samples;
                }
            s.mean = sum / s.samples;
            s.stddev = s.samples > 1
                           ? std::sqrt(std::max(
                                 0.0, (sum2 - sum * sum / s.samples) /
                                          (s.samples - 1)))
                           : 0.0;
            s.k_max_pred = k_max(n, prm.p);
            s.r_pred = r_continuous(n, prm.p);
            result.summaries.push_back(std::move(s));
        }
    }
    return result;
}

inline void write_staircase_summary(const std::string& path,
                                    const StaircaseResult& result) {
    std::vector<std::string> rows;
    for (const auto& s : result.summaries) {
        std::ostringstream os;
        os.precision(12);
        os << s.n << ',' << result.p << ',' << s.algorithm << ',' << s.samples
           << ',' << s.mean << ',' << s.stddev << ',' << s.k_max_pred << ','
           << s.r_pred;
        rows.push_back(os.str());
    }
    write_csv(path, StaircaseSummary::csv_header(), rows);
}

// ---------------------------------------------------------------------------
// step-fraction experiment: how often each value around k_max is reached,
// against the first/second-moment envelopes

struct StepFractionsSummary {
    std::uint32_t n = 0;
    std::string algorithm;
    std::uint32_t samples = 0;
    std::uint64_t k_max_pred = 0;
    // fraction of runs landing exactly on k_max-1, k_max, k_max+1
    double frac[3] = {0, 0, 0};
    double env_lo[3] = {0, 0, 0};
    double env_hi[3] = {0, 0, 0};

    static const char* csv_header() {
        return "n,p,algorithm,samples,k_max,frac_below,frac_at,frac_above,"
               "env_lo_below,env_hi_below,env_lo_at,env_hi_at,env_lo_above,"
               "env_hi_above";
    }
};

// Envelope on Prob(max clique == k) from the bounds on Prob(>= k):
// [lower(k) - upper(k+1), upper(k) - lower(k+1)], clamped to [0, 1].
inline std::pair<double, double> exact_value_envelope(std::uint64_t n,
                                                      std::uint64_t k,
                                                      double p) {
    const StepBounds at = prob_kmax_bounds(n, k, p);
    const StepBounds above = prob_kmax_bounds(n, k + 1, p);
    const double lo = std::max(0.0, at.lower - above.upper);
    const double hi = std::min(1.0, std::max(0.0, at.upper - above.lower));
    return {std::min(lo, hi), hi};
}

struct StepFractionsParams {
    std::vector<std::uint32_t> n_grid;
    double p = 0.5;
    std::vector<SolveSpec> algos;
    std::uint32_t samples = 500;
    std::uint64_t base_seed = 1;
    unsigned workers = 0;
};

struct StepFractionsResult {
    std::vector<ExperimentRecord> records;
    std::vector<StepFractionsSummary> summaries;
    double p = 0.5;
};

inline StepFractionsResult exp_step_fractions(const StepFractionsParams& prm) {
    StaircaseParams sp;
    sp.n_grid = prm.n_grid;
    sp.p = prm.p;
    sp.algos = prm.algos;
    sp.samples = prm.samples;
    sp.base_seed = prm.base_seed;
    sp.workers = prm.workers;
    StaircaseResult base = exp_staircase(sp);

    StepFractionsResult result;
    result.p = prm.p;
    result.records = std::move(base.records);
    for (auto& rec : result.records) rec.experiment = "step-fractions";
    for (std::uint32_t n : prm.n_grid) {
        const std::uint64_t km = k_max(n, prm.p);
        for (const auto& spec : prm.algos) {
            StepFractionsSummary s;
            s.n = n;
            s.algorithm = spec.label();
            s.k_max_pred = km;
            for (const auto& rec : result.records) {
                if (rec.n != n || rec.algorithm != s.algorithm) continue;
                ++s.samples;
                const std::int64_t d = rec.k_found - std::int64_t(km);
                if (d >= -1 && d <= 1) s.frac[d + 1] += 1.0;
            }
            for (int slot = 0; slot < 3; ++slot) {
                s.frac[slot] /= s.samples;
                const auto env =
                    exact_value_envelope(n, km + std::uint64_t(slot) - 1, prm.p);
                s.env_lo[slot] = env.first;
                s.env_hi[slot] = env.second;
            }
            result.summaries.push_back(std::move(s));
        }
    }
    return result;
}

inline void write_step_fractions_summary(const std::string& path,
                                         const StepFractionsResult& result) {
    std::vector<std::string> rows;
    for (const auto& s : result.summaries) {
        std::ostringstream os;
        os.precision(12);
        os << s.n << ',' << result.p << ',' << s.algorithm << ',' << s.samples
           << ',' << s.k_max_pred;
        for (int slot = 0; slot < 3; ++slot) os << ',' << s.frac[slot];
        for (int slot = 0; slot < 3; ++slot)
            os << ',' << s.env_lo[slot] << ',' << s.env_hi[slot];
        rows.push_back(os.str());
    }
    write_csv(path, StepFractionsSummary::csv_header(), rows);
}

// ---------------------------------------------------------------------------
// hidden-clique recovery sweep

struct RecoveryParams {
    std::uint32_t n = 10000;
    double p = 0.5;
    std::vector<double> alphas;
    std::vector<std::string> methods; // amp | sm1_es | sm2_es | spectral
    std::uint32_t samples = 100;
    std::uint64_t base_seed = 1;
    std::uint32_t t_max = 100;
    double eps = 1e-6;
    std::uint32_t k_stop_extra = 2; // k_stop = ceil(R(n, p)) + extra
    double e0_scaled = 0.0;         // spectral hint, 0/1-matrix scale
    double spectral_tol = 1e-8;
    PlantMethod plant = PlantMethod::naive;
    unsigned workers = 0;
};

inline ExperimentRecord run_recovery_instance(const RecoveryParams& prm,
                                              const std::string& method,
                                              double alpha, std::uint32_t rep) {
    const std::uint64_t seed = instance_seed(
        prm.base_seed, "recovery:" + method, prm.n, prm.p, alpha, rep);
    const auto k_hc = std::max<std::uint32_t>(
        2, std::uint32_t(std::lround(alpha * std::sqrt(double(prm.n)))));

    ExperimentRecord rec;
    rec.experiment = "recovery";
    rec.n = prm.n;
    rec.p = prm.p;
    rec.alpha = alpha;
    rec.algorithm = method;
    rec.seed = seed;
    rec.k_max_pred = int(k_max(prm.n, prm.p));

    const Timer timer;
    const Graph base = gen_gnp(prm.n, prm.p, mix_seed(seed, "graph"));
    const auto planted =
        prm.plant == PlantMethod::naive
            ? plant_naive(base, k_hc)
            : plant_rewired(base, k_hc, 1000000, mix_seed(seed, "rewire"));
    const Graph& g = planted.first;
    const PlantSpec& spec = planted.second;
    Rng rng(mix_seed(seed, "algo"));

    auto contains_all = [&](const Clique& c) {
        for (Vertex v : spec.vertices)
            if (!c.contains(v)) return false;
        return true;
    };

    if (method == "amp") {
        const AmpResult res = amp_recover(g, k_hc, rng, prm.t_max, prm.eps);
        rec.success = res.outcome == AmpOutcome::success ? 1 : 0;
        rec.iterations = res.iterations;
        rec.k_found = res.clique ? int(res.clique->size()) : 0;
    } else if (method == "sm1_es" || method == "sm2_es") {
        const int level = method == "sm1_es" ? 1 : 2;
        const auto k_stop =
            std::uint32_t(std::ceil(r_continuous(prm.n, prm.p))) +
            prm.k_stop_extra;
        const SearchOutcome es = early_stop_search(g, level, k_stop, rng);
        rec.delta = es.delta;
        rec.iterations = es.starts_used;
        if (es.stopped_early) {
            const Clique full = cleanup(g, es.clique, k_hc);
            rec.k_found = int(full.size());
            rec.success = (full.size() >= k_hc && contains_all(full)) ? 1 : 0;
        } else {
            rec.k_found = int(es.clique.size());
            rec.success = 0;
        }
    } else if (method == "spectral") {
        SpectralConfig cfg;
        cfg.kind = MatrixKind::plus_minus;
        cfg.tol = prm.spectral_tol;
        if (prm.e0_scaled != 0.0) {
            cfg.hint_site = spec.vertices.front();
            cfg.e0 = hint_boost_from_scaled(prm.e0_scaled, prm.n, cfg.kind,
                                            cfg.pm_normalized);
            rec.e0 = prm.e0_scaled;
        }
        const auto res = spectral_recover(g, k_hc, cfg, rng);
        rec.success = (res && contains_all(*res)) ? 1 : 0;
        rec.k_found = res ? int(res->size()) : 0;
    } else {
        throw std::invalid_argument("unknown recovery method '" + method + "'");
    }
    rec.seconds = timer.seconds();
    return rec;
}

struct RecoverySummary {
    double alpha = 0.0;
    std::string method;
    std::uint32_t samples = 0;
    double success_rate = 0.0;
    double mean_delta = std::nan("");
    double mean_seconds = 0.0;
};

struct RecoveryResult {
    std::vector<ExperimentRecord> records;
    std::vector<RecoverySummary> summaries;
};

inline RecoveryResult exp_recovery_sweep(const RecoveryParams& prm) {
    struct Job {
        double alpha;
        const std::string* method;
        std::uint32_t rep;
    };
    std::vector<Job> jobs;
    for (double alpha : prm.alphas)
        for (const auto& method : prm.methods)
            for (std::uint32_t rep = 0; rep < prm.samples; ++rep)
                jobs.push_back({alpha, &method, rep});
    RecoveryResult result;
    result.records.resize(jobs.size());
    parallel_for(
        jobs.size(),
        [&](std::size_t idx) {
            result.records[idx] = run_recovery_instance(
                prm, *jobs[idx].method, jobs[idx].alpha, jobs[idx].rep);
        },
        prm.workers);

    for (double alpha : prm.alphas) {
        for (const auto& method : prm.methods) {
            RecoverySummary s;
            s.alpha = alpha;
            s.method = method;
            double dsum = 0.0, tsum = 0.0;
            std::uint32_t dcount = 0;
            for (const auto& rec : result.records) {
                if (rec.alpha != alpha || rec.algorithm != method) continue;
                ++s.samples;
                s.success_rate += rec.success == 1 ? 1.0 : 0.0;
                tsum += rec.seconds;
                if (!std::isnan(rec.delta)) {
                    dsum += rec.delta;
                    ++dcount;
                }
            }
            if (s.samples) {
                s.success_rate /= s.samples;
                s.mean_seconds = tsum / s.samples;
                if (dcount) s.mean_delta = dsum / dcount;
            }
            result.summaries.push_back(std::move(s));
        }
    }
    return result;
}

// ---------------------------------------------------------------------------
// normalized-size extrapolation: fit K / (2 log2 N) = A log2 N + B and
// report where the fit crosses 1/2

struct ExtrapolationFit {
    double a = 0.0;
    double b = 0.0;
    double crossing_n = 0.0;
};

inline ExtrapolationFit exp_extrapolate(
    const std::vector<std::pair<double, double>>& n_and_mean_k) {
    if (n_and_mean_k.size() < 2)
        throw std::runtime_error("extrapolation needs at least 2 grid points");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double m = double(n_and_mean_k.size());
    for (const auto& [n, mean_k] : n_and_mean_k) {
        const double x = std::log2(n);
        const double y = mean_k / (2.0 * x);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double det = m * sxx - sx * sx;
    if (std::abs(det) < 1e-12)
        throw std::runtime_error("extrapolation fit is singular");
    ExtrapolationFit fit;
    fit.a = (m * sxy - sx * sy) / det;
    fit.b = (sy * sxx - sx * sxy) / det;
    if (std::abs(fit.a) < 1e-15)
        throw std::runtime_error(
            "extrapolation slope is zero; crossing undefined");
    fit.crossing_n = std::exp2((0.5 - fit.b) / fit.a);
    return fit;
}

// ---------------------------------------------------------------------------
// companion plot scripts (plain text, no plotting dependency)

inline void write_plot_script(const std::string& csv_path,
                              const std::string& kind) {
    std::ofstream out(csv_path + ".gnuplot");
    if (!out) throw std::runtime_error("cannot open " + csv_path + ".gnuplot");
    out << "# gnuplot companion for " << csv_path << "\n";
    out << "set datafile separator ','\n";
    out << "set key autotitle columnhead\n";
    if (kind == "staircase") {
        out << "set logscale x\n";
        out << "set xlabel 'N'\nset ylabel 'clique size'\n";
        out << "plot '" << csv_path
            << "' using 1:5:6 with yerrorbars title 'mean k', '" << csv_path
            << "' using 1:7 with steps title 'k_max', '" << csv_path
            << "' using 1:8 with lines title 'R(N)'\n";
    } else if (kind == "recovery") {
        out << "set xlabel 'alpha'\nset ylabel 'success fraction'\n";
        out << "plot '" << csv_path << "' using 4:11 with points\n";
    } else if (kind == "gap") {
        out << "set xlabel 'alpha'\nset ylabel 'lambda1 - lambda2'\n";
        out << "plot '" << csv_path << "' using 3:7 with points\n";
    } else {
        out << "plot '" << csv_path << "' using 1:2 with points\n";
    }
}

} // namespace cliquelab
