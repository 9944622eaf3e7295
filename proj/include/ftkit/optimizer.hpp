#pragma once
#include <algorithm>
#include <array>
#include <atomic>
#include <chrono>
#include <cstdlib>
#include <limits>
#include <thread>
#include <vector>
#include "sensitivity.hpp"

// Constrained global search over the seven design variables: multi-start
// Nelder-Mead from Halton points with quadratic penalties.

namespace ftkit {

struct Bounds {
    // (l1, l2, b1, b2, h, r, rs2) in mm
    std::array<double, 7> lo = {1, 11, 1, 0.5, 1, 1, 2};
    std::array<double, 7> hi = {20, 30, 10, 1, 15, 8, 15};
};

// Strict inequalities are treated as slack <= -eps (SI units).
inline constexpr double kStrictEps = 1e-9;

struct ViolationReport {
    // g1..g5 slacks (negative = satisfied), then per-variable bound clamp
    // distances (0 inside the box).
    std::array<double, 5> g{};
    std::array<double, 7> bound_clamp{};
    bool feasible = false;
};

inline ViolationReport feasibility(const DesignParams& p, const MaterialSpec& m,
                                   const LoadEnvelope& env,
                                   const Bounds& b = Bounds{}) {
    constexpr double mm = 1e-3;
    ViolationReport v;
    v.g[0] = (-p.l1 + 3 * p.b1) * mm;
    v.g[1] = (-p.l2 + 3 * p.b2) * mm;
    v.g[2] = -0.02 + std::hypot((p.r + p.l1 + p.b2) * mm, p.l2 * mm / 2);
    try {
        SectionSet s = derive_sections(p, m);
        StressReport sr = stress_check(s, env, m);
        v.g[3] = sr.sigma_bend - m.sigma_allowable;
        v.g[4] = sr.sigma_torsion - m.sigma_allowable;
        // stress slacks in Pa; scale to keep penalties commensurate with the
        // geometric slacks (meters)
        v.g[3] /= m.sigma_allowable;
        v.g[4] /= m.sigma_allowable;
    } catch (const Error&) {
        v.g[3] = v.g[4] = 1.0;
    }
    for (int i = 0; i < 7; ++i) {
        double x = p[i];
        v.bound_clamp[i] = std::max(0.0, std::max(b.lo[i] - x, x - b.hi[i])) * mm;
    }
    v.feasible = true;
    for (double s : v.g) v.feasible &= (s <= -kStrictEps);
    for (double d : v.bound_clamp) v.feasible &= (d == 0.0);
    return v;
}

struct Candidate {
    DesignParams params;
    double objective = std::numeric_limits<double>::infinity();
    MetricSet metrics{};
    ViolationReport violations{};
    bool feasible = false;
};

struct SearchConfig {
    int n_starts = 64;
    int max_iters = 800;
    double penalty_weight = 1e6;
    unsigned seed = 1;
    ObjectiveId objective = ObjectiveId::COND;
    double convergence_tol = 1e-10;
    NormMode norm_mode = NormMode::ColumnRated;
    Bounds bounds{};
    double c = 0.0;     // horizontal sensor height offset, mm
    double rs1 = 12.0;  // fixed vertical sensor radius, mm
};

struct OptimizationResult {
    Candidate best;
    std::vector<double> history;  // per-start best objective
    long evaluations = 0;
    double wall_time = 0;
};

namespace detail {

inline double halton(int index, int base) {
    double f = 1, r = 0;
    while (index > 0) {
        f /= base;
        r += f * (index % base);
        index /= base;
    }
    return r;
}

inline DesignParams make_params(const std::array<double, 7>& x, const SearchConfig& cfg) {
    DesignParams p;
    for (int i = 0; i < 7; ++i) p[i] = x[i];
    p.rs1 = cfg.rs1;
    p.c = cfg.c;
    return p;
}

} // namespace detail

// Margin by which the quadratic penalty shifts each slack inward.  Active
// constraints settle at a small positive residual of the shifted slack, so
// without the margin a boundary-active optimum would classify as infeasible
// under the strict g <= -kStrictEps rule.
inline constexpr double kPenaltyMargin = 1e-6;

// Raw objective + quadratic penalty.  Degenerate or off-beam geometry is
// search-safe +inf, never NaN.
inline double penalized_objective(const DesignParams& p, const SearchConfig& cfg,
                                  const MaterialSpec& m, const LoadEnvelope& env) {
    ViolationReport v = feasibility(p, m, env, cfg.bounds);
    double penalty = 0;
    for (double s : v.g) penalty += std::pow(std::max(0.0, s + kPenaltyMargin), 2);
    for (double d : v.bound_clamp) penalty += d * d;
    double raw;
    try {
        MetricSet ms = design_metrics(p, m, env, cfg.norm_mode);
        raw = objective_value(cfg.objective, ms);
    } catch (const Error&) {
        return std::numeric_limits<double>::infinity();
    }
    if (!std::isfinite(raw)) return std::numeric_limits<double>::infinity();
    return raw + cfg.penalty_weight * penalty;
}

namespace detail {

struct NmResult {
    std::array<double, 7> x{};
    double f = std::numeric_limits<double>::infinity();
    long evals = 0;
};

template <typename F>
NmResult nelder_mead(F&& fn, const std::array<double, 7>& x0,
                     const std::array<double, 7>& step, int max_iters, double tol) {
    constexpr int n = 7;
    std::array<std::array<double, 7>, n + 1> xs;
    std::array<double, n + 1> fs;
    long evals = 0;
    xs[0] = x0;
    fs[0] = fn(x0);
    ++evals;
    for (int i = 0; i < n; ++i) {
        xs[i + 1] = x0;
        xs[i + 1][i] += step[i];
        fs[i + 1] = fn(xs[i + 1]);
        ++evals;
    }
    auto order = [&] {
        std::array<int, n + 1> idx;
        for (int i = 0; i <= n; ++i) idx[i] = i;
        std::sort(idx.begin(), idx.end(), [&](int a, int b) { return fs[a] < fs[b]; });
        std::array<std::array<double, 7>, n + 1> xs2;
        std::array<double, n + 1> fs2;
        for (int i = 0; i <= n; ++i) { xs2[i] = xs[idx[i]]; fs2[i] = fs[idx[i]]; }
        xs = xs2; fs = fs2;
    };
    order();
    for (int it = 0; it < max_iters; ++it) {
        if (std::isfinite(fs[0]) && std::isfinite(fs[n]) && fs[n] - fs[0] < tol) break;
        std::array<double, 7> cen{};
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < 7; ++j) cen[j] += xs[i][j] / n;
        auto lerp = [&](double t) {
            std::array<double, 7> p;
            for (int j = 0; j < 7; ++j) p[j] = cen[j] + t * (xs[n][j] - cen[j]);
            return p;
        };
        auto xr = lerp(-1.0);
        double fr = fn(xr); ++evals;
        if (fr < fs[0]) {
            auto xe = lerp(-2.0);
            double fe = fn(xe); ++evals;
            if (fe < fr) { xs[n] = xe; fs[n] = fe; }
            else { xs[n] = xr; fs[n] = fr; }
        } else if (fr < fs[n - 1]) {
            xs[n] = xr; fs[n] = fr;
        } else {
            auto xc = lerp(fr < fs[n] ? -0.5 : 0.5);
            double fc = fn(xc); ++evals;
            double fworst = std::min(fr, fs[n]);
            if (fc < fworst) { xs[n] = xc; fs[n] = fc; }
            else {  // shrink toward the best vertex
                for (int i = 1; i <= n; ++i) {
                    for (int j = 0; j < 7; ++j) xs[i][j] = xs[0][j] + 0.5 * (xs[i][j] - xs[0][j]);
                    fs[i] = fn(xs[i]); ++evals;
                }
            }
        }
        order();
    }
    return {xs[0], fs[0], evals};
}

} // namespace detail

inline int worker_count() {
    if (const char* e = std::getenv("FTKIT_THREADS")) {
        int n = std::atoi(e);
        if (n >= 1) return n;
    }
    return 1;
}

inline OptimizationResult global_search(const SearchConfig& cfg, const MaterialSpec& m,
                                        const LoadEnvelope& env) {
    if (cfg.n_starts < 1) throw ConfigError("n_starts must be >= 1");
    const auto t0 = std::chrono::steady_clock::now();
    static constexpr int primes[7] = {2, 3, 5, 7, 11, 13, 17};
    const Bounds& b = cfg.bounds;
    const int offset = 1 + int(cfg.seed % 8191);

    struct StartOut {
        detail::NmResult nm;
        bool ok = false;
    };
    std::vector<StartOut> outs(cfg.n_starts);
    std::atomic<int> next{0};
    auto run_start = [&](int si) {
        std::array<double, 7> x0, step;
        for (int j = 0; j < 7; ++j) {
            double u = detail::halton(offset + si, primes[j]);
            x0[j] = b.lo[j] + u * (b.hi[j] - b.lo[j]);
            step[j] = 0.08 * (b.hi[j] - b.lo[j]);
        }
        auto fn = [&](const std::array<double, 7>& x) {
            return penalized_objective(detail::make_params(x, cfg), cfg, m, env);
        };
        auto nm = detail::nelder_mead(fn, x0, step, cfg.max_iters, cfg.convergence_tol);
        // polish: the coarse phase settles with slack residuals set by the
        // penalty stiffness; restart from the clamped point with a much
        // stiffer penalty and small steps to push strictly inside
        SearchConfig stiff = cfg;
        stiff.penalty_weight = cfg.penalty_weight * 1e6;
        auto fn2 = [&](const std::array<double, 7>& x) {
            return penalized_objective(detail::make_params(x, cfg), stiff, m, env);
        };
        std::array<double, 7> x1 = nm.x, step2;
        for (int j = 0; j < 7; ++j) {
            x1[j] = std::clamp(x1[j], b.lo[j], b.hi[j]);
            step2[j] = 0.002 * (b.hi[j] - b.lo[j]);
        }
        auto nm2 = detail::nelder_mead(fn2, x1, step2, cfg.max_iters, cfg.convergence_tol);
        for (int j = 0; j < 7; ++j) nm2.x[j] = std::clamp(nm2.x[j], b.lo[j], b.hi[j]);
        nm2.evals += nm.evals;
        outs[si].nm = nm2;
        outs[si].ok = true;
    };

    const int nw = std::min(worker_count(), cfg.n_starts);
    if (nw <= 1) {
        for (int si = 0; si < cfg.n_starts; ++si) run_start(si);
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < nw; ++w)
            pool.emplace_back([&] {
                for (int si = next.fetch_add(1); si < cfg.n_starts; si = next.fetch_add(1))
                    run_start(si);
            });
        for (auto& t : pool) t.join();
    }

    OptimizationResult res;
    // deterministic reduction: objective first, then lexicographic params
    for (int si = 0; si < cfg.n_starts; ++si) {
        const auto& nm = outs[si].nm;
        res.history.push_back(nm.f);
        res.evaluations += nm.evals;
        DesignParams p = detail::make_params(nm.x, cfg);
        ViolationReport v = feasibility(p, m, env, b);
        if (!v.feasible) continue;
        Candidate c;
        c.params = p;
        c.violations = v;
        c.feasible = true;
        try {
            MetricSet ms = design_metrics(p, m, env, cfg.norm_mode);
            c.metrics = ms;
            c.objective = objective_value(cfg.objective, ms);
        } catch (const Error&) {
            continue;
        }
        bool better = c.objective < res.best.objective;
        if (!better && c.objective == res.best.objective) {
            for (int j = 0; j < 7; ++j) {
                if (c.params[j] != res.best.params[j]) {
                    better = c.params[j] < res.best.params[j];
                    break;
                }
            }
        }
        if (!res.best.feasible || better) res.best = c;
    }
    res.wall_time = std::chrono::duration<double>(
        std::chrono::steady_clock::now() - t0).count();
    if (!res.best.feasible)
        throw NoFeasiblePoint("every start ended infeasible");
    return res;
}

struct TableRow {
    ObjectiveId id;
    bool ok = false;
    std::string error;
    OptimizationResult result;
    // unit-load deformations at the optimum: Fz 100 N (m), Fx 100 N (m),
    // Mz 1 N*m tangential sensor displacement (m), My 1 N*m rotation (rad)
    double dFz = 0, dFx = 0, dMz = 0, rMy = 0;
};

inline std::array<double, 4> unit_load_deformations(const DesignParams& p,
                                                    const MaterialSpec& m) {
    SectionSet s = derive_sections(p, m);
    SpringConstants k = sensor_compliances(s, p);
    return {100 * k.k_Fz, 100 * k.k_Fx, 1 / k.k_dMzh, 1 * k.k_My};
}

inline std::vector<TableRow> reproduce_table(const std::vector<ObjectiveId>& ids,
                                             SearchConfig cfg, const MaterialSpec& m,
                                             const LoadEnvelope& env) {
    std::vector<TableRow> rows;
    for (ObjectiveId id : ids) {
        TableRow row;
        row.id = id;
        cfg.objective = id;
        try {
            row.result = global_search(cfg, m, env);
            auto d = unit_load_deformations(row.result.best.params, m);
            row.dFz = d[0]; row.dFx = d[1]; row.dMz = d[2]; row.rMy = d[3];
            row.ok = true;
        } catch (const Error& e) {
            row.error = e.what();
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

} // namespace ftkit
