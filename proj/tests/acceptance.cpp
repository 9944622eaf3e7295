// Acceptance gate: one criterion per invocation (argv[1] = 1..9), one
// PASS/FAIL line each. argv[2] = path to the ftkit CLI (criterion 9).
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <random>
#include <sstream>
#include <string>

#include "ftkit/optimizer.hpp"
#include "ftkit/pipeline.hpp"
#include "ftkit/simulator.hpp"
#include "ftkit/trace_io.hpp"
#include "oracle.hpp"
#include "util.hpp"

using namespace ftkit;
using testutil::random_feasible;
using testutil::table2_row1;
using testutil::table2_selected;

namespace {

const MaterialSpec kMat;
const LoadEnvelope kEnv;

double now() {
    using namespace std::chrono;
    return duration<double>(steady_clock::now().time_since_epoch()).count();
}

int verdict(int n, const std::string& what, bool pass, const std::string& detail) {
    std::printf("[C%d] %s: %s (%s)\n", n, what.c_str(), pass ? "PASS" : "FAIL",
                detail.c_str());
    return pass ? 0 : 1;
}

// C1: optimize --objective COND, c swept over {0, h/4, h/2}; cond within
// +/-20% of 47.4971. Reference: published Table II row-1 condition number.
int c1() {
    const double target = 47.4971, lo = 0.8 * target, hi = 1.2 * target;
    double t0 = now();
    SearchConfig cfg;
    cfg.objective = ObjectiveId::COND;
    cfg.n_starts = 32;
    cfg.max_iters = 600;
    cfg.seed = 1;

    cfg.c = 0.0;
    OptimizationResult base = global_search(cfg, kMat, kEnv);
    const double h0 = base.best.params.h;
    double best_cond = base.best.metrics.cond, best_c = 0.0, best_dist = std::fabs(base.best.metrics.cond - target);
    for (double c : {h0 / 4, h0 / 2}) {
        cfg.c = c;
        OptimizationResult r = global_search(cfg, kMat, kEnv);
        double d = std::fabs(r.best.metrics.cond - target);
        if (d < best_dist) { best_dist = d; best_cond = r.best.metrics.cond; best_c = c; }
    }
    double dt = now() - t0;
    bool pass = best_cond >= lo && best_cond <= hi && dt < 300;
    char d[160];
    std::snprintf(d, sizeof d, "best cond=%.4f target 47.4971 +/-20%%, best c=%.3f mm, %.1fs",
                  best_cond, best_c, dt);
    return verdict(1, "Table II COND spot reproduction", pass, d);
}

// C2: qualitative Table II clusters: l2 at its 11.00 lower bound for >= 9 of
// 13 objectives and the (l1~14.24, b1~3.04, r~4.44) cluster for >= 4.
int c2() {
    SearchConfig cfg;
    cfg.n_starts = 32;
    cfg.max_iters = 600;
    cfg.seed = 2;
    std::vector<ObjectiveId> ids(all_objectives.begin(), all_objectives.end());
    auto rows = reproduce_table(ids, cfg, kMat, kEnv);
    int l2low = 0, cluster = 0;
    for (const auto& r : rows) {
        if (!r.ok) continue;
        const DesignParams& p = r.result.best.params;
        if (p.l2 <= 11.0 * 1.005) ++l2low;
        if (std::fabs(p.l1 - 14.24) / 14.24 <= 0.15 &&
            std::fabs(p.b1 - 3.039) / 3.039 <= 0.15 &&
            std::fabs(p.r - 4.437) / 4.437 <= 0.15)
            ++cluster;
    }
    bool pass = l2low >= 9 && cluster >= 4;
    char d[120];
    std::snprintf(d, sizeof d, "l2 at lower bound for %d/13 (need >=9), cluster hits %d (need >=4)",
                  l2low, cluster);
    return verdict(2, "Table II structural clusters", pass, d);
}

// C3: loose FEM cross-check of the four unit-load deformation columns at the
// selected design, +/-30%; writes the required comparison report.
int c3() {
    auto defs = unit_load_deformations(table2_selected(), kMat);
    const double ref[4] = {1.228e-2, 2.125e-2, 6.449e-3, 7.607e-4};  // mm,mm,mm,rad
    const char* names[4] = {"dFz(100N) mm", "dFx(100N) mm", "dMz(1Nm) mm", "rMy(1Nm) rad"};
    double got[4] = {defs[0] * 1e3, defs[1] * 1e3, defs[2] * 1e3, defs[3]};
    bool pass = true;
    std::ofstream rep("fem_crosscheck_report.csv", std::ios::binary);
    rep << "quantity,analytical,fem_reference,rel_diff_pct,within_30pct\n";
    std::ostringstream detail;
    for (int i = 0; i < 4; ++i) {
        double rel = (got[i] - ref[i]) / ref[i];
        bool ok = std::fabs(rel) <= 0.30;
        pass &= ok;
        rep << names[i] << ',' << got[i] << ',' << ref[i] << ','
            << rel * 100 << ',' << (ok ? "yes" : "no") << "\n";
        detail << names[i] << " " << (rel >= 0 ? "+" : "") << int(rel * 100) << "% ";
    }
    detail << "-> fem_crosscheck_report.csv";
    return verdict(3, "FEM deformation cross-check (+/-30%)", pass, detail.str());
}

// C4: oracle equivalence at 1e-12 on 100 random feasible designs in < 30 s.
int c4() {
    double t0 = now();
    std::mt19937_64 rng(4);
    double worst = 0;
    auto rel = [&](double a, double b) { return std::fabs(a - b) / std::fabs(b); };
    for (int i = 0; i < 100; ++i) {
        DesignParams p = random_feasible(rng);
        SectionSet s = derive_sections(p, kMat);
        SpringConstants k = sensor_compliances(s, p);
        GMatrix g = build_g(k, p);
        oracle::Out o = oracle::eval(p.l1, p.l2, p.b1, p.b2, p.h, p.r, p.rs2,
                                     p.rs1, p.c, kMat.E, kMat.G_shear);
        for (auto [a, b] : {std::pair{k.k_Fz, o.kFz}, {k.k_My, o.kMy},
                            {k.k_Fx, o.kFx}, {k.k_Mz, o.kMz},
                            {k.k_dFzv, o.kdFzv}, {k.k_rMyv, o.krMyv},
                            {k.k_dFyh, o.kdFxh}, {k.k_dMzh, o.kdMzh},
                            {k.k_rMxh, o.krMyh}})
            worst = std::max(worst, rel(a, b));
        double mid = s.l1p / 2;
        worst = std::max(worst, rel(deflection_profile(LoadCase::Fz, s, 1, mid), o.prof_fz_mid));
        worst = std::max(worst, rel(deflection_profile(LoadCase::My, s, 1, mid), o.prof_my_mid));
        worst = std::max(worst, rel(deflection_profile(LoadCase::Fx, s, 1, mid), o.prof_fx_mid));
        worst = std::max(worst, rel(deflection_profile(LoadCase::Mz, s, 1, mid), o.prof_mz_mid));
        for (int r = 0; r < 6; ++r)
            for (int c = 0; c < 6; ++c)
                if (o.G[r][c] != 0) worst = std::max(worst, rel(g.m(r, c), o.G[r][c]));
    }
    double dt = now() - t0;
    bool pass = worst <= 1e-12 && dt < 30;
    char d[100];
    std::snprintf(d, sizeof d, "worst rel diff %.2e over 100 designs, %.1fs", worst, dt);
    return verdict(4, "transcription oracle equivalence (1e-12)", pass, d);
}

// C5: reduction identity k_dFzv(rs1=r) * k_Fz = 1 at 1e-10 on 100 designs.
int c5() {
    std::mt19937_64 rng(5);
    double worst = 0;
    for (int i = 0; i < 100; ++i) {
        DesignParams p = random_feasible(rng);
        p.rs1 = p.r;
        SectionSet s = derive_sections(p, kMat);
        SpringConstants k = sensor_compliances(s, p);
        worst = std::max(worst, std::fabs(k.k_dFzv * k.k_Fz - 1.0));
    }
    bool pass = worst <= 1e-10;
    char d[80];
    std::snprintf(d, sizeof d, "worst |k_dFzv*k_Fz - 1| = %.2e", worst);
    return verdict(5, "reduction identity (1e-10)", pass, d);
}

// C6: frozen (l1, b1) subproblem vs a 200x200 exhaustive grid, within 1%.
int c6() {
    double t0 = now();
    DesignParams base = table2_row1();
    SearchConfig cfg;
    cfg.objective = ObjectiveId::COND;
    cfg.n_starts = 24;
    cfg.max_iters = 500;
    cfg.seed = 6;
    // freeze all but l1 and b1 with hairline bounds
    for (int i : {1, 3, 4, 5, 6}) {
        cfg.bounds.lo[i] = base[i];
        cfg.bounds.hi[i] = base[i] + 1e-9;
    }
    double grid_best = std::numeric_limits<double>::infinity();
    const Bounds full;
    for (int i = 0; i < 200; ++i)
        for (int j = 0; j < 200; ++j) {
            DesignParams p = base;
            p.l1 = full.lo[0] + (full.hi[0] - full.lo[0]) * i / 199.0;
            p.b1 = full.lo[2] + (full.hi[2] - full.lo[2]) * j / 199.0;
            grid_best = std::min(grid_best, penalized_objective(p, cfg, kMat, kEnv));
        }
    OptimizationResult r = global_search(cfg, kMat, kEnv);
    double dt = now() - t0;
    bool pass = r.best.objective <= grid_best * 1.01 && dt < 60;
    char d[120];
    std::snprintf(d, sizeof d, "search %.6f vs grid %.6f, %.1fs",
                  r.best.objective, grid_best, dt);
    return verdict(6, "2-variable grid-oracle optimization", pass, d);
}

// C7: simulate -> calibrate at 60 dB SNR: per-axis max error < 1% FS;
// injected 1.5% hysteresis detected at 1.5 +/- 0.2% and below the 2% budget.
int c7() {
    DesignParams dp = table2_selected();
    SectionSet s = derive_sections(dp, kMat);
    GMatrix g = build_g(sensor_compliances(s, dp), dp);
    SimOptics optics;
    LoadProfile cal_prof = calibration_profile({150, 150, -300, 4, 4, 4});
    apply_profile_snr(g, cal_prof, optics, 60);
    TraceResult tr = simulate_trace(g, cal_prof, optics, 7);
    CalibrationModel cal = fit_pipeline(tr.samples, optics);
    auto pred = reconstruct_series(cal, tr.samples);
    std::vector<Wrench> refs;
    for (const auto& smp : tr.samples) refs.push_back(smp.ref);
    ErrorReport er = error_metrics(pred, refs);
    double worst = 0;
    for (int a = 0; a < 6; ++a) worst = std::max(worst, er[a].max_pct);

    // hysteresis ramp on Fx: inject 1.5% of the 620 N full scale
    LoadProfile ramp = ramp_profile(0, 400.0, 20.0, 0.01, 1.0, 0.015, 620.0);
    apply_profile_snr(g, ramp, optics, 60);
    TraceResult tr2 = simulate_trace(g, ramp, optics, 8);
    auto pred2 = reconstruct_series(cal, tr2.samples);
    std::vector<Wrench> refs2;
    for (const auto& smp : tr2.samples) refs2.push_back(smp.ref);
    ErrorReport er2 = error_metrics(pred2, refs2);
    double hyst = er2[0].hysteresis_pct;

    bool pass = worst < 1.0 && hyst < 2.0 && std::fabs(hyst - 1.5) <= 0.2;
    char d[120];
    std::snprintf(d, sizeof d, "max err %.3f%% FS (<1%%), injected 1.5%% hysteresis read %.3f%%",
                  worst, hyst);
    return verdict(7, "end-to-end calibration at 60 dB SNR", pass, d);
}

// C8: resolution-step arithmetic pinned to the published table within +/-3.
int c8() {
    struct Row { double lo, hi, res; long expect; };
    const Row rows[] = {
        {-620, 620, 0.2436, 5091},    {-590, 590, 0.1429, 8258},
        {-1965, 1965, 0.2017, 19487}, {-13.7, 13.7, 0.01597, 1716},
        {-13.6, 13.6, 0.02120, 1283}, {-19.6, 19.6, 0.007436, 5272},
        {-100, 100, 0.2, 1000},       {-150, 150, 0.2, 1500},
        {-2.5, 2.5, 0.008, 625},
    };
    bool pass = true;
    long worst = 0;
    for (const Row& r : rows) {
        long got = resolution_steps(r.lo, r.hi, r.res);
        worst = std::max(worst, std::labs(got - r.expect));
        pass &= std::labs(got - r.expect) <= 3;
    }
    char d[80];
    std::snprintf(d, sizeof d, "worst deviation %ld steps (allow 3)", worst);
    return verdict(8, "resolution-step arithmetic (+/-3)", pass, d);
}

// C9: byte-identical outputs for every subcommand under a fixed config+seed.
int c9(const char* cli) {
    if (!cli) return verdict(9, "CLI determinism", false, "no CLI path given");
    auto sh = [&](const std::string& cmd) { return std::system(cmd.c_str()) == 0; };
    auto slurp = [](const std::string& p) {
        std::ifstream f(p, std::ios::binary);
        std::ostringstream ss;
        ss << f.rdbuf();
        return ss.str();
    };
    std::ofstream cfgf("c9_config.json", std::ios::binary);
    // r pulled 7 um inside the envelope constraint: the published rounded
    // optimum sits microns outside it and evaluate would exit nonzero
    cfgf << R"({"seed": 3, "search": {"n_starts": 4, "max_iters": 150},
  "params": {"l1": 14.24, "l2": 11.0, "b1": 3.039, "b2": 0.5535,
             "h": 6.69, "r": 4.43, "rs2": 8.716}})";
    cfgf.close();
    const std::string base = std::string(cli) + " --config c9_config.json ";
    struct Step { std::string cmd, out1, out2; };
    std::vector<Step> steps = {
        {"evaluate --json --out %O", "c9_ev1.json", "c9_ev2.json"},
        {"optimize --json --out %O", "c9_op1.json", "c9_op2.json"},
        {"simulate --scenario calibration --out %O", "c9_si1.csv", "c9_si2.csv"},
        {"calibrate c9_si1.csv --json --out %O", "c9_ca1.json", "c9_ca2.json"},
        {"report c9_ev1.json > %O", "c9_re1.txt", "c9_re2.txt"},
    };
    bool pass = true;
    std::string failed;
    for (auto& st : steps) {
        for (const std::string* out : {&st.out1, &st.out2}) {
            std::string cmd = base + st.cmd;
            cmd.replace(cmd.find("%O"), 2, *out);
            if (!sh(cmd)) { pass = false; failed = st.cmd + " (exit)"; break; }
        }
        if (!pass) break;
        std::string a = slurp(st.out1), b = slurp(st.out2);
        if (a.empty() || a != b) {
            pass = false;
            failed = st.cmd;
            break;
        }
    }
    return verdict(9, "CLI determinism (byte-identical reruns)", pass,
                   pass ? "evaluate/optimize/simulate/calibrate/report" : failed);
}

} // namespace

int main(int argc, char** argv) {
    if (argc < 2) {
        std::fprintf(stderr, "usage: %s <criterion 1..9> [cli-path]\n", argv[0]);
        return 2;
    }
    int n = std::atoi(argv[1]);
    switch (n) {
        case 1: return c1();
        case 2: return c2();
        case 3: return c3();
        case 4: return c4();
        case 5: return c5();
        case 6: return c6();
        case 7: return c7();
        case 8: return c8();
        case 9: return c9(argc > 2 ? argv[2] : nullptr);
    }
    std::fprintf(stderr, "unknown criterion %d\n", n);
    return 2;
}
