// ftkit command-line tool: evaluate designs, run the optimizer, simulate
// traces and drive the calibration pipeline.
#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "ftkit/beam_model.hpp"
#include "ftkit/calibration.hpp"
#include "ftkit/optimizer.hpp"
#include "ftkit/pipeline.hpp"
#include "ftkit/sensitivity.hpp"
#include "ftkit/simulator.hpp"
#include "ftkit/trace_io.hpp"
#include "ftkit/version.hpp"

using json = nlohmann::ordered_json;
using namespace ftkit;

namespace {

constexpr int EXIT_OK = 0;
constexpr int EXIT_INFEASIBLE = 2;  // infeasible design / budget miss
constexpr int EXIT_INPUT = 3;       // config or input error

void reject_unknown(const json& obj, const std::set<std::string>& allowed,
                    const std::string& where) {
    for (auto it = obj.begin(); it != obj.end(); ++it)
        if (!allowed.count(it.key()))
            throw ConfigError("unknown key '" + it.key() + "' in " + where);
}

struct RunConfig {
    MaterialSpec material;
    LoadEnvelope envelope;
    SearchConfig search;
    DesignParams params;
    bool has_params = false;
    NormMode norm_mode = NormMode::ColumnRated;
    double error_budget_pct = 1.0;  // calibrate pass/fail threshold, % FS
    double snr_db = 60.0;
    std::string scenario = "static-ramp";
    double hysteresis_frac = 0.0;
    json raw;  // effective config for hashing
};

DesignParams parse_params(const json& j) {
    reject_unknown(j, {"l1", "l2", "b1", "b2", "h", "r", "rs2", "rs1", "c"}, "params");
    DesignParams p;
    p.l1 = j.at("l1").get<double>();
    p.l2 = j.at("l2").get<double>();
    p.b1 = j.at("b1").get<double>();
    p.b2 = j.at("b2").get<double>();
    p.h = j.at("h").get<double>();
    p.r = j.at("r").get<double>();
    p.rs2 = j.at("rs2").get<double>();
    if (j.contains("rs1")) p.rs1 = j["rs1"].get<double>();
    if (j.contains("c")) p.c = j["c"].get<double>();
    return p;
}

RunConfig load_config(const std::string& path) {
    RunConfig c;
    json j = json::object();
    if (!path.empty()) {
        std::ifstream f(path);
        if (!f) throw ConfigError("cannot open config: " + path);
        try {
            j = json::parse(f);
        } catch (const json::parse_error& e) {
            throw ConfigError(std::string("config parse error: ") + e.what());
        }
    }
    reject_unknown(j, {"material", "envelope", "bounds", "objective", "search",
                       "fixed", "params", "units", "norm_mode", "seed",
                       "error_budget_pct", "snr_db", "scenario", "hysteresis_frac"},
                   "config root");
    if (j.contains("units") && j["units"] != "mm")
        throw ConfigError("units: only \"mm\" geometry input is supported");
    if (j.contains("material")) {
        const auto& m = j["material"];
        reject_unknown(m, {"E", "G_shear", "sigma_allowable"}, "material");
        if (m.contains("E")) c.material.E = m["E"].get<double>();
        if (m.contains("G_shear")) c.material.G_shear = m["G_shear"].get<double>();
        if (m.contains("sigma_allowable"))
            c.material.sigma_allowable = m["sigma_allowable"].get<double>();
    }
    if (j.contains("envelope")) {
        const auto& e = j["envelope"];
        reject_unknown(e, {"F_rated", "M_rated"}, "envelope");
        if (e.contains("F_rated")) c.envelope.F_rated = e["F_rated"].get<double>();
        if (e.contains("M_rated")) c.envelope.M_rated = e["M_rated"].get<double>();
    }
    if (j.contains("bounds")) {
        const auto& b = j["bounds"];
        reject_unknown(b, {"lo", "hi"}, "bounds");
        if (b.contains("lo"))
            for (int i = 0; i < 7; ++i) c.search.bounds.lo[i] = b["lo"].at(i).get<double>();
        if (b.contains("hi"))
            for (int i = 0; i < 7; ++i) c.search.bounds.hi[i] = b["hi"].at(i).get<double>();
    }
    if (j.contains("search")) {
        const auto& s = j["search"];
        reject_unknown(s, {"n_starts", "max_iters", "penalty_weight",
                           "convergence_tol"}, "search");
        if (s.contains("n_starts")) c.search.n_starts = s["n_starts"].get<int>();
        if (s.contains("max_iters")) c.search.max_iters = s["max_iters"].get<int>();
        if (s.contains("penalty_weight"))
            c.search.penalty_weight = s["penalty_weight"].get<double>();
        if (s.contains("convergence_tol"))
            c.search.convergence_tol = s["convergence_tol"].get<double>();
    }
    if (j.contains("fixed")) {
        const auto& f = j["fixed"];
        reject_unknown(f, {"rs1", "c"}, "fixed");
        if (f.contains("rs1")) c.search.rs1 = f["rs1"].get<double>();
        if (f.contains("c")) c.search.c = f["c"].get<double>();
    }
    if (j.contains("objective"))
        c.search.objective = objective_from_name(j["objective"].get<std::string>());
    if (j.contains("seed")) c.search.seed = j["seed"].get<unsigned>();
    if (j.contains("norm_mode")) {
        std::string m = j["norm_mode"].get<std::string>();
        if (m == "column") c.norm_mode = NormMode::ColumnRated;
        else if (m == "row") c.norm_mode = NormMode::RowRated;
        else throw ConfigError("norm_mode must be \"column\" or \"row\"");
    }
    if (j.contains("error_budget_pct"))
        c.error_budget_pct = j["error_budget_pct"].get<double>();
    if (j.contains("snr_db")) c.snr_db = j["snr_db"].get<double>();
    if (j.contains("scenario")) c.scenario = j["scenario"].get<std::string>();
    if (j.contains("hysteresis_frac"))
        c.hysteresis_frac = j["hysteresis_frac"].get<double>();
    if (j.contains("params")) {
        c.params = parse_params(j["params"]);
        c.has_params = true;
    }
    c.search.norm_mode = c.norm_mode;
    c.raw = j;
    return c;
}

json effective_config_json(const RunConfig& c) {
    json j;
    j["material"] = {{"E", c.material.E},
                     {"G_shear", c.material.G_shear},
                     {"sigma_allowable", c.material.sigma_allowable}};
    j["envelope"] = {{"F_rated", c.envelope.F_rated}, {"M_rated", c.envelope.M_rated}};
    j["bounds"] = {{"lo", c.search.bounds.lo}, {"hi", c.search.bounds.hi}};
    j["objective"] = objective_name(c.search.objective);
    j["search"] = {{"n_starts", c.search.n_starts},
                   {"max_iters", c.search.max_iters},
                   {"penalty_weight", c.search.penalty_weight},
                   {"convergence_tol", c.search.convergence_tol}};
    j["fixed"] = {{"rs1", c.search.rs1}, {"c", c.search.c}};
    j["seed"] = c.search.seed;
    j["norm_mode"] = c.norm_mode == NormMode::ColumnRated ? "column" : "row";
    j["scenario"] = c.scenario;
    j["snr_db"] = c.snr_db;
    j["error_budget_pct"] = c.error_budget_pct;
    j["hysteresis_frac"] = c.hysteresis_frac;
    if (c.has_params)
        j["params"] = {{"l1", c.params.l1}, {"l2", c.params.l2}, {"b1", c.params.b1},
                       {"b2", c.params.b2}, {"h", c.params.h}, {"r", c.params.r},
                       {"rs2", c.params.rs2}, {"rs1", c.params.rs1}, {"c", c.params.c}};
    return j;
}

uint64_t fnv1a(const std::string& s) {
    uint64_t h = 1469598103934665603ULL;
    for (unsigned char ch : s) {
        h ^= ch;
        h *= 1099511628211ULL;
    }
    return h;
}

json provenance(const RunConfig& c) {
    char hash[24];
    std::snprintf(hash, sizeof hash, "%016" PRIx64,
                  fnv1a(effective_config_json(c).dump()));
    return {{"tool", "ftkit"},
            {"version", kVersion},
            {"schema_version", kReportSchemaVersion},
            {"config_hash", hash},
            {"seed", c.search.seed}};
}

json mat_to_json(const Mat6& m) {
    json rows = json::array();
    for (int i = 0; i < 6; ++i) {
        json r = json::array();
        for (int j = 0; j < 6; ++j) r.push_back(m(i, j));
        rows.push_back(r);
    }
    return rows;
}

void write_or_print(const std::string& out, const std::string& text) {
    if (out.empty()) {
        std::cout << text;
    } else {
        std::ofstream f(out, std::ios::binary);
        if (!f) throw ConfigError("cannot open output: " + out);
        f << text;
    }
}

json candidate_json(const Candidate& c) {
    json j;
    j["params"] = {{"l1", c.params.l1}, {"l2", c.params.l2}, {"b1", c.params.b1},
                   {"b2", c.params.b2}, {"h", c.params.h}, {"r", c.params.r},
                   {"rs2", c.params.rs2}, {"rs1", c.params.rs1}, {"c", c.params.c}};
    j["objective"] = c.objective;
    j["feasible"] = c.feasible;
    j["metrics"] = {{"cond", c.metrics.cond}, {"sigma_max", c.metrics.sigma_max},
                    {"sigma_min", c.metrics.sigma_min},
                    {"frobenius", c.metrics.frobenius},
                    {"nuclear", c.metrics.nuclear},
                    {"spectral", c.metrics.spectral}};
    j["slacks"] = c.violations.g;
    return j;
}

int cmd_evaluate(const RunConfig& cfg, bool as_json, const std::string& out) {
    if (!cfg.has_params) throw ConfigError("evaluate requires a params block");
    const DesignParams& p = cfg.params;
    SectionSet s = derive_sections(p, cfg.material);
    SpringConstants k = sensor_compliances(s, p);
    GMatrix g = build_g(k, p);
    NormalizedG gb = normalize_g(g, cfg.envelope, cfg.norm_mode);
    MetricSet ms = singular_metrics(gb);
    ViolationReport vio = feasibility(p, cfg.material, cfg.envelope, cfg.search.bounds);
    auto defs = unit_load_deformations(p, cfg.material);

    json rep;
    rep["provenance"] = provenance(cfg);
    rep["kind"] = "evaluate";
    rep["G"] = mat_to_json(g.m);
    rep["G_normalized"] = mat_to_json(gb.m);
    rep["metrics"] = {{"cond", ms.cond}, {"sigma_max", ms.sigma_max},
                      {"sigma_min", ms.sigma_min}, {"frobenius", ms.frobenius},
                      {"nuclear", ms.nuclear}, {"spectral", ms.spectral}};
    json objs;
    for (ObjectiveId id : all_objectives)
        objs[objective_name(id)] = objective_value(id, ms);
    rep["objectives"] = objs;
    rep["slacks"] = vio.g;
    rep["feasible"] = vio.feasible;
    rep["deformations"] = {{"dFz_100N_m", defs[0]}, {"dFx_100N_m", defs[1]},
                           {"dMz_1Nm_m", defs[2]}, {"rMy_1Nm_rad", defs[3]}};

    if (as_json) {
        write_or_print(out, rep.dump(2) + "\n");
    } else {
        std::ostringstream os;
        os << "ftkit evaluate (v" << kVersion << ")\n";
        os << "cond(Gbar) = " << ms.cond << "  frobenius = " << ms.frobenius
           << "  nuclear = " << ms.nuclear << "\n";
        os << "objectives:\n";
        for (ObjectiveId id : all_objectives)
            os << "  " << objective_name(id) << " = " << objective_value(id, ms) << "\n";
        os << "constraint slacks (negative = satisfied): ";
        for (double x : vio.g) os << x << " ";
        os << "\nfeasible: " << (vio.feasible ? "yes" : "no") << "\n";
        os << "unit-load deformations: dFz(100N) = " << defs[0] * 1e3
           << " mm, dFx(100N) = " << defs[1] * 1e3 << " mm, dMz(1Nm) = "
           << defs[2] * 1e3 << " mm, rMy(1Nm) = " << defs[3] << " rad\n";
        write_or_print(out, os.str());
    }
    return vio.feasible ? EXIT_OK : EXIT_INFEASIBLE;
}

int cmd_optimize(const RunConfig& cfg, bool as_json, bool table2, const std::string& out) {
    if (table2) {
        std::vector<ObjectiveId> ids(all_objectives.begin(), all_objectives.end());
        auto rows = reproduce_table(ids, cfg.search, cfg.material, cfg.envelope);
        std::ostringstream os;
        os << "# ftkit v" << kVersion << " config_hash="
           << provenance(cfg)["config_hash"].get<std::string>()
           << " seed=" << cfg.search.seed << "\n";
        os << "objective,l1,l2,b1,b2,h,r,rs2,cond,dFz100N_mm,dFx100N_mm,dMz1Nm_mm,rMy1Nm_rad,status\n";
        for (const auto& r : rows) {
            os << objective_name(r.id) << ',';
            if (r.ok) {
                const DesignParams& p = r.result.best.params;
                os << fmt_g17(p.l1) << ',' << fmt_g17(p.l2) << ',' << fmt_g17(p.b1)
                   << ',' << fmt_g17(p.b2) << ',' << fmt_g17(p.h) << ',' << fmt_g17(p.r)
                   << ',' << fmt_g17(p.rs2) << ',' << fmt_g17(r.result.best.metrics.cond)
                   << ',' << fmt_g17(r.dFz * 1e3) << ',' << fmt_g17(r.dFx * 1e3)
                   << ',' << fmt_g17(r.dMz * 1e3) << ',' << fmt_g17(r.rMy) << ",ok\n";
            } else {
                os << ",,,,,,,,,,," << r.error << "\n";
            }
        }
        write_or_print(out.empty() ? "table2.csv" : out, os.str());
        return EXIT_OK;
    }
    OptimizationResult res;
    try {
        res = global_search(cfg.search, cfg.material, cfg.envelope);
    } catch (const NoFeasiblePoint& e) {
        std::cerr << "no feasible point: " << e.what() << "\n";
        return EXIT_INFEASIBLE;
    }
    json rep;
    rep["provenance"] = provenance(cfg);
    rep["kind"] = "optimize";
    rep["objective_id"] = objective_name(cfg.search.objective);
    rep["best"] = candidate_json(res.best);
    rep["evaluations"] = res.evaluations;
    rep["history"] = res.history;
    if (as_json) {
        write_or_print(out, rep.dump(2) + "\n");
    } else {
        std::ostringstream os;
        const DesignParams& p = res.best.params;
        os << "ftkit optimize " << objective_name(cfg.search.objective)
           << " (seed " << cfg.search.seed << ")\n"
           << "best: l1=" << p.l1 << " l2=" << p.l2 << " b1=" << p.b1
           << " b2=" << p.b2 << " h=" << p.h << " r=" << p.r << " rs2=" << p.rs2
           << "\nobjective=" << res.best.objective
           << " cond=" << res.best.metrics.cond
           << " evals=" << res.evaluations << "\n";
        write_or_print(out, os.str());
    }
    return EXIT_OK;
}

GMatrix config_g(const RunConfig& cfg) {
    DesignParams p = cfg.params;
    if (!cfg.has_params) {
        // default to a mid-range feasible design
        p = DesignParams{};
        p.l1 = 14.24; p.l2 = 11.0; p.b1 = 3.039; p.b2 = 0.5535;
        p.h = 6.69; p.r = 4.437; p.rs2 = 8.716;
    }
    SectionSet s = derive_sections(p, cfg.material);
    return build_g(sensor_compliances(s, p), p);
}

int cmd_simulate(const RunConfig& cfg, const std::string& out) {
    if (out.empty()) throw ConfigError("simulate requires --out");
    GMatrix g = config_g(cfg);
    SimOptics optics;
    unsigned seed = cfg.search.seed;
    auto run = [&](const LoadProfile& prof) {
        apply_profile_snr(g, prof, optics, cfg.snr_db);
        return simulate_trace(g, prof, optics, seed);
    };

    if (cfg.scenario == "static-ramp") {
        write_trace(out, run(ramp_profile(2, -300.0, 20.0, 0.01, 1.0,
                                          cfg.hysteresis_frac, 520.0)).samples);
    } else if (cfg.scenario == "calibration") {
        write_trace(out, run(calibration_profile({150, 150, -300, 4, 4, 4})).samples);
    } else if (cfg.scenario == "gait") {
        write_trace(out, run(gait_profile(200, 10.0)).samples);
    } else if (cfg.scenario == "impact") {
        write_trace(out, run(impact_profile(150, 2.5, 10.0)).samples);
    } else if (cfg.scenario == "gravel-drift") {
        LoadProfile base = gait_profile(150, 30.0);
        apply_profile_snr(g, base, optics, cfg.snr_db);
        DriftModel drift = DriftModel::commercial_preset(60);
        DriftScenario ds = drift_scenario(g, base, drift, optics, seed);
        write_trace(out, ds.drifting.samples);
        std::string stable_out = out;
        auto dot = stable_out.rfind('.');
        stable_out.insert(dot == std::string::npos ? stable_out.size() : dot, ".stable");
        write_trace(stable_out, ds.stable.samples);
    } else {
        throw ConfigError("unknown scenario: " + cfg.scenario);
    }
    return EXIT_OK;
}

int cmd_calibrate(const RunConfig& cfg, const std::vector<std::string>& traces,
                  bool as_json, const std::string& out) {
    if (traces.empty()) throw ConfigError("calibrate requires at least one trace");
    std::vector<RawSample> all;
    for (const auto& path : traces) {
        auto t = read_trace(path);
        all.insert(all.end(), t.begin(), t.end());
    }
    SimOptics optics;
    optics.set_snr_db(cfg.snr_db);  // bench characterization noise level
    CalibrationModel cal = fit_pipeline(all, optics);
    auto pred = reconstruct_series(cal, all);
    std::vector<Wrench> refs;
    for (const auto& s : all) refs.push_back(s.ref);
    ErrorReport er = error_metrics(pred, refs);

    double worst = 0;
    json rep;
    rep["provenance"] = provenance(cfg);
    rep["kind"] = "calibrate";
    json axes = json::array();
    static const char* axis_names[6] = {"Fx", "Fy", "Fz", "Mx", "My", "Mz"};
    for (int a = 0; a < 6; ++a) {
        worst = std::max(worst, er[a].max_pct);
        axes.push_back({{"axis", axis_names[a]},
                        {"mean_pct", er[a].mean_pct},
                        {"std_pct", er[a].std_pct},
                        {"max_pct", er[a].max_pct},
                        {"rmse", er[a].rmse},
                        {"nonlinearity_pct", er[a].nonlinearity_pct},
                        {"hysteresis_pct", er[a].hysteresis_pct}});
    }
    rep["errors"] = axes;
    json polys = json::array();
    for (int i = 0; i < 6; ++i)
        polys.push_back({{"coeffs", cal.poly[i].coeffs},
                         {"v_lo", cal.poly[i].v_lo},
                         {"v_hi", cal.poly[i].v_hi},
                         {"residual_rms_mm", cal.poly[i].residual_rms}});
    rep["model"] = {{"poly", polys},
                    {"decoupling", mat_to_json(cal.dec.M)},
                    {"zero_offset_mm", std::vector<double>(
                        cal.zero_offset.data(), cal.zero_offset.data() + 6)},
                    {"excitation_cond", cal.dec.excitation_cond}};
    rep["error_budget_pct"] = cfg.error_budget_pct;
    rep["budget_met"] = worst < cfg.error_budget_pct;

    if (as_json) {
        write_or_print(out, rep.dump(2) + "\n");
    } else {
        std::ostringstream os;
        os << "ftkit calibrate (v" << kVersion << ")\n";
        os << "axis  mean%   std%    max%    rmse      nonlin%  hyst%\n";
        for (int a = 0; a < 6; ++a) {
            char line[160];
            std::snprintf(line, sizeof line, "%-4s %7.4f %7.4f %7.4f %9.4g %7.4f %7.4f\n",
                          axis_names[a], er[a].mean_pct, er[a].std_pct, er[a].max_pct,
                          er[a].rmse, er[a].nonlinearity_pct, er[a].hysteresis_pct);
            os << line;
        }
        os << "budget " << cfg.error_budget_pct << "% FS: "
           << (worst < cfg.error_budget_pct ? "met" : "MISSED") << "\n";
        write_or_print(out, os.str());
    }
    return worst < cfg.error_budget_pct ? EXIT_OK : EXIT_INFEASIBLE;
}

int cmd_report(const std::string& in) {
    std::ifstream f(in);
    if (!f) throw ConfigError("cannot open report: " + in);
    json j;
    try {
        j = json::parse(f);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("report parse error: ") + e.what());
    }
    std::cout << "kind: " << j.value("kind", "?") << "\n";
    if (j.contains("provenance")) {
        const auto& p = j["provenance"];
        std::cout << "tool " << p.value("tool", "?") << " v" << p.value("version", "?")
                  << " config " << p.value("config_hash", "?")
                  << " seed " << p.value("seed", 0u) << "\n";
    }
    if (j.contains("metrics"))
        std::cout << "cond = " << j["metrics"].value("cond", 0.0) << "\n";
    if (j.contains("best"))
        std::cout << "best objective = " << j["best"].value("objective", 0.0) << "\n";
    if (j.contains("errors"))
        for (const auto& a : j["errors"])
            std::cout << a.value("axis", "?") << " max% = " << a.value("max_pct", 0.0) << "\n";
    return EXIT_OK;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"optical six-axis F/T sensor design toolkit"};
    app.require_subcommand(1);

    std::string config_path, out;
    unsigned seed_flag = 0;
    bool seed_set = false, as_json = false, table2 = false;
    std::string objective_flag, scenario_flag;
    std::vector<std::string> traces;
    std::string report_in;

    app.add_option("--config", config_path, "JSON config file")->capture_default_str();

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--out", out, "output path");
        sub->add_flag("--json", as_json, "machine-readable JSON output");
        sub->add_option("--seed", seed_flag, "override config seed")
            ->each([&](const std::string&) { seed_set = true; });
        sub->add_option("--objective", objective_flag, "objective id override");
    };

    CLI::App* ev = app.add_subcommand("evaluate", "evaluate a design point");
    add_common(ev);
    CLI::App* op = app.add_subcommand("optimize", "run the global search");
    add_common(op);
    op->add_flag("--table2", table2, "13-objective reproduction CSV");
    CLI::App* si = app.add_subcommand("simulate", "generate a synthetic trace");
    add_common(si);
    si->add_option("--scenario", scenario_flag, "scenario preset");
    CLI::App* ca = app.add_subcommand("calibrate", "fit calibration from traces");
    add_common(ca);
    ca->add_option("traces", traces, "trace CSV paths");
    CLI::App* re = app.add_subcommand("report", "render a JSON report");
    re->add_option("report", report_in, "report JSON path")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        RunConfig cfg = load_config(config_path);
        if (seed_set) cfg.search.seed = seed_flag;
        if (!objective_flag.empty())
            cfg.search.objective = objective_from_name(objective_flag);
        if (!scenario_flag.empty()) cfg.scenario = scenario_flag;

        if (ev->parsed()) return cmd_evaluate(cfg, as_json, out);
        if (op->parsed()) return cmd_optimize(cfg, as_json, table2, out);
        if (si->parsed()) return cmd_simulate(cfg, out);
        if (ca->parsed()) return cmd_calibrate(cfg, traces, as_json, out);
        if (re->parsed()) return cmd_report(report_in);
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return EXIT_INPUT;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return EXIT_INFEASIBLE;
    }
    return EXIT_OK;
}
