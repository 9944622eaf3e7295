#pragma once
#include <array>
#include <string>
#include <cmath>
#include "beam_model.hpp"

// 6x6 sensitivity matrix assembly, normalization, SVD metrics and the 13
// candidate objective functions.

namespace ftkit {

struct GMatrix {
    Mat6 m = Mat6::Zero();
    DesignParams params;  // provenance
};

enum class NormMode {
    ColumnRated,  // Gbar = G * diag(rated): column j = displacements at full-scale load j
    RowRated      // literal reading: Gbar = diag(1/rated) * G
};

struct NormalizedG {
    Mat6 m = Mat6::Zero();
    Vec6 rated = Vec6::Zero();
    NormMode mode = NormMode::ColumnRated;
};

struct MetricSet {
    double sigma_max = 0, sigma_min = 0;
    double cond = 0;
    double frobenius = 0;
    double nuclear = 0;
    double spectral = 0;
};

enum class ObjectiveId {
    COND, INV_S2, INV_F, INV_NUC,
    COND_over_S2, COND_over_F, COND_over_NUC,
    COND_times_S2,
    CONDxS2_over_F, CONDxS2_over_NUC,
    CONDxS2_over_F2, CONDxS2_over_NUC2,
    CONDxS2_over_FxNUC
};

inline constexpr std::array<ObjectiveId, 13> all_objectives = {
    ObjectiveId::COND, ObjectiveId::INV_S2, ObjectiveId::INV_F, ObjectiveId::INV_NUC,
    ObjectiveId::COND_over_S2, ObjectiveId::COND_over_F, ObjectiveId::COND_over_NUC,
    ObjectiveId::COND_times_S2,
    ObjectiveId::CONDxS2_over_F, ObjectiveId::CONDxS2_over_NUC,
    ObjectiveId::CONDxS2_over_F2, ObjectiveId::CONDxS2_over_NUC2,
    ObjectiveId::CONDxS2_over_FxNUC};

inline const char* objective_name(ObjectiveId id) {
    switch (id) {
        case ObjectiveId::COND: return "COND";
        case ObjectiveId::INV_S2: return "INV_S2";
        case ObjectiveId::INV_F: return "INV_F";
        case ObjectiveId::INV_NUC: return "INV_NUC";
        case ObjectiveId::COND_over_S2: return "COND_over_S2";
        case ObjectiveId::COND_over_F: return "COND_over_F";
        case ObjectiveId::COND_over_NUC: return "COND_over_NUC";
        case ObjectiveId::COND_times_S2: return "COND_times_S2";
        case ObjectiveId::CONDxS2_over_F: return "CONDxS2_over_F";
        case ObjectiveId::CONDxS2_over_NUC: return "CONDxS2_over_NUC";
        case ObjectiveId::CONDxS2_over_F2: return "CONDxS2_over_F2";
        case ObjectiveId::CONDxS2_over_NUC2: return "CONDxS2_over_NUC2";
        case ObjectiveId::CONDxS2_over_FxNUC: return "CONDxS2_over_FxNUC";
    }
    return "?";
}

inline ObjectiveId objective_from_name(const std::string& n) {
    for (ObjectiveId id : all_objectives)
        if (n == objective_name(id)) return id;
    throw ConfigError("unknown objective id: " + n);
}

// Assemble G per the printed matrix: rows = sensors (3 vertical, 3
// horizontal), cols = (Fx, Fy, Fz, Mx, My, Mz).
inline GMatrix build_g(const SpringConstants& k, const DesignParams& p) {
    constexpr double mm = 1e-3;
    const double rs1 = p.rs1 * mm;
    const double lever = (p.h / 2 - p.c) * mm;  // h/2 - c coupling arm
    const double s3 = std::sin(M_PI / 3), s6 = std::sin(M_PI / 6);

    GMatrix g;
    g.params = p;
    Mat6& G = g.m;
    G.row(0) << 0, 0, -1 / k.k_dFzv, -rs1 * s3 / k.k_rMyv, rs1 * s6 / k.k_rMyv, 0;
    G.row(1) << 0, 0, -1 / k.k_dFzv, rs1 * s3 / k.k_rMyv, rs1 * s6 / k.k_rMyv, 0;
    G.row(2) << 0, 0, -1 / k.k_dFzv, 0, -rs1 / k.k_rMyv, 0;
    G.row(3) << 0, 1 / k.k_dFyh, 0, lever / k.k_rMxh, 0, 1 / k.k_dMzh;
    G.row(4) << -s3 / k.k_dFyh, -s6 / k.k_dFyh, 0, -lever * s6 / k.k_rMxh,
                -lever * s3 / k.k_rMxh, 1 / k.k_dMzh;
    G.row(5) << s3 / k.k_dFyh, -s6 / k.k_dFyh, 0, lever * s6 / k.k_rMxh,
                lever * s3 / k.k_rMxh, 1 / k.k_dMzh;
    return g;
}

inline NormalizedG normalize_g(const GMatrix& g, const LoadEnvelope& env,
                               NormMode mode = NormMode::ColumnRated) {
    env.validate();
    NormalizedG n;
    n.mode = mode;
    n.rated << env.F_rated, env.F_rated, env.F_rated,
               env.M_rated, env.M_rated, env.M_rated;
    if (mode == NormMode::ColumnRated)
        n.m = g.m * n.rated.asDiagonal();
    else
        n.m = n.rated.cwiseInverse().asDiagonal() * g.m;
    return n;
}

inline MetricSet singular_metrics(const Mat6& m) {
    Eigen::JacobiSVD<Mat6> svd(m);
    const Vec6& sv = svd.singularValues();
    MetricSet ms;
    ms.sigma_max = sv(0);
    ms.sigma_min = sv(5);
    if (ms.sigma_min < 1e-14 * ms.sigma_max)
        throw RankDeficient("sigma_min/sigma_max below 1e-14");
    ms.cond = ms.sigma_max / ms.sigma_min;
    ms.spectral = ms.sigma_max;
    ms.frobenius = sv.norm();
    ms.nuclear = sv.sum();
    return ms;
}

inline MetricSet singular_metrics(const NormalizedG& g) { return singular_metrics(g.m); }

inline double objective_value(ObjectiveId id, const MetricSet& m) {
    const double c = m.cond, s2 = m.spectral, f = m.frobenius, nu = m.nuclear;
    switch (id) {
        case ObjectiveId::COND: return c;
        case ObjectiveId::INV_S2: return 1 / s2;
        case ObjectiveId::INV_F: return 1 / f;
        case ObjectiveId::INV_NUC: return 1 / nu;
        case ObjectiveId::COND_over_S2: return c / s2;
        case ObjectiveId::COND_over_F: return c / f;
        case ObjectiveId::COND_over_NUC: return c / nu;
        case ObjectiveId::COND_times_S2: return c * s2;
        case ObjectiveId::CONDxS2_over_F: return c * s2 / f;
        case ObjectiveId::CONDxS2_over_NUC: return c * s2 / nu;
        case ObjectiveId::CONDxS2_over_F2: return c * s2 / (f * f);
        case ObjectiveId::CONDxS2_over_NUC2: return c * s2 / (nu * nu);
        case ObjectiveId::CONDxS2_over_FxNUC: return c * s2 / (f * nu);
    }
    throw OutOfRange("unknown objective id");
}

inline DisplacementSet forward_map(const GMatrix& g, const Wrench& w) {
    return g.m * w;
}

// Least-squares wrench from displacements (exact inverse for full-rank G).
inline Wrench inverse_map(const GMatrix& g, const DisplacementSet& d) {
    Eigen::JacobiSVD<Mat6> svd(g.m, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const Vec6& sv = svd.singularValues();
    if (sv(5) < 1e-14 * sv(0))
        throw RankDeficient("G is rank deficient");
    return svd.solve(d);
}

// Convenience: full pipeline from a design point to metrics.
inline MetricSet design_metrics(const DesignParams& p, const MaterialSpec& mat,
                                const LoadEnvelope& env,
                                NormMode mode = NormMode::ColumnRated) {
    SectionSet s = derive_sections(p, mat);
    SpringConstants k = sensor_compliances(s, p);
    return singular_metrics(normalize_g(build_g(k, p), env, mode));
}

} // namespace ftkit
