#pragma once
#include <cmath>
#include "types.hpp"

// Closed-form Timoshenko compliance model of the three-spoke T-beam elastomer.
// All SectionSet quantities are SI; DesignParams enter in millimeters and are
// converted exactly once in derive_sections.

namespace ftkit {

struct SectionSet {
    // geometry (m)
    double l1p, l2p, b1, b2, h, r;
    // areas (m^2), second moments (m^4)
    double S1, S2, I11, I12, I21, I22, It;
    // dimensionless coefficients
    double beta, k_shear;
    // intermediate system coefficients
    double a1;        // m
    double a2;        // 1/m
    double lambda1, lambda2;
    double A1, B1;    // My system
    double A2, B2, A3, B3, A4;  // Fx system
    // material
    double E, G;
};

inline SectionSet derive_sections(const DesignParams& p, const MaterialSpec& m) {
    m.validate();
    if (p.l1 <= 0 || p.l2 <= 0 || p.b1 <= 0 || p.b2 <= 0 || p.h <= 0 ||
        p.r <= 0 || p.rs1 <= 0 || p.rs2 <= 0)
        throw NonPositiveDimension("all lengths must be strictly positive");

    constexpr double mm = 1e-3;
    SectionSet s{};
    const double l1 = p.l1 * mm, l2 = p.l2 * mm, b1 = p.b1 * mm,
                 b2 = p.b2 * mm, h = p.h * mm, r = p.r * mm;
    s.E = m.E;
    s.G = m.G_shear;
    s.b1 = b1; s.b2 = b2; s.h = h; s.r = r;
    s.l1p = l1 + b2 / 2;
    s.l2p = l2 - b1;
    if (s.l2p <= 0)
        throw DegenerateSection("l2' = l2 - b1 must be positive");

    s.S1 = b1 * h;
    s.S2 = b2 * h;
    s.I11 = h * b1 * b1 * b1 / 12;
    s.I12 = b1 * h * h * h / 12;
    s.I21 = h * b2 * b2 * b2 / 12;
    s.I22 = b2 * h * h * h / 12;
    s.beta = (16.0 / 3 - 3.36 * (b2 / h) * (1 - std::pow(b2, 4) / (12 * std::pow(h, 4)))) / 16;
    s.It = s.beta * h * b2 * b2 * b2;
    s.k_shear = 10.0 / (12 + b2 / h);

    const double E = s.E, G = s.G, l1p = s.l1p, l2p = s.l2p;
    s.a1 = l1p * (2 * l1p * G * s.It + l2p * E * s.I12) /
                 (4 * l1p * G * s.It + l2p * E * s.I12);
    s.lambda1 = l1p / r;
    s.lambda2 = l2p / r;

    const double k = s.k_shear;
    s.A1 = (l1p * l1p / (3 * E * s.I12) + l1p * l2p / (4 * G * s.It) + 1 / (k * G * s.S1)) * s.lambda1
         + (1 / (4 * k * G * s.S2) + l2p * l2p / (192 * E * s.I22)) * s.lambda2
         + (l1p * l1p / (2 * E * s.I12) + l1p * l2p / (4 * G * s.It));
    s.B1 = (l1p / (2 * E * s.I12) + l2p / (4 * G * s.It)) * s.lambda1
         + (l1p / (E * s.I12) + l2p / (4 * G * s.It));

    s.A2 = l1p * l1p / (2 * s.I11) + l1p * l2p / (16 * s.I21);
    s.B2 = l1p / s.I11 + l2p / (16 * s.I21);
    s.A3 = l1p * l1p * l1p / (3 * E * s.I11) + l1p * l1p * l2p / (16 * E * s.I21)
         + l1p / (k * G * s.S1)
         - s.A2 * (l1p * l1p / (2 * E * s.I11) + l1p * l2p / (16 * E * s.I21)) / s.B2;
    s.B3 = std::sqrt(3.0) * (l2p * l2p * l2p / (192 * E * s.I21)
                             + l1p / (E * s.S1) + l2p / (4 * k * G * s.S2));
    s.A4 = 1.5 + std::sqrt(3.0) * s.B3 / (2 * s.A3);

    s.a2 = (l1p / (E * s.I11) + l2p / (16 * E * s.I21)
            + (l1p / (2 * E * s.I11) + l2p / (16 * E * s.I21)) * s.lambda1) /
           (l1p * l1p / (2 * E * s.I11) + l1p * l2p / (16 * E * s.I21)
            + (l1p * l1p / (3 * E * s.I11) + l1p * l2p / (16 * E * s.I21)
               + 1 / (k * G * s.S1)) * s.lambda1);
    return s;
}

namespace detail {

// Radial deflection per unit Fz at distance u from the beam root (m/N).
inline double profile_fz(const SectionSet& s, double u) {
    const double E = s.E, G = s.G, k = s.k_shear, l1p = s.l1p, l2p = s.l2p;
    return (1.0 / 3) * (u * u * (3 * l1p - u) / (6 * E * s.I12)
                        - s.a1 * u * u / (2 * E * s.I12)
                        + (l1p - s.a1) * l2p * u / (4 * G * s.It)
                        + l2p * l2p * l2p / (192 * E * s.I22)
                        + (4 * l1p * s.S2 + l2p * s.S1) / (4 * k * G * s.S1 * s.S2));
}

// Vertical deflection per unit My at distance u (m/(N*m)).
inline double profile_my(const SectionSet& s, double u) {
    const double E = s.E, G = s.G, k = s.k_shear, l1p = s.l1p, l2p = s.l2p;
    const double ab = s.A1 / s.B1;
    const double den = ab + s.r;
    if (den <= 0) throw SingularGeometry("A1/B1 + r non-positive");
    return (2.0 / (3 * den)) * (l2p * l2p * l2p / (192 * E * s.I22)
                                + l2p / (4 * k * G * s.S2)
                                + u / (k * G * s.S1)
                                + u * u * (3 * l1p - u) / (6 * E * s.I12)
                                - ab * u * u / (2 * E * s.I12)
                                + (l1p - ab) * l2p * u / (4 * G * s.It));
}

// Tangential deflection per unit Fx at distance u (m/N).
inline double profile_fx(const SectionSet& s, double u) {
    const double E = s.E, G = s.G, k = s.k_shear, l1p = s.l1p, l2p = s.l2p;
    if (s.A3 == 0 || s.A4 == 0) throw SingularGeometry("A3 or A4 vanished");
    const double pre = s.B3 / (2 * s.A3 * s.A4 * std::cos(M_PI / 6));
    return pre * (u * u * (3 * l1p - u) / (6 * E * s.I11)
                  - s.A2 * u * u / (2 * E * s.I11 * s.B2)
                  + (l1p * l2p * u - s.A2 * u * l2p / s.B2) / (16 * E * s.I21)
                  + u / (4 * k * G * s.S1));
}

// Tangential deflection per unit Mz at distance u (m/(N*m)).
inline double profile_mz(const SectionSet& s, double u) {
    const double E = s.E, G = s.G, k = s.k_shear, l1p = s.l1p, l2p = s.l2p;
    if (s.r + 1 / s.a2 <= 0) throw SingularGeometry("r + 1/a2 non-positive");
    const double c1 = 1 / (3 * (s.r + 1 / s.a2));
    const double c2 = 1 / (3 * (s.a2 * s.r + 1));
    return c1 * u * u * (3 * l1p - u) / (6 * E * s.I11)
         - c2 * u * u / (2 * E * s.I11)
         + (c1 * l1p - c2) * u * l2p / (16 * E * s.I21)
         + c1 * l1p / (k * G * s.S1);
}

} // namespace detail

enum class LoadCase { Fz, My, Fx, Mz };

// delta(x) for the given unit-load profile scaled by `load`; x measured from
// the beam root, valid on [0, l1'].  Angular cases return the linear
// deflection at x; divide by r for the table rotation.
inline double deflection_profile(LoadCase c, const SectionSet& s, double load, double x) {
    if (x < 0 || x > s.l1p)
        throw OutOfRange("profile abscissa outside [0, l1']");
    switch (c) {
        case LoadCase::Fz: return load * detail::profile_fz(s, x);
        case LoadCase::My: return load * detail::profile_my(s, x);
        case LoadCase::Fx: return load * detail::profile_fx(s, x);
        case LoadCase::Mz: return load * detail::profile_mz(s, x);
    }
    throw OutOfRange("unknown load case");
}

// Base-case spring constants (compliance form).
inline double spring_k_fz(const SectionSet& s) { return detail::profile_fz(s, s.l1p); }       // m/N
inline double spring_k_my(const SectionSet& s, double r) {                                    // rad/(N*m)
    return detail::profile_my(s, s.l1p) / r;
}
inline double spring_k_fx(const SectionSet& s) { return detail::profile_fx(s, s.l1p); }       // m/N
inline double spring_k_mz(const SectionSet& s, double r) {                                    // rad/(N*m)
    return detail::profile_mz(s, s.l1p) / r;
}

// Position-dependent sensor spring constants (stiffness form) plus the four
// base compliances. k_rMxv == k_rMyv and k_dFxh == k_dFyh by the 120-degree
// layout symmetry; one set is computed.
struct SpringConstants {
    double k_dFzv;  // N/m
    double k_rMyv;  // N*m/rad
    double k_dFyh;  // N/m
    double k_dMzh;  // N*m per m of tangential sensor displacement
    double k_rMxh;  // N*m/rad
    double k_Fz;    // m/N
    double k_My;    // rad/(N*m)
    double k_Fx;    // m/N
    double k_Mz;    // rad/(N*m)

    double k_rMxv() const { return k_rMyv; }
    double k_dFxh() const { return k_dFyh; }
    double k_rMyh() const { return k_rMxh; }
};

inline SpringConstants sensor_compliances(const SectionSet& s, const DesignParams& p) {
    constexpr double mm = 1e-3;
    const double rs1 = p.rs1 * mm, rs2 = p.rs2 * mm;
    const double u1 = s.l1p + s.r - rs1;
    const double u2 = s.l1p + s.r - rs2;
    // Sensor must sit over the beam span; u = 0 is the clamped root where the
    // position-dependent compliances lose meaning, so it is rejected too.
    constexpr double tol = 1e-12;
    if (u1 <= tol || u1 > s.l1p + tol)
        throw SensorOffBeam("rs1 outside [r, r + l1')");
    if (u2 <= tol || u2 > s.l1p + tol)
        throw SensorOffBeam("rs2 outside [r, r + l1')");

    SpringConstants k{};
    k.k_dFzv = 1 / detail::profile_fz(s, u1);
    k.k_rMyv = s.r / detail::profile_my(s, u1);
    k.k_dFyh = 1 / detail::profile_fx(s, u2);
    k.k_dMzh = 1 / detail::profile_mz(s, u2);
    k.k_rMxh = s.r / detail::profile_my(s, u2);
    k.k_Fz = spring_k_fz(s);
    k.k_My = spring_k_my(s, s.r);
    k.k_Fx = spring_k_fx(s);
    k.k_Mz = spring_k_mz(s, s.r);
    for (double v : {k.k_dFzv, k.k_rMyv, k.k_dFyh, k.k_dMzh, k.k_rMxh,
                     k.k_Fz, k.k_My, k.k_Fx, k.k_Mz})
        if (!(v > 0) || !std::isfinite(v))
            throw SingularGeometry("non-positive or non-finite spring constant");
    return k;
}

// Stress screening under the rated vertical load.  The constraint rows only
// name sigma_bend/sigma_torsion; the formulas here are the declared design
// choice: worst single-beam root bending M = (F/3) l1' and the root torsion
// left over after the a1 moment split, thin-rectangle modulus alpha = 1/3.
inline StressReport stress_check(const SectionSet& s, const LoadEnvelope& env,
                                 const MaterialSpec& m) {
    if (env.F_rated < 0 || env.M_rated < 0)
        throw NonPositiveDimension("negative load envelope");
    StressReport rep;
    const double F3 = env.F_rated / 3;
    rep.sigma_bend = (F3 * s.l1p) * (s.h / 2) / s.I12;
    rep.sigma_torsion = F3 * (s.l1p - s.a1) / ((1.0 / 3) * s.h * s.b2 * s.b2);
    rep.sigma_allowable = m.sigma_allowable;
    rep.feasible = rep.sigma_bend < m.sigma_allowable &&
                   rep.sigma_torsion < m.sigma_allowable;
    return rep;
}

} // namespace ftkit
