#pragma once
// Independent brute-force transcription of the printed compliance formulas
// and the sensitivity-matrix entries. Deliberately flat, no shared helpers
// with the library: every quantity is re-derived inline from the design
// parameters so transcription errors in either copy show up as mismatches.
#include <cmath>

namespace oracle {

struct Out {
    double l1p, l2p, beta, k;
    double kFz, kMy, kFx, kMz;           // base compliances (SI)
    double kdFzv, krMyv, kdFxh, kdMzh, krMyh;  // sensor stiffnesses (SI)
    double G[6][6];
    double prof_fz_mid, prof_my_mid, prof_fx_mid, prof_mz_mid;  // at u = l1p/2
};

// inputs in mm except E, G_shear (Pa) and c (mm)
inline Out eval(double l1mm, double l2mm, double b1mm, double b2mm, double hmm,
                double rmm, double rs2mm, double rs1mm, double cmm,
                double E, double Gs) {
    Out o{};
    double l1 = l1mm * 1e-3, l2 = l2mm * 1e-3, b1 = b1mm * 1e-3, b2 = b2mm * 1e-3;
    double h = hmm * 1e-3, r = rmm * 1e-3, rs1 = rs1mm * 1e-3, rs2 = rs2mm * 1e-3;

    double l1p = l1 + b2 / 2.0;
    double l2p = l2 - b1;
    double S1 = b1 * h, S2 = b2 * h;
    double I11 = h * b1 * b1 * b1 / 12.0;
    double I12 = b1 * h * h * h / 12.0;
    double I21 = h * b2 * b2 * b2 / 12.0;
    double I22 = b2 * h * h * h / 12.0;
    double beta = (16.0 / 3.0 - 3.36 * (b2 / h) * (1.0 - (b2 * b2 * b2 * b2) / (12.0 * h * h * h * h))) / 16.0;
    double It = beta * h * b2 * b2 * b2;
    double k = 10.0 / (12.0 + b2 / h);
    double a1 = l1p * (2.0 * l1p * Gs * It + l2p * E * I12) / (4.0 * l1p * Gs * It + l2p * E * I12);
    double lam1 = l1p / r, lam2 = l2p / r;

    o.l1p = l1p; o.l2p = l2p; o.beta = beta; o.k = k;

    // Fz profile: delta_Fz(u) per unit Fz
    auto dFz = [&](double u) {
        return (1.0 / 3.0) * (u * u * (3.0 * l1p - u) / (6.0 * E * I12)
                              - a1 * u * u / (2.0 * E * I12)
                              + (l1p - a1) * l2p * u / (4.0 * Gs * It)
                              + l2p * l2p * l2p / (192.0 * E * I22)
                              + (4.0 * l1p * S2 + l2p * S1) / (4.0 * k * Gs * S1 * S2));
    };

    // My system
    double A1 = (l1p * l1p / (3.0 * E * I12) + l1p * l2p / (4.0 * Gs * It) + 1.0 / (k * Gs * S1)) * lam1
              + (1.0 / (4.0 * k * Gs * S2) + l2p * l2p / (192.0 * E * I22)) * lam2
              + (l1p * l1p / (2.0 * E * I12) + l1p * l2p / (4.0 * Gs * It));
    double B1 = (l1p / (2.0 * E * I12) + l2p / (4.0 * Gs * It)) * lam1
              + (l1p / (E * I12) + l2p / (4.0 * Gs * It));
    auto dMy = [&](double u) {
        double ab = A1 / B1;
        return (2.0 / (3.0 * (ab + r))) * (l2p * l2p * l2p / (192.0 * E * I22)
                                           + l2p / (4.0 * k * Gs * S2)
                                           + u / (k * Gs * S1)
                                           + u * u * (3.0 * l1p - u) / (6.0 * E * I12)
                                           - ab * u * u / (2.0 * E * I12)
                                           + (l1p - ab) * l2p * u / (4.0 * Gs * It));
    };

    // Fx system
    double A2 = l1p * l1p / (2.0 * I11) + l1p * l2p / (16.0 * I21);
    double B2 = l1p / I11 + l2p / (16.0 * I21);
    double A3 = l1p * l1p * l1p / (3.0 * E * I11) + l1p * l1p * l2p / (16.0 * E * I21)
              + l1p / (k * Gs * S1)
              - A2 * (l1p * l1p / (2.0 * E * I11) + l1p * l2p / (16.0 * E * I21)) / B2;
    double B3 = std::sqrt(3.0) * (l2p * l2p * l2p / (192.0 * E * I21)
                                  + l1p / (E * S1) + l2p / (4.0 * k * Gs * S2));
    double A4 = 1.5 + std::sqrt(3.0) * B3 / (2.0 * A3);
    auto dFx = [&](double u) {
        return B3 / (2.0 * A3 * A4 * std::cos(M_PI / 6.0)) *
               (u * u * (3.0 * l1p - u) / (6.0 * E * I11)
                - A2 * u * u / (2.0 * E * I11 * B2)
                + (l1p * l2p * u - A2 * u * l2p / B2) / (16.0 * E * I21)
                + u / (4.0 * k * Gs * S1));
    };

    // Mz system
    double a2 = (l1p / (E * I11) + l2p / (16.0 * E * I21)
                 + (l1p / (2.0 * E * I11) + l2p / (16.0 * E * I21)) * lam1) /
                (l1p * l1p / (2.0 * E * I11) + l1p * l2p / (16.0 * E * I21)
                 + (l1p * l1p / (3.0 * E * I11) + l1p * l2p / (16.0 * E * I21)
                    + 1.0 / (k * Gs * S1)) * lam1);
    auto dMz = [&](double u) {
        double c1 = 1.0 / (3.0 * (r + 1.0 / a2));
        double c2 = 1.0 / (3.0 * (a2 * r + 1.0));
        return c1 * u * u * (3.0 * l1p - u) / (6.0 * E * I11)
             - c2 * u * u / (2.0 * E * I11)
             + (c1 * l1p - c2) * u * l2p / (16.0 * E * I21)
             + c1 * l1p / (k * Gs * S1);
    };

    o.kFz = dFz(l1p);
    o.kMy = dMy(l1p) / r;
    o.kFx = dFx(l1p);
    o.kMz = dMz(l1p) / r;

    double u1 = l1p + r - rs1, u2 = l1p + r - rs2;
    o.kdFzv = 1.0 / dFz(u1);
    o.krMyv = r / dMy(u1);
    o.kdFxh = 1.0 / dFx(u2);
    o.kdMzh = 1.0 / dMz(u2);
    o.krMyh = r / dMy(u2);

    o.prof_fz_mid = dFz(l1p / 2.0);
    o.prof_my_mid = dMy(l1p / 2.0);
    o.prof_fx_mid = dFx(l1p / 2.0);
    o.prof_mz_mid = dMz(l1p / 2.0);

    double lever = (hmm / 2.0 - cmm) * 1e-3;
    double s3 = std::sin(M_PI / 3.0), s6 = std::sin(M_PI / 6.0);
    double Gm[6][6] = {
        {0, 0, -1.0 / o.kdFzv, -rs1 * s3 / o.krMyv, rs1 * s6 / o.krMyv, 0},
        {0, 0, -1.0 / o.kdFzv, rs1 * s3 / o.krMyv, rs1 * s6 / o.krMyv, 0},
        {0, 0, -1.0 / o.kdFzv, 0, -rs1 / o.krMyv, 0},
        {0, 1.0 / o.kdFxh, 0, lever / o.krMyh, 0, 1.0 / o.kdMzh},
        {-s3 / o.kdFxh, -s6 / o.kdFxh, 0, -lever * s6 / o.krMyh, -lever * s3 / o.krMyh, 1.0 / o.kdMzh},
        {s3 / o.kdFxh, -s6 / o.kdFxh, 0, lever * s6 / o.krMyh, lever * s3 / o.krMyh, 1.0 / o.kdMzh}};
    for (int i = 0; i < 6; ++i)
        for (int j = 0; j < 6; ++j) o.G[i][j] = Gm[i][j];
    return o;
}

} // namespace oracle
