#pragma once
// shared test helpers
#include <random>
#include "ftkit/optimizer.hpp"

namespace testutil {

using namespace ftkit;

// Random design satisfying the geometric constraints and the sensor windows.
inline DesignParams random_feasible(std::mt19937_64& rng) {
    Bounds b;
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    MaterialSpec mat;
    LoadEnvelope env;
    for (;;) {
        DesignParams p;
        for (int i = 0; i < 7; ++i)
            p[i] = b.lo[i] + uni(rng) * (b.hi[i] - b.lo[i]);
        ViolationReport v = feasibility(p, mat, env, b);
        bool geo = v.g[0] < 0 && v.g[1] < 0 && v.g[2] < 0;
        if (!geo) continue;
        double l1p = p.l1 + p.b2 / 2;
        if (!(p.rs2 > p.r && p.rs2 < p.r + l1p)) continue;
        if (!(p.rs1 > p.r && p.rs1 < p.r + l1p)) continue;
        return p;
    }
}

inline DesignParams table2_row1() {
    DesignParams p;
    p.l1 = 10.97; p.l2 = 11.00; p.b1 = 3.656; p.b2 = 0.5009;
    p.h = 7.536; p.r = 7.761; p.rs2 = 12.64;
    return p;
}

inline DesignParams table2_selected() {
    DesignParams p;
    p.l1 = 14.24; p.l2 = 11.00; p.b1 = 3.039; p.b2 = 0.5535;
    p.h = 6.690; p.r = 4.437; p.rs2 = 8.716;
    return p;
}

} // namespace testutil
