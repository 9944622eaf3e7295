#pragma once
#include <Eigen/Dense>
#include "errors.hpp"

namespace ftkit {

using Vec6 = Eigen::Matrix<double, 6, 1>;
using Mat6 = Eigen::Matrix<double, 6, 6>;

// Wrench ordering: (Fx, Fy, Fz, Mx, My, Mz). Forces in N, moments in N*m.
using Wrench = Vec6;

// Photocoupler gap displacements in meters; d1..d3 vertical, d4..d6 horizontal.
using DisplacementSet = Vec6;

// Design variables in millimeters (input convention); converted to SI once
// in derive_sections.
struct DesignParams {
    double l1 = 10.0;   // spoke length, mm
    double l2 = 11.0;   // cross-member length, mm
    double b1 = 3.0;    // spoke width, mm
    double b2 = 0.6;    // cross-member width, mm
    double h  = 7.0;    // beam height, mm
    double r  = 5.0;    // loading-table radius, mm
    double rs2 = 10.0;  // horizontal photocoupler radius, mm
    double rs1 = 12.0;  // vertical photocoupler radius, mm (fixed by layout)
    double c   = 0.0;   // horizontal sensor height offset from mid-height, mm

    double operator[](int i) const {
        const double* f[7] = {&l1, &l2, &b1, &b2, &h, &r, &rs2};
        return *f[i];
    }
    double& operator[](int i) {
        double* f[7] = {&l1, &l2, &b1, &b2, &h, &r, &rs2};
        return *f[i];
    }
};

struct MaterialSpec {
    double E = 71.7e9;               // Pa (AL7075-T6 default)
    double G_shear = 26.9e9;         // Pa
    double sigma_allowable = 250e6;  // Pa

    void validate() const {
        if (E <= 0 || G_shear <= 0 || G_shear >= E || sigma_allowable <= 0)
            throw NonPositiveDimension("invalid material spec");
    }
};

struct LoadEnvelope {
    double F_rated = 520.0;  // N
    double M_rated = 15.6;   // N*m

    void validate() const {
        if (F_rated <= 0 || M_rated <= 0)
            throw NonPositiveDimension("load envelope must be positive");
    }
};

struct StressReport {
    double sigma_bend = 0;
    double sigma_torsion = 0;
    double sigma_allowable = 0;
    bool feasible = false;
};

} // namespace ftkit
