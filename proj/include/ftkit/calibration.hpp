#pragma once
#include <algorithm>
#include <cmath>
#include <vector>
#include "sensitivity.hpp"

// Voltage linearization (7th-order least squares), displacement-to-wrench
// decoupling, and the error-metric battery.

namespace ftkit {

struct RawSample {
    double t = 0;           // s
    std::array<double, 6> v{};  // volts
    bool has_ref = false;
    Wrench ref = Wrench::Zero();
};

struct PolyModel {
    std::vector<double> coeffs;  // c0..c_degree on the normalized abscissa
    double v_lo = 0, v_hi = 1;   // fitted voltage domain
    double residual_rms = 0;     // mm

    bool in_domain(double v) const { return v >= v_lo && v <= v_hi; }
};

// Horner evaluation on t = (2v - lo - hi)/(hi - lo); extrapolation is the
// caller's DomainExceeded flag via in_domain().
inline double poly_eval(const PolyModel& m, double v) {
    double t = (2 * v - m.v_lo - m.v_hi) / (m.v_hi - m.v_lo);
    double y = 0;
    for (size_t i = m.coeffs.size(); i-- > 0;) y = y * t + m.coeffs[i];
    return y;
}

// Least-squares polynomial fit volts -> mm with abscissa normalized to
// [-1, 1] and a QR solve (no raw monomial normal equations).
inline PolyModel fit_photocoupler_poly(const std::vector<std::pair<double, double>>& samples,
                                       int degree = 7) {
    if (degree < 0) throw ConfigError("degree must be non-negative");
    std::vector<double> xs;
    for (auto& s : samples) xs.push_back(s.first);
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
    if ((int)xs.size() < degree + 1)
        throw Underdetermined("need at least degree+1 distinct abscissae");

    PolyModel m;
    m.v_lo = xs.front();
    m.v_hi = xs.back();
    const int n = (int)samples.size(), k = degree + 1;
    Eigen::MatrixXd A(n, k);
    Eigen::VectorXd y(n);
    for (int i = 0; i < n; ++i) {
        double t = (2 * samples[i].first - m.v_lo - m.v_hi) / (m.v_hi - m.v_lo);
        double p = 1;
        for (int j = 0; j < k; ++j) { A(i, j) = p; p *= t; }
        y(i) = samples[i].second;
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& sv = svd.singularValues();
    if (sv(sv.size() - 1) <= 0 || sv(0) / sv(sv.size() - 1) > 1e12)
        throw IllConditioned("polynomial design matrix condition exceeds 1e12");
    Eigen::VectorXd c = svd.solve(y);
    m.coeffs.assign(c.data(), c.data() + k);
    m.residual_rms = std::sqrt((A * c - y).squaredNorm() / n);
    return m;
}

inline double voltage_to_displacement(const PolyModel& m, double v) {
    return poly_eval(m, v);  // mm; extrapolation flagged via m.in_domain(v)
}

struct DecouplingModel {
    Mat6 M = Mat6::Zero();       // displacement (mm) -> wrench
    double excitation_cond = 0;  // condition of the displacement ensemble
    double fit_rms = 0;
};

// Least squares over sample pairs: minimize sum ||M d_i - w_i||^2.
inline DecouplingModel fit_decoupling(const std::vector<Vec6>& displacements,
                                      const std::vector<Wrench>& refs) {
    if (displacements.size() != refs.size())
        throw LengthMismatch("displacement/wrench series length mismatch");
    const int n = (int)displacements.size();
    if (n < 6) throw DeficientExcitation("need at least 6 samples");
    Eigen::MatrixXd D(n, 6), W(n, 6);
    for (int i = 0; i < n; ++i) {
        D.row(i) = displacements[i].transpose();
        W.row(i) = refs[i].transpose();
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(D, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& sv = svd.singularValues();
    if (sv(5) < 1e-10 * sv(0))
        throw DeficientExcitation("displacement ensemble rank < 6");
    DecouplingModel m;
    m.excitation_cond = sv(0) / sv(5);
    // solve D * M^T = W column-wise
    Eigen::MatrixXd Mt(6, 6);
    for (int j = 0; j < 6; ++j) Mt.col(j) = svd.solve(W.col(j));
    m.M = Mt.transpose();
    m.fit_rms = std::sqrt((D * Mt - W).squaredNorm() / n);
    return m;
}

struct CalibrationModel {
    std::array<PolyModel, 6> poly;
    DecouplingModel dec;
    Vec6 zero_offset = Vec6::Zero();  // mm, captured from the unloaded window
};

inline Wrench reconstruct_wrench(const CalibrationModel& cal, const RawSample& s) {
    Vec6 d;
    for (int i = 0; i < 6; ++i) d(i) = poly_eval(cal.poly[i], s.v[i]);
    return cal.dec.M * (d - cal.zero_offset);
}

struct SensingRange {
    // per-axis [min, max], order (Fx, Fy, Fz, Mx, My, Mz)
    std::array<std::pair<double, double>, 6> axis = {{
        {-620, 620}, {-590, 590}, {-1965, 1965},
        {-13.7, 13.7}, {-13.6, 13.6}, {-19.6, 19.6}}};

    double full_scale(int i) const { return axis[i].second; }
};

struct AxisError {
    double mean_pct = 0, std_pct = 0, max_pct = 0;  // % of full scale
    double rmse = 0;                                 // native units
    double nonlinearity_pct = 0;
    double hysteresis_pct = 0;
};

using ErrorReport = std::array<AxisError, 6>;

namespace detail {

// Split a ramp trace into monotone loading/unloading segments by the sign of
// d(ref)/dt with a deadband of 0.5% FS.
inline std::vector<int> ramp_direction(const std::vector<double>& ref, double fs) {
    const double dead = 0.005 * fs;
    std::vector<int> dir(ref.size(), 0);
    int cur = 0;
    double anchor = ref.empty() ? 0 : ref[0];
    for (size_t i = 1; i < ref.size(); ++i) {
        double d = ref[i] - anchor;
        if (d > dead) { cur = 1; anchor = ref[i]; }
        else if (d < -dead) { cur = -1; anchor = ref[i]; }
        else if ((cur > 0 && ref[i] > anchor) || (cur < 0 && ref[i] < anchor)) anchor = ref[i];
        dir[i] = cur;
    }
    if (!dir.empty()) dir[0] = dir.size() > 1 ? dir[1] : 0;
    return dir;
}

} // namespace detail

inline ErrorReport error_metrics(const std::vector<Wrench>& pred,
                                 const std::vector<Wrench>& ref,
                                 const SensingRange& range = SensingRange{}) {
    if (pred.size() != ref.size())
        throw LengthMismatch("pred/ref series length mismatch");
    const int n = (int)pred.size();
    if (n == 0) throw LengthMismatch("empty series");
    ErrorReport rep{};
    for (int a = 0; a < 6; ++a) {
        const double fs = range.full_scale(a);
        double sum = 0, mx = 0, se = 0;
        std::vector<double> rv(n), pv(n);
        for (int i = 0; i < n; ++i) {
            rv[i] = ref[i](a);
            pv[i] = pred[i](a);
            double e = pv[i] - rv[i];
            double pct = e / fs * 100;
            sum += pct;
            mx = std::max(mx, std::fabs(pct));
            se += e * e;
        }
        AxisError& ae = rep[a];
        ae.mean_pct = sum / n;
        double var = 0;
        for (int i = 0; i < n; ++i) {
            double d = (pv[i] - rv[i]) / fs * 100 - ae.mean_pct;
            var += d * d;
        }
        ae.std_pct = std::sqrt(var / n);
        ae.max_pct = mx;
        ae.rmse = std::sqrt(se / n);

        auto dir = detail::ramp_direction(rv, fs);
        // nonlinearity: max deviation of pred from its best-fit line over the
        // loading ramp, % FS
        {
            double sx = 0, sy = 0, sxx = 0, sxy = 0;
            int m = 0;
            for (int i = 0; i < n; ++i)
                if (dir[i] > 0) { sx += rv[i]; sy += pv[i]; sxx += rv[i] * rv[i]; sxy += rv[i] * pv[i]; ++m; }
            if (m >= 2 && sxx * m - sx * sx > 1e-30) {
                double slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
                double icpt = (sy - slope * sx) / m;
                double dev = 0;
                for (int i = 0; i < n; ++i)
                    if (dir[i] > 0) dev = std::max(dev, std::fabs(pv[i] - slope * rv[i] - icpt));
                ae.nonlinearity_pct = dev / fs * 100;
            }
        }
        // hysteresis: max loading/unloading gap of the prediction error at
        // equal reference load, found by binning the reference axis
        {
            constexpr int nb = 64;
            double lo = *std::min_element(rv.begin(), rv.end());
            double hi = *std::max_element(rv.begin(), rv.end());
            if (hi > lo) {
                std::vector<double> up(nb, 0), dn(nb, 0);
                std::vector<int> cu(nb, 0), cd(nb, 0);
                for (int i = 0; i < n; ++i) {
                    int bin = std::min(nb - 1, (int)((rv[i] - lo) / (hi - lo) * nb));
                    if (dir[i] > 0) { up[bin] += pv[i] - rv[i]; ++cu[bin]; }
                    else if (dir[i] < 0) { dn[bin] += pv[i] - rv[i]; ++cd[bin]; }
                }
                double gap = 0;
                for (int bIdx = 0; bIdx < nb; ++bIdx)
                    if (cu[bIdx] && cd[bIdx])
                        gap = std::max(gap, std::fabs(up[bIdx] / cu[bIdx] - dn[bIdx] / cd[bIdx]));
                ae.hysteresis_pct = gap / fs * 100;
            }
        }
    }
    return rep;
}

struct CrosstalkEntry {
    int excited_axis = 0;
    std::array<double, 6> offaxis_pct{};  // % of excited-axis full scale
    std::array<double, 6> rmse{};
};

inline CrosstalkEntry crosstalk_metrics(const std::vector<Wrench>& pred,
                                        int excited_axis,
                                        const SensingRange& range = SensingRange{}) {
    CrosstalkEntry e;
    e.excited_axis = excited_axis;
    const double fs = range.full_scale(excited_axis);
    for (int a = 0; a < 6; ++a) {
        double mx = 0, se = 0;
        for (const auto& w : pred) {
            if (a != excited_axis) mx = std::max(mx, std::fabs(w(a)));
            se += w(a) * w(a);
        }
        e.offaxis_pct[a] = (a == excited_axis) ? 0 : mx / fs * 100;
        e.rmse[a] = pred.empty() ? 0 : std::sqrt(se / pred.size());
    }
    return e;
}

// steps = floor((max - min)/resolution); epsilon absorbs decimal rounding of
// the printed resolutions.
inline long resolution_steps(double lo, double hi, double resolution) {
    if (resolution <= 0) throw ConfigError("resolution must be positive");
    return (long)std::floor((hi - lo) / resolution + 1e-9);
}

inline std::array<long, 6> resolution_steps(const SensingRange& range,
                                            const std::array<double, 6>& resolution) {
    std::array<long, 6> out{};
    for (int i = 0; i < 6; ++i)
        out[i] = resolution_steps(range.axis[i].first, range.axis[i].second, resolution[i]);
    return out;
}

} // namespace ftkit
