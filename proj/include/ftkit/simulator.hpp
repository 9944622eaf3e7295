#pragma once
#include <cmath>
#include <random>
#include <string>
#include <vector>
#include "calibration.hpp"
#include "sensitivity.hpp"

// Synthetic photocoupler traces: wrench profile -> G -> gap -> nonlinear
// optical response + Gaussian noise + 16-bit quantization.

namespace ftkit {

struct OpticalResponse {
    // v(d) = v0 + a*exp(-d/lambda) + b*d, d = gap in mm
    double v0 = 0.2;
    double a = 3.0;
    double lambda = 0.45;  // mm
    double b = -0.15;      // V/mm
    double window = 1.0;   // working window, mm
    double gap0 = 0.5;     // nominal gap at rest, mm
    double noise_sigma = 0.0;  // volts
    double v_max = 3.3;

    double volts(double gap_mm) const {
        return v0 + a * std::exp(-gap_mm / lambda) + b * gap_mm;
    }
    double quant_step() const { return v_max / 65535.0; }  // 2^16 - 1 codes

    // numerical inverse over the working window (strictly monotone there)
    double gap_from_volts(double v) const {
        double lo = 0, hi = window;
        for (int i = 0; i < 200; ++i) {
            double mid = 0.5 * (lo + hi);
            // response is decreasing in gap for the default presets
            if (volts(mid) > v) lo = mid; else hi = mid;
        }
        return 0.5 * (lo + hi);
    }

    static OpticalResponse vertical_preset() {
        OpticalResponse o;
        o.window = 1.0;
        o.gap0 = 0.5;
        return o;
    }
    static OpticalResponse horizontal_preset() {
        OpticalResponse o;
        o.window = 0.5;
        o.gap0 = 0.25;
        o.lambda = 0.25;
        return o;
    }
};

struct LoadSample {
    double t = 0;
    Wrench ref = Wrench::Zero();       // commanded/reported ground truth
    Wrench physical = Wrench::Zero();  // what the elastomer actually sees
};

struct LoadProfile {
    std::vector<LoadSample> samples;
};

// Triangular ramp 0 -> amp -> 0 on one axis, preceded by an unloaded
// zero-offset window. hysteresis_frac adds a closed loop on the unloading
// branch: physical = ref + frac*FS*sin(pi*ref/amp).
inline LoadProfile ramp_profile(int axis, double amp, double duration = 20.0,
                                double dt = 0.01, double unloaded = 1.0,
                                double hysteresis_frac = 0.0,
                                double full_scale = 0.0) {
    LoadProfile p;
    if (full_scale == 0) full_scale = std::fabs(amp);
    for (double t = 0; t < unloaded + duration; t += dt) {
        LoadSample s;
        s.t = t;
        double load = 0;
        bool unloading_branch = false;
        if (t >= unloaded) {
            double ph = (t - unloaded) / duration;  // 0..1
            load = amp * (ph < 0.5 ? 2 * ph : 2 * (1 - ph));
            unloading_branch = ph >= 0.5;
        }
        s.ref(axis) = load;
        s.physical = s.ref;
        if (unloading_branch && hysteresis_frac != 0 && amp != 0)
            s.physical(axis) += hysteresis_frac * full_scale * std::sin(M_PI * load / amp);
        p.samples.push_back(s);
    }
    return p;
}

// Sequential single-axis ramps over all six axes (rank-6 excitation).
inline LoadProfile calibration_profile(const std::array<double, 6>& amps,
                                       double per_axis = 8.0, double dt = 0.01) {
    LoadProfile p;
    double t0 = 0;
    for (int axis = 0; axis < 6; ++axis) {
        LoadProfile r = ramp_profile(axis, amps[axis], per_axis, dt, axis == 0 ? 1.0 : 0.0);
        for (auto s : r.samples) {
            s.t += t0;
            p.samples.push_back(s);
        }
        t0 = p.samples.back().t + dt;
    }
    return p;
}

// Smoothed square wave at ~2 steps/s: stance Fz plus a small tangential load.
inline LoadProfile gait_profile(double fz_amp, double duration, double dt = 0.002,
                                double step_hz = 2.0) {
    LoadProfile p;
    for (double t = 0; t < duration; t += dt) {
        double ph = std::fmod(t * step_hz, 1.0);
        double sq = 1.0 / (1.0 + std::exp(-40 * (0.5 - std::fabs(2 * ph - 1))));
        LoadSample s;
        s.t = t;
        s.ref(2) = -fz_amp * sq;
        s.ref(0) = 0.1 * fz_amp * sq * std::sin(2 * M_PI * ph);
        s.physical = s.ref;
        p.samples.push_back(s);
    }
    return p;
}

// Gait with impact spikes of k x nominal load at each touchdown.
inline LoadProfile impact_profile(double fz_amp, double impact_factor,
                                  double duration, double dt = 0.002,
                                  double step_hz = 2.0) {
    LoadProfile p = gait_profile(fz_amp, duration, dt, step_hz);
    for (auto& s : p.samples) {
        double ph = std::fmod(s.t * step_hz, 1.0);
        if (ph < 0.05) {
            double spike = (impact_factor - 1.0) * fz_amp * std::exp(-ph / 0.01);
            s.ref(2) -= spike;
            s.physical = s.ref;
        }
    }
    return p;
}

struct TraceResult {
    std::vector<RawSample> samples;
    long clipped = 0;  // WindowExceeded count
};

// Channel optics: 0..2 vertical preset, 3..5 horizontal preset unless
// overridden.
struct SimOptics {
    std::array<OpticalResponse, 6> ch;
    SimOptics() {
        for (int i = 0; i < 3; ++i) ch[i] = OpticalResponse::vertical_preset();
        for (int i = 3; i < 6; ++i) ch[i] = OpticalResponse::horizontal_preset();
    }
    void set_noise(double sigma) {
        for (auto& o : ch) o.noise_sigma = sigma;
    }
    // sigma for a given SNR (dB) relative to each channel's modulation span
    void set_snr_db(double snr_db) {
        for (auto& o : ch) {
            double span = std::fabs(o.volts(0.0) - o.volts(o.window));
            o.noise_sigma = span / std::pow(10.0, snr_db / 20.0);
        }
    }
};

inline TraceResult simulate_trace(const GMatrix& g, const LoadProfile& profile,
                                  const SimOptics& optics, unsigned seed) {
    TraceResult out;
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (const auto& ls : profile.samples) {
        DisplacementSet d = g.m * ls.physical;  // meters
        RawSample s;
        s.t = ls.t;
        s.has_ref = true;
        s.ref = ls.ref;
        for (int i = 0; i < 6; ++i) {
            const OpticalResponse& o = optics.ch[i];
            double gap = o.gap0 + d(i) * 1e3;  // mm
            if (gap < 0 || gap > o.window) {
                gap = std::clamp(gap, 0.0, o.window);
                ++out.clipped;
            }
            double v = o.volts(gap);
            if (o.noise_sigma > 0) v += o.noise_sigma * gauss(rng);
            double q = o.quant_step();
            v = std::clamp(v, 0.0, o.v_max);
            v = std::round(v / q) * q;
            s.v[i] = v;
        }
        out.samples.push_back(s);
    }
    return out;
}

// Set per-channel noise from the requested SNR relative to the noiseless
// voltage swing this profile actually produces on each channel (channels a
// profile never exercises stay noise-free at their quantization floor).
inline void apply_profile_snr(const GMatrix& g, const LoadProfile& profile,
                              SimOptics& optics, double snr_db) {
    std::array<double, 6> vmin, vmax;
    vmin.fill(1e300);
    vmax.fill(-1e300);
    for (const auto& ls : profile.samples) {
        DisplacementSet d = g.m * ls.physical;
        for (int i = 0; i < 6; ++i) {
            double gap = std::clamp(optics.ch[i].gap0 + d(i) * 1e3, 0.0,
                                    optics.ch[i].window);
            double v = optics.ch[i].volts(gap);
            vmin[i] = std::min(vmin[i], v);
            vmax[i] = std::max(vmax[i], v);
        }
    }
    for (int i = 0; i < 6; ++i) {
        double span = vmax[i] - vmin[i];
        optics.ch[i].noise_sigma = span > 0 ? span / std::pow(10.0, snr_db / 20.0) : 0.0;
    }
}

struct DriftModel {
    // per-axis wrench offset accumulated per impact event, as fraction of the
    // given full scale
    std::array<double, 6> offset_per_impact{};
    std::array<double, 6> full_scale = {620, 590, 1965, 13.7, 13.6, 19.6};

    static DriftModel commercial_preset(int n_impacts) {
        // Tuned so the end-of-run offsets land near the observed commercial
        // unit's 2.27 / 0.03 / 3.93 % FS figures.
        DriftModel d;
        d.offset_per_impact[0] = 0.0227 / n_impacts;
        d.offset_per_impact[1] = 0.0003 / n_impacts;
        d.offset_per_impact[2] = 0.0393 / n_impacts;
        return d;
    }
};

struct DriftScenario {
    TraceResult drifting;
    TraceResult stable;
    Wrench final_offset = Wrench::Zero();  // ground-truth injected offset
};

inline DriftScenario drift_scenario(const GMatrix& g, const LoadProfile& base,
                                    const DriftModel& drift, const SimOptics& optics,
                                    unsigned seed, double step_hz = 2.0) {
    DriftScenario out;
    out.stable = simulate_trace(g, base, optics, seed);
    LoadProfile drifted = base;
    int impacts = 0;
    double last_ph = 1.0;
    for (auto& s : drifted.samples) {
        double ph = std::fmod(s.t * step_hz, 1.0);
        if (ph < last_ph) ++impacts;  // new step cycle
        last_ph = ph;
        for (int a = 0; a < 6; ++a)
            s.physical(a) += impacts * drift.offset_per_impact[a] * drift.full_scale[a];
    }
    for (int a = 0; a < 6; ++a)
        out.final_offset(a) = impacts * drift.offset_per_impact[a] * drift.full_scale[a];
    out.drifting = simulate_trace(g, drifted, optics, seed + 1);
    return out;
}

} // namespace ftkit
