#pragma once
#include <random>
#include "calibration.hpp"
#include "simulator.hpp"

// End-to-end glue: bench-style photocoupler characterization, per-channel
// linearization, zero-offset capture and decoupling fit from a trace.

namespace ftkit {

struct PipelineConfig {
    int poly_degree = 7;
    double zero_window = 1.0;   // seconds of trace assumed unloaded
    int char_points = 400;      // characterization sweep size per channel
    unsigned char_seed = 99;    // noise seed for the synthetic bench sweep
    bool char_noise = true;     // reuse each channel's noise_sigma on the sweep
};

// Synthetic bench sweep: (volts, gap mm) pairs across the working window.
inline std::vector<std::pair<double, double>> characterize_channel(
        const OpticalResponse& o, int n_points, unsigned seed, bool with_noise) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::vector<std::pair<double, double>> pairs;
    for (int i = 0; i < n_points; ++i) {
        double gap = o.window * i / (n_points - 1.0);
        double v = o.volts(gap);
        if (with_noise && o.noise_sigma > 0) v += o.noise_sigma * gauss(rng);
        pairs.emplace_back(v, gap);
    }
    return pairs;
}

inline CalibrationModel fit_pipeline(const std::vector<RawSample>& trace,
                                     const SimOptics& optics,
                                     const PipelineConfig& cfg = PipelineConfig{}) {
    if (trace.empty()) throw Underdetermined("empty trace");
    CalibrationModel cal;
    for (int i = 0; i < 6; ++i) {
        auto pairs = characterize_channel(optics.ch[i], cfg.char_points,
                                          cfg.char_seed + i, cfg.char_noise);
        cal.poly[i] = fit_photocoupler_poly(pairs, cfg.poly_degree);
    }
    // zero offset from the unloaded window at the start of the trace
    const double t0 = trace.front().t;
    Vec6 acc = Vec6::Zero();
    int n0 = 0;
    for (const auto& s : trace) {
        if (s.t - t0 > cfg.zero_window) break;
        for (int i = 0; i < 6; ++i) acc(i) += poly_eval(cal.poly[i], s.v[i]);
        ++n0;
    }
    if (n0 == 0) throw Underdetermined("no samples in the zero-offset window");
    cal.zero_offset = acc / n0;

    std::vector<Vec6> disp;
    std::vector<Wrench> refs;
    for (const auto& s : trace) {
        if (!s.has_ref) continue;
        Vec6 d;
        for (int i = 0; i < 6; ++i) d(i) = poly_eval(cal.poly[i], s.v[i]);
        disp.push_back(d - cal.zero_offset);
        refs.push_back(s.ref);
    }
    cal.dec = fit_decoupling(disp, refs);
    return cal;
}

inline std::vector<Wrench> reconstruct_series(const CalibrationModel& cal,
                                              const std::vector<RawSample>& trace) {
    std::vector<Wrench> out;
    out.reserve(trace.size());
    for (const auto& s : trace) out.push_back(reconstruct_wrench(cal, s));
    return out;
}

} // namespace ftkit
