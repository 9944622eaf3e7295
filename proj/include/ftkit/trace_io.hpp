#pragma once
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>
#include "calibration.hpp"
#include "simulator.hpp"

// Shared trace CSV format. Header is bit-exact:
//   t,v1,v2,v3,v4,v5,v6,Fx,Fy,Fz,Mx,My,Mz
// The six wrench columns may be absent for inference-only traces.

namespace ftkit {

inline constexpr const char* kTraceHeader = "t,v1,v2,v3,v4,v5,v6,Fx,Fy,Fz,Mx,My,Mz";
inline constexpr const char* kTraceHeaderNoRef = "t,v1,v2,v3,v4,v5,v6";

inline std::string fmt_g17(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline void write_trace(std::ostream& os, const std::vector<RawSample>& samples) {
    bool has_ref = !samples.empty() && samples.front().has_ref;
    os << (has_ref ? kTraceHeader : kTraceHeaderNoRef) << "\n";
    for (const auto& s : samples) {
        os << fmt_g17(s.t);
        for (double v : s.v) os << ',' << fmt_g17(v);
        if (has_ref)
            for (int i = 0; i < 6; ++i) os << ',' << fmt_g17(s.ref(i));
        os << "\n";
    }
}

inline void write_trace(const std::string& path, const std::vector<RawSample>& samples) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw ConfigError("cannot open trace for writing: " + path);
    write_trace(f, samples);
}

inline std::vector<RawSample> read_trace(std::istream& is) {
    std::string line;
    if (!std::getline(is, line)) throw ConfigError("empty trace file");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    bool has_ref;
    if (line == kTraceHeader) has_ref = true;
    else if (line == kTraceHeaderNoRef) has_ref = false;
    else throw ConfigError("bad trace header: " + line);

    std::vector<RawSample> out;
    size_t lineno = 1;
    while (std::getline(is, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::istringstream ss(line);
        std::vector<double> vals;
        std::string tok;
        while (std::getline(ss, tok, ',')) vals.push_back(std::stod(tok));
        const size_t want = has_ref ? 13 : 7;
        if (vals.size() != want)
            throw ConfigError("trace line " + std::to_string(lineno) +
                              ": expected " + std::to_string(want) + " fields");
        RawSample s;
        s.t = vals[0];
        for (int i = 0; i < 6; ++i) s.v[i] = vals[1 + i];
        s.has_ref = has_ref;
        if (has_ref)
            for (int i = 0; i < 6; ++i) s.ref(i) = vals[7 + i];
        if (!out.empty() && s.t < out.back().t)
            throw ConfigError("trace timestamps must be non-decreasing");
        out.push_back(s);
    }
    return out;
}

inline std::vector<RawSample> read_trace(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw ConfigError("cannot open trace: " + path);
    return read_trace(f);
}

} // namespace ftkit
