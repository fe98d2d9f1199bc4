#include "apsam/idta.hpp"

#include <cmath>
#include <cstdio>

namespace apsam {

namespace {

long mod4(long v) { return ((v % 4) + 4) % 4; }

std::string format_double(const char* fmt, double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), fmt, v);
    return buf;
}

DeterminantTrajectory densify(const DeterminantTrajectory& t, int factor) {
    const auto& s = t.samples();
    const auto& gaps = t.gaps();
    std::vector<TrajectorySample> out;
    for (std::size_t i = 0; i + 1 < s.size(); ++i) {
        out.push_back(s[i]);
        bool gap = false;
        for (const auto& g : gaps) gap = gap || (g.omega > s[i].omega && g.omega < s[i + 1].omega);
        if (gap) continue;
        for (int k = 1; k < factor; ++k) {
            const double w = s[i].omega + (s[i + 1].omega - s[i].omega) * k / factor;
            const Complex v = t.value_at(w);
            out.push_back({w, v.real(), v.imag()});
        }
    }
    out.push_back(s.back());
    return {std::move(out), t.form(), gaps};
}

}  // namespace

IdtaCurve build_idta(const std::vector<Crossing>& crossings) {
    IdtaCurve curve;
    if (crossings.empty()) return curve;
    curve.first_kind = crossings.front().kind;
    long prev = label(crossings.front().kind);
    curve.points.push_back({0, crossings.front().kind, prev, crossings.front().omega_cross});
    for (std::size_t k = 1; k < crossings.size(); ++k) {
        const long l = label(crossings[k].kind);
        long next = 0;
        bool found = false;
        for (const long c : {prev - 1, prev, prev + 1}) {
            if (mod4(c) == mod4(l)) {
                next = c;
                found = true;
                break;
            }
        }
        if (!found) {
            throw Error(ErrorCode::NonAdjacentSequence,
                        "crossing " + std::to_string(k) + " jumps to the opposite half-axis near " +
                            format_double("%.6g rad/s", crossings[k].omega_cross));
        }
        curve.points.push_back({k, crossings[k].kind, next, crossings[k].omega_cross});
        prev = next;
    }
    return curve;
}

StableRegion stable_region(CrossingKind first) {
    const long l = label(first);
    return {l - 1, l + 1};
}

StabilityVerdict assess(const IdtaCurve& curve) {
    StabilityVerdict v;
    if (curve.empty()) {
        v.diagnostics.emplace_back("no-crossings");
        return v;
    }
    v.first_coordinate = curve.points.front().coordinate;
    v.last_coordinate = curve.points.back().coordinate;
    const long diff = v.last_coordinate - v.first_coordinate;
    v.winding = std::lround(static_cast<double>(diff) / 4.0);
    if (std::abs(diff - 4 * v.winding) > 1) {
        throw Error(ErrorCode::InconsistentCurve,
                    "first and last coordinates are neither equal nor adjacent (difference " + std::to_string(diff) +
                        ")");
    }
    v.stable = v.winding == 0;
    return v;
}

Assessment assess_trajectory(const DeterminantTrajectory& t, const AssessmentOptions& opts) {
    Assessment a;
    a.boundary = boundary_settlement(t);
    a.scan = detect_crossings(t, opts.crossings);
    try {
        a.curve = build_idta(a.scan.crossings);
    } catch (const Error& e) {
        if (e.code() != ErrorCode::NonAdjacentSequence || opts.refinement_factor < 2) throw;
        a.scan = detect_crossings(densify(t, opts.refinement_factor), opts.crossings);
        a.curve = build_idta(a.scan.crossings);
        a.refined = true;
    }
    a.verdict = assess(a.curve);

    auto& d = a.verdict.diagnostics;
    if (!a.scan.origin_passes.empty()) {
        a.verdict.marginal = true;
        d.push_back("origin-pass at " + format_double("%.6g rad/s", a.scan.origin_passes.front().omega));
    }
    if (!a.scan.ambiguous_intervals.empty()) {
        d.push_back(std::to_string(a.scan.ambiguous_intervals.size()) + " ambiguous interval(s)");
    }
    if (a.scan.low_resolution) d.emplace_back("low-resolution");
    if (a.refined) d.emplace_back("refined after non-adjacent sequence");
    if (!a.boundary.settled) {
        d.push_back("boundary not settled (deviation " + format_double("%.3g", a.boundary.deviation) + ")");
    }
    std::size_t bridged = 0;
    for (const auto& c : a.scan.crossings) bridged += c.bridged ? 1 : 0;
    if (bridged > 0) d.push_back(std::to_string(bridged) + " crossing(s) bridged across grid poles");
    return a;
}

}  // namespace apsam
