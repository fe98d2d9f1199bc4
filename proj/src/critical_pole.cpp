#include "apsam/critical_pole.hpp"

#include <algorithm>
#include <cmath>

namespace apsam {

std::optional<CandidateFrequency> find_candidate_frequency(const DeterminantTrajectory& t) {
    const auto& s = t.samples();
    const auto& gaps = t.gaps();
    std::optional<CandidateFrequency> best;
    for (std::size_t i = 0; i + 1 < s.size(); ++i) {
        bool gap = false;
        for (const auto& g : gaps) gap = gap || (g.omega > s[i].omega && g.omega < s[i + 1].omega);
        if (gap) continue;
        const double pa = s[i].im;
        const double pb = s[i + 1].im;
        double tcross = -1.0;
        if (pa != 0.0 && pb != 0.0) {
            if ((pa < 0.0) != (pb < 0.0)) tcross = pa / (pa - pb);
        } else if (pb == 0.0 && pa != 0.0) {
            tcross = 1.0;
        } else if (pa == 0.0 && i == 0) {
            tcross = 0.0;
        }
        if (tcross < 0.0) continue;
        const double w = s[i].omega + tcross * (s[i + 1].omega - s[i].omega);
        const double re = s[i].re + tcross * (s[i + 1].re - s[i].re);
        if (!best || std::abs(re) < best->magnitude) best = CandidateFrequency{w, i, std::abs(re)};
    }
    return best;
}

LocalSlope local_slope(const DeterminantTrajectory& t, double omega_star, const SlopeOptions& opts) {
    if (t.size() < 2) throw Error(ErrorCode::InsufficientSamples, "slope estimation needs at least 2 samples");
    if (!(opts.step_hz > 0.0) || !(opts.half_window_hz > 0.0)) {
        throw Error(ErrorCode::InvalidArgument, "refinement step and window must be > 0");
    }
    const auto& s = t.samples();
    const double hw = kTwoPi * opts.half_window_hz;
    // Window edges sit on original samples so the refined grid shares their nodes.
    double lo = s.front().omega;
    double hi = s.back().omega;
    for (const auto& x : s) {
        if (x.omega <= omega_star - hw) lo = x.omega;
        if (x.omega >= omega_star + hw) {
            hi = x.omega;
            break;
        }
    }
    const double step = kTwoPi * opts.step_hz;
    const DeterminantTrajectory refined = interpolate(t, opts.method, step, {lo, hi});
    const auto& r = refined.samples();
    if (r.size() < 2) throw Error(ErrorCode::InsufficientSamples, "refined window has fewer than 2 samples");
    std::size_t j = 0;
    while (j + 2 < r.size() && r[j + 1].omega <= omega_star) ++j;

    LocalSlope out;
    const double dw = r[j + 1].omega - r[j].omega;
    out.a = (r[j + 1].im - r[j].im) / dw;
    out.b = -(r[j + 1].re - r[j].re) / dw;
    if (out.a * out.a + out.b * out.b < 1e-18) {
        throw Error(ErrorCode::FlatSlope, "trajectory is locally flat at the candidate frequency");
    }
    const double u = (omega_star - r[j].omega) / dw;
    out.d_star = r[j].value() + u * (r[j + 1].value() - r[j].value());
    out.window = {lo, hi};
    out.step = step;
    return out;
}

CriticalPoleEstimate estimate_critical_pole(double omega_star, const LocalSlope& slope) {
    const Complex k{slope.a, slope.b};
    if (std::norm(k) < 1e-18) throw Error(ErrorCode::FlatSlope, "degenerate local model");
    const Complex z = Complex{0.0, omega_star} - slope.d_star / k;
    CriticalPoleEstimate e;
    e.sigma = z.real();
    e.omega = z.imag();
    e.a = slope.a;
    e.b = slope.b;
    e.omega_star = omega_star;
    e.d_star = slope.d_star;
    e.tau = std::abs(e.sigma) < 1e-12 ? std::numeric_limits<double>::infinity() : 1.0 / std::abs(e.sigma);
    e.step = slope.step;
    e.window = slope.window;
    return e;
}

double sigma_at_crossing(double re_d, double a, double b) {
    const double n = a * a + b * b;
    if (n < 1e-18) throw Error(ErrorCode::FlatSlope, "degenerate local model");
    return -re_d * a / n;
}

std::optional<CriticalPoleEstimate> critical_pole(const DeterminantTrajectory& t, const SlopeOptions& opts) {
    const auto candidate = find_candidate_frequency(t);
    if (!candidate) return std::nullopt;
    CriticalPoleEstimate e = estimate_critical_pole(candidate->omega, local_slope(t, candidate->omega, opts));
    e.method = opts.method;
    return e;
}

}  // namespace apsam
