#include "apsam/trajectory.hpp"

#include <algorithm>
#include <cmath>
#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

namespace apsam {

std::string_view to_string(TrajectoryForm form) {
    return form == TrajectoryForm::Admittance ? "admittance-form" : "impedance-form";
}

DeterminantTrajectory::DeterminantTrajectory(std::vector<TrajectorySample> samples, TrajectoryForm form,
                                             std::vector<PoleGap> gaps)
    : samples_(std::move(samples)), form_(form), gaps_(std::move(gaps)) {
    for (std::size_t k = 0; k < samples_.size(); ++k) {
        const auto& s = samples_[k];
        if (!std::isfinite(s.omega) || !std::isfinite(s.re) || !std::isfinite(s.im)) {
            throw Error(ErrorCode::InvalidArgument, "trajectory sample is not finite");
        }
        if (k > 0 && !(s.omega > samples_[k - 1].omega)) {
            throw Error(ErrorCode::InvalidArgument, "trajectory frequencies must strictly increase");
        }
    }
    std::sort(gaps_.begin(), gaps_.end(), [](const PoleGap& a, const PoleGap& b) { return a.omega < b.omega; });
}

Complex DeterminantTrajectory::value_at(double omega) const {
    if (samples_.empty()) throw Error(ErrorCode::InsufficientSamples, "empty trajectory");
    if (omega <= samples_.front().omega) return samples_.front().value();
    if (omega >= samples_.back().omega) return samples_.back().value();
    const auto it = std::upper_bound(samples_.begin(), samples_.end(), omega,
                                     [](double w, const TrajectorySample& s) { return w < s.omega; });
    const auto& b = *it;
    const auto& a = *(it - 1);
    const double t = (omega - a.omega) / (b.omega - a.omega);
    return a.value() + t * (b.value() - a.value());
}

double DeterminantTrajectory::max_magnitude() const {
    double m = 0.0;
    for (const auto& s : samples_) m = std::max(m, std::abs(s.value()));
    return m;
}

DeterminantTrajectory DeterminantTrajectory::scaled(double k) const {
    auto out = samples_;
    for (auto& s : out) {
        s.re *= k;
        s.im *= k;
    }
    return {std::move(out), form_, gaps_};
}

DeterminantTrajectory DeterminantTrajectory::mirrored() const {
    std::vector<TrajectorySample> out(samples_.rbegin(), samples_.rend());
    for (auto& s : out) s.omega = -s.omega;
    std::vector<PoleGap> gaps = gaps_;
    for (auto& g : gaps) g.omega = -g.omega;
    return {std::move(out), form_, std::move(gaps)};
}

DeterminantTrajectory DeterminantTrajectory::restricted(double lo, double hi) const {
    std::vector<TrajectorySample> out;
    for (const auto& s : samples_) {
        if (s.omega >= lo && s.omega <= hi) out.push_back(s);
    }
    std::vector<PoleGap> gaps;
    for (const auto& g : gaps_) {
        if (g.omega > lo && g.omega < hi) gaps.push_back(g);
    }
    return {std::move(out), form_, std::move(gaps)};
}

// ---------------------------------------------------------------------------
// Determinant construction

namespace {

bool near_pole(double omega, const GridParams& grid) {
    for (const double p : grid_pole_frequencies(grid)) {
        if (std::abs(omega - p) <= 1e-9 * std::max(1.0, grid.omega1)) return true;
    }
    return false;
}

// Order of the pole between samples k and k + 1, read from how fast |D|
// grows towards it on each side (|D| ~ 1/|w - p|^order).
int pole_order(const std::vector<TrajectorySample>& s, std::size_t k, double p) {
    if (k < 1 || k + 2 >= s.size()) return 1;
    auto growth = [p](const TrajectorySample& near, const TrajectorySample& far) {
        const double ratio = std::abs(near.value()) / std::abs(far.value());
        return std::log(ratio) / std::log(std::abs(far.omega - p) / std::abs(near.omega - p));
    };
    const double order = 0.5 * (growth(s[k], s[k - 1]) + growth(s[k + 1], s[k + 2]));
    if (!std::isfinite(order)) return 1;
    return static_cast<int>(std::clamp(std::lround(order), 0L, 2L));
}

std::vector<PoleGap> gaps_within(const std::vector<TrajectorySample>& s, const GridParams& grid) {
    std::vector<PoleGap> gaps;
    if (s.size() < 2) return gaps;
    for (const double p : grid_pole_frequencies(grid)) {
        if (!(p > s.front().omega && p < s.back().omega)) continue;
        std::size_t k = 0;
        while (s[k + 1].omega < p) ++k;
        if (const int order = pole_order(s, k, p); order > 0) gaps.push_back({p, order});
    }
    return gaps;
}

}  // namespace

DeterminantTrajectory return_difference_determinant(const GridParams& grid, const FrequencyResponseTable& table) {
    if (table.empty()) throw Error(ErrorCode::InsufficientSamples, "response table is empty");
    grid.validate();
    std::vector<TrajectorySample> out;
    out.reserve(table.size());
    for (const auto& s : table.samples()) {
        const AngularFrequency w = s.omega();
        const ComplexMat2 g = grid_impedance(w, grid) * s.y;
        const Complex d = (1.0 + g.e11) * (1.0 + g.e22) - g.e12 * g.e21;
        out.push_back({w.value(), d.real(), d.imag()});
    }
    std::vector<PoleGap> gaps = gaps_within(out, grid);
    return {std::move(out), TrajectoryForm::Admittance, std::move(gaps)};
}

FrequencyResponseTable exclude_grid_poles(const FrequencyResponseTable& table, const GridParams& grid) {
    std::vector<ResponseSample> kept;
    for (const auto& s : table.samples()) {
        if (!near_pole(s.omega().value(), grid)) kept.push_back(s);
    }
    return {std::move(kept), table.metadata()};
}

ComplexMat2 grid_admittance(AngularFrequency omega, const GridParams& grid) {
    const GridPolynomials gp = grid_impedance_polynomials(grid);
    const Complex s = omega.s();
    const Complex n11 = gp.num11(s);
    const Complex n22 = gp.num22(s);
    if (n11 == Complex{} || n22 == Complex{}) {
        throw Error(ErrorCode::SingularInversion, "grid impedance vanishes; admittance undefined");
    }
    return ComplexMat2::diag(gp.den11(s) / n11, gp.den22(s) / n22);
}

ImpedanceFormResult determinant_impedance_form(const std::vector<double>& omegas,
                                               const std::vector<ComplexMat2>& grid_admittance_values,
                                               const std::vector<ComplexMat2>& device_impedance) {
    if (omegas.size() != grid_admittance_values.size() || omegas.size() != device_impedance.size()) {
        throw Error(ErrorCode::InvalidArgument, "impedance-form sources are not aligned");
    }
    ImpedanceFormResult result;
    std::vector<TrajectorySample> out;
    for (std::size_t k = 0; k < omegas.size(); ++k) {
        const ComplexMat2 f = ComplexMat2::identity() + device_impedance[k] * grid_admittance_values[k];
        const Complex d = f.det();
        if (!std::isfinite(d.real()) || !std::isfinite(d.imag())) {
            result.dropped_omegas.push_back(omegas[k]);
            continue;
        }
        out.push_back({omegas[k], d.real(), d.imag()});
    }
    if (out.size() < 2) {
        throw Error(ErrorCode::SingularInversion, "fewer than two invertible points remain");
    }
    result.trajectory = DeterminantTrajectory(std::move(out), TrajectoryForm::Impedance);
    return result;
}

ImpedanceFormResult determinant_impedance_form(const GridParams& grid, const FrequencyResponseTable& table) {
    grid.validate();
    std::vector<double> omegas;
    std::vector<ComplexMat2> yg;
    std::vector<ComplexMat2> zd;
    std::vector<double> dropped;
    for (const auto& s : table.samples()) {
        const AngularFrequency w = s.omega();
        try {
            const ComplexMat2 z = s.y.inverse(1e-12);
            const ComplexMat2 y = grid_admittance(w, grid);
            omegas.push_back(w.value());
            zd.push_back(z);
            yg.push_back(y);
        } catch (const Error& e) {
            if (e.code() != ErrorCode::SingularInversion) throw;
            dropped.push_back(w.value());
        }
    }
    if (omegas.size() < 2) {
        throw Error(ErrorCode::SingularInversion, "device admittance is not invertible along the table");
    }
    ImpedanceFormResult r = determinant_impedance_form(omegas, yg, zd);
    r.dropped_omegas.insert(r.dropped_omegas.end(), dropped.begin(), dropped.end());
    std::sort(r.dropped_omegas.begin(), r.dropped_omegas.end());
    return r;
}

// ---------------------------------------------------------------------------
// Crossings

int label(CrossingKind kind) { return static_cast<int>(kind); }

CrossingKind kind_from_label(int l) {
    const int m = ((l - 1) % 4 + 4) % 4 + 1;
    return static_cast<CrossingKind>(m);
}

namespace {

struct Event {
    double t = 0.0;
    CrossingKind kind = CrossingKind::PosReal;
    double value = 0.0;
    bool origin = false;
    bool real_axis = true;
};

struct ZeroRule {
    bool count_left_zero = false;
    bool count_right_zero = true;
};

// Crossing parameter along p -> q for one coordinate, or < 0 when none.
double axis_parameter(double a, double b, ZeroRule rule) {
    if (a != 0.0 && b != 0.0) {
        return ((a < 0.0) != (b < 0.0)) ? a / (a - b) : -1.0;
    }
    if (a != 0.0 && b == 0.0) return rule.count_right_zero ? 1.0 : -1.0;
    if (a == 0.0) return rule.count_left_zero ? 0.0 : -1.0;
    return -1.0;
}

void segment_events(Complex p, Complex q, ZeroRule rule, double origin_abs, std::vector<Event>& out) {
    // Real-axis crossing: Im changes sign.
    if (const double t = axis_parameter(p.imag(), q.imag(), rule); t >= 0.0) {
        const double v = p.real() + t * (q.real() - p.real());
        Event e{t, v > 0.0 ? CrossingKind::PosReal : CrossingKind::NegReal, v, std::abs(v) <= origin_abs, true};
        out.push_back(e);
    }
    // Imaginary-axis crossing: Re changes sign.
    if (const double t = axis_parameter(p.real(), q.real(), rule); t >= 0.0) {
        const double v = p.imag() + t * (q.imag() - p.imag());
        Event e{t, v < 0.0 ? CrossingKind::NegImag : CrossingKind::PosImag, v, std::abs(v) <= origin_abs, false};
        out.push_back(e);
    }
}

CrossingKind kind_at_angle(long quarter) {
    switch (((quarter % 4) + 4) % 4) {
        case 0: return CrossingKind::PosReal;
        case 1: return CrossingKind::PosImag;
        case 2: return CrossingKind::NegReal;
        default: return CrossingKind::NegImag;
    }
}

// Axis crossings along the large arc that replaces a pole on the contour.
void arc_events(Complex p, Complex q, int order, std::vector<Event>& out) {
    if (p == Complex{} || q == Complex{}) return;
    const double half_pi = std::numbers::pi / 2.0;
    const double tp = std::arg(p);
    const double d0 = std::remainder(std::arg(q) - tp, kTwoPi);
    const double target = -std::numbers::pi * order;
    const double sweep = d0 + kTwoPi * std::round((target - d0) / kTwoPi);
    if (sweep == 0.0) return;
    const double magnitude = std::max(std::abs(p), std::abs(q));
    const double end = tp + sweep;
    if (sweep < 0.0) {
        for (long k = static_cast<long>(std::ceil(tp / half_pi)) - 1; k * half_pi >= end - 1e-15; --k) {
            const double a = k * half_pi;
            if (a >= tp) continue;
            const CrossingKind kind = kind_at_angle(k);
            const bool real_axis = kind == CrossingKind::PosReal || kind == CrossingKind::NegReal;
            const double sign = (kind == CrossingKind::PosReal || kind == CrossingKind::PosImag) ? 1.0 : -1.0;
            out.push_back({(tp - a) / -sweep, kind, sign * magnitude, false, real_axis});
        }
    } else {
        for (long k = static_cast<long>(std::floor(tp / half_pi)) + 1; k * half_pi <= end + 1e-15; ++k) {
            const double a = k * half_pi;
            const CrossingKind kind = kind_at_angle(k);
            const bool real_axis = kind == CrossingKind::PosReal || kind == CrossingKind::NegReal;
            const double sign = (kind == CrossingKind::PosReal || kind == CrossingKind::PosImag) ? 1.0 : -1.0;
            out.push_back({(a - tp) / sweep, kind, sign * magnitude, false, real_axis});
        }
    }
}

}  // namespace

CrossingScan detect_crossings(const DeterminantTrajectory& t, const CrossingOptions& opts) {
    if (t.size() < 2) throw Error(ErrorCode::InsufficientSamples, "crossing detection needs at least 2 samples");
    CrossingScan scan;
    const double origin_abs = opts.origin_tolerance * t.max_magnitude();
    const auto& s = t.samples();
    const auto& gaps = t.gaps();
    std::size_t gap_idx = 0;

    std::vector<Event> events;
    for (std::size_t i = 0; i + 1 < s.size(); ++i) {
        events.clear();
        const double wa = s[i].omega;
        const double wb = s[i + 1].omega;
        while (gap_idx < gaps.size() && gaps[gap_idx].omega <= wa) ++gap_idx;
        const bool bridged = gap_idx < gaps.size() && gaps[gap_idx].omega < wb;

        if (bridged) {
            arc_events(s[i].value(), s[i + 1].value(), gaps[gap_idx].order, events);
        } else {
            segment_events(s[i].value(), s[i + 1].value(), ZeroRule{i == 0, true}, origin_abs, events);
        }
        std::sort(events.begin(), events.end(), [](const Event& a, const Event& b) { return a.t < b.t; });

        bool origin_recorded = false;
        bool has_real = false;
        bool has_imag = false;
        for (const auto& e : events) {
            const double w = bridged ? gaps[gap_idx].omega : wa + e.t * (wb - wa);
            if (e.origin) {
                if (!origin_recorded) scan.origin_passes.push_back({i, w});
                origin_recorded = true;
                continue;
            }
            (e.real_axis ? has_real : has_imag) = true;
            scan.crossings.push_back({i, w, e.kind, e.value, false, bridged});
        }
        if (!bridged && has_real && has_imag) {
            scan.ambiguous_intervals.push_back(i);
            // Re-scan at ten times the resolution: the segment is straight, so
            // the order is settled unless both crossings share one sub-interval.
            std::vector<long> slots;
            for (const auto& e : events) {
                if (!e.origin) slots.push_back(std::min(9L, static_cast<long>(std::floor(e.t * 10.0))));
            }
            std::sort(slots.begin(), slots.end());
            if (std::adjacent_find(slots.begin(), slots.end()) != slots.end()) scan.low_resolution = true;
        }
    }

    if (opts.close_contour) {
        events.clear();
        segment_events(s.back().value(), s.front().value(), ZeroRule{false, false}, origin_abs, events);
        std::sort(events.begin(), events.end(), [](const Event& a, const Event& b) { return a.t < b.t; });
        for (const auto& e : events) {
            if (e.origin) {
                scan.origin_passes.push_back({s.size() - 1, s.back().omega});
                continue;
            }
            scan.crossings.push_back({s.size() - 1, s.back().omega, e.kind, e.value, true, false});
        }
    }
    return scan;
}

BoundaryCheck boundary_settlement(const DeterminantTrajectory& t, double relative_tolerance) {
    BoundaryCheck out;
    const auto& s = t.samples();
    if (s.size() < 4) return out;
    // Richardson step assuming D = D_inf + c / w near each end.
    auto extrapolate = [](const TrajectorySample& a, const TrajectorySample& b) {
        if (a.omega == 0.0 || b.omega == 0.0) return b.value();
        return (b.omega * b.value() - a.omega * a.value()) / (b.omega - a.omega);
    };
    const Complex hi = extrapolate(s[s.size() - 2], s.back());
    const Complex lo = extrapolate(s[1], s[0]);
    out.limit_estimate = 0.5 * (hi + lo);
    const double scale = std::max(std::abs(out.limit_estimate), 1.0);
    out.deviation = std::max(std::abs(s.front().value() - out.limit_estimate),
                             std::abs(s.back().value() - out.limit_estimate)) /
                    scale;
    out.settled = out.deviation <= relative_tolerance;
    return out;
}

// ---------------------------------------------------------------------------
// Refinement

std::string_view to_string(InterpolationMethod m) {
    switch (m) {
        case InterpolationMethod::PiecewiseLinear: return "piecewise-linear";
        case InterpolationMethod::CubicFit: return "cubic-polynomial-fit";
        case InterpolationMethod::Lagrange: return "lagrange";
    }
    return "unknown";
}

InterpolationMethod interpolation_method_from_string(std::string_view name) {
    if (name == "piecewise-linear" || name == "linear") return InterpolationMethod::PiecewiseLinear;
    if (name == "cubic-polynomial-fit" || name == "cubic") return InterpolationMethod::CubicFit;
    if (name == "lagrange") return InterpolationMethod::Lagrange;
    throw Error(ErrorCode::InvalidArgument, "unknown interpolation method '" + std::string(name) + "'");
}

namespace {

std::vector<double> refinement_grid(FrequencyWindow w, double step) {
    std::vector<double> grid;
    const auto n = static_cast<long>(std::floor((w.hi - w.lo) / step + 1e-9));
    for (long k = 0; k <= n; ++k) grid.push_back(w.lo + static_cast<double>(k) * step);
    return grid;
}

std::vector<TrajectorySample> cubic_fit(const std::vector<TrajectorySample>& nodes, const std::vector<double>& grid) {
    const double center = 0.5 * (nodes.front().omega + nodes.back().omega);
    const double half = std::max(0.5 * (nodes.back().omega - nodes.front().omega), 1e-300);
    const auto n = static_cast<Eigen::Index>(nodes.size());
    Eigen::MatrixXd v(n, 4);
    Eigen::MatrixXd rhs(n, 2);
    for (Eigen::Index i = 0; i < n; ++i) {
        const double x = (nodes[static_cast<std::size_t>(i)].omega - center) / half;
        v(i, 0) = 1.0;
        v(i, 1) = x;
        v(i, 2) = x * x;
        v(i, 3) = x * x * x;
        rhs(i, 0) = nodes[static_cast<std::size_t>(i)].re;
        rhs(i, 1) = nodes[static_cast<std::size_t>(i)].im;
    }
    const Eigen::Matrix4d normal = v.transpose() * v;
    const Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> eig(normal, Eigen::EigenvaluesOnly);
    const double lmin = eig.eigenvalues().minCoeff();
    const double lmax = eig.eigenvalues().maxCoeff();
    if (!(lmin > 0.0) || lmax / lmin > 1e12) {
        throw Error(ErrorCode::IllConditionedFit, "cubic fit normal system is ill-conditioned");
    }
    const Eigen::MatrixXd coef = normal.ldlt().solve(v.transpose() * rhs);
    std::vector<TrajectorySample> out;
    for (const double w : grid) {
        const double x = (w - center) / half;
        const double re = coef(0, 0) + x * (coef(1, 0) + x * (coef(2, 0) + x * coef(3, 0)));
        const double im = coef(0, 1) + x * (coef(1, 1) + x * (coef(2, 1) + x * coef(3, 1)));
        out.push_back({w, re, im});
    }
    return out;
}

std::vector<TrajectorySample> lagrange(const std::vector<TrajectorySample>& nodes, const std::vector<double>& grid) {
    const std::size_t n = nodes.size();
    const double center = 0.5 * (nodes.front().omega + nodes.back().omega);
    const double half = std::max(0.5 * (nodes.back().omega - nodes.front().omega), 1e-300);
    std::vector<double> x(n);
    std::vector<double> weight(n, 1.0);
    for (std::size_t j = 0; j < n; ++j) x[j] = (nodes[j].omega - center) / half;
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t k = 0; k < n; ++k) {
            if (k != j) weight[j] /= (x[j] - x[k]);
        }
    }
    std::vector<TrajectorySample> out;
    for (const double w : grid) {
        const double xe = (w - center) / half;
        double num_re = 0.0;
        double num_im = 0.0;
        double den = 0.0;
        bool exact = false;
        for (std::size_t j = 0; j < n; ++j) {
            const double diff = xe - x[j];
            if (diff == 0.0) {
                out.push_back({w, nodes[j].re, nodes[j].im});
                exact = true;
                break;
            }
            const double c = weight[j] / diff;
            num_re += c * nodes[j].re;
            num_im += c * nodes[j].im;
            den += c;
        }
        if (!exact) out.push_back({w, num_re / den, num_im / den});
    }
    return out;
}

}  // namespace

DeterminantTrajectory interpolate(const DeterminantTrajectory& t, InterpolationMethod method, double step,
                                  FrequencyWindow window) {
    if (!(step > 0.0)) throw Error(ErrorCode::InvalidArgument, "interpolation step must be > 0");
    if (t.size() < 2) throw Error(ErrorCode::InsufficientSamples, "trajectory has fewer than 2 samples");
    const double eps = 1e-9 * std::max(1.0, std::abs(window.hi));
    if (!(window.hi > window.lo) || window.lo < t.omega_min() - eps || window.hi > t.omega_max() + eps) {
        throw Error(ErrorCode::InvalidArgument, "interpolation window outside the sampled range");
    }
    const std::vector<double> grid = refinement_grid(window, step);

    std::vector<TrajectorySample> out;
    if (method == InterpolationMethod::PiecewiseLinear) {
        for (const double w : grid) {
            const Complex v = t.value_at(w);
            out.push_back({w, v.real(), v.imag()});
        }
    } else {
        std::vector<TrajectorySample> nodes;
        for (const auto& s : t.samples()) {
            if (s.omega >= window.lo - eps && s.omega <= window.hi + eps) nodes.push_back(s);
        }
        if (nodes.size() < 4) {
            throw Error(ErrorCode::InsufficientSamples, "cubic/Lagrange refinement needs at least 4 samples in the window");
        }
        out = method == InterpolationMethod::CubicFit ? cubic_fit(nodes, grid) : lagrange(nodes, grid);
    }
    std::vector<PoleGap> gaps;
    for (const auto& g : t.gaps()) {
        if (g.omega > window.lo && g.omega < window.hi) gaps.push_back(g);
    }
    return {std::move(out), t.form(), std::move(gaps)};
}

}  // namespace apsam
