#include "apsam/verify.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>

namespace apsam {

std::pair<Complex, Complex> eigenvalues(const ComplexMat2& m) {
    const Complex half_tr = 0.5 * m.trace();
    const Complex root = std::sqrt(half_tr * half_tr - m.det());
    return {half_tr + root, half_tr - root};
}

namespace {

void pair_with(Complex p1, Complex p2, Complex& e1, Complex& e2) {
    if (std::abs(e1 - p2) + std::abs(e2 - p1) < std::abs(e1 - p1) + std::abs(e2 - p2)) std::swap(e1, e2);
}

double turn(Complex a, Complex b) { return std::abs(std::remainder(std::arg(b + 1.0) - std::arg(a + 1.0), kTwoPi)); }

struct LociBuilder {
    EigenLoci& loci;
    const LociOptions& opts;

    void push(double w, Complex e1, Complex e2) {
        loci.omegas.push_back(w);
        loci.trace1.push_back(e1);
        loci.trace2.push_back(e2);
    }

    // Appends the interior and right end of (w0, w1], bisecting with the model while 1 + lambda turns too fast.
    void extend(double w1, Complex e1, Complex e2, bool refinable, int depth) {
        const double w0 = loci.omegas.back();
        const Complex p1 = loci.trace1.back();
        const Complex p2 = loci.trace2.back();
        pair_with(p1, p2, e1, e2);
        if (opts.max_turn > 0.0 && std::max(turn(p1, e1), turn(p2, e2)) > opts.max_turn) {
            if (refinable && opts.model && depth < opts.max_depth) {
                const double wm = 0.5 * (w0 + w1);
                auto [m1, m2] = eigenvalues(opts.model(wm));
                pair_with(p1, p2, m1, m2);
                extend(wm, m1, m2, true, depth + 1);
                extend(w1, e1, e2, true, depth + 1);
                return;
            }
            if (refinable) ++loci.coarse_intervals;
        }
        push(w1, e1, e2);
    }
};

}  // namespace

EigenLoci eigen_loci(const std::vector<double>& omegas, const std::vector<ComplexMat2>& g, std::vector<PoleGap> gaps,
                     const LociOptions& opts) {
    if (omegas.size() != g.size()) throw Error(ErrorCode::InvalidArgument, "loci sources are not aligned");
    EigenLoci loci;
    loci.gaps = std::move(gaps);
    loci.omegas.reserve(g.size());
    loci.trace1.reserve(g.size());
    loci.trace2.reserve(g.size());
    LociBuilder builder{loci, opts};
    std::size_t gap_idx = 0;
    for (std::size_t k = 0; k < g.size(); ++k) {
        auto [e1, e2] = eigenvalues(g[k]);
        if (k == 0) {
            builder.push(omegas[k], e1, e2);
            continue;
        }
        while (gap_idx < loci.gaps.size() && loci.gaps[gap_idx].omega <= omegas[k - 1]) ++gap_idx;
        const bool gap = gap_idx < loci.gaps.size() && loci.gaps[gap_idx].omega < omegas[k];
        builder.extend(omegas[k], e1, e2, !gap, 0);
    }
    return loci;
}

EigenLoci return_ratio_loci(const GridParams& grid, const FrequencyResponseTable& table, const LociOptions& opts) {
    const FrequencyResponseTable kept = exclude_grid_poles(table, grid);
    std::vector<double> omegas;
    std::vector<ComplexMat2> g;
    omegas.reserve(kept.size());
    g.reserve(kept.size());
    for (const auto& s : kept.samples()) {
        omegas.push_back(s.omega().value());
        g.push_back(grid_impedance(s.omega(), grid) * s.y);
    }
    std::vector<PoleGap> gaps;
    if (!grid_pole_frequencies(grid).empty() && kept.size() >= 2) {
        gaps = return_difference_determinant(grid, kept).gaps();
    }
    return eigen_loci(omegas, g, std::move(gaps), opts);
}

EigenLoci return_ratio_loci(const RationalMatrix2& device, const GridParams& grid, const FrequencyResponseTable& table,
                            LociOptions opts) {
    opts.model = [&device, &grid](double w) {
        const AngularFrequency omega(w);
        return grid_impedance(omega, grid) * eval_rational_matrix(device, omega);
    };
    return return_ratio_loci(grid, table, opts);
}

GncVerdict gnc_verdict(const EigenLoci& loci) {
    const std::size_t n = loci.omegas.size();
    if (n == 0) throw Error(ErrorCode::InsufficientSamples, "eigenvalue loci are empty");
    for (const auto* trace : {&loci.trace1, &loci.trace2}) {
        for (std::size_t k = 0; k < n; ++k) {
            if (std::abs((*trace)[k] + 1.0) < 1e-9) {
                char buf[96];
                std::snprintf(buf, sizeof(buf), "eigenvalue locus passes through -1 at %.6g rad/s", loci.omegas[k]);
                throw Error(ErrorCode::PassThroughCriticalPoint, buf);
            }
        }
    }
    auto step = [](Complex a, Complex b) { return std::remainder(std::arg(b + 1.0) - std::arg(a + 1.0), kTwoPi); };
    auto ray = [](Complex a, Complex b) {
        const Complex wa = a + 1.0;
        const Complex wb = b + 1.0;
        if (wa.imag() == 0.0 || wb.imag() == 0.0 || (wa.imag() < 0.0) == (wb.imag() < 0.0)) return 0.0;
        const double t = wa.imag() / (wa.imag() - wb.imag());
        if (wa.real() + t * (wb.real() - wa.real()) >= 0.0) return 0.0;
        return wa.imag() > 0.0 ? 1.0 : -1.0;
    };

    double total = 0.0;
    double ray_total = 0.0;
    std::size_t gap_idx = 0;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        while (gap_idx < loci.gaps.size() && loci.gaps[gap_idx].omega <= loci.omegas[k]) ++gap_idx;
        const bool gap = gap_idx < loci.gaps.size() && loci.gaps[gap_idx].omega < loci.omegas[k + 1];
        double d = step(loci.trace1[k], loci.trace1[k + 1]) + step(loci.trace2[k], loci.trace2[k + 1]);
        if (gap) {
            // The detour around the pole turns det(I + G) clockwise by pi per order.
            const double target = -std::numbers::pi * loci.gaps[gap_idx].order;
            d += kTwoPi * std::round((target - d) / kTwoPi);
            ray_total += d / kTwoPi;
        } else {
            ray_total += ray(loci.trace1[k], loci.trace1[k + 1]) + ray(loci.trace2[k], loci.trace2[k + 1]);
        }
        total += d;
    }
    // The traces may have exchanged roles along the sweep; close each end onto the nearer start.
    const Complex e1 = loci.trace1.back();
    const Complex e2 = loci.trace2.back();
    Complex s1 = loci.trace1.front();
    Complex s2 = loci.trace2.front();
    if (std::abs(e1 - s2) + std::abs(e2 - s1) < std::abs(e1 - s1) + std::abs(e2 - s2)) std::swap(s1, s2);
    total += step(e1, s1) + step(e2, s2);
    ray_total += ray(e1, s1) + ray(e2, s2);

    GncVerdict v;
    v.turns = total / kTwoPi;
    v.ray_turns = ray_total;
    v.winding = std::lround(-v.turns);
    v.stable = v.winding == 0;
    v.undersampled = std::abs(v.turns - v.ray_turns) > 0.5 || loci.coarse_intervals > 0;
    return v;
}

// ---------------------------------------------------------------------------

namespace {

std::vector<Complex> roots_of(const Polynomial& p) {
    return p.degree() > 0 ? polynomial_roots(p) : std::vector<Complex>{};
}

// Splits off the roots shared by two multisets; what remains of each is left in place.
std::vector<Complex> extract_common(std::vector<Complex>& a, std::vector<Complex>& b) {
    std::vector<Complex> common;
    for (auto it = a.begin(); it != a.end();) {
        auto best = b.end();
        double best_dist = 1e-7 * std::max(1.0, std::abs(*it));
        for (auto jt = b.begin(); jt != b.end(); ++jt) {
            const double dist = std::abs(*jt - *it);
            if (dist <= best_dist) {
                best = jt;
                best_dist = dist;
            }
        }
        if (best != b.end()) {
            common.push_back(0.5 * (*it + *best));
            b.erase(best);
            it = a.erase(it);
        } else {
            ++it;
        }
    }
    return common;
}

Polynomial centred_from_roots(const std::vector<Complex>& roots, Complex center) {
    std::vector<Complex> shifted;
    shifted.reserve(roots.size());
    for (const Complex r : roots) shifted.push_back(r - center);
    return Polynomial::from_roots(shifted);
}

}  // namespace

DeterminantPolynomials determinant_polynomials(const RationalMatrix2& y, const GridParams& grid) {
    const GridPolynomials gp = grid_impedance_polynomials(grid);
    const std::array<const Polynomial*, 12> parts{&gp.num11, &gp.den11, &gp.num22, &gp.den22,
                                                  &y.e11.numerator(), &y.e11.denominator(),
                                                  &y.e12.numerator(), &y.e12.denominator(),
                                                  &y.e21.numerator(), &y.e21.denominator(),
                                                  &y.e22.numerator(), &y.e22.denominator()};
    // det(I + G) = [f1 f2 / (d11 d22) - zn1 zn2 n12 n21 / (d12 d21)] / (zd1 zd2); the two
    // denominator products usually share factors, which are kept only once.
    std::vector<Complex> diag = roots_of(*parts[5]);
    for (const Complex r : roots_of(*parts[11])) diag.push_back(r);
    std::vector<Complex> cross = roots_of(*parts[7]);
    for (const Complex r : roots_of(*parts[9])) cross.push_back(r);
    std::vector<Complex> common = extract_common(diag, cross);

    DeterminantPolynomials out;
    for (const std::vector<Complex>* set : {&common, &diag, &cross}) {
        out.denominator_roots.insert(out.denominator_roots.end(), set->begin(), set->end());
    }
    for (const std::size_t k : {1, 3}) {
        for (const Complex r : roots_of(*parts[k])) out.denominator_roots.push_back(r);
    }
    double im_sum = 0.0;
    for (const Complex r : out.denominator_roots) im_sum += r.imag();
    // Expand about the mean pole frequency so the clustered roots stay well separated.
    const auto count = static_cast<double>(out.denominator_roots.size());
    out.center = Complex{0.0, count > 0 ? im_sum / count : 0.0};
    std::array<Polynomial, 12> x;
    for (std::size_t k = 0; k < parts.size(); ++k) x[k] = parts[k]->shifted(-out.center);
    const auto& [zn1, zd1, zn2, zd2, n11, d11, n12, d12, n21, d21, n22, d22] = x;

    const Complex k_diag = d11.leading() * d22.leading();
    const Complex k_cross = d12.leading() * d21.leading();
    const Polynomial f1 = zd1 * d11 + zn1 * n11;
    const Polynomial f2 = zd2 * d22 + zn2 * n22;
    out.numerator = k_cross * (f1 * f2 * centred_from_roots(cross, out.center)) -
                    k_diag * (zn1 * zn2 * n12 * n21 * centred_from_roots(diag, out.center));
    return out;
}

OracleReport oracle_rhp_zeros(const RationalMatrix2& device, const GridParams& grid, double tolerance) {
    const DeterminantPolynomials dp = determinant_polynomials(device, grid);
    if (dp.numerator.is_zero()) {
        throw Error(ErrorCode::DegenerateNumerator, "determinant numerator is identically zero");
    }
    OracleReport rep;
    rep.degree = dp.numerator.degree();
    rep.conditioning_warning = rep.degree > 40;
    std::vector<Complex> zeros = dp.numerator.degree() > 0 ? polynomial_roots(dp.numerator) : std::vector<Complex>{};
    for (Complex& z : zeros) z += dp.center;

    // Numerator roots that coincide with denominator roots are removable, not zeros of D.
    std::vector<bool> used(zeros.size(), false);
    for (const Complex r : dp.denominator_roots) {
        std::size_t best = zeros.size();
        double best_dist = 1e-5 * std::max(1.0, std::abs(r));
        for (std::size_t k = 0; k < zeros.size(); ++k) {
            const double dist = std::abs(zeros[k] - r);
            if (!used[k] && dist <= best_dist) {
                best = k;
                best_dist = dist;
            }
        }
        if (best < zeros.size()) used[best] = true;
    }
    for (std::size_t k = 0; k < zeros.size(); ++k) {
        if (used[k]) continue;
        rep.all_zeros.push_back(zeros[k]);
        if (zeros[k].real() > tolerance) rep.zeros.push_back(zeros[k]);
        if (!rep.critical_zero || std::abs(zeros[k].real()) < std::abs(rep.critical_zero->real())) {
            rep.critical_zero = zeros[k];
        }
    }
    rep.rhp_zero_count = static_cast<long>(rep.zeros.size());
    return rep;
}

// ---------------------------------------------------------------------------

ConsistencyError::ConsistencyError(ConsistencyReport report)
    : Error(ErrorCode::ConsistencyViolation,
            report.mismatches.empty() ? std::string("forms disagree") : report.mismatches.front()),
      report_(std::move(report)) {}

ConsistencyReport compare_forms(const RationalMatrix2& device, const GridParams& grid, const FrequencyPlan& plan,
                                const ConsistencyTolerances& tol, const AnalysisOptions& opts) {
    const FrequencyResponseTable table = sweep(device, plan);
    ConsistencyReport r;
    AnalysisOptions o = opts;
    o.form = TrajectoryForm::Admittance;
    r.admittance = analyze(grid, table, o);
    o.form = TrajectoryForm::Impedance;
    r.impedance = analyze(grid, table, o);

    const auto& va = r.admittance.verdict();
    const auto& vi = r.impedance.verdict();
    char buf[160];
    if (va.stable != vi.stable) r.mismatches.emplace_back("verdicts differ");
    if (va.winding != vi.winding) {
        std::snprintf(buf, sizeof(buf), "windings differ (%ld vs %ld)", va.winding, vi.winding);
        r.mismatches.emplace_back(buf);
    }
    const auto& pa = r.admittance.pole;
    const auto& pi = r.impedance.pole;
    if (pa.has_value() != pi.has_value()) {
        r.mismatches.emplace_back("critical pole found in only one form");
    } else if (pa && pi) {
        const double ds = std::abs(pa->sigma - pi->sigma);
        if (ds > tol.sigma_relative * std::abs(pa->sigma) + tol.sigma_absolute) {
            std::snprintf(buf, sizeof(buf), "sigma differs by %.4g (%.6g vs %.6g)", ds, pa->sigma, pi->sigma);
            r.mismatches.emplace_back(buf);
        }
        const double dw = std::abs(pa->omega - pi->omega);
        if (dw > tol.omega_absolute) {
            std::snprintf(buf, sizeof(buf), "omega differs by %.4g rad/s (%.6g vs %.6g)", dw, pa->omega, pi->omega);
            r.mismatches.emplace_back(buf);
        }
    }
    r.agree = r.mismatches.empty();
    return r;
}

ConsistencyReport consistency_check(const RationalMatrix2& device, const GridParams& grid, const FrequencyPlan& plan,
                                    const ConsistencyTolerances& tol, const AnalysisOptions& opts) {
    ConsistencyReport r = compare_forms(device, grid, plan, tol, opts);
    if (!r.agree) throw ConsistencyError(std::move(r));
    return r;
}

// ---------------------------------------------------------------------------

TimingComparison compare_timing(const GridParams& grid, const FrequencyResponseTable& table, int repeats) {
    using clock = std::chrono::steady_clock;
    TimingComparison t;
    t.points = table.size();
    repeats = std::max(1, repeats);
    long sink = 0;

    double best_det = 1e300;
    double best_loci = 1e300;
    for (int r = 0; r < repeats; ++r) {
        const auto t0 = clock::now();
        const Assessment a = assess_trajectory(return_difference_determinant(grid, table));
        const auto t1 = clock::now();
        const GncVerdict g = gnc_verdict(return_ratio_loci(grid, table));
        const auto t2 = clock::now();
        sink += a.verdict.winding + g.winding;
        best_det = std::min(best_det, std::chrono::duration<double>(t1 - t0).count());
        best_loci = std::min(best_loci, std::chrono::duration<double>(t2 - t1).count());
    }
    (void)sink;
    t.determinant_seconds = best_det;
    t.loci_seconds = best_loci;
    return t;
}

}  // namespace apsam
