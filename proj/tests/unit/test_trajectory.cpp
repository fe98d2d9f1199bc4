#include <random>

#include "doctest.h"

#include "apsam/analysis.hpp"
#include "apsam/synthetic.hpp"
#include "helpers.hpp"

using namespace apsam;
using apsam::test::near;
using apsam::test::sampled;

namespace {

FrequencyResponseTable table_of(const std::vector<double>& f_hz, const std::vector<ComplexMat2>& y) {
    std::vector<ResponseSample> s;
    for (std::size_t k = 0; k < f_hz.size(); ++k) s.push_back({f_hz[k], y[k]});
    return FrequencyResponseTable(std::move(s));
}

GridParams inductive_grid() {
    GridParams g;
    g.rs = 0.05;
    g.l_total = 1.5e-3;
    return g;
}

}  // namespace

TEST_CASE("zero admittance gives D = 1") {
    const std::vector<double> f{-100.0, -3.0, 0.0, 17.0, 500.0};
    const DeterminantTrajectory t =
        return_difference_determinant(inductive_grid(), table_of(f, std::vector<ComplexMat2>(f.size())));
    for (const TrajectorySample& s : t.samples()) {
        CHECK(s.re == 1.0);
        CHECK(s.im == 0.0);
    }
    CHECK(t.form() == TrajectoryForm::Admittance);
}

TEST_CASE("diagonal admittance gives the product of scalar return differences") {
    const GridParams g = inductive_grid();
    const std::vector<double> f{-80.0, -20.0, 5.0, 55.0, 300.0};
    std::vector<ComplexMat2> y;
    for (const double x : f) y.push_back(ComplexMat2::diag({0.3, 0.01 * x}, {-0.2, 0.5}));
    const DeterminantTrajectory t = return_difference_determinant(g, table_of(f, y));
    for (std::size_t k = 0; k < f.size(); ++k) {
        const double w = kTwoPi * f[k];
        const Complex z1{g.rs, w * g.l_total};
        const Complex z2{g.rs, (w - 2.0 * g.omega1) * g.l_total};
        const Complex expected = (1.0 + z1 * y[k].e11) * (1.0 + z2 * y[k].e22);
        CHECK(near(t[k].value(), expected, 1e-13 * std::abs(expected)));
    }
}

TEST_CASE("determinant of a closed-form system matches direct evaluation") {
    const SyntheticSystem sys = demo_system("sim-unstable");
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-1000.0, 1000.0);
    std::vector<double> f(20);
    for (double& x : f) x = u(rng);
    std::sort(f.begin(), f.end());
    const DeterminantTrajectory t = return_difference_determinant(sys.grid, sample_device(sys.device, f));
    for (std::size_t k = 0; k < f.size(); ++k) {
        const Complex s{0.0, kTwoPi * f[k]};
        const Complex z1 = sys.grid.rs + s * sys.grid.l_total;
        const Complex z2 = sys.grid.rs + (s - Complex{0.0, 2.0 * sys.grid.omega1}) * sys.grid.l_total;
        const Complex y11 = eval_rational(sys.device.e11, s);
        const Complex y12 = eval_rational(sys.device.e12, s);
        const Complex y21 = eval_rational(sys.device.e21, s);
        const Complex y22 = eval_rational(sys.device.e22, s);
        const Complex d = (1.0 + z1 * y11) * (1.0 + z2 * y22) - (z1 * y12) * (z2 * y21);
        CHECK(near(t[k].value(), d, 1e-10 * std::abs(d)));
    }
}

TEST_CASE("impedance form of a scalar-like system differs by det C and keeps the winding") {
    // Y = diag(y, y), Z = diag(z, z): admittance form (1 + zy)^2, impedance form (1 + 1/(zy))^2.
    const std::vector<double> w = apsam::test::linspace(-40.0, 40.0, 801);
    // c has no right-half-plane zeros or poles; 1 + c has one at 1 + 3j.
    const Complex b{-1.0, 3.0};
    auto c = [&](double x) { return (-2.0 * Complex{0.0, x} + b) / (Complex{0.0, x} + 2.0); };
    std::vector<ComplexMat2> gy, dz;
    std::vector<TrajectorySample> adm;
    for (const double x : w) {
        const Complex cz = c(x);
        gy.push_back(ComplexMat2::identity());
        dz.push_back(ComplexMat2::diag(1.0 / cz, 1.0 / cz));
        const Complex d = (1.0 + cz) * (1.0 + cz);
        adm.push_back({x, d.real(), d.imag()});
    }
    const ImpedanceFormResult imp = determinant_impedance_form(w, gy, dz);
    REQUIRE(imp.trajectory.size() == w.size());
    for (std::size_t k = 0; k < w.size(); ++k) {
        const Complex cz = c(w[k]);
        const Complex expected = (1.0 + cz) * (1.0 + cz) / (cz * cz);
        CHECK(near(imp.trajectory[k].value(), expected, 1e-12 * std::abs(expected)));
    }
    AssessmentOptions o;
    const Assessment a = assess_trajectory(DeterminantTrajectory(adm, TrajectoryForm::Admittance), o);
    const Assessment z = assess_trajectory(imp.trajectory, o);
    CHECK(a.verdict.winding == 2);
    CHECK(z.verdict.winding == a.verdict.winding);
}

TEST_CASE("impedance form reports singular devices") {
    GridParams g = inductive_grid();
    const std::vector<double> f{-10.0, 0.0, 10.0};
    CHECK_THROWS_AS((void)determinant_impedance_form(g, table_of(f, std::vector<ComplexMat2>(3))), Error);
}

TEST_CASE("impedance form drops an isolated singular point") {
    const GridParams g = inductive_grid();
    const std::vector<double> f{-10.0, 0.0, 10.0, 20.0};
    std::vector<ComplexMat2> y(4, ComplexMat2::diag(0.5, 0.25));
    y[1] = ComplexMat2::zero();
    const ImpedanceFormResult r = determinant_impedance_form(g, table_of(f, y));
    CHECK(r.trajectory.size() == 3);
    REQUIRE(r.dropped_omegas.size() == 1);
    CHECK(r.dropped_omegas[0] == 0.0);
}

TEST_CASE("no crossings") {
    const DeterminantTrajectory t = sampled({0.0, 1.0, 2.0}, [](double) { return Complex{1.0, 1.0}; });
    CHECK(detect_crossings(t).crossings.empty());
}

TEST_CASE("positive real crossing of 1 + jw") {
    const DeterminantTrajectory t = sampled({-1.0, 0.0, 1.0}, [](double w) { return Complex{1.0, w}; });
    const CrossingScan scan = detect_crossings(t);
    REQUIRE(scan.crossings.size() == 1);
    CHECK(scan.crossings[0].kind == CrossingKind::PosReal);
    CHECK(scan.crossings[0].omega_cross == 0.0);
    CHECK(scan.crossings[0].on_axis_value == 1.0);
}

TEST_CASE("negative imaginary crossing by interpolation") {
    const DeterminantTrajectory t({{0.0, 1.0, -0.5}, {1.0, -1.0, -0.5}}, TrajectoryForm::Admittance);
    const CrossingScan scan = detect_crossings(t);
    REQUIRE(scan.crossings.size() == 1);
    CHECK(scan.crossings[0].kind == CrossingKind::NegImag);
    CHECK(scan.crossings[0].omega_cross == doctest::Approx(0.5));
    CHECK(scan.crossings[0].on_axis_value == doctest::Approx(-0.5));
}

TEST_CASE("crossing kinds satisfy the sign predicate and are scale invariant") {
    const std::vector<double> w = apsam::test::linspace(-10.0, 10.0, 203);
    auto d = [](double x) { return std::polar(1.0 + 0.3 * std::sin(x), 2.1 * x) + Complex{0.2, -0.1}; };
    const DeterminantTrajectory t = sampled(w, d);
    const CrossingScan scan = detect_crossings(t);
    REQUIRE(scan.crossings.size() > 8);
    for (const Crossing& c : scan.crossings) {
        const Complex v = t.value_at(c.omega_cross);
        switch (c.kind) {
            case CrossingKind::PosReal: CHECK(c.on_axis_value > 0.0); break;
            case CrossingKind::NegImag: CHECK(c.on_axis_value < 0.0); break;
            case CrossingKind::NegReal: CHECK(c.on_axis_value < 0.0); break;
            case CrossingKind::PosImag: CHECK(c.on_axis_value > 0.0); break;
        }
        if (c.on_real_axis()) {
            CHECK(std::abs(v.imag()) < 1e-12);
        } else {
            CHECK(std::abs(v.real()) < 1e-12);
        }
    }
    const CrossingScan scaled = detect_crossings(t.scaled(7.5));
    REQUIRE(scaled.crossings.size() == scan.crossings.size());
    for (std::size_t k = 0; k < scan.crossings.size(); ++k) CHECK(scaled.crossings[k].kind == scan.crossings[k].kind);
}

TEST_CASE("exact-zero sample is counted once") {
    const DeterminantTrajectory t({{0.0, 1.0, -1.0}, {1.0, 1.0, 0.0}, {2.0, 1.0, 1.0}}, TrajectoryForm::Admittance);
    const CrossingScan scan = detect_crossings(t);
    REQUIRE(scan.crossings.size() == 1);
    CHECK(scan.crossings[0].index == 0);
}

TEST_CASE("passing through the origin is reported") {
    const DeterminantTrajectory t = sampled({-1.0, 0.0, 1.0}, [](double w) { return Complex{w, w}; });
    const CrossingScan scan = detect_crossings(t);
    CHECK(scan.origin_passes.size() == 1);
    CHECK(scan.crossings.empty());
}

TEST_CASE("ambiguous interval is refined") {
    // The straight chord from (1, -1) to (-1, 1) passes through the origin only at its
    // midpoint; a slight offset makes both coordinates change sign in one interval.
    const DeterminantTrajectory t({{0.0, 1.0, -0.9}, {1.0, -1.0, 1.1}}, TrajectoryForm::Admittance);
    const CrossingScan scan = detect_crossings(t);
    CHECK(scan.crossings.size() == 2);
    CHECK(scan.crossings[0].omega_cross < scan.crossings[1].omega_cross);
    CHECK_FALSE(scan.ambiguous_intervals.empty());
}

TEST_CASE("piecewise-linear refinement reproduces linear data") {
    const DeterminantTrajectory t = sampled({0.0, 1.0, 2.0, 3.0}, [](double w) { return Complex{2.0 * w, -w}; });
    const DeterminantTrajectory r = interpolate(t, InterpolationMethod::PiecewiseLinear, 0.1, {0.0, 3.0});
    CHECK(r.size() == 31);
    for (const TrajectorySample& s : r.samples()) {
        CHECK(s.re == doctest::Approx(2.0 * s.omega));
        CHECK(s.im == doctest::Approx(-s.omega));
    }
}

TEST_CASE("Lagrange and cubic fit reproduce cubic data") {
    auto cubic = [](double w) { return Complex{w * w * w - 2.0 * w + 1.0, 0.5 * w * w}; };
    const DeterminantTrajectory t = sampled({0.0, 1.0, 2.0, 3.0}, cubic);
    for (const InterpolationMethod m : {InterpolationMethod::Lagrange, InterpolationMethod::CubicFit}) {
        const DeterminantTrajectory r = interpolate(t, m, 0.5, {0.0, 3.0});
        for (const TrajectorySample& s : r.samples()) CHECK(near(s.value(), cubic(s.omega), 1e-9));
    }
    const DeterminantTrajectory few = sampled({0.0, 1.0, 2.0}, cubic);
    CHECK_THROWS_AS((void)interpolate(few, InterpolationMethod::Lagrange, 0.5, {0.0, 2.0}), Error);
}

TEST_CASE("interpolation method names") {
    for (const InterpolationMethod m :
         {InterpolationMethod::PiecewiseLinear, InterpolationMethod::CubicFit, InterpolationMethod::Lagrange}) {
        CHECK(interpolation_method_from_string(to_string(m)) == m);
    }
    CHECK_THROWS_AS((void)interpolation_method_from_string("spline"), Error);
}

TEST_CASE("refinement and the critical-pole estimate") {
    // Linear refinement of linear interpolation reproduces the chord, so it leaves the
    // estimate unchanged; Lagrange refinement over a wider window improves it.
    const FrequencyPlan plan = FrequencyPlan::uniform(-1000.0, 1000.0, 1.0);
    for (const std::string& name : {"sim-unstable", "exp-800uF", "near-critical"}) {
        const SyntheticSystem sys = demo_system(name);
        const DeterminantTrajectory t = return_difference_determinant(sys.grid, sweep(sys.device, plan));
        SlopeOptions raw;
        raw.step_hz = 1.0;
        SlopeOptions linear;
        SlopeOptions lagrange;
        lagrange.method = InterpolationMethod::Lagrange;
        lagrange.half_window_hz = 2.0;
        const auto r = critical_pole(t, raw);
        const auto l = critical_pole(t, linear);
        const auto g = critical_pole(t, lagrange);
        REQUIRE(r);
        REQUIRE(l);
        REQUIRE(g);
        CHECK(near(l->zero(), r->zero(), 1e-9));
        CHECK(std::abs(g->zero() - sys.critical_zero) < std::abs(r->zero() - sys.critical_zero));
    }
}

TEST_CASE("boundary settlement") {
    const DeterminantTrajectory flat = sampled(apsam::test::linspace(-100.0, 100.0, 201),
                                               [](double w) { return Complex{1.0, 0.0} + 1.0 / Complex{1.0, w}; });
    CHECK(boundary_settlement(flat).settled);
    const DeterminantTrajectory ramp = sampled(apsam::test::linspace(-100.0, 100.0, 201),
                                               [](double w) { return Complex{1.0, 0.1 * w}; });
    CHECK_FALSE(boundary_settlement(ramp).settled);
}
