#include <random>

#include "doctest.h"

#include "apsam/analysis.hpp"
#include "apsam/synthetic.hpp"
#include "helpers.hpp"

using namespace apsam;
using apsam::test::near;
using apsam::test::sampled;

namespace {

std::vector<double> hz_grid(double lo_hz, double hi_hz, double step_hz) {
    std::vector<double> w;
    for (double f = lo_hz; f <= hi_hz + 1e-9; f += step_hz) w.push_back(kTwoPi * f);
    return w;
}

DeterminantTrajectory local_model(Complex zo, Complex ab, const std::vector<double>& w) {
    return sampled(w, [&](double x) { return (Complex{0.0, x} - zo) * ab; });
}

}  // namespace

TEST_CASE("candidate frequency") {
    const DeterminantTrajectory t = sampled({-1.0, 0.0, 1.0}, [](double w) { return Complex{1.0, w}; });
    const auto c = find_candidate_frequency(t);
    REQUIRE(c);
    CHECK(c->omega == 0.0);

    // Two imaginary-part crossings: |D| = 0.5 near w = 1, |D| = 0.01 near w = 3.
    const DeterminantTrajectory two({{0.0, 0.5, -1.0}, {2.0, 0.5, 1.0}, {2.5, 0.01, 1.0}, {3.5, 0.01, -1.0}},
                                    TrajectoryForm::Admittance);
    const auto best = find_candidate_frequency(two);
    REQUIRE(best);
    CHECK(best->omega == doctest::Approx(3.0));
    CHECK(best->magnitude == doctest::Approx(0.01));

    const DeterminantTrajectory none = sampled({0.0, 1.0, 2.0}, [](double) { return Complex{1.0, 1.0}; });
    CHECK_FALSE(find_candidate_frequency(none));
    CHECK_FALSE(critical_pole(none));
}

TEST_CASE("local slopes") {
    const std::vector<double> w = hz_grid(-5.0, 5.0, 1.0);
    const Complex zo{0.5, 10.0};
    const LocalSlope unit = local_slope(local_model(zo, 1.0, w), 10.0);
    CHECK(unit.a == doctest::Approx(1.0));
    CHECK(unit.b == doctest::Approx(0.0).epsilon(1e-12));
    const LocalSlope ab = local_slope(local_model(zo, {2.0, 3.0}, w), 10.0);
    CHECK(ab.a == doctest::Approx(2.0));
    CHECK(ab.b == doctest::Approx(3.0));
    const DeterminantTrajectory flat = sampled(w, [](double) { return Complex{1.0, 0.0}; });
    CHECK_THROWS_AS((void)local_slope(flat, 0.0), Error);
}

TEST_CASE("damping at a crossing matches the reference experimental rows") {
    CHECK(sigma_at_crossing(-1.051, -0.967, 1.715) == doctest::Approx(-0.262).epsilon(0.005 / 0.262));
    CHECK(sigma_at_crossing(3.327, -0.985, 1.131) == doctest::Approx(1.456).epsilon(0.005 / 1.456));
    CHECK(sigma_at_crossing(4.397, -1.012, 0.772) == doctest::Approx(2.747).epsilon(0.005 / 2.747));
}

TEST_CASE("complex-division estimate agrees with the crossing formula") {
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    for (int k = 0; k < 20; ++k) {
        LocalSlope s;
        s.a = u(rng);
        s.b = u(rng);
        s.d_star = {u(rng), 0.0};
        const CriticalPoleEstimate e = estimate_critical_pole(7.0, s);
        CHECK(e.sigma == doctest::Approx(sigma_at_crossing(s.d_star.real(), s.a, s.b)));
        CHECK(e.tau * std::abs(e.sigma) == doctest::Approx(1.0));
    }
}

TEST_CASE("zero residual returns j omega_star") {
    LocalSlope s;
    s.a = 1.3;
    s.b = -0.4;
    const CriticalPoleEstimate e = estimate_critical_pole(42.0, s);
    CHECK(e.sigma == 0.0);
    CHECK(e.omega == 42.0);
    CHECK(std::isinf(e.tau));
}

TEST_CASE("exact recovery on local linear models") {
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> sig(-3.0, 3.0);
    std::uniform_real_distribution<double> om(-60.0, 60.0);
    std::uniform_real_distribution<double> coef(-2.0, 2.0);
    const std::vector<double> w = hz_grid(-20.0, 20.0, 1.0);
    for (int k = 0; k < 50; ++k) {
        const Complex zo{sig(rng), om(rng)};
        const double a = std::copysign(0.3 + std::abs(coef(rng)), coef(rng));
        const Complex ab{a, coef(rng)};
        const auto e = critical_pole(local_model(zo, ab, w));
        REQUIRE(e);
        CHECK(near(e->zero(), zo, 1e-9));
        CHECK(e->a == doctest::Approx(ab.real()));
        CHECK(e->b == doctest::Approx(ab.imag()));
    }
}

TEST_CASE("estimate is invariant under positive scaling") {
    const SyntheticSystem sys = demo_system("exp-800uF");
    const DeterminantTrajectory t =
        return_difference_determinant(sys.grid, sweep(sys.device, FrequencyPlan::uniform(-1000.0, 1000.0, 1.0)));
    const auto a = critical_pole(t);
    const auto b = critical_pole(t.scaled(3.7));
    REQUIRE(a);
    REQUIRE(b);
    CHECK(near(a->zero(), b->zero(), 1e-9));
    CHECK(b->a == doctest::Approx(3.7 * a->a));
    CHECK(b->b == doctest::Approx(3.7 * a->b));
}

TEST_CASE("candidate lies within one sweep step of the planted zero") {
    for (const std::string& name : {"sim-stable", "sim-unstable", "exp-1000uF", "wind-6ms"}) {
        const SyntheticSystem sys = demo_system(name);
        const DeterminantTrajectory t =
            return_difference_determinant(sys.grid, sweep(sys.device, FrequencyPlan::uniform(-1000.0, 1000.0, 1.0)));
        const auto c = find_candidate_frequency(t);
        REQUIRE(c);
        CHECK(std::abs(c->omega - sys.critical_zero.imag()) <= kTwoPi);
    }
}

TEST_CASE("other refinement backends") {
    const std::vector<double> w = hz_grid(-5.0, 5.0, 1.0);
    const Complex zo{0.2, 3.0};
    for (const InterpolationMethod m : {InterpolationMethod::CubicFit, InterpolationMethod::Lagrange}) {
        SlopeOptions o;
        o.method = m;
        const auto e = critical_pole(local_model(zo, {1.0, 0.5}, w), o);
        REQUIRE(e);
        CHECK(e->method == m);
        CHECK(near(e->zero(), zo, 1e-6));
    }
}
