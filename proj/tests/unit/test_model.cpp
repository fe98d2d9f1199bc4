#include <random>

#include "doctest.h"

#include "apsam/model.hpp"
#include "helpers.hpp"

using namespace apsam;
using apsam::test::near;

TEST_CASE("grid impedance: resistive grid is the identity scaled by Rs") {
    GridParams g;
    g.rs = 1.0;
    const ComplexMat2 z = grid_impedance(AngularFrequency(123.0), g);
    CHECK(z == ComplexMat2::diag(1.0, 1.0));
}

TEST_CASE("grid impedance: inductive grid at the fundamental") {
    GridParams g;
    g.rs = 0.1;
    g.l_total = 0.01;
    g.omega1 = 100.0 * std::numbers::pi;
    const ComplexMat2 z = grid_impedance(AngularFrequency(100.0 * std::numbers::pi), g);
    CHECK(near(z.e11, {0.1, 3.14159265358979}, 1e-12));
    CHECK(near(z.e22, {0.1, -3.14159265358979}, 1e-12));
    CHECK(z.e12 == Complex{});
    CHECK(z.e21 == Complex{});
}

TEST_CASE("grid impedance: series capacitor") {
    GridParams g;
    g.cs = 1.0;
    g.omega1 = 100.0 * std::numbers::pi;
    const ComplexMat2 z = grid_impedance(AngularFrequency(10.0), g);
    CHECK(near(z.e11, {0.0, -0.1}, 1e-15));
    CHECK_THROWS_AS((void)grid_impedance(AngularFrequency(0.0), g), Error);
    CHECK_THROWS_AS((void)grid_impedance(AngularFrequency(2.0 * g.omega1), g), Error);
}

TEST_CASE("grid impedance: coupled entry is the fundamental entry shifted by 2 w1") {
    GridParams g;
    g.rs = 0.07;
    g.l_total = 2e-3;
    g.cs = 5e-4;
    for (const double w : {-900.0, -10.0, 37.0, 420.0, 2000.0}) {
        const ComplexMat2 a = grid_impedance(AngularFrequency(w), g);
        const ComplexMat2 b = grid_impedance(AngularFrequency(w - 2.0 * g.omega1), g);
        CHECK(near(a.e22, b.e11, 1e-12 * std::abs(b.e11)));
    }
}

TEST_CASE("grid parameters are validated") {
    GridParams g;
    g.rs = -1.0;
    CHECK_THROWS_AS(g.validate(), Error);
    g.rs = 0.0;
    g.cs = 0.0;
    CHECK_THROWS_AS(g.validate(), Error);
}

TEST_CASE("rational evaluation") {
    const RationalFunction f(Polynomial{-1.0, 1.0}, Polynomial{2.0, 1.0});
    CHECK(near(eval_rational(f, 0.0), -0.5, 1e-15));
    const RationalFunction pole(Polynomial{1.0}, Polynomial{1.0, 1.0});
    CHECK_THROWS_AS((void)eval_rational(pole, -1.0), Error);
    const RationalFunction g(Polynomial{1.0, 0.0, 1.0}, Polynomial{2.0, 2.0, 1.0});
    CHECK(std::abs(eval_rational(g, Complex{0.0, 1.0})) < 1e-15);
}

TEST_CASE("rational functions must be proper") {
    CHECK_THROWS_AS(RationalFunction(Polynomial{0.0, 0.0, 1.0}, Polynomial{1.0, 1.0}), Error);
    CHECK_THROWS_AS(RationalFunction(Polynomial{1.0}, Polynomial{}), Error);
}

TEST_CASE("matrix evaluation matches entrywise evaluation") {
    RationalMatrix2 m;
    m.e11 = RationalFunction(Polynomial{1.0}, Polynomial{1.0, 1.0});
    CHECK(near(eval_rational_matrix(m, AngularFrequency(0.0)).e11, 1.0, 1e-15));

    m.e12 = RationalFunction(Polynomial{{2.0, 1.0}, 3.0}, Polynomial{{5.0, 0.0}, {1.0, -2.0}, 1.0});
    m.e21 = RationalFunction(Polynomial{0.5}, Polynomial{4.0, 1.0});
    m.e22 = RationalFunction::constant({0.0, 1.0});
    const Complex s{0.0, 1.0};
    const ComplexMat2 y = eval_rational_matrix(m, AngularFrequency(1.0));
    CHECK(y.e11 == eval_rational(m.e11, s));
    CHECK(y.e12 == eval_rational(m.e12, s));
    CHECK(y.e21 == eval_rational(m.e21, s));
    CHECK(y.e22 == eval_rational(m.e22, s));
}

TEST_CASE("polynomial roots recover planted roots") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-50.0, 50.0);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<Complex> roots;
        for (int k = 0; k < 6; ++k) roots.emplace_back(u(rng), u(rng));
        const Polynomial p = Polynomial::from_roots(roots, {2.0, -1.0});
        const std::vector<Complex> found = polynomial_roots(p);
        REQUIRE(found.size() == roots.size());
        for (const Complex r : roots) {
            double best = 1e300;
            for (const Complex f : found) best = std::min(best, std::abs(f - r));
            CHECK(best < 1e-8 * std::max(1.0, std::abs(r)));
        }
    }
}

TEST_CASE("polynomial shift substitutes s - shift") {
    const Polynomial p{1.0, {2.0, 1.0}, 3.0};
    const Complex shift{0.5, -2.0};
    const Polynomial q = p.shifted(shift);
    for (const Complex s : {Complex{1.0, 1.0}, Complex{-3.0, 0.2}}) CHECK(near(q(s), p(s - shift), 1e-12));
}

TEST_CASE("self-stability") {
    RationalMatrix2 m;
    const RationalFunction stable(Polynomial{1.0}, Polynomial{1.0, 1.0});
    m.e11 = m.e12 = m.e21 = m.e22 = stable;
    CHECK(check_self_stable(m).stable);

    m.e21 = RationalFunction(Polynomial{1.0}, Polynomial{-0.5, 1.0});
    const SelfStabilityVerdict v = check_self_stable(m);
    CHECK_FALSE(v.stable);
    REQUIRE(v.offending_roots.size() == 1);
    CHECK(near(v.offending_roots[0], 0.5, 1e-12));
}

TEST_CASE("self-stability of random left-half-plane products") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> re(-20.0, -0.01);
    std::uniform_real_distribution<double> im(-500.0, 500.0);
    for (int trial = 0; trial < 25; ++trial) {
        std::vector<Complex> roots;
        for (int k = 0; k < 5; ++k) roots.emplace_back(re(rng), im(rng));
        RationalMatrix2 m;
        m.e11 = RationalFunction(Polynomial{1.0}, Polynomial::from_roots(roots));
        CHECK(check_self_stable(m).stable);
        m.e11 = RationalFunction(Polynomial{3.0}, Polynomial::from_roots(roots, 3.0));
        CHECK(check_self_stable(m).stable);
    }
}

TEST_CASE("self-stability zero check") {
    RationalMatrix2 m;
    m.e11 = RationalFunction(Polynomial{-1.0, 1.0}, Polynomial{1.0, 1.0});
    CHECK(check_self_stable(m).stable);
    SelfStabilityOptions o;
    o.check_zeros = true;
    CHECK_FALSE(check_self_stable(m, o).stable);
}

TEST_CASE("2x2 inverse") {
    const ComplexMat2 m{{1.0, 2.0}, 3.0, {0.0, -1.0}, 4.0};
    const ComplexMat2 p = m * m.inverse();
    CHECK(near(p.e11, 1.0, 1e-14));
    CHECK(near(p.e12, 0.0, 1e-14));
    CHECK(near(p.e21, 0.0, 1e-14));
    CHECK(near(p.e22, 1.0, 1e-14));
    CHECK_THROWS_AS((void)ComplexMat2::zero().inverse(), Error);
}
