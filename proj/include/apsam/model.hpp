#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "apsam/error.hpp"

namespace apsam {

using Complex = std::complex<double>;

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Signed angular frequency in rad/s. Negative values are meaningful: the
/// frequency-coupled models have no conjugate symmetry.
class AngularFrequency {
public:
    constexpr AngularFrequency() = default;
    explicit AngularFrequency(double rad_per_s);

    static AngularFrequency from_hz(double hz) { return AngularFrequency(kTwoPi * hz); }

    [[nodiscard]] constexpr double value() const noexcept { return value_; }
    [[nodiscard]] constexpr double hz() const noexcept { return value_ / kTwoPi; }
    /// The Laplace variable on the imaginary axis, s = j*omega.
    [[nodiscard]] Complex s() const noexcept { return {0.0, value_}; }

    friend constexpr auto operator<=>(AngularFrequency, AngularFrequency) = default;

private:
    double value_ = 0.0;
};

/// 2x2 complex matrix; carrier for Y, Z, G and F at one frequency.
struct ComplexMat2 {
    Complex e11{}, e12{}, e21{}, e22{};

    static ComplexMat2 identity() { return {1.0, 0.0, 0.0, 1.0}; }
    static ComplexMat2 zero() { return {}; }
    static ComplexMat2 diag(Complex a, Complex b) { return {a, 0.0, 0.0, b}; }

    [[nodiscard]] Complex det() const { return e11 * e22 - e12 * e21; }
    [[nodiscard]] Complex trace() const { return e11 + e22; }
    /// Frobenius norm.
    [[nodiscard]] double norm() const;
    [[nodiscard]] bool is_finite() const;
    /// Throws SingularInversion when |det| < floor * norm()^2.
    [[nodiscard]] ComplexMat2 inverse(double relative_floor = 1e-12) const;

    friend ComplexMat2 operator*(const ComplexMat2& a, const ComplexMat2& b) {
        return {a.e11 * b.e11 + a.e12 * b.e21, a.e11 * b.e12 + a.e12 * b.e22,
                a.e21 * b.e11 + a.e22 * b.e21, a.e21 * b.e12 + a.e22 * b.e22};
    }
    friend ComplexMat2 operator+(const ComplexMat2& a, const ComplexMat2& b) {
        return {a.e11 + b.e11, a.e12 + b.e12, a.e21 + b.e21, a.e22 + b.e22};
    }
    friend ComplexMat2 operator-(const ComplexMat2& a, const ComplexMat2& b) {
        return {a.e11 - b.e11, a.e12 - b.e12, a.e21 - b.e21, a.e22 - b.e22};
    }
    friend ComplexMat2 operator*(Complex k, const ComplexMat2& a) {
        return {k * a.e11, k * a.e12, k * a.e21, k * a.e22};
    }
    friend bool operator==(const ComplexMat2&, const ComplexMat2&) = default;
};

/// Polynomial with complex coefficients stored in ascending powers.
class Polynomial {
public:
    Polynomial() = default;
    explicit Polynomial(std::vector<Complex> ascending);
    Polynomial(std::initializer_list<Complex> ascending)
        : Polynomial(std::vector<Complex>(ascending)) {}

    /// Monic polynomial with the given roots.
    static Polynomial from_roots(std::span<const Complex> roots, Complex leading = 1.0);
    static Polynomial constant(Complex c) { return Polynomial({c}); }

    [[nodiscard]] const std::vector<Complex>& coefficients() const noexcept { return c_; }
    /// Degree of the polynomial; -1 for the zero polynomial.
    [[nodiscard]] int degree() const noexcept { return static_cast<int>(c_.size()) - 1; }
    [[nodiscard]] bool is_zero() const noexcept { return c_.empty(); }
    [[nodiscard]] Complex leading() const { return c_.empty() ? Complex{} : c_.back(); }
    [[nodiscard]] Complex operator()(Complex s) const;
    [[nodiscard]] Polynomial derivative() const;
    /// p(s - shift): substitutes s -> s - shift.
    [[nodiscard]] Polynomial shifted(Complex shift) const;

    friend Polynomial operator+(const Polynomial& a, const Polynomial& b);
    friend Polynomial operator-(const Polynomial& a, const Polynomial& b);
    friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
    friend Polynomial operator*(Complex k, const Polynomial& a);

private:
    void trim();
    std::vector<Complex> c_;
};

/// Roots via eigenvalues of the companion matrix (scaled for conditioning).
/// Throws RootFindingFailure when the eigensolver does not converge.
std::vector<Complex> polynomial_roots(const Polynomial& p);

inline constexpr double kDefaultPoleFloor = 1e-12;

/// Proper rational function num(s)/den(s), deg(num) <= deg(den).
class RationalFunction {
public:
    RationalFunction() : RationalFunction(Polynomial{0.0}, Polynomial{1.0}) {}
    RationalFunction(Polynomial num, Polynomial den);

    static RationalFunction constant(Complex c) {
        return {Polynomial::constant(c), Polynomial::constant(1.0)};
    }

    [[nodiscard]] const Polynomial& numerator() const noexcept { return num_; }
    [[nodiscard]] const Polynomial& denominator() const noexcept { return den_; }

private:
    Polynomial num_;
    Polynomial den_;
};

/// Horner evaluation of num(s)/den(s). Throws PoleHit when |den(s)| < floor.
Complex eval_rational(const RationalFunction& f, Complex s, double pole_floor = kDefaultPoleFloor);

/// Closed-form 2x2 device model (synthetic stand-in for a measured admittance).
struct RationalMatrix2 {
    RationalFunction e11, e12, e21, e22;

    [[nodiscard]] const RationalFunction& at(int row, int col) const;
    /// Copy with the off-diagonal entries replaced by zero.
    [[nodiscard]] RationalMatrix2 diagonal_only() const;
};

ComplexMat2 eval_rational_matrix(const RationalMatrix2& m, AngularFrequency omega,
                                 double pole_floor = kDefaultPoleFloor);

struct SelfStabilityOptions {
    double tolerance = 1e-9;
    /// Also require the numerator roots (transmission zeros of each entry) in the open LHP.
    bool check_zeros = false;
};

struct SelfStabilityVerdict {
    bool stable = true;
    std::vector<Complex> offending_roots;
};

SelfStabilityVerdict check_self_stable(const RationalMatrix2& m, const SelfStabilityOptions& opts = {});

/// White-box grid model parameters (physical units).
struct GridParams {
    double rs = 0.0;       ///< series resistance, ohm
    double l_total = 0.0;  ///< Ls + LT, henry
    double omega1 = kTwoPi * 50.0;  ///< fundamental, rad/s
    std::optional<double> cs;       ///< optional series capacitance, farad

    void validate() const;
};

/// Diagonal grid impedance at s (e11) and at the coupled frequency s - j2*omega1 (e22).
/// Throws SingularFrequency at a capacitor pole.
ComplexMat2 grid_impedance(AngularFrequency omega, const GridParams& p);

/// Grid diagonal entries as ratios of polynomials in s (impedance may be improper).
struct GridPolynomials {
    Polynomial num11, den11, num22, den22;
};
GridPolynomials grid_impedance_polynomials(const GridParams& p);

/// Frequencies (rad/s) at which the grid impedance has a pole on the imaginary axis.
std::vector<double> grid_pole_frequencies(const GridParams& p);

}  // namespace apsam
