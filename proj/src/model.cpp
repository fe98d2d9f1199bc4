#include "apsam/model.hpp"

#include <algorithm>
#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

namespace apsam {

std::string_view to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::InvalidArgument: return "InvalidArgument";
        case ErrorCode::SingularFrequency: return "SingularFrequency";
        case ErrorCode::PoleHit: return "PoleHit";
        case ErrorCode::RootFindingFailure: return "RootFindingFailure";
        case ErrorCode::EmptyPlan: return "EmptyPlan";
        case ErrorCode::DegeneratePerturbations: return "DegeneratePerturbations";
        case ErrorCode::SingularMeasurement: return "SingularMeasurement";
        case ErrorCode::SingularInversion: return "SingularInversion";
        case ErrorCode::InsufficientSamples: return "InsufficientSamples";
        case ErrorCode::IllConditionedFit: return "IllConditionedFit";
        case ErrorCode::NonAdjacentSequence: return "NonAdjacentSequence";
        case ErrorCode::InconsistentCurve: return "InconsistentCurve";
        case ErrorCode::FlatSlope: return "FlatSlope";
        case ErrorCode::PassThroughCriticalPoint: return "PassThroughCriticalPoint";
        case ErrorCode::DegenerateNumerator: return "DegenerateNumerator";
        case ErrorCode::ConsistencyViolation: return "ConsistencyViolation";
        case ErrorCode::ParseError: return "ParseError";
    }
    return "Unknown";
}

AngularFrequency::AngularFrequency(double rad_per_s) : value_(rad_per_s) {
    if (!std::isfinite(rad_per_s)) {
        throw Error(ErrorCode::InvalidArgument, "angular frequency must be finite");
    }
}

// ---------------------------------------------------------------------------
// ComplexMat2

double ComplexMat2::norm() const {
    return std::sqrt(std::norm(e11) + std::norm(e12) + std::norm(e21) + std::norm(e22));
}

bool ComplexMat2::is_finite() const {
    auto ok = [](Complex z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); };
    return ok(e11) && ok(e12) && ok(e21) && ok(e22);
}

ComplexMat2 ComplexMat2::inverse(double relative_floor) const {
    const Complex d = det();
    const double n = norm();
    if (n == 0.0 || std::abs(d) < relative_floor * n * n) {
        throw Error(ErrorCode::SingularInversion, "2x2 matrix is numerically singular");
    }
    return {e22 / d, -e12 / d, -e21 / d, e11 / d};
}

// ---------------------------------------------------------------------------
// Polynomial

Polynomial::Polynomial(std::vector<Complex> ascending) : c_(std::move(ascending)) { trim(); }

void Polynomial::trim() {
    while (!c_.empty() && c_.back() == Complex{}) {
        c_.pop_back();
    }
}

Polynomial Polynomial::from_roots(std::span<const Complex> roots, Complex leading) {
    Polynomial p{leading};
    for (const Complex r : roots) {
        p = p * Polynomial{-r, 1.0};
    }
    return p;
}

Complex Polynomial::operator()(Complex s) const {
    Complex acc{};
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) {
        acc = acc * s + *it;
    }
    return acc;
}

Polynomial Polynomial::derivative() const {
    if (c_.size() <= 1) return {};
    std::vector<Complex> d(c_.size() - 1);
    for (std::size_t k = 1; k < c_.size(); ++k) {
        d[k - 1] = static_cast<double>(k) * c_[k];
    }
    return Polynomial(std::move(d));
}

Polynomial Polynomial::shifted(Complex shift) const {
    // Horner in polynomial arithmetic: p(s - shift).
    const Polynomial lin{-shift, 1.0};
    Polynomial acc;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) {
        acc = acc * lin + Polynomial{*it};
    }
    return acc;
}

Polynomial operator+(const Polynomial& a, const Polynomial& b) {
    std::vector<Complex> out(std::max(a.c_.size(), b.c_.size()));
    for (std::size_t k = 0; k < a.c_.size(); ++k) out[k] += a.c_[k];
    for (std::size_t k = 0; k < b.c_.size(); ++k) out[k] += b.c_[k];
    return Polynomial(std::move(out));
}

Polynomial operator-(const Polynomial& a, const Polynomial& b) { return a + (-1.0) * b; }

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    if (a.is_zero() || b.is_zero()) return {};
    std::vector<Complex> out(a.c_.size() + b.c_.size() - 1);
    for (std::size_t i = 0; i < a.c_.size(); ++i) {
        for (std::size_t j = 0; j < b.c_.size(); ++j) {
            out[i + j] += a.c_[i] * b.c_[j];
        }
    }
    return Polynomial(std::move(out));
}

Polynomial operator*(Complex k, const Polynomial& a) {
    std::vector<Complex> out = a.c_;
    for (auto& c : out) c *= k;
    return Polynomial(std::move(out));
}

namespace {

// Newton polish against the unscaled polynomial; keeps the step only if it helps.
Complex polish_root(const Polynomial& p, const Polynomial& dp, Complex r) {
    for (int it = 0; it < 3; ++it) {
        const Complex f = p(r);
        const Complex df = dp(r);
        if (df == Complex{}) break;
        const Complex next = r - f / df;
        if (!(std::abs(p(next)) < std::abs(f))) break;
        r = next;
    }
    return r;
}

}  // namespace

std::vector<Complex> polynomial_roots(const Polynomial& p) {
    if (p.is_zero()) {
        throw Error(ErrorCode::InvalidArgument, "roots of the zero polynomial are undefined");
    }
    const auto& c = p.coefficients();
    std::vector<Complex> roots;

    std::size_t low = 0;
    while (low < c.size() && c[low] == Complex{}) {
        roots.emplace_back(0.0, 0.0);
        ++low;
    }
    const int n = static_cast<int>(c.size() - low) - 1;
    if (n <= 0) return roots;

    // Substitute s = scale * x so the reduced roots have unit geometric mean.
    const double scale = std::pow(std::abs(c[low]) / std::abs(c.back()), 1.0 / n);
    std::vector<Complex> q(static_cast<std::size_t>(n) + 1);
    double pw = 1.0;
    for (int k = 0; k <= n; ++k) {
        q[static_cast<std::size_t>(k)] = c[low + static_cast<std::size_t>(k)] * pw;
        pw *= scale;
    }

    Eigen::MatrixXcd companion = Eigen::MatrixXcd::Zero(n, n);
    for (int i = 1; i < n; ++i) companion(i, i - 1) = 1.0;
    for (int i = 0; i < n; ++i) companion(i, n - 1) = -q[static_cast<std::size_t>(i)] / q.back();

    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(companion, /*computeEigenvectors=*/false);
    if (solver.info() != Eigen::Success) {
        throw Error(ErrorCode::RootFindingFailure, "companion eigensolve did not converge");
    }
    const Polynomial dp = p.derivative();
    for (int i = 0; i < n; ++i) {
        roots.push_back(polish_root(p, dp, solver.eigenvalues()(i) * scale));
    }
    return roots;
}

// ---------------------------------------------------------------------------
// Rational functions

RationalFunction::RationalFunction(Polynomial num, Polynomial den)
    : num_(std::move(num)), den_(std::move(den)) {
    if (den_.is_zero()) {
        throw Error(ErrorCode::InvalidArgument, "denominator is identically zero");
    }
    if (num_.degree() > den_.degree()) {
        throw Error(ErrorCode::InvalidArgument, "improper rational function (deg num > deg den)");
    }
}

Complex eval_rational(const RationalFunction& f, Complex s, double pole_floor) {
    const Complex d = f.denominator()(s);
    if (std::abs(d) < pole_floor) {
        throw Error(ErrorCode::PoleHit, "denominator vanishes at the evaluation point");
    }
    return f.numerator()(s) / d;
}

const RationalFunction& RationalMatrix2::at(int row, int col) const {
    if (row == 0 && col == 0) return e11;
    if (row == 0 && col == 1) return e12;
    if (row == 1 && col == 0) return e21;
    if (row == 1 && col == 1) return e22;
    throw Error(ErrorCode::InvalidArgument, "entry index out of range");
}

RationalMatrix2 RationalMatrix2::diagonal_only() const {
    return {e11, RationalFunction{}, RationalFunction{}, e22};
}

ComplexMat2 eval_rational_matrix(const RationalMatrix2& m, AngularFrequency omega, double pole_floor) {
    const Complex s = omega.s();
    ComplexMat2 out;
    Complex* slots[4] = {&out.e11, &out.e12, &out.e21, &out.e22};
    for (int k = 0; k < 4; ++k) {
        const int row = k / 2;
        const int col = k % 2;
        try {
            *slots[k] = eval_rational(m.at(row, col), s, pole_floor);
        } catch (const Error& e) {
            throw Error(ErrorCode::PoleHit, "entry e" + std::to_string(row + 1) + std::to_string(col + 1) +
                                                " at omega=" + std::to_string(omega.value()));
        }
    }
    return out;
}

SelfStabilityVerdict check_self_stable(const RationalMatrix2& m, const SelfStabilityOptions& opts) {
    SelfStabilityVerdict verdict;
    auto scan = [&](const Polynomial& p) {
        if (p.degree() < 1) return;
        for (const Complex r : polynomial_roots(p)) {
            if (!(r.real() < -opts.tolerance)) {
                verdict.stable = false;
                verdict.offending_roots.push_back(r);
            }
        }
    };
    for (const RationalFunction* f : {&m.e11, &m.e12, &m.e21, &m.e22}) {
        scan(f->denominator());
        if (opts.check_zeros && !f->numerator().is_zero()) scan(f->numerator());
    }
    return verdict;
}

// ---------------------------------------------------------------------------
// Grid

void GridParams::validate() const {
    if (!(rs >= 0.0) || !std::isfinite(rs)) throw Error(ErrorCode::InvalidArgument, "grid Rs must be >= 0");
    if (!(l_total >= 0.0) || !std::isfinite(l_total)) {
        throw Error(ErrorCode::InvalidArgument, "grid L_total must be >= 0");
    }
    if (!(omega1 > 0.0) || !std::isfinite(omega1)) throw Error(ErrorCode::InvalidArgument, "omega1 must be > 0");
    if (cs && !(*cs > 0.0 && std::isfinite(*cs))) throw Error(ErrorCode::InvalidArgument, "Cs must be > 0");
}

namespace {

Complex series_branch(Complex s, const GridParams& p) {
    Complex z = p.rs + s * p.l_total;
    if (p.cs) {
        if (std::abs(s) <= 1e-9 * std::max(1.0, p.omega1)) {
            throw Error(ErrorCode::SingularFrequency, "series capacitor pole on the evaluation grid");
        }
        z += 1.0 / (s * *p.cs);
    }
    return z;
}

}  // namespace

ComplexMat2 grid_impedance(AngularFrequency omega, const GridParams& p) {
    const Complex s = omega.s();
    const Complex s2{0.0, omega.value() - 2.0 * p.omega1};
    return ComplexMat2::diag(series_branch(s, p), series_branch(s2, p));
}

GridPolynomials grid_impedance_polynomials(const GridParams& p) {
    Polynomial num;
    Polynomial den;
    if (p.cs) {
        const double c = *p.cs;
        num = Polynomial{1.0, p.rs * c, p.l_total * c};
        den = Polynomial{0.0, c};
    } else {
        num = Polynomial{p.rs, p.l_total};
        den = Polynomial{1.0};
    }
    const Complex shift{0.0, 2.0 * p.omega1};
    return {num, den, num.shifted(shift), den.shifted(shift)};
}

std::vector<double> grid_pole_frequencies(const GridParams& p) {
    if (!p.cs) return {};
    return {0.0, 2.0 * p.omega1};
}

}  // namespace apsam
