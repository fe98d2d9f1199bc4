#pragma once

#include <cmath>
#include <vector>

#include "apsam/trajectory.hpp"

namespace apsam::test {

inline bool near(Complex a, Complex b, double tol) { return std::abs(a - b) <= tol; }

/// Trajectory sampled from f at the given angular frequencies.
template <typename F>
DeterminantTrajectory sampled(const std::vector<double>& omegas, F&& f) {
    std::vector<TrajectorySample> s;
    for (const double w : omegas) {
        const Complex d = f(w);
        s.push_back({w, d.real(), d.imag()});
    }
    return DeterminantTrajectory(std::move(s), TrajectoryForm::Admittance);
}

inline std::vector<double> linspace(double lo, double hi, std::size_t n) {
    std::vector<double> out(n);
    for (std::size_t k = 0; k < n; ++k) out[k] = lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(n - 1);
    return out;
}

}  // namespace apsam::test
