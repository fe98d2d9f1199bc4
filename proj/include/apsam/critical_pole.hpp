#pragma once

#include <limits>
#include <optional>

#include "apsam/trajectory.hpp"

namespace apsam {

/// Frequency where Im D crosses zero with the smallest |D| at the crossing.
struct CandidateFrequency {
    double omega = 0.0;      ///< rad/s
    std::size_t index = 0;   ///< left sample of the bracketing interval
    double magnitude = 0.0;  ///< |D| at the interpolated crossing
};

/// Empty when Im D never crosses zero: there is no critical zero to estimate.
std::optional<CandidateFrequency> find_candidate_frequency(const DeterminantTrajectory& t);

struct SlopeOptions {
    InterpolationMethod method = InterpolationMethod::PiecewiseLinear;
    double step_hz = 0.1;
    /// Half-width of the refinement window around the candidate, Hz.
    double half_window_hz = 1.0;
};

struct LocalSlope {
    double a = 0.0;  ///< dIm/dw
    double b = 0.0;  ///< -dRe/dw
    Complex d_star;  ///< D at the candidate frequency on the refined data
    FrequencyWindow window;
    double step = 0.0;  ///< rad/s
};

/// Slopes of Re D and Im D over the refined step that brackets omega_star.
LocalSlope local_slope(const DeterminantTrajectory& t, double omega_star, const SlopeOptions& opts = {});

struct CriticalPoleEstimate {
    double sigma = 0.0;  ///< 1/s
    double omega = 0.0;  ///< rad/s
    double a = 0.0;
    double b = 0.0;
    double omega_star = 0.0;
    Complex d_star;
    double tau = std::numeric_limits<double>::infinity();  ///< s
    InterpolationMethod method = InterpolationMethod::PiecewiseLinear;
    double step = 0.0;
    FrequencyWindow window;

    [[nodiscard]] Complex zero() const { return {sigma, omega}; }
};

/// z = j*omega_star - D(j*omega_star) / (a + jb).
CriticalPoleEstimate estimate_critical_pole(double omega_star, const LocalSlope& slope);

/// Damping from the real part of D at an imaginary-part zero crossing: -Re(D) a / (a^2 + b^2).
double sigma_at_crossing(double re_d, double a, double b);

/// Candidate search, slope extraction and estimate; empty when there is no candidate.
std::optional<CriticalPoleEstimate> critical_pole(const DeterminantTrajectory& t, const SlopeOptions& opts = {});

}  // namespace apsam
