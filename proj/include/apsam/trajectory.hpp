#pragma once

#include <cstddef>
#include <string_view>
#include <vector>

#include "apsam/model.hpp"
#include "apsam/sweep.hpp"

namespace apsam {

enum class TrajectoryForm { Admittance, Impedance };

std::string_view to_string(TrajectoryForm form);

struct TrajectorySample {
    double omega = 0.0;  ///< rad/s
    double re = 0.0;
    double im = 0.0;

    [[nodiscard]] Complex value() const { return {re, im}; }
};

/// Frequency excluded from the trajectory because D has a pole of the given
/// order on the imaginary axis there (series-capacitor grids). The contour
/// detours around it on the right, which maps to a large clockwise arc of D.
struct PoleGap {
    double omega = 0.0;
    int order = 1;
};

/// Samples of the return-difference determinant D(jw) ordered by frequency.
class DeterminantTrajectory {
public:
    DeterminantTrajectory() = default;
    DeterminantTrajectory(std::vector<TrajectorySample> samples, TrajectoryForm form,
                          std::vector<PoleGap> gaps = {});

    [[nodiscard]] const std::vector<TrajectorySample>& samples() const noexcept { return samples_; }
    [[nodiscard]] TrajectoryForm form() const noexcept { return form_; }
    [[nodiscard]] const std::vector<PoleGap>& gaps() const noexcept { return gaps_; }
    [[nodiscard]] std::size_t size() const noexcept { return samples_.size(); }
    [[nodiscard]] const TrajectorySample& operator[](std::size_t k) const { return samples_[k]; }
    [[nodiscard]] double omega_min() const { return samples_.front().omega; }
    [[nodiscard]] double omega_max() const { return samples_.back().omega; }

    /// Piecewise-linear value at omega (clamped to the sampled range).
    [[nodiscard]] Complex value_at(double omega) const;
    [[nodiscard]] double max_magnitude() const;
    /// Copy with every value multiplied by k.
    [[nodiscard]] DeterminantTrajectory scaled(double k) const;
    /// D'(w) = D(-w): the same curve traversed in the opposite direction.
    [[nodiscard]] DeterminantTrajectory mirrored() const;
    /// Samples within [lo, hi].
    [[nodiscard]] DeterminantTrajectory restricted(double lo, double hi) const;

private:
    std::vector<TrajectorySample> samples_;
    TrajectoryForm form_ = TrajectoryForm::Admittance;
    std::vector<PoleGap> gaps_;
};

/// D(jw) = det(I + Z_grid(jw) Y(jw)) at every table frequency. Pole gaps are
/// recorded for grid poles that fall strictly between table samples.
DeterminantTrajectory return_difference_determinant(const GridParams& grid, const FrequencyResponseTable& table);

/// Table without the rows that sit on a grid-impedance pole.
FrequencyResponseTable exclude_grid_poles(const FrequencyResponseTable& table, const GridParams& grid);

struct ImpedanceFormResult {
    DeterminantTrajectory trajectory;
    std::vector<double> dropped_omegas;
};

/// D(jw) = det(I + Z_dev(jw) Y_grid(jw)) from aligned per-frequency sources.
/// Points where either matrix fails the inversion floor are dropped and reported.
ImpedanceFormResult determinant_impedance_form(const std::vector<double>& omegas,
                                               const std::vector<ComplexMat2>& grid_admittance,
                                               const std::vector<ComplexMat2>& device_impedance);

/// Impedance form from the grid model and a measured admittance table
/// (Z_dev = inverse(Y), Y_grid = inverse(Z_grid)).
ImpedanceFormResult determinant_impedance_form(const GridParams& grid, const FrequencyResponseTable& table);

/// Grid admittance evaluated directly as the reciprocal rational function (finite at capacitor poles).
ComplexMat2 grid_admittance(AngularFrequency omega, const GridParams& grid);

// Axis crossings --------------------------------------------------------------

/// Intersection type by half-axis: 1 positive real, 2 negative imaginary,
/// 3 negative real, 4 positive imaginary (clockwise order).
enum class CrossingKind : int { PosReal = 1, NegImag = 2, NegReal = 3, PosImag = 4 };

int label(CrossingKind kind);
CrossingKind kind_from_label(int label);

struct Crossing {
    std::size_t index = 0;      ///< left sample of the bracketing interval
    double omega_cross = 0.0;   ///< rad/s, interpolated
    CrossingKind kind = CrossingKind::PosReal;
    double on_axis_value = 0.0; ///< the nonzero coordinate at the crossing
    bool closure = false;       ///< found on the closing segment last -> first sample
    bool bridged = false;       ///< found on a pole-gap arc

    [[nodiscard]] bool on_real_axis() const {
        return kind == CrossingKind::PosReal || kind == CrossingKind::NegReal;
    }
};

struct OriginPass {
    std::size_t index = 0;
    double omega = 0.0;
};

struct CrossingOptions {
    /// Relative to the largest |D| on the trajectory.
    double origin_tolerance = 1e-9;
    /// Also scan the segment from the last sample back to the first one.
    bool close_contour = false;
};

struct CrossingScan {
    std::vector<Crossing> crossings;
    std::vector<OriginPass> origin_passes;
    std::vector<std::size_t> ambiguous_intervals;
    bool low_resolution = false;
};

CrossingScan detect_crossings(const DeterminantTrajectory& t, const CrossingOptions& opts = {});

struct BoundaryCheck {
    Complex limit_estimate;
    double deviation = 0.0;  ///< max |D(end) - limit| relative to max(|limit|, 1)
    bool settled = true;
};

/// Heuristic check that D has levelled off at both ends of the sweep, which
/// the straight closing segment assumes.
BoundaryCheck boundary_settlement(const DeterminantTrajectory& t, double relative_tolerance = 0.1);

// Refinement ------------------------------------------------------------------

enum class InterpolationMethod { PiecewiseLinear, CubicFit, Lagrange };

std::string_view to_string(InterpolationMethod m);
InterpolationMethod interpolation_method_from_string(std::string_view name);

struct FrequencyWindow {
    double lo = 0.0;  ///< rad/s
    double hi = 0.0;  ///< rad/s
};

/// Re and Im refined independently on the grid lo, lo + step, ... <= hi.
DeterminantTrajectory interpolate(const DeterminantTrajectory& t, InterpolationMethod method, double step,
                                  FrequencyWindow window);

}  // namespace apsam
