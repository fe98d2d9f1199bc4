#pragma once

// Independent checks of the determinant-based assessment: eigenvalue loci
// with the generalized Nyquist criterion, an exact zero count for closed-form
// systems, and admittance/impedance-form agreement.

#include <functional>
#include <numbers>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "apsam/analysis.hpp"

namespace apsam {

// Eigenvalue loci ---------------------------------------------------------------

struct EigenLoci {
    std::vector<double> omegas;
    std::vector<Complex> trace1;
    std::vector<Complex> trace2;
    std::vector<PoleGap> gaps;
    std::size_t coarse_intervals = 0;  ///< intervals still turning faster than max_turn
};

struct LociOptions {
    /// Largest turn of 1 + lambda (rad) accepted between neighbouring points; 0 disables the check.
    double max_turn = std::numbers::pi / 3.0;
    /// Return ratio at an arbitrary rad/s; when set, coarse intervals are bisected with it.
    std::function<ComplexMat2(double)> model;
    int max_depth = 8;
};

/// Both eigenvalues of a 2x2 matrix from lambda^2 - tr lambda + det = 0.
std::pair<Complex, Complex> eigenvalues(const ComplexMat2& m);

/// Eigenvalues at every frequency, paired with the previous frequency by minimal total distance.
EigenLoci eigen_loci(const std::vector<double>& omegas, const std::vector<ComplexMat2>& g,
                     std::vector<PoleGap> gaps = {}, const LociOptions& opts = {});

/// Return ratio G = Z_grid Y along the table (grid-pole rows skipped), as loci.
EigenLoci return_ratio_loci(const GridParams& grid, const FrequencyResponseTable& table, const LociOptions& opts = {});

/// As above, bisecting coarse intervals by evaluating the closed-form device.
EigenLoci return_ratio_loci(const RationalMatrix2& device, const GridParams& grid, const FrequencyResponseTable& table,
                            LociOptions opts = {});

struct GncVerdict {
    bool stable = true;
    long winding = 0;         ///< clockwise encirclements of (-1, 0)
    double turns = 0.0;       ///< accumulated counter-clockwise turns
    double ray_turns = 0.0;   ///< counter-clockwise turns by ray crossings
    bool undersampled = false;  ///< coarse intervals remain or the two counts disagree
};

/// Winding of 1 + lambda around the origin for both traces, each closed from last to first sample.
GncVerdict gnc_verdict(const EigenLoci& loci);

// Exact oracle --------------------------------------------------------------------

/// det(I + Z_grid Y) as numerator over its denominator, expanded in x = s - center.
/// Factors shared by the diagonal and off-diagonal denominator products appear once.
struct DeterminantPolynomials {
    Polynomial numerator;
    Complex center;
    std::vector<Complex> denominator_roots;
};

DeterminantPolynomials determinant_polynomials(const RationalMatrix2& device, const GridParams& grid);

struct OracleReport {
    long rhp_zero_count = 0;
    std::vector<Complex> zeros;       ///< zeros with Re > tolerance
    std::vector<Complex> all_zeros;   ///< after removing cancelled denominator roots
    int degree = 0;
    bool conditioning_warning = false;
    std::optional<Complex> critical_zero;  ///< zero closest to the imaginary axis
};

OracleReport oracle_rhp_zeros(const RationalMatrix2& device, const GridParams& grid, double tolerance = 1e-9);

// Admittance / impedance agreement ----------------------------------------------

struct ConsistencyTolerances {
    double sigma_relative = 0.05;
    double sigma_absolute = 0.01;
    double omega_absolute = 0.5;  ///< rad/s
};

struct ConsistencyReport {
    AnalysisReport admittance;
    AnalysisReport impedance;
    bool agree = false;
    std::vector<std::string> mismatches;
};

/// Analyses the same noiseless sweep in both forms and compares the outcomes.
ConsistencyReport compare_forms(const RationalMatrix2& device, const GridParams& grid, const FrequencyPlan& plan,
                                const ConsistencyTolerances& tol = {}, const AnalysisOptions& opts = {});

class ConsistencyError : public Error {
public:
    explicit ConsistencyError(ConsistencyReport report);
    [[nodiscard]] const ConsistencyReport& report() const noexcept { return report_; }

private:
    ConsistencyReport report_;
};

/// compare_forms, throwing ConsistencyError when the forms disagree.
ConsistencyReport consistency_check(const RationalMatrix2& device, const GridParams& grid, const FrequencyPlan& plan,
                                    const ConsistencyTolerances& tol = {}, const AnalysisOptions& opts = {});

// Timing ------------------------------------------------------------------------

struct TimingComparison {
    double determinant_seconds = 0.0;  ///< trajectory + crossings + verdict
    double loci_seconds = 0.0;         ///< eigenvalue loci + winding
    std::size_t points = 0;
};

TimingComparison compare_timing(const GridParams& grid, const FrequencyResponseTable& table, int repeats = 5);

}  // namespace apsam
