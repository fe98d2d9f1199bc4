#pragma once

// Multi-step studies built on the analysis pipeline: cross-verification of a
// closed-form device, sweep-interval sensitivity and batch scenario runs.

#include <optional>
#include <string>
#include <vector>

#include "apsam/config.hpp"

namespace apsam {

struct VerifyOptions {
    FrequencyPlan plan = FrequencyPlan::uniform(-1000.0, 1000.0, 1.0);
    AnalysisOptions analysis;
    ConsistencyTolerances consistency;
    int timing_repeats = 3;
};

struct VerifyReport {
    AnalysisReport apsam;
    EigenLoci loci;
    GncVerdict gnc;
    OracleReport oracle;
    ConsistencyReport consistency;
    AnalysisReport diagonal;         ///< pipeline on the diagonal-only table
    OracleReport diagonal_oracle;    ///< oracle on the diagonal-only device
    TimingComparison timing;
    double oracle_seconds = 0.0;
    bool agreement = false;
    /// Full model unstable while the diagonal-only truncation looks stable.
    bool truncation_misjudgment = false;
    std::vector<std::string> disagreements;
};

/// Runs the pipeline, eigenvalue loci, exact oracle, form consistency and diagonal truncation
/// on a noiseless sweep of the device.
VerifyReport verify_device(const RationalMatrix2& device, const GridParams& grid, const VerifyOptions& opts = {});

struct IntervalRow {
    double step_hz = 0.0;
    std::size_t points = 0;
    std::optional<CriticalPoleEstimate> pole;
    double sigma_error = 0.0;  ///< |sigma - reference sigma|
    double omega_error = 0.0;  ///< |omega - reference omega|, rad/s
    bool sign_correct = false;
    std::string note;
};

struct IntervalStudy {
    std::optional<Complex> reference;  ///< oracle critical zero
    std::vector<IntervalRow> rows;
    bool asserted = false;  ///< monotonicity is only checked with two or more intervals
    bool monotone = true;
};

/// Sweeps the device over the plan's span at each step (Hz, coarse to fine) and compares
/// the critical-pole estimate with the oracle. Errors must not grow by more than slack
/// as the step shrinks, and must strictly shrink between the first two steps.
IntervalStudy interval_study(const RationalMatrix2& device, const GridParams& grid, const FrequencyPlan& span,
                             const std::vector<double>& steps_hz, const SlopeOptions& slope = {},
                             double slack = 0.0);

struct BatchRow {
    std::string name;
    std::optional<AnalysisReport> report;
    std::string error;
};

struct BatchResult {
    std::vector<BatchRow> rows;
    std::vector<std::size_t> worst_first;  ///< successful rows by decreasing sigma
    std::size_t failures = 0;
};

BatchResult run_batch(const AnalysisConfig& c);

}  // namespace apsam
