#pragma once

// End-to-end assessment of a measured response table against a grid model.

#include <optional>
#include <string>
#include <vector>

#include "apsam/critical_pole.hpp"
#include "apsam/idta.hpp"

namespace apsam {

struct AnalysisOptions {
    TrajectoryForm form = TrajectoryForm::Admittance;
    AssessmentOptions assessment;
    SlopeOptions slope;
    bool quantitative = true;
};

struct AnalysisReport {
    TrajectoryForm form = TrajectoryForm::Admittance;
    DeterminantTrajectory trajectory;
    Assessment assessment;
    std::optional<CriticalPoleEstimate> pole;
    std::vector<double> dropped_omegas;
    std::vector<std::string> diagnostics;

    [[nodiscard]] const StabilityVerdict& verdict() const { return assessment.verdict; }
};

/// Determinant trajectory in the requested form; grid-pole rows are skipped in admittance form.
DeterminantTrajectory build_trajectory(const GridParams& grid, const FrequencyResponseTable& table,
                                       TrajectoryForm form, std::vector<double>* dropped = nullptr);

AnalysisReport analyze(const GridParams& grid, const FrequencyResponseTable& table, const AnalysisOptions& opts = {});

}  // namespace apsam
