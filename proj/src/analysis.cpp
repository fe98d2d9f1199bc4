#include "apsam/analysis.hpp"

namespace apsam {

DeterminantTrajectory build_trajectory(const GridParams& grid, const FrequencyResponseTable& table,
                                       TrajectoryForm form, std::vector<double>* dropped) {
    if (form == TrajectoryForm::Admittance) {
        const FrequencyResponseTable kept = exclude_grid_poles(table, grid);
        if (dropped) {
            for (const auto& s : table.samples()) {
                bool found = false;
                for (const auto& k : kept.samples()) found = found || k.f_hz == s.f_hz;
                if (!found) dropped->push_back(s.omega().value());
            }
        }
        return return_difference_determinant(grid, kept);
    }
    ImpedanceFormResult r = determinant_impedance_form(grid, table);
    if (dropped) dropped->insert(dropped->end(), r.dropped_omegas.begin(), r.dropped_omegas.end());
    return std::move(r.trajectory);
}

AnalysisReport analyze(const GridParams& grid, const FrequencyResponseTable& table, const AnalysisOptions& opts) {
    if (table.size() < 4) {
        throw Error(ErrorCode::InsufficientSamples, "response table has " + std::to_string(table.size()) +
                                                        " rows; at least 4 are required");
    }
    AnalysisReport r;
    r.form = opts.form;
    r.trajectory = build_trajectory(grid, table, opts.form, &r.dropped_omegas);
    r.assessment = assess_trajectory(r.trajectory, opts.assessment);
    r.diagnostics = r.assessment.verdict.diagnostics;
    if (!r.dropped_omegas.empty()) {
        r.diagnostics.push_back(std::to_string(r.dropped_omegas.size()) + " singular point(s) dropped");
    }
    if (opts.quantitative) {
        try {
            r.pole = critical_pole(r.trajectory, opts.slope);
            if (!r.pole) r.diagnostics.emplace_back("no critical zero: imaginary part never crosses zero");
        } catch (const Error& e) {
            if (e.code() != ErrorCode::FlatSlope && e.code() != ErrorCode::InsufficientSamples &&
                e.code() != ErrorCode::IllConditionedFit) {
                throw;
            }
            r.diagnostics.push_back(std::string("critical pole unavailable: ") + e.what());
        }
    }
    return r;
}

}  // namespace apsam
