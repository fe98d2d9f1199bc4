#include "apsam/workflow.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>

namespace apsam {

namespace {

std::string count_mismatch(const char* what, long a, long b) {
    return std::string(what) + " (" + std::to_string(a) + " vs " + std::to_string(b) + ")";
}

double sigma_key(const BatchRow& r) {
    if (r.report && r.report->pole) return r.report->pole->sigma;
    return -std::numeric_limits<double>::infinity();
}

}  // namespace

VerifyReport verify_device(const RationalMatrix2& device, const GridParams& grid, const VerifyOptions& opts) {
    VerifyReport r;
    const FrequencyResponseTable table = sweep(device, opts.plan);
    AnalysisOptions admittance = opts.analysis;
    admittance.form = TrajectoryForm::Admittance;
    r.apsam = analyze(grid, table, admittance);
    r.loci = return_ratio_loci(device, grid, table);
    r.gnc = gnc_verdict(r.loci);

    const auto t0 = std::chrono::steady_clock::now();
    r.oracle = oracle_rhp_zeros(device, grid);
    r.oracle_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    r.consistency = compare_forms(device, grid, opts.plan, opts.consistency, opts.analysis);

    AnalysisOptions qualitative = admittance;
    qualitative.quantitative = false;
    r.diagonal = analyze(grid, table.diagonal_only(), qualitative);
    r.diagonal_oracle = oracle_rhp_zeros(device.diagonal_only(), grid);
    r.timing = compare_timing(grid, table, opts.timing_repeats);

    const long apsam = r.apsam.verdict().winding;
    if (apsam != r.oracle.rhp_zero_count) r.disagreements.push_back(count_mismatch("apsam winding differs from oracle", apsam, r.oracle.rhp_zero_count));
    if (r.gnc.winding != r.oracle.rhp_zero_count) r.disagreements.push_back(count_mismatch("gnc winding differs from oracle", r.gnc.winding, r.oracle.rhp_zero_count));
    for (const std::string& m : r.consistency.mismatches) r.disagreements.push_back("forms: " + m);
    const long diag = r.diagonal.verdict().winding;
    if (diag != r.diagonal_oracle.rhp_zero_count) {
        r.disagreements.push_back(count_mismatch("diagonal-only winding differs from its oracle", diag, r.diagonal_oracle.rhp_zero_count));
    }
    r.agreement = r.disagreements.empty();
    r.truncation_misjudgment = r.oracle.rhp_zero_count > 0 && r.diagonal_oracle.rhp_zero_count == 0 &&
                               !r.apsam.verdict().stable && r.diagonal.verdict().stable;
    return r;
}

IntervalStudy interval_study(const RationalMatrix2& device, const GridParams& grid, const FrequencyPlan& span,
                             const std::vector<double>& steps_hz, const SlopeOptions& slope, double slack) {
    span.validate();
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (const FrequencyBand& b : span.bands) {
        lo = std::min(lo, b.f_start_hz);
        hi = std::max(hi, b.f_end_hz);
    }
    IntervalStudy study;
    study.reference = oracle_rhp_zeros(device, grid).critical_zero;
    for (const double step : steps_hz) {
        IntervalRow row;
        row.step_hz = step;
        const FrequencyResponseTable table = sweep(device, FrequencyPlan::uniform(lo, hi, step, span.f1_hz));
        row.points = table.size();
        try {
            row.pole = critical_pole(build_trajectory(grid, table, TrajectoryForm::Admittance), slope);
        } catch (const Error& e) {
            row.note = e.what();
        }
        if (!row.pole) {
            if (row.note.empty()) row.note = "no candidate: imaginary part never crosses zero";
        } else if (study.reference) {
            row.sigma_error = std::abs(row.pole->sigma - study.reference->real());
            row.omega_error = std::abs(row.pole->omega - study.reference->imag());
            row.sign_correct = (row.pole->sigma > 0.0) == (study.reference->real() > 0.0);
        }
        study.rows.push_back(std::move(row));
    }
    const bool all_estimated = std::all_of(study.rows.begin(), study.rows.end(),
                                           [](const IntervalRow& r) { return r.pole.has_value(); });
    study.asserted = study.rows.size() >= 2 && all_estimated && study.reference.has_value();
    if (study.asserted) {
        study.monotone = study.rows[0].sigma_error > study.rows[1].sigma_error;
        for (std::size_t k = 1; k + 1 < study.rows.size(); ++k) {
            study.monotone = study.monotone && study.rows[k + 1].sigma_error <= study.rows[k].sigma_error + slack;
        }
    }
    return study;
}

BatchResult run_batch(const AnalysisConfig& c) {
    BatchResult out;
    for (const Scenario& s : c.scenarios) {
        BatchRow row;
        row.name = s.name;
        try {
            const ResolvedDevice d = resolve(s, c);
            row.report = analyze(d.grid, response_table(d, c), c.analysis_options());
        } catch (const std::exception& e) {
            row.error = e.what();
            ++out.failures;
        }
        out.rows.push_back(std::move(row));
    }
    for (std::size_t k = 0; k < out.rows.size(); ++k) {
        if (out.rows[k].report) out.worst_first.push_back(k);
    }
    std::stable_sort(out.worst_first.begin(), out.worst_first.end(), [&](std::size_t a, std::size_t b) {
        return sigma_key(out.rows[a]) > sigma_key(out.rows[b]);
    });
    return out;
}

}  // namespace apsam
