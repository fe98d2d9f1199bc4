#include "apsam/report.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "apsam/json_io.hpp"

namespace apsam {

namespace {

using nlohmann::json;

const char* kind_name(CrossingKind k) {
    switch (k) {
        case CrossingKind::PosReal: return "positive-real";
        case CrossingKind::NegImag: return "negative-imaginary";
        case CrossingKind::NegReal: return "negative-real";
        case CrossingKind::PosImag: return "positive-imaginary";
    }
    return "unknown";
}

json finite_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json zeros_to_json(const std::vector<Complex>& zs) {
    json out = json::array();
    for (const Complex& z : zs) out.push_back(complex_to_json(z));
    return out;
}

const char* verdict_name(const StabilityVerdict& v) {
    if (v.marginal) return "marginal";
    return v.stable ? "stable" : "unstable";
}

}  // namespace

json pole_to_json(const CriticalPoleEstimate& p) {
    return {{"sigma_o", p.sigma},
            {"omega_o_rad_s", p.omega},
            {"omega_o_hz", p.omega / kTwoPi},
            {"tau_s", finite_or_null(p.tau)},
            {"a", p.a},
            {"b", p.b},
            {"omega_star_rad_s", p.omega_star},
            {"omega_star_hz", p.omega_star / kTwoPi},
            {"d_star", complex_to_json(p.d_star)},
            {"interpolation", std::string(to_string(p.method))},
            {"step_rad_s", p.step}};
}

json analysis_report_to_json(const AnalysisReport& r) {
    const StabilityVerdict& v = r.verdict();
    json j{{"verdict", verdict_name(v)},
           {"winding", v.winding},
           {"form", std::string(to_string(r.form))},
           {"first_coordinate", v.first_coordinate},
           {"last_coordinate", v.last_coordinate},
           {"crossings", r.assessment.scan.crossings.size()},
           {"refined", r.assessment.refined},
           {"dropped_omegas_rad_s", r.dropped_omegas}};
    if (r.pole) {
        j.update(pole_to_json(*r.pole));
        j["critical_pole"] = "estimated";
    } else {
        for (const char* k : {"sigma_o", "omega_o_rad_s", "omega_o_hz", "tau_s", "a", "b", "omega_star_rad_s", "omega_star_hz"}) {
            j[k] = nullptr;
        }
        j["critical_pole"] = "no critical zero";
    }
    json diagnostics = json::array();
    for (const auto* list : {&v.diagnostics, &r.diagnostics}) {
        for (const std::string& d : *list) {
            if (std::find(diagnostics.begin(), diagnostics.end(), d) == diagnostics.end()) diagnostics.push_back(d);
        }
    }
    j["diagnostics"] = diagnostics;
    return j;
}

json verify_report_to_json(const VerifyReport& r) {
    json consistency{{"agree", r.consistency.agree},
                     {"admittance", analysis_report_to_json(r.consistency.admittance)},
                     {"impedance", analysis_report_to_json(r.consistency.impedance)},
                     {"mismatches", r.consistency.mismatches}};
    json oracle{{"rhp_zero_count", r.oracle.rhp_zero_count},
                {"rhp_zeros", zeros_to_json(r.oracle.zeros)},
                {"degree", r.oracle.degree},
                {"conditioning_warning", r.oracle.conditioning_warning},
                {"critical_zero", r.oracle.critical_zero ? complex_to_json(*r.oracle.critical_zero) : json(nullptr)}};
    json gnc{{"verdict", r.gnc.stable ? "stable" : "unstable"},
             {"winding", r.gnc.winding},
             {"turns", r.gnc.turns},
             {"ray_turns", r.gnc.ray_turns},
             {"undersampled", r.gnc.undersampled},
             {"loci_points", r.loci.omegas.size()}};
    json truncation{{"apsam_verdict", verdict_name(r.diagonal.verdict())},
                    {"apsam_winding", r.diagonal.verdict().winding},
                    {"oracle_count", r.diagonal_oracle.rhp_zero_count},
                    {"misjudgment", r.truncation_misjudgment}};
    return {{"apsam_verdict", verdict_name(r.apsam.verdict())},
            {"apsam_winding", r.apsam.verdict().winding},
            {"gnc_winding", r.gnc.winding},
            {"oracle_count", r.oracle.rhp_zero_count},
            {"agreement", r.agreement},
            {"disagreements", r.disagreements},
            {"apsam", analysis_report_to_json(r.apsam)},
            {"gnc", gnc},
            {"oracle", oracle},
            {"consistency", consistency},
            {"diagonal_truncation", truncation},
            {"timings",
             {{"points", r.timing.points},
              {"determinant_s", r.timing.determinant_seconds},
              {"loci_s", r.timing.loci_seconds},
              {"oracle_s", r.oracle_seconds}}}};
}

json interval_study_to_json(const IntervalStudy& s) {
    json rows = json::array();
    for (const IntervalRow& r : s.rows) {
        json row{{"step_hz", r.step_hz}, {"points", r.points}};
        if (r.pole) {
            row["critical_pole"] = pole_to_json(*r.pole);
            if (s.reference) {
                row["sigma_error"] = r.sigma_error;
                row["omega_error_rad_s"] = r.omega_error;
                row["sign_correct"] = r.sign_correct;
            }
        } else {
            row["critical_pole"] = nullptr;
        }
        if (!r.note.empty()) row["note"] = r.note;
        rows.push_back(row);
    }
    return {{"reference", s.reference ? complex_to_json(*s.reference) : json(nullptr)},
            {"rows", rows},
            {"asserted", s.asserted},
            {"monotone", s.monotone}};
}

json batch_to_json(const BatchResult& b) {
    json rows = json::array();
    for (const BatchRow& r : b.rows) {
        json row{{"name", r.name}};
        if (r.report) {
            row["report"] = analysis_report_to_json(*r.report);
        } else {
            row["error"] = r.error;
        }
        rows.push_back(row);
    }
    json ranking = json::array();
    for (const std::size_t k : b.worst_first) ranking.push_back(b.rows[k].name);
    return {{"scenarios", rows}, {"worst_first", ranking}, {"failures", b.failures}};
}

void write_trajectory_csv(std::ostream& os, const DeterminantTrajectory& t) {
    os << "omega_rad_s,f_hz,re,im\n";
    os.precision(12);
    for (const TrajectorySample& s : t.samples()) {
        os << s.omega << ',' << s.omega / kTwoPi << ',' << s.re << ',' << s.im << '\n';
    }
}

void write_idta_csv(std::ostream& os, const IdtaCurve& c) {
    os << "seq,kind,label,coordinate,omega_rad_s,f_hz\n";
    os.precision(12);
    for (const IdtaPoint& p : c.points) {
        os << p.seq << ',' << kind_name(p.kind) << ',' << label(p.kind) << ',' << p.coordinate << ','
           << p.omega_cross << ',' << p.omega_cross / kTwoPi << '\n';
    }
}

void write_loci_csv(std::ostream& os, const EigenLoci& l) {
    os << "omega_rad_s,f_hz,re1,im1,re2,im2\n";
    os.precision(12);
    for (std::size_t k = 0; k < l.omegas.size(); ++k) {
        os << l.omegas[k] << ',' << l.omegas[k] / kTwoPi << ',' << l.trace1[k].real() << ','
           << l.trace1[k].imag() << ',' << l.trace2[k].real() << ',' << l.trace2[k].imag() << '\n';
    }
}

}  // namespace apsam
