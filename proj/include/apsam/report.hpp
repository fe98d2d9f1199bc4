#pragma once

// JSON reports and CSV plot exports for analysis results.

#include <iosfwd>

#include "json.hpp"

#include "apsam/workflow.hpp"

namespace apsam {

nlohmann::json pole_to_json(const CriticalPoleEstimate& p);
nlohmann::json analysis_report_to_json(const AnalysisReport& r);
nlohmann::json verify_report_to_json(const VerifyReport& r);
nlohmann::json interval_study_to_json(const IntervalStudy& s);
nlohmann::json batch_to_json(const BatchResult& b);

/// omega_rad_s,f_hz,re,im
void write_trajectory_csv(std::ostream& os, const DeterminantTrajectory& t);
/// seq,kind,label,coordinate,omega_rad_s,f_hz
void write_idta_csv(std::ostream& os, const IdtaCurve& c);
/// omega_rad_s,f_hz,re1,im1,re2,im2
void write_loci_csv(std::ostream& os, const EigenLoci& l);

}  // namespace apsam
