#pragma once

// JSON mappings for the configuration and report documents.

#include "json.hpp"

#include "apsam/model.hpp"
#include "apsam/sweep.hpp"

namespace apsam {

/// Coefficient lists accept plain numbers or [re, im] pairs.
Polynomial polynomial_from_json(const nlohmann::json& j);
nlohmann::json polynomial_to_json(const Polynomial& p);

/// {"y11": {"num": [...], "den": [...]}, "y12": ..., "y21": ..., "y22": ...}; missing entries are zero.
RationalMatrix2 rational_matrix_from_json(const nlohmann::json& j);
nlohmann::json rational_matrix_to_json(const RationalMatrix2& m);

/// {"rs": ohm, "l_total": H, "f1_hz": Hz, "cs": F|null}
GridParams grid_from_json(const nlohmann::json& j);
nlohmann::json grid_to_json(const GridParams& g);

/// {"f1_hz": Hz, "bands": [{"f_start": Hz, "f_end": Hz, "step": Hz}, ...]} or "default".
FrequencyPlan plan_from_json(const nlohmann::json& j);
nlohmann::json plan_to_json(const FrequencyPlan& p);

nlohmann::json complex_to_json(Complex z);

}  // namespace apsam
