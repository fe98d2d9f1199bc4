// JSON-in, JSON-out bindings for the analysis workflows.

#include <sstream>

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "apsam/config.hpp"
#include "apsam/report.hpp"
#include "apsam/synthetic.hpp"
#include "apsam/workflow.hpp"

namespace py = pybind11;
using namespace apsam;
using nlohmann::json;

namespace {

AnalysisConfig parse(const std::string& text, const std::string& base_dir) {
    return config_from_json(json::parse(text), base_dir);
}

Scenario pick(const AnalysisConfig& c, const std::string& name) {
    if (!name.empty()) {
        for (const Scenario& s : c.scenarios) {
            if (s.name == name) return s;
        }
        if (c.device && c.device->name == name) return *c.device;
        throw Error(ErrorCode::InvalidArgument, "no scenario named " + name);
    }
    if (c.device) return *c.device;
    if (c.scenarios.size() == 1) return c.scenarios.front();
    throw Error(ErrorCode::InvalidArgument, "configuration has no device (or several scenarios and no scenario name)");
}

std::string analyze_json(const std::string& text, const std::string& base_dir, const std::string& scenario) {
    const AnalysisConfig c = parse(text, base_dir);
    const ResolvedDevice d = resolve(pick(c, scenario), c);
    return analysis_report_to_json(analyze(d.grid, response_table(d, c), c.analysis_options())).dump();
}

std::string verify_json(const std::string& text, const std::string& base_dir, const std::string& scenario) {
    const AnalysisConfig c = parse(text, base_dir);
    const ResolvedDevice d = resolve(pick(c, scenario), c);
    if (!d.model) throw Error(ErrorCode::InvalidArgument, "verification needs a closed-form device");
    VerifyOptions o;
    o.plan = c.plan;
    o.analysis = c.analysis_options();
    o.consistency = c.tolerances.consistency;
    return verify_report_to_json(verify_device(*d.model, d.grid, o)).dump();
}

std::string intervals_json(const std::string& text, const std::string& base_dir, const std::string& scenario) {
    const AnalysisConfig c = parse(text, base_dir);
    const ResolvedDevice d = resolve(pick(c, scenario), c);
    if (!d.model) throw Error(ErrorCode::InvalidArgument, "the interval study needs a closed-form device");
    return interval_study_to_json(interval_study(*d.model, d.grid, c.plan, c.intervals_hz, c.slope,
                                                 c.tolerances.interval_slack))
        .dump();
}

std::string batch_json(const std::string& text, const std::string& base_dir) {
    return batch_to_json(run_batch(parse(text, base_dir))).dump();
}

std::string sweep_csv(const std::string& text, const std::string& base_dir, const std::string& scenario) {
    const AnalysisConfig c = parse(text, base_dir);
    const ResolvedDevice d = resolve(pick(c, scenario), c);
    if (!d.model) throw Error(ErrorCode::InvalidArgument, "sweep needs a closed-form device");
    std::ostringstream os;
    write_table_csv(os, response_table(d, c));
    return os.str();
}

}  // namespace

PYBIND11_MODULE(_apsam, m) {
    m.doc() = "Determinant-trajectory stability assessment for 2x2 converter admittances";
    py::register_exception<Error>(m, "ApsamError", PyExc_ValueError);
    py::register_exception<json::exception>(m, "ConfigParseError", PyExc_ValueError);

    m.def("sigma_at_crossing", &sigma_at_crossing, py::arg("re_d_star"), py::arg("a"), py::arg("b"));
    m.def("demo_names", &demo_names);
    m.def("analyze_json", &analyze_json, py::arg("config"), py::arg("base_dir") = "", py::arg("scenario") = "");
    m.def("verify_json", &verify_json, py::arg("config"), py::arg("base_dir") = "", py::arg("scenario") = "");
    m.def("intervals_json", &intervals_json, py::arg("config"), py::arg("base_dir") = "", py::arg("scenario") = "");
    m.def("batch_json", &batch_json, py::arg("config"), py::arg("base_dir") = "");
    m.def("sweep_csv", &sweep_csv, py::arg("config"), py::arg("base_dir") = "", py::arg("scenario") = "");
}
