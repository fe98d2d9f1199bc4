#include "apsam/config.hpp"

#include <fstream>
#include <sstream>

#include "apsam/json_io.hpp"
#include "apsam/synthetic.hpp"

namespace apsam {

namespace {

using nlohmann::json;

double positive(const json& j, const char* key, double fallback) {
    const double v = j.value(key, fallback);
    if (!(v > 0.0)) throw Error(ErrorCode::InvalidArgument, std::string(key) + " must be positive");
    return v;
}

DeviceSource device_from_json(const json& j, const std::filesystem::path& base_dir) {
    if (!j.is_object()) throw Error(ErrorCode::ParseError, "device must be an object");
    DeviceSource d;
    int sources = 0;
    if (j.contains("demo")) {
        d.demo = j.at("demo").get<std::string>();
        ++sources;
    }
    if (j.contains("model")) {
        d.model = rational_matrix_from_json(j.at("model"));
        ++sources;
    }
    if (j.contains("table")) {
        d.table = base_dir / j.at("table").get<std::string>();
        if (!std::filesystem::exists(d.table)) {
            throw Error(ErrorCode::InvalidArgument, "response table not found: " + d.table.string());
        }
        ++sources;
    }
    if (sources != 1) throw Error(ErrorCode::InvalidArgument, "device needs exactly one of demo, model, table");
    return d;
}

json device_to_json(const DeviceSource& d) {
    if (!d.demo.empty()) return {{"demo", d.demo}};
    if (d.model) return {{"model", rational_matrix_to_json(*d.model)}};
    return {{"table", d.table.string()}};
}

Scenario scenario_from_json(const json& j, const std::filesystem::path& base_dir, std::size_t index) {
    Scenario s;
    const json& dev = j.contains("device") ? j.at("device") : j;
    s.device = device_from_json(dev, base_dir);
    s.name = j.value("name", s.device.demo.empty() ? "scenario-" + std::to_string(index) : s.device.demo);
    if (j.contains("grid")) s.grid = grid_from_json(j.at("grid"));
    return s;
}

json scenario_to_json(const Scenario& s) {
    json j{{"name", s.name}, {"device", device_to_json(s.device)}};
    if (s.grid) j["grid"] = grid_to_json(*s.grid);
    return j;
}

}  // namespace

AnalysisOptions AnalysisConfig::analysis_options() const {
    AnalysisOptions o;
    o.form = form;
    o.slope = slope;
    o.assessment.crossings.origin_tolerance = tolerances.crossing;
    return o;
}

SweepOptions AnalysisConfig::sweep_options(const std::string& device_id) const {
    SweepOptions o;
    o.noise = noise;
    o.seed = seed;
    o.device_id = device_id;
    return o;
}

AnalysisConfig config_from_json(const json& j, const std::filesystem::path& base_dir) {
    try {
        if (!j.is_object()) throw Error(ErrorCode::ParseError, "configuration must be an object");
        AnalysisConfig c;
        c.schema_version = j.value("schema_version", -1);
        if (c.schema_version != kConfigSchemaVersion) {
            throw Error(ErrorCode::InvalidArgument,
                        "unsupported schema_version (expected " + std::to_string(kConfigSchemaVersion) + ")");
        }
        if (j.contains("grid")) c.grid = grid_from_json(j.at("grid"));
        if (j.contains("plan")) c.plan = plan_from_json(j.at("plan"));
        c.plan.validate();
        c.noise = j.value("noise", 0.0);
        if (!(c.noise >= 0.0)) throw Error(ErrorCode::InvalidArgument, "noise must be >= 0");
        c.seed = j.value("seed", std::uint64_t{0});
        const std::string form = j.value("form", "admittance");
        if (form == "admittance") {
            c.form = TrajectoryForm::Admittance;
        } else if (form == "impedance") {
            c.form = TrajectoryForm::Impedance;
        } else {
            throw Error(ErrorCode::InvalidArgument, "form must be admittance or impedance");
        }
        if (j.contains("interpolation")) {
            const json& in = j.at("interpolation");
            c.slope.method = interpolation_method_from_string(in.value("method", "piecewise-linear"));
            c.slope.step_hz = positive(in, "step_hz", c.slope.step_hz);
            c.slope.half_window_hz = positive(in, "half_window_hz", c.slope.half_window_hz);
        }
        if (j.contains("tolerances")) {
            const json& t = j.at("tolerances");
            c.tolerances.crossing = positive(t, "crossing", c.tolerances.crossing);
            c.tolerances.consistency.sigma_relative = positive(t, "sigma_relative", c.tolerances.consistency.sigma_relative);
            c.tolerances.consistency.sigma_absolute = positive(t, "sigma_absolute", c.tolerances.consistency.sigma_absolute);
            c.tolerances.consistency.omega_absolute = positive(t, "omega_absolute", c.tolerances.consistency.omega_absolute);
            c.tolerances.interval_slack = t.value("interval_slack", 0.0);
            if (!(c.tolerances.interval_slack >= 0.0)) {
                throw Error(ErrorCode::InvalidArgument, "interval_slack must be >= 0");
            }
        }
        if (j.contains("intervals_hz")) {
            c.intervals_hz = j.at("intervals_hz").get<std::vector<double>>();
            if (c.intervals_hz.empty()) throw Error(ErrorCode::InvalidArgument, "intervals_hz is empty");
            for (const double v : c.intervals_hz) {
                if (!(v > 0.0)) throw Error(ErrorCode::InvalidArgument, "intervals must be positive");
            }
        }
        if (j.contains("device")) c.device = scenario_from_json(j.at("device"), base_dir, 0);
        if (j.contains("scenarios")) {
            const json& list = j.at("scenarios");
            if (!list.is_array()) throw Error(ErrorCode::ParseError, "scenarios must be an array");
            for (std::size_t k = 0; k < list.size(); ++k) {
                c.scenarios.push_back(scenario_from_json(list[k], base_dir, k));
            }
        }
        return c;
    } catch (const json::exception& e) {
        throw Error(ErrorCode::ParseError, std::string("configuration: ") + e.what());
    }
}

AnalysisConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::InvalidArgument, "cannot open configuration " + path.string());
    json j;
    try {
        j = json::parse(in);
    } catch (const json::exception& e) {
        throw Error(ErrorCode::ParseError, path.string() + ": " + e.what());
    }
    return config_from_json(j, path.parent_path());
}

json config_to_json(const AnalysisConfig& c) {
    json j{{"schema_version", c.schema_version},
           {"plan", plan_to_json(c.plan)},
           {"noise", c.noise},
           {"seed", c.seed},
           {"form", c.form == TrajectoryForm::Admittance ? "admittance" : "impedance"},
           {"interpolation",
            {{"method", std::string(to_string(c.slope.method))},
             {"step_hz", c.slope.step_hz},
             {"half_window_hz", c.slope.half_window_hz}}},
           {"tolerances",
            {{"crossing", c.tolerances.crossing},
             {"sigma_relative", c.tolerances.consistency.sigma_relative},
             {"sigma_absolute", c.tolerances.consistency.sigma_absolute},
             {"omega_absolute", c.tolerances.consistency.omega_absolute},
             {"interval_slack", c.tolerances.interval_slack}}},
           {"intervals_hz", c.intervals_hz}};
    if (c.grid) j["grid"] = grid_to_json(*c.grid);
    if (c.device) j["device"] = scenario_to_json(*c.device);
    if (!c.scenarios.empty()) {
        j["scenarios"] = json::array();
        for (const Scenario& s : c.scenarios) j["scenarios"].push_back(scenario_to_json(s));
    }
    return j;
}

ResolvedDevice resolve(const Scenario& s, const AnalysisConfig& c) {
    ResolvedDevice d;
    d.id = s.name;
    std::optional<GridParams> grid = s.grid ? s.grid : c.grid;
    if (!s.device.demo.empty()) {
        SyntheticSystem sys = demo_system(s.device.demo);
        d.model = sys.device;
        if (!s.grid) grid = sys.grid;
    } else if (s.device.model) {
        d.model = s.device.model;
    } else {
        d.table = load_table(s.device.table);
    }
    if (!grid) throw Error(ErrorCode::InvalidArgument, "scenario " + s.name + " has no grid parameters");
    d.grid = *grid;
    return d;
}

FrequencyResponseTable response_table(const ResolvedDevice& d, const AnalysisConfig& c) {
    if (d.table) return *d.table;
    return sweep(*d.model, c.plan, c.sweep_options(d.id));
}

FrequencyResponseTable load_table(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::ParseError, "cannot open response table " + path.string());
    if (path.extension() == ".json") {
        std::stringstream ss;
        ss << in.rdbuf();
        return table_from_json(ss.str());
    }
    return read_table_csv(in);
}

void save_table(const std::filesystem::path& path, const FrequencyResponseTable& table) {
    std::ofstream out(path);
    if (!out) throw Error(ErrorCode::InvalidArgument, "cannot write " + path.string());
    if (path.extension() == ".json") {
        out << table_to_json(table) << '\n';
    } else {
        write_table_csv(out, table);
    }
}

}  // namespace apsam
