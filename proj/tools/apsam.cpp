// apsam: command-line front end for sweeping, assessing and cross-checking
// grey-box 2x2 grid-tied converter models.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "apsam/config.hpp"
#include "apsam/json_io.hpp"
#include "apsam/report.hpp"
#include "apsam/synthetic.hpp"
#include "apsam/workflow.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace apsam;

namespace {

enum Exit : int {
    kStable = 0,
    kConfigError = 2,
    kDataError = 3,
    kSequenceError = 4,
    kDisagreement = 5,
    kNotMonotone = 6,
    kAllFailed = 7,
    kUnstable = 10,
    kMarginal = 11,
};

struct ExitError {
    int code;
    std::string message;
};

[[noreturn]] void fail(int code, const std::string& message) { throw ExitError{code, message}; }

int verdict_exit(const StabilityVerdict& v) {
    if (v.marginal) return kMarginal;
    return v.stable ? kStable : kUnstable;
}

int analysis_exit(const Error& e) {
    if (e.code() == ErrorCode::NonAdjacentSequence || e.code() == ErrorCode::InconsistentCurve) return kSequenceError;
    return kDataError;
}

AnalysisConfig load(const std::string& path) {
    try {
        return load_config(path);
    } catch (const Error& e) {
        fail(kConfigError, e.what());
    }
}

Scenario pick(const AnalysisConfig& c, const std::string& name) {
    if (!name.empty()) {
        for (const Scenario& s : c.scenarios) {
            if (s.name == name) return s;
        }
        if (c.device && c.device->name == name) return *c.device;
        fail(kConfigError, "no scenario named " + name);
    }
    if (c.device) return *c.device;
    if (c.scenarios.size() == 1) return c.scenarios.front();
    fail(kConfigError, "configuration has no device (or several scenarios and no --scenario)");
}

ResolvedDevice resolve_or_fail(const Scenario& s, const AnalysisConfig& c) {
    try {
        return resolve(s, c);
    } catch (const Error& e) {
        fail(s.device.table.empty() ? kConfigError : kDataError, e.what());
    }
}

void emit(const json& j, const std::string& path) {
    if (path.empty()) {
        std::cout << j.dump(2) << '\n';
        return;
    }
    std::ofstream out(path);
    if (!out) fail(kConfigError, "cannot write " + path);
    out << j.dump(2) << '\n';
}

template <typename Writer>
void write_plot(const fs::path& dir, const std::string& name, Writer&& writer) {
    std::ofstream out(dir / name);
    if (!out) fail(kConfigError, "cannot write " + (dir / name).string());
    writer(out);
}

void export_plots(const std::string& dir, const AnalysisReport& r, const EigenLoci* loci = nullptr) {
    if (dir.empty()) return;
    fs::create_directories(dir);
    write_plot(dir, "trajectory.csv", [&](std::ostream& os) { write_trajectory_csv(os, r.trajectory); });
    write_plot(dir, "idta.csv", [&](std::ostream& os) { write_idta_csv(os, r.assessment.curve); });
    if (loci) write_plot(dir, "loci.csv", [&](std::ostream& os) { write_loci_csv(os, *loci); });
}

// Subcommands -------------------------------------------------------------------

struct CommonArgs {
    std::string config;
    std::string scenario;
    std::string report;
    std::string plots;
};

int cmd_sweep(const CommonArgs& a, const std::string& out_path) {
    const AnalysisConfig c = load(a.config);
    const ResolvedDevice d = resolve_or_fail(pick(c, a.scenario), c);
    if (!d.model) fail(kConfigError, "sweep needs a closed-form device, not a response table");
    FrequencyResponseTable table;
    try {
        table = response_table(d, c);
    } catch (const Error& e) {
        fail(kDataError, e.what());
    }
    try {
        save_table(out_path, table);
    } catch (const Error& e) {
        fail(kConfigError, e.what());
    }
    std::printf("wrote %s: %zu points, noise %g, seed %llu\n", out_path.c_str(), table.size(), c.noise,
                static_cast<unsigned long long>(c.seed));
    return kStable;
}

int cmd_analyze(const CommonArgs& a, const std::string& table_path) {
    const AnalysisConfig c = load(a.config);
    ResolvedDevice d;
    if (!table_path.empty()) {
        d.id = fs::path(table_path).stem().string();
        if (c.grid) {
            d.grid = *c.grid;
        } else {
            d.grid = resolve_or_fail(pick(c, a.scenario), c).grid;
        }
        try {
            d.table = load_table(table_path);
        } catch (const std::exception& e) {
            fail(kDataError, e.what());
        }
    } else {
        d = resolve_or_fail(pick(c, a.scenario), c);
    }
    AnalysisReport r;
    try {
        r = analyze(d.grid, response_table(d, c), c.analysis_options());
    } catch (const Error& e) {
        fail(analysis_exit(e), e.what());
    }
    json j = analysis_report_to_json(r);
    j["scenario"] = d.id;
    emit(j, a.report);
    export_plots(a.plots, r);
    return verdict_exit(r.verdict());
}

VerifyOptions verify_options(const AnalysisConfig& c) {
    VerifyOptions o;
    o.plan = c.plan;
    o.analysis = c.analysis_options();
    o.consistency = c.tolerances.consistency;
    return o;
}

int cmd_verify(const CommonArgs& a) {
    const AnalysisConfig c = load(a.config);
    std::vector<Scenario> targets;
    if (!a.scenario.empty() || c.device || c.scenarios.size() == 1) {
        targets.push_back(pick(c, a.scenario));
    } else {
        targets = c.scenarios;
    }
    if (targets.empty()) fail(kConfigError, "nothing to verify");
    json out = json::array();
    bool agree = true;
    for (const Scenario& s : targets) {
        const ResolvedDevice d = resolve_or_fail(s, c);
        if (!d.model) fail(kConfigError, "scenario " + s.name + ": oracle unavailable for a raw response table");
        VerifyReport r;
        try {
            r = verify_device(*d.model, d.grid, verify_options(c));
        } catch (const Error& e) {
            fail(analysis_exit(e), s.name + ": " + e.what());
        }
        json j = verify_report_to_json(r);
        j["scenario"] = s.name;
        out.push_back(j);
        agree = agree && r.agreement;
        if (targets.size() == 1) export_plots(a.plots, r.apsam, &r.loci);
        std::fprintf(stderr, "%-22s apsam %-8s winding %ld  gnc %ld  oracle %ld  %s%s\n", s.name.c_str(),
                     r.apsam.verdict().stable ? "stable" : "unstable", r.apsam.verdict().winding, r.gnc.winding,
                     r.oracle.rhp_zero_count, r.agreement ? "agree" : "DISAGREE",
                     r.truncation_misjudgment ? "  (diagonal truncation misjudges)" : "");
    }
    emit(targets.size() == 1 ? out.front() : out, a.report);
    return agree ? kStable : kDisagreement;
}

int cmd_intervals(const CommonArgs& a) {
    const AnalysisConfig c = load(a.config);
    const ResolvedDevice d = resolve_or_fail(pick(c, a.scenario), c);
    if (!d.model) fail(kConfigError, "interval study needs a closed-form device");
    IntervalStudy s;
    try {
        s = interval_study(*d.model, d.grid, c.plan, c.intervals_hz, c.slope, c.tolerances.interval_slack);
    } catch (const Error& e) {
        fail(analysis_exit(e), e.what());
    }
    json j = interval_study_to_json(s);
    j["scenario"] = d.id;
    emit(j, a.report);
    return s.asserted && !s.monotone ? kNotMonotone : kStable;
}

int cmd_batch(const CommonArgs& a) {
    const AnalysisConfig c = load(a.config);
    if (c.scenarios.empty()) fail(kConfigError, "batch needs at least one scenario");
    const BatchResult b = run_batch(c);
    emit(batch_to_json(b), a.report);
    for (const BatchRow& r : b.rows) {
        if (!r.report) {
            std::fprintf(stderr, "%-16s error: %s\n", r.name.c_str(), r.error.c_str());
        } else if (r.report->pole) {
            std::fprintf(stderr, "%-16s %-8s sigma_o %+.4f 1/s  omega_o %.3f rad/s (%.3f Hz)\n", r.name.c_str(),
                         r.report->verdict().stable ? "stable" : "unstable", r.report->pole->sigma,
                         r.report->pole->omega, r.report->pole->omega / kTwoPi);
        } else {
            std::fprintf(stderr, "%-16s %-8s no critical zero\n", r.name.c_str(),
                         r.report->verdict().stable ? "stable" : "unstable");
        }
    }
    return b.failures == b.rows.size() ? kAllFailed : kStable;
}

// Fixtures ----------------------------------------------------------------------

json base_config() {
    AnalysisConfig c;
    return config_to_json(c);
}

void write_json(const fs::path& path, const json& j) {
    std::ofstream out(path);
    if (!out) fail(kConfigError, "cannot write " + path.string());
    out << j.dump(2) << '\n';
}

int cmd_fixtures(const std::string& dir) {
    fs::create_directories(dir);
    std::vector<std::string> verify_set;
    json wind = json::array();
    for (const std::string& name : demo_names()) {
        json j = base_config();
        j["device"] = {{"name", name}, {"device", {{"demo", name}}}};
        write_json(fs::path(dir) / (name + ".json"), j);
        if (name.rfind("wind-", 0) == 0) {
            wind.push_back({{"name", name}, {"device", {{"demo", name}}}});
        } else {
            verify_set.push_back(name);
        }
    }
    json batch = base_config();
    batch["scenarios"] = wind;
    write_json(fs::path(dir) / "wind-batch.json", batch);

    json suite = base_config();
    suite["scenarios"] = json::array();
    for (const std::string& name : verify_set) suite["scenarios"].push_back({{"name", name}, {"device", {{"demo", name}}}});
    write_json(fs::path(dir) / "demo-suite.json", suite);

    const SyntheticSystem sys = demo_system("sim-stable");
    json model = base_config();
    model["grid"] = grid_to_json(sys.grid);
    model["device"] = {{"name", "explicit-model"}, {"device", {{"model", rational_matrix_to_json(sys.device)}}}};
    write_json(fs::path(dir) / "explicit-model.json", model);
    std::printf("wrote %zu configurations to %s\n", demo_names().size() + 3, dir.c_str());
    return kStable;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Stability assessment of grey-box 2x2 grid-tied converter models from frequency responses"};
    app.require_subcommand(1);
    CommonArgs args;
    std::string out_path;
    std::string table_path;
    std::string fixtures_dir = "configs";

    auto common = [&](CLI::App* sub, bool with_plots) {
        sub->add_option("-c,--config", args.config, "configuration file (JSON)")->required();
        sub->add_option("-s,--scenario", args.scenario, "scenario name");
        sub->add_option("-r,--report", args.report, "write the report here instead of stdout");
        if (with_plots) sub->add_option("-p,--plots", args.plots, "directory for plot-data CSV files");
    };

    CLI::App* sweep_cmd = app.add_subcommand("sweep", "sweep a device into a response table");
    common(sweep_cmd, false);
    sweep_cmd->add_option("-o,--out", out_path, "table file (.csv or .json)")->required();

    CLI::App* analyze_cmd = app.add_subcommand("analyze", "assess stability from a response table");
    common(analyze_cmd, true);
    analyze_cmd->add_option("-t,--table", table_path, "response table; the configured device is swept otherwise");

    CLI::App* verify_cmd = app.add_subcommand("verify", "cross-check against loci, exact zeros and the impedance form");
    common(verify_cmd, true);

    CLI::App* intervals_cmd = app.add_subcommand("intervals", "critical-pole error versus sweep interval");
    common(intervals_cmd, false);

    CLI::App* batch_cmd = app.add_subcommand("batch", "assess every scenario and rank by damping");
    common(batch_cmd, false);

    CLI::App* fixtures_cmd = app.add_subcommand("fixtures", "write the bundled demonstration configurations");
    fixtures_cmd->add_option("-d,--dir", fixtures_dir, "output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kConfigError;
    }

    try {
        if (*sweep_cmd) return cmd_sweep(args, out_path);
        if (*analyze_cmd) return cmd_analyze(args, table_path);
        if (*verify_cmd) return cmd_verify(args);
        if (*intervals_cmd) return cmd_intervals(args);
        if (*batch_cmd) return cmd_batch(args);
        if (*fixtures_cmd) return cmd_fixtures(fixtures_dir);
    } catch (const ExitError& e) {
        std::fprintf(stderr, "apsam: %s\n", e.message.c_str());
        return e.code;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "apsam: %s\n", e.what());
        return kDataError;
    }
    return kConfigError;
}
