#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

#include "apsam/json_io.hpp"
#include "apsam/sweep.hpp"

namespace apsam {

namespace {

std::string format17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double parse_double(const std::string& field, std::size_t line) {
    const std::string t = trim(field);
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(t, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (t.empty() || used != t.size()) {
        throw Error(ErrorCode::ParseError, "bad number '" + t + "' on line " + std::to_string(line));
    }
    return v;
}

}  // namespace

void write_table_csv(std::ostream& os, const FrequencyResponseTable& table) {
    os << kTableCsvHeader << '\n';
    for (const auto& s : table.samples()) {
        os << format17(s.f_hz);
        for (const Complex c : {s.y.e11, s.y.e12, s.y.e21, s.y.e22}) {
            os << ", " << format17(c.real()) << ", " << format17(c.imag());
        }
        os << '\n';
    }
}

FrequencyResponseTable read_table_csv(std::istream& is) {
    std::string line;
    std::size_t lineno = 0;
    bool header_seen = false;
    std::vector<ResponseSample> samples;
    while (std::getline(is, line)) {
        ++lineno;
        const std::string t = trim(line);
        if (t.empty() || t.front() == '#') continue;
        if (!header_seen) {
            if (t.rfind("f_hz", 0) != 0) {
                throw Error(ErrorCode::ParseError, "missing response-table header");
            }
            header_seen = true;
            continue;
        }
        std::vector<std::string> fields;
        std::stringstream ss(t);
        std::string f;
        while (std::getline(ss, f, ',')) fields.push_back(f);
        if (fields.size() != 9) {
            throw Error(ErrorCode::ParseError, "expected 9 fields on line " + std::to_string(lineno) + ", got " +
                                                   std::to_string(fields.size()));
        }
        ResponseSample s;
        s.f_hz = parse_double(fields[0], lineno);
        Complex* slots[4] = {&s.y.e11, &s.y.e12, &s.y.e21, &s.y.e22};
        for (int k = 0; k < 4; ++k) {
            *slots[k] = {parse_double(fields[1 + 2 * k], lineno), parse_double(fields[2 + 2 * k], lineno)};
        }
        samples.push_back(s);
    }
    if (!header_seen) throw Error(ErrorCode::ParseError, "empty response table");
    try {
        return FrequencyResponseTable(std::move(samples));
    } catch (const Error& e) {
        throw Error(ErrorCode::ParseError, e.what());
    }
}

std::string table_to_json(const FrequencyResponseTable& table) {
    nlohmann::json doc;
    doc["schema"] = "apsam.response_table";
    doc["schema_version"] = 1;
    const auto& meta = table.metadata();
    doc["metadata"] = {{"noise", meta.noise}, {"seed", meta.seed}, {"device_id", meta.device_id}};
    if (meta.plan) doc["metadata"]["plan"] = plan_to_json(*meta.plan);
    doc["columns"] = nlohmann::json::array(
        {"f_hz", "re_y11", "im_y11", "re_y12", "im_y12", "re_y21", "im_y21", "re_y22", "im_y22"});
    auto rows = nlohmann::json::array();
    for (const auto& s : table.samples()) {
        rows.push_back({s.f_hz, s.y.e11.real(), s.y.e11.imag(), s.y.e12.real(), s.y.e12.imag(), s.y.e21.real(),
                        s.y.e21.imag(), s.y.e22.real(), s.y.e22.imag()});
    }
    doc["samples"] = std::move(rows);
    return doc.dump(1);
}

FrequencyResponseTable table_from_json(const std::string& text) {
    try {
        const auto doc = nlohmann::json::parse(text);
        if (doc.value("schema", "") != "apsam.response_table") {
            throw Error(ErrorCode::ParseError, "not a response-table document");
        }
        TableMetadata meta;
        if (doc.contains("metadata")) {
            const auto& m = doc["metadata"];
            meta.noise = m.value("noise", 0.0);
            meta.seed = m.value("seed", std::uint64_t{0});
            meta.device_id = m.value("device_id", std::string{});
            if (m.contains("plan")) meta.plan = plan_from_json(m["plan"]);
        }
        std::vector<ResponseSample> samples;
        for (const auto& row : doc.at("samples")) {
            if (row.size() != 9) throw Error(ErrorCode::ParseError, "sample row must have 9 numbers");
            ResponseSample s;
            s.f_hz = row[0].get<double>();
            s.y = {{row[1].get<double>(), row[2].get<double>()},
                   {row[3].get<double>(), row[4].get<double>()},
                   {row[5].get<double>(), row[6].get<double>()},
                   {row[7].get<double>(), row[8].get<double>()}};
            samples.push_back(s);
        }
        return {std::move(samples), std::move(meta)};
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::ParseError, e.what());
    } catch (const Error& e) {
        if (e.code() == ErrorCode::ParseError) throw;
        throw Error(ErrorCode::ParseError, e.what());
    }
}

}  // namespace apsam
