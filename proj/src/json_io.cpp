#include "apsam/json_io.hpp"

namespace apsam {

namespace {

Complex complex_from_json(const nlohmann::json& j) {
    if (j.is_number()) return {j.get<double>(), 0.0};
    if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) {
        return {j[0].get<double>(), j[1].get<double>()};
    }
    throw Error(ErrorCode::ParseError, "coefficient must be a number or [re, im]");
}

}  // namespace

nlohmann::json complex_to_json(Complex z) { return nlohmann::json::array({z.real(), z.imag()}); }

Polynomial polynomial_from_json(const nlohmann::json& j) {
    if (!j.is_array()) throw Error(ErrorCode::ParseError, "coefficient list must be an array");
    std::vector<Complex> c;
    for (const auto& v : j) c.push_back(complex_from_json(v));
    return Polynomial(std::move(c));
}

nlohmann::json polynomial_to_json(const Polynomial& p) {
    auto out = nlohmann::json::array();
    for (const Complex c : p.coefficients()) {
        if (c.imag() == 0.0) {
            out.push_back(c.real());
        } else {
            out.push_back(complex_to_json(c));
        }
    }
    if (out.empty()) out.push_back(0.0);
    return out;
}

RationalMatrix2 rational_matrix_from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw Error(ErrorCode::ParseError, "device entries must be an object");
    auto entry = [&](const char* key) {
        if (!j.contains(key)) return RationalFunction{};
        const auto& e = j.at(key);
        try {
            return RationalFunction(polynomial_from_json(e.at("num")), polynomial_from_json(e.at("den")));
        } catch (const nlohmann::json::exception& ex) {
            throw Error(ErrorCode::ParseError, std::string(key) + ": " + ex.what());
        } catch (const Error& ex) {
            throw Error(ErrorCode::ParseError, std::string(key) + ": " + ex.what());
        }
    };
    return {entry("y11"), entry("y12"), entry("y21"), entry("y22")};
}

nlohmann::json rational_matrix_to_json(const RationalMatrix2& m) {
    auto entry = [](const RationalFunction& f) {
        return nlohmann::json{{"num", polynomial_to_json(f.numerator())}, {"den", polynomial_to_json(f.denominator())}};
    };
    return {{"y11", entry(m.e11)}, {"y12", entry(m.e12)}, {"y21", entry(m.e21)}, {"y22", entry(m.e22)}};
}

GridParams grid_from_json(const nlohmann::json& j) {
    try {
        GridParams g;
        g.rs = j.at("rs").get<double>();
        g.l_total = j.at("l_total").get<double>();
        g.omega1 = kTwoPi * j.value("f1_hz", 50.0);
        if (j.contains("cs") && !j.at("cs").is_null()) g.cs = j.at("cs").get<double>();
        g.validate();
        return g;
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::ParseError, std::string("grid: ") + e.what());
    }
}

nlohmann::json grid_to_json(const GridParams& g) {
    nlohmann::json j{{"rs", g.rs}, {"l_total", g.l_total}, {"f1_hz", g.omega1 / kTwoPi}};
    j["cs"] = g.cs ? nlohmann::json(*g.cs) : nlohmann::json(nullptr);
    return j;
}

FrequencyPlan plan_from_json(const nlohmann::json& j) {
    try {
        if (j.is_string()) {
            if (j.get<std::string>() == "default") return FrequencyPlan::default_plan();
            throw Error(ErrorCode::ParseError, "unknown plan name");
        }
        FrequencyPlan p;
        p.f1_hz = j.value("f1_hz", 50.0);
        if (j.value("default", false)) {
            p = FrequencyPlan::default_plan(p.f1_hz);
        } else {
            for (const auto& b : j.at("bands")) {
                p.bands.push_back({b.at("f_start").get<double>(), b.at("f_end").get<double>(), b.at("step").get<double>()});
            }
        }
        p.validate();
        return p;
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::ParseError, std::string("plan: ") + e.what());
    }
}

nlohmann::json plan_to_json(const FrequencyPlan& p) {
    auto bands = nlohmann::json::array();
    for (const auto& b : p.bands) {
        bands.push_back({{"f_start", b.f_start_hz}, {"f_end", b.f_end_hz}, {"step", b.step_hz}});
    }
    return {{"f1_hz", p.f1_hz}, {"bands", bands}};
}

}  // namespace apsam
