/**
 * sweep_io.hpp - JSON configs, CSV/JSON result emission and parsing.
 *
 * CSV layout:
 *   # key=value                  (one line per echoed parameter)
 *   # annotation:name=value      (located resonances etc.)
 *   col1,col2,...
 *   rows, %.17g, limit_flag as an integer
 *
 * JSON layout:
 *   {"columns": [...], "parameters": {...}, "annotations": {...}, "rows": [[...], ...]}
 * Non-finite numbers are written as null.
 */

#pragma once

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "sweep.hpp"

namespace wgqed {

using ojson = nlohmann::ordered_json;

namespace detail {

inline ojson number_or_null(double v) { return std::isfinite(v) ? ojson(v) : ojson(nullptr); }

inline double number_from(const ojson& j) {
    if (j.is_null()) return std::numeric_limits<double>::quiet_NaN();
    return j.get<double>();
}

inline double parse_number(const std::string& key, const std::string& text) {
    try {
        std::size_t used = 0;
        const double v = std::stod(text, &used);
        if (used != text.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw ConfigError(key, "expected a number, got '" + text + "'");
    }
}

}  // namespace detail

/// Applies one `key=value` override (CLI --set) to a config.
inline void apply_override(SweepConfig& cfg, const std::string& assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos || eq == 0) throw ConfigError(assignment, "expected key=value");
    const std::string key = assignment.substr(0, eq);
    const std::string value = assignment.substr(eq + 1);
    if (key == "model") cfg.model = parse_model(value);
    else if (key == "axis") cfg.axis = parse_axis(value);
    else if (key == "study") cfg.study = parse_study(value);
    else if (key == "format") cfg.format = parse_format(value);
    else if (key == "start") cfg.start = detail::parse_number(key, value);
    else if (key == "stop") cfg.stop = detail::parse_number(key, value);
    else if (key == "count") {
        const double c = detail::parse_number(key, value);
        if (c != std::floor(c)) throw ConfigError("count", "must be an integer");
        cfg.count = static_cast<int>(c);
    } else if (key == "outputs") {
        cfg.outputs.clear();
        std::stringstream ss(value);
        std::string col;
        while (std::getline(ss, col, ','))
            if (!col.empty()) cfg.outputs.push_back(col);
    } else {
        const auto& known = known_parameters();
        if (std::find(known.begin(), known.end(), key) == known.end()) throw ConfigError(key, "unknown parameter");
        cfg.parameters[key] = detail::parse_number(key, value);
    }
}

/// Overlays a flat JSON object onto `cfg`.
inline void apply_json_config(SweepConfig& cfg, const ojson& j) {
    if (!j.is_object()) throw ConfigError("config", "top level must be a JSON object");
    for (const auto& [key, value] : j.items()) {
        try {
            if (key == "model" || key == "axis" || key == "study" || key == "format") {
                apply_override(cfg, key + "=" + value.get<std::string>());
            } else if (key == "outputs") {
                cfg.outputs = value.get<std::vector<std::string>>();
            } else if (key == "count") {
                if (!value.is_number_integer()) throw ConfigError("count", "must be an integer");
                cfg.count = value.get<int>();
            } else if (key == "start" || key == "stop") {
                (key == "start" ? cfg.start : cfg.stop) = value.get<double>();
            } else if (key == "parameters" && value.is_object()) {
                for (const auto& [pk, pv] : value.items()) apply_json_config(cfg, ojson{{pk, pv}});
            } else {
                const auto& known = known_parameters();
                if (std::find(known.begin(), known.end(), key) == known.end()) throw ConfigError(key, "unknown parameter");
                if (value.is_boolean()) cfg.parameters[key] = value.get<bool>() ? 1.0 : 0.0;
                else cfg.parameters[key] = value.get<double>();
            }
        } catch (const nlohmann::json::exception& e) {
            throw ConfigError(key, std::string("wrong type: ") + e.what());
        }
    }
}

inline SweepConfig load_config_file(const std::string& path, SweepConfig base = {}) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config", "cannot open '" + path + "'");
    ojson j;
    try {
        j = ojson::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError("config", std::string("invalid JSON: ") + e.what());
    }
    apply_json_config(base, j);
    return base;
}

// ---------------------------------------------------------------------------
// Results
// ---------------------------------------------------------------------------

inline void write_csv(std::ostream& os, const SweepResult& res) {
    for (const auto& [key, value] : res.parameters) os << "# " << key << '=' << value << '\n';
    for (const auto& [name, value] : res.annotations) os << "# annotation:" << name << '=' << format_double(value) << '\n';
    for (std::size_t j = 0; j < res.columns.size(); ++j) os << (j ? "," : "") << res.columns[j];
    os << '\n';
    for (const auto& row : res.rows) {
        for (std::size_t j = 0; j < row.size(); ++j) {
            if (j) os << ',';
            if (res.columns[j] == "limit_flag") os << static_cast<int>(row[j]);
            else os << format_double(row[j]);
        }
        os << '\n';
    }
}

[[nodiscard]] inline ojson to_json(const SweepResult& res) {
    ojson j;
    j["columns"] = res.columns;
    ojson params = ojson::object();
    for (const auto& [key, value] : res.parameters) params[key] = value;
    j["parameters"] = params;
    ojson notes = ojson::object();
    for (const auto& [name, value] : res.annotations) notes[name] = detail::number_or_null(value);
    j["annotations"] = notes;
    ojson rows = ojson::array();
    for (const auto& row : res.rows) {
        ojson r = ojson::array();
        for (double v : row) r.push_back(detail::number_or_null(v));
        rows.push_back(std::move(r));
    }
    j["rows"] = std::move(rows);
    return j;
}

[[nodiscard]] inline SweepResult result_from_json(const ojson& j) {
    SweepResult res;
    res.columns = j.at("columns").get<std::vector<std::string>>();
    for (const auto& [key, value] : j.at("parameters").items()) res.parameters.emplace_back(key, value.get<std::string>());
    for (const auto& [name, value] : j.at("annotations").items()) res.annotations.emplace_back(name, detail::number_from(value));
    for (const auto& row : j.at("rows")) {
        std::vector<double> r;
        for (const auto& v : row) r.push_back(detail::number_from(v));
        res.rows.push_back(std::move(r));
    }
    return res;
}

inline void write_result(std::ostream& os, const SweepResult& res, Format fmt) {
    if (fmt == Format::csv) write_csv(os, res);
    else os << to_json(res).dump(2) << '\n';
}

}  // namespace wgqed
