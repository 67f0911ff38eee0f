#pragma once

#include <fstream>
#include <string>

#include <json.hpp>

#include "toricount/errors.hpp"
#include "toricount/fan.hpp"

namespace toricount {

/* Fan files are small JSON documents:
 *   { "name": "P2", "dim": 2, "rays": [[1,0],[0,1],[-1,-1]],
 *     "max_cones": [[0,1],[1,2],[2,0]] }
 * "name" is optional, everything else is required, unknown keys are errors
 * so that a typo ("max_cone") cannot silently produce a different variety. */
inline Fan fan_from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw ConfigError("fan file: top level must be a JSON object");
    for (const auto& [key, val] : j.items()) {
        (void)val;
        if (key != "name" && key != "dim" && key != "rays" && key != "max_cones")
            throw ConfigError("fan file: unknown field '" + key + "'");
    }
    Fan fan;
    if (j.contains("name")) {
        if (!j["name"].is_string()) throw ConfigError("fan file: 'name' must be a string");
        fan.name = j["name"].get<std::string>();
    }
    if (!j.contains("dim") || !j["dim"].is_number_integer())
        throw ConfigError("fan file: 'dim' must be an integer");
    fan.dim = j["dim"].get<int>();
    if (!j.contains("rays") || !j["rays"].is_array())
        throw ConfigError("fan file: 'rays' must be an array of integer vectors");
    for (const auto& row : j["rays"]) {
        if (!row.is_array()) throw ConfigError("fan file: each ray must be an array");
        std::vector<Int> r;
        for (const auto& x : row) {
            if (!x.is_number_integer())
                throw ConfigError("fan file: ray entries must be integers");
            r.push_back(Int(x.get<long>()));
        }
        fan.rays.push_back(std::move(r));
    }
    if (!j.contains("max_cones") || !j["max_cones"].is_array())
        throw ConfigError("fan file: 'max_cones' must be an array of index vectors");
    for (const auto& row : j["max_cones"]) {
        if (!row.is_array()) throw ConfigError("fan file: each cone must be an array");
        std::vector<int> c;
        for (const auto& x : row) {
            if (!x.is_number_integer())
                throw ConfigError("fan file: cone entries must be ray indices");
            c.push_back(x.get<int>());
        }
        fan.max_cones.push_back(std::move(c));
    }
    return fan;
}

inline Fan fan_from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open fan file '" + path + "'");
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError("fan file '" + path + "': " + e.what());
    }
    Fan fan = fan_from_json(j);
    if (fan.name.empty()) fan.name = path;
    return fan;
}

inline nlohmann::ordered_json fan_to_json(const Fan& fan) {
    nlohmann::ordered_json j;
    if (!fan.name.empty()) j["name"] = fan.name;
    j["dim"] = fan.dim;
    auto rays = nlohmann::ordered_json::array();
    for (const auto& r : fan.rays) {
        auto row = nlohmann::ordered_json::array();
        for (const auto& x : r) row.push_back(x.get_si());
        rays.push_back(row);
    }
    j["rays"] = rays;
    auto cones = nlohmann::ordered_json::array();
    for (const auto& c : fan.max_cones) cones.push_back(c);
    j["max_cones"] = cones;
    return j;
}

} // namespace toricount
