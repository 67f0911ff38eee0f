#pragma once

#include <string>
#include <vector>

#include "toricount/errors.hpp"
#include "toricount/fan.hpp"

namespace toricount {

struct FanLibraryEntry {
    Fan fan;
    std::size_t rank = 0;      // Picard rank
    int f = 0;                 // covering invariant
    std::size_t max_cones = 0;
    bool globally_generated = false;
    Int min_exponent;          // the smallest anticanonical exponent over (cone, ray)
};

namespace detail {

inline Fan make_builtin(std::string name, int dim, std::vector<std::vector<Int>> rays,
                        std::vector<std::vector<int>> cones) {
    Fan f;
    f.name = std::move(name);
    f.dim = dim;
    f.rays = std::move(rays);
    f.max_cones = std::move(cones);
    return f;
}

inline std::vector<FanLibraryEntry> build_library() {
    std::vector<Fan> fans;
    fans.push_back(make_builtin("P1", 1, {{1}, {-1}}, {{0}, {1}}));
    fans.push_back(make_builtin("P2", 2, {{1, 0}, {0, 1}, {-1, -1}},
                                {{0, 1}, {1, 2}, {2, 0}}));
    fans.push_back(make_builtin(
        "P3", 3, {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}, {-1, -1, -1}},
        {{0, 1, 2}, {0, 1, 3}, {0, 2, 3}, {1, 2, 3}}));
    fans.push_back(make_builtin("P1xP1", 2, {{1, 0}, {0, 1}, {-1, 0}, {0, -1}},
                                {{0, 1}, {1, 2}, {2, 3}, {3, 0}}));
    fans.push_back(make_builtin(
        "P1xP1xP1", 3,
        {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}, {-1, 0, 0}, {0, -1, 0}, {0, 0, -1}},
        {{0, 1, 2}, {0, 1, 5}, {0, 4, 2}, {0, 4, 5}, {3, 1, 2}, {3, 1, 5}, {3, 4, 2}, {3, 4, 5}}));
    fans.push_back(make_builtin("F1", 2, {{1, 0}, {0, 1}, {-1, 1}, {0, -1}},
                                {{0, 1}, {1, 2}, {2, 3}, {3, 0}}));
    fans.push_back(make_builtin("F2", 2, {{1, 0}, {0, 1}, {-1, 2}, {0, -1}},
                                {{0, 1}, {1, 2}, {2, 3}, {3, 0}}));

    std::vector<FanLibraryEntry> out;
    for (auto& fan : fans) {
        FanCheckReport chk = validate_fan(fan);
        if (!chk.ok())
            throw InternalError("library fan '" + fan.name + "' failed validation: " +
                                chk.reason_summary());
        FanLibraryEntry e;
        e.fan = fan;
        e.rank = picard_basis(fan).rank;
        e.f = f_invariant(fan);
        e.max_cones = fan.num_cones();
        auto verdict = check_globally_generated(fan);
        e.globally_generated = verdict.generated;
        e.min_exponent = verdict.min_exponent;
        out.push_back(std::move(e));
    }
    return out;
}

} // namespace detail

inline const std::vector<FanLibraryEntry>& fan_library() {
    static const std::vector<FanLibraryEntry> lib = detail::build_library();
    return lib;
}

inline const Fan& fan_by_name(const std::string& name) {
    for (const auto& e : fan_library())
        if (e.fan.name == name) return e.fan;
    std::string known;
    for (const auto& e : fan_library()) {
        if (!known.empty()) known += ", ";
        known += e.fan.name;
    }
    throw ConfigError("unknown fan '" + name + "'; built-in fans: " + known);
}

} // namespace toricount
