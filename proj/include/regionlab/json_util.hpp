#pragma once

// Strict accessors for JSON configuration objects. Every failure is a
// ContractError naming the location.

#include <optional>
#include <set>
#include <string>

#include <json.hpp>

#include "regionlab/error.hpp"

namespace regionlab {

inline void reject_unknown_keys(const nlohmann::json& j, const std::set<std::string>& allowed,
                                const std::string& where) {
    require(j.is_object(), where + ": expected a JSON object");
    for (const auto& [key, value] : j.items())
        require(allowed.contains(key), where + ": unknown key '" + key + "'");
}

template <typename T>
T get_field(const nlohmann::json& j, const std::string& key, const std::string& where) {
    require(j.contains(key), where + ": missing key '" + key + "'");
    try {
        return j.at(key).get<T>();
    } catch (const nlohmann::json::exception& e) {
        throw ContractError(where + ": bad value for '" + key + "': " + e.what());
    }
}

template <typename T>
T get_or(const nlohmann::json& j, const std::string& key, T fallback, const std::string& where) {
    if (!j.contains(key)) return fallback;
    return get_field<T>(j, key, where);
}

}  // namespace regionlab
