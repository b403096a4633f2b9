#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <string>

#include <json.hpp>

#include "doseplane/errors.hpp"

// Typed field access for hand-written JSON documents, reporting failures with a dotted path.
namespace doseplane::util {

inline std::string join_path(const std::string& base, const std::string& key) {
    return base.empty() ? key : base + "." + key;
}

inline std::string index_path(const std::string& base, std::size_t i) {
    return base + "[" + std::to_string(i) + "]";
}

inline const nlohmann::json& require_object(const nlohmann::json& j, const std::string& path) {
    if (!j.is_object()) throw InputError(path, "expected an object");
    return j;
}

inline const nlohmann::json& require_array(const nlohmann::json& j, const std::string& path) {
    if (!j.is_array()) throw InputError(path, "expected an array");
    return j;
}

inline const nlohmann::json& require_field(const nlohmann::json& j, const std::string& key, const std::string& path) {
    require_object(j, path);
    auto it = j.find(key);
    if (it == j.end()) throw InputError(join_path(path, key), "missing required field");
    return *it;
}

inline double as_number(const nlohmann::json& v, const std::string& path) {
    if (!v.is_number()) throw InputError(path, "expected a number");
    const double d = v.get<double>();
    if (!std::isfinite(d)) throw InputError(path, "must be finite");
    return d;
}

inline long long as_integer(const nlohmann::json& v, const std::string& path) {
    if (v.is_number_integer()) return v.get<long long>();
    if (v.is_number_float()) {
        const double d = v.get<double>();
        if (std::isfinite(d) && d == std::floor(d) && std::abs(d) < 9.0e15) return static_cast<long long>(d);
    }
    throw InputError(path, "expected an integer");
}

/// Unsigned 64-bit value given either as a JSON number or a decimal string.
inline std::uint64_t as_uint64(const nlohmann::json& v, const std::string& path) {
    if (v.is_number_unsigned()) return v.get<std::uint64_t>();
    if (v.is_number_integer() && v.get<long long>() >= 0) return static_cast<std::uint64_t>(v.get<long long>());
    if (v.is_string()) {
        const auto& s = v.get_ref<const std::string&>();
        std::size_t used = 0;
        try {
            if (!s.empty() && s[0] != '-') {
                const auto out = std::stoull(s, &used, 10);
                if (used == s.size()) return out;
            }
        } catch (const std::exception&) {
        }
    }
    throw InputError(path, "expected an unsigned 64-bit integer");
}

inline std::string as_string(const nlohmann::json& v, const std::string& path) {
    if (!v.is_string()) throw InputError(path, "expected a string");
    return v.get<std::string>();
}

inline bool as_bool(const nlohmann::json& v, const std::string& path) {
    if (!v.is_boolean()) throw InputError(path, "expected true or false");
    return v.get<bool>();
}

/// Reads key into out when present.
inline void read_opt(const nlohmann::json& j, const std::string& key, const std::string& path, double& out) {
    if (auto it = j.find(key); it != j.end()) out = as_number(*it, join_path(path, key));
}

inline void read_opt(const nlohmann::json& j, const std::string& key, const std::string& path, int& out) {
    if (auto it = j.find(key); it != j.end()) {
        const auto p = join_path(path, key);
        const auto v = as_integer(*it, p);
        if (v < std::numeric_limits<int>::min() || v > std::numeric_limits<int>::max()) {
            throw InputError(p, "integer out of range");
        }
        out = static_cast<int>(v);
    }
}

inline void read_opt(const nlohmann::json& j, const std::string& key, const std::string& path, std::size_t& out) {
    if (auto it = j.find(key); it != j.end()) {
        const auto p = join_path(path, key);
        const auto v = as_integer(*it, p);
        if (v < 0) throw InputError(p, "must be nonnegative");
        out = static_cast<std::size_t>(v);
    }
}

/// Runs a validate() that throws InputError with a bare field name and re-throws it under `path`.
template <class F>
void validate_under(const std::string& path, F&& validate) {
    try {
        validate();
    } catch (const InputError& e) {
        const std::string& f = e.field();
        const std::string what = e.what();
        const std::string msg = f.empty() ? what : what.substr(std::min(what.size(), f.size() + 2));
        throw InputError(join_path(path, f), msg);
    }
}

}  // namespace doseplane::util
