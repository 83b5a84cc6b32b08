#pragma once

#include "hht/models/disease.hpp"
#include "hht/models/fhn.hpp"
#include "hht/models/hodgkin_huxley.hpp"
#include "hht/models/vdp.hpp"
#include "hht/types.hpp"

#include <json.hpp>

#include <fstream>
#include <initializer_list>
#include <string>

namespace hht {

using Json = nlohmann::json;

inline void reject_unknown_keys(const Json& j, std::initializer_list<const char*> allowed,
                                const std::string& context) {
    if (!j.is_object()) throw ConfigError(context + " must be a JSON object");
    for (const auto& [key, value] : j.items()) {
        bool known = false;
        for (const char* k : allowed) {
            if (key == k) {
                known = true;
                break;
            }
        }
        if (!known) throw ConfigError("unknown key '" + key + "' in " + context);
    }
}

inline double json_number(const Json& j, const char* key, double fallback) {
    if (!j.contains(key)) return fallback;
    if (!j[key].is_number()) throw ConfigError(std::string("key '") + key + "' must be a number");
    return j[key].get<double>();
}

// Model parameters; absent keys keep the built-in defaults.
inline DiseaseParams disease_params_from_json(const Json& j) {
    reject_unknown_keys(j,
                        {"tau_x", "tau_hi", "tau_le", "tau_li", "w_he", "w_hi", "w_le", "w_li",
                         "x_he", "x_hi", "x_le", "x_li", "delta_he", "delta_hi", "delta_le",
                         "delta_li", "xtilde_he", "xtilde_hi", "xtilde_le", "xtilde_li", "S"},
                        "disease model parameters");
    DiseaseParams p;
    p.tau_x = json_number(j, "tau_x", p.tau_x);
    p.tau_hi = json_number(j, "tau_hi", p.tau_hi);
    p.tau_le = json_number(j, "tau_le", p.tau_le);
    p.tau_li = json_number(j, "tau_li", p.tau_li);
    p.w_he = json_number(j, "w_he", p.w_he);
    p.w_hi = json_number(j, "w_hi", p.w_hi);
    p.w_le = json_number(j, "w_le", p.w_le);
    p.w_li = json_number(j, "w_li", p.w_li);
    p.x_he = json_number(j, "x_he", p.x_he);
    p.x_hi = json_number(j, "x_hi", p.x_hi);
    p.x_le = json_number(j, "x_le", p.x_le);
    p.x_li = json_number(j, "x_li", p.x_li);
    p.delta_he = json_number(j, "delta_he", p.delta_he);
    p.delta_hi = json_number(j, "delta_hi", p.delta_hi);
    p.delta_le = json_number(j, "delta_le", p.delta_le);
    p.delta_li = json_number(j, "delta_li", p.delta_li);
    p.xtilde_he = json_number(j, "xtilde_he", p.xtilde_he);
    p.xtilde_hi = json_number(j, "xtilde_hi", p.xtilde_hi);
    p.xtilde_le = json_number(j, "xtilde_le", p.xtilde_le);
    p.xtilde_li = json_number(j, "xtilde_li", p.xtilde_li);
    p.S = json_number(j, "S", p.S);
    if (!(p.tau_x > 0.0 && p.tau_hi > 0.0 && p.tau_le > 0.0 && p.tau_li > 0.0)) {
        throw ConfigError("disease time constants must be positive");
    }
    return p;
}

inline VdpParams vdp_params_from_json(const Json& j) {
    reject_unknown_keys(j, {"mu"}, "vdp model parameters");
    VdpParams p;
    p.mu = json_number(j, "mu", p.mu);
    return p;
}

inline FhnParams fhn_params_from_json(const Json& j) {
    reject_unknown_keys(j, {"a", "b", "c", "I"}, "fhn model parameters");
    FhnParams p;
    p.a = json_number(j, "a", p.a);
    p.b = json_number(j, "b", p.b);
    p.c = json_number(j, "c", p.c);
    p.I = json_number(j, "I", p.I);
    return p;
}

inline HhParams hh_params_from_json(const Json& j) {
    reject_unknown_keys(j, {"C", "gbar_K", "gbar_Na", "g_L", "E_K", "E_Na", "E_L", "I"},
                        "hh model parameters");
    HhParams p;
    p.C = json_number(j, "C", p.C);
    p.gbar_K = json_number(j, "gbar_K", p.gbar_K);
    p.gbar_Na = json_number(j, "gbar_Na", p.gbar_Na);
    p.g_L = json_number(j, "g_L", p.g_L);
    p.E_K = json_number(j, "E_K", p.E_K);
    p.E_Na = json_number(j, "E_Na", p.E_Na);
    p.E_L = json_number(j, "E_L", p.E_L);
    p.I = json_number(j, "I", p.I);
    if (!(p.C > 0.0)) throw ConfigError("membrane capacitance must be positive");
    return p;
}

inline Json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    Json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw ConfigError("invalid JSON in '" + path + "': " + e.what());
    }
    return j;
}

} // namespace hht
