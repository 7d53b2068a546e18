//==============================================================================
// params.cpp
// Validation and strict JSON (de)serialization of the configuration.
//==============================================================================
#include "kakinuma/params.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace kakinuma {

using nlohmann::json;

void ModelParams::validate() const {
    if (!(rho1 > 0.0) || !(rho2 > rho1))
        throw ConfigError("densities must satisfy 0 < rho1 < rho2 (stable stratification)");
    if (!(h1 > 0.0) || !(h2 > 0.0)) throw ConfigError("layer depths h1, h2 must be positive");
    if (!(grav > 0.0)) throw ConfigError("g must be positive");
    if (N < 0) throw ConfigError("expansion order N must be nonnegative");
    if (p_list.empty() || p_list.front() != 0)
        throw ConfigError("p_list must start with 0");
    for (size_t i = 1; i < p_list.size(); ++i)
        if (p_list[i] <= p_list[i - 1])
            throw ConfigError("p_list must be strictly increasing");
}

namespace {

double require_number(const json& j, const std::string& key) {
    if (!j.contains(key)) throw ConfigError("config missing required key \"" + key + "\"");
    if (!j.at(key).is_number()) throw ConfigError("config key \"" + key + "\" must be a number");
    return j.at(key).get<double>();
}

double optional_number(const json& j, const std::string& key, double fallback) {
    if (!j.contains(key)) return fallback;
    if (!j.at(key).is_number()) throw ConfigError("config key \"" + key + "\" must be a number");
    return j.at(key).get<double>();
}

int as_int(double x, const std::string& key) {
    if (std::nearbyint(x) != x) throw ConfigError("config key \"" + key + "\" must be an integer");
    return static_cast<int>(x);
}

} // namespace

Config parse_config(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    if (!j.is_object()) throw ConfigError("config root must be a JSON object");

    static const std::set<std::string> known = {
        "rho1", "rho2", "h1", "h2", "g", "N", "p_list", "L", "M", "bottom",
        "dt", "t_end", "epsilon", "cg_tol", "cg_max_iter", "h_min",
        "margin_min", "output_every"};
    for (auto it = j.begin(); it != j.end(); ++it)
        if (!known.count(it.key()))
            throw ConfigError("unknown config key \"" + it.key() + "\"");

    Config cfg;
    cfg.model.rho1 = require_number(j, "rho1");
    cfg.model.rho2 = require_number(j, "rho2");
    cfg.model.h1 = require_number(j, "h1");
    cfg.model.h2 = require_number(j, "h2");
    cfg.model.grav = require_number(j, "g");
    cfg.model.N = as_int(require_number(j, "N"), "N");
    if (!j.contains("p_list") || !j.at("p_list").is_array())
        throw ConfigError("config key \"p_list\" must be an array of integers");
    cfg.model.p_list.clear();
    for (const auto& e : j.at("p_list")) {
        if (!e.is_number()) throw ConfigError("p_list entries must be numbers");
        cfg.model.p_list.push_back(as_int(e.get<double>(), "p_list"));
    }
    cfg.model.validate();

    cfg.num.L = require_number(j, "L");
    cfg.num.M = as_int(require_number(j, "M"), "M");

    if (j.contains("bottom")) {
        const json& b = j.at("bottom");
        if (!b.is_object() || !b.contains("type"))
            throw ConfigError("config key \"bottom\" must be an object with a \"type\"");
        static const std::set<std::string> bknown = {"type", "amplitude", "mode"};
        for (auto it = b.begin(); it != b.end(); ++it)
            if (!bknown.count(it.key()))
                throw ConfigError("unknown config key \"bottom." + it.key() + "\"");
        const std::string type = b.at("type").get<std::string>();
        if (type == "flat") {
            cfg.num.bottom.type = BottomSpec::Type::Flat;
        } else if (type == "cosine") {
            cfg.num.bottom.type = BottomSpec::Type::Cosine;
            cfg.num.bottom.amplitude = require_number(b, "amplitude");
            cfg.num.bottom.mode = as_int(optional_number(b, "mode", 1.0), "bottom.mode");
        } else {
            throw ConfigError("bottom.type must be \"flat\" or \"cosine\"");
        }
    }

    cfg.num.dt = optional_number(j, "dt", 0.0);
    cfg.num.t_end = optional_number(j, "t_end", 0.0);
    cfg.num.epsilon = optional_number(j, "epsilon", 0.0);
    cfg.num.cg_tol = optional_number(j, "cg_tol", 1e-10);
    cfg.num.cg_max_iter = as_int(optional_number(j, "cg_max_iter", 500.0), "cg_max_iter");
    cfg.num.h_min = optional_number(j, "h_min", 1e-6);
    cfg.num.margin_min = optional_number(j, "margin_min", 0.0);
    cfg.num.output_every = as_int(optional_number(j, "output_every", 1.0), "output_every");

    if (cfg.num.epsilon < 0.0) throw ConfigError("epsilon must be nonnegative");
    if (!(cfg.num.cg_tol > 0.0)) throw ConfigError("cg_tol must be positive");
    if (cfg.num.cg_max_iter < 1) throw ConfigError("cg_max_iter must be positive");
    if (!(cfg.num.h_min > 0.0)) throw ConfigError("h_min must be positive");
    if (cfg.num.output_every < 1) throw ConfigError("output_every must be positive");
    if (cfg.num.bottom.type == BottomSpec::Type::Cosine &&
        std::abs(cfg.num.bottom.amplitude) >= cfg.model.h2)
        throw ConfigError("bottom amplitude must be smaller than h2");

    // Constructing the grid validates L and M.
    (void)Grid1D(cfg.num.L, cfg.num.M);
    return cfg;
}

Config load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

std::string resolved_config_json(const Config& cfg) {
    json j;
    j["rho1"] = cfg.model.rho1;
    j["rho2"] = cfg.model.rho2;
    j["h1"] = cfg.model.h1;
    j["h2"] = cfg.model.h2;
    j["g"] = cfg.model.grav;
    j["N"] = cfg.model.N;
    j["p_list"] = cfg.model.p_list;
    j["L"] = cfg.num.L;
    j["M"] = cfg.num.M;
    if (cfg.num.bottom.type == BottomSpec::Type::Flat) {
        j["bottom"] = {{"type", "flat"}};
    } else {
        j["bottom"] = {{"type", "cosine"},
                       {"amplitude", cfg.num.bottom.amplitude},
                       {"mode", cfg.num.bottom.mode}};
    }
    j["dt"] = cfg.num.dt;
    j["t_end"] = cfg.num.t_end;
    j["epsilon"] = cfg.num.epsilon;
    j["cg_tol"] = cfg.num.cg_tol;
    j["cg_max_iter"] = cfg.num.cg_max_iter;
    j["h_min"] = cfg.num.h_min;
    j["margin_min"] = cfg.num.margin_min;
    j["output_every"] = cfg.num.output_every;
    return j.dump(2);
}

Field make_bottom(const BottomSpec& spec, const Grid1D& g) {
    Field b(g);
    if (spec.type == BottomSpec::Type::Cosine) {
        const double k = 2.0 * M_PI * spec.mode / g.length;
        for (int i = 0; i < g.points; ++i) b[i] = spec.amplitude * std::cos(k * g.node(i));
    }
    return b;
}

} // namespace kakinuma
