#include "rtsl/errors.hpp"
#include "rtsl/model.hpp"

#include <json.hpp>

#include <algorithm>
#include <initializer_list>

namespace rtsl {

using nlohmann::json;

namespace {

std::string line_col(const std::string& text, std::size_t byte) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

void reject_unknown(const json& obj, const std::string& where,
                    std::initializer_list<const char*> allowed) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        const bool ok = std::any_of(allowed.begin(), allowed.end(),
                                    [&](const char* k) { return it.key() == k; });
        if (!ok) throw ConfigError(where + ": unknown key '" + it.key() + "'");
    }
}

const json& require(const json& obj, const char* k, const std::string& where) {
    auto it = obj.find(k);
    if (it == obj.end()) throw ConfigError(where + ": missing required key '" + k + "'");
    return *it;
}

double number(const json& v, const std::string& where) {
    if (!v.is_number()) throw ConfigError(where + ": expected a number");
    return v.get<double>();
}

double number_or(const json& obj, const char* k, double dflt, const std::string& where) {
    auto it = obj.find(k);
    return it == obj.end() ? dflt : number(*it, where + "." + k);
}

Schedule parse_schedule(const json& v, const std::string& where, bool allow_fraction) {
    if (v.is_number()) return Schedule::constant(v.get<double>());
    if (v.is_array()) {
        std::vector<double> xs;
        for (std::size_t i = 0; i < v.size(); ++i)
            xs.push_back(number(v[i], where + "[" + std::to_string(i) + "]"));
        return Schedule::explicit_list(std::move(xs));
    }
    if (!v.is_object()) throw ConfigError(where + ": expected number, array or object");
    const json& type = require(v, "type", where);
    if (!type.is_string()) throw ConfigError(where + ".type: expected a string");
    const std::string kind = type.get<std::string>();
    if (kind == "constant") {
        reject_unknown(v, where, {"type", "value"});
        return Schedule::constant(number(require(v, "value", where), where + ".value"));
    }
    if (kind == "linear-growth") {
        reject_unknown(v, where, {"type", "initial", "slope"});
        return Schedule::linear(number(require(v, "initial", where), where + ".initial"),
                                number(require(v, "slope", where), where + ".slope"));
    }
    if (kind == "explicit") {
        reject_unknown(v, where, {"type", "values"});
        const json& vals = require(v, "values", where);
        if (!vals.is_array()) throw ConfigError(where + ".values: expected an array");
        return parse_schedule(vals, where + ".values", false);
    }
    if (kind == "fraction" && allow_fraction) {
        reject_unknown(v, where, {"type", "value"});
        return Schedule::fraction(number(require(v, "value", where), where + ".value"));
    }
    throw ConfigError(where + ".type: unsupported schedule type '" + kind + "'");
}

json schedule_to_json(const Schedule& s) {
    switch (s.kind) {
    case Schedule::Kind::Constant:
        return {{"type", "constant"}, {"value", s.value}};
    case Schedule::Kind::LinearGrowth:
        return {{"type", "linear-growth"}, {"initial", s.value}, {"slope", s.slope}};
    case Schedule::Kind::Explicit:
        return {{"type", "explicit"}, {"values", s.values}};
    case Schedule::Kind::FractionOfSupply:
        return {{"type", "fraction"}, {"value", s.value}};
    }
    return {};
}

SectorParams parse_sector(const json& v, const std::string& where) {
    if (!v.is_object()) throw ConfigError(where + ": expected an object");
    reject_unknown(v, where,
                   {"zeta_star", "m", "sigma", "tau", "zeta0", "zeta_lo", "zeta_hi"});
    SectorParams p;
    p.zeta_star = number(require(v, "zeta_star", where), where + ".zeta_star");
    p.sigma = number(require(v, "sigma", where), where + ".sigma");
    p.tau = number(require(v, "tau", where), where + ".tau");
    p.zeta0 = number(require(v, "zeta0", where), where + ".zeta0");
    p.m = number_or(v, "m", 0.0, where);
    p.zeta_lo = number_or(v, "zeta_lo", 0.05, where);
    p.zeta_hi = number_or(v, "zeta_hi", 0.95, where);
    return p;
}

}  // namespace

EconomyConfig config_from_json(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError("malformed JSON at " + line_col(text, e.byte) + ": " + e.what());
    }
    if (!doc.is_object()) throw ConfigError("config: top level must be an object");
    reject_unknown(doc, "config",
                   {"alpha", "sectors", "horizon", "labor_supply", "l0", "learning_mode",
                    "endogenous_labor", "seed"});

    EconomyConfig c;
    c.alpha = number(require(doc, "alpha", "config"), "alpha");

    const json& sectors = require(doc, "sectors", "config");
    if (!sectors.is_array()) throw ConfigError("sectors: expected an array");
    for (std::size_t i = 0; i < sectors.size(); ++i)
        c.sectors.push_back(parse_sector(sectors[i], "sectors[" + std::to_string(i) + "]"));

    const json& horizon = require(doc, "horizon", "config");
    if (!horizon.is_number_integer()) throw ConfigError("horizon: expected an integer");
    c.horizon = horizon.get<int>();

    if (auto it = doc.find("endogenous_labor"); it != doc.end() && !it->is_null()) {
        if (!it->is_object()) throw ConfigError("endogenous_labor: expected an object");
        reject_unknown(*it, "endogenous_labor", {"r"});
        c.endogenous_labor = EndogenousLabor{number(require(*it, "r", "endogenous_labor"),
                                                    "endogenous_labor.r")};
    }

    if (auto it = doc.find("labor_supply"); it != doc.end())
        c.labor_supply = parse_schedule(*it, "labor_supply", false);
    else if (!c.endogenous_labor)
        throw ConfigError("config: missing required key 'labor_supply'");

    if (auto it = doc.find("l0"); it != doc.end())
        c.l0 = parse_schedule(*it, "l0", true);

    if (auto it = doc.find("learning_mode"); it != doc.end()) {
        if (!it->is_string()) throw ConfigError("learning_mode: expected \"PD\" or \"PI\"");
        const std::string mode = it->get<std::string>();
        if (mode == "PD")
            c.learning_mode = LearningMode::PD;
        else if (mode == "PI")
            c.learning_mode = LearningMode::PI;
        else
            throw ConfigError("learning_mode: expected \"PD\" or \"PI\", got '" + mode + "'");
    }

    if (auto it = doc.find("seed"); it != doc.end()) {
        if (!it->is_number_unsigned())
            throw ConfigError("seed: expected a non-negative 64-bit integer");
        c.seed = it->get<std::uint64_t>();
    }

    validate(c);
    return c;
}

std::string config_to_json(const EconomyConfig& c, int indent) {
    json doc;
    doc["alpha"] = c.alpha;
    json sectors = json::array();
    for (const auto& p : c.sectors)
        sectors.push_back({{"zeta_star", p.zeta_star},
                           {"m", p.m},
                           {"sigma", p.sigma},
                           {"tau", p.tau},
                           {"zeta0", p.zeta0},
                           {"zeta_lo", p.zeta_lo},
                           {"zeta_hi", p.zeta_hi}});
    doc["sectors"] = sectors;
    doc["horizon"] = c.horizon;
    doc["labor_supply"] = schedule_to_json(c.labor_supply);
    doc["l0"] = schedule_to_json(c.l0);
    doc["learning_mode"] = to_string(c.learning_mode);
    if (c.endogenous_labor) doc["endogenous_labor"] = {{"r", c.endogenous_labor->r}};
    doc["seed"] = c.seed;
    return doc.dump(indent);
}

}  // namespace rtsl
