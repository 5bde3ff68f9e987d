#include "homeconf/context.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "homeconf/entity.hpp"

namespace homeconf {

using nlohmann::json;

namespace {

TimeOfDay parse_time_field(const json& j, const char* key) {
    return TimeOfDay::parse(j.at(key).get<std::string>());
}

}  // namespace

HomeContext load_context(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    json j;
    try {
        j = json::parse(in);
    } catch (const json::exception& e) {
        throw std::runtime_error(path + ": " + e.what());
    }
    HomeContext ctx;
    for (const auto& p : j.value("prefs", json::array())) {
        EnvPreference pref;
        pref.env = normalize_entity(p.at("env").get<std::string>());
        pref.value = p.at("value").get<double>();
        pref.st = parse_time_field(p, "st");
        pref.et = parse_time_field(p, "et");
        pref.loc = normalize_entity(p.at("loc").get<std::string>());
        if (pref.st > pref.et)
            throw std::runtime_error(path + ": preference for " + pref.env + " has st > et");
        ctx.prefs.push_back(std::move(pref));
    }
    for (const auto& o : j.value("outdoor", json::array())) {
        OutdoorState out;
        out.env = normalize_entity(o.at("env").get<std::string>());
        out.value = o.at("value").get<double>();
        out.st = parse_time_field(o, "st");
        out.et = parse_time_field(o, "et");
        if (out.st > out.et)
            throw std::runtime_error(path + ": outdoor state for " + out.env + " has st > et");
        ctx.outdoor.push_back(std::move(out));
    }
    const json placements = j.value("placements", json::object());
    for (const auto& [svc, loc] : placements.items())
        ctx.placements[normalize_entity(svc)] = normalize_entity(loc.get<std::string>());
    return ctx;
}

void save_context(const HomeContext& ctx, const std::string& path) {
    json j;
    j["prefs"] = json::array();
    for (const auto& p : ctx.prefs)
        j["prefs"].push_back({{"env", p.env},
                              {"value", p.value},
                              {"st", p.st.str()},
                              {"et", p.et.str()},
                              {"loc", p.loc}});
    j["outdoor"] = json::array();
    for (const auto& o : ctx.outdoor)
        j["outdoor"].push_back(
            {{"env", o.env}, {"value", o.value}, {"st", o.st.str()}, {"et", o.et.str()}});
    j["placements"] = json::object();
    for (const auto& [svc, loc] : ctx.placements) j["placements"][svc] = loc;
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << j.dump(2) << '\n';
}

std::vector<RuleFiring> load_firings(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::string line;
    if (!std::getline(in, line) || line.rfind("rule,time,location", 0) != 0)
        throw std::runtime_error(path + ": expected header 'rule,time,location'");
    std::vector<RuleFiring> out;
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::istringstream ss(line);
        std::string rule, time, loc;
        if (!std::getline(ss, rule, ',') || !std::getline(ss, time, ',') ||
            !std::getline(ss, loc))
            throw std::runtime_error(path + ":" + std::to_string(lineno) +
                                     ": expected 3 comma-separated fields");
        try {
            out.push_back(RuleFiring{rule, TimeOfDay::parse(time), normalize_entity(loc)});
        } catch (const std::exception& e) {
            throw std::runtime_error(path + ":" + std::to_string(lineno) + ": " + e.what());
        }
    }
    return out;
}

void save_firings(const std::vector<RuleFiring>& firings, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << "rule,time,location\n";
    for (const auto& f : firings)
        out << f.rule << ',' << f.time.str() << ',' << f.loc << '\n';
}

Readings load_readings(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    json j = json::parse(in);
    Readings out;
    for (const auto& [key, value] : j.items()) {
        auto at = key.find('@');
        if (at == std::string::npos)
            throw std::runtime_error(path + ": reading key '" + key + "' must be env@loc");
        out[{normalize_entity(key.substr(0, at)), normalize_entity(key.substr(at + 1))}] =
            value.get<double>();
    }
    return out;
}

void save_readings(const Readings& readings, const std::string& path) {
    json j = json::object();
    for (const auto& [key, value] : readings) j[key.first + "@" + key.second] = value;
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << j.dump(2) << '\n';
}

}  // namespace homeconf
