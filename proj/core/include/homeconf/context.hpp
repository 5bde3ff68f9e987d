#ifndef HOMECONF_CONTEXT_HPP
#define HOMECONF_CONTEXT_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "homeconf/time_of_day.hpp"

namespace homeconf {

/// Resident preference: keep `env` at `value` during [st, et] at `loc`.
struct EnvPreference {
    std::string env;
    double value = 0.0;
    TimeOfDay st;
    TimeOfDay et;
    std::string loc;
    friend bool operator==(const EnvPreference&, const EnvPreference&) = default;
};

/// Average outdoor state of `env` during [st, et].
struct OutdoorState {
    std::string env;
    double value = 0.0;
    TimeOfDay st;
    TimeOfDay et;
    friend bool operator==(const OutdoorState&, const OutdoorState&) = default;
};

struct HomeContext {
    std::vector<EnvPreference> prefs;
    std::vector<OutdoorState> outdoor;
    std::map<std::string, std::string> placements;  // service -> location
    friend bool operator==(const HomeContext&, const HomeContext&) = default;
};

/// A rule that fired at a point in time at a location.
struct RuleFiring {
    std::string rule;
    TimeOfDay time;
    std::string loc;
    friend bool operator==(const RuleFiring&, const RuleFiring&) = default;
};

/// Current sensor value per (env, loc), keyed "env@loc".
using Readings = std::map<std::pair<std::string, std::string>, double>;

HomeContext load_context(const std::string& path);   // context.json
void save_context(const HomeContext& ctx, const std::string& path);

std::vector<RuleFiring> load_firings(const std::string& path);  // rule,time,location csv
void save_firings(const std::vector<RuleFiring>& firings, const std::string& path);

Readings load_readings(const std::string& path);  // {"temperature@bedroom":25,...}
void save_readings(const Readings& readings, const std::string& path);

}  // namespace homeconf

#endif
