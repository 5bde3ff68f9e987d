#include "homeconf/events.hpp"

#include <fstream>
#include <sstream>

#include "homeconf/entity.hpp"

namespace homeconf {

IntervalEvent make_event(std::string service, TimeOfDay st, TimeOfDay et, std::string loc) {
    if (st > et)
        throw EventParseError("event for '" + service + "' has st " + st.str() +
                              " > et " + et.str());
    if (loc.empty()) throw EventParseError("event for '" + service + "' has empty location");
    try {
        return IntervalEvent{normalize_entity(service), st, et, normalize_entity(loc)};
    } catch (const std::invalid_argument& e) {
        throw EventParseError("event for '" + service + "': " + e.what());
    }
}

std::vector<IntervalEvent> load_events(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw EventParseError("cannot open " + path);
    std::string line;
    if (!std::getline(in, line) || line.rfind("service,start,end,location", 0) != 0)
        throw EventParseError(path + ": expected header 'service,start,end,location'");
    std::vector<IntervalEvent> out;
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::istringstream ss(line);
        std::string service, start, end, loc;
        if (!std::getline(ss, service, ',') || !std::getline(ss, start, ',') ||
            !std::getline(ss, end, ',') || !std::getline(ss, loc))
            throw EventParseError(path + ":" + std::to_string(lineno) +
                                  ": expected 4 comma-separated fields");
        try {
            out.push_back(make_event(service, TimeOfDay::parse(start), TimeOfDay::parse(end), loc));
        } catch (const std::exception& e) {
            throw EventParseError(path + ":" + std::to_string(lineno) + ": " + e.what());
        }
    }
    return out;
}

void save_events(const std::vector<IntervalEvent>& events, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << "service,start,end,location\n";
    for (const auto& e : events)
        out << e.service << ',' << e.st.str() << ',' << e.et.str() << ',' << e.loc << '\n';
}

}  // namespace homeconf
