#ifndef HOMECONF_EVENTS_HPP
#define HOMECONF_EVENTS_HPP

#include <stdexcept>
#include <string>
#include <vector>

#include "homeconf/time_of_day.hpp"

namespace homeconf {

struct EventParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A service activation over [st, et] at a location, within one day.
struct IntervalEvent {
    std::string service;
    TimeOfDay st;
    TimeOfDay et;
    std::string loc;

    friend bool operator==(const IntervalEvent&, const IntervalEvent&) = default;
};

IntervalEvent make_event(std::string service, TimeOfDay st, TimeOfDay et, std::string loc);

/// events.csv with required header `service,start,end,location`.
std::vector<IntervalEvent> load_events(const std::string& path);
void save_events(const std::vector<IntervalEvent>& events, const std::string& path);

}  // namespace homeconf

#endif
