#ifndef HOMECONF_FILTERS_HPP
#define HOMECONF_FILTERS_HPP

#include <stdexcept>
#include <string>
#include <vector>

#include "homeconf/context.hpp"
#include "homeconf/detector.hpp"
#include "homeconf/events.hpp"
#include "homeconf/knowledge_graph.hpp"

namespace homeconf {

/// Detector variants: plain, +inert-event filter, +contextual filter, +both.
enum class Method { M1, M2, M3, M4 };

std::string to_string(Method m);
Method method_from_string(std::string_view s);

struct MissingReading : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Strategy 1: keep only events whose service occurs in the graph as the head
/// of an impact edge or the tail of a trigger edge. Order preserved.
std::vector<IntervalEvent> filter_inert_events(const std::vector<IntervalEvent>& events,
                                               const KnowledgeGraph& kg);

/// Strategy 2: drop an Opp/Cum conflict when the current reading for its
/// (env, loc) already matches the resident's preference within eps. FFConf
/// and TraConf pass through. Throws MissingReading when a referenced
/// (env, loc) has no reading.
std::vector<Conflict> filter_contextual(const std::vector<Conflict>& conflicts,
                                        const HomeContext& ctx, const Readings& readings,
                                        double eps = 0.5);

/// Full method wiring: M2/M4 pre-filter events, M3/M4 post-filter conflicts.
std::vector<Conflict> run_method(Method method, const std::vector<IntervalEvent>& events,
                                 const std::vector<RuleFiring>& firings,
                                 const std::vector<EcaRule>& rules, const KnowledgeGraph& kg3,
                                 TimeConstraint zeta, const HomeContext& ctx,
                                 const Readings& readings);

}  // namespace homeconf

#endif
