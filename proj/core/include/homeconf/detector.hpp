#ifndef HOMECONF_DETECTOR_HPP
#define HOMECONF_DETECTOR_HPP

#include <optional>
#include <string>
#include <vector>

#include "homeconf/context.hpp"
#include "homeconf/events.hpp"
#include "homeconf/knowledge_graph.hpp"
#include "homeconf/rules.hpp"

namespace homeconf {

enum class ConflictKind { FFConf, OppConf, CumConf, TraConf };

std::string to_string(ConflictKind k);
ConflictKind conflict_kind_from_string(std::string_view s);

/// ζ window for function-function conflicts, in minutes.
struct TimeConstraint {
    int zeta_min;
    explicit TimeConstraint(int minutes);
};

/// A detected conflict instance. `a`/`b` are service ids, or rule ids for
/// FFConf; TraConf is ordered (a's impact triggers b).
struct Conflict {
    ConflictKind kind = ConflictKind::FFConf;
    std::string a;
    std::string b;
    std::string env;  // shared property; empty for FFConf
    std::string loc;
    std::optional<Triple> triple_a;
    std::optional<Triple> triple_b;
    std::vector<IntervalEvent> events;

    /// Identity used for dedup and scoring: kind + party pair (unordered
    /// except TraConf) + env + loc. Event timestamps are ignored.
    std::string key() const;

    friend bool operator<(const Conflict& x, const Conflict& y) { return x.key() < y.key(); }
    friend bool operator==(const Conflict& x, const Conflict& y) { return x.key() == y.key(); }
};

/// Overlapping same-location event pairs, earlier-starting event first,
/// under the closed comparison e_i.st <= e_j.st <= e_i.et. Sweep over
/// start-sorted events; equivalent to the quadratic scan.
std::vector<std::pair<IntervalEvent, IntervalEvent>> find_overlaps(
    std::vector<IntervalEvent> events);

/// Function-function conflicts: two firings within ζ at one location whose
/// rules command the same service with different functionalities.
std::vector<Conflict> detect_ff(const std::vector<RuleFiring>& firings,
                                const std::vector<EcaRule>& rules, TimeConstraint zeta);

/// Environment-impact conflicts (Opp/Cum/Tra) over overlapping event pairs
/// against a KG3 graph. Self-pairs (same service) are skipped. When `strict`
/// readings are supplied, a transitive conflict additionally requires the
/// downstream rule's trigger to evaluate true.
std::vector<Conflict> detect_pairwise(
    const std::vector<std::pair<IntervalEvent, IntervalEvent>>& pairs,
    const KnowledgeGraph& kg3, const std::vector<EcaRule>& rules = {},
    const Readings* strict_readings = nullptr);

/// Union of detect_ff and detect_pairwise(find_overlaps(events)), deduplicated
/// and in deterministic order.
std::vector<Conflict> detect_all(const std::vector<IntervalEvent>& events,
                                 const std::vector<RuleFiring>& firings,
                                 const std::vector<EcaRule>& rules,
                                 const KnowledgeGraph& kg3, TimeConstraint zeta,
                                 const Readings* strict_readings = nullptr);

/// Evaluates an environment-comparison trigger against current readings.
/// Service-event triggers and missing readings give false.
bool trigger_true(const TriggerCond& trig, const Readings& readings, const std::string& loc);

/// conflicts.jsonl round trip.
void save_conflicts(const std::vector<Conflict>& conflicts, const std::string& path);
std::vector<Conflict> load_conflicts(const std::string& path);

}  // namespace homeconf

#endif
