#include "homeconf/filters.hpp"

#include <cmath>

namespace homeconf {

std::string to_string(Method m) {
    switch (m) {
        case Method::M1: return "M1";
        case Method::M2: return "M2";
        case Method::M3: return "M3";
        case Method::M4: return "M4";
    }
    throw std::logic_error("bad Method");
}

Method method_from_string(std::string_view s) {
    if (s == "M1") return Method::M1;
    if (s == "M2") return Method::M2;
    if (s == "M3") return Method::M3;
    if (s == "M4") return Method::M4;
    throw std::runtime_error("unknown method '" + std::string(s) + "'");
}

std::vector<IntervalEvent> filter_inert_events(const std::vector<IntervalEvent>& events,
                                               const KnowledgeGraph& kg) {
    std::vector<IntervalEvent> out;
    for (const auto& e : events) {
        bool impactful = false;
        for (const auto& tr : kg.triples_touching(e.service)) {
            if (tr.r != Relation::Trigger && tr.h == e.service) impactful = true;
            if (tr.r == Relation::Trigger && tr.t == e.service) impactful = true;
        }
        if (impactful) out.push_back(e);
    }
    return out;
}

std::vector<Conflict> filter_contextual(const std::vector<Conflict>& conflicts,
                                        const HomeContext& ctx, const Readings& readings,
                                        double eps) {
    std::vector<Conflict> out;
    for (const auto& c : conflicts) {
        if (c.kind != ConflictKind::OppConf && c.kind != ConflictKind::CumConf) {
            out.push_back(c);
            continue;
        }
        auto it = readings.find({c.env, c.loc});
        if (it == readings.end())
            throw MissingReading("no reading for (" + c.env + ", " + c.loc + ")");

        // The preference matching the conflict's property and location; the
        // first interval overlapping the evidence events wins, else any.
        const EnvPreference* pref = nullptr;
        for (const auto& p : ctx.prefs) {
            if (p.env != c.env || p.loc != c.loc) continue;
            bool overlaps = c.events.empty();
            for (const auto& e : c.events)
                if (p.st <= e.et && e.st <= p.et) overlaps = true;
            if (overlaps) {
                pref = &p;
                break;
            }
            if (!pref) pref = &p;
        }
        if (!pref) {
            out.push_back(c);  // no stated preference, keep
            continue;
        }
        if (std::abs(it->second - pref->value) > eps) out.push_back(c);
    }
    return out;
}

std::vector<Conflict> run_method(Method method, const std::vector<IntervalEvent>& events,
                                 const std::vector<RuleFiring>& firings,
                                 const std::vector<EcaRule>& rules, const KnowledgeGraph& kg3,
                                 TimeConstraint zeta, const HomeContext& ctx,
                                 const Readings& readings) {
    const bool pre = method == Method::M2 || method == Method::M4;
    const bool post = method == Method::M3 || method == Method::M4;
    const auto& input = pre ? filter_inert_events(events, kg3) : events;
    auto conflicts = detect_all(input, firings, rules, kg3, zeta);
    if (post) conflicts = filter_contextual(conflicts, ctx, readings);
    return conflicts;
}

}  // namespace homeconf
