#include "homeconf/detector.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <unordered_map>

#include <json.hpp>

namespace homeconf {

using nlohmann::json;

std::string to_string(ConflictKind k) {
    switch (k) {
        case ConflictKind::FFConf: return "FFConf";
        case ConflictKind::OppConf: return "OppConf";
        case ConflictKind::CumConf: return "CumConf";
        case ConflictKind::TraConf: return "TraConf";
    }
    throw std::logic_error("bad ConflictKind");
}

ConflictKind conflict_kind_from_string(std::string_view s) {
    if (s == "FFConf") return ConflictKind::FFConf;
    if (s == "OppConf") return ConflictKind::OppConf;
    if (s == "CumConf") return ConflictKind::CumConf;
    if (s == "TraConf") return ConflictKind::TraConf;
    throw std::runtime_error("unknown conflict kind '" + std::string(s) + "'");
}

TimeConstraint::TimeConstraint(int minutes) : zeta_min(minutes) {
    if (minutes <= 0) throw std::invalid_argument("zeta must be positive");
}

std::string Conflict::key() const {
    std::string p1 = a, p2 = b;
    if (kind != ConflictKind::TraConf && p2 < p1) std::swap(p1, p2);
    return to_string(kind) + "|" + p1 + "|" + p2 + "|" + env + "|" + loc;
}

std::vector<std::pair<IntervalEvent, IntervalEvent>> find_overlaps(
    std::vector<IntervalEvent> events) {
    std::sort(events.begin(), events.end(), [](const IntervalEvent& a, const IntervalEvent& b) {
        return std::tie(a.st, a.et, a.service, a.loc) < std::tie(b.st, b.et, b.service, b.loc);
    });
    std::vector<std::pair<IntervalEvent, IntervalEvent>> out;
    for (std::size_t i = 0; i < events.size(); ++i) {
        // Later events start past e_i.et and cannot overlap; stop scanning.
        for (std::size_t j = i + 1; j < events.size() && events[j].st <= events[i].et; ++j)
            if (events[i].loc == events[j].loc) out.emplace_back(events[i], events[j]);
    }
    return out;
}

std::vector<Conflict> detect_ff(const std::vector<RuleFiring>& firings,
                                const std::vector<EcaRule>& rules, TimeConstraint zeta) {
    auto find_rule = [&](const std::string& id) -> const EcaRule& {
        auto it = std::find_if(rules.begin(), rules.end(),
                               [&](const EcaRule& r) { return r.id == id; });
        if (it == rules.end())
            throw std::invalid_argument("firing references unknown rule '" + id + "'");
        return *it;
    };

    for (const auto& f : firings) find_rule(f.rule);

    std::vector<Conflict> out;
    for (std::size_t i = 0; i < firings.size(); ++i) {
        for (std::size_t j = i + 1; j < firings.size(); ++j) {
            const auto& fi = firings[i];
            const auto& fj = firings[j];
            if (fi.loc != fj.loc) continue;
            if (std::abs(fi.time.seconds() - fj.time.seconds()) >= zeta.zeta_min * 60)
                continue;
            const EcaRule& ri = find_rule(fi.rule);
            const EcaRule& rj = find_rule(fj.rule);
            if (ri.id == rj.id) continue;
            auto ai = rule_invokes(ri);
            auto aj = rule_invokes(rj);
            if (!ai || !aj) continue;
            if (ai->service != aj->service) continue;
            if (ai->functionality == aj->functionality) continue;
            Conflict c;
            c.kind = ConflictKind::FFConf;
            c.a = ri.id;
            c.b = rj.id;
            c.loc = fi.loc;
            out.push_back(std::move(c));
        }
    }
    return out;
}

bool trigger_true(const TriggerCond& trig, const Readings& readings, const std::string& loc) {
    const auto* ec = std::get_if<EnvComparison>(&trig);
    if (!ec) return false;
    auto it = readings.find({ec->env, loc});
    if (it == readings.end()) return false;
    const auto* q = std::get_if<Quantity>(&ec->value);
    if (!q) return false;
    switch (ec->op) {
        case '<': return it->second < q->value;
        case '>': return it->second > q->value;
        case '=': return std::abs(it->second - q->value) < 1e-9;
    }
    return false;
}

namespace {

bool is_impact(const Triple& tr) { return tr.r != Relation::Trigger; }

// Deterministic order and dedup over conflict identities, computing each key
// once instead of per comparison.
void sort_dedup(std::vector<Conflict>& cs) {
    std::vector<std::pair<std::string, std::size_t>> keys;
    keys.reserve(cs.size());
    for (std::size_t i = 0; i < cs.size(); ++i) keys.emplace_back(cs[i].key(), i);
    std::sort(keys.begin(), keys.end());
    std::vector<Conflict> out;
    out.reserve(keys.size());
    for (std::size_t i = 0; i < keys.size(); ++i) {
        if (i > 0 && keys[i].first == keys[i - 1].first) continue;
        out.push_back(std::move(cs[keys[i].second]));
    }
    cs = std::move(out);
}

// Transitive pattern: s_i's impact on alpha.t meets a trigger edge into s_j.
// Environments claimed by a transitive hit are collected so the same event
// pair is not also reported as an opposite/cumulative conflict over them: the
// later service ran because it was triggered, which is the more specific
// diagnosis.
void check_transitive(const IntervalEvent& ei, const IntervalEvent& ej,
                      const std::vector<Triple>& set_i, const std::vector<Triple>& set_j,
                      const std::vector<EcaRule>& rules, const Readings* strict,
                      std::set<std::string>& claimed, std::vector<Conflict>& out) {
    for (const auto& alpha : set_i) {
        if (!is_impact(alpha) || alpha.h != ei.service) continue;
        for (const auto& beta : set_j) {
            if (beta.r != Relation::Trigger || beta.t != ej.service) continue;
            if (alpha.t != beta.h) continue;
            if (strict) {
                bool fires = false;
                for (const auto& rule : rules) {
                    auto invoked = rule_invokes(rule);
                    if (!invoked || invoked->service != ej.service) continue;
                    if (trigger_true(rule.trig, *strict, ei.loc)) fires = true;
                }
                if (!fires) continue;
            }
            Conflict c;
            c.kind = ConflictKind::TraConf;
            c.a = ei.service;
            c.b = ej.service;
            c.env = alpha.t;
            c.loc = ei.loc;
            c.triple_a = alpha;
            c.triple_b = beta;
            c.events = {ei, ej};
            claimed.insert(alpha.t);
            out.push_back(std::move(c));
        }
    }
}

// Opp/Cum/Tra checks for one overlapping pair, ei starting no later than ej.
void check_pair(const IntervalEvent& ei, const IntervalEvent& ej,
                const std::vector<Triple>& set_i, const std::vector<Triple>& set_j,
                const std::vector<EcaRule>& rules, const Readings* strict,
                std::vector<Conflict>& out) {
    // TraConf is direction-sensitive: the earlier event's impact triggers
    // the later service. On a start-time tie both orientations apply.
    std::set<std::string> claimed;
    check_transitive(ei, ej, set_i, set_j, rules, strict, claimed, out);
    if (ei.st == ej.st)
        check_transitive(ej, ei, set_j, set_i, rules, strict, claimed, out);

    for (const auto& alpha : set_i) {
        if (!is_impact(alpha) || alpha.h != ei.service) continue;
        if (claimed.count(alpha.t)) continue;
        for (const auto& beta : set_j) {
            if (!is_impact(beta) || beta.h != ej.service) continue;
            if (alpha.t != beta.t) continue;
            Conflict c;
            c.kind = alpha.r == beta.r ? ConflictKind::CumConf : ConflictKind::OppConf;
            c.a = ei.service;
            c.b = ej.service;
            c.env = alpha.t;
            c.loc = ei.loc;
            c.triple_a = alpha;
            c.triple_b = beta;
            c.events = {ei, ej};
            out.push_back(std::move(c));
        }
    }
}

}  // namespace

std::vector<Conflict> detect_pairwise(
    const std::vector<std::pair<IntervalEvent, IntervalEvent>>& pairs,
    const KnowledgeGraph& kg3, const std::vector<EcaRule>& rules,
    const Readings* strict_readings) {
    if (kg3.stage() != KgStage::KG3)
        throw std::invalid_argument("detect_pairwise expects a KG3 graph");

    std::unordered_map<std::string, std::vector<Triple>> touching;
    auto sets_of = [&](const std::string& svc) -> const std::vector<Triple>& {
        auto it = touching.find(svc);
        if (it == touching.end())
            it = touching.emplace(svc, kg3.triples_touching(svc)).first;
        return it->second;
    };

    std::vector<Conflict> out;
    for (const auto& pair : pairs) {
        IntervalEvent ei = pair.first;
        IntervalEvent ej = pair.second;
        if (ej.st < ei.st) std::swap(ei, ej);
        if (ei.service == ej.service) continue;
        const auto& set_i = sets_of(ei.service);
        const auto& set_j = sets_of(ej.service);
        if (set_i.empty() || set_j.empty()) continue;
        check_pair(ei, ej, set_i, set_j, rules, strict_readings, out);
    }

    sort_dedup(out);
    return out;
}

std::vector<Conflict> detect_all(const std::vector<IntervalEvent>& events,
                                 const std::vector<RuleFiring>& firings,
                                 const std::vector<EcaRule>& rules,
                                 const KnowledgeGraph& kg3, TimeConstraint zeta,
                                 const Readings* strict_readings) {
    if (kg3.stage() != KgStage::KG3)
        throw std::invalid_argument("detect_all expects a KG3 graph");
    auto out = detect_ff(firings, rules, zeta);

    // Same sweep as find_overlaps + detect_pairwise, fused so that pairs with
    // an inert side are skipped before anything is copied.
    auto sorted = events;
    std::sort(sorted.begin(), sorted.end(), [](const IntervalEvent& a, const IntervalEvent& b) {
        return std::tie(a.st, a.et, a.service, a.loc) < std::tie(b.st, b.et, b.service, b.loc);
    });
    std::unordered_map<std::string, std::vector<Triple>> touching;
    std::vector<const std::vector<Triple>*> sets(sorted.size());
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        auto it = touching.find(sorted[i].service);
        if (it == touching.end())
            it = touching.emplace(sorted[i].service, kg3.triples_touching(sorted[i].service))
                     .first;
        sets[i] = &it->second;
    }
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        if (sets[i]->empty()) continue;
        for (std::size_t j = i + 1; j < sorted.size() && sorted[j].st <= sorted[i].et; ++j) {
            if (sets[j]->empty() || sorted[i].loc != sorted[j].loc) continue;
            if (sorted[i].service == sorted[j].service) continue;
            check_pair(sorted[i], sorted[j], *sets[i], *sets[j], rules, strict_readings, out);
        }
    }
    sort_dedup(out);
    return out;
}

void save_conflicts(const std::vector<Conflict>& conflicts, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    for (const auto& c : conflicts) {
        json j;
        j["kind"] = to_string(c.kind);
        if (!c.env.empty()) j["env"] = c.env;
        j["loc"] = c.loc;
        auto party = [&](const std::string& id, const std::optional<Triple>& tr) {
            json p;
            if (c.kind == ConflictKind::FFConf) {
                p["rule"] = id;
            } else {
                p["service"] = id;
                if (tr) p["triple"] = {tr->h, to_string(tr->r), tr->t};
            }
            return p;
        };
        j["a"] = party(c.a, c.triple_a);
        j["b"] = party(c.b, c.triple_b);
        j["events"] = json::array();
        for (const auto& e : c.events)
            j["events"].push_back(
                {{"service", e.service}, {"st", e.st.str()}, {"et", e.et.str()}});
        out << j.dump() << '\n';
    }
}

std::vector<Conflict> load_conflicts(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::vector<Conflict> out;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        json j;
        try {
            j = json::parse(line);
        } catch (const json::exception& e) {
            throw std::runtime_error(path + ":" + std::to_string(lineno) + ": " + e.what());
        }
        Conflict c;
        c.kind = conflict_kind_from_string(j.at("kind").get<std::string>());
        c.env = j.value("env", "");
        c.loc = j.at("loc").get<std::string>();
        auto party = [&](const json& p) -> std::pair<std::string, std::optional<Triple>> {
            if (p.contains("rule")) return {p.at("rule").get<std::string>(), std::nullopt};
            std::optional<Triple> tr;
            if (p.contains("triple")) {
                const auto& t = p.at("triple");
                tr = Triple{t.at(0).get<std::string>(),
                            relation_from_string(t.at(1).get<std::string>()),
                            t.at(2).get<std::string>()};
            }
            return {p.at("service").get<std::string>(), tr};
        };
        std::tie(c.a, c.triple_a) = party(j.at("a"));
        std::tie(c.b, c.triple_b) = party(j.at("b"));
        for (const auto& e : j.value("events", json::array()))
            c.events.push_back(IntervalEvent{e.at("service").get<std::string>(),
                                             TimeOfDay::parse(e.at("st").get<std::string>()),
                                             TimeOfDay::parse(e.at("et").get<std::string>()),
                                             c.loc});
        out.push_back(std::move(c));
    }
    return out;
}

}  // namespace homeconf
