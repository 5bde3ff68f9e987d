#include "homeconf/profiler.hpp"

#include <algorithm>
#include <fstream>
#include <optional>

#include <json.hpp>

namespace homeconf {

using nlohmann::json;

namespace {

// The service endpoint of a triple: head for impact edges, tail for trigger edges.
const std::string& service_of(const Triple& tr) {
    return tr.r == Relation::Trigger ? tr.t : tr.h;
}

// Derived preference window when a setpoint rule fires; the activation end is
// unknown, so a fixed two-hour horizon is assumed.
constexpr int kDerivedPrefWindowMin = 120;

std::vector<EnvPreference> derived_prefs(const std::vector<EcaRule>& rules,
                                         const std::vector<RuleFiring>& firings) {
    std::vector<EnvPreference> out;
    for (const auto& firing : firings) {
        auto rule = std::find_if(rules.begin(), rules.end(),
                                 [&](const EcaRule& r) { return r.id == firing.rule; });
        if (rule == rules.end()) continue;
        for (const auto& cmd : rule->action.commands) {
            const auto* sp = std::get_if<EnvSetpoint>(&cmd);
            if (!sp) continue;
            int end_s = std::min(firing.time.seconds() + kDerivedPrefWindowMin * 60,
                                 TimeOfDay::end_of_day().seconds());
            out.push_back(EnvPreference{sp->env, sp->value.value, firing.time,
                                        TimeOfDay(end_s), firing.loc});
        }
    }
    return out;
}

std::optional<EnvPreference> find_pref(const std::vector<EnvPreference>& prefs,
                                       const std::string& env, const std::string& loc) {
    for (const auto& p : prefs)
        if (p.env == env && p.loc == loc) return p;
    return std::nullopt;
}

std::optional<double> outdoor_average(const std::vector<OutdoorState>& outdoor,
                                      const std::string& env, const EnvPreference& pref) {
    double sum = 0.0;
    int n = 0;
    for (const auto& o : outdoor)
        if (o.env == env && o.st <= pref.et && pref.st <= o.et) {
            sum += o.value;
            ++n;
        }
    if (n == 0) {
        for (const auto& o : outdoor)
            if (o.env == env) {
                sum += o.value;
                ++n;
            }
    }
    if (n == 0) return std::nullopt;
    return sum / n;
}

}  // namespace

KnowledgeGraph complete(const KnowledgeGraph& seed, const std::vector<EcaRule>& rules) {
    if (seed.stage() != KgStage::Seed)
        throw std::invalid_argument("complete expects a Seed graph");
    auto triples = seed.triples();
    for (const auto& rule : rules) {
        const auto* ec = std::get_if<EnvComparison>(&rule.trig);
        if (!ec) continue;  // service-event triggers stay rule metadata
        auto invoked = rule_invokes(rule);
        if (!invoked) continue;
        Triple tr{ec->env, Relation::Trigger, invoked->service};
        if (std::find(triples.begin(), triples.end(), tr) == triples.end())
            triples.push_back(tr);
    }
    return KnowledgeGraph(std::move(triples), KgStage::KG1, seed.env_vocab());
}

ProfileResult tailor(const KnowledgeGraph& kg1,
                     const std::map<std::string, std::string>& placements) {
    if (kg1.stage() != KgStage::KG1 && kg1.stage() != KgStage::KG2)
        throw std::invalid_argument("tailor expects a KG1 graph");
    ProfileResult result;
    std::vector<Triple> kept;
    std::map<std::string, std::set<std::string>> partition;
    for (const auto& tr : kg1.triples()) {
        const std::string& svc = service_of(tr);
        auto it = placements.find(svc);
        if (it == placements.end()) {
            result.warnings.push_back("service '" + svc + "' has no placement; dropped " +
                                      tr.h + " " + to_string(tr.r) + " " + tr.t);
            continue;
        }
        kept.push_back(tr);
        partition[it->second].insert(svc);
    }
    result.kg = KnowledgeGraph(std::move(kept), KgStage::KG2, kg1.env_vocab(),
                               std::move(partition));
    return result;
}

ProfileResult refine(const KnowledgeGraph& kg2, const HomeContext& ctx,
                     const std::vector<EcaRule>& rules,
                     const std::vector<RuleFiring>& firings) {
    if (kg2.stage() != KgStage::KG2)
        throw std::invalid_argument("refine expects a KG2 graph");
    ProfileResult result;

    // Explicit preferences take precedence over rule-derived ones.
    std::vector<EnvPreference> prefs = ctx.prefs;
    for (auto& p : derived_prefs(rules, firings)) prefs.push_back(std::move(p));

    // Location of each placed service, from the partition.
    std::map<std::string, std::string> loc_of;
    for (const auto& [loc, svcs] : kg2.partition())
        for (const auto& s : svcs) loc_of[s] = loc;

    // Collect double-signed (service, env) pairs.
    std::map<std::pair<std::string, std::string>, std::pair<const Triple*, const Triple*>> signs;
    for (const auto& tr : kg2.triples()) {
        if (tr.r == Relation::Trigger) continue;
        auto& slot = signs[{tr.h, tr.t}];
        (tr.r == Relation::Increase ? slot.first : slot.second) = &tr;
    }

    std::set<Triple> drop;
    for (const auto& [pair, slot] : signs) {
        const auto& [plus, minus] = slot;
        if (!plus || !minus) continue;  // single sign passes through unchanged
        const auto& [svc, env] = pair;

        std::optional<Relation> keep;
        auto loc_it = loc_of.find(svc);
        if (loc_it != loc_of.end()) {
            if (auto pref = find_pref(prefs, env, loc_it->second)) {
                if (auto avg = outdoor_average(ctx.outdoor, env, *pref)) {
                    if (*avg > pref->value)
                        keep = Relation::Increase;
                    else if (*avg < pref->value)
                        keep = Relation::Decrease;
                }
            }
        }
        if (!keep) {
            if (plus->support > minus->support)
                keep = Relation::Increase;
            else if (minus->support > plus->support)
                keep = Relation::Decrease;
            else {
                keep = Relation::Increase;
                result.warnings.push_back("unresolved ambiguity for (" + svc + ", " + env +
                                          "); kept '+'");
            }
        }
        drop.insert(*keep == Relation::Increase ? *minus : *plus);
    }

    std::vector<Triple> kept;
    for (const auto& tr : kg2.triples())
        if (!drop.count(tr)) kept.push_back(tr);
    result.kg = KnowledgeGraph(std::move(kept), KgStage::KG3, kg2.env_vocab(),
                               kg2.partition());
    return result;
}

ProfileResult profile(const KnowledgeGraph& seed, const std::vector<EcaRule>& rules,
                      const HomeContext& ctx, const std::vector<RuleFiring>& firings) {
    auto kg1 = complete(seed, rules);
    auto t = tailor(kg1, ctx.placements);
    auto r = refine(t.kg, ctx, rules, firings);
    ProfileResult out;
    out.kg = std::move(r.kg);
    out.warnings = std::move(t.warnings);
    out.warnings.insert(out.warnings.end(), r.warnings.begin(), r.warnings.end());
    return out;
}

void save_profile(const ProfileResult& result, const std::string& triples_path,
                  const std::string& meta_path) {
    save_triples(result.kg, triples_path);
    json j{{"stage", to_string(result.kg.stage())}, {"warnings", result.warnings}};
    json p = json::object();
    for (const auto& [loc, svcs] : result.kg.partition()) p[loc] = svcs;
    j["partition"] = p;
    std::ofstream out(meta_path);
    if (!out) throw std::runtime_error("cannot write " + meta_path);
    out << j.dump(2) << '\n';
}

}  // namespace homeconf
