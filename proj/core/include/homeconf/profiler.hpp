#ifndef HOMECONF_PROFILER_HPP
#define HOMECONF_PROFILER_HPP

#include <map>
#include <string>
#include <vector>

#include "homeconf/context.hpp"
#include "homeconf/knowledge_graph.hpp"
#include "homeconf/rules.hpp"

namespace homeconf {

struct ProfileResult {
    KnowledgeGraph kg;
    std::vector<std::string> warnings;
};

/// Seed -> KG1. Adds a (env, T, service) edge for every rule whose trigger
/// compares an environment property and whose action invokes a service.
/// Service-event triggers stay rule metadata; all seed triples are kept.
KnowledgeGraph complete(const KnowledgeGraph& seed, const std::vector<EcaRule>& rules);

/// KG1 -> KG2. Partitions services by location; triples whose service is
/// unplaced are dropped with a warning.
ProfileResult tailor(const KnowledgeGraph& kg1,
                     const std::map<std::string, std::string>& placements);

/// KG2 -> KG3. Disambiguates every (service, env) pair that carries both "+"
/// and "-": outdoor average above the resident's preferred value keeps "+",
/// below keeps "-"; without covering context the majority mining support wins,
/// ties keep "+" with a warning. Rules plus firings materialize setpoint
/// preferences into the context before the decision (explicit prefs win).
ProfileResult refine(const KnowledgeGraph& kg2, const HomeContext& ctx,
                     const std::vector<EcaRule>& rules = {},
                     const std::vector<RuleFiring>& firings = {});

/// complete -> tailor -> refine, warnings merged.
ProfileResult profile(const KnowledgeGraph& seed, const std::vector<EcaRule>& rules,
                      const HomeContext& ctx, const std::vector<RuleFiring>& firings = {});

/// Writes kg3 triples plus a profile_meta.json sidecar with stage, partition
/// and warnings.
void save_profile(const ProfileResult& result, const std::string& triples_path,
                  const std::string& meta_path);

}  // namespace homeconf

#endif
