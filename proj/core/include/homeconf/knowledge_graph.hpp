#ifndef HOMECONF_KNOWLEDGE_GRAPH_HPP
#define HOMECONF_KNOWLEDGE_GRAPH_HPP

#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <tuple>
#include <unordered_map>
#include <vector>

namespace homeconf {

enum class Relation { Increase, Decrease, Trigger };

std::string to_string(Relation r);                  // "+", "-", "T"
Relation relation_from_string(std::string_view s);  // throws on anything else

/// Directed edge of the knowledge graph. Increase/Decrease edges run from an
/// IoT service to an environment property; Trigger edges run the other way.
struct Triple {
    std::string h;
    Relation r = Relation::Increase;
    std::string t;
    // Number of mining witnesses behind this edge. Not part of identity.
    int support = 1;

    friend bool operator==(const Triple& a, const Triple& b) {
        return a.h == b.h && a.r == b.r && a.t == b.t;
    }
    // Canonical order: lexicographic on (h, r-literal, t).
    friend bool operator<(const Triple& a, const Triple& b) {
        return std::tie(a.h, a.r, a.t) < std::tie(b.h, b.r, b.t);
    }
};

enum class KgStage { Seed, KG1, KG2, KG3 };

std::string to_string(KgStage s);
KgStage stage_from_string(std::string_view s);

struct MalformedTriple : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct TripleParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Immutable triple store with by-entity adjacency index. Mutating operations
/// return a new graph; instances are safe to share across threads.
class KnowledgeGraph {
public:
    KnowledgeGraph() = default;
    explicit KnowledgeGraph(KgStage stage, std::set<std::string> env_vocab = {});

    KnowledgeGraph(std::vector<Triple> triples, KgStage stage,
                   std::set<std::string> env_vocab = {},
                   std::map<std::string, std::set<std::string>> partition = {});

    /// Returns a graph that contains `tr` exactly once. Duplicate inserts are
    /// idempotent. Throws MalformedTriple when head/tail roles are wrong
    /// against the environment vocabulary (when a vocabulary is present).
    KnowledgeGraph insert(const Triple& tr) const;

    /// Every triple whose head or tail equals `entity`. Unknown entities give
    /// an empty result.
    std::vector<Triple> triples_touching(const std::string& entity) const;

    const std::vector<Triple>& triples() const { return triples_; }
    KgStage stage() const { return stage_; }
    const std::set<std::string>& env_vocab() const { return env_vocab_; }
    const std::map<std::string, std::set<std::string>>& partition() const { return partition_; }
    bool contains(const Triple& tr) const;
    std::size_t size() const { return triples_.size(); }

    bool is_env(const std::string& entity) const { return env_vocab_.count(entity) > 0; }

    KnowledgeGraph with_stage(KgStage s) const;
    KnowledgeGraph with_partition(std::map<std::string, std::set<std::string>> p) const;
    KnowledgeGraph with_triples(std::vector<Triple> triples) const;

    /// Throws MalformedTriple unless `tr` respects h != t and the role typing
    /// implied by the environment vocabulary.
    void check_triple(const Triple& tr) const;

private:
    void rebuild_index();

    std::vector<Triple> triples_;  // sorted, unique on (h,r,t)
    KgStage stage_ = KgStage::Seed;
    std::set<std::string> env_vocab_;
    std::map<std::string, std::set<std::string>> partition_;  // location -> services
    std::unordered_map<std::string, std::vector<std::size_t>> by_entity_;
};

/// One JSON object per line, keys "h","r","t" (optional "support"). A sidecar
/// `<path>.meta.json` carries stage and partition when either is non-default.
KnowledgeGraph load_triples(const std::string& path,
                            std::set<std::string> env_vocab = {});
void save_triples(const KnowledgeGraph& kg, const std::string& path);

/// env_vocab.txt: one property name per line, '#' comments allowed.
std::set<std::string> load_env_vocab(const std::string& path);

/// The eight properties from the shipped vocabulary.
std::set<std::string> default_env_vocab();

}  // namespace homeconf

#endif
