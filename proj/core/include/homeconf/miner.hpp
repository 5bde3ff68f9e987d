#ifndef HOMECONF_MINER_HPP
#define HOMECONF_MINER_HPP

#include <map>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "homeconf/knowledge_graph.hpp"

namespace homeconf {

/// Raw functionality phrases for one IoT service.
struct ServiceDescription {
    std::string service;
    std::vector<std::string> phrases;
};

/// Increase/decrease indicator phrases for one environment property.
struct PropertyCorpus {
    std::string env;
    std::vector<std::string> inset;
    std::vector<std::string> deset;
};

struct EmbeddingTable {
    std::size_t dim = 0;
    std::unordered_map<std::string, std::vector<double>> vectors;
};

/// Similarity gate, strictly inside (0,1).
struct Threshold {
    double theta;
    explicit Threshold(double th);
};

using Stopwords = std::set<std::string>;
using LemmaMap = std::map<std::string, std::string>;

/// Lowercase, split on non-alphanumeric, drop stopwords, lemmatize by lookup
/// (unknown tokens pass through). Deterministic; may return empty.
std::vector<std::string> preprocess(std::string_view text, const Stopwords& stopwords,
                                    const LemmaMap& lemmas);

/// Arithmetic mean of the vectors of in-vocabulary tokens; the zero vector
/// when none are in vocabulary.
std::vector<double> embed_phrase(const std::vector<std::string>& tokens,
                                 const EmbeddingTable& table);

/// Cosine similarity; 0 when either norm vanishes. Throws std::invalid_argument
/// on dimension mismatch.
double cosine(const std::vector<double>& v, const std::vector<double>& w);

/// The (description phrase, corpus phrase, score) evidence behind a mined edge.
struct Witness {
    std::string phrase;
    std::string corpus_phrase;
    double score = 0.0;
};

struct MinedRelation {
    Triple triple;
    std::vector<Witness> witnesses;
};

/// Gates cosine similarity of every (description phrase, corpus phrase) pair
/// strictly above theta and emits +/- impact edges per Inset/Deset membership.
/// Output is deduplicated and sorted; a service may end up with both signs
/// toward the same property.
std::vector<MinedRelation> mine_relations(const std::vector<ServiceDescription>& descs,
                                          const std::vector<PropertyCorpus>& corpora,
                                          const EmbeddingTable& table, Threshold theta,
                                          const Stopwords& stopwords = {},
                                          const LemmaMap& lemmas = {});

/// Seed graph from mined relations; support = witness count.
KnowledgeGraph seed_graph(const std::vector<MinedRelation>& mined,
                          std::set<std::string> env_vocab);

// File loaders for the miner's inputs.
EmbeddingTable load_embeddings(const std::string& path);        // token<TAB>f1 f2 ...
std::vector<PropertyCorpus> load_corpora(const std::string& path);  // jsonl
std::vector<ServiceDescription> load_descriptions(const std::string& path);  // jsonl
Stopwords load_stopwords(const std::string& path);
LemmaMap load_lemmas(const std::string& path);  // inflected<TAB>base

}  // namespace homeconf

#endif
