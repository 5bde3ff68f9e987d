#include "homeconf/miner.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "homeconf/entity.hpp"

namespace homeconf {

using nlohmann::json;

Threshold::Threshold(double th) : theta(th) {
    if (!(th > 0.0 && th < 1.0))
        throw std::invalid_argument("theta must lie in (0,1)");
}

std::vector<std::string> preprocess(std::string_view text, const Stopwords& stopwords,
                                    const LemmaMap& lemmas) {
    std::vector<std::string> out;
    std::string tok;
    auto flush = [&] {
        if (tok.empty()) return;
        if (!stopwords.count(tok)) {
            auto it = lemmas.find(tok);
            out.push_back(it != lemmas.end() ? it->second : tok);
        }
        tok.clear();
    };
    for (char c : text) {
        unsigned char u = static_cast<unsigned char>(c);
        if (std::isalnum(u))
            tok.push_back(static_cast<char>(std::tolower(u)));
        else
            flush();
    }
    flush();
    return out;
}

std::vector<double> embed_phrase(const std::vector<std::string>& tokens,
                                 const EmbeddingTable& table) {
    std::vector<double> sum(table.dim, 0.0);
    std::size_t hits = 0;
    for (const auto& tok : tokens) {
        auto it = table.vectors.find(tok);
        if (it == table.vectors.end()) continue;
        for (std::size_t i = 0; i < table.dim; ++i) sum[i] += it->second[i];
        ++hits;
    }
    if (hits == 0) return sum;  // zero vector fallback
    for (double& x : sum) x /= static_cast<double>(hits);
    return sum;
}

double cosine(const std::vector<double>& v, const std::vector<double>& w) {
    if (v.size() != w.size())
        throw std::invalid_argument("cosine: dimension mismatch");
    double dot = 0.0, nv = 0.0, nw = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        dot += v[i] * w[i];
        nv += v[i] * v[i];
        nw += w[i] * w[i];
    }
    if (nv == 0.0 || nw == 0.0) return 0.0;
    return dot / (std::sqrt(nv) * std::sqrt(nw));
}

std::vector<MinedRelation> mine_relations(const std::vector<ServiceDescription>& descs,
                                          const std::vector<PropertyCorpus>& corpora,
                                          const EmbeddingTable& table, Threshold theta,
                                          const Stopwords& stopwords, const LemmaMap& lemmas) {
    auto embed = [&](const std::string& phrase) {
        return embed_phrase(preprocess(phrase, stopwords, lemmas), table);
    };

    std::map<std::pair<std::string, Relation>, std::map<std::string, std::vector<Witness>>> hits;
    // key: (env, relation) -> service -> witnesses

    for (const auto& desc : descs) {
        const std::string service = normalize_entity(desc.service);
        for (const auto& phrase : desc.phrases) {
            auto pv = embed(phrase);
            for (const auto& corpus : corpora) {
                auto scan = [&](const std::vector<std::string>& side, Relation rel) {
                    for (const auto& cp : side) {
                        double score = cosine(pv, embed(cp));
                        if (score > theta.theta)  // strict gate
                            hits[{normalize_entity(corpus.env), rel}][service].push_back(
                                Witness{phrase, cp, score});
                    }
                };
                scan(corpus.inset, Relation::Increase);
                scan(corpus.deset, Relation::Decrease);
            }
        }
    }

    std::vector<MinedRelation> out;
    for (auto& [key, per_service] : hits)
        for (auto& [service, witnesses] : per_service) {
            MinedRelation mr;
            mr.triple = Triple{service, key.second, key.first,
                               static_cast<int>(witnesses.size())};
            mr.witnesses = std::move(witnesses);
            out.push_back(std::move(mr));
        }
    std::sort(out.begin(), out.end(),
              [](const MinedRelation& a, const MinedRelation& b) { return a.triple < b.triple; });
    return out;
}

KnowledgeGraph seed_graph(const std::vector<MinedRelation>& mined,
                          std::set<std::string> env_vocab) {
    std::vector<Triple> triples;
    triples.reserve(mined.size());
    for (const auto& mr : mined) triples.push_back(mr.triple);
    return KnowledgeGraph(std::move(triples), KgStage::Seed, std::move(env_vocab));
}

EmbeddingTable load_embeddings(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    EmbeddingTable table;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        auto tab = line.find('\t');
        if (tab == std::string::npos)
            throw std::runtime_error(path + ":" + std::to_string(lineno) + ": expected TAB");
        std::string token = line.substr(0, tab);
        std::istringstream rest(line.substr(tab + 1));
        std::vector<double> vec;
        double x;
        while (rest >> x) vec.push_back(x);
        if (vec.empty())
            throw std::runtime_error(path + ":" + std::to_string(lineno) + ": empty vector");
        if (table.dim == 0) table.dim = vec.size();
        if (vec.size() != table.dim)
            throw std::runtime_error(path + ":" + std::to_string(lineno) +
                                     ": inconsistent dimension");
        table.vectors.emplace(std::move(token), std::move(vec));
    }
    return table;
}

std::vector<PropertyCorpus> load_corpora(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::vector<PropertyCorpus> out;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        json j = json::parse(line);
        PropertyCorpus pc;
        pc.env = normalize_entity(j.at("env").get<std::string>());
        for (const auto& s : j.at("inset")) pc.inset.push_back(s.get<std::string>());
        for (const auto& s : j.at("deset")) pc.deset.push_back(s.get<std::string>());
        if (pc.inset.empty() || pc.deset.empty())
            throw std::runtime_error(path + ":" + std::to_string(lineno) +
                                     ": inset and deset must be non-empty");
        for (const auto& s : pc.inset)
            if (std::find(pc.deset.begin(), pc.deset.end(), s) != pc.deset.end())
                throw std::runtime_error(path + ":" + std::to_string(lineno) +
                                         ": phrase '" + s + "' in both inset and deset");
        out.push_back(std::move(pc));
    }
    return out;
}

std::vector<ServiceDescription> load_descriptions(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::vector<ServiceDescription> out;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        json j = json::parse(line);
        ServiceDescription d;
        d.service = normalize_entity(j.at("service").get<std::string>());
        for (const auto& s : j.at("phrases")) {
            std::string p = s.get<std::string>();
            if (!p.empty()) d.phrases.push_back(std::move(p));
        }
        if (d.phrases.empty())
            throw std::runtime_error(path + ":" + std::to_string(lineno) +
                                     ": description needs at least one phrase");
        out.push_back(std::move(d));
    }
    return out;
}

Stopwords load_stopwords(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    Stopwords out;
    std::string line;
    while (std::getline(in, line)) {
        while (!line.empty() && std::isspace(static_cast<unsigned char>(line.back())))
            line.pop_back();
        if (!line.empty()) out.insert(line);
    }
    return out;
}

LemmaMap load_lemmas(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    LemmaMap out;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        auto tab = line.find('\t');
        if (tab == std::string::npos)
            throw std::runtime_error(path + ":" + std::to_string(lineno) + ": expected TAB");
        out[line.substr(0, tab)] = line.substr(tab + 1);
    }
    return out;
}

}  // namespace homeconf
