#include "homeconf/knowledge_graph.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "homeconf/entity.hpp"

namespace homeconf {

using nlohmann::json;

std::string to_string(Relation r) {
    switch (r) {
        case Relation::Increase: return "+";
        case Relation::Decrease: return "-";
        case Relation::Trigger: return "T";
    }
    throw std::logic_error("bad Relation");
}

Relation relation_from_string(std::string_view s) {
    if (s == "+") return Relation::Increase;
    if (s == "-") return Relation::Decrease;
    if (s == "T") return Relation::Trigger;
    throw TripleParseError("unknown relation '" + std::string(s) + "'");
}

std::string to_string(KgStage s) {
    switch (s) {
        case KgStage::Seed: return "Seed";
        case KgStage::KG1: return "KG1";
        case KgStage::KG2: return "KG2";
        case KgStage::KG3: return "KG3";
    }
    throw std::logic_error("bad KgStage");
}

KgStage stage_from_string(std::string_view s) {
    if (s == "Seed") return KgStage::Seed;
    if (s == "KG1") return KgStage::KG1;
    if (s == "KG2") return KgStage::KG2;
    if (s == "KG3") return KgStage::KG3;
    throw TripleParseError("unknown stage '" + std::string(s) + "'");
}

KnowledgeGraph::KnowledgeGraph(KgStage stage, std::set<std::string> env_vocab)
    : stage_(stage), env_vocab_(std::move(env_vocab)) {}

KnowledgeGraph::KnowledgeGraph(std::vector<Triple> triples, KgStage stage,
                               std::set<std::string> env_vocab,
                               std::map<std::string, std::set<std::string>> partition)
    : triples_(std::move(triples)),
      stage_(stage),
      env_vocab_(std::move(env_vocab)),
      partition_(std::move(partition)) {
    std::sort(triples_.begin(), triples_.end());
    triples_.erase(std::unique(triples_.begin(), triples_.end()), triples_.end());
    for (const auto& tr : triples_) check_triple(tr);
    rebuild_index();
}

void KnowledgeGraph::check_triple(const Triple& tr) const {
    if (tr.h.empty() || tr.t.empty()) throw MalformedTriple("empty entity in triple");
    if (tr.h == tr.t)
        throw MalformedTriple("self-loop triple on '" + tr.h + "'");
    if (env_vocab_.empty()) return;
    const bool h_env = is_env(tr.h);
    const bool t_env = is_env(tr.t);
    if (tr.r == Relation::Trigger) {
        if (!h_env || t_env)
            throw MalformedTriple("trigger triple (" + tr.h + ",T," + tr.t +
                                  ") must run environment -> service");
    } else {
        if (h_env || !t_env)
            throw MalformedTriple("impact triple (" + tr.h + "," + to_string(tr.r) + "," +
                                  tr.t + ") must run service -> environment");
    }
}

void KnowledgeGraph::rebuild_index() {
    by_entity_.clear();
    for (std::size_t i = 0; i < triples_.size(); ++i) {
        by_entity_[triples_[i].h].push_back(i);
        by_entity_[triples_[i].t].push_back(i);
    }
}

KnowledgeGraph KnowledgeGraph::insert(const Triple& tr) const {
    check_triple(tr);
    if (contains(tr)) return *this;
    auto triples = triples_;
    triples.insert(std::upper_bound(triples.begin(), triples.end(), tr), tr);
    KnowledgeGraph out;
    out.triples_ = std::move(triples);
    out.stage_ = stage_;
    out.env_vocab_ = env_vocab_;
    out.partition_ = partition_;
    out.rebuild_index();
    return out;
}

bool KnowledgeGraph::contains(const Triple& tr) const {
    return std::binary_search(triples_.begin(), triples_.end(), tr);
}

std::vector<Triple> KnowledgeGraph::triples_touching(const std::string& entity) const {
    std::vector<Triple> out;
    auto it = by_entity_.find(entity);
    if (it == by_entity_.end()) return out;
    out.reserve(it->second.size());
    for (std::size_t i : it->second) out.push_back(triples_[i]);
    return out;
}

KnowledgeGraph KnowledgeGraph::with_stage(KgStage s) const {
    KnowledgeGraph out = *this;
    out.stage_ = s;
    return out;
}

KnowledgeGraph KnowledgeGraph::with_partition(std::map<std::string, std::set<std::string>> p) const {
    KnowledgeGraph out = *this;
    out.partition_ = std::move(p);
    return out;
}

KnowledgeGraph KnowledgeGraph::with_triples(std::vector<Triple> triples) const {
    return KnowledgeGraph(std::move(triples), stage_, env_vocab_, partition_);
}

namespace {

std::string meta_path_for(const std::string& path) { return path + ".meta.json"; }

}  // namespace

KnowledgeGraph load_triples(const std::string& path, std::set<std::string> env_vocab) {
    std::ifstream in(path);
    if (!in) throw TripleParseError("cannot open " + path);
    std::vector<Triple> triples;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        json j;
        try {
            j = json::parse(line);
        } catch (const json::exception& e) {
            throw TripleParseError(path + ":" + std::to_string(lineno) + ": " + e.what());
        }
        if (!j.contains("h") || !j.contains("r") || !j.contains("t"))
            throw TripleParseError(path + ":" + std::to_string(lineno) +
                                   ": record needs keys h, r, t");
        Triple tr;
        try {
            tr.h = normalize_entity(j.at("h").get<std::string>());
            tr.t = normalize_entity(j.at("t").get<std::string>());
            tr.r = relation_from_string(j.at("r").get<std::string>());
        } catch (const std::exception& e) {
            throw TripleParseError(path + ":" + std::to_string(lineno) + ": " + e.what());
        }
        if (j.contains("support")) tr.support = j.at("support").get<int>();
        triples.push_back(std::move(tr));
    }

    KgStage stage = KgStage::Seed;
    std::map<std::string, std::set<std::string>> partition;
    const std::string meta = meta_path_for(path);
    if (std::filesystem::exists(meta)) {
        std::ifstream min(meta);
        json j = json::parse(min);
        stage = stage_from_string(j.at("stage").get<std::string>());
        if (j.contains("partition"))
            for (auto& [loc, svcs] : j.at("partition").items())
                for (const auto& s : svcs) partition[loc].insert(s.get<std::string>());
    }
    return KnowledgeGraph(std::move(triples), stage, std::move(env_vocab), std::move(partition));
}

void save_triples(const KnowledgeGraph& kg, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    for (const auto& tr : kg.triples()) {
        json j{{"h", tr.h}, {"r", to_string(tr.r)}, {"t", tr.t}};
        if (tr.support != 1) j["support"] = tr.support;
        out << j.dump() << '\n';
    }
    const std::string meta = meta_path_for(path);
    if (kg.stage() != KgStage::Seed || !kg.partition().empty()) {
        json j{{"stage", to_string(kg.stage())}};
        if (!kg.partition().empty()) {
            json p = json::object();
            for (const auto& [loc, svcs] : kg.partition()) p[loc] = svcs;
            j["partition"] = p;
        }
        std::ofstream mout(meta);
        mout << j.dump(2) << '\n';
    } else {
        std::error_code ec;
        std::filesystem::remove(meta, ec);
    }
}

std::set<std::string> load_env_vocab(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::set<std::string> vocab;
    std::string line;
    while (std::getline(in, line)) {
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        while (!line.empty() && std::isspace(static_cast<unsigned char>(line.back())))
            line.pop_back();
        if (line.empty()) continue;
        vocab.insert(normalize_entity(line));
    }
    return vocab;
}

std::set<std::string> default_env_vocab() {
    return {"temperature", "weather", "brightness", "humidity",
            "smoke", "sound", "ventilation", "co2"};
}

}  // namespace homeconf
