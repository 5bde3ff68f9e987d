#ifndef HOMECONF_SYNTH_HPP
#define HOMECONF_SYNTH_HPP

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "homeconf/context.hpp"
#include "homeconf/detector.hpp"
#include "homeconf/events.hpp"
#include "homeconf/knowledge_graph.hpp"
#include "homeconf/rules.hpp"

namespace homeconf {

struct SynthError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SynthConfig {
    int n_homes = 10;
    int n_things = 130;
    int n_events = 300;
    int duration_min = 60;   // minutes
    int duration_max = 120;
    std::vector<std::string> rooms = {"kitchen", "living_room", "bathroom", "bedroom",
                                      "study_room"};
    std::map<std::string, std::pair<int, int>> env_ranges = {
        {"temperature", {22, 28}}, {"humidity", {45, 55}}, {"co2", {350, 450}},
        {"brightness", {60, 70}},  {"sound", {10, 70}},    {"smoke", {0, 100}},
        {"ventilation", {0, 3}},
    };
    // Total across all homes, split round-robin.
    int n_injected_conflicts = 277;
    std::uint64_t rng_seed = 1;
};

SynthConfig load_synth_config(const std::string& path);
void save_synth_config(const SynthConfig& cfg, const std::string& path);

struct SynthHome {
    std::vector<IntervalEvent> events;
    HomeContext ctx;
    Readings readings;
    KnowledgeGraph kg3;
    std::vector<EcaRule> rules;
    std::vector<RuleFiring> firings;
    std::vector<Conflict> truth;
};

struct SynthDataset {
    std::vector<SynthHome> homes;
    std::vector<Conflict> truth;  // union over homes, loc includes home tag
};

/// Builds `n_homes` independent homes, each seeded as rng_seed + home index.
/// Ground-truth conflicts are planted constructively: every planted instance
/// is found by the plain detector on the generated data. Throws SynthError
/// when injection is infeasible.
SynthDataset generate(const SynthConfig& cfg, int jobs = 1);

/// home_<k>/{events.csv,context.json,readings.json,kg3.jsonl,rules.txt,
/// firings.csv} plus ground_truth.jsonl and synth_config.json.
void write_dataset(const SynthDataset& ds, const SynthConfig& cfg, const std::string& dir);

/// The built-in seed graph and rule set the generator profiles per home.
KnowledgeGraph builtin_seed_graph();
std::vector<EcaRule> builtin_rules();

}  // namespace homeconf

#endif
