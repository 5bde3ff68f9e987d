// Command-line front end wiring the pipeline: mine -> profile -> detect,
// plus synthetic data generation, scoring, and benchmarking.

#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "homeconf/detector.hpp"
#include "homeconf/eval.hpp"
#include "homeconf/filters.hpp"
#include "homeconf/knowledge_graph.hpp"
#include "homeconf/miner.hpp"
#include "homeconf/profiler.hpp"
#include "homeconf/synth.hpp"

namespace fs = std::filesystem;
using namespace homeconf;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInput = 2;
constexpr int kExitMissingContext = 3;

struct MineArgs {
    std::string descriptions, corpora, embeddings, stopwords, lemmas, out;
    double theta = 0.6;
};

int run_mine(const MineArgs& a) {
    auto descs = load_descriptions(a.descriptions);
    auto corpora = load_corpora(a.corpora);
    auto table = load_embeddings(a.embeddings);
    Stopwords stop = a.stopwords.empty() ? Stopwords{} : load_stopwords(a.stopwords);
    LemmaMap lemmas = a.lemmas.empty() ? LemmaMap{} : load_lemmas(a.lemmas);
    auto mined = mine_relations(descs, corpora, table, Threshold(a.theta), stop, lemmas);
    save_triples(seed_graph(mined, default_env_vocab()), a.out);
    std::cerr << "mined " << mined.size() << " relation(s) at theta=" << a.theta << "\n";
    return kExitOk;
}

struct ProfileArgs {
    std::string seed, rules, context, firings, env_vocab, out;
};

int run_profile(const ProfileArgs& a) {
    auto vocab = a.env_vocab.empty() ? default_env_vocab() : load_env_vocab(a.env_vocab);
    auto seed = load_triples(a.seed, vocab);
    auto rules = load_rules(a.rules);
    auto ctx = load_context(a.context);
    std::vector<RuleFiring> firings;
    if (!a.firings.empty()) firings = load_firings(a.firings);
    auto result = profile(seed, rules, ctx, firings);
    const fs::path meta = fs::path(a.out).parent_path() / "profile_meta.json";
    save_profile(result, a.out, meta.string());
    for (const auto& w : result.warnings) std::cerr << "warning: " << w << "\n";
    return kExitOk;
}

struct DetectArgs {
    std::string kg3, events, rules, firings, context, readings, out, method = "M1";
    int zeta = 5;
    bool strict = false;
};

int run_detect(const DetectArgs& a) {
    auto kg3 = load_triples(a.kg3, default_env_vocab());
    if (kg3.stage() != KgStage::KG3) kg3 = kg3.with_stage(KgStage::KG3);
    auto events = load_events(a.events);
    std::vector<EcaRule> rules;
    std::vector<RuleFiring> firings;
    HomeContext ctx;
    Readings readings;
    if (!a.rules.empty()) rules = load_rules(a.rules);
    if (!a.firings.empty()) firings = load_firings(a.firings);
    if (!a.context.empty()) ctx = load_context(a.context);
    Method method = method_from_string(a.method);
    const bool needs_readings = method == Method::M3 || method == Method::M4;
    if (!a.readings.empty())
        readings = load_readings(a.readings);
    else if (needs_readings) {
        std::cerr << "error: --readings is required for method " << a.method << "\n";
        return kExitMissingContext;
    }
    try {
        std::vector<Conflict> conflicts;
        if (a.strict) {
            auto input = (method == Method::M2 || method == Method::M4)
                             ? filter_inert_events(events, kg3)
                             : events;
            conflicts = detect_all(input, firings, rules, kg3, TimeConstraint(a.zeta),
                                   &readings);
            if (needs_readings) conflicts = filter_contextual(conflicts, ctx, readings);
        } else {
            conflicts = run_method(method, events, firings, rules, kg3,
                                   TimeConstraint(a.zeta), ctx, readings);
        }
        save_conflicts(conflicts, a.out);
        std::cerr << conflicts.size() << " conflict(s) detected (" << a.method << ")\n";
    } catch (const MissingReading& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitMissingContext;
    }
    return kExitOk;
}

int run_synth(const std::string& config, const std::string& out_dir, int jobs) {
    SynthConfig cfg;
    if (!config.empty()) cfg = load_synth_config(config);
    auto ds = generate(cfg, jobs);
    write_dataset(ds, cfg, out_dir);
    std::cerr << "wrote " << ds.homes.size() << " home(s), " << ds.truth.size()
              << " ground-truth conflict(s) to " << out_dir << "\n";
    return kExitOk;
}

int run_eval(const std::string& detected, const std::string& truth, const std::string& out,
             const std::string& method) {
    auto det = load_conflicts(detected);
    auto tru = load_conflicts(truth);
    auto c = confusion(det, tru);
    auto p = prf(c.tp, c.fp, c.fn);
    if (!out.empty()) save_eval_report(c, p, method, out);
    std::cout << "tp=" << c.tp << " fp=" << c.fp << " fn=" << c.fn
              << " precision=" << p.precision << " recall=" << p.recall << " f1=" << p.f1
              << "\n";
    return kExitOk;
}

int run_bench(const std::vector<int>& sizes, int runs, const std::string& out,
              std::uint64_t seed) {
    // One synthetic home per size; only detection is timed.
    std::map<int, std::pair<std::vector<IntervalEvent>, KnowledgeGraph>> inputs;
    for (int n : sizes) {
        SynthConfig cfg;
        cfg.n_homes = 1;
        cfg.n_events = n;
        cfg.n_injected_conflicts = std::min(8, n / 4);
        cfg.rng_seed = seed;
        auto ds = generate(cfg);
        inputs.emplace(n, std::make_pair(ds.homes[0].events, ds.homes[0].kg3));
    }
    auto rows = bench(
        [&](int n) {
            const auto& [events, kg3] = inputs.at(n);
            detect_all(events, {}, {}, kg3, TimeConstraint(5));
        },
        sizes, runs);
    for (const auto& row : rows)
        std::cout << row.n_events << " events: " << row.mean_ms << " ms\n";
    if (!out.empty()) save_bench_report(rows, out);
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Smart-home automation conflict detection pipeline"};
    app.require_subcommand(1);

    MineArgs mine_args;
    auto* mine = app.add_subcommand("mine", "Mine a seed knowledge graph from descriptions");
    mine->add_option("--descriptions", mine_args.descriptions)->required();
    mine->add_option("--corpora", mine_args.corpora)->required();
    mine->add_option("--embeddings", mine_args.embeddings)->required();
    mine->add_option("--stopwords", mine_args.stopwords);
    mine->add_option("--lemmas", mine_args.lemmas);
    mine->add_option("--theta", mine_args.theta, "Similarity gate (0,1)")->capture_default_str();
    mine->add_option("--out", mine_args.out)->required();

    ProfileArgs profile_args;
    auto* prof = app.add_subcommand("profile", "Profile a seed graph to a home (KG3)");
    prof->add_option("--seed", profile_args.seed)->required();
    prof->add_option("--rules", profile_args.rules)->required();
    prof->add_option("--context", profile_args.context)->required();
    prof->add_option("--firings", profile_args.firings);
    prof->add_option("--env-vocab", profile_args.env_vocab);
    prof->add_option("--out", profile_args.out)->required();

    DetectArgs detect_args;
    auto* det = app.add_subcommand("detect", "Detect conflicts over interval events");
    det->add_option("--kg3", detect_args.kg3)->required();
    det->add_option("--events", detect_args.events)->required();
    det->add_option("--rules", detect_args.rules);
    det->add_option("--firings", detect_args.firings);
    det->add_option("--context", detect_args.context);
    det->add_option("--readings", detect_args.readings);
    det->add_option("--zeta", detect_args.zeta, "FFConf window, minutes")->capture_default_str();
    det->add_option("--method", detect_args.method, "M1|M2|M3|M4")->capture_default_str();
    det->add_flag("--strict", detect_args.strict, "Verify TraConf triggers against readings");
    det->add_option("--out", detect_args.out)->required();

    std::string synth_config, synth_out;
    int jobs = 1;
    auto* synth = app.add_subcommand("synth", "Generate a synthetic dataset");
    synth->add_option("--config", synth_config);
    synth->add_option("--out-dir", synth_out)->required();
    synth->add_option("--jobs", jobs)->capture_default_str();

    std::string eval_detected, eval_truth, eval_out, eval_method = "M1";
    auto* ev = app.add_subcommand("eval", "Score detections against ground truth");
    ev->add_option("--detected", eval_detected)->required();
    ev->add_option("--truth", eval_truth)->required();
    ev->add_option("--out", eval_out);
    ev->add_option("--method", eval_method);

    std::vector<int> sizes = {100, 200, 300};
    int runs = 10;
    std::string bench_out;
    std::uint64_t bench_seed = 1;
    auto* be = app.add_subcommand("bench", "Time detection over event-set sizes");
    be->add_option("--sizes", sizes)->delimiter(',')->capture_default_str();
    be->add_option("--runs", runs)->capture_default_str();
    be->add_option("--out", bench_out);
    be->add_option("--seed", bench_seed);

    CLI11_PARSE(app, argc, argv);

    try {
        if (*mine) return run_mine(mine_args);
        if (*prof) return run_profile(profile_args);
        if (*det) return run_detect(detect_args);
        if (*synth) return run_synth(synth_config, synth_out, jobs);
        if (*ev) return run_eval(eval_detected, eval_truth, eval_out, eval_method);
        if (*be) return run_bench(sizes, runs, bench_out, bench_seed);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    }
    return kExitOk;
}
