#include "homeconf/synth.hpp"

#include <algorithm>
#include <atomic>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <random>
#include <set>
#include <thread>

#include <json.hpp>

#include "homeconf/profiler.hpp"

namespace homeconf {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

// mt19937_64 output is pinned by the standard; distributions are not, so all
// draws go through this helper.
int uniform_int(std::mt19937_64& rng, int lo, int hi) {
    return lo + static_cast<int>(rng() % static_cast<std::uint64_t>(hi - lo + 1));
}

constexpr int kLastMinute = 23 * 60 + 59;

const std::vector<std::string>& inert_things() {
    static const std::vector<std::string> things = {
        "cabinet", "drawer", "chair",    "table", "door",  "mirror", "shelf", "sofa",
        "bed",     "desk",   "sink",     "toilet", "wardrobe", "rug", "clock", "vase",
    };
    return things;
}

}  // namespace

KnowledgeGraph builtin_seed_graph() {
    auto env = default_env_vocab();
    std::vector<Triple> triples = {
        {"ac", Relation::Decrease, "temperature"},
        {"heater", Relation::Increase, "temperature"},
        {"stove", Relation::Increase, "temperature"},
        {"stove", Relation::Increase, "smoke"},
        {"kettle", Relation::Increase, "temperature"},
        {"window", Relation::Increase, "temperature"},
        {"window", Relation::Decrease, "temperature"},
        {"window", Relation::Decrease, "co2"},
        {"window", Relation::Increase, "ventilation"},
        {"blind", Relation::Increase, "brightness"},
        {"tv", Relation::Increase, "brightness"},
        {"tv", Relation::Increase, "sound"},
        {"lamp", Relation::Increase, "brightness"},
        {"speaker", Relation::Increase, "sound"},
        {"kitchen_hood", Relation::Decrease, "smoke"},
        {"humidifier", Relation::Increase, "humidity"},
        {"dehumidifier", Relation::Decrease, "humidity"},
        {"shower", Relation::Increase, "humidity"},
        {"fan", Relation::Increase, "ventilation"},
        {"air_purifier", Relation::Decrease, "co2"},
        {"dryer", Relation::Increase, "temperature"},
    };
    return KnowledgeGraph(std::move(triples), KgStage::Seed, std::move(env));
}

std::vector<EcaRule> builtin_rules() {
    const std::vector<std::string> texts = {
        "R1: temperature > 25C -> close window",
        "R2: co2 > 440 -> open window",
        "R3: humidity > 52% -> open window",
        "R4: temperature < 23C -> turn on heater AND temperature = 26C",
        "R5: temperature > 25C -> turn on ac AND temperature = 24C",
        "R6: smoke > 80 -> turn on kitchen_hood",
        "R7: brightness < 62 -> turn on lamp",
    };
    std::vector<EcaRule> rules;
    for (const auto& line : texts) {
        auto colon = line.find(':');
        rules.push_back(parse_rule(line.substr(colon + 1), line.substr(0, colon)));
    }
    return rules;
}

SynthConfig load_synth_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw SynthError("cannot open " + path);
    json j;
    try {
        j = json::parse(in);
    } catch (const json::exception& e) {
        throw SynthError(path + ": " + e.what());
    }
    SynthConfig cfg;
    cfg.n_homes = j.value("n_homes", cfg.n_homes);
    cfg.n_things = j.value("n_things", cfg.n_things);
    cfg.n_events = j.value("n_events", cfg.n_events);
    cfg.duration_min = j.value("duration_min", cfg.duration_min);
    cfg.duration_max = j.value("duration_max", cfg.duration_max);
    if (j.contains("rooms")) cfg.rooms = j.at("rooms").get<std::vector<std::string>>();
    if (j.contains("env_ranges")) {
        cfg.env_ranges.clear();
        for (const auto& [env, range] : j.at("env_ranges").items())
            cfg.env_ranges[env] = {range.at(0).get<int>(), range.at(1).get<int>()};
    }
    cfg.n_injected_conflicts = j.value("n_injected_conflicts", cfg.n_injected_conflicts);
    cfg.rng_seed = j.value("rng_seed", cfg.rng_seed);
    if (cfg.n_homes <= 0 || cfg.n_things <= 0 || cfg.duration_min <= 0 ||
        cfg.duration_max < cfg.duration_min || cfg.n_events < 0 ||
        cfg.n_injected_conflicts < 0 || cfg.rooms.empty())
        throw SynthError(path + ": invalid configuration values");
    for (const auto& [env, range] : cfg.env_ranges)
        if (range.first > range.second) throw SynthError(path + ": bad range for " + env);
    return cfg;
}

void save_synth_config(const SynthConfig& cfg, const std::string& path) {
    json ranges = json::object();
    for (const auto& [env, range] : cfg.env_ranges) ranges[env] = {range.first, range.second};
    json j{{"n_homes", cfg.n_homes},
           {"n_things", cfg.n_things},
           {"n_events", cfg.n_events},
           {"duration_min", cfg.duration_min},
           {"duration_max", cfg.duration_max},
           {"rooms", cfg.rooms},
           {"env_ranges", ranges},
           {"n_injected_conflicts", cfg.n_injected_conflicts},
           {"rng_seed", cfg.rng_seed}};
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << j.dump(2) << '\n';
}

namespace {

// Candidate pairs are stored in event order: the first triple's service runs
// first. For Opp/Cum the orientation is chosen so no trigger edge leads into
// the later service over the shared property, which would make the detector
// classify the pair as transitive instead.
struct Candidates {
    std::vector<std::pair<Triple, Triple>> opp;
    std::vector<std::pair<Triple, Triple>> cum;
    std::vector<std::pair<Triple, Triple>> tra;  // (impact, trigger)
    std::vector<std::pair<std::string, std::string>> ff;  // rule id pair
};

Candidates find_candidates(const KnowledgeGraph& kg3, const std::vector<EcaRule>& rules,
                           const std::map<std::string, std::string>& loc_of) {
    Candidates cand;
    const auto& triples = kg3.triples();
    auto orient = [&](const Triple& a, const Triple& b,
                      std::vector<std::pair<Triple, Triple>>& pool) {
        if (!kg3.contains({a.t, Relation::Trigger, b.h}))
            pool.emplace_back(a, b);
        else if (!kg3.contains({a.t, Relation::Trigger, a.h}))
            pool.emplace_back(b, a);
    };
    for (const auto& a : triples) {
        if (a.r == Relation::Trigger) continue;
        for (const auto& b : triples) {
            if (b.r == Relation::Trigger) {
                if (a.t == b.h && a.h != b.t && loc_of.at(a.h) == loc_of.at(b.t))
                    cand.tra.emplace_back(a, b);
                continue;
            }
            if (a.h == b.h || a.t != b.t) continue;
            if (loc_of.at(a.h) != loc_of.at(b.h)) continue;
            if (a.r == b.r) {
                if (a.h < b.h) orient(a, b, cand.cum);
            } else if (a.r == Relation::Increase) {
                orient(a, b, cand.opp);
            }
        }
    }
    for (std::size_t i = 0; i < rules.size(); ++i)
        for (std::size_t j = i + 1; j < rules.size(); ++j) {
            auto ai = rule_invokes(rules[i]);
            auto aj = rule_invokes(rules[j]);
            if (!ai || !aj || ai->service != aj->service) continue;
            if (ai->functionality == aj->functionality) continue;
            if (!loc_of.count(ai->service)) continue;
            cand.ff.emplace_back(rules[i].id, rules[j].id);
        }
    return cand;
}

SynthHome generate_home(const SynthConfig& cfg, const KnowledgeGraph& seed,
                        const std::vector<EcaRule>& rules, int quota, int home_index) {
    std::mt19937_64 rng(cfg.rng_seed + static_cast<std::uint64_t>(home_index));
    SynthHome home;
    home.rules = rules;

    // Thing pool: impactful services from the seed graph plus inert fillers.
    std::set<std::string> svc_set;
    for (const auto& tr : seed.triples()) svc_set.insert(tr.h);
    std::vector<std::string> services(svc_set.begin(), svc_set.end());
    std::vector<std::string> things = services;
    for (std::size_t i = 0; static_cast<int>(things.size()) < cfg.n_things; ++i) {
        if (i < inert_things().size())
            things.push_back(inert_things()[i]);
        else
            things.push_back("thing_" + std::to_string(i - inert_things().size()));
    }
    if (static_cast<int>(things.size()) > cfg.n_things) things.resize(cfg.n_things);

    // Placements. Two clusters are co-located so every conflict type has
    // candidate material; everything else lands in a random room.
    auto room = [&] { return cfg.rooms[rng() % cfg.rooms.size()]; };
    const std::string r0 = room();
    const std::string r1 = room();
    const std::set<std::string> cluster0 = {"heater", "ac", "stove", "window", "kettle",
                                            "kitchen_hood"};
    const std::set<std::string> cluster1 = {"blind", "tv", "lamp"};
    for (const auto& thing : things) {
        if (cluster0.count(thing))
            home.ctx.placements[thing] = r0;
        else if (cluster1.count(thing))
            home.ctx.placements[thing] = r1;
        else
            home.ctx.placements[thing] = room();
    }

    // Preferences and outdoor state: one random integer per (room, env) and
    // per env, spanning the whole day.
    for (const auto& loc : cfg.rooms)
        for (const auto& [env, range] : cfg.env_ranges)
            home.ctx.prefs.push_back(EnvPreference{
                env, static_cast<double>(uniform_int(rng, range.first, range.second)),
                TimeOfDay(0), TimeOfDay::end_of_day(), loc});
    for (const auto& [env, range] : cfg.env_ranges)
        home.ctx.outdoor.push_back(OutdoorState{
            env, static_cast<double>(uniform_int(rng, range.first, range.second)),
            TimeOfDay(0), TimeOfDay::end_of_day()});

    home.kg3 = profile(seed, rules, home.ctx).kg;

    std::map<std::string, std::string> loc_of;
    for (const auto& [loc, svcs] : home.kg3.partition())
        for (const auto& s : svcs) loc_of[s] = loc;

    // Plant the ground truth.
    auto cand = find_candidates(home.kg3, rules, loc_of);
    std::vector<ConflictKind> available;
    if (!cand.opp.empty()) available.push_back(ConflictKind::OppConf);
    if (!cand.cum.empty()) available.push_back(ConflictKind::CumConf);
    if (!cand.tra.empty()) available.push_back(ConflictKind::TraConf);
    if (!cand.ff.empty()) available.push_back(ConflictKind::FFConf);
    if (quota > 0 && available.empty())
        throw SynthError("injection infeasible: pool lacks services with required relations");

    auto random_span = [&](int min_start, int max_start) {
        int st = uniform_int(rng, min_start, max_start);
        int et = std::min(st + uniform_int(rng, cfg.duration_min, cfg.duration_max),
                          kLastMinute);
        return std::pair<int, int>{st, et};
    };

    int event_budget = cfg.n_events;
    for (int m = 0; m < quota; ++m) {
        ConflictKind kind = available[m % available.size()];
        if (kind != ConflictKind::FFConf && event_budget < 2) {
            // Not enough event slots left for an event-pair injection.
            auto it = std::find(available.begin(), available.end(), ConflictKind::FFConf);
            if (it == available.end())
                throw SynthError("injection infeasible: n_events too small for " +
                                 std::to_string(quota) + " injections");
            kind = ConflictKind::FFConf;
        }

        Conflict truth;
        truth.kind = kind;
        if (kind == ConflictKind::FFConf) {
            const auto& [ri, rj] = cand.ff[rng() % cand.ff.size()];
            const auto rule_i = std::find_if(rules.begin(), rules.end(),
                                             [&](const EcaRule& r) { return r.id == ri; });
            const std::string loc = loc_of.at(rule_invokes(*rule_i)->service);
            int t = uniform_int(rng, 0, kLastMinute - 2);
            home.firings.push_back(RuleFiring{ri, TimeOfDay::from_minutes(t), loc});
            home.firings.push_back(RuleFiring{rj, TimeOfDay::from_minutes(t + 2), loc});
            truth.a = ri;
            truth.b = rj;
            truth.loc = loc;
        } else {
            const auto& pool = kind == ConflictKind::OppConf  ? cand.opp
                               : kind == ConflictKind::CumConf ? cand.cum
                                                               : cand.tra;
            const auto& [ta, tb] = pool[rng() % pool.size()];
            const std::string sa = ta.h;
            const std::string sb = tb.r == Relation::Trigger ? tb.t : tb.h;
            const std::string loc = loc_of.at(sa);
            auto [st1, et1] = random_span(0, kLastMinute - 1);
            int st2 = std::min(st1 + 1 + static_cast<int>(rng() % std::max(1, et1 - st1)),
                               et1);
            int et2 = std::min(st2 + uniform_int(rng, cfg.duration_min, cfg.duration_max),
                               kLastMinute);
            home.events.push_back(
                make_event(sa, TimeOfDay::from_minutes(st1), TimeOfDay::from_minutes(et1), loc));
            home.events.push_back(
                make_event(sb, TimeOfDay::from_minutes(st2), TimeOfDay::from_minutes(et2), loc));
            event_budget -= 2;
            truth.a = sa;
            truth.b = sb;
            truth.env = ta.t;
            truth.loc = loc;
            truth.triple_a = ta;
            truth.triple_b = tb;
        }
        home.truth.push_back(std::move(truth));
    }

    // Background noise events.
    while (event_budget > 0) {
        const std::string& thing = things[rng() % things.size()];
        auto [st, et] = random_span(0, kLastMinute);
        home.events.push_back(make_event(thing, TimeOfDay::from_minutes(st),
                                         TimeOfDay::from_minutes(et),
                                         home.ctx.placements.at(thing)));
        --event_budget;
    }

    // Readings: equal to the preference by default (lets the contextual filter
    // prune noise), pushed away from it wherever a planted Opp/Cum conflict
    // must survive filtering.
    for (const auto& p : home.ctx.prefs) home.readings[{p.env, p.loc}] = p.value;
    for (const auto& c : home.truth) {
        if (c.kind != ConflictKind::OppConf && c.kind != ConflictKind::CumConf) continue;
        auto range = cfg.env_ranges.count(c.env) ? cfg.env_ranges.at(c.env)
                                                 : std::pair<int, int>{0, 100};
        double pref = 0.0;
        for (const auto& p : home.ctx.prefs)
            if (p.env == c.env && p.loc == c.loc) pref = p.value;
        double v = pref + 2 <= range.second ? pref + 2 : pref - 2;
        home.readings[{c.env, c.loc}] = v;
    }
    return home;
}

}  // namespace

SynthDataset generate(const SynthConfig& cfg, int jobs) {
    SynthDataset ds;
    ds.homes.resize(cfg.n_homes);

    const auto seed = builtin_seed_graph();
    const auto rules = builtin_rules();

    // Round-robin split of the injected-conflict total.
    std::vector<int> quota(cfg.n_homes, cfg.n_injected_conflicts / cfg.n_homes);
    for (int k = 0; k < cfg.n_injected_conflicts % cfg.n_homes; ++k) ++quota[k];

    std::exception_ptr failure;
    std::mutex failure_mu;
    auto build_home = [&](int k) {
        try {
            ds.homes[k] = generate_home(cfg, seed, rules, quota[k], k);
        } catch (...) {
            std::lock_guard<std::mutex> lock(failure_mu);
            if (!failure) failure = std::current_exception();
        }
    };

    if (jobs <= 1) {
        for (int k = 0; k < cfg.n_homes; ++k) build_home(k);
    } else {
        std::vector<std::thread> pool;
        std::atomic<int> next{0};
        for (int t = 0; t < jobs; ++t)
            pool.emplace_back([&] {
                for (int k = next.fetch_add(1); k < cfg.n_homes; k = next.fetch_add(1))
                    build_home(k);
            });
        for (auto& t : pool) t.join();
    }
    if (failure) std::rethrow_exception(failure);

    for (int k = 0; k < cfg.n_homes; ++k)
        for (auto c : ds.homes[k].truth) {
            c.loc = "home_" + std::to_string(k) + "/" + c.loc;
            ds.truth.push_back(std::move(c));
        }
    return ds;
}

void write_dataset(const SynthDataset& ds, const SynthConfig& cfg, const std::string& dir) {
    fs::create_directories(dir);
    for (std::size_t k = 0; k < ds.homes.size(); ++k) {
        const auto& home = ds.homes[k];
        const fs::path hd = fs::path(dir) / ("home_" + std::to_string(k));
        fs::create_directories(hd);
        save_events(home.events, (hd / "events.csv").string());
        save_context(home.ctx, (hd / "context.json").string());
        save_readings(home.readings, (hd / "readings.json").string());
        save_triples(home.kg3, (hd / "kg3.jsonl").string());
        save_firings(home.firings, (hd / "firings.csv").string());
        std::ofstream rout(hd / "rules.txt");
        for (const auto& r : home.rules) rout << r.id << ": " << to_text(r) << '\n';
    }
    save_conflicts(ds.truth, (fs::path(dir) / "ground_truth.jsonl").string());
    save_synth_config(cfg, (fs::path(dir) / "synth_config.json").string());
}

}  // namespace homeconf
