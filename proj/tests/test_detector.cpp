#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <random>

#include "homeconf/detector.hpp"

using namespace homeconf;
namespace fs = std::filesystem;

namespace {

IntervalEvent ev(const std::string& svc, int st_min, int et_min,
                 const std::string& loc = "studio") {
    return make_event(svc, TimeOfDay::from_minutes(st_min), TimeOfDay::from_minutes(et_min),
                      loc);
}

KnowledgeGraph studio_kg3() {
    return KnowledgeGraph({{"ac", Relation::Decrease, "temperature"},
                           {"blind", Relation::Increase, "brightness"},
                           {"heater", Relation::Increase, "temperature"},
                           {"stove", Relation::Increase, "temperature"},
                           {"temperature", Relation::Trigger, "ac"},
                           {"tv", Relation::Increase, "brightness"},
                           {"window", Relation::Increase, "temperature"}},
                          KgStage::KG3, default_env_vocab());
}

// Quadratic reference for the overlap scan.
std::vector<std::pair<IntervalEvent, IntervalEvent>> brute_overlaps(
    std::vector<IntervalEvent> events) {
    std::vector<std::pair<IntervalEvent, IntervalEvent>> out;
    for (std::size_t i = 0; i < events.size(); ++i)
        for (std::size_t j = 0; j < events.size(); ++j) {
            if (i == j) continue;
            const auto& a = events[i];
            const auto& b = events[j];
            if (a.loc != b.loc) continue;
            if (!(a.st <= b.st && b.st <= a.et)) continue;
            if (a.st == b.st && j < i) continue;  // count ties once
            out.emplace_back(a, b);
        }
    return out;
}

std::multiset<std::string> pair_keys(
    const std::vector<std::pair<IntervalEvent, IntervalEvent>>& pairs) {
    std::multiset<std::string> keys;
    for (const auto& [a, b] : pairs) {
        std::string ka = a.service + "@" + a.st.str() + "-" + a.et.str();
        std::string kb = b.service + "@" + b.st.str() + "-" + b.et.str();
        if (kb < ka) std::swap(ka, kb);
        keys.insert(ka + "|" + kb + "|" + a.loc);
    }
    return keys;
}

std::vector<std::string> kinds_of(const std::vector<Conflict>& cs) {
    std::vector<std::string> out;
    for (const auto& c : cs) out.push_back(to_string(c.kind));
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace

TEST_CASE("conflict identity") {
    Conflict a{ConflictKind::OppConf, "ac", "window", "temperature", "studio"};
    Conflict b{ConflictKind::OppConf, "window", "ac", "temperature", "studio"};
    CHECK(a.key() == b.key());
    CHECK(a == b);

    Conflict t1{ConflictKind::TraConf, "heater", "ac", "temperature", "studio"};
    Conflict t2{ConflictKind::TraConf, "ac", "heater", "temperature", "studio"};
    CHECK(t1.key() != t2.key());

    Conflict c = a;
    c.events = {ev("ac", 840, 960), ev("window", 870, 930)};
    CHECK(c == a);  // evidence events do not change identity
}

TEST_CASE("find_overlaps") {
    SUBCASE("closed boundary counts") {
        auto pairs = find_overlaps({ev("a", 60, 120), ev("b", 120, 180)});
        REQUIRE(pairs.size() == 1);
        CHECK(pairs[0].first.service == "a");
        CHECK(pairs[0].second.service == "b");
    }
    SUBCASE("gap does not") {
        CHECK(find_overlaps({ev("a", 60, 120), ev("b", 121, 180)}).empty());
    }
    SUBCASE("different locations never pair") {
        CHECK(find_overlaps({ev("a", 60, 120, "kitchen"), ev("b", 90, 180, "bedroom")})
                  .empty());
    }
    SUBCASE("earlier event comes first") {
        auto pairs = find_overlaps({ev("late", 90, 200), ev("early", 60, 120)});
        REQUIRE(pairs.size() == 1);
        CHECK(pairs[0].first.service == "early");
    }
}

TEST_CASE("find_overlaps agrees with the quadratic scan on random instances") {
    std::mt19937_64 rng(13);
    const std::vector<std::string> rooms = {"kitchen", "bedroom", "bath"};
    for (int iter = 0; iter < 60; ++iter) {
        std::vector<IntervalEvent> events;
        int n = 1 + static_cast<int>(rng() % 40);
        for (int i = 0; i < n; ++i) {
            int st = static_cast<int>(rng() % 1300);
            int et = std::min(st + static_cast<int>(rng() % 120), 1439);
            events.push_back(ev("svc" + std::to_string(rng() % 12), st, et,
                                rooms[rng() % rooms.size()]));
        }
        CHECK(pair_keys(find_overlaps(events)) == pair_keys(brute_overlaps(events)));
    }
}

TEST_CASE("detect_ff") {
    auto rules = std::vector<EcaRule>{
        parse_rule("temperature > 25C -> close window", "R1"),
        parse_rule("co2 > 0.5% -> open window", "R2"),
        parse_rule("humidity > 50% -> open window", "R7"),
    };
    auto at = [](const std::string& id, const std::string& hhmm,
                 const std::string& loc = "studio") {
        return RuleFiring{id, TimeOfDay::parse(hhmm), loc};
    };

    SUBCASE("close vs open within zeta") {
        auto cs = detect_ff({at("R1", "14:31"), at("R2", "14:33")}, rules, TimeConstraint(5));
        REQUIRE(cs.size() == 1);
        CHECK(cs[0].kind == ConflictKind::FFConf);
        CHECK(cs[0].a == "R1");
        CHECK(cs[0].b == "R2");
        CHECK(cs[0].loc == "studio");
    }
    SUBCASE("exactly zeta apart is out of window") {
        CHECK(detect_ff({at("R1", "14:00"), at("R2", "14:05")}, rules, TimeConstraint(5))
                  .empty());
    }
    SUBCASE("different locations do not clash") {
        CHECK(detect_ff({at("R1", "14:00", "kitchen"), at("R2", "14:01", "bedroom")}, rules,
                        TimeConstraint(5))
                  .empty());
    }
    SUBCASE("same functionality is no conflict") {
        CHECK(detect_ff({at("R2", "14:00"), at("R7", "14:01")}, rules, TimeConstraint(5))
                  .empty());
    }
    SUBCASE("a rule does not conflict with itself") {
        CHECK(detect_ff({at("R1", "14:00"), at("R1", "14:01")}, rules, TimeConstraint(5))
                  .empty());
    }
    SUBCASE("unknown rule id") {
        CHECK_THROWS_AS(detect_ff({at("R9", "14:00")}, rules, TimeConstraint(5)),
                        std::invalid_argument);
    }
    SUBCASE("zeta must be positive") {
        CHECK_THROWS_AS(TimeConstraint(0), std::invalid_argument);
    }
}

TEST_CASE("trigger_true") {
    auto rule = parse_rule("temperature > 25C -> turn on ac", "R6");
    Readings readings = {{{"temperature", "studio"}, 26.0}};
    CHECK(trigger_true(rule.trig, readings, "studio"));
    readings[{"temperature", "studio"}] = 24.0;
    CHECK(!trigger_true(rule.trig, readings, "studio"));
    CHECK(!trigger_true(rule.trig, readings, "kitchen"));  // no reading there
    auto se = parse_rule("turn on tv -> brightness = 50", "R4");
    CHECK(!trigger_true(se.trig, readings, "studio"));
}

TEST_CASE("detect_pairwise requires KG3") {
    auto kg = studio_kg3().with_stage(KgStage::KG2);
    CHECK_THROWS_AS(detect_pairwise({{ev("ac", 840, 960), ev("window", 870, 930)}}, kg),
                    std::invalid_argument);
}

TEST_CASE("opposite and cumulative impacts") {
    auto kg3 = studio_kg3();

    SUBCASE("opposite signs over a shared property") {
        auto cs = detect_pairwise({{ev("ac", 840, 960), ev("window", 870, 930)}}, kg3);
        REQUIRE(cs.size() == 1);
        CHECK(cs[0].kind == ConflictKind::OppConf);
        CHECK(cs[0].env == "temperature");
        CHECK(cs[0].a == "ac");
        CHECK(cs[0].b == "window");
    }
    SUBCASE("same sign over a shared property") {
        auto cs = detect_pairwise({{ev("heater", 720, 850), ev("stove", 730, 780)}}, kg3);
        REQUIRE(cs.size() == 1);
        CHECK(cs[0].kind == ConflictKind::CumConf);
        CHECK(cs[0].env == "temperature");
    }
    SUBCASE("no shared property, no conflict") {
        CHECK(detect_pairwise({{ev("blind", 600, 660), ev("stove", 610, 650)}}, kg3).empty());
    }
    SUBCASE("self pairs are skipped") {
        CHECK(detect_pairwise({{ev("ac", 840, 960), ev("ac", 850, 900)}}, kg3).empty());
    }
    SUBCASE("swapping the pair's event order changes nothing") {
        auto fwd = detect_pairwise({{ev("ac", 840, 960), ev("window", 870, 930)}}, kg3);
        auto rev = detect_pairwise({{ev("window", 870, 930), ev("ac", 840, 960)}}, kg3);
        CHECK(fwd == rev);
    }
}

TEST_CASE("transitive impacts") {
    auto kg3 = studio_kg3();

    SUBCASE("earlier impact into a triggered service") {
        auto cs = detect_pairwise({{ev("heater", 720, 850), ev("ac", 840, 960)}}, kg3);
        REQUIRE(cs.size() == 1);
        CHECK(cs[0].kind == ConflictKind::TraConf);
        CHECK(cs[0].a == "heater");
        CHECK(cs[0].b == "ac");
        CHECK(cs[0].env == "temperature");
    }
    SUBCASE("the transitive reading beats the opposite one for the same pair") {
        auto cs = detect_pairwise({{ev("heater", 720, 850), ev("ac", 840, 960)}}, kg3);
        CHECK(kinds_of(cs) == std::vector<std::string>{"TraConf"});
    }
    SUBCASE("direction matters: triggered service running first is no TraConf") {
        auto cs = detect_pairwise({{ev("ac", 720, 850), ev("heater", 800, 900)}}, kg3);
        CHECK(kinds_of(cs) == std::vector<std::string>{"OppConf"});
    }
    SUBCASE("tied starts check both orientations") {
        auto cs = detect_pairwise({{ev("heater", 720, 850), ev("ac", 720, 960)}}, kg3);
        CHECK(kinds_of(cs) == std::vector<std::string>{"TraConf"});
        CHECK(cs[0].a == "heater");
    }
    SUBCASE("strict mode verifies the downstream trigger") {
        auto rules = std::vector<EcaRule>{
            parse_rule("temperature > 25C -> turn on ac", "R6")};
        Readings hot = {{{"temperature", "studio"}, 26.0}};
        Readings cold = {{{"temperature", "studio"}, 20.0}};
        auto pairs = std::vector<std::pair<IntervalEvent, IntervalEvent>>{
            {ev("heater", 720, 850), ev("ac", 840, 960)}};
        CHECK(kinds_of(detect_pairwise(pairs, kg3, rules, &hot)) ==
              std::vector<std::string>{"TraConf"});
        // The trigger does not hold, so the pair falls back to OppConf.
        CHECK(kinds_of(detect_pairwise(pairs, kg3, rules, &cold)) ==
              std::vector<std::string>{"OppConf"});
    }
}

TEST_CASE("detect_all on a small studio day") {
    auto kg3 = studio_kg3();
    auto rules = std::vector<EcaRule>{
        parse_rule("temperature > 25C -> close window", "R1"),
        parse_rule("co2 > 0.5% -> open window", "R2"),
    };
    std::vector<IntervalEvent> events = {
        ev("blind", 600, 660),  ev("tv", 630, 690),    ev("heater", 720, 850),
        ev("stove", 730, 780),  ev("ac", 840, 960),    ev("window", 870, 930),
    };
    std::vector<RuleFiring> firings = {{"R1", TimeOfDay::parse("14:31"), "studio"},
                                       {"R2", TimeOfDay::parse("14:33"), "studio"}};
    auto cs = detect_all(events, firings, rules, kg3, TimeConstraint(5));
    CHECK(kinds_of(cs) == std::vector<std::string>{"CumConf", "CumConf", "FFConf", "OppConf",
                                                   "TraConf"});
    CHECK(std::is_sorted(cs.begin(), cs.end()));
    CHECK(std::adjacent_find(cs.begin(), cs.end()) == cs.end());

    SUBCASE("duplicate evidence does not duplicate conflicts") {
        auto doubled = events;
        doubled.insert(doubled.end(), events.begin(), events.end());
        auto cs2 = detect_all(doubled, firings, rules, kg3, TimeConstraint(5));
        CHECK(cs2 == cs);
    }
}

TEST_CASE("conflicts jsonl round trip") {
    auto kg3 = studio_kg3();
    auto rules = std::vector<EcaRule>{
        parse_rule("temperature > 25C -> close window", "R1"),
        parse_rule("co2 > 0.5% -> open window", "R2"),
    };
    std::vector<IntervalEvent> events = {ev("heater", 720, 850), ev("ac", 840, 960),
                                         ev("window", 845, 920)};
    std::vector<RuleFiring> firings = {{"R1", TimeOfDay::parse("14:31"), "studio"},
                                       {"R2", TimeOfDay::parse("14:33"), "studio"}};
    auto cs = detect_all(events, firings, rules, kg3, TimeConstraint(5));
    REQUIRE(!cs.empty());

    auto path = fs::temp_directory_path() / "homeconf_conflicts.jsonl";
    save_conflicts(cs, path.string());
    auto back = load_conflicts(path.string());
    REQUIRE(back.size() == cs.size());
    for (std::size_t i = 0; i < cs.size(); ++i) CHECK(back[i].key() == cs[i].key());
}
