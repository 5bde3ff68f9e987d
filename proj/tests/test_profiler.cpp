#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "homeconf/profiler.hpp"

using namespace homeconf;
namespace fs = std::filesystem;

namespace {

std::vector<EcaRule> motivating_rules() {
    const std::vector<std::string> texts = {
        "R1: temperature > 25C -> close window",
        "R2: co2 > 0.5% -> open window",
        "R3: weather = sunny -> pull up blind",
        "R4: turn on tv -> brightness = 50",
        "R5: temperature < 23C -> turn on heater AND temperature = 26C",
        "R6: temperature > 25C -> turn on ac AND temperature = 24C",
        "R7: humidity > 50% -> open window",
        "R8: turn on stove -> turn on kitchen_hood",
    };
    std::vector<EcaRule> rules;
    for (const auto& line : texts) {
        auto colon = line.find(':');
        rules.push_back(parse_rule(line.substr(colon + 1), line.substr(0, colon)));
    }
    return rules;
}

KnowledgeGraph studio_seed() {
    return KnowledgeGraph({{"ac", Relation::Decrease, "temperature"},
                           {"blind", Relation::Increase, "brightness"},
                           {"heater", Relation::Increase, "temperature"},
                           {"stove", Relation::Increase, "temperature"},
                           {"tv", Relation::Increase, "brightness"},
                           {"window", Relation::Increase, "temperature"},
                           {"window", Relation::Decrease, "temperature"}},
                          KgStage::Seed, default_env_vocab());
}

std::map<std::string, std::string> studio_placements() {
    return {{"ac", "studio"},    {"blind", "studio"}, {"heater", "studio"},
            {"stove", "studio"}, {"tv", "studio"},    {"window", "studio"},
            {"kitchen_hood", "studio"}};
}

HomeContext summer_ctx() {
    HomeContext ctx;
    ctx.prefs.push_back(EnvPreference{"temperature", 24, TimeOfDay(0),
                                      TimeOfDay::end_of_day(), "studio"});
    ctx.outdoor.push_back(
        OutdoorState{"temperature", 27, TimeOfDay(0), TimeOfDay::end_of_day()});
    ctx.placements = studio_placements();
    return ctx;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("complete adds trigger edges for comparison-triggered rules") {
    auto seed = studio_seed();
    auto kg1 = complete(seed, motivating_rules());
    CHECK(kg1.stage() == KgStage::KG1);
    CHECK(kg1.contains({"temperature", Relation::Trigger, "window"}));
    CHECK(kg1.contains({"co2", Relation::Trigger, "window"}));
    CHECK(kg1.contains({"humidity", Relation::Trigger, "window"}));
    CHECK(kg1.contains({"weather", Relation::Trigger, "blind"}));
    CHECK(kg1.contains({"temperature", Relation::Trigger, "heater"}));
    CHECK(kg1.contains({"temperature", Relation::Trigger, "ac"}));
    // Service-event triggers (R4, R8) contribute no edge.
    CHECK(kg1.size() == seed.size() + 6);
    for (const auto& tr : seed.triples()) CHECK(kg1.contains(tr));

    CHECK_THROWS_AS(complete(kg1, motivating_rules()), std::invalid_argument);
}

TEST_CASE("tailor partitions by location and drops unplaced services") {
    auto kg1 = complete(studio_seed(), motivating_rules());
    auto placements = studio_placements();
    placements.erase("stove");
    auto result = tailor(kg1, placements);
    CHECK(result.kg.stage() == KgStage::KG2);
    CHECK(!result.kg.contains({"stove", Relation::Increase, "temperature"}));
    CHECK(result.kg.contains({"ac", Relation::Decrease, "temperature"}));
    REQUIRE(result.warnings.size() == 1);
    CHECK(result.warnings[0].find("stove") != std::string::npos);
    const auto& studio = result.kg.partition().at("studio");
    CHECK(studio.count("ac") == 1);
    CHECK(studio.count("stove") == 0);
}

TEST_CASE("refine disambiguates by outdoor context") {
    auto rules = motivating_rules();
    auto kg2 = tailor(complete(studio_seed(), rules), studio_placements()).kg;

    SUBCASE("hot outdoors keeps '+'") {
        auto result = refine(kg2, summer_ctx());
        CHECK(result.kg.stage() == KgStage::KG3);
        CHECK(result.kg.contains({"window", Relation::Increase, "temperature"}));
        CHECK(!result.kg.contains({"window", Relation::Decrease, "temperature"}));
        CHECK(result.warnings.empty());
    }

    SUBCASE("cold outdoors keeps '-'") {
        auto ctx = summer_ctx();
        ctx.outdoor[0].value = 18;
        auto result = refine(kg2, ctx);
        CHECK(!result.kg.contains({"window", Relation::Increase, "temperature"}));
        CHECK(result.kg.contains({"window", Relation::Decrease, "temperature"}));
    }

    SUBCASE("single-signed pairs pass through either way") {
        auto result = refine(kg2, summer_ctx());
        CHECK(result.kg.contains({"ac", Relation::Decrease, "temperature"}));
        CHECK(result.kg.contains({"heater", Relation::Increase, "temperature"}));
        CHECK(result.kg.contains({"temperature", Relation::Trigger, "ac"}));
    }
}

TEST_CASE("refine falls back to mining support, then to '+' with a warning") {
    auto seed = KnowledgeGraph({{"window", Relation::Increase, "temperature", 1},
                                {"window", Relation::Decrease, "temperature", 3}},
                               KgStage::Seed, default_env_vocab());
    auto kg2 = tailor(complete(seed, {}), {{"window", "studio"}}).kg;

    SUBCASE("majority support wins without covering context") {
        auto result = refine(kg2, HomeContext{});
        CHECK(result.kg.contains({"window", Relation::Decrease, "temperature"}));
        CHECK(!result.kg.contains({"window", Relation::Increase, "temperature"}));
        CHECK(result.warnings.empty());
    }

    SUBCASE("tied support keeps '+' and warns") {
        auto tied = KnowledgeGraph({{"window", Relation::Increase, "temperature", 2},
                                    {"window", Relation::Decrease, "temperature", 2}},
                                   KgStage::Seed, default_env_vocab());
        auto kg2t = tailor(complete(tied, {}), {{"window", "studio"}}).kg;
        auto result = refine(kg2t, HomeContext{});
        CHECK(result.kg.contains({"window", Relation::Increase, "temperature"}));
        REQUIRE(result.warnings.size() == 1);
        CHECK(result.warnings[0].find("window") != std::string::npos);
    }
}

TEST_CASE("rule setpoints and firings derive preferences") {
    auto rules = motivating_rules();
    auto kg2 = tailor(complete(studio_seed(), rules), studio_placements()).kg;

    // No explicit preference; R6 fired, so temperature=24 is in force and the
    // 27-degree outdoors resolves the window to '+'.
    HomeContext ctx;
    ctx.placements = studio_placements();
    ctx.outdoor.push_back(
        OutdoorState{"temperature", 27, TimeOfDay(0), TimeOfDay::end_of_day()});
    std::vector<RuleFiring> firings = {{"R6", TimeOfDay::parse("14:00"), "studio"}};

    auto result = refine(kg2, ctx, rules, firings);
    CHECK(result.kg.contains({"window", Relation::Increase, "temperature"}));
    CHECK(!result.kg.contains({"window", Relation::Decrease, "temperature"}));

    // Explicit preferences win over derived ones.
    ctx.prefs.push_back(EnvPreference{"temperature", 29, TimeOfDay(0),
                                      TimeOfDay::end_of_day(), "studio"});
    auto flipped = refine(kg2, ctx, rules, firings);
    CHECK(flipped.kg.contains({"window", Relation::Decrease, "temperature"}));
}

TEST_CASE("profile composes the stages and is deterministic") {
    auto rules = motivating_rules();
    auto a = profile(studio_seed(), rules, summer_ctx());
    auto b = profile(studio_seed(), rules, summer_ctx());
    CHECK(a.kg.stage() == KgStage::KG3);
    CHECK(a.kg.triples() == b.kg.triples());
    CHECK(a.warnings == b.warnings);
    CHECK(a.kg.partition() == b.kg.partition());
    CHECK(a.kg.contains({"temperature", Relation::Trigger, "ac"}));
    CHECK(a.kg.contains({"window", Relation::Increase, "temperature"}));

    auto dir = fs::temp_directory_path();
    auto t1 = dir / "homeconf_profile1.jsonl";
    auto t2 = dir / "homeconf_profile2.jsonl";
    auto m1 = dir / "homeconf_profile1.meta.json";
    auto m2 = dir / "homeconf_profile2.meta.json";
    save_profile(a, t1.string(), m1.string());
    save_profile(b, t2.string(), m2.string());
    CHECK(slurp(t1) == slurp(t2));
    CHECK(slurp(m1) == slurp(m2));

    auto loaded = load_triples(t1.string(), default_env_vocab());
    CHECK(loaded.stage() == KgStage::KG3);
    CHECK(loaded.triples() == a.kg.triples());
}
