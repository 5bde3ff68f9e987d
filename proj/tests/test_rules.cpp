#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "homeconf/context.hpp"
#include "homeconf/events.hpp"
#include "homeconf/rules.hpp"
#include "homeconf/time_of_day.hpp"

using namespace homeconf;
namespace fs = std::filesystem;

namespace {

fs::path data_dir() { return fs::path(HOMECONF_DATA_DIR); }

fs::path tmp_file(const std::string& name) {
    return fs::temp_directory_path() / ("homeconf_rules_" + name);
}

}  // namespace

TEST_CASE("time of day") {
    CHECK(TimeOfDay::parse("04:30").seconds() == 4 * 3600 + 30 * 60);
    CHECK(TimeOfDay::parse("04:30:23").seconds() == 4 * 3600 + 30 * 60 + 23);
    CHECK(TimeOfDay::parse("4:05").minutes() == 245);
    CHECK(TimeOfDay::parse("04:30").str() == "04:30");
    CHECK(TimeOfDay::parse("04:30:23").str() == "04:30:23");
    CHECK(TimeOfDay::end_of_day().str() == "23:59");
    CHECK(TimeOfDay::from_minutes(90) < TimeOfDay::from_minutes(91));
    CHECK_THROWS(TimeOfDay::parse("25:00"));
    CHECK_THROWS(TimeOfDay::parse("12:61"));
    CHECK_THROWS(TimeOfDay::parse("noon"));
}

TEST_CASE("comparison trigger with unit") {
    auto r = parse_rule("temperature > 25C -> close window", "R1");
    const auto& ec = std::get<EnvComparison>(r.trig);
    CHECK(ec.env == "temperature");
    CHECK(ec.op == '>');
    CHECK(std::get<Quantity>(ec.value) == Quantity{25.0, "C"});
    REQUIRE(r.action.commands.size() == 1);
    CHECK(std::get<ServiceCommand>(r.action.commands[0]) ==
          ServiceCommand{"window", "close"});
}

TEST_CASE("percent and fractional values") {
    auto r = parse_rule("co2 > 0.5% -> open window");
    const auto& ec = std::get<EnvComparison>(r.trig);
    CHECK(std::get<Quantity>(ec.value) == Quantity{0.5, "%"});
}

TEST_CASE("symbolic comparison value") {
    auto r = parse_rule("weather = sunny -> pull up blind");
    const auto& ec = std::get<EnvComparison>(r.trig);
    CHECK(ec.op == '=');
    CHECK(std::get<std::string>(ec.value) == "sunny");
    CHECK(std::get<ServiceCommand>(r.action.commands[0]) ==
          ServiceCommand{"blind", "pull_up"});
}

TEST_CASE("service-event trigger and setpoint command") {
    auto r = parse_rule("turn on tv -> brightness = 50");
    CHECK(std::get<ServiceEvent>(r.trig) == ServiceEvent{"tv", "turn_on"});
    CHECK(std::get<EnvSetpoint>(r.action.commands[0]) ==
          EnvSetpoint{"brightness", Quantity{50.0, ""}});
    CHECK(!rule_invokes(r));
}

TEST_CASE("AND-joined action") {
    auto r = parse_rule("temperature < 23C -> turn on heater AND temperature = 26C");
    REQUIRE(r.action.commands.size() == 2);
    CHECK(std::get<ServiceCommand>(r.action.commands[0]) ==
          ServiceCommand{"heater", "turn_on"});
    CHECK(std::get<EnvSetpoint>(r.action.commands[1]) ==
          EnvSetpoint{"temperature", Quantity{26.0, "C"}});
    auto invoked = rule_invokes(r);
    REQUIRE(invoked);
    CHECK(invoked->service == "heater");
}

TEST_CASE("to_text round trips to an identical AST") {
    const std::vector<std::string> texts = {
        "temperature > 25C -> close window",
        "co2 > 0.5% -> open window",
        "weather = sunny -> pull up blind",
        "turn on tv -> brightness = 50",
        "temperature < 23C -> turn on heater AND temperature = 26C",
        "temperature > 25C -> turn on ac AND temperature = 24C",
        "humidity > 50% -> open window",
        "turn on stove -> turn on kitchen_hood",
    };
    for (const auto& text : texts) {
        CAPTURE(text);
        auto r = parse_rule(text, "X");
        auto r2 = parse_rule(to_text(r), "X");
        CHECK(r == r2);
        CHECK(to_text(r) == to_text(r2));
    }
}

TEST_CASE("whitespace insensitivity") {
    auto a = parse_rule("temperature>25C->close   window");
    auto b = parse_rule("  temperature  >  25C  ->  close window ");
    CHECK(a == b);
}

TEST_CASE("syntax errors carry a position") {
    CHECK_THROWS_AS(parse_rule("temperature > 25C"), RuleSyntaxError);
    CHECK_THROWS_AS(parse_rule("-> close window"), RuleSyntaxError);
    CHECK_THROWS_AS(parse_rule("temperature > -> close window"), RuleSyntaxError);
    CHECK_THROWS_AS(parse_rule("temperature 25C -> close window"), RuleSyntaxError);
    CHECK_THROWS_AS(parse_rule("frob the window -> open window"), RuleSyntaxError);
    try {
        parse_rule("temperature > 25C -> close @window");
        FAIL("expected RuleSyntaxError");
    } catch (const RuleSyntaxError& e) {
        CHECK(std::string(e.what()).find("position") != std::string::npos);
    }
}

TEST_CASE("load_rules reads the shipped rule file") {
    auto rules = load_rules((data_dir() / "motivating" / "rules.txt").string());
    REQUIRE(rules.size() == 8);
    CHECK(rules[0].id == "R1");
    CHECK(rules[7].id == "R8");
    auto invoked = rule_invokes(rules[5]);
    REQUIRE(invoked);
    CHECK(*invoked == ServiceCommand{"ac", "turn_on"});
}

TEST_CASE("load_rules assigns ids when missing") {
    auto path = tmp_file("noids.txt");
    {
        std::ofstream out(path);
        out << "# comment only\n\n";
        out << "temperature > 25C -> close window\n";
        out << "open window -> turn on fan\n";
    }
    auto rules = load_rules(path.string());
    REQUIRE(rules.size() == 2);
    CHECK(rules[0].id == "R1");
    CHECK(rules[1].id == "R2");
}

TEST_CASE("events csv round trip") {
    auto path = tmp_file("events.csv");
    {
        std::ofstream out(path);
        out << "service,start,end,location\n";
        out << "light_switch,04:30:23,04:33:39,kitchen\n";
        out << "ac,14:00,16:00,living_room\n";
    }
    auto events = load_events(path.string());
    REQUIRE(events.size() == 2);
    CHECK(events[0].service == "light_switch");
    CHECK(events[0].st.str() == "04:30:23");
    CHECK(events[0].et.str() == "04:33:39");
    CHECK(events[0].loc == "kitchen");

    auto path2 = tmp_file("events2.csv");
    save_events(events, path2.string());
    CHECK(load_events(path2.string()) == events);
}

TEST_CASE("event validation") {
    CHECK_THROWS_AS(make_event("ac", TimeOfDay::parse("15:00"), TimeOfDay::parse("14:00"),
                               "kitchen"),
                    EventParseError);
    CHECK_THROWS_AS(make_event("ac", TimeOfDay::parse("14:00"), TimeOfDay::parse("15:00"),
                               "  "),
                    EventParseError);
    auto path = tmp_file("badheader.csv");
    {
        std::ofstream out(path);
        out << "svc,st,et,loc\nac,14:00,15:00,kitchen\n";
    }
    CHECK_THROWS_AS(load_events(path.string()), EventParseError);
}

TEST_CASE("context json round trip") {
    auto ctx = load_context((data_dir() / "motivating" / "context.json").string());
    REQUIRE(ctx.prefs.size() == 1);
    CHECK(ctx.prefs[0].env == "temperature");
    CHECK(ctx.prefs[0].value == 24);
    CHECK(ctx.prefs[0].loc == "studio");
    REQUIRE(ctx.outdoor.size() == 1);
    CHECK(ctx.outdoor[0].value == 27);
    CHECK(ctx.placements.at("ac") == "studio");

    auto path = tmp_file("context.json");
    save_context(ctx, path.string());
    CHECK(load_context(path.string()) == ctx);
}

TEST_CASE("firings and readings round trip") {
    auto firings = load_firings((data_dir() / "motivating" / "firings.csv").string());
    REQUIRE(firings.size() == 2);
    CHECK(firings[0] == RuleFiring{"R1", TimeOfDay::parse("14:31"), "studio"});

    auto path = tmp_file("firings.csv");
    save_firings(firings, path.string());
    CHECK(load_firings(path.string()) == firings);

    auto readings = load_readings((data_dir() / "motivating" / "readings.json").string());
    CHECK(readings.at({"temperature", "studio"}) == 26);

    auto rpath = tmp_file("readings.json");
    save_readings(readings, rpath.string());
    CHECK(load_readings(rpath.string()) == readings);
}
