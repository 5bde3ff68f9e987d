#include "homeconf/rules.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "homeconf/entity.hpp"

namespace homeconf {

const std::vector<std::pair<std::string, std::string>>& rule_verbs() {
    static const std::vector<std::pair<std::string, std::string>> verbs = {
        {"turn on", "turn_on"}, {"turn off", "turn_off"}, {"open", "open"},
        {"close", "close"},     {"pull up", "pull_up"},   {"pull down", "pull_down"},
    };
    return verbs;
}

namespace {

enum class TokKind { Word, Number, Arrow, Cmp };

struct Token {
    TokKind kind;
    std::string text;   // lowercased for words
    std::size_t pos;    // character offset in the input
    double num = 0.0;   // Number only
    std::string unit;   // Number only
};

[[noreturn]] void fail(std::size_t pos, const std::string& msg) {
    throw RuleSyntaxError("at position " + std::to_string(pos) + ": " + msg);
}

std::vector<Token> tokenize(std::string_view text) {
    std::vector<Token> out;
    std::size_t i = 0;
    while (i < text.size()) {
        unsigned char c = static_cast<unsigned char>(text[i]);
        if (std::isspace(c)) {
            ++i;
            continue;
        }
        if (text.compare(i, 2, "->") == 0) {
            out.push_back({TokKind::Arrow, "->", i});
            i += 2;
            continue;
        }
        if (c == '<' || c == '>' || c == '=') {
            out.push_back({TokKind::Cmp, std::string(1, text[i]), i});
            ++i;
            continue;
        }
        if (std::isdigit(c)) {
            std::size_t start = i;
            std::string digits;
            while (i < text.size() &&
                   (std::isdigit(static_cast<unsigned char>(text[i])) || text[i] == '.'))
                digits.push_back(text[i++]);
            std::string unit;
            while (i < text.size() && (std::isalpha(static_cast<unsigned char>(text[i])) ||
                                       text[i] == '%'))
                unit.push_back(text[i++]);
            Token t{TokKind::Number, digits + unit, start};
            try {
                t.num = std::stod(digits);
            } catch (const std::exception&) {
                fail(start, "bad number '" + digits + "'");
            }
            t.unit = unit;
            out.push_back(std::move(t));
            continue;
        }
        if (std::isalpha(c) || c == '_') {
            std::size_t start = i;
            std::string word;
            while (i < text.size() && (std::isalnum(static_cast<unsigned char>(text[i])) ||
                                       text[i] == '_')) {
                word.push_back(static_cast<char>(
                    std::tolower(static_cast<unsigned char>(text[i]))));
                ++i;
            }
            out.push_back({TokKind::Word, word, start});
            continue;
        }
        fail(i, std::string("unexpected character '") + text[i] + "'");
    }
    return out;
}

// Matches a verb at tokens[i]; longest (two-word) verbs first.
std::optional<std::string> match_verb(const std::vector<Token>& toks, std::size_t& i) {
    for (const auto& [surface, functionality] : rule_verbs()) {
        std::istringstream ss(surface);
        std::vector<std::string> words;
        std::string w;
        while (ss >> w) words.push_back(w);
        if (i + words.size() > toks.size()) continue;
        bool ok = true;
        for (std::size_t k = 0; k < words.size(); ++k)
            if (toks[i + k].kind != TokKind::Word || toks[i + k].text != words[k]) ok = false;
        if (ok) {
            i += words.size();
            return functionality;
        }
    }
    return std::nullopt;
}

std::string join_ident(const std::vector<Token>& toks, std::size_t begin, std::size_t end) {
    std::string joined;
    for (std::size_t k = begin; k < end; ++k) {
        if (toks[k].kind != TokKind::Word)
            fail(toks[k].pos, "expected identifier, got '" + toks[k].text + "'");
        if (!joined.empty()) joined += ' ';
        joined += toks[k].text;
    }
    if (joined.empty()) fail(toks.empty() ? 0 : toks[begin > 0 ? begin - 1 : 0].pos,
                             "expected identifier");
    return normalize_entity(joined);
}

TriggerCond parse_trigger(const std::vector<Token>& toks, std::size_t begin, std::size_t end) {
    if (begin >= end) fail(0, "empty trigger");
    std::size_t i = begin;
    if (auto fn = match_verb(toks, i)) {
        if (i >= end) fail(toks[end - 1].pos, "verb trigger needs a service name");
        return ServiceEvent{join_ident(toks, i, end), *fn};
    }
    // IDENT CMP VALUE
    std::size_t cmp = begin;
    while (cmp < end && toks[cmp].kind != TokKind::Cmp) ++cmp;
    if (cmp == end) fail(toks[begin].pos, "trigger needs a comparator or a known verb");
    EnvComparison ec;
    ec.env = join_ident(toks, begin, cmp);
    ec.op = toks[cmp].text[0];
    if (cmp + 1 >= end) fail(toks[cmp].pos, "comparison needs a value");
    const Token& val = toks[cmp + 1];
    if (cmp + 2 != end) fail(toks[cmp + 2].pos, "trailing tokens after comparison value");
    if (val.kind == TokKind::Number)
        ec.value = Quantity{val.num, val.unit};
    else if (val.kind == TokKind::Word)
        ec.value = val.text;
    else
        fail(val.pos, "bad comparison value '" + val.text + "'");
    return ec;
}

Command parse_command(const std::vector<Token>& toks, std::size_t begin, std::size_t end) {
    if (begin >= end) fail(0, "empty command");
    std::size_t i = begin;
    if (auto fn = match_verb(toks, i)) {
        if (i >= end) fail(toks[end - 1].pos, "verb needs a service name");
        return ServiceCommand{join_ident(toks, i, end), *fn};
    }
    std::size_t cmp = begin;
    while (cmp < end && toks[cmp].kind != TokKind::Cmp) ++cmp;
    if (cmp == end)
        fail(toks[begin].pos, "unknown verb '" + toks[begin].text + "'");
    if (toks[cmp].text != "=")
        fail(toks[cmp].pos, "setpoint requires '=', got '" + toks[cmp].text + "'");
    EnvSetpoint sp;
    sp.env = join_ident(toks, begin, cmp);
    if (cmp + 1 >= end) fail(toks[cmp].pos, "setpoint needs a value");
    const Token& val = toks[cmp + 1];
    if (val.kind != TokKind::Number) fail(val.pos, "setpoint value must be numeric");
    if (cmp + 2 != end) fail(toks[cmp + 2].pos, "trailing tokens after setpoint value");
    sp.value = Quantity{val.num, val.unit};
    return sp;
}

std::string format_quantity(const Quantity& q) {
    char buf[32];
    if (q.value == std::floor(q.value) && std::abs(q.value) < 1e9)
        std::snprintf(buf, sizeof buf, "%lld", static_cast<long long>(q.value));
    else
        std::snprintf(buf, sizeof buf, "%g", q.value);
    return buf + q.unit;
}

std::string verb_surface(const std::string& functionality) {
    for (const auto& [surface, fn] : rule_verbs())
        if (fn == functionality) return surface;
    return functionality;
}

}  // namespace

EcaRule parse_rule(std::string_view text, std::string id) {
    auto toks = tokenize(text);
    std::size_t arrow = 0;
    while (arrow < toks.size() && toks[arrow].kind != TokKind::Arrow) ++arrow;
    if (arrow == toks.size())
        throw RuleSyntaxError("rule needs '->' between trigger and action");
    EcaRule rule;
    rule.id = std::move(id);
    rule.trig = parse_trigger(toks, 0, arrow);

    std::size_t begin = arrow + 1;
    if (begin >= toks.size()) fail(toks[arrow].pos, "rule needs an action");
    for (std::size_t i = begin; i <= toks.size(); ++i) {
        bool at_and = i < toks.size() && toks[i].kind == TokKind::Word && toks[i].text == "and";
        if (i == toks.size() || at_and) {
            rule.action.commands.push_back(parse_command(toks, begin, i));
            begin = i + 1;
        }
    }
    if (rule.action.commands.empty()) fail(toks[arrow].pos, "rule needs an action");
    return rule;
}

std::string to_text(const EcaRule& rule) {
    std::ostringstream out;
    if (const auto* ec = std::get_if<EnvComparison>(&rule.trig)) {
        out << ec->env << ' ' << ec->op << ' ';
        if (const auto* q = std::get_if<Quantity>(&ec->value))
            out << format_quantity(*q);
        else
            out << std::get<std::string>(ec->value);
    } else {
        const auto& se = std::get<ServiceEvent>(rule.trig);
        out << verb_surface(se.functionality) << ' ' << se.service;
    }
    out << " -> ";
    bool first = true;
    for (const auto& cmd : rule.action.commands) {
        if (!first) out << " AND ";
        first = false;
        if (const auto* sc = std::get_if<ServiceCommand>(&cmd))
            out << verb_surface(sc->functionality) << ' ' << sc->service;
        else {
            const auto& sp = std::get<EnvSetpoint>(cmd);
            out << sp.env << " = " << format_quantity(sp.value);
        }
    }
    return out.str();
}

std::optional<ServiceCommand> rule_invokes(const EcaRule& rule) {
    for (const auto& cmd : rule.action.commands)
        if (const auto* sc = std::get_if<ServiceCommand>(&cmd)) return *sc;
    return std::nullopt;
}

std::vector<EcaRule> load_rules(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw RuleSyntaxError("cannot open " + path);
    std::vector<EcaRule> out;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        bool blank = true;
        for (char c : line)
            if (!std::isspace(static_cast<unsigned char>(c))) blank = false;
        if (blank) continue;

        // Optional "<id>:" prefix: a single colon-terminated word before "->".
        std::string id = "R" + std::to_string(out.size() + 1);
        std::string body = line;
        auto colon = line.find(':');
        auto arrow = line.find("->");
        if (colon != std::string::npos && (arrow == std::string::npos || colon < arrow)) {
            std::string prefix = line.substr(0, colon);
            bool word = !prefix.empty();
            for (char c : prefix)
                if (std::isspace(static_cast<unsigned char>(c))) word = false;
            if (word) {
                id = prefix;
                body = line.substr(colon + 1);
            }
        }
        try {
            out.push_back(parse_rule(body, id));
        } catch (const RuleSyntaxError& e) {
            throw RuleSyntaxError(path + ":" + std::to_string(lineno) + ": " + e.what());
        }
    }
    return out;
}

}  // namespace homeconf
