#ifndef HOMECONF_RULES_HPP
#define HOMECONF_RULES_HPP

#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace homeconf {

struct RuleSyntaxError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Numeric value with an optional carried (never converted) unit, e.g. 25 "C".
struct Quantity {
    double value = 0.0;
    std::string unit;  // may be empty
    friend bool operator==(const Quantity&, const Quantity&) = default;
};

/// Comparison value: a quantity or a bare symbol ("sunny").
using CompValue = std::variant<Quantity, std::string>;

struct EnvComparison {
    std::string env;
    char op = '=';  // one of < > =
    CompValue value;
    friend bool operator==(const EnvComparison&, const EnvComparison&) = default;
};

struct ServiceEvent {
    std::string service;
    std::string functionality;  // turn_on, open, ...
    friend bool operator==(const ServiceEvent&, const ServiceEvent&) = default;
};

using TriggerCond = std::variant<EnvComparison, ServiceEvent>;

struct ServiceCommand {
    std::string service;
    std::string functionality;
    friend bool operator==(const ServiceCommand&, const ServiceCommand&) = default;
};

struct EnvSetpoint {
    std::string env;
    Quantity value;
    friend bool operator==(const EnvSetpoint&, const EnvSetpoint&) = default;
};

using Command = std::variant<ServiceCommand, EnvSetpoint>;

/// AND-joined command conjunction; never empty.
struct Action {
    std::vector<Command> commands;
    friend bool operator==(const Action&, const Action&) = default;
};

struct EcaRule {
    std::string id;
    TriggerCond trig;
    Action action;
    friend bool operator==(const EcaRule&, const EcaRule&) = default;
};

/// Recognized multi-word command verbs and their canonical functionality names.
const std::vector<std::pair<std::string, std::string>>& rule_verbs();

/// Parses `trigger "->" action`. Trigger is `IDENT CMP VALUE` or `VERB IDENT`;
/// action is AND-joined commands, each `VERB IDENT` or `IDENT "=" NUMBER [UNIT]`.
/// Whitespace-insensitive; throws RuleSyntaxError with a character position.
EcaRule parse_rule(std::string_view text, std::string id = "");

/// Normalized surface form; re-parses to an identical AST.
std::string to_text(const EcaRule& rule);

/// The ServiceCommand of the action conjunction, if any.
std::optional<ServiceCommand> rule_invokes(const EcaRule& rule);

/// rules.txt: one rule per line, optional "<id>:" prefix, '#' comments.
std::vector<EcaRule> load_rules(const std::string& path);

}  // namespace homeconf

#endif
