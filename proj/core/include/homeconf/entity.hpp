#ifndef HOMECONF_ENTITY_HPP
#define HOMECONF_ENTITY_HPP

#include <stdexcept>
#include <string>
#include <string_view>

namespace homeconf {

/// Canonical entity name: lowercase, internal whitespace collapsed to single
/// underscores. Throws std::invalid_argument on empty input.
std::string normalize_entity(std::string_view raw);

/// True if `name` is already in canonical form.
bool is_normalized_entity(std::string_view name);

}  // namespace homeconf

#endif
