#include "homeconf/entity.hpp"

#include <cctype>

namespace homeconf {

std::string normalize_entity(std::string_view raw) {
    std::string out;
    out.reserve(raw.size());
    bool pending_sep = false;
    for (char c : raw) {
        if (std::isspace(static_cast<unsigned char>(c)) || c == '_') {
            if (!out.empty()) pending_sep = true;
            continue;
        }
        if (pending_sep) {
            out.push_back('_');
            pending_sep = false;
        }
        out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    }
    if (out.empty()) throw std::invalid_argument("empty entity name");
    return out;
}

bool is_normalized_entity(std::string_view name) {
    if (name.empty()) return false;
    return normalize_entity(name) == name;
}

}  // namespace homeconf
