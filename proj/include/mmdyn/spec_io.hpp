#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

#include "mmdyn/model.hpp"

namespace mmdyn {

/// Parse or shape error in a multi-map document; location is a dotted path
/// into the document ("symbols[3].domain").
struct ParseError : std::runtime_error {
    ParseError(const std::string& location, const std::string& what)
        : std::runtime_error(location.empty() ? what : location + ": " + what),
          location(location) {}
    std::string location;
};

/// Reads a multi-map document from JSON text. Rationals are canonicalized;
/// the defining conditions are *not* checked here (see validate_definition).
/// "comment" keys are ignored wherever they appear.
MarkovMultiMap parse_spec(std::string_view text);

/// Canonical JSON rendering; parse(serialize(mm)) reproduces mm exactly.
std::string serialize_spec(const MarkovMultiMap& mm);

}  // namespace mmdyn
