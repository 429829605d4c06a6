#include "mmdyn/spec_io.hpp"

#include <set>

#include <json.hpp>

namespace mmdyn {

namespace {

using nlohmann::ordered_json;

Rational parse_rational(const ordered_json& node, const std::string& where) {
    if (!node.is_string()) {
        throw ParseError(where, "expected a rational as a string like \"1/2\"");
    }
    auto value = Rational::parse(node.get<std::string>());
    if (!value) {
        throw ParseError(where, "malformed rational \"" + node.get<std::string>() + "\"");
    }
    return *value;
}

Interval parse_pair(const ordered_json& node, const std::string& where) {
    if (!node.is_array() || node.size() != 2) {
        throw ParseError(where, "expected a pair of rationals");
    }
    Rational lo = parse_rational(node[0], where + "[0]");
    Rational hi = parse_rational(node[1], where + "[1]");
    if (lo > hi) std::swap(lo, hi);  // validation reports shape problems later
    return Interval(lo, hi);
}

}  // namespace

MarkovMultiMap parse_spec(std::string_view text) {
    ordered_json doc = ordered_json::parse(text, nullptr, false);
    if (doc.is_discarded()) throw ParseError("", "invalid JSON");
    if (!doc.is_object()) throw ParseError("", "document must be a JSON object");

    MarkovMultiMap mm;

    if (!doc.contains("partition") || !doc["partition"].is_array()) {
        throw ParseError("partition", "missing or not an array");
    }
    std::size_t i = 0;
    for (const auto& node : doc["partition"]) {
        mm.partition.points.push_back(
            parse_rational(node, "partition[" + std::to_string(i) + "]"));
        ++i;
    }

    if (!doc.contains("symbols") || !doc["symbols"].is_array()) {
        throw ParseError("symbols", "missing or not an array");
    }
    std::set<std::string> names;
    i = 0;
    for (const auto& node : doc["symbols"]) {
        std::string where = "symbols[" + std::to_string(i) + "]";
        ++i;
        if (!node.is_object()) throw ParseError(where, "expected an object");

        BranchSymbol s;
        if (!node.contains("name") || !node["name"].is_string()) {
            throw ParseError(where + ".name", "missing or not a string");
        }
        s.name = node["name"].get<std::string>();
        if (s.name.empty()) throw ParseError(where + ".name", "empty symbol name");
        if (!names.insert(s.name).second) {
            throw ParseError(where + ".name", "duplicate symbol name \"" + s.name + "\"");
        }

        if (!node.contains("class") || !node["class"].is_string()) {
            throw ParseError(where + ".class", "missing or not a string");
        }
        std::string cls = node["class"].get<std::string>();
        if (cls == "interval") s.cls = SymbolClass::interval;
        else if (cls == "vertical") s.cls = SymbolClass::vertical;
        else if (cls == "point") s.cls = SymbolClass::point;
        else throw ParseError(where + ".class", "unknown class tag \"" + cls + "\"");

        if (!node.contains("domain")) throw ParseError(where + ".domain", "missing");
        if (s.cls == SymbolClass::interval) {
            s.domain = parse_pair(node["domain"], where + ".domain");
        } else {
            s.domain = Interval::point(parse_rational(node["domain"], where + ".domain"));
        }

        if (!node.contains("range")) throw ParseError(where + ".range", "missing");
        if (s.cls == SymbolClass::point) {
            s.range = Interval::point(parse_rational(node["range"], where + ".range"));
        } else {
            s.range = parse_pair(node["range"], where + ".range");
        }

        if (s.cls == SymbolClass::interval) {
            if (!node.contains("orientation") || !node["orientation"].is_string()) {
                throw ParseError(where + ".orientation", "missing or not a string");
            }
            std::string o = node["orientation"].get<std::string>();
            if (o == "increasing") s.orientation = Orientation::increasing;
            else if (o == "decreasing") s.orientation = Orientation::decreasing;
            else throw ParseError(where + ".orientation", "expected \"increasing\" or \"decreasing\"");
        }

        mm.symbols.push_back(std::move(s));
    }

    return mm;
}

std::string serialize_spec(const MarkovMultiMap& mm) {
    ordered_json doc;
    doc["partition"] = ordered_json::array();
    for (const auto& p : mm.partition.points) doc["partition"].push_back(p.str());
    doc["symbols"] = ordered_json::array();
    for (const auto& s : mm.symbols) {
        ordered_json node;
        node["name"] = s.name;
        node["class"] = std::string(to_string(s.cls));
        if (s.cls == SymbolClass::interval) {
            node["domain"] = {s.domain.lo.str(), s.domain.hi.str()};
        } else {
            node["domain"] = s.domain.lo.str();
        }
        if (s.cls == SymbolClass::point) {
            node["range"] = s.range.lo.str();
        } else {
            node["range"] = {s.range.lo.str(), s.range.hi.str()};
        }
        if (s.cls == SymbolClass::interval) {
            node["orientation"] = std::string(to_string(s.orientation));
        }
        doc["symbols"].push_back(std::move(node));
    }
    return doc.dump(2) + "\n";
}

}  // namespace mmdyn
