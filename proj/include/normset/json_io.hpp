#pragma once

#include "normset/rational.hpp"
#include "normset/scc.hpp"
#include "normset/schreier.hpp"
#include "normset/vector.hpp"

#include <nlohmann/json.hpp>

#include <string>

namespace normset {

// {"entries": [[index-as-decimal-string, "p/q"], ...]}
inline nlohmann::json vector_to_json(const RationalVector& v) {
    nlohmann::json entries = nlohmann::json::array();
    for (auto& [k, c] : v.entries())
        entries.push_back(nlohmann::json::array({nat_to_string(k), rat_to_string(c)}));
    nlohmann::json j;
    j["entries"] = std::move(entries);
    return j;
}

inline RationalVector vector_from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("entries") || !j.at("entries").is_array())
        throw MalformedInput("vector json: expected {\"entries\": [...]}");
    RationalVector::Entries e;
    for (auto& pair : j.at("entries")) {
        if (!pair.is_array() || pair.size() != 2)
            throw MalformedInput("vector json: entry must be [index, coefficient]");
        Nat k = parse_nat(pair[0].get<std::string>());
        Rat c = parse_rat(pair[1].get<std::string>());
        if (e.count(k)) throw MalformedInput("vector json: duplicate index " + k.str());
        e.emplace(std::move(k), std::move(c));
    }
    return RationalVector::from_entries(std::move(e));
}

inline nlohmann::json schreier_node_to_json(const SchreierNode& n) {
    nlohmann::json j;
    j["level"] = n.level;
    nlohmann::json els = nlohmann::json::array();
    for (auto& e : n.elements) els.push_back(nat_to_string(e));
    j["elements"] = std::move(els);
    if (!n.children.empty()) {
        nlohmann::json kids = nlohmann::json::array();
        for (auto& c : n.children) kids.push_back(schreier_node_to_json(c));
        j["children"] = std::move(kids);
    }
    return j;
}

inline nlohmann::json schreier_witness_to_json(const SchreierWitness& w) {
    nlohmann::json j;
    j["declared_level"] = nat_to_string(w.declared_level);
    j["tree_level"] = w.tree_level;
    if (w.root) j["tree"] = schreier_node_to_json(*w.root);
    return j;
}

inline nlohmann::json scc_to_json(const SccDescriptor& d) {
    nlohmann::json j;
    j["n"] = nat_to_string(d.level);
    j["eps"] = rat_to_string(d.epsilon);
    nlohmann::json cs = nlohmann::json::array();
    for (auto& [k, c] : d.coeffs)
        cs.push_back(nlohmann::json::array({nat_to_string(k), rat_to_string(c)}));
    j["coeffs"] = std::move(cs);
    return j;
}

inline SccDescriptor scc_from_json(const nlohmann::json& j) {
    SccDescriptor d;
    d.level = parse_nat(j.at("n").get<std::string>());
    d.epsilon = parse_rat(j.at("eps").get<std::string>());
    for (auto& pair : j.at("coeffs"))
        d.coeffs.emplace(parse_nat(pair[0].get<std::string>()),
                         parse_rat(pair[1].get<std::string>()));
    return d;
}

}  // namespace normset
