#pragma once

#include <array>
#include <fstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "cliffmech/dynamics.hpp"
#include "cliffmech/structure.hpp"

// Loaders for the two shipped fixture files: the twelve structure tables as
// block maps, and the six Hamilton equation sets as signed block records.
// Both files are hand-transcribed data; the test suite compares computed
// objects against them, never the other way round.

namespace cliffmech {

/// One transcribed table: block b maps to entries[b] = (target block, sign).
struct StructureTableFixture {
    int k = 0;
    Variant variant = Variant::primal;
    std::array<std::pair<int, int>, 8> entries{};

    /// Expands the block map to a tensor at block size n.
    SignedPermutationTensor expand(int n) const {
        std::vector<int> target(8 * n), sign(8 * n);
        for (int b = 0; b < 8; ++b) {
            for (int i = 0; i < n; ++i) {
                target[b * n + i] = entries[b].first * n + i;
                sign[b * n + i] = entries[b].second;
            }
        }
        return SignedPermutationTensor(n, variant, std::move(target), std::move(sign), k);
    }
};

inline std::vector<StructureTableFixture> load_structure_tables(const nlohmann::json& doc) {
    if (!doc.contains("tables") || !doc["tables"].is_array())
        throw std::invalid_argument("structure tables fixture: missing 'tables' array");
    std::vector<StructureTableFixture> out;
    for (const auto& item : doc["tables"]) {
        StructureTableFixture fx;
        fx.k = item.at("k").get<int>();
        const std::string variant = item.at("variant").get<std::string>();
        if (variant == "primal") fx.variant = Variant::primal;
        else if (variant == "dual") fx.variant = Variant::dual;
        else throw std::invalid_argument("structure tables fixture: bad variant " + variant);
        const auto& entries = item.at("entries");
        if (!entries.is_array() || entries.size() != 8)
            throw std::invalid_argument("structure tables fixture: entries must be 8 pairs");
        for (int b = 0; b < 8; ++b) {
            fx.entries[b] = {entries[b].at(0).get<int>(), entries[b].at(1).get<int>()};
        }
        out.push_back(fx);
    }
    return out;
}

inline std::vector<EquationSet> load_equation_sets(const nlohmann::json& doc) {
    if (!doc.contains("sets") || !doc["sets"].is_array())
        throw std::invalid_argument("equation fixture: missing 'sets' array");
    std::vector<EquationSet> out;
    for (const auto& item : doc["sets"]) {
        EquationSet set;
        set.k = item.at("k").get<int>();
        const auto& records = item.at("records");
        if (!records.is_array() || records.size() != 8)
            throw std::invalid_argument("equation fixture: records must have 8 entries");
        for (const auto& r : records) {
            set.records.push_back({r.at("lhs").get<int>(), r.at("sign").get<int>(),
                                   r.at("rhs").get<int>()});
        }
        out.push_back(std::move(set));
    }
    return out;
}

inline nlohmann::json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open fixture file: " + path);
    nlohmann::json doc;
    in >> doc;
    return doc;
}

}  // namespace cliffmech
