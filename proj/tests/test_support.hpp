#pragma once

#include <array>
#include <map>
#include <string>

#include "papsim/plant.hpp"
#include "papsim/props.hpp"
#include "papsim/stream.hpp"

namespace papsim::testing {

inline const char* const kNB = "Nitrobenzene";
inline const char* const kH2 = "Hydrogen";
inline const char* const kPAP = "p-Aminophenol";
inline const char* const kW = "Water";
inline const char* const kAN = "Aniline";

inline std::string plant_path() { return std::string(PAPSIM_DATA_DIR) + "/pap_plant.json"; }

inline const PlantDefinition& pap_plant() {
    static const PlantDefinition def = load_plant(plant_path());
    return def;
}

inline const ComponentRegistry& registry() { return pap_plant().registry; }

/// Reference stream table: NB, H2, PAP, water, aniline [kmol/h], T [degC], P [bar].
struct TableRow {
    std::array<double, 5> flows;
    double t;
    double p;
    Phase phase;
};

inline const std::map<std::string, TableRow>& reference_table() {
    static const std::map<std::string, TableRow> rows = {
        {"1", {{35.000, 0.000, 0.000, 0.000, 0.000}, 25.000, 1.0, Phase::Liquid}},
        {"2", {{0.000, 93.000, 0.000, 0.000, 0.000}, 30.00, 1.0, Phase::Vapor}},
        {"3", {{35.000, 0.000, 0.000, 0.000, 0.000}, 25.100, 4.0, Phase::Liquid}},
        {"4", {{54.082, 0.000, 0.097, 0.000, 1.558}, 47.791, 4.0, Phase::Liquid}},
        {"5", {{0.006, 166.411, 0.000, 3.504, 0.011}, 27.725, 1.0, Phase::Vapor}},
        {"6", {{0.006, 166.411, 0.000, 3.504, 0.011}, 246.765, 4.0, Phase::Vapor}},
        {"7", {{54.082, 0.000, 0.097, 0.000, 1.558}, 85.000, 4.0, Phase::Liquid}},
        {"8", {{0.006, 166.4, 0.000, 3.504, 0.011}, 85.00, 4.0, Phase::Vapor}},
        {"9", {{21.635, 91.769, 22.815, 45.693, 11.305}, 85.000, 4.0, Phase::Mixed}},
        {"10", {{19.082, 0.000, 0.097, 0.000, 1.558}, 85.000, 1.0, Phase::Liquid}},
        {"11", {{19.082, 0.000, 0.097, 0.000, 1.558}, 85.115, 4.0, Phase::Liquid}},
        {"12", {{21.627, 0.005, 22.815, 41.313, 11.291}, 25.000, 1.0, Phase::Liquid}},
        {"13", {{0.008, 91.76, 0.000, 4.380, 0.014}, 25.00, 1.0, Phase::Vapor}},
        {"14", {{0.002, 18.35, 0.000, 0.876, 0.003}, 25.00, 1.0, Phase::Vapor}},
        {"15", {{0.006, 73.411, 0.000, 3.504, 0.011}, 25.00, 1.0, Phase::Vapor}},
        {"16", {{21.627, 0.005, 22.815, 41.313, 11.291}, 120.00, 1.0, Phase::Mixed}},
        {"17", {{21.612, 0.005, 0.108, 41.313, 11.290}, 176.91, 1.0, Phase::Vapor}},
        {"18", {{0.015, 0.000, 22.707, 0.000, 0.000}, 283.48, 1.0, Phase::Liquid}},
        {"19", {{21.612, 0.005, 0.108, 41.313, 11.290}, 120.00, 1.0, Phase::Mixed}},
        {"20", {{0.410, 0.005, 0.000, 41.313, 9.559}, 134.48, 1.0, Phase::Vapor}},
        {"21", {{21.203, 0.000, 0.108, 0.000, 1.731}, 208.95, 1.0, Phase::Liquid}},
        {"22", {{21.203, 0.000, 0.108, 0.000, 1.731}, 85.000, 1.0, Phase::Liquid}},
        {"23", {{2.120, 0.000, 0.011, 0.000, 0.173}, 85.000, 1.0, Phase::Liquid}},
        {"24", {{0.410, 0.005, 0.000, 41.313, 9.559}, 30.000, 1.0, Phase::Mixed}},
        {"25", {{0.410, 0.005, 0.000, 1.497, 9.558}, 30.000, 1.0, Phase::Liquid}},
        {"26", {{0.000, 0.000, 0.000, 39.816, 0.001}, 30.000, 1.0, Phase::Liquid}},
    };
    return rows;
}

inline const std::array<const char*, 5>& table_components() {
    static const std::array<const char*, 5> names = {kNB, kH2, kPAP, kW, kAN};
    return names;
}

inline Stream table_stream(const std::string& id) {
    const auto& row = reference_table().at(id);
    Stream s;
    for (std::size_t i = 0; i < 5; ++i)
        if (row.flows[i] > 0.0) s.flows[table_components()[i]] = row.flows[i];
    s.temperature = row.t;
    s.pressure = row.p;
    s.phase = row.phase;
    return s;
}

} // namespace papsim::testing
