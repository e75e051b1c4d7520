#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>

#include "papsim/error.hpp"

namespace papsim {

enum class Phase { Liquid, Vapor, Mixed };

inline constexpr std::string_view to_string(Phase phase) {
    switch (phase) {
    case Phase::Liquid: return "Liquid";
    case Phase::Vapor: return "Vapor";
    case Phase::Mixed: return "Mixed";
    }
    return "Mixed";
}

inline std::optional<Phase> parse_phase(std::string_view text) {
    if (text == "Liquid") return Phase::Liquid;
    if (text == "Vapor") return Phase::Vapor;
    if (text == "Mixed") return Phase::Mixed;
    return std::nullopt;
}

/// Per-component molar flows [kmol/h], keyed by component name.
using FlowMap = std::map<std::string, double, std::less<>>;

/// Thermodynamic state attached to a block outlet.
struct StreamState {
    double temperature = 25.0; // degC
    double pressure = 1.0;     // bar abs
    Phase phase = Phase::Liquid;
};

/// A material stream. Flows are never negative; total flow is always derived.
struct Stream {
    FlowMap flows;
    double temperature = 25.0; // degC
    double pressure = 1.0;     // bar abs
    Phase phase = Phase::Liquid;

    Stream() = default;
    Stream(FlowMap f, double t, double p, Phase ph)
        : flows(std::move(f)), temperature(t), pressure(p), phase(ph) {}

    double flow(std::string_view component) const {
        auto it = flows.find(component);
        return it == flows.end() ? 0.0 : it->second;
    }

    double total_flow() const {
        double sum = 0.0;
        for (const auto& [name, n] : flows) sum += n;
        return sum;
    }

    StreamState state() const { return {temperature, pressure, phase}; }

    void set_state(const StreamState& s) {
        temperature = s.temperature;
        pressure = s.pressure;
        phase = s.phase;
    }

    /// Throws NegativeFlow / InvalidSpec when the stream breaks its invariants.
    void check() const {
        for (const auto& [name, n] : flows) {
            if (!(n >= 0.0)) {
                throw Error(ErrorCode::NegativeFlow,
                            "component '" + name + "' has flow " + std::to_string(n) + " kmol/h");
            }
        }
        if (!(pressure > 0.0)) {
            throw Error(ErrorCode::InvalidSpec, "stream pressure must be positive");
        }
    }

    friend bool operator==(const Stream&, const Stream&) = default;
};

inline Stream scaled(const Stream& s, double factor) {
    Stream out = s;
    for (auto& [name, n] : out.flows) n *= factor;
    return out;
}

} // namespace papsim
