#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "papsim/error.hpp"
#include "papsim/props.hpp"
#include "papsim/stream.hpp"
#include "papsim/units.hpp"

// Single-pass unit operations. Every function here is pure.

namespace papsim {

/// One stoichiometric reaction with a fixed fractional conversion of its key reactant.
struct Reaction {
    std::string name;
    FlowMap stoich; // signed coefficients, reactants negative
    std::string key_reactant;
    double conversion = 0.0;

    /// Relative tolerance for the molar-mass balance check.
    static constexpr double mass_balance_tolerance = 1e-3;

    /// Throws InvalidReaction / UnknownComponent if the reaction is malformed.
    void check(const ComponentRegistry& registry) const {
        double reactant_mass = 0.0;
        double net_mass = 0.0;
        for (const auto& [comp, nu] : stoich) {
            const double m = registry.get(comp).molar_mass;
            net_mass += nu * m;
            if (nu < 0.0) reactant_mass -= nu * m;
        }
        auto key = stoich.find(key_reactant);
        if (key == stoich.end() || !(key->second < 0.0)) {
            throw Error(ErrorCode::InvalidReaction,
                        "reaction '" + name + "': key reactant '" + key_reactant +
                            "' must have a negative coefficient");
        }
        if (!(conversion >= 0.0 && conversion <= 1.0)) {
            throw Error(ErrorCode::InvalidReaction,
                        "reaction '" + name + "': conversion outside [0, 1]");
        }
        if (std::abs(net_mass) > mass_balance_tolerance * reactant_mass) {
            throw Error(ErrorCode::InvalidReaction,
                        "reaction '" + name + "' does not balance mass (net " +
                            std::to_string(net_mass) + " kg/kmol)");
        }
    }
};

struct ReactorSpec {
    std::vector<Reaction> reactions;
    StreamState outlet{85.0, 4.0, Phase::Mixed};

    void check(const ComponentRegistry& registry) const {
        FlowMap used; // total conversion per key reactant
        for (const auto& r : reactions) {
            r.check(registry);
            used[r.key_reactant] += r.conversion;
        }
        for (const auto& [key, x] : used) {
            if (x > 1.0 + 1e-12) {
                throw Error(ErrorCode::InvalidReaction,
                            "conversions of '" + key + "' sum to more than 1");
            }
        }
    }
};

struct CompressorSpec {
    double p_out = 1.0;           // bar
    double gamma = 1.4;           // Cp/Cv
    double eta_isentropic = 0.66; // fraction

    void check() const {
        if (!(p_out > 0.0)) throw Error(ErrorCode::InvalidSpec, "compressor p_out must be positive");
        if (!(gamma > 1.0)) throw Error(ErrorCode::InvalidSpec, "compressor gamma must exceed 1");
        if (!(eta_isentropic > 0.0 && eta_isentropic <= 1.0)) {
            throw Error(ErrorCode::InvalidSpec, "compressor efficiency must lie in (0, 1]");
        }
    }
};

struct SplitResult {
    Stream kept;
    Stream rejected;
};

struct SeparatorResult {
    Stream top;
    Stream bottom;
};

struct ThermalResult {
    Stream outlet;
    double duty = 0.0; // cal/s
};

struct CompressorResult {
    Stream outlet;
    double power_kw = 0.0;
};

/// Adiabatic mixing with constant Cp. Outlet pressure is the lowest inlet pressure.
inline Stream mix(std::span<const Stream> inlets, const ComponentRegistry& registry) {
    if (inlets.empty()) throw Error(ErrorCode::EmptyInletList, "mixer needs at least one inlet");
    if (inlets.size() == 1) return inlets.front();

    Stream out;
    out.pressure = inlets.front().pressure;
    out.phase = inlets.front().phase;
    double cp_sum = 0.0;
    double cpt_sum = 0.0;
    double t_mean = 0.0;
    for (const auto& s : inlets) {
        for (const auto& [name, n] : s.flows) out.flows[name] += n;
        const double cp = heat_capacity_rate(s, registry);
        cp_sum += cp;
        cpt_sum += cp * s.temperature;
        t_mean += s.temperature;
        out.pressure = std::min(out.pressure, s.pressure);
        if (s.phase != out.phase) out.phase = Phase::Mixed;
    }
    // All-empty inlets carry no enthalpy; fall back to the plain average.
    out.temperature = cp_sum > 0.0 ? cpt_sum / cp_sum : t_mean / static_cast<double>(inlets.size());
    return out;
}

inline Stream mix(std::initializer_list<Stream> inlets, const ComponentRegistry& registry) {
    return mix(std::span<const Stream>(inlets.begin(), inlets.size()), registry);
}

/// Splits every component by the same fraction `phi` into `kept`.
namespace detail {

/// Splits `total` into (fraction * total, remainder) so the two parts add back to `total`
/// exactly: the larger part is always formed by subtraction, which is exact (Sterbenz).
inline std::pair<double, double> share(double total, double fraction) {
    if (fraction >= 0.5) {
        const double part = fraction * total;
        return {part, total - part};
    }
    const double rest = (1.0 - fraction) * total;
    return {total - rest, rest};
}

} // namespace detail

inline SplitResult split_stream(const Stream& inlet, double phi) {
    if (!(phi >= 0.0 && phi <= 1.0)) {
        throw Error(ErrorCode::PhiOutOfRange, "split fraction " + std::to_string(phi) + " outside [0, 1]");
    }
    SplitResult r{inlet, inlet};
    for (auto& [name, n] : r.kept.flows) {
        const auto [kept, rejected] = detail::share(inlet.flow(name), phi);
        n = kept;
        r.rejected.flows[name] = rejected;
    }
    return r;
}

/// Ideal separator: each component sends a fixed fraction overhead.
/// Components missing from `to_top` go entirely to the bottom.
inline SeparatorResult split_components(const Stream& inlet, const FlowMap& to_top,
                                        const StreamState& top_state,
                                        const StreamState& bottom_state) {
    for (const auto& [name, f] : to_top) {
        if (!(f >= 0.0 && f <= 1.0)) {
            throw Error(ErrorCode::FractionOutOfRange,
                        "fraction to top for '" + name + "' is " + std::to_string(f));
        }
    }
    SeparatorResult r;
    for (const auto& [name, n] : inlet.flows) {
        auto it = to_top.find(name);
        const double f = it == to_top.end() ? 0.0 : it->second;
        const auto [top, bottom] = detail::share(n, f);
        r.top.flows[name] = top;
        r.bottom.flows[name] = bottom;
    }
    r.top.set_state(top_state);
    r.bottom.set_state(bottom_state);
    return r;
}

struct ConversionSplit {
    double desired = 0.0;
    double undesired = 0.0;
};

/// Per-reaction conversions of a shared key reactant from overall conversion and selectivity.
inline ConversionSplit conversion_split(double x_overall, double selectivity) {
    if (!(x_overall >= 0.0 && x_overall <= 1.0) || !(selectivity >= 0.0 && selectivity <= 1.0)) {
        throw Error(ErrorCode::InvalidSpec, "conversion and selectivity must lie in [0, 1]");
    }
    const double desired = x_overall * selectivity;
    return {desired, x_overall - desired};
}

/// Stoichiometric reactor. Extents are taken against the feed flow of each key reactant.
inline Stream react(const Stream& feed, const ReactorSpec& spec, const ComponentRegistry& registry) {
    Stream out = feed;
    for (const auto& r : spec.reactions) {
        const double extent = r.conversion * feed.flow(r.key_reactant);
        for (const auto& [name, nu] : r.stoich) {
            registry.get(name);
            out.flows[name] += nu * extent;
        }
    }
    const double scale = std::max(1.0, feed.total_flow());
    for (auto& [name, n] : out.flows) {
        if (n < 0.0) {
            if (n > -1e-12 * scale) {
                n = 0.0;
                continue;
            }
            throw Error(ErrorCode::NegativeFlow,
                        "reactor outlet '" + name + "' would be " + std::to_string(n) +
                            " kmol/h (insufficient co-reactant)");
        }
    }
    out.set_state(spec.outlet);
    return out;
}

/// Ideal-gas adiabatic compression with an isentropic efficiency.
inline CompressorResult compress(const Stream& inlet, const CompressorSpec& spec,
                                 const ComponentRegistry& registry) {
    spec.check();
    if (spec.p_out < inlet.pressure) {
        throw Error(ErrorCode::PressureDecrease, "compressor outlet pressure below inlet pressure");
    }
    CompressorResult r{inlet, 0.0};
    r.outlet.pressure = spec.p_out;
    if (spec.p_out == inlet.pressure) return r;

    const double t1 = units::to_kelvin(inlet.temperature);
    const double exponent = (spec.gamma - 1.0) / spec.gamma;
    const double t2s = t1 * std::pow(spec.p_out / inlet.pressure, exponent);
    const double rise = (t2s - t1) / spec.eta_isentropic;
    r.outlet.temperature = inlet.temperature + rise;
    r.power_kw = units::cal_per_s_to_kw(heat_capacity_rate(inlet, registry) * rise);
    return r;
}

/// Liquid pump, isothermal.
inline Stream pump(const Stream& inlet, double p_out) {
    if (p_out < inlet.pressure) {
        throw Error(ErrorCode::PressureDecrease, "pump outlet pressure below inlet pressure");
    }
    Stream out = inlet;
    out.pressure = p_out;
    return out;
}

/// Heater / cooler to a set outlet state.
inline ThermalResult set_temperature(const Stream& inlet, const StreamState& outlet_state,
                                     const ComponentRegistry& registry) {
    ThermalResult r{inlet, sensible_duty(inlet, outlet_state.temperature, registry)};
    r.outlet.set_state(outlet_state);
    return r;
}

} // namespace papsim
