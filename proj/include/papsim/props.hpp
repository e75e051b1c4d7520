#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "papsim/error.hpp"
#include "papsim/stream.hpp"
#include "papsim/units.hpp"

namespace papsim {

/// Pure-component constants. Heat capacity is molar and temperature independent.
struct Component {
    std::string name;
    double molar_mass = 0.0; // kg/kmol
    double cp_molar = 0.0;   // cal/(mol K)
    double bp_normal = 0.0;  // degC
    double density = 0.0;    // g/cm^3
};

/// Ordered set of components with lookup by name. Immutable once built.
class ComponentRegistry {
public:
    ComponentRegistry() = default;

    explicit ComponentRegistry(std::vector<Component> components) {
        for (auto& c : components) add(std::move(c));
    }

    void add(Component c) {
        if (c.name.empty()) throw Error(ErrorCode::InvalidComponent, "component name is empty");
        if (!(c.molar_mass > 0.0) || !(c.cp_molar > 0.0)) {
            throw Error(ErrorCode::InvalidComponent,
                        "component '" + c.name + "' needs positive molar mass and heat capacity");
        }
        if (contains(c.name)) {
            throw Error(ErrorCode::DuplicateComponent, "component '" + c.name + "' defined twice");
        }
        components_.push_back(std::move(c));
    }

    bool contains(std::string_view name) const { return find(name) != nullptr; }

    const Component& get(std::string_view name) const {
        if (const auto* c = find(name)) return *c;
        throw Error(ErrorCode::UnknownComponent, "no component named '" + std::string(name) + "'");
    }

    const std::vector<Component>& components() const { return components_; }
    std::size_t size() const { return components_.size(); }

private:
    const Component* find(std::string_view name) const {
        for (const auto& c : components_)
            if (c.name == name) return &c;
        return nullptr;
    }

    std::vector<Component> components_;
};

inline const Component& get_component(const ComponentRegistry& registry, std::string_view name) {
    return registry.get(name);
}

/// Sum of n_i * Cp_i in cal/(s K).
inline double heat_capacity_rate(const Stream& s, const ComponentRegistry& registry) {
    double sum = 0.0;
    for (const auto& [name, n] : s.flows) sum += n * registry.get(name).cp_molar;
    return units::kmolh_cal_to_cal_s(sum);
}

/// Heat needed to bring `s` to `t_target` with constant Cp [cal/s]. Negative when cooling.
inline double sensible_duty(const Stream& s, double t_target, const ComponentRegistry& registry) {
    return heat_capacity_rate(s, registry) * (t_target - s.temperature);
}

/// Mass flow [kg/h].
inline double stream_mass_flow(const Stream& s, const ComponentRegistry& registry) {
    double sum = 0.0;
    for (const auto& [name, n] : s.flows) sum += n * registry.get(name).molar_mass;
    return sum;
}

} // namespace papsim
