#pragma once

#include <numbers>

#include "papsim/error.hpp"
#include "papsim/units.hpp"

// Thin-walled cylindrical pressure vessel sizing.
//
// Pressure and design stress are handled in the same unit (bar), so the
// thickness formula is unit-free; stresses are reported in MN/m^2.

namespace papsim::vessel {

struct VesselSpec {
    double d_inner = 0.610;          // m
    double height_tangent = 3.048;   // m, tangent to tangent
    double p_design = 5.710;         // bar abs
    double f_design_stress = 344.7;  // bar (5000 psi)
    double joint_efficiency = 1.0;   // (0, 1]
    double rho_material = 7800.0;    // kg/m^3, carbon steel plate
    double c_v = 1.08;               // allowance for manholes, supports, nozzles
    double g = 9.81;                 // m/s^2

    void check() const {
        if (!(d_inner > 0.0) || !(height_tangent > 0.0) || !(p_design > 0.0) ||
            !(f_design_stress > 0.0) || !(rho_material > 0.0) || !(c_v > 0.0) || !(g > 0.0)) {
            throw Error(ErrorCode::InvalidSpec, "vessel parameters must all be positive");
        }
        if (!(joint_efficiency > 0.0 && joint_efficiency <= 1.0)) {
            throw Error(ErrorCode::InvalidSpec, "joint efficiency must lie in (0, 1]");
        }
    }
};

struct Stresses {
    double circumferential = 0.0; // MN/m^2
    double axial = 0.0;           // MN/m^2
};

struct ShellWeight {
    double weight = 0.0;        // N
    double weight_stress = 0.0; // MN/m^2
    double d_mean = 0.0;        // m
};

struct VesselDesign {
    double thickness = 0.0;      // mm
    double f_circumferential = 0.0;
    double f_axial = 0.0;
    double shell_weight = 0.0;   // N
    double f_weight = 0.0;
    double d_mean = 0.0;         // m
    bool above_minimum = false;  // thickness exceeds min_thickness_mm
};

/// Plate thinner than this is not considered buildable for small vessels.
inline constexpr double min_thickness_mm = 3.0;

enum class DesignRule {
    GaugePlusAmbient, // design gauge pressure (already margined) + 1 bar
    TenPercentMargin, // 1.1 x the given pressure
};

inline double design_pressure(double p_gauge, DesignRule rule = DesignRule::GaugePlusAmbient) {
    if (p_gauge < 0.0) throw Error(ErrorCode::InvalidSpec, "pressure must be non-negative");
    switch (rule) {
    case DesignRule::TenPercentMargin: return 1.1 * p_gauge;
    case DesignRule::GaugePlusAmbient: break;
    }
    return p_gauge + 1.0;
}

/// t = P Di / (2 f J - P), returned in mm.
inline double wall_thickness(const VesselSpec& spec) {
    const double denom = 2.0 * spec.f_design_stress * spec.joint_efficiency - spec.p_design;
    if (!(denom > 0.0)) {
        throw Error(ErrorCode::StressLimitExceeded,
                    "design pressure exceeds twice the allowable stress times joint efficiency");
    }
    return spec.p_design * spec.d_inner / denom * 1000.0;
}

inline Stresses stresses(const VesselSpec& spec, double t_mm) {
    if (!(t_mm > 0.0)) throw Error(ErrorCode::InvalidSpec, "thickness must be positive");
    const double p = spec.p_design * units::mpa_per_bar;
    const double t = t_mm / 1000.0;
    const double fc = p * spec.d_inner / (2.0 * t);
    return {fc, fc / 2.0};
}

/// W = Cv pi rho Dm g (Hv + 0.8 Dm) t 1e-3 with t in mm; f_w = W / (pi (Di + t) t) with t in m.
inline ShellWeight shell_weight(const VesselSpec& spec, double t_mm) {
    if (!(t_mm > 0.0)) throw Error(ErrorCode::InvalidSpec, "thickness must be positive");
    const double t = t_mm * 1e-3;
    const double dm = spec.d_inner + t;
    const double w = spec.c_v * std::numbers::pi * spec.rho_material * dm * spec.g *
                     (spec.height_tangent + 0.8 * dm) * t_mm * 1e-3;
    const double fw = w / (std::numbers::pi * (spec.d_inner + t) * t) * 1e-6;
    return {w, fw, dm};
}

inline VesselDesign design(const VesselSpec& spec) {
    spec.check();
    VesselDesign d;
    d.thickness = wall_thickness(spec);
    const auto s = stresses(spec, d.thickness);
    const auto w = shell_weight(spec, d.thickness);
    d.f_circumferential = s.circumferential;
    d.f_axial = s.axial;
    d.shell_weight = w.weight;
    d.f_weight = w.weight_stress;
    d.d_mean = w.d_mean;
    d.above_minimum = d.thickness > min_thickness_mm;
    return d;
}

} // namespace papsim::vessel
