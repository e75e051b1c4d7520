#pragma once

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "papsim/econ.hpp"
#include "papsim/plant.hpp"
#include "papsim/solver.hpp"
#include "papsim/vessel.hpp"

// Run orchestration and artifact emission. All text output uses fixed decimal
// formatting and map-ordered iteration, so repeated runs are byte-identical.

namespace papsim {

inline std::string fixed(double v, int decimals) {
    if (v == 0.0 || std::abs(v) < 0.5 * std::pow(10.0, -decimals)) v = 0.0; // no "-0.000"
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
    return buf;
}

struct RunFlags {
    std::optional<double> tolerance;
    std::optional<int> max_iterations;
    std::optional<Acceleration> acceleration;
    std::optional<double> fx;
    std::filesystem::path report_dir = "report";
    bool skip_flowsheet = false;
    bool skip_economics = false;
};

struct CrossCheckResult {
    CrossCheck check;
    double flowsheet_kg_yr = 0.0;
    double deviation = 0.0; // relative, (flowsheet - stated) / stated
};

struct VesselReport {
    std::string id;
    VesselEntry entry;
    vessel::VesselDesign design;
};

struct RunArtifacts {
    std::optional<Flowsheet> flowsheet;
    std::optional<SolveResult> solution;
    std::optional<econ::EconomicsReport> economics;
    std::vector<VesselReport> vessels;
    std::vector<CrossCheckResult> cross_checks;

    // Rendered files, name -> contents.
    std::map<std::string, std::string> files;
};

struct RunOutcome {
    int exit_code = 0;
    RunArtifacts artifacts;
};

inline constexpr int exit_ok = 0;
inline constexpr int exit_invalid = 1;
inline constexpr int exit_not_converged = 2;

// ---- renderers -------------------------------------------------------------

inline std::string render_stream_table(const Flowsheet& fs, const SolveResult& sol,
                                       const ComponentRegistry& reg) {
    std::string out = "stream,phase,T_C,P_bar,mass_kg_h,total_kmol_h";
    for (const auto& c : reg.components()) out += "," + c.name;
    out += "\n";
    for (const auto& id : fs.stream_ids()) {
        const Stream& s = sol.streams.at(id);
        out += id + "," + std::string(to_string(s.phase)) + "," + fixed(s.temperature, 3) + "," +
               fixed(s.pressure, 3) + "," + fixed(stream_mass_flow(s, reg), 3) + "," +
               fixed(s.total_flow(), 3);
        for (const auto& c : reg.components()) out += "," + fixed(s.flow(c.name), 3);
        out += "\n";
    }
    return out;
}

inline std::string render_convergence(const SolveResult& sol) {
    std::string out = "iteration,max_flow_residual_kmol_h,max_temp_residual_C\n";
    char buf[96];
    for (std::size_t i = 0; i < sol.residual_history.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%zu,%.6e,%.6e\n", i + 1, sol.residual_history[i],
                      sol.temp_residual_history[i]);
        out += buf;
    }
    return out;
}

inline std::string render_cash_flow(const std::vector<econ::CashFlowRow>& rows) {
    std::string out = "year,gross,depreciation,taxable,taxes_paid,cash_flow,cumulative\n";
    for (const auto& r : rows) {
        out += std::to_string(r.year) + "," + fixed(r.gross, 2) + "," + fixed(r.depreciation, 2) + "," +
               fixed(r.taxable, 2) + "," + fixed(r.taxes_paid, 2) + "," + fixed(r.cash_flow, 2) + "," +
               fixed(r.cumulative, 2) + "\n";
    }
    return out;
}

inline std::string render_vessel(const VesselReport& v) {
    const auto& s = v.entry.spec;
    const auto& d = v.design;
    std::string out;
    out += "Pressure vessel design: " + v.id + "\n";
    out += "==============================\n";
    out += "Inner diameter            " + fixed(s.d_inner, 3) + " m\n";
    out += "Tangent-to-tangent height " + fixed(s.height_tangent, 3) + " m\n";
    if (v.entry.p_design_gauge) {
        out += "Design gauge pressure     " + fixed(*v.entry.p_design_gauge, 3) + " barg (" +
               (v.entry.rule == vessel::DesignRule::GaugePlusAmbient ? "gauge + 1 bar" : "x 1.1") + ")\n";
    }
    out += "Design pressure           " + fixed(s.p_design, 3) + " bar\n";
    out += "Design stress             " + fixed(s.f_design_stress, 1) + " bar\n";
    out += "Joint efficiency          " + fixed(s.joint_efficiency, 2) + "\n";
    out += "Material density          " + fixed(s.rho_material, 0) + " kg/m3\n";
    out += "Weight factor Cv          " + fixed(s.c_v, 2) + "\n";
    out += "\n";
    out += "Wall thickness            " + fixed(d.thickness, 2) + " mm\n";
    out += "Mean diameter             " + fixed(d.d_mean, 5) + " m\n";
    out += "Circumferential stress    " + fixed(d.f_circumferential, 2) + " MN/m2\n";
    out += "Axial stress              " + fixed(d.f_axial, 2) + " MN/m2\n";
    out += "Shell weight              " + fixed(d.shell_weight, 0) + " N\n";
    out += "Stress due to weight      " + fixed(d.f_weight, 3) + " MN/m2\n";
    out += "Above " + fixed(vessel::min_thickness_mm, 0) + " mm minimum        " +
           (d.above_minimum ? "yes" : "NO") + "\n";
    return out;
}

inline std::string render_economics(const econ::EconomicsInput& in, const econ::EconomicsReport& r,
                                    const std::vector<CrossCheckResult>& checks) {
    std::string out;
    auto line = [&](const std::string& label, const std::string& value) {
        std::string l = label;
        if (l.size() < 40) l.resize(40, ' ');
        out += l + value + "\n";
    };
    out += "Techno-economic summary (INR crore unless noted)\n";
    out += "================================================\n";
    if (r.capacity_kg_h > 0.0) {
        line("Capacity", fixed(r.capacity_kg_h, 2) + " kg/h (" + fixed(r.capacity_kmol_h, 2) + " kmol/h)");
    }
    line("Operating hours per year", fixed(in.hours_per_year(), 0));
    line("FX rate (opex)", fixed(in.fx_rate, 2) + " INR/USD");
    line("FX rate (equipment)", fixed(in.equipment_fx(), 2) + " INR/USD");
    out += "\nCapital\n";
    line("  Purchased equipment", fixed(r.equipment.equip, 2));
    line("  Installed cost", fixed(r.equipment.installed, 2));
    line("  Equipment + installation", fixed(r.equipment.combined(), 2));
    line("  Equipment utility cost per year", fixed(r.equipment.utility_per_year, 2));
    line("  Direct cost", fixed(r.fixed.direct, 2));
    line("  Indirect (salaries, per year)", fixed(r.fixed.indirect_annual, 2));
    line("  Total fixed cost", fixed(r.fixed.total, 2));
    out += "\nOperating cost per year\n";
    line("  Raw material and catalyst", fixed(r.materials, 2));
    line("  Utilities", fixed(r.utilities, 2));
    for (const auto& o : in.other_opex_items) line("  " + o.name, fixed(o.crore, 2));
    line("  Itemized total", fixed(r.opex_itemized, 2));
    if (in.operating_cost_stated) line("  Stated operating cost", fixed(*in.operating_cost_stated, 2));
    out += "\nRevenue per year\n";
    for (const auto& p : in.products) {
        line("  " + p.name, fixed(units::inr_to_crore(p.quantity_kg_yr * p.price_inr_kg), 2));
    }
    line("  Total", fixed(r.revenue, 2));
    out += "\nProfitability\n";
    line("  Gross annual (input)", fixed(in.gross_annual, 2));
    line("  Tax rate / lag", fixed(100.0 * in.tax_rate, 1) + "% / " + std::to_string(in.tax_lag_years) + " yr");
    line("  Cumulative cash at horizon", fixed(r.cumulative_end, 2));
    if (r.payback) {
        line("  Payback (outlay at year 1 axis)", fixed(r.payback->on_chart, 2) + " yr");
        line("  Payback (from outlay)", fixed(r.payback->from_start, 2) + " yr");
    } else {
        line("  Payback", "never");
    }
    if (in.total_investment > 0.0) {
        line("  Total investment", fixed(in.total_investment, 2));
        line("  Net income (cumulative + investment)", fixed(r.net_income, 2));
        line("  ROI", fixed(r.roi_percent, 2) + " %");
        if (r.roi_stated_percent) {
            line("  ROI on stated net income " + fixed(*in.net_income_stated, 2), fixed(*r.roi_stated_percent, 2) + " %");
        }
    }
    if (in.loan.principal > 0.0) {
        out += "\nBank loan\n";
        line("  Principal", fixed(in.loan.principal, 2));
        line("  Rate / tenure", fixed(100.0 * in.loan.annual_rate, 2) + "% / " + std::to_string(in.loan.tenure_years) + " yr");
        line("  EMI (monthly)", fixed(r.loan.emi, 2));
        line("  Yearly payment", fixed(r.loan.yearly_payment, 2));
        line("  Total interest", fixed(r.loan.total_interest, 2));
        line("  Total repaid", fixed(in.loan.principal + r.loan.total_interest, 2));
    }
    if (!checks.empty()) {
        out += "\nFlowsheet cross-check (kg/yr)\n";
        for (const auto& c : checks) {
            line("  " + c.check.label, "stated " + fixed(c.check.stated_kg_yr, 1) + ", flowsheet " +
                                           fixed(c.flowsheet_kg_yr, 1) + ", deviation " +
                                           fixed(100.0 * c.deviation, 2) + " %");
        }
    }
    return out;
}

inline std::string render_summary(const PlantDefinition& def, const RunArtifacts& a) {
    nlohmann::ordered_json j;
    j["plant"] = def.name;
    if (a.solution) {
        j["converged"] = a.solution->converged();
        j["iterations"] = a.solution->iterations;
        if (def.product) {
            const Stream& s = a.solution->streams.at(def.product->stream);
            const double n = s.flow(def.product->component);
            const double total = s.total_flow();
            j["product_stream"] = def.product->stream;
            j["product_kmol_h"] = std::stod(fixed(n, 3));
            j["product_purity"] = std::stod(fixed(total > 0.0 ? n / total : 0.0, 5));
        }
    }
    if (a.economics) {
        const auto& e = *a.economics;
        j["revenue_crore"] = std::stod(fixed(e.revenue, 2));
        j["materials_crore"] = std::stod(fixed(e.materials, 2));
        j["utilities_crore"] = std::stod(fixed(e.utilities, 2));
        j["cumulative_cash_crore"] = std::stod(fixed(e.cumulative_end, 2));
        if (e.payback) j["payback_years"] = std::stod(fixed(e.payback->on_chart, 3));
        j["roi_percent"] = std::stod(fixed(e.roi_percent, 2));
        j["emi_crore"] = std::stod(fixed(e.loan.emi, 3));
    }
    return j.dump(2) + "\n";
}

// ---- orchestration ---------------------------------------------------------

/// Applies command-line overrides to a parsed definition.
inline void apply_flags(PlantDefinition& def, const RunFlags& flags) {
    if (flags.tolerance) def.solve.tolerance = *flags.tolerance;
    if (flags.max_iterations) def.solve.max_iterations = *flags.max_iterations;
    if (flags.acceleration) def.solve.acceleration = *flags.acceleration;
    if (flags.fx && def.economics) {
        def.economics->fx_rate = *flags.fx;
        def.economics->fx_equipment.reset();
    }
    def.solve.check();
}

/// Solves, sizes and costs a definition; renders but does not write artifacts.
inline RunOutcome execute(PlantDefinition def, const RunFlags& flags) {
    apply_flags(def, flags);
    RunOutcome out;
    auto& a = out.artifacts;

    if (!flags.skip_flowsheet) {
        a.flowsheet = build_flowsheet(def.flowsheet);
        a.solution = solve(*a.flowsheet, def.solve, def.registry);
        a.files["streams.csv"] = render_stream_table(*a.flowsheet, *a.solution, def.registry);
        a.files["convergence.csv"] = render_convergence(*a.solution);
        if (!a.solution->converged()) out.exit_code = exit_not_converged;
    }

    for (const auto& v : def.vessels) {
        VesselReport r{v.id, v, vessel::design(v.spec)};
        a.files["vessel_" + v.id + ".txt"] = render_vessel(r);
        a.vessels.push_back(std::move(r));
    }

    if (!flags.skip_economics && def.economics) {
        a.economics = econ::evaluate(*def.economics);
        if (a.solution) {
            const double hours = def.economics->hours_per_year();
            for (const auto& c : def.cross_checks) {
                const Stream& s = a.solution->streams.at(c.stream);
                const double kg = s.flow(c.component) * def.registry.get(c.component).molar_mass * hours;
                const double dev = c.stated_kg_yr > 0.0 ? (kg - c.stated_kg_yr) / c.stated_kg_yr : 0.0;
                a.cross_checks.push_back({c, kg, dev});
            }
        }
        a.files["economics.txt"] = render_economics(*def.economics, *a.economics, a.cross_checks);
        a.files["cashflow.csv"] = render_cash_flow(a.economics->cash_flow);
        std::string loan = "month,payment,interest,principal,balance\n";
        for (const auto& r : a.economics->loan.rows) {
            loan += std::to_string(r.month) + "," + fixed(r.payment, 4) + "," + fixed(r.interest, 4) + "," +
                    fixed(r.principal_component, 4) + "," + fixed(r.balance, 4) + "\n";
        }
        if (!a.economics->loan.rows.empty()) a.files["loan.csv"] = loan;
    }

    a.files["summary.json"] = render_summary(def, a);
    return out;
}

/// Writes every rendered artifact under `dir`, creating it if needed.
inline void write_artifacts(const RunArtifacts& a, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    for (const auto& [name, body] : a.files) {
        std::ofstream f(dir / name, std::ios::binary | std::ios::trunc);
        if (!f) throw Error(ErrorCode::FileUnreadable, "cannot write '" + (dir / name).string() + "'");
        f << body;
    }
}

/// Full `run` subcommand: validate, execute, write. Returns the process exit code.
inline RunOutcome run(const std::filesystem::path& path, const RunFlags& flags,
                      std::vector<Diagnostic>* diagnostics = nullptr) {
    const auto doc = load_json(path);
    auto diags = validate(doc);
    if (!diags.empty()) {
        if (diagnostics) *diagnostics = std::move(diags);
        return {exit_invalid, {}};
    }
    auto outcome = execute(parse_plant(doc), flags);
    write_artifacts(outcome.artifacts, flags.report_dir);
    return outcome;
}

} // namespace papsim
