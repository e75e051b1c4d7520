#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "papsim/plant.hpp"
#include "papsim/run.hpp"
#include "papsim/vessel.hpp"

namespace fs = std::filesystem;

namespace {

// "pap_plant" resolves to "pap_plant.json" when the bare name does not exist.
fs::path resolve(const std::string& arg) {
    fs::path p(arg);
    if (!fs::exists(p) && p.extension().empty() && fs::exists(fs::path(arg + ".json"))) {
        return fs::path(arg + ".json");
    }
    return p;
}

void print_diagnostics(const std::vector<papsim::Diagnostic>& diags) {
    for (const auto& d : diags) {
        std::cerr << papsim::to_string(d.code) << " at " << (d.where.empty() ? "<root>" : d.where) << ": "
                  << d.message << "\n";
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"papsim: sequential-modular flowsheet and techno-economics for a p-aminophenol plant"};
    app.require_subcommand(1);

    // run
    auto* run_cmd = app.add_subcommand("run", "Solve the flowsheet, size vessels, run economics, write reports");
    std::string run_path;
    papsim::RunFlags flags;
    std::string report_dir = "report";
    std::optional<double> tol;
    std::optional<int> max_iter;
    std::string accel;
    std::optional<double> fx;
    run_cmd->add_option("plant", run_path, "Plant definition JSON")->required();
    run_cmd->add_option("--report-dir", report_dir, "Directory for artifacts")->capture_default_str();
    run_cmd->add_option("--tol", tol, "Tear flow tolerance [kmol/h]");
    run_cmd->add_option("--max-iter", max_iter, "Maximum tear iterations");
    run_cmd->add_option("--accel", accel, "Tear acceleration")->check(CLI::IsMember({"direct", "wegstein"}));
    run_cmd->add_option("--fx", fx, "INR per USD for every cost section");
    run_cmd->add_flag("--skip-flowsheet", flags.skip_flowsheet, "Economics and vessels only");
    run_cmd->add_flag("--skip-economics", flags.skip_economics, "Flowsheet and vessels only");

    // validate
    auto* validate_cmd = app.add_subcommand("validate", "Check a plant definition and list every problem");
    std::string validate_path;
    validate_cmd->add_option("plant", validate_path, "Plant definition JSON")->required();

    // economics
    auto* econ_cmd = app.add_subcommand("economics", "Print the techno-economic report for a plant definition");
    std::string econ_path;
    std::optional<double> econ_fx;
    econ_cmd->add_option("plant", econ_path, "Plant definition JSON")->required();
    econ_cmd->add_option("--fx", econ_fx, "INR per USD for every cost section");

    // vessel
    auto* vessel_cmd = app.add_subcommand("vessel", "Design a cylindrical pressure vessel shell");
    papsim::VesselEntry ve;
    ve.id = "vessel";
    std::optional<double> p_design, p_gauge;
    std::string rule = "gauge_plus_ambient";
    vessel_cmd->add_option("--id", ve.id, "Vessel tag")->capture_default_str();
    vessel_cmd->add_option("--d-inner", ve.spec.d_inner, "Inner diameter [m]")->required();
    vessel_cmd->add_option("--height", ve.spec.height_tangent, "Tangent-to-tangent height [m]")->required();
    auto* pd = vessel_cmd->add_option("--p-design", p_design, "Design pressure [bar abs]");
    auto* pg = vessel_cmd->add_option("--p-gauge", p_gauge, "Design gauge pressure [barg]");
    pd->excludes(pg);
    vessel_cmd->add_option("--rule", rule, "Gauge to design pressure rule")
        ->check(CLI::IsMember({"gauge_plus_ambient", "ten_percent"}))
        ->capture_default_str();
    vessel_cmd->add_option("--stress", ve.spec.f_design_stress, "Design stress [bar]")->capture_default_str();
    vessel_cmd->add_option("--joint", ve.spec.joint_efficiency, "Joint efficiency")->capture_default_str();
    vessel_cmd->add_option("--rho", ve.spec.rho_material, "Material density [kg/m3]")->capture_default_str();
    vessel_cmd->add_option("--cv", ve.spec.c_v, "Weight factor")->capture_default_str();
    vessel_cmd->add_option("--g", ve.spec.g, "Gravity [m/s2]")->capture_default_str();

    CLI11_PARSE(app, argc, argv);

    try {
        if (*validate_cmd) {
            const auto diags = papsim::validate_file(resolve(validate_path));
            if (diags.empty()) {
                std::cout << "ok: " << validate_path << "\n";
                return papsim::exit_ok;
            }
            print_diagnostics(diags);
            std::cerr << diags.size() << " problem(s)\n";
            return papsim::exit_invalid;
        }

        if (*run_cmd) {
            flags.report_dir = report_dir;
            flags.tolerance = tol;
            flags.max_iterations = max_iter;
            flags.fx = fx;
            if (accel == "direct") flags.acceleration = papsim::Acceleration::Direct;
            if (accel == "wegstein") flags.acceleration = papsim::Acceleration::Wegstein;

            std::vector<papsim::Diagnostic> diags;
            const auto outcome = papsim::run(resolve(run_path), flags, &diags);
            if (outcome.exit_code == papsim::exit_invalid) {
                print_diagnostics(diags);
                return outcome.exit_code;
            }
            if (const auto& sol = outcome.artifacts.solution) {
                std::cout << (sol->converged() ? "converged" : "NOT converged") << " after " << sol->iterations
                          << " iteration(s), final residual " << sol->residual_history.back() << " kmol/h\n";
            }
            std::cout << "artifacts written to " << flags.report_dir.string() << "\n";
            return outcome.exit_code;
        }

        if (*econ_cmd) {
            const auto doc = papsim::load_json(resolve(econ_path));
            if (auto diags = papsim::validate(doc); !diags.empty()) {
                print_diagnostics(diags);
                return papsim::exit_invalid;
            }
            papsim::RunFlags f;
            f.skip_flowsheet = true;
            f.fx = econ_fx;
            const auto outcome = papsim::execute(papsim::parse_plant(doc), f);
            const auto it = outcome.artifacts.files.find("economics.txt");
            if (it == outcome.artifacts.files.end()) {
                std::cerr << "plant definition has no economics section\n";
                return papsim::exit_invalid;
            }
            std::cout << it->second;
            return papsim::exit_ok;
        }

        if (*vessel_cmd) {
            if (rule == "ten_percent") ve.rule = papsim::vessel::DesignRule::TenPercentMargin;
            if (p_gauge) {
                ve.p_design_gauge = *p_gauge;
                ve.spec.p_design = papsim::vessel::design_pressure(*p_gauge, ve.rule);
            } else if (p_design) {
                ve.spec.p_design = *p_design;
            } else {
                std::cerr << "one of --p-design or --p-gauge is required\n";
                return papsim::exit_invalid;
            }
            const papsim::VesselReport report{ve.id, ve, papsim::vessel::design(ve.spec)};
            std::cout << papsim::render_vessel(report);
            return papsim::exit_ok;
        }
    } catch (const papsim::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return papsim::exit_invalid;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return papsim::exit_invalid;
    }
    return papsim::exit_ok;
}
