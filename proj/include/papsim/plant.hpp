#pragma once

#include <filesystem>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "papsim/blocks.hpp"
#include "papsim/econ.hpp"
#include "papsim/error.hpp"
#include "papsim/props.hpp"
#include "papsim/solver.hpp"
#include "papsim/vessel.hpp"

// Plant-definition documents (JSON, schema_version 1). See docs/plant_schema.md.

namespace papsim {

inline constexpr int plant_schema_version = 1;

struct VesselEntry {
    std::string id;
    vessel::VesselSpec spec;
    std::optional<double> p_design_gauge; // barg, when the design pressure was derived
    vessel::DesignRule rule = vessel::DesignRule::GaugePlusAmbient;
};

/// Links an economics quantity to a flowsheet stream for the cross-check report.
struct CrossCheck {
    std::string label;
    std::string stream;
    std::string component;
    double stated_kg_yr = 0.0;
};

struct ProductRef {
    std::string stream;
    std::string component;
};

struct PlantDefinition {
    int schema_version = plant_schema_version;
    std::string name;
    ComponentRegistry registry;
    FlowsheetSpec flowsheet;
    SolveOptions solve;
    std::optional<ProductRef> product;
    std::vector<VesselEntry> vessels;
    std::optional<econ::EconomicsInput> economics;
    std::vector<CrossCheck> cross_checks;
};

/// Reads and parses a JSON file. Throws FileUnreadable or ParseError (with line/column).
inline nlohmann::json load_json(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::FileUnreadable, "cannot open '" + path.string() + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    const std::string text = buf.str();
    try {
        return nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        std::size_t line = 1, col = 1;
        const std::size_t stop = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
        for (std::size_t i = 0; i < stop; ++i) {
            if (text[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
        throw Error(ErrorCode::ParseError, path.string() + ":" + std::to_string(line) + ":" +
                                               std::to_string(col) + ": " + e.what());
    }
}

namespace detail {

using nlohmann::json;

/// Collects diagnostics while reading; getters return defaults on failure.
class Reader {
public:
    std::vector<Diagnostic> diags;

    void fail(ErrorCode code, const std::string& where, const std::string& msg) {
        diags.push_back({code, where, msg});
    }

    const json* child(const json& obj, const char* key, const std::string& where, bool required) {
        if (!obj.is_object()) {
            fail(ErrorCode::InvalidSpec, where, "expected an object");
            return nullptr;
        }
        auto it = obj.find(key);
        if (it == obj.end()) {
            if (required) fail(ErrorCode::InvalidSpec, join(where, key), "missing required field");
            return nullptr;
        }
        return &*it;
    }

    double number(const json& obj, const char* key, const std::string& where,
                  std::optional<double> fallback = std::nullopt) {
        const json* v = child(obj, key, where, !fallback.has_value());
        if (!v) return fallback.value_or(0.0);
        if (!v->is_number()) {
            fail(ErrorCode::InvalidSpec, join(where, key), "expected a number");
            return fallback.value_or(0.0);
        }
        return v->get<double>();
    }

    std::optional<double> maybe_number(const json& obj, const char* key, const std::string& where) {
        if (!obj.is_object() || !obj.contains(key)) return std::nullopt;
        return number(obj, key, where);
    }

    int integer(const json& obj, const char* key, const std::string& where,
                std::optional<int> fallback = std::nullopt) {
        const json* v = child(obj, key, where, !fallback.has_value());
        if (!v) return fallback.value_or(0);
        if (!v->is_number_integer()) {
            fail(ErrorCode::InvalidSpec, join(where, key), "expected an integer");
            return fallback.value_or(0);
        }
        return v->get<int>();
    }

    std::string text(const json& obj, const char* key, const std::string& where,
                     std::optional<std::string> fallback = std::nullopt) {
        const json* v = child(obj, key, where, !fallback.has_value());
        if (!v) return fallback.value_or("");
        if (!v->is_string()) {
            fail(ErrorCode::InvalidSpec, join(where, key), "expected a string");
            return fallback.value_or("");
        }
        return v->get<std::string>();
    }

    const json& array(const json& obj, const char* key, const std::string& where, bool required) {
        static const json empty = json::array();
        const json* v = child(obj, key, where, required);
        if (!v) return empty;
        if (!v->is_array()) {
            fail(ErrorCode::InvalidSpec, join(where, key), "expected an array");
            return empty;
        }
        return *v;
    }

    std::vector<std::string> strings(const json& obj, const char* key, const std::string& where) {
        std::vector<std::string> out;
        const json& arr = array(obj, key, where, true);
        for (std::size_t i = 0; i < arr.size(); ++i) {
            if (arr[i].is_string()) out.push_back(arr[i].get<std::string>());
            else fail(ErrorCode::InvalidSpec, index(join(where, key), i), "expected a string");
        }
        return out;
    }

    FlowMap number_map(const json& obj, const char* key, const std::string& where, bool required) {
        FlowMap out;
        const json* v = child(obj, key, where, required);
        if (!v) return out;
        if (!v->is_object()) {
            fail(ErrorCode::InvalidSpec, join(where, key), "expected an object of numbers");
            return out;
        }
        for (const auto& [name, value] : v->items()) {
            if (!value.is_number()) {
                fail(ErrorCode::InvalidSpec, join(join(where, key), name.c_str()), "expected a number");
                continue;
            }
            out[name] = value.get<double>();
        }
        return out;
    }

    Phase phase(const json& obj, const char* key, const std::string& where, Phase fallback) {
        if (!obj.is_object() || !obj.contains(key)) return fallback;
        const auto s = text(obj, key, where);
        if (auto p = parse_phase(s)) return *p;
        fail(ErrorCode::InvalidSpec, join(where, key), "phase must be Liquid, Vapor or Mixed");
        return fallback;
    }

    StreamState state(const json& obj, const char* key, const std::string& where) {
        StreamState s;
        const json* v = child(obj, key, where, true);
        if (!v) return s;
        const std::string w = join(where, key);
        s.temperature = number(*v, "temperature", w);
        s.pressure = number(*v, "pressure", w);
        s.phase = phase(*v, "phase", w, Phase::Mixed);
        if (!(s.pressure > 0.0)) fail(ErrorCode::InvalidSpec, w + ".pressure", "pressure must be positive");
        return s;
    }

    static std::string join(const std::string& where, const char* key) {
        return where.empty() ? std::string(key) : where + "." + key;
    }
    static std::string index(const std::string& where, std::size_t i) {
        return where + "[" + std::to_string(i) + "]";
    }
};

inline void check_component(Reader& rd, const ComponentRegistry& reg, const std::string& name,
                            const std::string& where) {
    if (!reg.contains(name)) {
        rd.fail(ErrorCode::UnknownComponent, where, "unknown component '" + name + "'");
    }
}

inline void check_flows(Reader& rd, const ComponentRegistry& reg, const FlowMap& flows,
                        const std::string& where) {
    for (const auto& [name, n] : flows) {
        check_component(rd, reg, name, where + "." + name);
        if (!(n >= 0.0)) rd.fail(ErrorCode::NegativeFlow, where + "." + name, "flows must be non-negative");
    }
}

inline Stream read_stream(Reader& rd, const json& j, const std::string& where,
                          const ComponentRegistry& reg) {
    Stream s;
    s.flows = rd.number_map(j, "flows", where, true);
    check_flows(rd, reg, s.flows, where + ".flows");
    s.temperature = rd.number(j, "temperature", where);
    s.pressure = rd.number(j, "pressure", where);
    s.phase = rd.phase(j, "phase", where, Phase::Liquid);
    if (!(s.pressure > 0.0)) rd.fail(ErrorCode::InvalidSpec, where + ".pressure", "pressure must be positive");
    return s;
}

inline ReactorSpec read_reactor(Reader& rd, const json& p, const std::string& where,
                                const ComponentRegistry& reg) {
    ReactorSpec spec;
    spec.outlet = rd.state(p, "outlet", where);
    const json& rxns = rd.array(p, "reactions", where, true);
    const auto overall = rd.maybe_number(p, "overall_conversion", where);
    const auto selectivity = rd.maybe_number(p, "selectivity", where);
    if (overall.has_value() != selectivity.has_value()) {
        rd.fail(ErrorCode::InvalidSpec, where, "overall_conversion and selectivity go together");
    }
    const bool derived = overall && selectivity;
    if (derived && rxns.size() != 2) {
        rd.fail(ErrorCode::InvalidSpec, where + ".reactions",
                "overall_conversion/selectivity need exactly two reactions (desired, undesired)");
    }
    for (std::size_t i = 0; i < rxns.size(); ++i) {
        const std::string w = Reader::index(where + ".reactions", i);
        Reaction r;
        r.name = rd.text(rxns[i], "name", w, "r" + std::to_string(i + 1));
        r.stoich = rd.number_map(rxns[i], "stoich", w, true);
        r.key_reactant = rd.text(rxns[i], "key_reactant", w);
        r.conversion = derived ? 0.0 : rd.number(rxns[i], "conversion", w);
        bool known = true;
        for (const auto& [name, nu] : r.stoich) {
            if (!reg.contains(name)) {
                check_component(rd, reg, name, w + ".stoich." + name);
                known = false;
            }
        }
        if (known) {
            try {
                r.check(reg);
            } catch (const Error& e) {
                rd.fail(e.code(), w, e.what());
            }
        }
        spec.reactions.push_back(std::move(r));
    }
    if (derived && spec.reactions.size() == 2) {
        try {
            const auto split = conversion_split(*overall, *selectivity);
            spec.reactions[0].conversion = split.desired;
            spec.reactions[1].conversion = split.undesired;
        } catch (const Error& e) {
            rd.fail(e.code(), where, e.what());
        }
    }
    return spec;
}

inline std::optional<Block> read_block(Reader& rd, const json& j, const std::string& where,
                                       const ComponentRegistry& reg) {
    Block b;
    b.id = rd.text(j, "id", where);
    const std::string kind = rd.text(j, "kind", where);
    b.inlets = rd.strings(j, "inlets", where);
    b.outlets = rd.strings(j, "outlets", where);
    static const json no_params = json::object();
    const json* pp = rd.child(j, "params", where, false);
    const json& p = pp ? *pp : no_params;
    const std::string pw = where + ".params";

    if (j.contains("metadata") && j["metadata"].is_object()) {
        for (const auto& [k, v] : j["metadata"].items())
            if (v.is_number()) b.metadata[k] = v.get<double>();
    }

    if (kind == "mixer") {
        b.params = MixerParams{};
    } else if (kind == "splitter") {
        SplitterParams s{rd.number(p, "phi", pw)};
        if (!(s.phi >= 0.0 && s.phi <= 1.0)) rd.fail(ErrorCode::PhiOutOfRange, pw + ".phi", "phi outside [0, 1]");
        b.params = s;
    } else if (kind == "component_splitter") {
        SeparatorParams s;
        s.to_top = rd.number_map(p, "to_top", pw, true);
        for (const auto& [name, f] : s.to_top) {
            check_component(rd, reg, name, pw + ".to_top." + name);
            if (!(f >= 0.0 && f <= 1.0)) {
                rd.fail(ErrorCode::FractionOutOfRange, pw + ".to_top." + name, "fraction outside [0, 1]");
            }
        }
        s.top = rd.state(p, "top", pw);
        s.bottom = rd.state(p, "bottom", pw);
        b.params = s;
    } else if (kind == "reactor") {
        b.params = read_reactor(rd, p, pw, reg);
    } else if (kind == "compressor") {
        CompressorSpec c;
        c.p_out = rd.number(p, "p_out", pw);
        c.gamma = rd.number(p, "gamma", pw, 1.4);
        c.eta_isentropic = rd.number(p, "eta_isentropic", pw, 0.66);
        try {
            c.check();
        } catch (const Error& e) {
            rd.fail(e.code(), pw, e.what());
        }
        b.params = c;
    } else if (kind == "pump") {
        b.params = PumpParams{rd.number(p, "p_out", pw)};
    } else if (kind == "heater") {
        HeaterParams h;
        h.outlet = rd.state(p, "outlet", pw);
        b.params = h;
    } else {
        rd.fail(ErrorCode::InvalidSpec, where + ".kind", "unknown block kind '" + kind + "'");
        return std::nullopt;
    }
    return b;
}

inline void read_solve(Reader& rd, const json& j, SolveOptions& o) {
    const std::string w = "solve";
    o.tolerance = rd.number(j, "tolerance", w, o.tolerance);
    o.temp_tolerance = rd.number(j, "temp_tolerance", w, o.temp_tolerance);
    o.max_iterations = rd.integer(j, "max_iterations", w, o.max_iterations);
    const auto accel = rd.text(j, "acceleration", w, "wegstein");
    if (accel == "direct") o.acceleration = Acceleration::Direct;
    else if (accel == "wegstein") o.acceleration = Acceleration::Wegstein;
    else rd.fail(ErrorCode::InvalidSpec, w + ".acceleration", "expected 'direct' or 'wegstein'");
    if (j.contains("q_bounds")) {
        const auto& q = j["q_bounds"];
        if (q.is_array() && q.size() == 2 && q[0].is_number() && q[1].is_number()) {
            o.q_low = q[0].get<double>();
            o.q_high = q[1].get<double>();
        } else {
            rd.fail(ErrorCode::InvalidSpec, w + ".q_bounds", "expected [low, high]");
        }
    }
    try {
        o.check();
    } catch (const Error& e) {
        rd.fail(e.code(), w, e.what());
    }
}

inline VesselEntry read_vessel(Reader& rd, const json& j, const std::string& w) {
    VesselEntry v;
    v.id = rd.text(j, "id", w);
    auto& s = v.spec;
    s.d_inner = rd.number(j, "d_inner", w);
    s.height_tangent = rd.number(j, "height_tangent", w);
    const auto rule = rd.text(j, "rule", w, "gauge_plus_ambient");
    if (rule == "ten_percent") v.rule = vessel::DesignRule::TenPercentMargin;
    else if (rule != "gauge_plus_ambient") rd.fail(ErrorCode::InvalidSpec, w + ".rule", "unknown rule '" + rule + "'");
    if (j.is_object() && j.contains("p_design")) {
        s.p_design = rd.number(j, "p_design", w);
    } else {
        v.p_design_gauge = rd.number(j, "p_design_gauge", w);
        if (*v.p_design_gauge >= 0.0) s.p_design = vessel::design_pressure(*v.p_design_gauge, v.rule);
        else rd.fail(ErrorCode::InvalidSpec, w + ".p_design_gauge", "must be non-negative");
    }
    s.f_design_stress = rd.number(j, "f_design_stress", w, s.f_design_stress);
    s.joint_efficiency = rd.number(j, "joint_efficiency", w, s.joint_efficiency);
    s.rho_material = rd.number(j, "rho_material", w, s.rho_material);
    s.c_v = rd.number(j, "c_v", w, s.c_v);
    s.g = rd.number(j, "g", w, s.g);
    try {
        s.check();
    } catch (const Error& e) {
        rd.fail(e.code(), w, e.what());
    }
    return v;
}

inline void non_negative(Reader& rd, double value, const std::string& where) {
    if (!(value >= 0.0)) rd.fail(ErrorCode::InvalidSpec, where, "must be non-negative");
}

inline econ::EconomicsInput read_economics(Reader& rd, const json& j, std::vector<CrossCheck>& checks) {
    econ::EconomicsInput e;
    const std::string w = "economics";
    e.operating_days = rd.number(j, "operating_days", w);
    e.operating_hours = rd.number(j, "operating_hours", w);
    e.fx_rate = rd.number(j, "fx_rate", w, 75.0);
    e.fx_equipment = rd.maybe_number(j, "fx_equipment", w);
    e.capacity_tpa = rd.number(j, "capacity_tpa", w, 0.0);
    e.product_molar_mass = rd.number(j, "product_molar_mass", w, 0.0);
    if (!(e.operating_days > 0.0) || !(e.operating_hours > 0.0)) {
        rd.fail(ErrorCode::InvalidSpec, w, "operating_days and operating_hours must be positive");
    }
    non_negative(rd, e.fx_rate, w + ".fx_rate");

    auto each = [&](const char* key, auto&& fn) {
        const json& arr = rd.array(j, key, w, false);
        for (std::size_t i = 0; i < arr.size(); ++i) fn(arr[i], Reader::index(w + "." + key, i));
    };
    auto cross_check = [&](const json& item, const std::string& iw, const std::string& label, double kg) {
        if (!item.is_object() || !item.contains("check")) return;
        const json& c = item["check"];
        checks.push_back({label, rd.text(c, "stream", iw + ".check"), rd.text(c, "component", iw + ".check"), kg});
    };

    each("equipment", [&](const json& it, const std::string& iw) {
        econ::EquipmentItem x{rd.text(it, "name", iw), rd.number(it, "equip_cost_usd", iw),
                              rd.number(it, "installed_cost_usd", iw), rd.number(it, "utility_cost_usd_h", iw, 0.0)};
        non_negative(rd, x.equip_cost_usd, iw + ".equip_cost_usd");
        non_negative(rd, x.installed_cost_usd, iw + ".installed_cost_usd");
        non_negative(rd, x.utility_cost_usd_h, iw + ".utility_cost_usd_h");
        e.equipment_items.push_back(x);
    });
    each("direct_costs", [&](const json& it, const std::string& iw) {
        econ::CostItem x{rd.text(it, "name", iw), rd.number(it, "crore", iw)};
        non_negative(rd, x.crore, iw + ".crore");
        e.direct_cost_items.push_back(x);
    });
    each("manpower", [&](const json& it, const std::string& iw) {
        econ::ManpowerItem x{rd.text(it, "role", iw), rd.integer(it, "headcount", iw), rd.number(it, "salary_inr", iw)};
        if (x.headcount < 0) rd.fail(ErrorCode::InvalidSpec, iw + ".headcount", "must be non-negative");
        non_negative(rd, x.salary_inr, iw + ".salary_inr");
        e.manpower_items.push_back(x);
    });
    each("materials", [&](const json& it, const std::string& iw) {
        econ::MaterialItem x{rd.text(it, "name", iw), rd.number(it, "price_inr_kg", iw), rd.number(it, "quantity_kg_yr", iw)};
        non_negative(rd, x.price_inr_kg, iw + ".price_inr_kg");
        non_negative(rd, x.quantity_kg_yr, iw + ".quantity_kg_yr");
        cross_check(it, iw, x.name, x.quantity_kg_yr);
        e.material_items.push_back(x);
    });
    each("utilities", [&](const json& it, const std::string& iw) {
        econ::UtilityItem x{rd.text(it, "name", iw), rd.number(it, "cost_usd_h", iw)};
        non_negative(rd, x.cost_usd_h, iw + ".cost_usd_h");
        e.utility_items.push_back(x);
    });
    each("other_opex", [&](const json& it, const std::string& iw) {
        econ::CostItem x{rd.text(it, "name", iw), rd.number(it, "crore", iw)};
        non_negative(rd, x.crore, iw + ".crore");
        e.other_opex_items.push_back(x);
    });
    each("products", [&](const json& it, const std::string& iw) {
        econ::ProductItem x{rd.text(it, "name", iw), rd.number(it, "quantity_kg_yr", iw), rd.number(it, "price_inr_kg", iw)};
        non_negative(rd, x.quantity_kg_yr, iw + ".quantity_kg_yr");
        non_negative(rd, x.price_inr_kg, iw + ".price_inr_kg");
        cross_check(it, iw, x.name, x.quantity_kg_yr);
        e.products.push_back(x);
    });

    if (const json* p = rd.child(j, "profitability", w, true)) {
        const std::string pw = w + ".profitability";
        e.gross_annual = rd.number(*p, "gross_annual", pw);
        e.operating_cost_stated = rd.maybe_number(*p, "operating_cost_stated", pw);
        e.tax_rate = rd.number(*p, "tax_rate", pw);
        e.tax_lag_years = rd.integer(*p, "tax_lag_years", pw, 1);
        e.depreciation_base = rd.number(*p, "depreciation_base", pw);
        const json& pct = rd.array(*p, "depreciation_percents", pw, true);
        double sum = 0.0;
        for (std::size_t i = 0; i < pct.size(); ++i) {
            if (!pct[i].is_number()) {
                rd.fail(ErrorCode::InvalidSpec, Reader::index(pw + ".depreciation_percents", i), "expected a number");
                continue;
            }
            const double v = pct[i].get<double>();
            non_negative(rd, v, Reader::index(pw + ".depreciation_percents", i));
            e.depreciation_percents.push_back(v);
            sum += v;
        }
        if (sum > 1.0 + 1e-12) rd.fail(ErrorCode::InvalidSpec, pw + ".depreciation_percents", "sum exceeds 1");
        e.fixed_outlay = rd.number(*p, "fixed_outlay", pw);
        e.horizon_years = rd.integer(*p, "horizon_years", pw, 10);
        e.total_investment = rd.number(*p, "total_investment", pw, 0.0);
        e.net_income_stated = rd.maybe_number(*p, "net_income_stated", pw);
        if (!(e.tax_rate >= 0.0 && e.tax_rate <= 1.0)) rd.fail(ErrorCode::InvalidSpec, pw + ".tax_rate", "must lie in [0, 1]");
        if (e.tax_lag_years < 0) rd.fail(ErrorCode::InvalidSpec, pw + ".tax_lag_years", "must be non-negative");
        if (e.horizon_years < 1) rd.fail(ErrorCode::InvalidSpec, pw + ".horizon_years", "must be at least 1");
        non_negative(rd, e.total_investment, pw + ".total_investment");
    }
    if (const json* l = rd.child(j, "loan", w, false)) {
        const std::string lw = w + ".loan";
        e.loan.principal = rd.number(*l, "principal", lw);
        e.loan.annual_rate = rd.number(*l, "annual_rate", lw);
        e.loan.tenure_years = rd.integer(*l, "tenure_years", lw);
        non_negative(rd, e.loan.principal, lw + ".principal");
        non_negative(rd, e.loan.annual_rate, lw + ".annual_rate");
        if (e.loan.tenure_years < 1) rd.fail(ErrorCode::InvalidSpec, lw + ".tenure_years", "must be at least 1");
    }
    return e;
}

inline PlantDefinition read_plant(Reader& rd, const json& doc) {
    PlantDefinition def;
    if (!doc.is_object()) {
        rd.fail(ErrorCode::InvalidSpec, "", "plant definition must be a JSON object");
        return def;
    }
    def.schema_version = rd.integer(doc, "schema_version", "");
    if (doc.contains("schema_version") && def.schema_version != plant_schema_version) {
        rd.fail(ErrorCode::InvalidSpec, "schema_version",
                "unsupported schema version " + std::to_string(def.schema_version));
    }
    def.name = rd.text(doc, "name", "", "");

    const json& comps = rd.array(doc, "components", "", true);
    for (std::size_t i = 0; i < comps.size(); ++i) {
        const std::string w = Reader::index("components", i);
        Component c;
        c.name = rd.text(comps[i], "name", w);
        c.molar_mass = rd.number(comps[i], "molar_mass", w);
        c.cp_molar = rd.number(comps[i], "cp_molar", w);
        c.bp_normal = rd.number(comps[i], "bp_normal", w, 0.0);
        c.density = rd.number(comps[i], "density", w, 0.0);
        try {
            def.registry.add(std::move(c));
        } catch (const Error& e) {
            rd.fail(e.code(), w, e.what());
        }
    }

    const json& feeds = rd.array(doc, "feeds", "", true);
    for (std::size_t i = 0; i < feeds.size(); ++i) {
        const std::string w = Reader::index("feeds", i);
        const auto id = rd.text(feeds[i], "id", w);
        auto s = read_stream(rd, feeds[i], w, def.registry);
        if (!def.flowsheet.feeds.emplace(id, std::move(s)).second) {
            rd.fail(ErrorCode::DuplicateStreamProducer, w, "feed '" + id + "' defined twice");
        }
    }

    const json& blocks = rd.array(doc, "blocks", "", true);
    for (std::size_t i = 0; i < blocks.size(); ++i) {
        if (auto b = read_block(rd, blocks[i], Reader::index("blocks", i), def.registry)) {
            def.flowsheet.blocks.push_back(std::move(*b));
        }
    }

    const json& tears = rd.array(doc, "tears", "", false);
    for (std::size_t i = 0; i < tears.size(); ++i) {
        const std::string w = Reader::index("tears", i);
        TearSpec t;
        if (tears[i].is_string()) {
            t.stream = tears[i].get<std::string>();
        } else {
            t.stream = rd.text(tears[i], "stream", w);
            if (tears[i].is_object() && tears[i].contains("guess")) {
                t.guess = read_stream(rd, tears[i]["guess"], w + ".guess", def.registry);
            }
        }
        def.flowsheet.tears.push_back(std::move(t));
    }

    if (doc.contains("solve")) read_solve(rd, doc["solve"], def.solve);

    // Graph checks only make sense once every block was understood.
    const bool blocks_ok = def.flowsheet.blocks.size() == blocks.size();
    std::set<std::string> stream_ids;
    for (const auto& [id, s] : def.flowsheet.feeds) stream_ids.insert(id);
    for (const auto& b : def.flowsheet.blocks)
        for (const auto& s : b.outlets) stream_ids.insert(s);
    if (blocks_ok) {
        auto topo = check_topology(def.flowsheet);
        if (topo.empty()) {
            try {
                (void)build_flowsheet(def.flowsheet);
            } catch (const Error& e) {
                rd.fail(e.code(), "blocks", e.what());
            }
        }
        rd.diags.insert(rd.diags.end(), topo.begin(), topo.end());
    }

    if (const json* p = rd.child(doc, "product", "", false)) {
        ProductRef ref{rd.text(*p, "stream", "product"), rd.text(*p, "component", "product")};
        if (!stream_ids.contains(ref.stream)) {
            rd.fail(ErrorCode::UnknownStream, "product.stream", "unknown stream '" + ref.stream + "'");
        }
        check_component(rd, def.registry, ref.component, "product.component");
        def.product = ref;
    }

    const json& vessels = rd.array(doc, "vessels", "", false);
    std::set<std::string> vessel_ids;
    for (std::size_t i = 0; i < vessels.size(); ++i) {
        const std::string w = Reader::index("vessels", i);
        auto v = read_vessel(rd, vessels[i], w);
        if (!vessel_ids.insert(v.id).second) rd.fail(ErrorCode::InvalidSpec, w, "duplicate vessel id '" + v.id + "'");
        def.vessels.push_back(std::move(v));
    }

    if (doc.contains("economics")) {
        def.economics = read_economics(rd, doc["economics"], def.cross_checks);
        for (std::size_t i = 0; i < def.cross_checks.size(); ++i) {
            const auto& c = def.cross_checks[i];
            const std::string w = "economics.check[" + c.label + "]";
            if (!stream_ids.contains(c.stream)) rd.fail(ErrorCode::UnknownStream, w, "unknown stream '" + c.stream + "'");
            check_component(rd, def.registry, c.component, w);
        }
    }
    return def;
}

} // namespace detail

/// Every schema and referential problem in a parsed document; empty means valid.
inline std::vector<Diagnostic> validate(const nlohmann::json& doc) {
    detail::Reader rd;
    (void)detail::read_plant(rd, doc);
    return std::move(rd.diags);
}

/// Reads `path` and validates it. Throws only for unreadable or malformed files.
inline std::vector<Diagnostic> validate_file(const std::filesystem::path& path) {
    return validate(load_json(path));
}

/// Builds a definition; throws ValidationFailed listing the first problems.
inline PlantDefinition parse_plant(const nlohmann::json& doc) {
    detail::Reader rd;
    auto def = detail::read_plant(rd, doc);
    if (!rd.diags.empty()) {
        std::string msg = std::to_string(rd.diags.size()) + " problem(s)";
        for (const auto& d : rd.diags) msg += "\n  " + d.where + ": " + d.message;
        throw Error(ErrorCode::ValidationFailed, msg);
    }
    return def;
}

inline PlantDefinition load_plant(const std::filesystem::path& path) { return parse_plant(load_json(path)); }

} // namespace papsim
