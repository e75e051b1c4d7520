#pragma once

#include <cmath>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "papsim/error.hpp"
#include "papsim/units.hpp"

// Techno-economics. Money is INR crore unless the field name says USD or INR.

namespace papsim::econ {

struct EquipmentItem {
    std::string name;
    double equip_cost_usd = 0.0;
    double installed_cost_usd = 0.0;
    double utility_cost_usd_h = 0.0;
};

struct CostItem {
    std::string name;
    double crore = 0.0;
};

struct ManpowerItem {
    std::string role;
    int headcount = 0;
    double salary_inr = 0.0; // per person per year
};

struct MaterialItem {
    std::string name;
    double price_inr_kg = 0.0;
    double quantity_kg_yr = 0.0;
};

struct UtilityItem {
    std::string name;
    double cost_usd_h = 0.0;
};

struct ProductItem {
    std::string name;
    double quantity_kg_yr = 0.0;
    double price_inr_kg = 0.0;
};

struct Loan {
    double principal = 0.0; // crore
    double annual_rate = 0.0;
    int tenure_years = 1;
};

struct CashFlowRow {
    int year = 0;
    double gross = 0.0;
    double depreciation = 0.0;
    double taxable = 0.0;
    double taxes_paid = 0.0;
    double cash_flow = 0.0;
    double cumulative = 0.0;
};

struct AmortizationRow {
    int month = 0;
    double payment = 0.0;
    double interest = 0.0;
    double principal_component = 0.0;
    double balance = 0.0;
};

/// kg/h from an annual tonnage.
inline double hourly_capacity(double tpa, double days, double hours) {
    if (!(days > 0.0) || !(hours > 0.0)) {
        throw Error(ErrorCode::InvalidSpec, "operating days and hours must be positive");
    }
    return tpa * 1000.0 / (days * hours);
}

inline double material_cost_annual(std::span<const MaterialItem> items) {
    double inr = 0.0;
    for (const auto& m : items) inr += m.price_inr_kg * m.quantity_kg_yr;
    return units::inr_to_crore(inr);
}

inline double utility_cost_annual(std::span<const UtilityItem> items, double hours_per_year, double fx) {
    double usd_h = 0.0;
    for (const auto& u : items) usd_h += u.cost_usd_h;
    return units::inr_to_crore(usd_h * hours_per_year * fx);
}

struct EquipmentTotals {
    double equip = 0.0;
    double installed = 0.0;
    double utility_per_year = 0.0;
    double combined() const { return equip + installed; }
};

inline EquipmentTotals equipment_rollup(std::span<const EquipmentItem> items, double fx,
                                        double hours_per_year) {
    double equip = 0.0, installed = 0.0, utility = 0.0;
    for (const auto& e : items) {
        equip += e.equip_cost_usd;
        installed += e.installed_cost_usd;
        utility += e.utility_cost_usd_h;
    }
    return {units::inr_to_crore(equip * fx), units::inr_to_crore(installed * fx),
            units::inr_to_crore(utility * hours_per_year * fx)};
}

struct FixedCapital {
    double direct = 0.0;
    double indirect_annual = 0.0;
    double total = 0.0;
};

/// Direct items plus one year of permanent staff salaries.
inline FixedCapital fixed_capital(std::span<const CostItem> direct_items,
                                  std::span<const ManpowerItem> manpower) {
    FixedCapital f;
    for (const auto& d : direct_items) f.direct += d.crore;
    double inr = 0.0;
    for (const auto& m : manpower) inr += m.headcount * m.salary_inr;
    f.indirect_annual = units::inr_to_crore(inr);
    f.total = f.direct + f.indirect_annual;
    return f;
}

inline double revenue_annual(std::span<const ProductItem> products) {
    double inr = 0.0;
    for (const auto& p : products) inr += p.quantity_kg_yr * p.price_inr_kg;
    return units::inr_to_crore(inr);
}

/// Element i is the charge for operating year i + 1; zero-padded to `horizon`.
inline std::vector<double> depreciation_schedule(double base, std::span<const double> percents,
                                                 int horizon = 0) {
    double sum = 0.0;
    for (double p : percents) {
        if (p < 0.0) throw Error(ErrorCode::InvalidSpec, "depreciation percents must be non-negative");
        sum += p;
    }
    if (sum > 1.0 + 1e-12) throw Error(ErrorCode::InvalidSpec, "depreciation percents sum above 1");

    std::vector<double> out;
    for (double p : percents) out.push_back(base * p);
    if (static_cast<int>(out.size()) < horizon) out.resize(static_cast<std::size_t>(horizon), 0.0);
    return out;
}

/// Undiscounted after-tax cash flow. Taxes on year n's taxable income are paid
/// in year n + tax_lag; year 0 carries the fixed outlay only.
inline std::vector<CashFlowRow> cash_flow_table(double gross_annual, std::span<const double> depreciation,
                                                double tax_rate, int tax_lag, double fixed_outlay,
                                                int horizon) {
    if (horizon < 1) throw Error(ErrorCode::InvalidSpec, "horizon must be at least one year");
    if (tax_lag < 0) throw Error(ErrorCode::InvalidSpec, "tax lag must be non-negative");

    std::vector<CashFlowRow> rows(static_cast<std::size_t>(horizon) + 1);
    rows[0].cash_flow = -fixed_outlay;
    rows[0].cumulative = -fixed_outlay;
    for (int n = 1; n <= horizon; ++n) {
        auto& r = rows[static_cast<std::size_t>(n)];
        r.year = n;
        r.gross = gross_annual;
        const auto idx = static_cast<std::size_t>(n - 1);
        r.depreciation = idx < depreciation.size() ? depreciation[idx] : 0.0;
        r.taxable = r.gross - r.depreciation;
        const int source = n - tax_lag;
        r.taxes_paid = source >= 1 ? tax_rate * rows[static_cast<std::size_t>(source)].taxable : 0.0;
        r.cash_flow = r.gross - r.taxes_paid;
        r.cumulative = rows[static_cast<std::size_t>(n - 1)].cumulative + r.cash_flow;
    }
    return rows;
}

struct Payback {
    double from_start = 0.0; // crossing time with the outlay at t = 0
    double on_chart = 0.0;   // same crossing on a year axis that places the outlay at 1
};

/// Linear interpolation of the first zero crossing of cumulative cash flow.
inline Payback payback(std::span<const CashFlowRow> rows) {
    if (rows.empty()) throw Error(ErrorCode::NeverRecovers, "empty cash-flow table");
    double t = -1.0;
    if (rows[0].cumulative >= 0.0) {
        t = 0.0;
    } else {
        for (std::size_t n = 1; n < rows.size(); ++n) {
            if (rows[n].cumulative >= 0.0) {
                const double before = rows[n - 1].cumulative;
                t = static_cast<double>(n - 1) + (-before) / (rows[n].cumulative - before);
                break;
            }
        }
    }
    if (t < 0.0) throw Error(ErrorCode::NeverRecovers, "cumulative cash flow never turns positive");
    return {t, t + 1.0};
}

/// Return on investment in percent.
inline double roi(double net_income, double total_investment) {
    if (total_investment == 0.0) {
        throw Error(ErrorCode::DivisionByZeroInvestment, "total investment is zero");
    }
    return 100.0 * net_income / total_investment;
}

struct LoanSchedule {
    double emi = 0.0; // monthly
    double yearly_payment = 0.0;
    double total_interest = 0.0;
    std::vector<AmortizationRow> rows;
};

/// Equated monthly installment with monthly compounding at annual_rate / 12.
inline LoanSchedule emi_schedule(double principal, double annual_rate, int tenure_years) {
    if (annual_rate < 0.0) throw Error(ErrorCode::InvalidSpec, "interest rate must be non-negative");
    if (tenure_years < 1) throw Error(ErrorCode::InvalidSpec, "tenure must be at least one year");

    const int months = 12 * tenure_years;
    const double r = annual_rate / 12.0;
    LoanSchedule s;
    if (r == 0.0) {
        s.emi = principal / months;
    } else {
        const double growth = std::pow(1.0 + r, months);
        s.emi = principal * r * growth / (growth - 1.0);
    }
    s.yearly_payment = 12.0 * s.emi;

    double balance = principal;
    double paid = 0.0;
    for (int m = 1; m <= months; ++m) {
        AmortizationRow row;
        row.month = m;
        row.payment = s.emi;
        row.interest = balance * r;
        row.principal_component = s.emi - row.interest;
        balance -= row.principal_component;
        row.balance = balance;
        paid += row.payment;
        s.rows.push_back(row);
    }
    s.total_interest = paid - principal;
    return s;
}

/// Everything the economics section of a plant definition carries.
struct EconomicsInput {
    double operating_days = 300.0;
    double operating_hours = 24.0;
    double fx_rate = 75.0;                  // INR per USD
    std::optional<double> fx_equipment;     // equipment table rate when it differs

    double capacity_tpa = 0.0;
    double product_molar_mass = 0.0;        // kg/kmol, for the capacity line

    std::vector<EquipmentItem> equipment_items;
    std::vector<CostItem> direct_cost_items;
    std::vector<ManpowerItem> manpower_items;
    std::vector<MaterialItem> material_items;
    std::vector<UtilityItem> utility_items;
    std::vector<CostItem> other_opex_items;
    std::vector<ProductItem> products;

    double gross_annual = 0.0;
    std::optional<double> operating_cost_stated;
    double tax_rate = 0.35;
    int tax_lag_years = 1;
    double depreciation_base = 0.0;
    std::vector<double> depreciation_percents;
    double fixed_outlay = 0.0;
    int horizon_years = 10;
    double total_investment = 0.0;
    std::optional<double> net_income_stated;

    Loan loan;

    double hours_per_year() const { return operating_days * operating_hours; }
    double equipment_fx() const { return fx_equipment.value_or(fx_rate); }
};

struct EconomicsReport {
    double capacity_kg_h = 0.0;
    double capacity_kmol_h = 0.0;
    EquipmentTotals equipment;
    FixedCapital fixed;
    double materials = 0.0;
    double utilities = 0.0;
    double other_opex = 0.0;
    double opex_itemized = 0.0;
    double revenue = 0.0;
    std::vector<double> depreciation;
    std::vector<CashFlowRow> cash_flow;
    double cumulative_end = 0.0;
    std::optional<Payback> payback;
    double net_income = 0.0;   // cumulative cash at horizon + total investment
    double roi_percent = 0.0;
    std::optional<double> roi_stated_percent;
    LoanSchedule loan;
};

inline EconomicsReport evaluate(const EconomicsInput& in) {
    EconomicsReport r;
    if (in.capacity_tpa > 0.0) {
        r.capacity_kg_h = hourly_capacity(in.capacity_tpa, in.operating_days, in.operating_hours);
        if (in.product_molar_mass > 0.0) r.capacity_kmol_h = r.capacity_kg_h / in.product_molar_mass;
    }
    r.equipment = equipment_rollup(in.equipment_items, in.equipment_fx(), in.hours_per_year());
    r.fixed = fixed_capital(in.direct_cost_items, in.manpower_items);
    r.materials = material_cost_annual(in.material_items);
    r.utilities = utility_cost_annual(in.utility_items, in.hours_per_year(), in.fx_rate);
    for (const auto& o : in.other_opex_items) r.other_opex += o.crore;
    r.opex_itemized = r.materials + r.utilities + r.other_opex;
    r.revenue = revenue_annual(in.products);

    r.depreciation = depreciation_schedule(in.depreciation_base, in.depreciation_percents, in.horizon_years);
    r.cash_flow = cash_flow_table(in.gross_annual, r.depreciation, in.tax_rate, in.tax_lag_years,
                                  in.fixed_outlay, in.horizon_years);
    r.cumulative_end = r.cash_flow.back().cumulative;
    try {
        r.payback = payback(r.cash_flow);
    } catch (const Error& e) {
        if (e.code() != ErrorCode::NeverRecovers) throw;
    }
    if (in.total_investment > 0.0) {
        r.net_income = r.cumulative_end + in.total_investment;
        r.roi_percent = roi(r.net_income, in.total_investment);
        if (in.net_income_stated) r.roi_stated_percent = roi(*in.net_income_stated, in.total_investment);
    }
    if (in.loan.principal > 0.0) {
        r.loan = emi_schedule(in.loan.principal, in.loan.annual_rate, in.loan.tenure_years);
    }
    return r;
}

} // namespace papsim::econ
