#pragma once

// Unit conventions used throughout papsim:
//   flows kmol/h, temperatures degC, pressures bar (absolute), duties cal/s,
//   shaft power kW, money INR crore unless a name says otherwise.

namespace papsim::units {

inline constexpr double joule_per_cal = 4.184;
inline constexpr double kelvin_offset = 273.15;
inline constexpr double mol_per_kmol = 1000.0;
inline constexpr double seconds_per_hour = 3600.0;

inline constexpr double inr_per_crore = 1.0e7;
inline constexpr double inr_per_lakh = 1.0e5;

/// 1 bar = 0.1 MN/m^2.
inline constexpr double mpa_per_bar = 0.1;

inline constexpr double to_kelvin(double celsius) { return celsius + kelvin_offset; }
inline constexpr double to_celsius(double kelvin) { return kelvin - kelvin_offset; }

inline constexpr double cal_per_s_to_kw(double cal_s) { return cal_s * joule_per_cal / 1000.0; }

/// (kmol/h) * (cal/(mol K)) -> cal/(s K)
inline constexpr double kmolh_cal_to_cal_s(double kmolh_times_cal) {
    return kmolh_times_cal * mol_per_kmol / seconds_per_hour;
}

inline constexpr double inr_to_crore(double inr) { return inr / inr_per_crore; }
inline constexpr double crore_to_inr(double crore) { return crore * inr_per_crore; }

} // namespace papsim::units
