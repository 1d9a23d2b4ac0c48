#pragma once

// Canonical internal units are SI: meters, seconds, projected area in m^2.
// Areal density k_a is then dimensionless (m^2 per m of length per m of
// width), areal flow q_a is m^2/(s*m), speeds are m/s.  Field tables and
// every file format speak the presentation units km/h, m^2/(km*m) and
// m^2/(h*m); conversion happens only at I/O boundaries.

namespace areal::units {

inline constexpr double seconds_per_hour = 3600.0;
inline constexpr double meters_per_km = 1000.0;

constexpr double kmh_to_ms(double v_kmh) { return v_kmh * meters_per_km / seconds_per_hour; }
constexpr double ms_to_kmh(double v_ms) { return v_ms * seconds_per_hour / meters_per_km; }

// areal density, m^2/(km*m) <-> dimensionless
constexpr double ka_to_si(double ka_per_km) { return ka_per_km / meters_per_km; }
constexpr double ka_to_presentation(double ka) { return ka * meters_per_km; }

// areal flow, m^2/(h*m) <-> m^2/(s*m)
constexpr double qa_to_si(double qa_per_h) { return qa_per_h / seconds_per_hour; }
constexpr double qa_to_presentation(double qa) { return qa * seconds_per_hour; }

// vehicle density, veh/km <-> veh/m
constexpr double k_to_si(double k_per_km) { return k_per_km / meters_per_km; }
constexpr double k_to_presentation(double k) { return k * meters_per_km; }

// vehicle flow, veh/h <-> veh/s
constexpr double q_to_si(double q_per_h) { return q_per_h / seconds_per_hour; }
constexpr double q_to_presentation(double q) { return q * seconds_per_hour; }

}  // namespace areal::units
