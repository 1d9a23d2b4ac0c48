#pragma once

#include <string>

#include "areal/ctm.hpp"

namespace areal {

/// Parse a simulation scenario from the flat key-value config format:
///
///   [domain]            length_m, dx_m, dt_s, horizon_s
///   [shared]            ka_jam, q_redistribution (on|off), supply (mixture|stream)
///   [stream]            vmax, vcrit, ka_crit, omega     (stream supply only)
///   [category.<name>]   vmax, vcrit, ka_crit, omega     (km/h, m^2/(km*m))
///   [init.<name>]       x0,x1,ka rows
///   [boundary]          left = closed | demand <name>=<rate> ...;
///                       right = closed | free-outflow
///   [source]            x0,x1,t0,t1,rate,category rows
///                       (rate in m^2/(km*m) per hour)
///
/// '#' starts a comment. Errors carry the offending line number.
Scenario parse_scenario_file(const std::string& path);
Scenario parse_scenario_text(const std::string& text, const std::string& origin = "<config>");

}  // namespace areal
