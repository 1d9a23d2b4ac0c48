#include "areal/scenario_io.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <vector>

#include "areal/errors.hpp"
#include "areal/units.hpp"

namespace areal {

namespace {

struct Line {
  std::size_t number;
  std::string text;
};

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

[[noreturn]] void fail(const std::string& origin, std::size_t line, const std::string& message) {
  throw ParseError(origin + ":" + std::to_string(line) + ": " + message);
}

double to_double(const std::string& text, const std::string& origin, std::size_t line) {
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    fail(origin, line, "bad numeric value '" + text + "'");
  }
}

struct RawSection {
  std::map<std::string, std::pair<std::string, std::size_t>> keys;
  std::vector<Line> rows;
};

}  // namespace

Scenario parse_scenario_text(const std::string& text, const std::string& origin) {
  std::map<std::string, RawSection> sections;
  std::vector<std::string> category_order;

  std::istringstream in(text);
  std::string raw;
  std::size_t line_no = 0;
  std::string current;
  while (std::getline(in, raw)) {
    ++line_no;
    const auto hash = raw.find('#');
    if (hash != std::string::npos) raw.erase(hash);
    const std::string line = trim(raw);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') fail(origin, line_no, "unterminated section header");
      current = trim(line.substr(1, line.size() - 2));
      if (current.empty()) fail(origin, line_no, "empty section name");
      if (current.rfind("category.", 0) == 0 && !sections.count(current))
        category_order.push_back(current.substr(9));
      sections.try_emplace(current);
      continue;
    }
    if (current.empty()) fail(origin, line_no, "content before any [section]");
    const auto eq = line.find('=');
    if (eq != std::string::npos) {
      sections[current].keys[trim(line.substr(0, eq))] = {trim(line.substr(eq + 1)), line_no};
    } else {
      sections[current].rows.push_back({line_no, line});
    }
  }

  auto require_section = [&](const std::string& name) -> RawSection& {
    auto it = sections.find(name);
    if (it == sections.end()) throw ParseError(origin + ": missing [" + name + "] section");
    return it->second;
  };
  auto get = [&](RawSection& section, const std::string& key, const std::string& where) {
    auto it = section.keys.find(key);
    if (it == section.keys.end())
      throw ParseError(origin + ": missing key '" + key + "' in [" + where + "]");
    return it->second;
  };

  Scenario scenario;
  RawSection& domain = require_section("domain");
  const auto [length_text, length_line] = get(domain, "length_m", "domain");
  const auto [dx_text, dx_line] = get(domain, "dx_m", "domain");
  const auto [dt_text, dt_line] = get(domain, "dt_s", "domain");
  const auto [horizon_text, horizon_line] = get(domain, "horizon_s", "domain");
  const double length = to_double(length_text, origin, length_line);
  const double dx = to_double(dx_text, origin, dx_line);
  scenario.dt = to_double(dt_text, origin, dt_line);
  scenario.horizon = to_double(horizon_text, origin, horizon_line);
  if (dx <= 0.0 || length <= 0.0) fail(origin, dx_line, "length_m and dx_m must be positive");
  scenario.cell_count = std::size_t(std::llround(length / dx));
  scenario.cell_length = dx;
  if (std::abs(double(scenario.cell_count) * dx - length) > 1e-6 * length)
    fail(origin, dx_line, "length_m must be a whole number of dx_m cells");

  RawSection& shared = require_section("shared");
  const auto [jam_text, jam_line] = get(shared, "ka_jam", "shared");
  scenario.categories.k_jam = units::ka_to_si(to_double(jam_text, origin, jam_line));
  if (auto it = shared.keys.find("q_redistribution"); it != shared.keys.end()) {
    const std::string& v = it->second.first;
    if (v == "on") scenario.redistribute_residual_supply = true;
    else if (v == "off") scenario.redistribute_residual_supply = false;
    else fail(origin, it->second.second, "q_redistribution must be on or off");
  }
  if (auto it = shared.keys.find("supply"); it != shared.keys.end()) {
    const std::string& v = it->second.first;
    if (v == "mixture") scenario.supply_model = SupplyModel::mixture;
    else if (v == "stream") scenario.supply_model = SupplyModel::stream;
    else fail(origin, it->second.second, "supply must be mixture or stream");
  }

  auto parse_fd = [&](RawSection& section, const std::string& where) {
    const auto [vmax, l1] = get(section, "vmax", where);
    const auto [vcrit, l2] = get(section, "vcrit", where);
    const auto [kacrit, l3] = get(section, "ka_crit", where);
    const auto [omega, l4] = get(section, "omega", where);
    return FdParams::presentation(FdFamily::smulders, to_double(vmax, origin, l1),
                                  to_double(vcrit, origin, l2), to_double(kacrit, origin, l3),
                                  units::ka_to_presentation(scenario.categories.k_jam),
                                  to_double(omega, origin, l4));
  };

  if (category_order.empty()) throw ParseError(origin + ": no [category.<name>] sections");
  for (const std::string& name : category_order) {
    RawSection& section = sections.at("category." + name);
    scenario.categories.categories.push_back({name, parse_fd(section, "category." + name)});
  }
  if (scenario.supply_model == SupplyModel::stream)
    scenario.stream_fd = parse_fd(require_section("stream"), "stream");

  scenario.initial_density.assign(scenario.categories.categories.size(),
                                  std::vector<double>(scenario.cell_count, 0.0));

  for (std::size_t i = 0; i < category_order.size(); ++i) {
    auto it = sections.find("init." + category_order[i]);
    if (it == sections.end()) continue;
    for (const Line& row : it->second.rows) {
      std::stringstream ss(row.text);
      std::string a, b, c;
      if (!std::getline(ss, a, ',') || !std::getline(ss, b, ',') || !std::getline(ss, c))
        fail(origin, row.number, "init rows are x0,x1,ka");
      scenario.set_block(i, to_double(trim(a), origin, row.number),
                         to_double(trim(b), origin, row.number),
                         units::ka_to_si(to_double(trim(c), origin, row.number)));
    }
  }

  auto category_index = [&](const std::string& name, std::size_t line) -> std::size_t {
    for (std::size_t i = 0; i < category_order.size(); ++i)
      if (category_order[i] == name) return i;
    fail(origin, line, "unknown category '" + name + "'");
  };

  if (auto it = sections.find("boundary"); it != sections.end()) {
    auto parse_boundary = [&](const std::string& key, BoundaryCondition& bc) {
      auto entry = it->second.keys.find(key);
      if (entry == it->second.keys.end()) return;
      const std::string& value = entry->second.first;
      const std::size_t line = entry->second.second;
      if (value == "closed") {
        bc.kind = BoundaryCondition::Kind::closed;
      } else if (value == "free-outflow") {
        bc.kind = BoundaryCondition::Kind::free_outflow;
      } else if (value.rfind("demand", 0) == 0) {
        bc.kind = BoundaryCondition::Kind::prescribed_demand;
        bc.demand.assign(category_order.size(), 0.0);
        std::stringstream ss(value.substr(6));
        std::string item;
        while (ss >> item) {
          const auto eq = item.find('=');
          if (eq == std::string::npos) fail(origin, line, "demand entries are <name>=<rate>");
          const std::size_t index = category_index(item.substr(0, eq), line);
          bc.demand[index] = units::qa_to_si(to_double(item.substr(eq + 1), origin, line));
        }
      } else {
        fail(origin, line, "boundary '" + key + "' must be closed, free-outflow or demand ...");
      }
    };
    parse_boundary("left", scenario.left);
    parse_boundary("right", scenario.right);
  } else {
    scenario.right.kind = BoundaryCondition::Kind::free_outflow;
  }

  if (auto it = sections.find("source"); it != sections.end()) {
    for (const Line& row : it->second.rows) {
      std::stringstream ss(row.text);
      std::vector<std::string> fields;
      std::string field;
      while (std::getline(ss, field, ',')) fields.push_back(trim(field));
      if (fields.size() != 6) fail(origin, row.number, "source rows are x0,x1,t0,t1,rate,category");
      AreaSource source;
      source.x0 = to_double(fields[0], origin, row.number);
      source.x1 = to_double(fields[1], origin, row.number);
      source.t0 = to_double(fields[2], origin, row.number);
      source.t1 = to_double(fields[3], origin, row.number);
      // density per hour -> per second
      source.rate = units::ka_to_si(to_double(fields[4], origin, row.number)) /
                    units::seconds_per_hour;
      source.category = category_index(fields[5], row.number);
      scenario.sources.push_back(source);
    }
  }

  scenario.validate();
  return scenario;
}

Scenario parse_scenario_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_scenario_text(buffer.str(), path);
}

}  // namespace areal
