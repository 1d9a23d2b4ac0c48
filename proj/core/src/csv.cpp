#include "areal/csv.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "areal/errors.hpp"
#include "areal/units.hpp"

namespace areal::csv {

namespace {

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::stringstream ss(line);
  while (std::getline(ss, field, ',')) {
    // trim
    const auto begin = field.find_first_not_of(" \t\r");
    const auto end = field.find_last_not_of(" \t\r");
    fields.push_back(begin == std::string::npos ? "" : field.substr(begin, end - begin + 1));
  }
  if (!line.empty() && line.back() == ',') fields.push_back("");
  return fields;
}

double parse_double(const std::string& text, const std::string& path, std::size_t line_no,
                    const char* what) {
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw ParseError(path + ":" + std::to_string(line_no) + ": bad " + what + " value '" +
                     text + "'");
  }
}

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'");
  return in;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write '" + path + "'");
  return out;
}

void expect_header(const std::string& got, const std::string& want, const std::string& path) {
  if (split(got) != split(want))
    throw ParseError(path + ":1: expected header '" + want + "'");
}

}  // namespace

std::string format_number(double value) {
  char buffer[40];
  std::snprintf(buffer, sizeof buffer, "%.6g", value);
  return buffer;
}

std::map<std::string, VehicleCategory> load_categories(const std::string& path) {
  std::ifstream in = open_in(path);
  std::string line;
  if (!std::getline(in, line)) throw ParseError(path + ": empty file");
  expect_header(line, "category,length_m,width_m,vmax_kmh,vmin_kmh", path);
  std::map<std::string, VehicleCategory> table;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto fields = split(line);
    if (fields.size() != 5)
      throw ParseError(path + ":" + std::to_string(line_no) + ": expected 5 fields");
    VehicleCategory cat;
    cat.name = fields[0];
    cat.length = parse_double(fields[1], path, line_no, "length");
    cat.width = parse_double(fields[2], path, line_no, "width");
    cat.v_max_observed = units::kmh_to_ms(parse_double(fields[3], path, line_no, "vmax"));
    cat.v_min_observed = units::kmh_to_ms(parse_double(fields[4], path, line_no, "vmin"));
    cat.validate();
    table[cat.name] = cat;
  }
  return table;
}

std::vector<Trajectory> load_trajectories(
    const std::string& path, const std::map<std::string, VehicleCategory>& categories) {
  std::ifstream in = open_in(path);
  std::string line;
  if (!std::getline(in, line)) throw ParseError(path + ": empty file");
  expect_header(line, "vehicle_id,category,t_s,x_m", path);

  std::vector<Trajectory> trajectories;
  std::map<std::string, std::size_t> index;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto fields = split(line);
    if (fields.size() != 4)
      throw ParseError(path + ":" + std::to_string(line_no) + ": expected 4 fields");
    const std::string& id = fields[0];
    auto cat_it = categories.find(fields[1]);
    if (cat_it == categories.end())
      throw ParseError(path + ":" + std::to_string(line_no) + ": unknown category '" +
                       fields[1] + "'");
    const double t = parse_double(fields[2], path, line_no, "t_s");
    const double x = parse_double(fields[3], path, line_no, "x_m");
    auto [it, inserted] = index.try_emplace(id, trajectories.size());
    if (inserted) {
      Trajectory traj;
      traj.vehicle_id = id;
      traj.category = cat_it->second;
      trajectories.push_back(std::move(traj));
    }
    trajectories[it->second].samples.push_back({t, x});
  }
  for (Trajectory& traj : trajectories) traj.validate();
  return trajectories;
}

std::vector<Observation> load_observations(const std::string& path) {
  std::ifstream in = open_in(path);
  std::string line;
  if (!std::getline(in, line)) throw ParseError(path + ": empty file");
  expect_header(line, "ka,v", path);
  std::vector<Observation> observations;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto fields = split(line);
    if (fields.size() != 2)
      throw ParseError(path + ":" + std::to_string(line_no) + ": expected 2 fields");
    Observation o;
    o.k_a = units::ka_to_si(parse_double(fields[0], path, line_no, "ka"));
    o.v = units::kmh_to_ms(parse_double(fields[1], path, line_no, "v"));
    observations.push_back(o);
  }
  return observations;
}

void save_observations(const std::string& path, std::span<const Observation> observations) {
  std::ofstream out = open_out(path);
  out << "ka,v\n";
  for (const Observation& o : observations)
    out << format_number(units::ka_to_presentation(o.k_a)) << ','
        << format_number(units::ms_to_kmh(o.v)) << '\n';
}

std::vector<FdParams> load_fd_params(const std::string& path) {
  std::ifstream in = open_in(path);
  std::string line;
  std::size_t line_no = 0;
  std::vector<FdParams> out;
  bool saw_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line.front() == '#') continue;
    if (!saw_header) {
      expect_header(line, "family,vmax,vcrit,ka_crit,ka_jam,omega", path);
      saw_header = true;
      continue;
    }
    const auto fields = split(line);
    if (fields.size() != 6)
      throw ParseError(path + ":" + std::to_string(line_no) + ": expected 6 fields");
    const FdFamily family = fd_family_from_string(fields[0]);
    out.push_back(FdParams::presentation(
        family, parse_double(fields[1], path, line_no, "vmax"),
        parse_double(fields[2], path, line_no, "vcrit"),
        parse_double(fields[3], path, line_no, "ka_crit"),
        parse_double(fields[4], path, line_no, "ka_jam"),
        parse_double(fields[5], path, line_no, "omega")));
  }
  if (!saw_header) throw ParseError(path + ": empty file");
  return out;
}

void save_fd_params(const std::string& path, std::span<const FdParams> params, long seed) {
  std::ofstream out = open_out(path);
  if (seed >= 0) out << "# seed " << seed << '\n';
  out << "family,vmax,vcrit,ka_crit,ka_jam,omega\n";
  for (const FdParams& p : params) {
    out << to_string(p.family) << ',' << format_number(units::ms_to_kmh(p.v_max)) << ','
        << format_number(units::ms_to_kmh(p.v_crit)) << ','
        << format_number(units::ka_to_presentation(p.k_crit)) << ','
        << format_number(units::ka_to_presentation(p.k_jam)) << ','
        << format_number(units::ms_to_kmh(p.omega)) << '\n';
  }
}

void save_fit_report(const std::string& path, const FitReport& report) {
  std::ofstream out = open_out(path);
  out << "r2_kv,rmse_kv,r2_qk,rmse_qk\n";
  out << format_number(report.r2_speed) << ','
      << format_number(units::ms_to_kmh(report.rmse_speed)) << ','
      << format_number(report.r2_flow) << ','
      << format_number(units::qa_to_presentation(report.rmse_flow)) << '\n';
}

void save_steady_windows(const std::string& path, std::span<const SteadyWindow> windows) {
  std::ofstream out = open_out(path);
  out << "t_start,t_end,a0,b0,ka,qa,va\n";
  for (const SteadyWindow& w : windows) {
    out << format_number(w.t_start) << ',' << format_number(w.t_end) << ','
        << format_number(w.a0) << ',' << format_number(w.b0) << ','
        << format_number(units::ka_to_presentation(w.state.k_a)) << ','
        << format_number(units::qa_to_presentation(w.state.q_a)) << ','
        << format_number(units::ms_to_kmh(w.state.v_a)) << '\n';
  }
}

void save_front_events(const std::string& path, std::span<const FrontEvent> events) {
  std::ofstream out = open_out(path);
  out << "t,x,kind,left_state,right_state,speed\n";
  for (const FrontEvent& e : events) {
    out << format_number(e.t) << ',' << format_number(e.x) << ',' << e.kind << ','
        << format_number(units::ka_to_presentation(e.k_left)) << ','
        << format_number(units::ka_to_presentation(e.k_right)) << ','
        << format_number(units::ms_to_kmh(e.speed)) << '\n';
  }
}

void save_density_grid(const std::string& path, std::span<const double> times,
                       std::span<const std::vector<double>> rows, double cell_length) {
  if (times.size() != rows.size())
    throw DomainError("save_density_grid: one time per row required");
  std::ofstream out = open_out(path);
  out << 't';
  if (!rows.empty()) {
    for (std::size_t c = 0; c < rows.front().size(); ++c)
      out << ",x_" << format_number(cell_length * (double(c) + 0.5));
  }
  out << '\n';
  for (std::size_t r = 0; r < rows.size(); ++r) {
    out << format_number(times[r]);
    for (const double k : rows[r]) out << ',' << format_number(units::ka_to_presentation(k));
    out << '\n';
  }
}

}  // namespace areal::csv
