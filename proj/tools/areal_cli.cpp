// Command-line front end: measurement of areal traffic variables from
// trajectory files, steady-state detection, FD calibration, exact wave
// solutions and the multiclass cell-transmission simulator.

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "areal/calibrate.hpp"
#include "areal/csv.hpp"
#include "areal/ctm.hpp"
#include "areal/errors.hpp"
#include "areal/front_tracking.hpp"
#include "areal/measures.hpp"
#include "areal/scenario_io.hpp"
#include "areal/steady.hpp"
#include "areal/units.hpp"
#include "areal/waves.hpp"

namespace fs = std::filesystem;
using namespace areal;

namespace {

RegionVolume parse_region(const std::string& text, double width) {
  std::stringstream ss(text);
  std::vector<double> v;
  std::string field;
  while (std::getline(ss, field, ',')) v.push_back(std::stod(field));
  if (v.size() != 4) throw ParseError("--region expects x0,x1,t0,t1");
  RegionVolume region{v[0], v[1], v[2], v[3], width};
  region.validate();
  return region;
}

FdParams load_single_params(const std::string& path) {
  const std::vector<FdParams> params = csv::load_fd_params(path);
  if (params.empty()) throw ParseError(path + ": no parameter rows");
  return params.front();
}

fs::path prepare_output_dir(const std::string& dir) {
  fs::path path(dir);
  std::error_code ec;
  fs::create_directories(path, ec);
  if (ec || !fs::is_directory(path))
    throw ParseError("cannot create output directory '" + dir + "'");
  return path;
}

int run_variables(const std::string& input, const std::string& categories_path,
                  const std::string& output_dir, double width,
                  const std::vector<std::string>& region_specs) {
  const auto categories = csv::load_categories(categories_path);
  const auto trajectories = csv::load_trajectories(input, categories);
  const fs::path out = prepare_output_dir(output_dir) / "variables.csv";
  std::ofstream file(out);
  file << "x0,x1,t0,t1,ka,qa,va\n";
  if (trajectories.empty()) return 0;
  for (const std::string& spec : region_specs) {
    const RegionVolume region = parse_region(spec, width);
    const ArealState state = areal_state(trajectories, region);
    file << csv::format_number(region.x0) << ',' << csv::format_number(region.x1) << ','
         << csv::format_number(region.t0) << ',' << csv::format_number(region.t1) << ','
         << csv::format_number(units::ka_to_presentation(state.k_a)) << ','
         << csv::format_number(units::qa_to_presentation(state.q_a)) << ','
         << csv::format_number(units::ms_to_kmh(state.v_a)) << '\n';
  }
  return 0;
}

int run_steady(const std::string& input, const std::string& categories_path,
               const std::string& output_dir, double width, double detector_x,
               double detector_length, double grid_dt, const SteadyDetectionParams& params) {
  const auto categories = csv::load_categories(categories_path);
  const auto trajectories = csv::load_trajectories(input, categories);
  std::vector<DetectorPassage> passages;
  for (const Trajectory& traj : trajectories) {
    const auto crossing = crossing_at(traj, detector_x);
    if (!crossing) continue;
    DetectorPassage p;
    p.t = crossing->t;
    p.length = traj.category.length;
    p.width = traj.category.width;
    p.speed = crossing->speed;
    passages.push_back(p);
  }
  std::sort(passages.begin(), passages.end(),
            [](const DetectorPassage& a, const DetectorPassage& b) { return a.t < b.t; });
  const auto windows =
      steady_windows_from_passages(passages, detector_length, width, grid_dt, params);
  csv::save_steady_windows((prepare_output_dir(output_dir) / "steady_windows.csv").string(),
                           windows);
  return 0;
}

int run_calibrate(const std::string& input, const std::string& output_dir,
                  const std::string& family_name, double ka_jam, unsigned seed) {
  const auto observations = csv::load_observations(input);
  CalibrationOptions options;
  options.k_jam = units::ka_to_si(ka_jam);
  options.seed = seed;
  const CalibrationResult result =
      calibrate(fd_family_from_string(family_name), observations, options);
  const fs::path dir = prepare_output_dir(output_dir);
  csv::save_fd_params((dir / "fd_params.csv").string(), {{result.params}}, long(seed));
  csv::save_fit_report((dir / "fit_report.csv").string(), result.report);
  return 0;
}

int run_riemann(const std::string& params_path, const std::string& output_dir, double kl,
                double kr) {
  const FdParams params = load_single_params(params_path);
  const WaveFan fan =
      solve_riemann(params, units::ka_to_si(kl), units::ka_to_si(kr));
  std::vector<FrontEvent> events;
  for (const Wave& wave : fan.waves) {
    FrontEvent e;
    e.t = 0.0;
    e.x = 0.0;
    e.kind = wave.kind == Wave::Kind::shock ? "shock" : "fan";
    e.k_left = wave.k_left;
    e.k_right = wave.k_right;
    e.speed = wave.kind == Wave::Kind::shock ? wave.speed : wave.head;
    events.push_back(e);
  }
  csv::save_front_events((prepare_output_dir(output_dir) / "riemann_waves.csv").string(),
                         events);
  return 0;
}

PiecewiseInitialCondition load_initial_condition(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'");
  PiecewiseInitialCondition init;
  std::string line;
  std::size_t line_no = 0;
  bool first = true;
  double cursor = 0.0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line.front() == '#' || line.rfind("x0", 0) == 0) continue;
    std::stringstream ss(line);
    std::string a, b, c;
    if (!std::getline(ss, a, ',') || !std::getline(ss, b, ',') || !std::getline(ss, c))
      throw ParseError(path + ":" + std::to_string(line_no) + ": rows are x0,x1,ka");
    const double x0 = std::stod(a);
    const double x1 = std::stod(b);
    const double ka = units::ka_to_si(std::stod(c));
    if (first) {
      init.domain_min = x0;
      first = false;
    } else {
      if (std::abs(x0 - cursor) > 1e-9)
        throw ParseError(path + ":" + std::to_string(line_no) +
                         ": blocks must tile the domain contiguously");
      init.breaks.push_back(x0);
    }
    init.densities.push_back(ka);
    cursor = x1;
  }
  if (first) throw ParseError(path + ": no density blocks");
  init.domain_max = cursor;
  return init;
}

int run_moc(const std::string& params_path, const std::string& init_path,
            const std::string& output_dir, double horizon, int n_fan, double grid_dt,
            double grid_dx) {
  const FdParams params = load_single_params(params_path);
  const PiecewiseInitialCondition init = load_initial_condition(init_path);
  FrontTrackingOptions options;
  options.n_fan = n_fan;
  const MocSolution solution = moc_solve(params, init, horizon, options);
  const fs::path dir = prepare_output_dir(output_dir);
  csv::save_front_events((dir / "moc_events.csv").string(), solution.events());

  std::vector<double> times;
  std::vector<std::vector<double>> rows;
  const std::size_t n_cells =
      std::size_t((init.domain_max - init.domain_min) / grid_dx + 0.5);
  for (double t = 0.0; t <= horizon + 1e-9; t += grid_dt) {
    times.push_back(t);
    std::vector<double> row(n_cells, 0.0);
    for (std::size_t c = 0; c < n_cells; ++c)
      row[c] = solution.density(init.domain_min + grid_dx * (double(c) + 0.5), std::min(t, horizon));
    rows.push_back(std::move(row));
  }
  csv::save_density_grid((dir / "moc_grid.csv").string(), times, rows, grid_dx);
  return 0;
}

int run_simulate(const std::string& scenario_name, const std::string& output_dir, double dx,
                 double dt, double horizon, std::size_t snapshot_every) {
  Scenario scenario;
  if (scenario_name == "paper1") scenario = paper_scenario_1();
  else if (scenario_name == "paper2") scenario = paper_scenario_2();
  else scenario = parse_scenario_file(scenario_name);

  if (dx > 0.0) {
    const double length = scenario.length();
    scenario.cell_length = dx;
    scenario.cell_count = std::size_t(std::llround(length / dx));
    // Re-pin the paper initial blocks on the new grid.
    if (scenario.name == "paper1" || scenario.name == "paper2") {
      scenario.initial_density.assign(2, std::vector<double>(scenario.cell_count, 0.0));
      scenario.set_block(0, 50.0, 100.0, units::ka_to_si(150.0));
      if (scenario.name == "paper1") scenario.set_block(1, 50.0, 100.0, units::ka_to_si(150.0));
      else scenario.set_block(1, 135.0, 180.0, units::ka_to_si(150.0));
    } else {
      throw ParseError("--dx override is only supported for the built-in paper scenarios");
    }
  }
  if (dt > 0.0) scenario.dt = dt;
  if (horizon > 0.0) scenario.horizon = horizon;

  RunOptions options;
  options.snapshot_every = snapshot_every;
  options.log_fluxes = true;
  const SimulationResult result = run(scenario, scenario.horizon, options);

  const fs::path dir = prepare_output_dir(output_dir);
  for (std::size_t i = 0; i < result.category_names.size(); ++i) {
    std::vector<std::vector<double>> rows;
    rows.reserve(result.density.size());
    for (const auto& snapshot : result.density) rows.push_back(snapshot[i]);
    csv::save_density_grid((dir / ("density_" + result.category_names[i] + ".csv")).string(),
                           result.times, rows, result.cell_length);
  }
  std::ofstream flux_file(dir / "flux_log.csv");
  flux_file << "t,interface,category,flux\n";
  for (const FluxRecord& rec : result.fluxes)
    flux_file << csv::format_number(rec.t) << ',' << rec.interface << ','
              << result.category_names[rec.category] << ','
              << csv::format_number(units::qa_to_presentation(rec.flux)) << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"areal traffic toolkit: area-based traffic variables, FD calibration, "
               "kinematic waves and the multiclass cell-transmission model"};
  app.require_subcommand(1);

  std::string input, categories_path, output_dir = ".", params_path, init_path;
  std::string family = "smulders", scenario = "paper1";
  double width = 10.5, detector_x = 0.0, detector_length = 2.0;
  double ka_jam = 1000.0, kl = 0.0, kr = 0.0;
  double horizon = 0.0, grid_dt = 1.0, grid_dx = 5.0, dx = 0.0, dt = 0.0;
  int n_fan = 32;
  unsigned seed = 42;
  std::size_t snapshot_every = 1;
  std::vector<std::string> regions;
  SteadyDetectionParams steady_params;

  CLI::App* cmd_variables = app.add_subcommand("variables", "areal (q_a, k_a, v_a) per region");
  cmd_variables->add_option("--input", input)->required();
  cmd_variables->add_option("--categories", categories_path)->required();
  cmd_variables->add_option("--output-dir", output_dir);
  cmd_variables->add_option("--width", width);
  cmd_variables->add_option("--region", regions)->required();

  CLI::App* cmd_steady = app.add_subcommand("steady", "steady-state windows at a detector");
  cmd_steady->add_option("--input", input)->required();
  cmd_steady->add_option("--categories", categories_path)->required();
  cmd_steady->add_option("--output-dir", output_dir);
  cmd_steady->add_option("--width", width);
  cmd_steady->add_option("--detector-x", detector_x)->required();
  cmd_steady->add_option("--detector-length", detector_length);
  cmd_steady->add_option("--grid-dt", grid_dt);
  cmd_steady->add_option("--min-duration", steady_params.min_duration);
  cmd_steady->add_option("--max-residual", steady_params.max_residual);

  CLI::App* cmd_calibrate = app.add_subcommand("calibrate", "fit one FD family to ka,v data");
  cmd_calibrate->add_option("--input", input)->required();
  cmd_calibrate->add_option("--output-dir", output_dir);
  cmd_calibrate->add_option("--family", family);
  cmd_calibrate->add_option("--ka-jam", ka_jam);
  cmd_calibrate->add_option("--seed", seed);

  CLI::App* cmd_riemann = app.add_subcommand("riemann", "exact Riemann wave fan");
  cmd_riemann->add_option("--params", params_path)->required();
  cmd_riemann->add_option("--output-dir", output_dir);
  cmd_riemann->add_option("--kl", kl)->required();
  cmd_riemann->add_option("--kr", kr)->required();

  CLI::App* cmd_moc = app.add_subcommand("moc", "front-tracking solution of piecewise data");
  cmd_moc->add_option("--params", params_path)->required();
  cmd_moc->add_option("--init", init_path)->required();
  cmd_moc->add_option("--output-dir", output_dir);
  cmd_moc->add_option("--horizon", horizon)->required();
  cmd_moc->add_option("--nfan", n_fan);
  cmd_moc->add_option("--grid-dt", grid_dt);
  cmd_moc->add_option("--grid-dx", grid_dx);

  CLI::App* cmd_simulate = app.add_subcommand("simulate", "multiclass cell-transmission run");
  cmd_simulate->add_option("--scenario", scenario, "paper1, paper2 or a scenario file");
  cmd_simulate->add_option("--output-dir", output_dir);
  cmd_simulate->add_option("--dx", dx);
  cmd_simulate->add_option("--dt", dt);
  cmd_simulate->add_option("--horizon", horizon);
  cmd_simulate->add_option("--snapshot-every", snapshot_every);
  cmd_simulate->add_option("--seed", seed);

  try {
    app.parse(argc, argv);
    if (cmd_variables->parsed())
      return run_variables(input, categories_path, output_dir, width, regions);
    if (cmd_steady->parsed())
      return run_steady(input, categories_path, output_dir, width, detector_x, detector_length,
                        grid_dt, steady_params);
    if (cmd_calibrate->parsed())
      return run_calibrate(input, output_dir, family, ka_jam, seed);
    if (cmd_riemann->parsed()) return run_riemann(params_path, output_dir, kl, kr);
    if (cmd_moc->parsed())
      return run_moc(params_path, init_path, output_dir, horizon, n_fan, grid_dt, grid_dx);
    if (cmd_simulate->parsed())
      return run_simulate(scenario, output_dir, dx, dt, horizon, snapshot_every);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << '\n';
    return 2;
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const CflError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 4;
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 4;
  } catch (const ConvergenceError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
