#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "shocklim/error.hpp"
#include "shocklim/experiments.hpp"
#include "shocklim/profile.hpp"

namespace fs = std::filesystem;
using namespace shocklim;

namespace {

CaseConfig load_config(const std::string& path) {
  if (path.empty()) return CaseConfig{};
  std::ifstream in(path);
  if (!in) throw Error(Errc::config, "cannot open config " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::config, std::string("malformed config: ") + e.what());
  }
  return CaseConfig::from_json(j);
}

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(std::stod(item));
  }
  return out;
}

std::string g17(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_track(const fs::path& path, const ShiftTrack& track) {
  std::ofstream f(path);
  f << "t,X,Xdot\n";
  for (const ShiftSample& s : track.samples) {
    f << g17(s.t) << ',' << g17(s.x) << ',' << g17(s.xdot) << '\n';
  }
}

void write_snapshot(const fs::path& path, const SimState& s) {
  std::ofstream f(path);
  f << "x,u\n";
  for (int i = 0; i < s.grid.n_cells; ++i) {
    f << g17(s.grid.center(i)) << ',' << g17(s.u[static_cast<std::size_t>(i)]) << '\n';
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Viscous shock stability toolkit"};
  app.require_subcommand(1);

  std::string flux_name = "burgers", out_path, config_path, eps_text, refine_text = "0.01";
  double c_left = 1.0, c_right = -1.0, half_width = 20.0, step = 0.05;
  unsigned workers = 0;

  CLI::App* profile = app.add_subcommand("profile", "Write the viscous layer profile as x,S1 CSV");
  profile->add_option("--flux", flux_name, "burgers | exponential | quartic");
  profile->add_option("--c-left", c_left);
  profile->add_option("--c-right", c_right);
  profile->add_option("--half-width", half_width, "Output range [-w, w]");
  profile->add_option("--step", step, "Output spacing");
  profile->add_option("--out", out_path, "Output file (stdout if omitted)");

  CLI::App* evolve_cmd = app.add_subcommand("evolve", "Run one case");
  evolve_cmd->add_option("--config", config_path, "JSON config")->check(CLI::ExistingFile);
  evolve_cmd->add_option("--out", out_path, "Output directory")->required();

  CLI::App* sweep_cmd = app.add_subcommand("sweep", "Run an epsilon sweep and fit the rate");
  sweep_cmd->add_option("--config", config_path, "JSON config")->check(CLI::ExistingFile);
  sweep_cmd->add_option("--eps", eps_text, "Comma-separated decreasing epsilons")->required();
  sweep_cmd->add_option("--refine", refine_text, "Epsilons rerun with dx halved");
  sweep_cmd->add_option("--workers", workers, "Worker threads (0: all cores)");
  sweep_cmd->add_option("--out", out_path, "Output directory")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*profile) {
      const FluxModel flux = FluxModel::from_name(flux_name);
      const LayerProfile p = solve_profile(flux, make_shock(flux, c_left, c_right));
      std::ostringstream csv;
      csv << "x,S1\n";
      const long n = std::lround(2.0 * half_width / step);
      for (long k = 0; k <= n; ++k) {
        const double x = -half_width + static_cast<double>(k) * step;
        csv << g17(x) << ',' << g17(eval_profile(p, x)) << '\n';
      }
      if (out_path.empty()) {
        std::cout << csv.str();
      } else {
        std::ofstream(out_path) << csv.str();
      }
    } else if (*evolve_cmd) {
      const CaseConfig cfg = load_config(config_path);
      const CaseResult r = run_case(cfg);
      fs::create_directories(out_path);
      write_timeseries_csv((fs::path(out_path) / "timeseries.csv").string(), r);
      write_track(fs::path(out_path) / "track.csv", r.track);
      write_snapshot(fs::path(out_path) / "final.csv", r.final_state);
      for (const std::string& w : r.summary.warnings) std::cerr << "warning: " << w << '\n';
      std::cout << "excess=" << g17(r.summary.excess) << " c_star=" << g17(r.summary.c_star)
                << " drift_ratio_max=" << g17(r.summary.drift_ratio_max)
                << " runtime_s=" << g17(r.summary.runtime_s) << '\n';
    } else if (*sweep_cmd) {
      const CaseConfig cfg = load_config(config_path);
      SweepOptions opt;
      opt.refine_eps = parse_list(refine_text);
      opt.workers = workers;
      const SweepReport rep = sweep(cfg, parse_list(eps_text), opt);
      fs::create_directories(out_path);
      std::ofstream(fs::path(out_path) / "sweep.json") << rep.to_json().dump(2) << '\n';
      std::cout << "slope=" << g17(rep.fit.slope) << " residual=" << g17(rep.fit.residual)
                << " c_star_family=" << g17(rep.c_star_family) << '\n';
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
