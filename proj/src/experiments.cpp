#include "shocklim/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <mutex>
#include <sstream>
#include <thread>

#include "shocklim/error.hpp"

namespace shocklim {

namespace {

using json = nlohmann::json;

template <class T>
void read_opt(const json& j, const char* key, T& out) {
  if (j.contains(key) && !j.at(key).is_null()) out = j.at(key).get<T>();
}

template <class T>
void read_opt(const json& j, const char* key, std::optional<T>& out) {
  if (j.contains(key) && !j.at(key).is_null()) out = j.at(key).get<T>();
}

double eps_log(double eps) { return eps * std::log(1.0 / eps); }

std::string fmt(double v) {
  if (std::isnan(v)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

// ---------------------------------------------------------------------------
// CaseConfig

Grid CaseConfig::grid() const {
  int n = n_cells;
  if (n <= 0) {
    if (!(epsilon > 0.0 && cells_per_eps > 0.0)) {
      throw Error(Errc::config, "cannot derive n_cells without epsilon and cells_per_eps");
    }
    n = static_cast<int>(std::llround((x_hi - x_lo) * cells_per_eps / epsilon));
  }
  return Grid::make(x_lo, x_hi, n);
}

StepperConfig CaseConfig::stepper() const {
  StepperConfig s;
  s.cfl_advective = cfl_advective;
  s.cfl_diffusive = cfl_diffusive;
  s.t_end = t_end;
  s.output_stride = output_stride;
  return s;
}

CaseConfig CaseConfig::from_json(const json& j) {
  CaseConfig c;
  try {
    read_opt(j, "flux", c.flux);
    read_opt(j, "entropy", c.entropy);
    read_opt(j, "bound_m", c.bound_m);
    if (j.contains("shock")) {
      const json& s = j.at("shock");
      read_opt(s, "c_left", c.c_left);
      read_opt(s, "c_right", c.c_right);
    }
    if (j.contains("domain")) {
      const json& d = j.at("domain");
      read_opt(d, "x_lo", c.x_lo);
      read_opt(d, "x_hi", c.x_hi);
      read_opt(d, "n_cells", c.n_cells);
      read_opt(d, "cells_per_eps", c.cells_per_eps);
    }
    if (j.contains("sim")) {
      const json& s = j.at("sim");
      read_opt(s, "epsilon", c.epsilon);
      read_opt(s, "t_end", c.t_end);
      read_opt(s, "cfl_advective", c.cfl_advective);
      read_opt(s, "cfl_diffusive", c.cfl_diffusive);
      read_opt(s, "output_stride", c.output_stride);
      read_opt(s, "resolution_factor", c.resolution_factor);
    }
    if (j.contains("diag")) {
      const json& d = j.at("diag");
      read_opt(d, "theta", c.theta);
      read_opt(d, "delta", c.delta);
    }
    if (j.contains("init")) {
      const json& i = j.at("init");
      read_opt(i, "preset", c.init.preset);
      read_opt(i, "base", c.init.base);
      read_opt(i, "amplitude", c.init.amplitude);
      read_opt(i, "width", c.init.width);
      read_opt(i, "center", c.init.center);
      read_opt(i, "wavenumber", c.init.wavenumber);
      read_opt(i, "modes", c.init.modes);
      read_opt(i, "seed", c.init.seed);
    }
  } catch (const json::exception& e) {
    throw Error(Errc::config, e.what());
  }
  return c;
}

json CaseConfig::to_json() const {
  json j;
  j["flux"] = flux;
  j["entropy"] = entropy;
  j["bound_m"] = bound_m ? json(*bound_m) : json(nullptr);
  j["shock"] = {{"c_left", c_left}, {"c_right", c_right}};
  j["domain"] = {{"x_lo", x_lo}, {"x_hi", x_hi}, {"n_cells", n_cells},
                 {"cells_per_eps", cells_per_eps}};
  j["sim"] = {{"epsilon", epsilon},
              {"t_end", t_end},
              {"cfl_advective", cfl_advective},
              {"cfl_diffusive", cfl_diffusive},
              {"output_stride", output_stride},
              {"resolution_factor", resolution_factor}};
  j["diag"] = {{"theta", theta ? json(*theta) : json(nullptr)},
               {"delta", delta ? json(*delta) : json(nullptr)}};
  j["init"] = {{"preset", init.preset},       {"base", init.base},
               {"amplitude", init.amplitude}, {"width", init.width},
               {"center", init.center},       {"wavenumber", init.wavenumber},
               {"modes", init.modes},         {"seed", init.seed}};
  return j;
}

// ---------------------------------------------------------------------------
// run_case

CaseResult run_case(const CaseConfig& cfg) {
  const auto wall_start = std::chrono::steady_clock::now();
  if (!(cfg.epsilon > 0.0)) throw Error(Errc::config, "epsilon must be positive");

  const FluxModel flux = FluxModel::from_name(cfg.flux);
  const EntropyModel entropy = EntropyModel::from_name(cfg.entropy);
  const ShockPair shock = make_shock(flux, cfg.c_left, cfg.c_right);
  const Grid grid = cfg.grid();
  const StepperConfig stepper = cfg.stepper();
  stepper.validate();

  if (cfg.init.preset != "shock") {
    const auto [lo, hi] = perturbation_support(cfg.init);
    const double margin = 0.1 * (grid.x_hi - grid.x_lo);
    if (lo < grid.x_lo + margin || hi > grid.x_hi - margin) {
      throw Error(Errc::config, "perturbation support not inside the domain interior");
    }
  }

  SimState state = build_initial_state(cfg.init, flux, shock, grid, cfg.epsilon);
  const double speed = max_wave_speed(state, flux);
  if (grid.dx() * speed > cfg.epsilon / cfg.resolution_factor) {
    throw Error(Errc::resolution_gate,
                "dx max|A'| = " + fmt(grid.dx() * speed) + " exceeds eps/rho = " +
                    fmt(cfg.epsilon / cfg.resolution_factor));
  }

  double sup_norm = std::max(std::abs(cfg.c_left), std::abs(cfg.c_right));
  for (double v : state.u) sup_norm = std::max(sup_norm, std::abs(v));
  const double bound_m = cfg.bound_m.value_or(sup_norm);
  const LambdaBox box = lambda_estimate(entropy, flux, bound_m, 256);

  CaseResult result;
  result.config = cfg;
  CaseSummary& sum = result.summary;
  sum.epsilon = cfg.epsilon;
  sum.dx = grid.dx();
  sum.n_cells = grid.n_cells;
  sum.lambda = box.lambda;
  sum.theta_cert = std::min(shock.jump() / (4.0 * box.lambda * box.lambda), 1.0);
  sum.delta = cfg.delta.value_or(std::log(1.0 / cfg.epsilon));
  sum.theta = cfg.theta.value_or(sum.theta_cert);
  if (sum.delta * sum.theta < 1.0) {
    // The explicit weight needs delta >= 1/theta; raise theta to 1/delta.
    sum.theta = 1.0 / sum.delta;
  }
  const WeightFn weight = WeightFn::make(sum.theta, sum.delta);
  sum.exp_theta_delta = std::exp(-sum.theta * sum.delta);

  ShiftTrack track = ShiftTrack::start(state, shock, entropy, flux, box.lambda);
  const double alpha1 = eps_log(cfg.epsilon);
  const double alpha2 = 2.0 * alpha1;
  double away1_max = -std::numeric_limits<double>::infinity();
  double away2_max = away1_max;
  double rel_ent_initial = 0.0;
  const double mass0 = state.mass();

  EvolveHooks hooks;
  hooks.on_step = [&](const SimState& before, const SimState& after, double dt) {
    advance_shift(track, before, after, dt, entropy, flux, false);
  };
  hooks.on_warning = [&](const std::string& w) { sum.warnings.push_back(w); };
  hooks.observers.push_back([&](const SimState& s) {
    const ShiftSample& head = track.current();
    if (track.samples.empty() || track.samples.back().t < head.t) track.samples.push_back(head);
    result.records.push_back(diagnose(s, head, weight, entropy, flux, shock));
    if (result.records.size() == 1) rel_ent_initial = result.records.front().rel_ent_total;
    away1_max = std::max(away1_max, relative_entropy_total(s, head.x, entropy, shock, alpha1));
    away2_max = std::max(away2_max, relative_entropy_total(s, head.x, entropy, shock, alpha2));
  });

  result.final_state = evolve(std::move(state), flux, stepper, hooks);
  result.track = std::move(track);

  const auto& rec = result.records;
  sum.l2sq_initial = rec.front().l2sq;
  double excess = -std::numeric_limits<double>::infinity();
  for (const DiagRecord& r : rec) excess = std::max(excess, r.l2sq - sum.l2sq_initial);
  sum.excess = std::max(excess, 1e-12);
  sum.c_star = sum.excess / eps_log(cfg.epsilon);

  const double ratio_from = cfg.t_end >= 0.1 ? 0.1 : 0.0;
  for (const DiagRecord& r : rec) {
    if (r.t >= ratio_from && r.t > 0.0 && std::isfinite(r.drift_ratio)) {
      sum.drift_ratio_max = std::max(sum.drift_ratio_max, r.drift_ratio);
    }
  }
  sum.max_abs_xdot = result.track.max_abs_xdot;
  sum.lipschitz_bound = result.track.lipschitz_bound;
  if (result.track.bound_violations > 0) {
    sum.warnings.push_back("shift speed exceeded 2 Lambda^2 on " +
                           std::to_string(result.track.bound_violations) + " steps");
  }

  sum.pos_deriv_initial = rec.front().pos_deriv_norm;
  std::size_t hyp_count = 0, hyp_nonpos = 0;
  sum.max_pos_deriv_growth = rec.size() > 1 ? -std::numeric_limits<double>::infinity() : 0.0;
  for (std::size_t k = 1; k < rec.size(); ++k) {
    if (rec[k - 1].pos_deriv_norm > 0.0) {
      sum.max_pos_deriv_growth =
          std::max(sum.max_pos_deriv_growth,
                   (rec[k].pos_deriv_norm - rec[k - 1].pos_deriv_norm) / rec[k - 1].pos_deriv_norm);
    }
    ++hyp_count;
    if (rec[k].hyp <= 0.0) ++hyp_nonpos;
  }
  sum.hyp_nonpositive_fraction =
      hyp_count > 0 ? static_cast<double>(hyp_nonpos) / static_cast<double>(hyp_count) : 1.0;
  sum.max_dHdt = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 1; k + 1 < rec.size(); ++k) {
    sum.max_dHdt = std::max(sum.max_dHdt, (rec[k + 1].H - rec[k - 1].H) / (rec[k + 1].t - rec[k - 1].t));
  }
  if (rec.size() < 3) sum.max_dHdt = 0.0;
  sum.away_excess_alpha1 = away1_max - rel_ent_initial;
  sum.away_excess_alpha2 = away2_max - rel_ent_initial;

  const double elapsed = result.final_state.t - rec.front().t;
  const double drift =
      std::abs(result.final_state.mass() - mass0 - result.final_state.inflow);
  sum.conservation_residual = elapsed > 0.0 ? drift / elapsed : drift;
  sum.runtime_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - wall_start).count();
  return result;
}

std::string timeseries_csv(const CaseResult& result) {
  const CaseConfig& c = result.config;
  const CaseSummary& s = result.summary;
  std::ostringstream out;
  out << "# epsilon=" << fmt(c.epsilon) << ",theta=" << fmt(s.theta) << ",delta=" << fmt(s.delta)
      << ",lambda=" << fmt(s.lambda) << ",x_lo=" << fmt(c.x_lo) << ",x_hi=" << fmt(c.x_hi)
      << ",n_cells=" << s.n_cells << ",flux=" << c.flux << ",entropy=" << c.entropy
      << ",preset=" << c.init.preset << ",seed=" << c.init.seed << "\n";
  out << "t,X,Xdot,H,l2sq,rel_ent_total,pos_deriv_norm,hyp,dif,drift_dev2,drift_ratio\n";
  for (const DiagRecord& r : result.records) {
    out << fmt(r.t) << ',' << fmt(r.x_shift) << ',' << fmt(r.xdot) << ',' << fmt(r.H) << ','
        << fmt(r.l2sq) << ',' << fmt(r.rel_ent_total) << ',' << fmt(r.pos_deriv_norm) << ','
        << fmt(r.hyp) << ',' << fmt(r.dif) << ',' << fmt(r.drift_dev2) << ','
        << fmt(r.drift_ratio) << '\n';
  }
  return out.str();
}

void write_timeseries_csv(const std::string& path, const CaseResult& result) {
  std::ofstream f(path);
  if (!f) throw Error(Errc::config, "cannot open " + path);
  f << timeseries_csv(result);
}

// ---------------------------------------------------------------------------
// Rate fitting and sweeps

RateFit fit_rate(const std::vector<std::pair<double, double>>& points) {
  if (points.size() < 2) throw Error(Errc::invalid_parameter, "fit needs at least two points");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(points.size());
  for (const auto& [a, v] : points) {
    if (!(a > 0.0) || !(v > 0.0)) {
      throw Error(Errc::nonpositive_value, "log fit needs positive abscissa and values");
    }
    const double x = std::log(a);
    const double y = std::log(v);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double denom = n * sxx - sx * sx;
  if (denom == 0.0) throw Error(Errc::invalid_parameter, "degenerate abscissae");
  const double slope = (n * sxy - sx * sy) / denom;
  const double intercept = (sy - slope * sx) / n;
  double ss = 0.0;
  for (const auto& [a, v] : points) {
    const double r = std::log(v) - (intercept + slope * std::log(a));
    ss += r * r;
  }
  return RateFit{slope, intercept, std::sqrt(ss / n)};
}

SweepReport sweep(const CaseConfig& base_cfg, const std::vector<double>& eps_list,
                  const SweepOptions& options) {
  if (eps_list.size() < 3) throw Error(Errc::invalid_parameter, "sweep needs at least 3 epsilons");
  for (std::size_t k = 1; k < eps_list.size(); ++k) {
    if (!(eps_list[k] < eps_list[k - 1])) {
      throw Error(Errc::invalid_parameter, "sweep epsilons must be strictly decreasing");
    }
  }
  const auto wall_start = std::chrono::steady_clock::now();
  const CaseRunner runner =
      options.runner ? options.runner : CaseRunner([](const CaseConfig& c) { return run_case(c).summary; });

  struct Job {
    std::size_t entry;
    bool refined;
    CaseConfig cfg;
  };
  SweepReport report;
  std::vector<Job> jobs;
  for (std::size_t k = 0; k < eps_list.size(); ++k) {
    SweepEntry e;
    e.epsilon = eps_list[k];
    report.entries.push_back(e);
    CaseConfig c = base_cfg;
    c.epsilon = eps_list[k];
    c.n_cells = 0;
    jobs.push_back({k, false, c});
    const bool refine = std::any_of(options.refine_eps.begin(), options.refine_eps.end(),
                                    [&](double r) { return std::abs(r - eps_list[k]) <= 1e-12 * r; });
    if (refine) {
      c.cells_per_eps *= 2.0;
      jobs.push_back({k, true, c});
    }
  }
  // Most expensive first so the pool drains evenly.
  std::stable_sort(jobs.begin(), jobs.end(), [](const Job& a, const Job& b) {
    const double wa = a.cfg.cells_per_eps * a.cfg.cells_per_eps / a.cfg.epsilon;
    const double wb = b.cfg.cells_per_eps * b.cfg.cells_per_eps / b.cfg.epsilon;
    return wa / a.cfg.epsilon > wb / b.cfg.epsilon;
  });

  std::vector<std::optional<CaseSummary>> base_out(eps_list.size());
  std::vector<std::optional<CaseSummary>> refined_out(eps_list.size());
  std::vector<std::string> errors(eps_list.size());
  std::mutex mu;
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t j = next++; j < jobs.size(); j = next++) {
      const Job& job = jobs[j];
      try {
        CaseSummary s = runner(job.cfg);
        std::lock_guard lock(mu);
        (job.refined ? refined_out : base_out)[job.entry] = std::move(s);
      } catch (const std::exception& ex) {
        std::lock_guard lock(mu);
        if (!job.refined) errors[job.entry] = ex.what();
      }
    }
  };
  unsigned workers = options.workers ? options.workers : std::thread::hardware_concurrency();
  workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(jobs.size())));
  std::vector<std::thread> pool;
  for (unsigned w = 1; w < workers; ++w) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();

  std::vector<std::pair<double, double>> pts, pts_refined;
  bool any_refined = false;
  for (std::size_t k = 0; k < eps_list.size(); ++k) {
    SweepEntry& e = report.entries[k];
    if (!base_out[k]) {
      e.ok = false;
      e.error = errors[k];
      continue;
    }
    e.ok = true;
    e.summary = *base_out[k];
    e.refined = refined_out[k];
    pts.emplace_back(eps_log(e.epsilon), e.summary.excess);
    double used = e.summary.excess;
    if (e.refined) {
      any_refined = true;
      used = e.refined->excess;
      e.under_resolved = std::abs(e.refined->excess - e.summary.excess) >= 0.1 * e.summary.excess;
    }
    pts_refined.emplace_back(eps_log(e.epsilon), used);
    report.c_star_family = std::max(report.c_star_family, e.summary.c_star);
    const bool passes = e.summary.warnings.empty() && !e.under_resolved &&
                        e.summary.max_abs_xdot <= e.summary.lipschitz_bound + 1e-8;
    if (passes && (!report.eps0 || e.epsilon > *report.eps0)) report.eps0 = e.epsilon;
  }
  if (pts.size() < 3) {
    throw Error(Errc::invalid_parameter,
                "rate fit needs at least 3 successful cases, got " + std::to_string(pts.size()));
  }
  report.fit = fit_rate(pts);
  if (any_refined) report.fit_refined = fit_rate(pts_refined);
  report.runtime_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - wall_start).count();
  return report;
}

namespace {

json summary_json(const CaseSummary& s) {
  return json{{"epsilon", s.epsilon},
              {"dx", s.dx},
              {"n_cells", s.n_cells},
              {"lambda", s.lambda},
              {"theta", s.theta},
              {"theta_cert", s.theta_cert},
              {"delta", s.delta},
              {"l2sq_initial", s.l2sq_initial},
              {"excess", s.excess},
              {"c_star", s.c_star},
              {"drift_ratio_max", s.drift_ratio_max},
              {"max_abs_xdot", s.max_abs_xdot},
              {"lipschitz_bound", s.lipschitz_bound},
              {"pos_deriv_initial", s.pos_deriv_initial},
              {"max_pos_deriv_growth", s.max_pos_deriv_growth},
              {"hyp_nonpositive_fraction", s.hyp_nonpositive_fraction},
              {"max_dHdt", s.max_dHdt},
              {"exp_theta_delta", s.exp_theta_delta},
              {"away_excess_alpha1", s.away_excess_alpha1},
              {"away_excess_alpha2", s.away_excess_alpha2},
              {"conservation_residual", s.conservation_residual},
              {"runtime_s", s.runtime_s},
              {"warnings", s.warnings}};
}

}  // namespace

json SweepReport::to_json() const {
  json j;
  json eps = json::array(), excess = json::array(), c_star = json::array(),
       drift = json::array(), runtime = json::array(), ok = json::array(),
       errors = json::array(), cases = json::array(), refinement = json::array();
  for (const SweepEntry& e : entries) {
    eps.push_back(e.epsilon);
    ok.push_back(e.ok);
    errors.push_back(e.error);
    excess.push_back(e.ok ? json(e.summary.excess) : json(nullptr));
    c_star.push_back(e.ok ? json(e.summary.c_star) : json(nullptr));
    drift.push_back(e.ok ? json(e.summary.drift_ratio_max) : json(nullptr));
    runtime.push_back(e.ok ? json(e.summary.runtime_s) : json(nullptr));
    if (e.ok) cases.push_back(summary_json(e.summary));
    if (e.refined) {
      refinement.push_back({{"eps", e.epsilon},
                            {"excess", e.summary.excess},
                            {"excess_refined", e.refined->excess},
                            {"relative_change",
                             (e.refined->excess - e.summary.excess) / e.summary.excess},
                            {"under_resolved", e.under_resolved},
                            {"case", summary_json(*e.refined)}});
    }
  }
  j["eps"] = eps;
  j["excess"] = excess;
  j["slope"] = fit.slope;
  j["intercept"] = fit.intercept;
  j["residual"] = fit.residual;
  j["c_star"] = c_star;
  j["c_star_family"] = c_star_family;
  j["drift_ratio_max"] = drift;
  j["runtime_s"] = runtime;
  j["ok"] = ok;
  j["errors"] = errors;
  j["eps0"] = eps0 ? json(*eps0) : json(nullptr);
  j["refinement"] = refinement;
  j["slope_refined"] = fit_refined ? json(fit_refined->slope) : json(nullptr);
  j["total_runtime_s"] = runtime_s;
  j["cases"] = cases;
  return j;
}

}  // namespace shocklim
