#include "ris/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <mutex>
#include <thread>

#include "ris/csv.hpp"
#include "ris/errors.hpp"

namespace ris
{

std::unique_ptr<EnergyModel> build_model(const RunConfig& config) { return make_model(config.model); }

GridSpace build_grid(const RunConfig& config, double h) { return GridSpace(config.bounds, h); }

Resolution refine_for(const Scheme& scheme, Resolution base, double max_mu_tau, double max_qh)
{
  auto factor = [](double value, double cap) {
    return cap > 0.0 && value > cap ? std::ceil(value / cap - 1e-9) : 1.0;
  };
  switch (scheme.kind)
  {
    case SchemeKind::energetic:
      return base;
    case SchemeKind::viscous:
      // mu_eff tau = eps is fixed; only the grid can be refined.
      base.h /= factor(scheme.parameter / base.tau * base.h, max_qh);
      return base;
    case SchemeKind::visco_energetic:
      base.h /= factor(scheme.parameter * base.h, max_qh);
      base.tau /= factor(scheme.parameter * base.tau, max_mu_tau);
      return base;
  }
  return base;
}

void run_parallel(std::size_t count, const std::function<void(std::size_t)>& job)
{
  std::size_t workers = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("RIS_SIM_THREADS"))
  {
    const long v = std::strtol(env, nullptr, 10);
    if (v > 0)
    {
      workers = static_cast<std::size_t>(v);
    }
  }
  workers = std::min(workers, count);
  if (workers <= 1)
  {
    for (std::size_t k = 0; k < count; ++k)
    {
      job(k);
    }
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w)
  {
    pool.emplace_back([&] {
      for (std::size_t k = next++; k < count; k = next++)
      {
        try
        {
          job(k);
        }
        catch (...)
        {
          const std::lock_guard lock(failure_mutex);
          if (!failure)
          {
            failure = std::current_exception();
          }
        }
      }
    });
  }
  for (auto& t : pool)
  {
    t.join();
  }
  if (failure)
  {
    std::rethrow_exception(failure);
  }
}

namespace
{

std::string file_safe(std::string label)
{
  for (char& c : label)
  {
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '.' || c == '-' || c == '_' || c == '='))
    {
      c = '_';
    }
  }
  return label;
}

std::ofstream open_artifact(const std::filesystem::path& path)
{
  std::ofstream os(path);
  if (!os)
  {
    throw UsageError("output_dir", "cannot write " + path.string());
  }
  return os;
}

struct PlannedRun
{
  std::string label;
  Scheme scheme;
  Resolution resolution;
};

std::vector<PlannedRun> plan_runs(const RunConfig& config)
{
  std::vector<PlannedRun> out;
  const Resolution base{config.h, config.tau};
  for (const auto& name : config.schemes)
  {
    if (name == "energetic")
    {
      out.push_back({"energetic", Scheme::energetic(), base});
    }
    else if (name == "viscous")
    {
      for (const double eps : config.epsilon)
      {
        Resolution r = base;
        if (config.viscous_tau == ViscousTauRule::square)
        {
          r.tau = eps * eps;
        }
        const Scheme s = Scheme::viscous(eps);
        out.push_back({"viscous_eps=" + csv::number(eps), s, refine_for(s, r, config.max_mu_tau, config.max_mu_h)});
      }
    }
    else
    {
      for (const double mu : config.mu)
      {
        const Scheme s = Scheme::visco_energetic(mu);
        out.push_back({"ve_mu=" + csv::number(mu), s, refine_for(s, base, config.max_mu_tau, config.max_mu_h)});
      }
    }
  }
  return out;
}

VerificationReport verify_run(const EnergyModel& model, const GridSpace& grid, const Scheme& scheme,
                              const BVCurve& curve, double tol)
{
  const VerifyOptions options{tol, 5};
  switch (scheme.kind)
  {
    case SchemeKind::energetic:
      return check_energetic(model, grid, curve, options);
    case SchemeKind::viscous:
      return check_bv(model, grid, curve, options);
    case SchemeKind::visco_energetic:
      return check_ve(model, grid, curve, scheme.parameter, options);
  }
  throw DomainError("unknown scheme");
}

}  // namespace

bool RunResult::all_passed() const
{
  return std::all_of(entries.begin(), entries.end(), [](const auto& e) { return e.report.passed(); });
}

RunResult run_single(const RunConfig& config)
{
  config.validate();
  const auto model = build_model(config);
  const auto plan = plan_runs(config);
  if (plan.empty())
  {
    throw UsageError("schemes", "no scheme selected");
  }
  if (!config.output_dir.empty())
  {
    std::filesystem::create_directories(config.output_dir);
  }
  RunResult result;
  result.entries.resize(plan.size());
  run_parallel(plan.size(), [&](std::size_t k) {
    const auto& p = plan[k];
    const GridSpace grid = build_grid(config, p.resolution.h);
    if (!grid.is_node(config.initial_state))
    {
      throw UsageError("initial_state", "not a node of the grid with h = " + csv::number(p.resolution.h));
    }
    RunEntry& e = result.entries[k];
    e.label = p.label;
    e.scheme = p.scheme;
    e.resolution = p.resolution;
    e.trajectory = solve(*model, grid, p.scheme, TimePartition::uniform(config.horizon, p.resolution.tau),
                         config.initial_state);
    e.curve = interpolant(e.trajectory, p.resolution.h);
    if (p.resolution.tau != config.tau)
    {
      // Refined runs are reported on the configured partition, where fast
      // viscous transits show up as jumps.
      e.curve = resample(e.curve, TimePartition::uniform(config.horizon, config.tau).nodes(), config.h);
    }
    e.report = verify_run(*model, grid, p.scheme, e.curve, config.tolerance());
    if (!config.output_dir.empty())
    {
      const std::string stem = file_safe(p.label);
      e.trajectory_path = config.output_dir / (stem + "_trajectory.csv");
      e.curve_path = config.output_dir / (stem + "_curve.csv");
      e.report_path = config.output_dir / (stem + "_report.csv");
      auto traj = open_artifact(e.trajectory_path);
      write_trajectory_csv(traj, e.trajectory);
      auto curve = open_artifact(e.curve_path);
      write_curve_csv(curve, e.curve);
      auto report = open_artifact(e.report_path);
      write_report_csv(report, e.report);
      auto text = open_artifact(config.output_dir / (stem + "_report.txt"));
      write_report_text(text, e.report);
    }
  });
  return result;
}

// ---------------------------------------------------------------------------

BVCurve resample(const BVCurve& curve, const std::vector<double>& times, double h)
{
  std::vector<State> values;
  values.reserve(times.size());
  for (const double t : times)
  {
    values.push_back(curve.values()[curve.sample_index(t)]);
  }
  return detect_jumps(times, values, h);
}

std::vector<double> transition_times(const BVCurve& curve, double merge_gap)
{
  std::vector<double> out;
  double last_end = -std::numeric_limits<double>::infinity();
  for (const auto& c : jump_clusters(curve))
  {
    if (out.empty() || c.t_start - last_end > merge_gap)
    {
      out.push_back(c.t_start);
    }
    last_end = c.t_end;
  }
  return out;
}

Comparison compare_trajectories(const EnergyModel& model, const BVCurve& a, const BVCurve& b, double delta)
{
  if (a.size() != b.size())
  {
    throw UsageError("curves", "sample grids differ in length");
  }
  for (std::size_t k = 0; k < a.size(); ++k)
  {
    const double ta = a.times()[k];
    if (std::fabs(ta - b.times()[k]) > 1e-12 * std::max(1.0, std::fabs(ta)))
    {
      throw UsageError("curves", "sample grids differ at index " + std::to_string(k));
    }
  }
  std::vector<std::pair<double, double>> excluded;
  for (const BVCurve* c : {&a, &b})
  {
    for (const auto& cluster : jump_clusters(*c))
    {
      excluded.emplace_back(cluster.t_start - delta, cluster.t_end + delta);
    }
  }
  Comparison out;
  for (std::size_t k = 0; k < a.size(); ++k)
  {
    const double t = a.times()[k];
    const bool skip = std::any_of(excluded.begin(), excluded.end(),
                                  [t](const auto& w) { return t >= w.first && t <= w.second; });
    if (skip)
    {
      continue;
    }
    ++out.compared;
    const double d = distance(a.values()[k], b.values()[k]);
    if (d > out.sup_distance)
    {
      out.sup_distance = d;
      out.worst_time = t;
    }
    out.max_energy_gap =
      std::max(out.max_energy_gap, std::fabs(model.energy(t, a.values()[k]) - model.energy(t, b.values()[k])));
  }
  return out;
}

bool SweepResult::passed() const
{
  return std::all_of(rows.begin(), rows.end(), [](const auto& r) { return r.verification_passed; });
}

SweepResult run_mu_sweep(const RunConfig& config, SweepDirection direction)
{
  config.validate();
  if (config.mu.size() < 2 || config.mu.back() / config.mu.front() < 1e3 * (1.0 - 1e-12))
  {
    throw UsageError("mu", "a sweep needs a mu list spanning at least three decades");
  }
  const auto model = build_model(config);
  const Resolution base{config.h, config.tau};
  const auto coarse_times = TimePartition::uniform(config.horizon, config.tau).nodes();
  const double merge_gap = config.jump_exclusion * config.tau;
  if (!config.output_dir.empty())
  {
    std::filesystem::create_directories(config.output_dir);
  }

  SweepResult result;
  const std::size_t n = config.mu.size();
  result.rows.resize(n);
  result.curves.resize(n);

  // Job 0 is the reference; jobs 1..n are the mu entries.
  std::vector<BVCurve> fine(n + 1);
  run_parallel(n + 1, [&](std::size_t job) {
    Scheme scheme;
    Resolution res = base;
    if (job == 0)
    {
      if (direction == SweepDirection::down)
      {
        scheme = Scheme::energetic();
      }
      else
      {
        scheme = Scheme::viscous(config.bv_epsilon);
        res.tau = config.bv_epsilon * config.bv_epsilon;
        res = refine_for(scheme, res, config.max_mu_tau, config.max_mu_h);
      }
    }
    else
    {
      scheme = Scheme::visco_energetic(config.mu[job - 1]);
      res = refine_for(scheme, base, config.max_mu_tau, config.max_mu_h);
    }
    const GridSpace grid = build_grid(config, res.h);
    if (!grid.is_node(config.initial_state))
    {
      throw UsageError("initial_state", "not a node of the grid with h = " + csv::number(res.h));
    }
    const auto traj =
      solve(*model, grid, scheme, TimePartition::uniform(config.horizon, res.tau), config.initial_state);
    fine[job] = interpolant(traj, res.h);
    if (job == 0)
    {
      result.reference_resolution = res;
      return;
    }
    SweepRow& row = result.rows[job - 1];
    row.mu = scheme.parameter;
    row.resolution = res;
    if (config.sweep_verify)
    {
      row.verified = true;
      row.verification_passed =
        check_ve(*model, grid, fine[job], row.mu, VerifyOptions{config.tolerance(), 5}).passed();
    }
    if (!config.output_dir.empty())
    {
      row.trajectory_path = config.output_dir / file_safe("sweep_mu=" + csv::number(row.mu) + "_trajectory.csv");
      auto os = open_artifact(row.trajectory_path);
      write_trajectory_csv(os, traj);
    }
  });

  result.reference_tag = direction == SweepDirection::down ? "energetic" : "bv";
  result.reference_curve = resample(fine[0], coarse_times, config.h);
  result.reference_jump_times = transition_times(result.reference_curve, merge_gap);
  const double delta = config.jump_exclusion * config.tau;
  for (std::size_t k = 0; k < n; ++k)
  {
    SweepRow& row = result.rows[k];
    result.curves[k] = resample(fine[k + 1], coarse_times, config.h);
    row.jump_times = transition_times(result.curves[k], merge_gap);
    const auto cmp = compare_trajectories(*model, result.curves[k], result.reference_curve, delta);
    row.sup_distance = cmp.sup_distance;
    row.max_energy_gap = cmp.max_energy_gap;
  }

  // Expected trend: distance to the reference shrinks toward the limit end of the list.
  result.inversion_tolerance = 2.0 * config.h;
  for (std::size_t k = 0; k + 1 < n; ++k)
  {
    const double lo = result.rows[k].sup_distance;
    const double hi = result.rows[k + 1].sup_distance;
    const bool inverted = direction == SweepDirection::down ? hi + result.inversion_tolerance < lo
                                                            : hi > lo + result.inversion_tolerance;
    result.trend_inversions += inverted ? 1 : 0;
  }

  if (!config.output_dir.empty())
  {
    result.summary_path = config.output_dir / (std::string("sweep_") +
                                               (direction == SweepDirection::down ? "down" : "up") + ".csv");
    auto os = open_artifact(result.summary_path);
    csv::write_row(os, {"mu", "h", "tau", "jump_time", "sup_distance", "max_energy_gap", "verified", "pass",
                        "trajectory"});
    for (const auto& row : result.rows)
    {
      csv::write_row(os, {csv::number(row.mu), csv::number(row.resolution.h), csv::number(row.resolution.tau),
                          row.jump_times.empty() ? std::string() : csv::number(row.jump_times.front()),
                          csv::number(row.sup_distance), csv::number(row.max_energy_gap),
                          row.verified ? "1" : "0", row.verification_passed ? "1" : "0",
                          row.trajectory_path.string()});
    }
  }
  return result;
}

}  // namespace ris
