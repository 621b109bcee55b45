#include "ris/solvers.hpp"

#include <cmath>
#include <limits>
#include <optional>
#include <ostream>

#include "ris/csv.hpp"
#include "ris/errors.hpp"

namespace ris
{

TimePartition::TimePartition(std::vector<double> nodes) : nodes_(std::move(nodes))
{
  if (nodes_.size() < 2)
  {
    throw DomainError("a time partition needs at least two nodes");
  }
  if (nodes_.front() != 0.0)
  {
    throw DomainError("a time partition starts at t = 0");
  }
  for (std::size_t k = 1; k < nodes_.size(); ++k)
  {
    if (!(nodes_[k] > nodes_[k - 1]))
    {
      throw DomainError("partition nodes must be strictly increasing");
    }
    fineness_ = std::max(fineness_, nodes_[k] - nodes_[k - 1]);
  }
}

TimePartition TimePartition::uniform(double horizon, double tau)
{
  if (!(horizon > 0.0) || !(tau > 0.0))
  {
    throw DomainError("horizon and tau must be positive");
  }
  const auto n = static_cast<std::size_t>(std::ceil(horizon / tau - 1e-9));
  std::vector<double> nodes(n + 1);
  for (std::size_t k = 0; k <= n; ++k)
  {
    nodes[k] = horizon * static_cast<double>(k) / static_cast<double>(n);
  }
  nodes.back() = horizon;
  return TimePartition(std::move(nodes));
}

// ---------------------------------------------------------------------------

Penalty Scheme::penalty(double tau_n) const
{
  switch (kind)
  {
    case SchemeKind::energetic:
      return Penalty::metric();
    case SchemeKind::viscous:
      if (!(parameter > 0.0) || !(tau_n > 0.0))
      {
        throw DomainError("viscous scheme needs eps > 0 and tau > 0");
      }
      return Penalty::viscous(parameter, tau_n);
    case SchemeKind::visco_energetic:
      if (!(parameter > 0.0))
      {
        throw DomainError("visco-energetic scheme needs mu > 0");
      }
      return Penalty::visco_energetic(parameter);
  }
  throw DomainError("unknown scheme");
}

std::string Scheme::label() const
{
  switch (kind)
  {
    case SchemeKind::energetic:
      return "energetic";
    case SchemeKind::viscous:
      return "viscous(eps=" + csv::number(parameter) + ")";
    case SchemeKind::visco_energetic:
      return "visco-energetic(mu=" + csv::number(parameter) + ")";
  }
  return "unknown";
}

namespace
{

GridMinimum step_with(const EnergyModel& model, const GridSpace& grid, double t_n,
                      const State& u_prev, Penalty penalty, LandscapeTracker* tracker)
{
  return tracker ? tracker->minimize(t_n, u_prev, penalty)
                 : minimize_exhaustive(model, grid, t_n, u_prev, penalty);
}

}  // namespace

GridMinimum energetic_step(const EnergyModel& model, const GridSpace& grid, double t_n,
                           const State& u_prev, LandscapeTracker* tracker)
{
  return step_with(model, grid, t_n, u_prev, Scheme::energetic().penalty(1.0), tracker);
}

GridMinimum viscous_step(const EnergyModel& model, const GridSpace& grid, double t_n,
                         const State& u_prev, double eps, double tau_n, LandscapeTracker* tracker)
{
  return step_with(model, grid, t_n, u_prev, Scheme::viscous(eps).penalty(tau_n), tracker);
}

GridMinimum ve_step(const EnergyModel& model, const GridSpace& grid, double t_n,
                    const State& u_prev, double mu, LandscapeTracker* tracker)
{
  return step_with(model, grid, t_n, u_prev, Scheme::visco_energetic(mu).penalty(1.0), tracker);
}

// ---------------------------------------------------------------------------

DiscreteTrajectory solve(const EnergyModel& model, const GridSpace& grid, const Scheme& scheme,
                         const TimePartition& partition, const State& u0,
                         const SolveOptions& options)
{
  if (!grid.is_node(u0))
  {
    throw DomainError("initial state " + u0.to_string() + " is not a grid node");
  }
  if (partition.horizon() > model.horizon() * (1.0 + 1e-12))
  {
    throw DomainError("partition extends beyond the model's time horizon");
  }
  std::optional<LandscapeTracker> tracker;
  if (options.pruning)
  {
    tracker.emplace(model, grid);
  }

  DiscreteTrajectory out;
  out.partition = partition;
  out.scheme = scheme;
  out.states.reserve(partition.steps() + 1);
  out.steps.reserve(partition.steps());
  out.states.push_back(grid.point(grid.nearest(u0)));

  const auto& t = partition.nodes();
  double prev_energy = model.energy(t[0], out.states[0]);
  for (std::size_t n = 1; n < t.size(); ++n)
  {
    const State& prev = out.states.back();
    const double tau_n = t[n] - t[n - 1];
    const Penalty penalty = scheme.penalty(tau_n);
    const GridMinimum m = tracker ? tracker->minimize(t[n], prev, penalty)
                                  : minimize_exhaustive(model, grid, t[n], prev, penalty);
    StepRecord rec;
    rec.objective = m.objective;
    rec.runner_up_gap = m.runner_up_gap;
    rec.energy = m.energy;
    rec.dissipation = m.distance;
    rec.work = 0.5 * tau_n * (model.power(t[n - 1], prev) + model.power(t[n], prev));
    rec.upper_estimate = rec.energy + rec.dissipation - prev_energy - rec.work;
    out.evaluations += m.evaluations;
    prev_energy = rec.energy;
    out.steps.push_back(rec);
    out.states.push_back(m.state);
  }
  return out;
}

BVCurve interpolant(const DiscreteTrajectory& trajectory, double h)
{
  return detect_jumps(trajectory.partition.nodes(), trajectory.states, h);
}

double certificate_violation(const EnergyModel& model, const GridSpace& grid,
                             const DiscreteTrajectory& trajectory, std::size_t n)
{
  if (n == 0 || n >= trajectory.states.size())
  {
    throw DomainError("certificate requested for a step outside the trajectory");
  }
  const auto& t = trajectory.partition.nodes();
  const State& prev = trajectory.states[n - 1];
  const Penalty penalty = trajectory.scheme.penalty(t[n] - t[n - 1]);
  auto objective = [&](const State& v) { return model.energy(t[n], v) + penalty(distance(prev, v)); };
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t idx = 0; idx < grid.size(); ++idx)
  {
    best = std::min(best, objective(grid.point(idx)));
  }
  return objective(trajectory.states[n]) - best;
}

void write_trajectory_csv(std::ostream& os, const DiscreteTrajectory& trajectory)
{
  const std::size_t dim = trajectory.states.front().dim();
  std::vector<std::string> header{"n", "t_n"};
  for (std::size_t k = 1; k <= dim; ++k)
  {
    header.push_back("U_" + std::to_string(k));
  }
  header.emplace_back("objective");
  header.emplace_back("runner_up_gap");
  csv::write_row(os, header);
  const auto& t = trajectory.partition.nodes();
  for (std::size_t n = 0; n < trajectory.states.size(); ++n)
  {
    std::vector<std::string> row{std::to_string(n), csv::number(t[n])};
    for (const double x : trajectory.states[n])
    {
      row.push_back(csv::number(x));
    }
    if (n == 0)
    {
      row.emplace_back();
      row.emplace_back();
    }
    else
    {
      row.push_back(csv::number(trajectory.steps[n - 1].objective));
      row.push_back(csv::number(trajectory.steps[n - 1].runner_up_gap));
    }
    csv::write_row(os, row);
  }
}

}  // namespace ris
