#include "ris/verify.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "ris/csv.hpp"
#include "ris/errors.hpp"
#include "ris/functionals.hpp"
#include "ris/jump_cost.hpp"
#include "ris/minimize.hpp"

namespace ris
{

bool VerificationReport::passed() const
{
  return std::all_of(conditions.begin(), conditions.end(), [](const auto& c) { return c.pass; });
}

const ConditionEntry* VerificationReport::find(const std::string& name) const
{
  const auto it = std::find_if(conditions.begin(), conditions.end(), [&](const auto& c) { return c.name == name; });
  return it == conditions.end() ? nullptr : &*it;
}

double default_tolerance(double c_tol, double h, double tau, double quadrature_step)
{
  return c_tol * (h + tau + quadrature_step);
}

namespace
{

/// Running maximum of a violation with the time where it occurs.
class Worst
{
public:
  explicit Worst(std::string name) : name_(std::move(name)) {}

  void update(double violation, double t)
  {
    if (violation > value_)
    {
      value_ = violation;
      time_ = t;
    }
  }

  ConditionEntry entry(double tol) const { return {name_, value_, time_, tol, value_ <= tol}; }

private:
  std::string name_;
  double value_ = 0.0;
  double time_ = 0.0;
};

/// Signed balance residual at every sample for the jump cost e.
std::vector<BalanceSample> balance_series(const EnergyModel& model, const BVCurve& u, const JumpCost& e)
{
  const auto& t = u.times();
  const auto& x = u.values();
  auto delta = [&](double time, const State& a, const State& b) {
    return a == b ? 0.0 : std::max(0.0, e(time, a, b) - distance(a, b));
  };
  std::vector<BalanceSample> out(u.size());
  const double e0 = model.energy(t[0], x[0]);
  double variation = 0.0;
  double work = 0.0;
  out[0] = {t[0], 0.0};
  for (std::size_t k = 1; k < u.size(); ++k)
  {
    const State& frozen = u.right_limit(k - 1);
    variation += distance(x[k - 1], frozen) + distance(frozen, u.left_limit(k)) +
                 distance(u.left_limit(k), x[k]);
    variation += delta(t[k - 1], x[k - 1], frozen) + delta(t[k], u.left_limit(k), x[k]);
    work += 0.5 * (t[k] - t[k - 1]) * (model.power(t[k - 1], frozen) + model.power(t[k], frozen));
    out[k] = {t[k], model.energy(t[k], x[k]) + variation - e0 - work};
  }
  return out;
}

void add_balance(VerificationReport& report, const EnergyModel& model, const BVCurve& u,
                 const JumpCost& e, const VerifyOptions& options, bool localized)
{
  report.balance = balance_series(model, u, e);
  Worst balance("energy_balance");
  for (const auto& s : report.balance)
  {
    balance.update(std::fabs(s.residual), s.t);
  }
  report.conditions.push_back(balance.entry(options.tol));
  if (!localized)
  {
    return;
  }
  // On [t_i, t_j] the localized inequality's LHS - RHS is res_j - res_i.
  Worst local("localized_inequality");
  const std::size_t n = report.balance.size();
  for (std::size_t level = 0; level <= options.dyadic_levels; ++level)
  {
    const std::size_t parts = std::size_t{1} << level;
    for (std::size_t p = 0; p < parts; ++p)
    {
      const std::size_t i = (n - 1) * p / parts;
      const std::size_t j = (n - 1) * (p + 1) / parts;
      if (j > i)
      {
        local.update(report.balance[j].residual - report.balance[i].residual, report.balance[i].t);
      }
    }
  }
  report.conditions.push_back(local.entry(options.tol));
}

void add_jumps(VerificationReport& report, const EnergyModel& model, const BVCurve& u, const JumpCost& e,
               const VerifyOptions& options, bool as_condition)
{
  Worst worst("jump_condition");
  for (const auto& cluster : jump_clusters(u))
  {
    JumpEntry entry;
    entry.t_start = cluster.t_start;
    entry.t_end = cluster.t_end;
    entry.left = cluster.left;
    entry.right = cluster.right;
    entry.energy_drop = model.energy(cluster.t_start, cluster.left) - model.energy(cluster.t_start, cluster.right);
    entry.cost = e(cluster.t_start, cluster.left, cluster.right);
    entry.gap = std::fabs(entry.energy_drop - entry.cost);
    worst.update(entry.gap, entry.t_start);
    report.jumps.push_back(entry);
  }
  if (as_condition)
  {
    report.conditions.push_back(worst.entry(options.tol));
  }
}

VerificationReport make_report(const char* name, double mu, const GridSpace& grid, const VerifyOptions& options)
{
  VerificationReport report;
  report.concept_name = name;
  report.mu = mu;
  report.h = grid.spacing();
  report.tol = options.tol;
  return report;
}

}  // namespace

JumpCost viscous_jump_cost(const EnergyModel& model, const GridSpace& grid)
{
  return {"v", [&model, &grid](double t, const State& a, const State& b) {
            return viscous_cost(model, grid, t, a, b).total;
          }};
}

JumpCost ve_jump_cost(const EnergyModel& model, const GridSpace& grid, double mu)
{
  return {"c_mu", [&model, &grid, mu](double t, const State& a, const State& b) {
            return ve_cost(model, grid, t, a, b, mu).total;
          }};
}

VerificationReport check_energetic(const EnergyModel& model, const GridSpace& grid, const BVCurve& u,
                                   const VerifyOptions& options)
{
  auto report = make_report("energetic", 0.0, grid, options);
  LandscapeTracker tracker(model, grid);
  Worst stability("global_stability");
  for (std::size_t k = 0; k < u.size(); ++k)
  {
    const double t = u.times()[k];
    const State& x = u.values()[k];
    const double gap = model.energy(t, x) - tracker.minimize(t, x, Penalty::metric()).objective;
    stability.update(gap, t);
  }
  report.conditions.push_back(stability.entry(options.tol));
  const JumpCost d = JumpCost::metric();
  add_balance(report, model, u, d, options, false);
  add_jumps(report, model, u, d, options, false);
  return report;
}

VerificationReport check_bv(const EnergyModel& model, const GridSpace& grid, const BVCurve& u,
                            const VerifyOptions& options)
{
  auto report = make_report("bv", 0.0, grid, options);
  Worst stability("local_stability");
  for (std::size_t k = 0; k < u.size(); ++k)
  {
    if (u.jump_at_sample(k) != nullptr)
    {
      continue;
    }
    const double t = u.times()[k];
    stability.update(transition_slope(model, grid, t, u.values()[k]) - 1.0, t);
  }
  report.conditions.push_back(stability.entry(options.tol));
  const JumpCost v = viscous_jump_cost(model, grid);
  add_balance(report, model, u, v, options, true);
  add_jumps(report, model, u, v, options, true);
  return report;
}

VerificationReport check_ve(const EnergyModel& model, const GridSpace& grid, const BVCurve& u,
                            double mu, const VerifyOptions& options)
{
  if (!(mu > 0.0))
  {
    throw DomainError("mu must be positive");
  }
  auto report = make_report("ve", mu, grid, options);
  LandscapeTracker tracker(model, grid);
  const Penalty D = Penalty::visco_energetic(mu);
  Worst stability("d_mu_stability");
  for (std::size_t k = 0; k < u.size(); ++k)
  {
    if (u.jump_at_sample(k) != nullptr)
    {
      continue;
    }
    const double t = u.times()[k];
    const State& x = u.values()[k];
    stability.update(model.energy(t, x) - tracker.minimize(t, x, D).objective, t);
  }
  report.conditions.push_back(stability.entry(options.tol));
  const JumpCost c = ve_jump_cost(model, grid, mu);
  add_balance(report, model, u, c, options, true);
  add_jumps(report, model, u, c, options, true);
  return report;
}

double upper_energy_estimate(const EnergyModel& model, const BVCurve& u, double s, double t, const JumpCost& e)
{
  if (!(t >= s))
  {
    throw DomainError("interval end precedes its start");
  }
  const auto series = balance_series(model, u, e);
  const std::size_t i = u.sample_index(s);
  const std::size_t j = u.sample_index(t);
  return series[j].residual - series[i].residual;
}

double chain_rule_excess(const EnergyModel& model, const GridSpace& grid, const BVCurve& u)
{
  double worst = 0.0;
  for (std::size_t k = 0; k + 1 < u.size(); ++k)
  {
    if (u.jump_at_sample(k) || u.jump_at_sample(k + 1))
    {
      continue;
    }
    const double t0 = u.times()[k];
    const double t1 = u.times()[k + 1];
    const State& a = u.values()[k];
    const State& b = u.values()[k + 1];
    const double dt = t1 - t0;
    const double dE = (model.energy(t1, b) - model.energy(t0, a)) / dt;
    const double lhs = -dE + model.power(t0, a);
    const double rhs = distance(a, b) / dt * transition_slope(model, grid, t0, a);
    worst = std::max(worst, lhs - rhs);
  }
  return worst;
}

void write_report_csv(std::ostream& os, const VerificationReport& report)
{
  csv::write_row(os, {"condition", "max_violation", "worst_time", "tol", "pass"});
  for (const auto& c : report.conditions)
  {
    csv::write_row(os, {c.name, csv::number(c.max_violation), csv::number(c.worst_time), csv::number(c.tol),
                        c.pass ? "1" : "0"});
  }
}

void write_report_text(std::ostream& os, const VerificationReport& report)
{
  os << "concept: " << report.concept_name << '\n';
  if (report.concept_name == "ve")
  {
    os << "mu: " << csv::number(report.mu) << '\n';
  }
  os << "grid spacing h: " << csv::number(report.h) << '\n';
  os << "tolerance: " << csv::number(report.tol) << '\n';
  for (const auto& c : report.conditions)
  {
    os << "  " << c.name << ": max_violation=" << csv::number(c.max_violation)
       << " at t=" << csv::number(c.worst_time) << (c.pass ? "  PASS" : "  FAIL") << '\n';
  }
  for (const auto& j : report.jumps)
  {
    os << "  jump t=[" << csv::number(j.t_start) << ", " << csv::number(j.t_end) << "] "
       << j.left.to_string() << " -> " << j.right.to_string() << " drop=" << csv::number(j.energy_drop)
       << " cost=" << csv::number(j.cost) << " gap=" << csv::number(j.gap) << '\n';
  }
  os << "result: " << (report.passed() ? "PASS" : "FAIL") << '\n';
}

}  // namespace ris
