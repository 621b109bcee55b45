#include "ris/jump_cost.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <ostream>
#include <queue>

#include "ris/csv.hpp"
#include "ris/errors.hpp"
#include "ris/functionals.hpp"
#include "ris/minimize.hpp"

namespace ris
{

namespace
{

constexpr double kInf = std::numeric_limits<double>::infinity();

/// Rectangular block of grid nodes with its own dense numbering.
class Window
{
public:
  Window(const GridSpace& grid, const State& a, const State& b, double margin) : grid_(grid)
  {
    for (std::size_t axis = 0; axis < grid.dim(); ++axis)
    {
      const double lo = std::min(a[axis], b[axis]) - margin;
      const double hi = std::max(a[axis], b[axis]) + margin;
      const auto count = static_cast<double>(grid.axis_count(axis) - 1);
      const double origin = grid.bounds()[axis].lo;
      lo_[axis] = static_cast<std::size_t>(std::clamp(std::floor((lo - origin) / grid.spacing()), 0.0, count));
      hi_[axis] = static_cast<std::size_t>(std::clamp(std::ceil((hi - origin) / grid.spacing()), 0.0, count));
    }
  }

  std::size_t size() const { return extent(0) * extent(1); }
  std::size_t extent(std::size_t axis) const { return hi_[axis] - lo_[axis] + 1; }

  std::size_t local(std::size_t global) const
  {
    const auto c = grid_.coords(global);
    return (c[0] - lo_[0]) + extent(0) * (c[1] - lo_[1]);
  }

  std::size_t global(std::size_t local) const
  {
    return grid_.index({lo_[0] + local % extent(0), lo_[1] + local / extent(0)});
  }

  /// Visits window nodes whose coordinates lie within @p radius of node p (box test only).
  template <class F>
  void for_each_near(std::size_t local_p, double radius, F&& f) const
  {
    const auto span = static_cast<std::ptrdiff_t>(std::floor(radius / grid_.spacing() + 1e-9));
    const auto px = static_cast<std::ptrdiff_t>(local_p % extent(0));
    const auto py = static_cast<std::ptrdiff_t>(local_p / extent(0));
    const auto x0 = std::max<std::ptrdiff_t>(0, px - span);
    const auto x1 = std::min<std::ptrdiff_t>(static_cast<std::ptrdiff_t>(extent(0)) - 1, px + span);
    const auto y0 = std::max<std::ptrdiff_t>(0, py - span);
    const auto y1 = std::min<std::ptrdiff_t>(static_cast<std::ptrdiff_t>(extent(1)) - 1, py + span);
    for (auto y = y0; y <= y1; ++y)
    {
      for (auto x = x0; x <= x1; ++x)
      {
        f(static_cast<std::size_t>(x) + extent(0) * static_cast<std::size_t>(y));
      }
    }
  }

private:
  const GridSpace& grid_;
  std::array<std::size_t, kMaxDim> lo_{0, 0};
  std::array<std::size_t, kMaxDim> hi_{0, 0};
};

double resolve_margin(const CostOptions& options, const GridSpace& grid, const State& a, const State& b)
{
  return options.window_margin >= 0.0 ? options.window_margin
                                      : 0.25 * distance(a, b) + 2.0 * grid.spacing();
}

void require_node(const GridSpace& grid, const State& u, const char* which)
{
  if (!grid.is_node(u))
  {
    throw DomainError(std::string(which) + " state " + u.to_string() + " is not a grid node");
  }
}

TransitionChain make_chain(double t, std::vector<State> theta)
{
  TransitionChain chain;
  chain.t = t;
  chain.theta = std::move(theta);
  for (std::size_t i = 0; i < chain.theta.size(); ++i)
  {
    chain.r.push_back(static_cast<double>(i));
    if (i + 1 < chain.theta.size())
    {
      chain.edges.push_back(distance(chain.theta[i], chain.theta[i + 1]));
    }
  }
  return chain;
}

/// Fills var/gap/residual terms from a chain whose residuals are set.
void assemble_ve(CostBreakdown& out, double mu)
{
  const auto& chain = out.chain;
  for (const double d : chain.edges)
  {
    out.var_term += d;
    out.gap_term += 0.5 * mu * d * d;
  }
  for (std::size_t i = 0; i + 1 < chain.theta.size(); ++i)
  {
    out.residual_term += chain.residuals[i];
  }
  out.total = out.var_term + out.gap_term + out.residual_term;
}

using QueueEntry = std::pair<double, std::size_t>;
using MinQueue = std::priority_queue<QueueEntry, std::vector<QueueEntry>, std::greater<>>;

std::vector<std::size_t> trace_back(const std::vector<std::size_t>& parent, std::size_t from, std::size_t to)
{
  std::vector<std::size_t> path{to};
  while (path.back() != from)
  {
    path.push_back(parent[path.back()]);
  }
  std::reverse(path.begin(), path.end());
  return path;
}

}  // namespace

CostBreakdown ve_chain_cost(const EnergyModel& model, const GridSpace& grid, double t,
                            const std::vector<State>& chain, double mu)
{
  require_time(model, t);
  if (chain.empty())
  {
    throw DomainError("empty transition chain");
  }
  CostBreakdown out;
  out.chain = make_chain(t, chain);
  for (const State& s : chain)
  {
    out.chain.residuals.push_back(residual(model, grid, t, s, mu));
  }
  assemble_ve(out, mu);
  return out;
}

CostBreakdown ve_cost(const EnergyModel& model, const GridSpace& grid, double t, const State& a,
                      const State& b, double mu, const CostOptions& options)
{
  require_time(model, t);
  require_node(grid, a, "start");
  require_node(grid, b, "end");
  if (!(mu > 0.0))
  {
    throw DomainError("mu must be positive");
  }
  LandscapeTracker tracker(model, grid);
  const Penalty D = Penalty::visco_energetic(mu);
  auto residual_at = [&](const State& p) {
    return std::max(0.0, model.energy(t, p) - tracker.minimize(t, p, D).objective);
  };

  CostBreakdown out;
  if (a == b)
  {
    out.chain = make_chain(t, {a});
    out.chain.residuals.push_back(residual_at(a));
    return out;
  }

  const Window window(grid, a, b, resolve_margin(options, grid, a, b));
  const std::size_t n = window.size();
  const std::size_t src = window.local(grid.nearest(a));
  const std::size_t dst = window.local(grid.nearest(b));
  std::vector<double> g(n, kInf);
  std::vector<double> res(n, -1.0);
  std::vector<std::size_t> parent(n, src);
  std::vector<char> settled(n, 0);
  std::vector<State> point(n);
  for (std::size_t k = 0; k < n; ++k)
  {
    point[k] = grid.point(window.global(k));
  }

  res[src] = residual_at(a);
  auto res_of = [&](std::size_t k) {
    if (res[k] < 0.0)
    {
      res[k] = residual_at(point[k]);
    }
    return res[k];
  };

  // Straight chains with dyadic subdivisions give a tight starting bound.
  std::vector<std::size_t> seed{src, dst};
  double upper = D(distance(a, b)) + res[src];
  const double span = distance(a, b) / grid.spacing();
  for (std::size_t k = 2; static_cast<double>(k) <= std::min(span, 4096.0); k *= 2)
  {
    std::vector<std::size_t> nodes{src};
    for (std::size_t i = 1; i <= k; ++i)
    {
      const std::size_t q = i == k ? dst : window.local(grid.nearest(lerp(a, b, double(i) / double(k))));
      if (q != nodes.back())
      {
        nodes.push_back(q);
      }
    }
    double cost = 0.0;
    for (std::size_t i = 0; i + 1 < nodes.size() && cost < upper; ++i)
    {
      cost += D(distance(point[nodes[i]], point[nodes[i + 1]])) + res_of(nodes[i]);
    }
    if (cost < upper)
    {
      upper = cost;
      seed = std::move(nodes);
    }
  }

  double max_edge = options.max_edge;
  if (max_edge < 0.0)
  {
    const double seed_edge = distance(a, b) / static_cast<double>(seed.size() - 1);
    max_edge = n <= kCompleteGraphNodes ? kInf : std::max(50.0 * grid.spacing(), 4.0 * seed_edge);
  }

  // A* with the admissible estimate d(q, b): every edge costs at least its length.
  auto estimate = [&](std::size_t q) { return distance(point[q], b); };
  bool searched = false;
  g[src] = 0.0;
  g[dst] = upper;
  MinQueue queue;
  queue.push({estimate(src), src});
  queue.push({upper, dst});
  while (!queue.empty())
  {
    const std::size_t p = queue.top().second;
    queue.pop();
    if (settled[p])
    {
      continue;
    }
    settled[p] = 1;
    if (p == dst)
    {
      break;
    }
    const double gp = g[p];
    const double budget = upper - gp - res_of(p);
    if (budget < 0.0)
    {
      continue;
    }
    // Largest r with r + mu/2 r^2 <= budget.
    const double radius = std::min(max_edge, 2.0 * budget / (1.0 + std::sqrt(1.0 + 2.0 * mu * budget)));
    window.for_each_near(p, radius, [&](std::size_t q) {
      if (settled[q])
      {
        return;
      }
      const double w = D(distance(point[p], point[q]));
      const double candidate = gp + res[p] + w;
      if (candidate >= g[q] || candidate + estimate(q) > upper)
      {
        return;
      }
      g[q] = candidate;
      parent[q] = p;
      queue.push({candidate + estimate(q), q});
      if (q == dst)
      {
        upper = candidate;
        searched = true;
      }
    });
  }

  std::vector<State> theta;
  for (const std::size_t k : searched ? trace_back(parent, src, dst) : seed)
  {
    theta.push_back(point[k]);
  }
  out.chain = make_chain(t, std::move(theta));
  for (const State& s : out.chain.theta)
  {
    const std::size_t k = window.local(grid.nearest(s));
    out.chain.residuals.push_back(res[k] >= 0.0 ? res[k] : residual_at(s));
  }
  assemble_ve(out, mu);
  return out;
}

double transition_slope(const EnergyModel& model, const GridSpace& grid, double t, const State& u)
{
  if (const auto s = model.analytic_slope(t, u))
  {
    return *s;
  }
  return slope_difference_quotient(model, grid, t, u).value;
}

CostBreakdown bv_path_cost(const EnergyModel& model, const GridSpace& grid, double t,
                           const std::vector<State>& path)
{
  require_time(model, t);
  if (path.empty())
  {
    throw DomainError("empty path");
  }
  CostBreakdown out;
  out.chain = make_chain(t, path);
  auto g = [&](const State& u) { return std::max(1.0, transition_slope(model, grid, t, u)); };
  double g_prev = g(path.front());
  for (std::size_t i = 0; i + 1 < path.size(); ++i)
  {
    const double d = out.chain.edges[i];
    const double g_mid = g(lerp(path[i], path[i + 1], 0.5));
    const double g_next = g(path[i + 1]);
    out.var_term += d;
    out.bv_integral_term += d * g_mid;
    out.partition_sup += d * std::min({g_prev, g_mid, g_next});
    g_prev = g_next;
  }
  out.total = out.bv_integral_term;
  return out;
}

CostBreakdown viscous_cost(const EnergyModel& model, const GridSpace& grid, double t,
                           const State& a, const State& b, const CostOptions& options)
{
  require_time(model, t);
  require_node(grid, a, "start");
  require_node(grid, b, "end");
  CostBreakdown out;
  if (a == b)
  {
    out.chain = make_chain(t, {a});
    return out;
  }
  const Window window(grid, a, b, resolve_margin(options, grid, a, b));
  const std::size_t n = window.size();
  const std::size_t src = window.local(grid.nearest(a));
  const std::size_t dst = window.local(grid.nearest(b));
  std::vector<double> g(n, kInf);
  std::vector<double> slope(n, -1.0);
  std::vector<std::size_t> parent(n, src);
  std::vector<char> settled(n, 0);
  auto slope_at = [&](std::size_t k) {
    if (slope[k] < 0.0)
    {
      slope[k] = transition_slope(model, grid, t, grid.point(window.global(k)));
    }
    return slope[k];
  };

  g[src] = 0.0;
  MinQueue queue;
  queue.push({0.0, src});
  const double h = grid.spacing();
  while (!queue.empty())
  {
    const auto [gp, p] = queue.top();
    queue.pop();
    if (settled[p] || gp > g[p])
    {
      continue;
    }
    settled[p] = 1;
    if (p == dst)
    {
      break;
    }
    const State sp = grid.point(window.global(p));
    window.for_each_near(p, h, [&](std::size_t q) {
      if (q == p || settled[q])
      {
        return;
      }
      const double d = distance(sp, grid.point(window.global(q)));
      const double candidate = gp + d * std::max(1.0, 0.5 * (slope_at(p) + slope_at(q)));
      if (candidate < g[q])
      {
        g[q] = candidate;
        parent[q] = p;
        queue.push({candidate, q});
      }
    });
  }
  if (!settled[dst])
  {
    throw ContractViolation("viscous cost: end point unreachable inside the window");
  }
  std::vector<State> theta;
  for (const std::size_t k : trace_back(parent, src, dst))
  {
    theta.push_back(grid.point(window.global(k)));
  }
  out.chain = make_chain(t, std::move(theta));
  for (const double d : out.chain.edges)
  {
    out.var_term += d;
  }
  out.bv_integral_term = g[dst];
  out.partition_sup = g[dst];
  out.total = g[dst];
  return out;
}

// ---------------------------------------------------------------------------

double default_transition_tolerance(const EnergyModel& model, const GridSpace& grid,
                                    const TransitionChain& chain)
{
  double sup_f = 0.0;
  for (const State& s : chain.theta)
  {
    sup_f = std::max(sup_f, perturbed_energy(model, chain.t, s));
  }
  return 10.0 * grid.spacing() * model.power_constant() * (1.0 + sup_f);
}

TransitionClassification classify_transition(const EnergyModel& model, const GridSpace& grid,
                                             const TransitionChain& chain, double mu,
                                             std::optional<double> tol)
{
  TransitionClassification out;
  out.tolerance = tol ? *tol : default_transition_tolerance(model, grid, chain);
  const double h = grid.spacing();
  const std::size_t nodes = chain.theta.size();
  if (nodes < 2)
  {
    return out;
  }
  auto res = [&](std::size_t i) {
    return i < chain.residuals.size() ? chain.residuals[i] : residual(model, grid, chain.t, chain.theta[i], mu);
  };
  const Penalty D = Penalty::visco_energetic(mu);
  for (std::size_t i = 0; i + 1 < nodes; ++i)
  {
    const bool jump = res(i) > out.tolerance || chain.edges[i] > 2.0 * h * (1.0 + 1e-9);
    const SegmentKind kind = jump ? SegmentKind::jump : SegmentKind::slide;
    if (!jump && !out.segments.empty() && out.segments.back().kind == SegmentKind::slide &&
        out.segments.back().last + 1 == i)
    {
      out.segments.back().last = i;
    }
    else
    {
      out.segments.push_back({kind, i, i});
    }
    if (jump && i > 0)
    {
      const State& prev = chain.theta[i - 1];
      const double here = model.energy(chain.t, chain.theta[i]) + D(distance(prev, chain.theta[i]));
      const double best = minimize_exhaustive(model, grid, chain.t, prev, D).objective;
      out.jump_checks.push_back({i, here - best});
    }
  }
  return out;
}

void write_transition_csv(std::ostream& os, const TransitionChain& chain, double h)
{
  const std::size_t dim = chain.theta.empty() ? 1 : chain.theta.front().dim();
  std::vector<std::string> header{"i", "r_i"};
  for (std::size_t k = 1; k <= dim; ++k)
  {
    header.push_back("theta_" + std::to_string(k));
  }
  for (const char* name : {"R_i", "d_edge_i", "kind"})
  {
    header.emplace_back(name);
  }
  csv::write_row(os, header);
  for (std::size_t i = 0; i < chain.theta.size(); ++i)
  {
    std::vector<std::string> row{std::to_string(i), csv::number(chain.r[i])};
    for (const double x : chain.theta[i])
    {
      row.push_back(csv::number(x));
    }
    row.push_back(i < chain.residuals.size() ? csv::number(chain.residuals[i]) : std::string());
    row.push_back(i < chain.edges.size() ? csv::number(chain.edges[i]) : std::string());
    const double step = i < chain.edges.size() ? chain.edges[i] : (i > 0 ? chain.edges[i - 1] : 0.0);
    row.emplace_back(step > 2.0 * h * (1.0 + 1e-9) ? "jump" : "slide");
    csv::write_row(os, row);
  }
}

}  // namespace ris
