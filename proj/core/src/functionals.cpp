#include "ris/functionals.hpp"

#include <algorithm>
#include <cmath>

#include "ris/errors.hpp"

namespace ris
{

std::string_view to_string(SlopeMethod method) noexcept
{
  switch (method)
  {
    case SlopeMethod::analytic:
      return "analytic";
    case SlopeMethod::difference_quotient:
      return "difference-quotient";
    case SlopeMethod::duality:
      return "duality";
  }
  return "unknown";
}

void require_time(const EnergyModel& model, double t)
{
  if (!(t >= 0.0 && t <= model.horizon() * (1.0 + 1e-12)))
  {
    throw DomainError("time " + std::to_string(t) + " outside [0, T]");
  }
}

double perturbed_energy(const EnergyModel& model, double t, const State& u)
{
  require_time(model, t);
  return model.energy(t, u) + distance(model.reference_point(), u);
}

SlopeEstimate slope_difference_quotient(const EnergyModel& model, const GridSpace& grid, double t,
                                        const State& u, double radius)
{
  require_time(model, t);
  const double h = grid.spacing();
  const double r = radius > 0.0 ? radius : 3.0 * h;
  const double eu = model.energy(t, u);
  const auto c = grid.coords(grid.nearest(u));
  const auto span = static_cast<std::ptrdiff_t>(std::ceil(r / h)) + 1;

  std::array<std::ptrdiff_t, kMaxDim> lo{0, 0};
  std::array<std::ptrdiff_t, kMaxDim> hi{0, 0};
  for (std::size_t axis = 0; axis < grid.dim(); ++axis)
  {
    lo[axis] = std::max<std::ptrdiff_t>(0, static_cast<std::ptrdiff_t>(c[axis]) - span);
    hi[axis] = std::min<std::ptrdiff_t>(static_cast<std::ptrdiff_t>(grid.axis_count(axis)) - 1,
                                        static_cast<std::ptrdiff_t>(c[axis]) + span);
  }

  SlopeEstimate out{0.0, SlopeMethod::difference_quotient, r, false};
  bool any = false;
  for (auto y = lo[1]; y <= hi[1]; ++y)
  {
    for (auto x = lo[0]; x <= hi[0]; ++x)
    {
      const State v = grid.point(grid.index({static_cast<std::size_t>(x), static_cast<std::size_t>(y)}));
      const double dv = distance(u, v);
      if (dv <= 1e-12 * h || dv > r * (1.0 + 1e-12))
      {
        continue;
      }
      any = true;
      out.value = std::max(out.value, std::max(0.0, eu - model.energy(t, v)) / dv);
    }
  }
  if (!any)
  {
    throw ConfigurationError("slope neighbourhood contains no grid node besides u");
  }
  return out;
}

double moreau_yosida(const EnergyModel& model, const GridSpace& grid, double t, const State& u,
                     double tau, EnvelopeShape shape)
{
  require_time(model, t);
  if (!(tau > 0.0))
  {
    throw DomainError("Moreau-Yosida parameter tau must be positive");
  }
  const Penalty penalty =
    shape == EnvelopeShape::quadratic ? Penalty::quadratic_envelope(tau) : Penalty::ve_envelope(tau);
  return minimize_exhaustive(model, grid, t, u, penalty).objective;
}

std::vector<double> default_tau_ladder(std::size_t terms)
{
  if (terms < 2)
  {
    return {1e-1};
  }
  std::vector<double> out(terms);
  for (std::size_t k = 0; k < terms; ++k)
  {
    out[k] = 1e-1 * std::pow(1e-2, static_cast<double>(k) / static_cast<double>(terms - 1));
  }
  return out;
}

SlopeEstimate slope_via_duality(const EnergyModel& model, const GridSpace& grid, double t,
                                const State& u, const std::vector<double>& tau_ladder,
                                EnvelopeShape shape)
{
  require_time(model, t);
  if (tau_ladder.empty())
  {
    throw ConfigurationError("empty tau ladder");
  }
  for (std::size_t k = 0; k < tau_ladder.size(); ++k)
  {
    if (!(tau_ladder[k] > 0.0) || (k > 0 && !(tau_ladder[k] < tau_ladder[k - 1])))
    {
      throw DomainError("tau ladder must be positive and strictly decreasing");
    }
  }
  const double eu = model.energy(t, u);
  SlopeEstimate out{0.0, SlopeMethod::duality, tau_ladder.front(), false};
  for (const double tau : tau_ladder)
  {
    double gap = eu - moreau_yosida(model, grid, t, u, tau, shape);
    if (gap < 0.0)
    {
      out.clamped = true;
      gap = 0.0;
    }
    const double estimate = std::sqrt(2.0 * gap / tau);
    if (estimate > out.value)
    {
      out.value = estimate;
      out.mesh = tau;
    }
  }
  return out;
}

double residual(const EnergyModel& model, const GridSpace& grid, double t, const State& u,
                double mu)
{
  require_time(model, t);
  if (!(mu > 0.0))
  {
    throw DomainError("mu must be positive");
  }
  const double value =
    model.energy(t, u) - minimize_exhaustive(model, grid, t, u, Penalty::visco_energetic(mu)).objective;
  return std::max(0.0, value);
}

double d_stability_gap(const EnergyModel& model, const GridSpace& grid, double t, const State& u)
{
  require_time(model, t);
  const double value =
    model.energy(t, u) - minimize_exhaustive(model, grid, t, u, Penalty::metric()).objective;
  return std::max(0.0, value);
}

double power_control_excess(const EnergyModel& model, double t, const State& u)
{
  return std::fabs(model.power(t, u)) - model.power_constant() * perturbed_energy(model, t, u);
}

double gronwall_excess(const EnergyModel& model, double s, double t, const State& u)
{
  return perturbed_energy(model, t, u) -
         perturbed_energy(model, s, u) * std::exp(model.power_constant() * std::fabs(t - s));
}

double power_integral_defect(const EnergyModel& model, double s, double t, const State& u,
                             std::size_t panels)
{
  require_time(model, s);
  require_time(model, t);
  const std::size_t n = 2 * std::max<std::size_t>(1, panels);
  const double step = (t - s) / static_cast<double>(n);
  double acc = model.power(s, u) + model.power(t, u);
  for (std::size_t k = 1; k < n; ++k)
  {
    acc += (k % 2 == 1 ? 4.0 : 2.0) * model.power(s + static_cast<double>(k) * step, u);
  }
  const double integral = acc * step / 3.0;
  return std::fabs(model.energy(t, u) - model.energy(s, u) - integral);
}

}  // namespace ris
