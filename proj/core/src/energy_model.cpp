#include "ris/energy_model.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "ris/errors.hpp"

namespace ris
{

namespace
{

double max_abs(const Interval& iv) { return std::max(std::fabs(iv.lo), std::fabs(iv.hi)); }

}  // namespace

EnergyModel::EnergyModel(ModelContext context) : context_(std::move(context))
{
  if (!(context_.horizon > 0.0))
  {
    throw DomainError("time horizon T must be positive");
  }
  if (!(context_.power_constant > 0.0))
  {
    throw DomainError("power constant C_P must be positive");
  }
}

double EnergyModel::power(double t, const State& u) const
{
  const double step = 1e-6 * horizon();
  const double lo = std::max(0.0, t - step);
  const double hi = std::min(horizon(), t + step);
  return (energy(hi, u) - energy(lo, u)) / (hi - lo);
}

std::optional<double> EnergyModel::analytic_slope(double, const State&) const { return std::nullopt; }

std::optional<double> EnergyModel::time_lipschitz(std::span<const Interval>) const
{
  return std::nullopt;
}

// ---------------------------------------------------------------------------

QuadraticModel::QuadraticModel(ModelContext context, double stiffness, State offset, State rate)
  : EnergyModel(std::move(context)), stiffness_(stiffness), offset_(offset), rate_(rate)
{
  if (!(stiffness_ > 0.0))
  {
    throw DomainError("quadratic stiffness must be positive");
  }
  if (offset_.dim() != rate_.dim())
  {
    throw DomainError("quadratic offset and rate must have the same dimension");
  }
}

State QuadraticModel::target(double t) const
{
  State a = offset_;
  for (std::size_t k = 0; k < a.dim(); ++k)
  {
    a[k] += rate_[k] * t;
  }
  return a;
}

double QuadraticModel::energy(double t, const State& u) const
{
  const double r = distance(u, target(t));
  return 0.5 * stiffness_ * r * r;
}

double QuadraticModel::power(double t, const State& u) const
{
  const State a = target(t);
  double dot = 0.0;
  for (std::size_t k = 0; k < a.dim(); ++k)
  {
    dot += (u[k] - a[k]) * rate_[k];
  }
  return -stiffness_ * dot;
}

std::optional<double> QuadraticModel::analytic_slope(double t, const State& u) const
{
  return stiffness_ * distance(u, target(t));
}

std::optional<double> QuadraticModel::time_lipschitz(std::span<const Interval> box) const
{
  // |P| <= k |rate| (|u - offset| + |rate| T)
  double rate_norm = 0.0;
  double reach = 0.0;
  for (std::size_t k = 0; k < offset_.dim() && k < box.size(); ++k)
  {
    rate_norm += rate_[k] * rate_[k];
    const double far = std::max(std::fabs(box[k].lo - offset_[k]), std::fabs(box[k].hi - offset_[k]));
    reach += far * far;
  }
  rate_norm = std::sqrt(rate_norm);
  return stiffness_ * rate_norm * (std::sqrt(reach) + rate_norm * horizon());
}

// ---------------------------------------------------------------------------

DoubleWellModel::DoubleWellModel(ModelContext context, double load_offset, double load_rate)
  : EnergyModel(std::move(context)), load_offset_(load_offset), load_rate_(load_rate)
{
}

double DoubleWellModel::well(double u) noexcept
{
  const double s = u * u - 1.0;
  return 0.25 * s * s;
}

double DoubleWellModel::well_derivative(double u) noexcept { return u * u * u - u; }

double DoubleWellModel::energy(double t, const State& u) const
{
  return well(u[0]) - load(t) * u[0];
}

double DoubleWellModel::power(double, const State& u) const { return -load_rate_ * u[0]; }

std::optional<double> DoubleWellModel::analytic_slope(double t, const State& u) const
{
  return std::fabs(well_derivative(u[0]) - load(t));
}

std::optional<double> DoubleWellModel::time_lipschitz(std::span<const Interval> box) const
{
  return std::fabs(load_rate_) * max_abs(box[0]);
}

// ---------------------------------------------------------------------------

TwoWell2DModel::TwoWell2DModel(ModelContext context, double coupling, double skew,
                               double load_offset, double load_rate)
  : EnergyModel(std::move(context)),
    coupling_(coupling),
    skew_(skew),
    load_offset_(load_offset),
    load_rate_(load_rate)
{
  if (!(coupling_ > 0.0))
  {
    throw DomainError("two-well-2d coupling must be positive");
  }
}

double TwoWell2DModel::energy(double t, const State& u) const
{
  const double shear = u[1] - skew_ * u[0];
  return DoubleWellModel::well(u[0]) + 0.5 * coupling_ * shear * shear -
         (load_offset_ + load_rate_ * t) * u[0];
}

double TwoWell2DModel::power(double, const State& u) const { return -load_rate_ * u[0]; }

std::optional<double> TwoWell2DModel::analytic_slope(double t, const State& u) const
{
  const double shear = u[1] - skew_ * u[0];
  const double g0 = DoubleWellModel::well_derivative(u[0]) - coupling_ * skew_ * shear -
                    (load_offset_ + load_rate_ * t);
  const double g1 = coupling_ * shear;
  return std::hypot(g0, g1);
}

std::optional<double> TwoWell2DModel::time_lipschitz(std::span<const Interval> box) const
{
  return std::fabs(load_rate_) * max_abs(box[0]);
}

// ---------------------------------------------------------------------------

PolynomialModel::PolynomialModel(ModelContext context, std::vector<double> coefficients,
                                 double load_offset, double load_rate)
  : EnergyModel(std::move(context)),
    coefficients_(std::move(coefficients)),
    load_offset_(load_offset),
    load_rate_(load_rate)
{
  if (coefficients_.empty())
  {
    coefficients_.push_back(0.0);
  }
}

double PolynomialModel::energy(double t, const State& u) const
{
  double acc = 0.0;
  for (auto it = coefficients_.rbegin(); it != coefficients_.rend(); ++it)
  {
    acc = acc * u[0] + *it;
  }
  return acc - (load_offset_ + load_rate_ * t) * u[0];
}

double PolynomialModel::power(double, const State& u) const { return -load_rate_ * u[0]; }

std::optional<double> PolynomialModel::analytic_slope(double t, const State& u) const
{
  double acc = 0.0;
  for (std::size_t k = coefficients_.size(); k-- > 1;)
  {
    acc = acc * u[0] + static_cast<double>(k) * coefficients_[k];
  }
  return std::fabs(acc - (load_offset_ + load_rate_ * t));
}

std::optional<double> PolynomialModel::time_lipschitz(std::span<const Interval> box) const
{
  return std::fabs(load_rate_) * max_abs(box[0]);
}

// ---------------------------------------------------------------------------

namespace
{

class ParameterReader
{
public:
  ParameterReader(const ModelSpec& spec, std::set<std::string> allowed) : spec_(spec)
  {
    for (const auto& [key, value] : spec.parameters)
    {
      if (!allowed.contains(key))
      {
        throw UsageError("model.parameters." + key,
                         "unknown parameter for model '" + spec.name + "'");
      }
    }
  }

  double scalar(const std::string& key, double fallback) const
  {
    const auto it = spec_.parameters.find(key);
    if (it == spec_.parameters.end())
    {
      return fallback;
    }
    if (it->second.size() != 1)
    {
      throw UsageError("model.parameters." + key, "expected a scalar");
    }
    return it->second.front();
  }

  std::vector<double> vector(const std::string& key, std::vector<double> fallback) const
  {
    const auto it = spec_.parameters.find(key);
    return it == spec_.parameters.end() ? fallback : it->second;
  }

private:
  const ModelSpec& spec_;
};

State state_or_zero(const std::vector<double>& coords, std::size_t dim, const std::string& field)
{
  if (coords.empty())
  {
    return dim == 2 ? State(0.0, 0.0) : State(0.0);
  }
  if (coords.size() != dim)
  {
    throw UsageError(field, "dimension mismatch with the reference point");
  }
  return State(std::span<const double>(coords));
}

}  // namespace

std::unique_ptr<EnergyModel> make_model(const ModelSpec& spec)
{
  const std::size_t dim = spec.context.reference_point.dim();
  if (spec.name == "quadratic")
  {
    const ParameterReader p(spec, {"stiffness", "offset", "rate"});
    const State offset = state_or_zero(p.vector("offset", {}), dim, "model.parameters.offset");
    const State rate = state_or_zero(p.vector("rate", {}), dim, "model.parameters.rate");
    return std::make_unique<QuadraticModel>(spec.context, p.scalar("stiffness", 1.0), offset, rate);
  }
  if (spec.name == "double-well")
  {
    const ParameterReader p(spec, {"load_offset", "load_rate"});
    if (dim != 1)
    {
      throw UsageError("model.reference_point", "double-well is one-dimensional");
    }
    return std::make_unique<DoubleWellModel>(spec.context, p.scalar("load_offset", 0.0),
                                             p.scalar("load_rate", 1.0));
  }
  if (spec.name == "two-well-2d")
  {
    const ParameterReader p(spec, {"coupling", "skew", "load_offset", "load_rate"});
    if (dim != 2)
    {
      throw UsageError("model.reference_point", "two-well-2d is two-dimensional");
    }
    return std::make_unique<TwoWell2DModel>(spec.context, p.scalar("coupling", 4.0),
                                            p.scalar("skew", 0.5), p.scalar("load_offset", 0.0),
                                            p.scalar("load_rate", 1.0));
  }
  if (spec.name == "custom-polynomial")
  {
    const ParameterReader p(spec, {"coefficients", "load_offset", "load_rate"});
    if (dim != 1)
    {
      throw UsageError("model.reference_point", "custom-polynomial is one-dimensional");
    }
    return std::make_unique<PolynomialModel>(spec.context, p.vector("coefficients", {0.0}),
                                             p.scalar("load_offset", 0.0),
                                             p.scalar("load_rate", 0.0));
  }
  throw UsageError("model.name", "unknown model '" + spec.name + "'");
}

}  // namespace ris
