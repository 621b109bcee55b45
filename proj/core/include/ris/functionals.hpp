#ifndef RIS_FUNCTIONALS_HPP
#define RIS_FUNCTIONALS_HPP

#include <string_view>
#include <vector>

#include "ris/energy_model.hpp"
#include "ris/minimize.hpp"
#include "ris/state_space.hpp"

namespace ris
{

// Pointwise functionals of an energy model on a grid. Every infimum or
// supremum over the state space is a global scan of the grid.

enum class SlopeMethod
{
  analytic,
  difference_quotient,
  duality
};

std::string_view to_string(SlopeMethod method) noexcept;

struct SlopeEstimate
{
  double value = 0.0;
  SlopeMethod method = SlopeMethod::analytic;
  double mesh = 0.0;      ///< neighbourhood radius or the achieving tau
  bool clamped = false;   ///< a negative radicand was clamped to zero
};

/// Dissipation shapes psi for the generalized Moreau-Yosida envelope.
enum class EnvelopeShape
{
  quadratic,  ///< psi(r) = r^2 / 2
  ve          ///< psi(r) = r + r^2 / 2
};

/// Throws DomainError unless t lies in [0, T].
void require_time(const EnergyModel& model, double t);

/// F(t,u) = E(t,u) + d(x_o,u).
double perturbed_energy(const EnergyModel& model, double t, const State& u);

/// max over grid nodes v with 0 < d(u,v) <= radius of (E(t,u) - E(t,v))_+ / d(u,v).
/// radius <= 0 selects the default 3h. Throws ConfigurationError on an empty ball.
SlopeEstimate slope_difference_quotient(const EnergyModel& model, const GridSpace& grid, double t,
                                        const State& u, double radius = 0.0);

/// Y_tau(t,u) = min_v [tau psi(d(u,v)/tau) + E(t,v)]; never exceeds E(t,u).
double moreau_yosida(const EnergyModel& model, const GridSpace& grid, double t, const State& u,
                     double tau, EnvelopeShape shape);

/// Geometric ladder from 1e-1 down to 1e-3 with @p terms entries.
std::vector<double> default_tau_ladder(std::size_t terms = 8);

/// sup over the ladder of sqrt(2 (E - Y_tau) / tau). Estimates |DE| for the
/// quadratic shape and (|DE| - 1)_+ for the ve shape. The ladder must be
/// strictly decreasing and positive.
SlopeEstimate slope_via_duality(const EnergyModel& model, const GridSpace& grid, double t,
                                const State& u, const std::vector<double>& tau_ladder,
                                EnvelopeShape shape = EnvelopeShape::quadratic);

/// R(t,u) = E(t,u) - min_v [E(t,v) + D_mu(u,v)] >= 0.
double residual(const EnergyModel& model, const GridSpace& grid, double t, const State& u,
                double mu);

/// sup_v [E(t,u) - E(t,v) - d(u,v)]_+; zero iff u is globally d-stable on the grid.
double d_stability_gap(const EnergyModel& model, const GridSpace& grid, double t, const State& u);

/// |P(t,u)| - C_P F(t,u); positive values violate power control.
double power_control_excess(const EnergyModel& model, double t, const State& u);

/// F(t,u) - F(s,u) exp(C_P |t-s|); positive values violate the Gronwall envelope.
double gronwall_excess(const EnergyModel& model, double s, double t, const State& u);

/// |E(t,u) - E(s,u) - int_s^t P(r,u) dr| with a composite Simpson rule on
/// @p panels panels.
double power_integral_defect(const EnergyModel& model, double s, double t, const State& u,
                             std::size_t panels = 64);

}  // namespace ris

#endif  // RIS_FUNCTIONALS_HPP
