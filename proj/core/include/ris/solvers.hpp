#ifndef RIS_SOLVERS_HPP
#define RIS_SOLVERS_HPP

#include <iosfwd>
#include <string>
#include <vector>

#include "ris/bv_curve.hpp"
#include "ris/energy_model.hpp"
#include "ris/minimize.hpp"
#include "ris/state_space.hpp"

namespace ris
{

/// 0 = t_0 < t_1 < ... < t_N = T.
class TimePartition
{
public:
  explicit TimePartition(std::vector<double> nodes);
  /// Uniform steps of size at most tau; the last node is exactly T.
  static TimePartition uniform(double horizon, double tau);

  const std::vector<double>& nodes() const noexcept { return nodes_; }
  std::size_t steps() const noexcept { return nodes_.size() - 1; }
  double fineness() const noexcept { return fineness_; }
  double horizon() const noexcept { return nodes_.back(); }

private:
  std::vector<double> nodes_;
  double fineness_ = 0.0;
};

enum class SchemeKind
{
  energetic,       ///< min E(t_n,U) + d(U_{n-1},U)
  viscous,         ///< min E(t_n,U) + d + eps/(2 tau_n) d^2
  visco_energetic  ///< min E(t_n,U) + d + mu/2 d^2
};

struct Scheme
{
  SchemeKind kind = SchemeKind::energetic;
  double parameter = 0.0;  ///< eps for viscous, mu for visco-energetic

  static Scheme energetic() { return {SchemeKind::energetic, 0.0}; }
  static Scheme viscous(double eps) { return {SchemeKind::viscous, eps}; }
  static Scheme visco_energetic(double mu) { return {SchemeKind::visco_energetic, mu}; }

  /// Penalty of one step of length tau_n. Throws DomainError on a bad parameter.
  Penalty penalty(double tau_n) const;
  std::string label() const;
};

GridMinimum energetic_step(const EnergyModel& model, const GridSpace& grid, double t_n,
                           const State& u_prev, LandscapeTracker* tracker = nullptr);
GridMinimum viscous_step(const EnergyModel& model, const GridSpace& grid, double t_n,
                         const State& u_prev, double eps, double tau_n,
                         LandscapeTracker* tracker = nullptr);
GridMinimum ve_step(const EnergyModel& model, const GridSpace& grid, double t_n,
                    const State& u_prev, double mu, LandscapeTracker* tracker = nullptr);

struct StepRecord
{
  double objective = 0.0;
  double runner_up_gap = 0.0;
  double energy = 0.0;       ///< E(t_n, U_n)
  double dissipation = 0.0;  ///< d(U_{n-1}, U_n)
  double work = 0.0;         ///< trapezoid integral of P(., U_{n-1}) over the step
  /// E(t_n,U_n) + d(U_{n-1},U_n) - E(t_{n-1},U_{n-1}) - work; <= quadrature error.
  double upper_estimate = 0.0;
};

struct DiscreteTrajectory
{
  TimePartition partition{{0.0, 1.0}};
  std::vector<State> states;       ///< U_0 .. U_N
  Scheme scheme;
  std::vector<StepRecord> steps;   ///< steps[n-1] describes U_{n-1} -> U_n
  std::size_t evaluations = 0;
};

struct SolveOptions
{
  bool pruning = true;  ///< use the tile-pruned minimizer (identical results, faster)
};

DiscreteTrajectory solve(const EnergyModel& model, const GridSpace& grid, const Scheme& scheme,
                         const TimePartition& partition, const State& u0,
                         const SolveOptions& options = {});

/// Piecewise-constant interpolant; steps above jump_threshold() become jump
/// records with left = U_{n-1} and at = right = U_n.
BVCurve interpolant(const DiscreteTrajectory& trajectory, double h);

/// Objective of @p candidate minus the exhaustive grid minimum of step n's
/// objective. Non-positive (up to rounding) iff the candidate is a global
/// grid minimizer.
double certificate_violation(const EnergyModel& model, const GridSpace& grid,
                             const DiscreteTrajectory& trajectory, std::size_t n);

/// Columns: n,t_n,U_1..,objective,runner_up_gap (row 0 has empty records).
void write_trajectory_csv(std::ostream& os, const DiscreteTrajectory& trajectory);

}  // namespace ris

#endif  // RIS_SOLVERS_HPP
