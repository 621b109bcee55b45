#ifndef RIS_MINIMIZE_HPP
#define RIS_MINIMIZE_HPP

#include <cstddef>
#include <optional>
#include <vector>

#include "ris/energy_model.hpp"
#include "ris/state_space.hpp"

namespace ris
{

namespace detail
{
class Candidates;
}

/// Distance penalty phi(r) = linear * r + quadratic * r^2.
struct Penalty
{
  double linear = 1.0;
  double quadratic = 0.0;

  double operator()(double r) const noexcept { return r * (linear + quadratic * r); }

  /// d itself.
  static Penalty metric() noexcept { return {1.0, 0.0}; }
  /// D_mu = d + mu/2 d^2.
  static Penalty visco_energetic(double mu) noexcept { return {1.0, 0.5 * mu}; }
  /// d + eps/(2 tau) d^2.
  static Penalty viscous(double eps, double tau) noexcept { return {1.0, 0.5 * eps / tau}; }
  /// tau psi(d/tau) with psi(r) = r^2/2.
  static Penalty quadratic_envelope(double tau) noexcept { return {0.0, 0.5 / tau}; }
  /// tau psi(d/tau) with psi(r) = r + r^2/2.
  static Penalty ve_envelope(double tau) noexcept { return {1.0, 0.5 / tau}; }
};

/// Result of min_v [E(t,v) + phi(d(c,v))] over the grid (and the centre c itself).
struct GridMinimum
{
  State state;
  std::optional<std::size_t> node;  ///< empty when the off-grid centre won
  double objective = 0.0;
  double energy = 0.0;
  double distance = 0.0;             ///< d(c, state)
  double runner_up_gap = 0.0;        ///< second-best objective minus best (inf if unique candidate)
  std::size_t evaluations = 0;
};

/// Relative tolerance under which two objective values are treated as tied.
inline constexpr double kTieTolerance = 1e-12;

/**
 * Exhaustive scan. Ties are broken by the smaller distance to the centre and
 * then lexicographically. Used for one-off evaluations and as the reference
 * the pruned minimizer is checked against.
 */
GridMinimum minimize_exhaustive(const EnergyModel& model, const GridSpace& grid, double t,
                                const State& centre, Penalty penalty);

/**
 * Repeated global minimization along a time-stepping run.
 *
 * Keeps, per tile of the grid, the exact minimum of E(anchor,.) over the
 * tile's nodes. Since |E(t,v) - E(s,v)| <= L |t - s| with L the model's
 * time-Lipschitz constant on the box, a tile whose lower bound plus the
 * penalty at its distance exceeds the current runner-up cannot contain the
 * minimizer nor the runner-up, and is skipped. Tiles are visited in rings
 * around the centre so the cutoff tightens quickly. The answer (argmin,
 * objective, runner-up gap) is identical to minimize_exhaustive().
 *
 * Models without time_lipschitz() fall back to the exhaustive scan.
 * Not thread-safe; use one tracker per trajectory.
 */
class LandscapeTracker
{
public:
  LandscapeTracker(const EnergyModel& model, const GridSpace& grid, double refresh_slack = 1e-2);

  GridMinimum minimize(double t, const State& centre, Penalty penalty);

  bool pruning_enabled() const noexcept { return lipschitz_.has_value(); }
  std::size_t refreshes() const noexcept { return refreshes_; }

private:
  void refresh(double t);
  void visit_tile(std::size_t tile, double t, const State& centre, Penalty penalty,
                  detail::Candidates& acc);

  const EnergyModel& model_;
  const GridSpace& grid_;
  double slack_;
  std::optional<double> lipschitz_;
  std::vector<double> tile_min_;
  std::vector<double> tile_anchor_;
  std::vector<double> scratch_;
  double refresh_time_ = 0.0;
  double refresh_min_ = 0.0;
  bool initialised_ = false;
  std::size_t refreshes_ = 0;
};

}  // namespace ris

#endif  // RIS_MINIMIZE_HPP
