#ifndef RIS_JUMP_COST_HPP
#define RIS_JUMP_COST_HPP

#include <iosfwd>
#include <optional>
#include <vector>

#include "ris/energy_model.hpp"
#include "ris/state_space.hpp"

namespace ris
{

/// A discrete transition r_i -> theta_i at a frozen time.
struct TransitionChain
{
  double t = 0.0;
  std::vector<double> r;          ///< strictly increasing parameters (r_i = i)
  std::vector<State> theta;
  std::vector<double> residuals;  ///< R(t, theta_i)
  std::vector<double> edges;      ///< d(theta_i, theta_{i+1}), one fewer than nodes
};

struct CostBreakdown
{
  double var_term = 0.0;          ///< sum of edge distances
  double gap_term = 0.0;          ///< sum of mu/2 d^2 over edges
  double residual_term = 0.0;     ///< sum of R over non-terminal nodes
  double bv_integral_term = 0.0;  ///< int |theta'| (slope v 1) for viscous costs
  double partition_sup = 0.0;     ///< partition-sup cross-check of the integral (path costs)
  double total = 0.0;
  TransitionChain chain;
};

/// Cost of a given chain: sum_i [d + mu/2 d^2](theta_i, theta_{i+1}) + sum_{i<M} R(t, theta_i).
CostBreakdown ve_chain_cost(const EnergyModel& model, const GridSpace& grid, double t,
                            const std::vector<State>& chain, double mu);

struct CostOptions
{
  /// Extra room around the bounding box of the end points; negative selects
  /// 0.25 d(a,b) + 2h.
  double window_margin = -1.0;
  /// Longest edge relaxed by ve_cost. Negative selects the complete graph for
  /// windows of at most kCompleteGraphNodes nodes and otherwise
  /// max(50h, 4 x the edge length of the best straight seed chain).
  double max_edge = -1.0;
};

inline constexpr std::size_t kCompleteGraphNodes = 4096;

/**
 * c_mu(t,a,b): cheapest chain from a to b among grid nodes of a window
 * around the end points. Every pair of window nodes is an edge, so pure
 * jumps are single long edges; edges that cannot beat the direct jump are
 * never relaxed.
 */
CostBreakdown ve_cost(const EnergyModel& model, const GridSpace& grid, double t, const State& a,
                      const State& b, double mu, const CostOptions& options = {});

/// Metric slope used by the viscous integrands: analytic when the model
/// provides it, otherwise the 3h difference quotient.
double transition_slope(const EnergyModel& model, const GridSpace& grid, double t, const State& u);

/// int |theta'| (slope v 1) along a sampled path (midpoint rule) together with
/// the partition-sup value over the sample partition.
CostBreakdown bv_path_cost(const EnergyModel& model, const GridSpace& grid, double t,
                           const std::vector<State>& path);

/// v(t,a,b): shortest path over grid neighbours with edge weight
/// d(p,q) max(1, (slope(p) + slope(q)) / 2).
CostBreakdown viscous_cost(const EnergyModel& model, const GridSpace& grid, double t,
                           const State& a, const State& b, const CostOptions& options = {});

enum class SegmentKind
{
  slide,
  jump
};

struct TransitionSegment
{
  SegmentKind kind = SegmentKind::slide;
  std::size_t first = 0;  ///< first node index
  std::size_t last = 0;   ///< last node index (inclusive)
};

struct JumpNodeCheck
{
  std::size_t node = 0;
  double argmin_gap = 0.0;  ///< objective at theta_i minus the grid minimum from theta_{i-1}
};

struct TransitionClassification
{
  std::vector<TransitionSegment> segments;
  std::vector<JumpNodeCheck> jump_checks;
  double tolerance = 0.0;
};

/// 10 h C_P (1 + sup F) with the sup over the chain's nodes.
double default_transition_tolerance(const EnergyModel& model, const GridSpace& grid,
                                    const TransitionChain& chain);

/// Splits the non-terminal nodes into sliding runs (R <= tol and outgoing
/// step <= 2h) and pure-jump nodes; each pure-jump node with a predecessor is
/// checked against the grid Argmin of E(t,.) + D_mu(theta_{i-1},.).
TransitionClassification classify_transition(const EnergyModel& model, const GridSpace& grid,
                                             const TransitionChain& chain, double mu,
                                             std::optional<double> tol = std::nullopt);

/// Columns: i,r_i,theta_1..,R_i,d_edge_i,kind.
void write_transition_csv(std::ostream& os, const TransitionChain& chain, double h);

}  // namespace ris

#endif  // RIS_JUMP_COST_HPP
