#include "ris/minimize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace ris
{

namespace detail
{

/// Running best / runner-up with the library's deterministic tie-breaking.
class Candidates
{
public:
  struct Entry
  {
    double value;
    double energy;
    double dist;
    State state;
    std::optional<std::size_t> node;
  };

  void offer(const Entry& e)
  {
    ++evaluations;
    if (!best_)
    {
      best_ = e;
      return;
    }
    const double tol = tie_tolerance();
    if (e.value < best_->value - tol)
    {
      second_ = std::min(second_, best_->value);
      best_ = e;
    }
    else if (e.value <= best_->value + tol)
    {
      if (preferred(e, *best_))
      {
        second_ = std::min(second_, best_->value);
        best_ = e;
      }
      else
      {
        second_ = std::min(second_, e.value);
      }
    }
    else
    {
      second_ = std::min(second_, e.value);
    }
  }

  /// Any candidate with objective above this value cannot change the result.
  double cutoff() const
  {
    if (!best_)
    {
      return std::numeric_limits<double>::infinity();
    }
    return std::max(second_, best_->value + tie_tolerance());
  }

  GridMinimum result() const
  {
    GridMinimum out;
    out.state = best_->state;
    out.node = best_->node;
    out.objective = best_->value;
    out.energy = best_->energy;
    out.distance = best_->dist;
    out.runner_up_gap = second_ - best_->value;
    out.evaluations = evaluations;
    return out;
  }

  std::size_t evaluations = 0;

private:
  double tie_tolerance() const { return kTieTolerance * std::max(1.0, std::fabs(best_->value)); }

  static bool preferred(const Entry& a, const Entry& b)
  {
    const double eps = 1e-14 * std::max(1.0, std::max(a.dist, b.dist));
    if (a.dist < b.dist - eps)
    {
      return true;
    }
    if (a.dist > b.dist + eps)
    {
      return false;
    }
    return lexicographically_less(a.state, b.state);
  }

  std::optional<Entry> best_;
  double second_ = std::numeric_limits<double>::infinity();
};

}  // namespace detail

namespace
{

using detail::Candidates;

void offer_centre(const EnergyModel& model, const GridSpace& grid, double t, const State& centre,
                  Candidates& acc)
{
  // An off-grid centre competes with distance zero; this keeps
  // E(t,c) - min(...) >= 0 for arbitrary c.
  if (!grid.is_node(centre))
  {
    const double e = model.energy(t, centre);
    acc.offer({e, e, 0.0, centre, std::nullopt});
  }
}

void offer_node(const EnergyModel& model, const GridSpace& grid, double t, const State& centre,
                Penalty penalty, std::size_t idx, Candidates& acc, double& energy_out)
{
  const State v = grid.point(idx);
  const double e = model.energy(t, v);
  const double r = distance(centre, v);
  energy_out = e;
  acc.offer({e + penalty(r), e, r, v, idx});
}

}  // namespace

GridMinimum minimize_exhaustive(const EnergyModel& model, const GridSpace& grid, double t,
                                const State& centre, Penalty penalty)
{
  Candidates acc;
  offer_centre(model, grid, t, centre, acc);
  double unused = 0.0;
  for (std::size_t idx = 0; idx < grid.size(); ++idx)
  {
    offer_node(model, grid, t, centre, penalty, idx, acc, unused);
  }
  return acc.result();
}

// ---------------------------------------------------------------------------

LandscapeTracker::LandscapeTracker(const EnergyModel& model, const GridSpace& grid,
                                   double refresh_slack)
  : model_(model),
    grid_(grid),
    slack_(refresh_slack),
    lipschitz_(model.time_lipschitz(grid.bounds())),
    tile_min_(grid.tile_count(), 0.0),
    tile_anchor_(grid.tile_count(), 0.0)
{
  if (lipschitz_)
  {
    // Guard against rounding in the bound itself.
    *lipschitz_ = std::fabs(*lipschitz_) * (1.0 + 1e-9) + 1e-12;
  }
}

void LandscapeTracker::refresh(double t)
{
  std::array<std::size_t, kMaxDim> first{};
  std::array<std::size_t, kMaxDim> last{};
  refresh_min_ = std::numeric_limits<double>::infinity();
  for (std::size_t tile = 0; tile < grid_.tile_count(); ++tile)
  {
    grid_.tile_range(tile, first, last);
    double lo = std::numeric_limits<double>::infinity();
    for (std::size_t y = first[1]; y <= last[1]; ++y)
    {
      for (std::size_t x = first[0]; x <= last[0]; ++x)
      {
        lo = std::min(lo, model_.energy(t, grid_.point(grid_.index({x, y}))));
      }
    }
    tile_min_[tile] = lo;
    tile_anchor_[tile] = t;
    refresh_min_ = std::min(refresh_min_, lo);
  }
  refresh_time_ = t;
  initialised_ = true;
  ++refreshes_;
}

void LandscapeTracker::visit_tile(std::size_t tile, double t, const State& centre,
                                  Penalty penalty, Candidates& acc)
{
  const double L = *lipschitz_;
  const double lower = tile_min_[tile] - L * std::fabs(t - tile_anchor_[tile]);
  const double cutoff = acc.cutoff();
  const double margin = 1e-12 * std::max(1.0, std::fabs(cutoff));
  if (penalty(grid_.distance_to_tile(centre, tile)) + lower > cutoff + margin)
  {
    return;
  }
  std::array<std::size_t, kMaxDim> first{};
  std::array<std::size_t, kMaxDim> last{};
  grid_.tile_range(tile, first, last);
  double lo = std::numeric_limits<double>::infinity();
  double e = 0.0;
  for (std::size_t y = first[1]; y <= last[1]; ++y)
  {
    for (std::size_t x = first[0]; x <= last[0]; ++x)
    {
      offer_node(model_, grid_, t, centre, penalty, grid_.index({x, y}), acc, e);
      lo = std::min(lo, e);
    }
  }
  // The tile was evaluated exactly at t: re-anchor it there.
  tile_min_[tile] = lo;
  tile_anchor_[tile] = t;
}

GridMinimum LandscapeTracker::minimize(double t, const State& centre, Penalty penalty)
{
  if (!lipschitz_)
  {
    return minimize_exhaustive(model_, grid_, t, centre, penalty);
  }
  const double L = *lipschitz_;
  if (!initialised_ || L * std::fabs(t - refresh_time_) > slack_)
  {
    refresh(t);
  }
  const double global_lower = refresh_min_ - L * std::fabs(t - refresh_time_);

  Candidates acc;
  offer_centre(model_, grid_, t, centre, acc);

  const std::size_t width = grid_.tile_width();
  const double h = grid_.spacing();
  const auto node = grid_.coords(grid_.nearest(centre));
  const bool two_d = grid_.dim() == 2;
  const long cx = static_cast<long>(node[0] / width);
  const long cy = two_d ? static_cast<long>(node[1] / width) : 0;
  const long nx = static_cast<long>(grid_.tile_count_along(0));
  const long ny = two_d ? static_cast<long>(grid_.tile_count_along(1)) : 1;
  const long max_ring = std::max({cx, nx - 1 - cx, cy, ny - 1 - cy});

  auto visit = [&](long tx, long ty) {
    if (tx < 0 || ty < 0 || tx >= nx || ty >= ny)
    {
      return;
    }
    const std::size_t tile =
      grid_.tile_index({static_cast<std::size_t>(tx), static_cast<std::size_t>(ty)});
    visit_tile(tile, t, centre, penalty, acc);
  };

  for (long k = 0; k <= max_ring; ++k)
  {
    // Every node in ring k lies at least this far from the centre.
    const double reach = std::max(0.0, (static_cast<double>((k - 1) * static_cast<long>(width)) - 1.0) * h);
    const double cutoff = acc.cutoff();
    if (penalty(reach) + global_lower > cutoff + 1e-12 * std::max(1.0, std::fabs(cutoff)))
    {
      break;
    }
    if (k == 0)
    {
      visit(cx, cy);
      continue;
    }
    if (!two_d)
    {
      visit(cx - k, 0);
      visit(cx + k, 0);
      continue;
    }
    for (long tx = cx - k; tx <= cx + k; ++tx)
    {
      visit(tx, cy - k);
      visit(tx, cy + k);
    }
    for (long ty = cy - k + 1; ty <= cy + k - 1; ++ty)
    {
      visit(cx - k, ty);
      visit(cx + k, ty);
    }
  }
  return acc.result();
}

}  // namespace ris
