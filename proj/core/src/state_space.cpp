#include "ris/state_space.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "ris/errors.hpp"

namespace ris
{

State::State(std::span<const double> coords)
{
  if (coords.empty() || coords.size() > kMaxDim)
  {
    throw DomainError("state dimension must be 1 or 2");
  }
  dim_ = coords.size();
  std::copy(coords.begin(), coords.end(), coords_.begin());
}

std::string State::to_string() const
{
  std::ostringstream os;
  os.precision(17);
  os << '(';
  for (std::size_t k = 0; k < dim_; ++k)
  {
    if (k > 0)
    {
      os << ", ";
    }
    os << coords_[k];
  }
  os << ')';
  return os.str();
}

double distance(const State& a, const State& b) noexcept
{
  if (a.dim() == 1)
  {
    return std::fabs(a[0] - b[0]);
  }
  return std::hypot(a[0] - b[0], a[1] - b[1]);
}

bool lexicographically_less(const State& a, const State& b) noexcept
{
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

State lerp(const State& a, const State& b, double s) noexcept
{
  State out = a;
  for (std::size_t k = 0; k < a.dim(); ++k)
  {
    out[k] = (1.0 - s) * a[k] + s * b[k];
  }
  return out;
}

GridSpace::GridSpace(std::vector<Interval> bounds, double h)
  : bounds_(std::move(bounds)), h_(h)
{
  if (bounds_.empty() || bounds_.size() > kMaxDim)
  {
    throw DomainError("grid dimension must be 1 or 2");
  }
  if (!(h_ > 0.0) || !std::isfinite(h_))
  {
    throw DomainError("grid spacing h must be positive");
  }
  size_ = 1;
  tile_width_ = bounds_.size() == 1 ? 64 : 8;
  tile_total_ = 1;
  for (std::size_t axis = 0; axis < bounds_.size(); ++axis)
  {
    const auto [lo, hi] = bounds_[axis];
    if (!(hi >= lo))
    {
      throw DomainError("grid bounds must satisfy lo <= hi");
    }
    counts_[axis] = static_cast<std::size_t>(std::floor((hi - lo) / h_ + 1e-9)) + 1;
    size_ *= counts_[axis];
    tile_counts_[axis] = (counts_[axis] + tile_width_ - 1) / tile_width_;
    tile_total_ *= tile_counts_[axis];
  }
}

State GridSpace::point(std::size_t index) const
{
  if (bounds_.size() == 1)
  {
    return State(bounds_[0].lo + static_cast<double>(index) * h_);
  }
  const std::size_t ix = index % counts_[0];
  const std::size_t iy = index / counts_[0];
  return State(bounds_[0].lo + static_cast<double>(ix) * h_,
               bounds_[1].lo + static_cast<double>(iy) * h_);
}

std::array<std::size_t, kMaxDim> GridSpace::coords(std::size_t index) const
{
  if (bounds_.size() == 1)
  {
    return {index, 0};
  }
  return {index % counts_[0], index / counts_[0]};
}

std::size_t GridSpace::index(const std::array<std::size_t, kMaxDim>& c) const
{
  return bounds_.size() == 1 ? c[0] : c[0] + counts_[0] * c[1];
}

std::size_t GridSpace::nearest(const State& u) const
{
  std::array<std::size_t, kMaxDim> c{0, 0};
  for (std::size_t axis = 0; axis < bounds_.size(); ++axis)
  {
    const double k = std::round((u[axis] - bounds_[axis].lo) / h_);
    const double clamped = std::clamp(k, 0.0, static_cast<double>(counts_[axis] - 1));
    c[axis] = static_cast<std::size_t>(clamped);
  }
  return index(c);
}

bool GridSpace::contains(const State& u) const
{
  if (u.dim() != bounds_.size())
  {
    return false;
  }
  const double slack = 1e-9 * h_;
  for (std::size_t axis = 0; axis < bounds_.size(); ++axis)
  {
    if (!(u[axis] >= bounds_[axis].lo - slack && u[axis] <= bounds_[axis].hi + slack))
    {
      return false;
    }
  }
  return true;
}

bool GridSpace::is_node(const State& u) const
{
  return contains(u) && distance(point(nearest(u)), u) <= 1e-9 * h_;
}

std::vector<std::size_t> GridSpace::neighbors(std::size_t idx) const
{
  std::vector<std::size_t> out;
  const auto c = coords(idx);
  if (bounds_.size() == 1)
  {
    if (c[0] > 0)
    {
      out.push_back(idx - 1);
    }
    if (c[0] + 1 < counts_[0])
    {
      out.push_back(idx + 1);
    }
    return out;
  }
  for (int dy = -1; dy <= 1; ++dy)
  {
    for (int dx = -1; dx <= 1; ++dx)
    {
      if (dx == 0 && dy == 0)
      {
        continue;
      }
      const auto x = static_cast<std::ptrdiff_t>(c[0]) + dx;
      const auto y = static_cast<std::ptrdiff_t>(c[1]) + dy;
      if (x < 0 || y < 0 || x >= static_cast<std::ptrdiff_t>(counts_[0]) ||
          y >= static_cast<std::ptrdiff_t>(counts_[1]))
      {
        continue;
      }
      out.push_back(index({static_cast<std::size_t>(x), static_cast<std::size_t>(y)}));
    }
  }
  return out;
}

double GridSpace::diameter() const
{
  double sq = 0.0;
  for (std::size_t axis = 0; axis < bounds_.size(); ++axis)
  {
    const double len = static_cast<double>(counts_[axis] - 1) * h_;
    sq += len * len;
  }
  return std::sqrt(sq);
}

std::size_t GridSpace::tile_of(std::size_t idx) const
{
  const auto c = coords(idx);
  return tile_index({c[0] / tile_width_, c[1] / tile_width_});
}

std::size_t GridSpace::tile_index(const std::array<std::size_t, kMaxDim>& t) const
{
  return bounds_.size() == 1 ? t[0] : t[0] + tile_counts_[0] * t[1];
}

void GridSpace::tile_range(std::size_t tile,
                           std::array<std::size_t, kMaxDim>& first,
                           std::array<std::size_t, kMaxDim>& last) const
{
  std::array<std::size_t, kMaxDim> t{tile, 0};
  if (bounds_.size() == 2)
  {
    t = {tile % tile_counts_[0], tile / tile_counts_[0]};
  }
  first = {0, 0};
  last = {0, 0};
  for (std::size_t axis = 0; axis < bounds_.size(); ++axis)
  {
    first[axis] = t[axis] * tile_width_;
    last[axis] = std::min(first[axis] + tile_width_, counts_[axis]) - 1;
  }
}

double GridSpace::distance_to_tile(const State& u, std::size_t tile) const
{
  std::array<std::size_t, kMaxDim> first{};
  std::array<std::size_t, kMaxDim> last{};
  tile_range(tile, first, last);
  double sq = 0.0;
  for (std::size_t axis = 0; axis < bounds_.size(); ++axis)
  {
    const double lo = bounds_[axis].lo + static_cast<double>(first[axis]) * h_;
    const double hi = bounds_[axis].lo + static_cast<double>(last[axis]) * h_;
    double gap = 0.0;
    if (u[axis] < lo)
    {
      gap = lo - u[axis];
    }
    else if (u[axis] > hi)
    {
      gap = u[axis] - hi;
    }
    sq += gap * gap;
  }
  return std::sqrt(sq);
}

}  // namespace ris
