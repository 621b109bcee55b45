#ifndef RIS_STATE_SPACE_HPP
#define RIS_STATE_SPACE_HPP

#include <array>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace ris
{

inline constexpr std::size_t kMaxDim = 2;

/**
 * @brief A point of the (finite-dimensional) state space.
 *
 * Fixed-capacity tuple of reals; unused trailing coordinates are kept at zero
 * so that defaulted equality compares states exactly.
 */
class State
{
public:
  State() = default;
  explicit State(double x) : dim_{1} { coords_[0] = x; }
  State(double x, double y) : dim_{2}
  {
    coords_[0] = x;
    coords_[1] = y;
  }
  explicit State(std::span<const double> coords);

  std::size_t dim() const noexcept { return dim_; }
  double operator[](std::size_t k) const noexcept { return coords_[k]; }
  double& operator[](std::size_t k) noexcept { return coords_[k]; }

  const double* begin() const noexcept { return coords_.data(); }
  const double* end() const noexcept { return coords_.data() + dim_; }

  friend bool operator==(const State&, const State&) = default;

  std::string to_string() const;

private:
  std::array<double, kMaxDim> coords_{};
  std::size_t dim_{0};
};

/// Euclidean distance; the metric d of every state space in this library.
double distance(const State& a, const State& b) noexcept;

/// Lexicographic order on coordinates, used for deterministic tie-breaking.
bool lexicographically_less(const State& a, const State& b) noexcept;

/// Affine combination (1-s) a + s b.
State lerp(const State& a, const State& b, double s) noexcept;

struct Interval
{
  double lo;
  double hi;
};

/**
 * @brief Uniform grid over a box in R^n (n <= 2) with the Euclidean metric.
 *
 * Node k along an axis sits at lo + k*h; the last node never exceeds hi.
 * Nodes are numbered with the first coordinate running fastest. The grid is
 * also partitioned into square tiles which the minimizers use for
 * branch-and-bound pruning.
 */
class GridSpace
{
public:
  GridSpace(std::vector<Interval> bounds, double h);

  std::size_t dim() const noexcept { return bounds_.size(); }
  double spacing() const noexcept { return h_; }
  std::size_t size() const noexcept { return size_; }
  std::size_t axis_count(std::size_t axis) const { return counts_.at(axis); }
  const std::vector<Interval>& bounds() const noexcept { return bounds_; }

  State point(std::size_t index) const;
  std::array<std::size_t, kMaxDim> coords(std::size_t index) const;
  std::size_t index(const std::array<std::size_t, kMaxDim>& coords) const;

  /// Index of the grid node closest to @p u (coordinates clamped to the box).
  std::size_t nearest(const State& u) const;
  /// True if @p u lies in the box (up to rounding) and has the grid's dimension.
  bool contains(const State& u) const;
  /// True if @p u coincides with a grid node up to 1e-9 h.
  bool is_node(const State& u) const;

  double dist(std::size_t a, std::size_t b) const { return distance(point(a), point(b)); }

  /// Adjacent nodes: left/right in 1D, the 8-neighbourhood in 2D.
  std::vector<std::size_t> neighbors(std::size_t index) const;

  /// Largest distance between two grid nodes.
  double diameter() const;

  // Tiles: square blocks of kTileWidth nodes per axis.
  std::size_t tile_width() const noexcept { return tile_width_; }
  std::size_t tile_count() const noexcept { return tile_total_; }
  std::size_t tile_count_along(std::size_t axis) const { return tile_counts_.at(axis); }
  std::size_t tile_of(std::size_t index) const;
  std::size_t tile_index(const std::array<std::size_t, kMaxDim>& tile_coords) const;
  /// Node-coordinate range [first, last] covered by a tile along each axis.
  void tile_range(std::size_t tile,
                  std::array<std::size_t, kMaxDim>& first,
                  std::array<std::size_t, kMaxDim>& last) const;
  /// Euclidean distance from @p u to the bounding box of a tile's nodes.
  double distance_to_tile(const State& u, std::size_t tile) const;

private:
  std::vector<Interval> bounds_;
  double h_;
  std::array<std::size_t, kMaxDim> counts_{1, 1};
  std::size_t size_{0};
  std::size_t tile_width_{0};
  std::array<std::size_t, kMaxDim> tile_counts_{1, 1};
  std::size_t tile_total_{0};
};

}  // namespace ris

#endif  // RIS_STATE_SPACE_HPP
