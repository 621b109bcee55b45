#ifndef RIS_BV_CURVE_HPP
#define RIS_BV_CURVE_HPP

#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "ris/state_space.hpp"

namespace ris
{

/// u(t-), u(t), u(t+) at a jump time t.
struct JumpRecord
{
  double t = 0.0;
  State left;
  State at;
  State right;
};

inline constexpr std::size_t kMaxJumpRecords = 10000;

/**
 * @brief Time-sampled curve of bounded variation with explicit jump data.
 *
 * Jump times must be sample times and the sample value there must equal the
 * record's intermediate value `at`. Between jumps the samples are read as a
 * continuous curve.
 */
class BVCurve
{
public:
  BVCurve() = default;
  /// @param modulus optional bound on d between adjacent samples away from jumps
  BVCurve(std::vector<double> times, std::vector<State> values, std::vector<JumpRecord> jumps = {},
          std::optional<double> modulus = std::nullopt);

  std::size_t size() const noexcept { return times_.size(); }
  std::size_t dim() const noexcept { return values_.empty() ? 0 : values_.front().dim(); }
  const std::vector<double>& times() const noexcept { return times_; }
  const std::vector<State>& values() const noexcept { return values_; }
  const std::vector<JumpRecord>& jumps() const noexcept { return jumps_; }

  /// Jump record attached to sample k, if any.
  const JumpRecord* jump_at_sample(std::size_t k) const;
  /// Index of the last sample with time <= t (clamped to the first sample).
  std::size_t sample_index(double t) const;
  /// Left limit u(t-) at sample k (the record's left value at a jump).
  const State& left_limit(std::size_t k) const;
  /// Right limit u(t+) at sample k.
  const State& right_limit(std::size_t k) const;

private:
  std::vector<double> times_;
  std::vector<State> values_;
  std::vector<JumpRecord> jumps_;
  std::vector<std::ptrdiff_t> jump_of_sample_;
};

/// Jump dissipation cost e(t,a,b) >= d(a,b).
struct JumpCost
{
  std::string name;
  std::function<double(double, const State&, const State&)> eval;

  double operator()(double t, const State& a, const State& b) const;

  static JumpCost metric();
  /// d + mu/2 d^2 evaluated on the jump end points.
  static JumpCost quadratic(double mu);
};

/// Var_d(u;[t0,t1]) over the stored samples, jump triples included.
double total_variation(const BVCurve& u, double t0, double t1);
double total_variation(const BVCurve& u);

/// V_u(t_k) = Var_d(u;[t_first, t_k]) at every sample.
std::vector<double> variation_function(const BVCurve& u);

/// Jump contribution with half jumps at the interval ends.
double jump_variation_d(const BVCurve& u, double t0, double t1);

/// Jmp_{Delta e}(u;[t0,t1]); throws ContractViolation if e < d on a jump pair.
double incremental_jump_variation(const BVCurve& u, const JumpCost& e, double t0, double t1);

/// Var_{d,e} = Var_d + Jmp_{Delta e}.
double augmented_variation(const BVCurve& u, const JumpCost& e, double t0, double t1);

/// |Var(a,c) - Var(a,b) - Var(b,c)| for the augmented variation.
double additivity_check(const BVCurve& u, const JumpCost& e, double a, double b, double c);

/// Central difference of a jump-free curve at the sample nearest t.
double metric_derivative(const BVCurve& u, double t);

/// Step threshold separating grid-scale motion from jumps: max(10h, 5 median step).
double jump_threshold(const std::vector<State>& values, double h);

/// Marks steps whose displacement exceeds the threshold as jumps
/// (left = previous sample, at = right = current sample).
BVCurve detect_jumps(const std::vector<double>& times, const std::vector<State>& values, double h);

/// Maximal run of jump records on consecutive samples, read as a single transition.
struct JumpCluster
{
  double t_start = 0.0;
  double t_end = 0.0;
  std::size_t first_sample = 0;
  std::size_t last_sample = 0;
  State left;
  State right;
};

std::vector<JumpCluster> jump_clusters(const BVCurve& u);

/// Header: t,u_1..,is_jump,left_1..,at_1..,right_1.. with 17 significant digits.
void write_curve_csv(std::ostream& os, const BVCurve& u);
BVCurve read_curve_csv(std::istream& is);

}  // namespace ris

#endif  // RIS_BV_CURVE_HPP
