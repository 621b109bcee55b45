#include "ris/bv_curve.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <optional>
#include <ostream>
#include <string>

#include "ris/csv.hpp"
#include "ris/errors.hpp"

namespace ris
{

namespace
{

bool same_time(double a, double b) { return std::fabs(a - b) <= 1e-12 * std::max(1.0, std::fabs(b)); }

void require_interval(double t0, double t1)
{
  if (!(t1 >= t0))
  {
    throw DomainError("interval end precedes its start");
  }
}

/// Value at a time strictly inside (t_k, t_{k+1}): the straight segment from
/// u(t_k+) to u(t_{k+1}-), the same path variation_function measures.
State between(const BVCurve& u, std::size_t k, double t)
{
  const State& a = u.right_limit(k);
  const State& b = u.left_limit(k + 1);
  const double s = (t - u.times()[k]) / (u.times()[k + 1] - u.times()[k]);
  double coords[kMaxDim] = {};
  for (std::size_t i = 0; i < a.dim(); ++i)
  {
    coords[i] = a[i] + s * (b[i] - a[i]);
  }
  return State(std::span<const double>(coords, a.dim()));
}

/// Whether t lies strictly between two samples, with the index of the left one.
std::optional<std::size_t> interior_segment(const BVCurve& u, double t)
{
  const auto& times = u.times();
  if (t <= times.front() || t >= times.back())
  {
    return std::nullopt;
  }
  const std::size_t k = u.sample_index(t);
  if (same_time(times[k], t) || same_time(times[k + 1], t))
  {
    return std::nullopt;
  }
  return k;
}

/// Points whose consecutive distances make up Var_d on [t0,t1]. End points
/// that fall between samples contribute the interpolated value, which keeps
/// the variation additive under arbitrary splits.
std::vector<State> extended_sequence(const BVCurve& u, double t0, double t1)
{
  std::vector<State> seq;
  const auto& times = u.times();
  if (const auto k = interior_segment(u, t0))
  {
    seq.push_back(between(u, *k, t0));
  }
  for (std::size_t k = 0; k < times.size(); ++k)
  {
    const double t = times[k];
    const bool first = same_time(t, t0);
    const bool last = same_time(t, t1);
    if (!(first || last || (t > t0 && t < t1)))
    {
      continue;
    }
    const JumpRecord* jr = u.jump_at_sample(k);
    if (jr == nullptr)
    {
      seq.push_back(u.values()[k]);
      continue;
    }
    if (!first)
    {
      seq.push_back(jr->left);
    }
    seq.push_back(jr->at);
    if (!last)
    {
      seq.push_back(jr->right);
    }
  }
  if (const auto k = interior_segment(u, t1))
  {
    seq.push_back(between(u, *k, t1));
  }
  return seq;
}

}  // namespace

BVCurve::BVCurve(std::vector<double> times, std::vector<State> values, std::vector<JumpRecord> jumps,
                 std::optional<double> modulus)
  : times_(std::move(times)), values_(std::move(values)), jumps_(std::move(jumps))
{
  if (times_.size() != values_.size())
  {
    throw DomainError("curve needs one value per sample time");
  }
  if (times_.empty())
  {
    throw DomainError("curve needs at least one sample");
  }
  for (std::size_t k = 1; k < times_.size(); ++k)
  {
    if (!(times_[k] > times_[k - 1]))
    {
      throw DomainError("sample times must be strictly increasing");
    }
  }
  for (const auto& v : values_)
  {
    if (v.dim() != values_.front().dim())
    {
      throw DomainError("all curve values must share one dimension");
    }
  }
  if (jumps_.size() > kMaxJumpRecords)
  {
    throw DomainError("too many jump records");
  }
  std::sort(jumps_.begin(), jumps_.end(), [](const auto& a, const auto& b) { return a.t < b.t; });
  jump_of_sample_.assign(times_.size(), -1);
  for (std::size_t j = 0; j < jumps_.size(); ++j)
  {
    const auto& jr = jumps_[j];
    const auto it = std::lower_bound(times_.begin(), times_.end(), jr.t - 1e-12 * std::max(1.0, std::fabs(jr.t)));
    if (it == times_.end() || !same_time(*it, jr.t))
    {
      throw DomainError("jump time " + csv::number(jr.t) + " is not a sample time");
    }
    const auto k = static_cast<std::size_t>(it - times_.begin());
    if (jump_of_sample_[k] >= 0)
    {
      throw DomainError("two jump records at one sample time");
    }
    if (!(values_[k] == jr.at))
    {
      throw DomainError("sample value at a jump must equal the record's intermediate value");
    }
    if (jr.left == jr.right && jr.left == jr.at)
    {
      throw DomainError("jump record without any jump");
    }
    jump_of_sample_[k] = static_cast<std::ptrdiff_t>(j);
  }
  if (modulus)
  {
    for (std::size_t k = 1; k < times_.size(); ++k)
    {
      if (distance(right_limit(k - 1), left_limit(k)) > *modulus)
      {
        throw DomainError("adjacent samples exceed the continuity modulus at t = " +
                          csv::number(times_[k]));
      }
    }
  }
}

const JumpRecord* BVCurve::jump_at_sample(std::size_t k) const
{
  const auto j = jump_of_sample_.at(k);
  return j < 0 ? nullptr : &jumps_[static_cast<std::size_t>(j)];
}

std::size_t BVCurve::sample_index(double t) const
{
  const auto it = std::upper_bound(times_.begin(), times_.end(), t + 1e-12 * std::max(1.0, std::fabs(t)));
  return it == times_.begin() ? 0 : static_cast<std::size_t>(it - times_.begin()) - 1;
}

const State& BVCurve::left_limit(std::size_t k) const
{
  const JumpRecord* jr = jump_at_sample(k);
  return jr ? jr->left : values_[k];
}

const State& BVCurve::right_limit(std::size_t k) const
{
  const JumpRecord* jr = jump_at_sample(k);
  return jr ? jr->right : values_[k];
}

// ---------------------------------------------------------------------------

double JumpCost::operator()(double t, const State& a, const State& b) const
{
  return a == b ? 0.0 : eval(t, a, b);
}

JumpCost JumpCost::metric()
{
  return {"d", [](double, const State& a, const State& b) { return distance(a, b); }};
}

JumpCost JumpCost::quadratic(double mu)
{
  return {"d+mu/2 d^2", [mu](double, const State& a, const State& b) {
            const double r = distance(a, b);
            return r + 0.5 * mu * r * r;
          }};
}

// ---------------------------------------------------------------------------

double total_variation(const BVCurve& u, double t0, double t1)
{
  require_interval(t0, t1);
  const auto seq = extended_sequence(u, t0, t1);
  double acc = 0.0;
  for (std::size_t k = 1; k < seq.size(); ++k)
  {
    acc += distance(seq[k - 1], seq[k]);
  }
  return acc;
}

double total_variation(const BVCurve& u) { return total_variation(u, u.times().front(), u.times().back()); }

std::vector<double> variation_function(const BVCurve& u)
{
  std::vector<double> out(u.size(), 0.0);
  for (std::size_t k = 1; k < u.size(); ++k)
  {
    // u(t_{k-1}) -> u(t_{k-1}+) -> u(t_k-) -> u(t_k)
    const double step = distance(u.values()[k - 1], u.right_limit(k - 1)) +
                        distance(u.right_limit(k - 1), u.left_limit(k)) +
                        distance(u.left_limit(k), u.values()[k]);
    out[k] = out[k - 1] + step;
  }
  return out;
}

double jump_variation_d(const BVCurve& u, double t0, double t1)
{
  return incremental_jump_variation(u, JumpCost{"2d", [](double, const State& a, const State& b) {
                                                  return 2.0 * distance(a, b);
                                                }},
                                    t0, t1);
}

double incremental_jump_variation(const BVCurve& u, const JumpCost& e, double t0, double t1)
{
  require_interval(t0, t1);
  auto delta = [&](double t, const State& a, const State& b) {
    if (a == b)
    {
      return 0.0;
    }
    const double d = distance(a, b);
    const double c = e(t, a, b);
    if (c < d - 1e-12 * std::max(1.0, d))
    {
      throw ContractViolation("jump cost '" + e.name + "' below the distance at t = " + csv::number(t));
    }
    return std::max(0.0, c - d);
  };
  double acc = 0.0;
  for (const auto& jr : u.jumps())
  {
    const bool first = same_time(jr.t, t0);
    const bool last = same_time(jr.t, t1);
    if (!(first || last || (jr.t > t0 && jr.t < t1)))
    {
      continue;
    }
    if (!first)
    {
      acc += delta(jr.t, jr.left, jr.at);
    }
    if (!last)
    {
      acc += delta(jr.t, jr.at, jr.right);
    }
  }
  return acc;
}

double augmented_variation(const BVCurve& u, const JumpCost& e, double t0, double t1)
{
  return total_variation(u, t0, t1) + incremental_jump_variation(u, e, t0, t1);
}

double additivity_check(const BVCurve& u, const JumpCost& e, double a, double b, double c)
{
  if (!(a <= b && b <= c))
  {
    throw DomainError("additivity check needs a <= b <= c");
  }
  return std::fabs(augmented_variation(u, e, a, c) - augmented_variation(u, e, a, b) -
                   augmented_variation(u, e, b, c));
}

double metric_derivative(const BVCurve& u, double t)
{
  if (!u.jumps().empty())
  {
    throw ContractViolation("metric derivative needs a curve without jumps");
  }
  if (u.size() < 2)
  {
    return 0.0;
  }
  std::size_t k = u.sample_index(t);
  if (k + 1 < u.size() && std::fabs(u.times()[k + 1] - t) < std::fabs(u.times()[k] - t))
  {
    ++k;
  }
  const std::size_t lo = k == 0 ? 0 : k - 1;
  const std::size_t hi = k + 1 == u.size() ? k : k + 1;
  return distance(u.values()[lo], u.values()[hi]) / (u.times()[hi] - u.times()[lo]);
}

// ---------------------------------------------------------------------------

double jump_threshold(const std::vector<State>& values, double h)
{
  std::vector<double> steps;
  steps.reserve(values.size());
  for (std::size_t k = 1; k < values.size(); ++k)
  {
    steps.push_back(distance(values[k - 1], values[k]));
  }
  double median = 0.0;
  if (!steps.empty())
  {
    const auto mid = steps.begin() + static_cast<std::ptrdiff_t>(steps.size() / 2);
    std::nth_element(steps.begin(), mid, steps.end());
    median = *mid;
  }
  return std::max(10.0 * h, 5.0 * median);
}

BVCurve detect_jumps(const std::vector<double>& times, const std::vector<State>& values, double h)
{
  const double threshold = jump_threshold(values, h);
  std::vector<JumpRecord> jumps;
  for (std::size_t k = 1; k < values.size(); ++k)
  {
    if (distance(values[k - 1], values[k]) > threshold)
    {
      jumps.push_back({times[k], values[k - 1], values[k], values[k]});
    }
  }
  return BVCurve(times, values, std::move(jumps));
}

std::vector<JumpCluster> jump_clusters(const BVCurve& u)
{
  std::vector<JumpCluster> out;
  for (std::size_t k = 0; k < u.size(); ++k)
  {
    const JumpRecord* jr = u.jump_at_sample(k);
    if (jr == nullptr)
    {
      continue;
    }
    if (!out.empty() && out.back().last_sample + 1 == k)
    {
      out.back().last_sample = k;
      out.back().t_end = jr->t;
      out.back().right = jr->right;
      continue;
    }
    out.push_back({jr->t, jr->t, k, k, jr->left, jr->right});
  }
  return out;
}

// ---------------------------------------------------------------------------

void write_curve_csv(std::ostream& os, const BVCurve& u)
{
  const std::size_t n = u.dim();
  std::vector<std::string> header{"t"};
  for (const char* prefix : {"u_", "is_jump", "left_", "at_", "right_"})
  {
    if (std::string(prefix) == "is_jump")
    {
      header.emplace_back(prefix);
      continue;
    }
    for (std::size_t k = 1; k <= n; ++k)
    {
      header.push_back(prefix + std::to_string(k));
    }
  }
  csv::write_row(os, header);
  for (std::size_t k = 0; k < u.size(); ++k)
  {
    std::vector<std::string> row{csv::number(u.times()[k])};
    for (const double x : u.values()[k])
    {
      row.push_back(csv::number(x));
    }
    const JumpRecord* jr = u.jump_at_sample(k);
    row.emplace_back(jr ? "1" : "0");
    for (const State* s : {jr ? &jr->left : nullptr, jr ? &jr->at : nullptr, jr ? &jr->right : nullptr})
    {
      for (std::size_t c = 0; c < n; ++c)
      {
        row.push_back(s ? csv::number((*s)[c]) : std::string());
      }
    }
    csv::write_row(os, row);
  }
}

BVCurve read_curve_csv(std::istream& is)
{
  std::string line;
  if (!std::getline(is, line))
  {
    throw UsageError("curve", "empty curve file");
  }
  const auto header = csv::split(line);
  const auto flag = std::find(header.begin(), header.end(), "is_jump");
  if (header.empty() || header.front() != "t" || flag == header.end())
  {
    throw UsageError("curve", "header must start with t and contain is_jump");
  }
  const auto n = static_cast<std::size_t>(flag - header.begin()) - 1;
  if (n < 1 || n > kMaxDim || header.size() != 2 + 4 * n)
  {
    throw UsageError("curve", "unexpected number of columns in header");
  }
  auto read_state = [n](const std::vector<std::string>& f, std::size_t offset, std::size_t line_no) {
    std::vector<double> c(n);
    for (std::size_t k = 0; k < n; ++k)
    {
      c[k] = csv::parse_number(f[offset + k], "curve line " + std::to_string(line_no));
    }
    return State(std::span<const double>(c));
  };

  std::vector<double> times;
  std::vector<State> values;
  std::vector<JumpRecord> jumps;
  std::size_t line_no = 1;
  while (std::getline(is, line))
  {
    ++line_no;
    if (line.empty() || line == "\r")
    {
      continue;
    }
    const auto f = csv::split(line);
    if (f.size() != header.size())
    {
      throw UsageError("curve line " + std::to_string(line_no), "wrong number of fields");
    }
    const double t = csv::parse_number(f[0], "curve line " + std::to_string(line_no));
    times.push_back(t);
    values.push_back(read_state(f, 1, line_no));
    if (f[1 + n] == "1")
    {
      jumps.push_back({t, read_state(f, 2 + n, line_no), read_state(f, 2 + 2 * n, line_no),
                       read_state(f, 2 + 3 * n, line_no)});
    }
    else if (f[1 + n] != "0")
    {
      throw UsageError("curve line " + std::to_string(line_no), "is_jump must be 0 or 1");
    }
  }
  return BVCurve(std::move(times), std::move(values), std::move(jumps));
}

}  // namespace ris
