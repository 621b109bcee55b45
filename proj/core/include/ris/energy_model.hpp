#ifndef RIS_ENERGY_MODEL_HPP
#define RIS_ENERGY_MODEL_HPP

#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ris/state_space.hpp"

namespace ris
{

/// Data every energy model carries besides its formula.
struct ModelContext
{
  State reference_point;        ///< x_o in F(t,u) = E(t,u) + d(x_o,u)
  double horizon = 1.0;         ///< T
  double power_constant = 1.0;  ///< C_P in |P| <= C_P F
};

/**
 * @brief Time-dependent energy E : [0,T] x X -> R together with its power.
 *
 * Concrete models override energy() and, when they can, the analytic power,
 * slope and time-Lipschitz bound. The default power is a central difference
 * in t with step 1e-6 T (one-sided at the ends of [0,T]).
 */
class EnergyModel
{
public:
  explicit EnergyModel(ModelContext context);
  virtual ~EnergyModel() = default;

  EnergyModel(const EnergyModel&) = delete;
  EnergyModel& operator=(const EnergyModel&) = delete;

  virtual std::string_view name() const = 0;
  virtual std::size_t dim() const = 0;
  virtual double energy(double t, const State& u) const = 0;
  virtual double power(double t, const State& u) const;
  /// |D E|(t,u) in closed form, if the model is smooth and knows it.
  virtual std::optional<double> analytic_slope(double t, const State& u) const;
  /// sup_{t, u in box} |P(t,u)|; enables the anchored pruning in the grid minimizers.
  virtual std::optional<double> time_lipschitz(std::span<const Interval> box) const;

  const ModelContext& context() const noexcept { return context_; }
  const State& reference_point() const noexcept { return context_.reference_point; }
  double horizon() const noexcept { return context_.horizon; }
  double power_constant() const noexcept { return context_.power_constant; }

private:
  ModelContext context_;
};

/// E(t,u) = k/2 |u - (offset + rate t)|^2
class QuadraticModel final : public EnergyModel
{
public:
  QuadraticModel(ModelContext context, double stiffness, State offset, State rate);

  std::string_view name() const override { return "quadratic"; }
  std::size_t dim() const override { return offset_.dim(); }
  double energy(double t, const State& u) const override;
  double power(double t, const State& u) const override;
  std::optional<double> analytic_slope(double t, const State& u) const override;
  std::optional<double> time_lipschitz(std::span<const Interval> box) const override;

  /// Minimizer of E(t,.) (the moving target).
  State target(double t) const;

private:
  double stiffness_;
  State offset_;
  State rate_;
};

/// E(t,u) = (u^2-1)^2/4 - l(t) u with the affine load l(t) = load_offset + load_rate t.
class DoubleWellModel final : public EnergyModel
{
public:
  DoubleWellModel(ModelContext context, double load_offset, double load_rate);

  std::string_view name() const override { return "double-well"; }
  std::size_t dim() const override { return 1; }
  double energy(double t, const State& u) const override;
  double power(double t, const State& u) const override;
  std::optional<double> analytic_slope(double t, const State& u) const override;
  std::optional<double> time_lipschitz(std::span<const Interval> box) const override;

  double load(double t) const noexcept { return load_offset_ + load_rate_ * t; }
  static double well(double u) noexcept;
  static double well_derivative(double u) noexcept;

private:
  double load_offset_;
  double load_rate_;
};

/// E(t,u) = (u1^2-1)^2/4 + coupling/2 (u2 - skew u1)^2 - l(t) u1
class TwoWell2DModel final : public EnergyModel
{
public:
  TwoWell2DModel(ModelContext context, double coupling, double skew, double load_offset,
                 double load_rate);

  std::string_view name() const override { return "two-well-2d"; }
  std::size_t dim() const override { return 2; }
  double energy(double t, const State& u) const override;
  double power(double t, const State& u) const override;
  std::optional<double> analytic_slope(double t, const State& u) const override;
  std::optional<double> time_lipschitz(std::span<const Interval> box) const override;

private:
  double coupling_;
  double skew_;
  double load_offset_;
  double load_rate_;
};

/// E(t,u) = sum_k c_k u^k - l(t) u (one-dimensional).
class PolynomialModel final : public EnergyModel
{
public:
  PolynomialModel(ModelContext context, std::vector<double> coefficients, double load_offset,
                  double load_rate);

  std::string_view name() const override { return "custom-polynomial"; }
  std::size_t dim() const override { return 1; }
  double energy(double t, const State& u) const override;
  double power(double t, const State& u) const override;
  std::optional<double> analytic_slope(double t, const State& u) const override;
  std::optional<double> time_lipschitz(std::span<const Interval> box) const override;

private:
  std::vector<double> coefficients_;
  double load_offset_;
  double load_rate_;
};

/// Named parameter block for make_model(); unknown keys are rejected.
struct ModelSpec
{
  std::string name;
  std::map<std::string, std::vector<double>> parameters;
  ModelContext context;
};

/// Builds one of the registered models: "quadratic", "double-well",
/// "two-well-2d", "custom-polynomial". Throws UsageError on bad parameters.
std::unique_ptr<EnergyModel> make_model(const ModelSpec& spec);

}  // namespace ris

#endif  // RIS_ENERGY_MODEL_HPP
