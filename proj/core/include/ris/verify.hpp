#ifndef RIS_VERIFY_HPP
#define RIS_VERIFY_HPP

#include <iosfwd>
#include <string>
#include <vector>

#include "ris/bv_curve.hpp"
#include "ris/energy_model.hpp"
#include "ris/state_space.hpp"

namespace ris
{

struct ConditionEntry
{
  std::string name;
  double max_violation = 0.0;
  double worst_time = 0.0;
  double tol = 0.0;
  bool pass = true;
};

/// Energy drop across a jump cluster against the concept's jump cost.
struct JumpEntry
{
  double t_start = 0.0;
  double t_end = 0.0;
  State left;
  State right;
  double energy_drop = 0.0;  ///< E(t,u-) - E(t,u+) at t = t_start
  double cost = 0.0;         ///< e(t,u-,u+)
  double gap = 0.0;          ///< |energy_drop - cost|
};

struct BalanceSample
{
  double t = 0.0;
  double residual = 0.0;  ///< E(t,u(t)) + Var_{d,e}(t0,t) - E(t0,u(t0)) - int P, signed
};

struct VerificationReport
{
  std::string concept_name;  ///< energetic | bv | ve
  double mu = 0.0;
  double h = 0.0;
  double tol = 0.0;
  std::vector<ConditionEntry> conditions;
  std::vector<BalanceSample> balance;
  std::vector<JumpEntry> jumps;

  bool passed() const;
  const ConditionEntry* find(const std::string& name) const;
};

/// C_tol (h + tau + quadrature step).
double default_tolerance(double c_tol, double h, double tau, double quadrature_step);

struct VerifyOptions
{
  double tol = 1e-2;
  std::size_t dyadic_levels = 5;  ///< localized inequality on [s,t] of this dyadic depth
};

VerificationReport check_energetic(const EnergyModel& model, const GridSpace& grid, const BVCurve& u,
                                   const VerifyOptions& options = {});
VerificationReport check_bv(const EnergyModel& model, const GridSpace& grid, const BVCurve& u,
                            const VerifyOptions& options = {});
VerificationReport check_ve(const EnergyModel& model, const GridSpace& grid, const BVCurve& u,
                            double mu, const VerifyOptions& options = {});

/// Jump costs as used by the verifier (end points must be grid nodes).
JumpCost viscous_jump_cost(const EnergyModel& model, const GridSpace& grid);
JumpCost ve_jump_cost(const EnergyModel& model, const GridSpace& grid, double mu);

/// LHS - RHS of E(t,u(t)) + Var_{d,e}(u;[s,t]) <= E(s,u(s)) + int_s^t P(r,u(r)) dr.
double upper_energy_estimate(const EnergyModel& model, const BVCurve& u, double s, double t,
                             const JumpCost& e = JumpCost::metric());

/// Largest violation of -d/dt E(t,u(t)) + P(t,u(t)) <= |u'|(t) |DE|(t,u(t)) over
/// consecutive jump-free samples.
double chain_rule_excess(const EnergyModel& model, const GridSpace& grid, const BVCurve& u);

/// Columns: condition,max_violation,worst_time,tol,pass.
void write_report_csv(std::ostream& os, const VerificationReport& report);
/// Human-readable summary including tolerances and grid metadata.
void write_report_text(std::ostream& os, const VerificationReport& report);

}  // namespace ris

#endif  // RIS_VERIFY_HPP
