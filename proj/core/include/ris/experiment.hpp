#ifndef RIS_EXPERIMENT_HPP
#define RIS_EXPERIMENT_HPP

#include <filesystem>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "ris/bv_curve.hpp"
#include "ris/config.hpp"
#include "ris/energy_model.hpp"
#include "ris/solvers.hpp"
#include "ris/verify.hpp"

namespace ris
{

/// Discretization actually used for one scheme run.
struct Resolution
{
  double h = 0.0;
  double tau = 0.0;
};

/// Refines (h, tau) by integer factors so that 2 q h <= max_qh and
/// mu_eff tau <= max_mu_tau, where q is the quadratic coefficient of the
/// scheme's penalty and mu_eff = 2q. Integer factors keep the coarse grid and
/// partition nested in the fine ones. Caps equal to zero disable refinement.
Resolution refine_for(const Scheme& scheme, Resolution base, double max_mu_tau, double max_qh);

struct RunEntry
{
  std::string label;
  Scheme scheme;
  Resolution resolution;
  DiscreteTrajectory trajectory;
  BVCurve curve;
  VerificationReport report;
  std::filesystem::path trajectory_path;
  std::filesystem::path curve_path;
  std::filesystem::path report_path;
};

struct RunResult
{
  std::vector<RunEntry> entries;
  bool all_passed() const;
};

/// Solves and verifies every configured scheme; writes artifacts when
/// output_dir is set.
RunResult run_single(const RunConfig& config);

struct Comparison
{
  double sup_distance = 0.0;
  double max_energy_gap = 0.0;
  double worst_time = 0.0;
  std::size_t compared = 0;  ///< samples outside the exclusion windows
};

/// Maxima of d(uA,uB) and |E(t,uA) - E(t,uB)| over common sample times that lie
/// outside [start - delta, end + delta] of every jump cluster of either curve.
/// Throws UsageError if the sample grids differ.
Comparison compare_trajectories(const EnergyModel& model, const BVCurve& a, const BVCurve& b, double delta);

/// Piecewise-constant reading of @p curve at @p times with jumps redetected at spacing h.
BVCurve resample(const BVCurve& curve, const std::vector<double>& times, double h);

/// Start times of transitions: jump clusters closer than @p merge_gap are merged.
std::vector<double> transition_times(const BVCurve& curve, double merge_gap);

enum class SweepDirection
{
  down,  ///< reference = energetic scheme
  up     ///< reference = viscous scheme with eps fixed and tau = eps^2
};

struct SweepRow
{
  double mu = 0.0;
  Resolution resolution;
  std::filesystem::path trajectory_path;
  std::vector<double> jump_times;
  double sup_distance = 0.0;
  double max_energy_gap = 0.0;
  bool verified = false;
  bool verification_passed = true;
};

struct SweepResult
{
  std::string reference_tag;  ///< energetic | bv
  Resolution reference_resolution;
  std::vector<double> reference_jump_times;
  std::vector<SweepRow> rows;  ///< sorted by mu
  std::size_t trend_inversions = 0;
  double inversion_tolerance = 0.0;
  std::filesystem::path summary_path;
  BVCurve reference_curve;                ///< on the common coarse grid
  std::vector<BVCurve> curves;            ///< per row, on the common coarse grid

  bool passed() const;
};

SweepResult run_mu_sweep(const RunConfig& config, SweepDirection direction);

/// Runs jobs on at most RIS_SIM_THREADS workers (default: hardware concurrency).
void run_parallel(std::size_t count, const std::function<void(std::size_t)>& job);

std::unique_ptr<EnergyModel> build_model(const RunConfig& config);
GridSpace build_grid(const RunConfig& config, double h);

}  // namespace ris

#endif  // RIS_EXPERIMENT_HPP
