#ifndef RIS_CONFIG_HPP
#define RIS_CONFIG_HPP

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "ris/energy_model.hpp"
#include "ris/state_space.hpp"

namespace ris
{

inline constexpr int kConfigSchemaVersion = 1;

/// How the viscous scheme picks its time step.
enum class ViscousTauRule
{
  fixed,   ///< time.tau
  square   ///< tau = eps^2
};

struct RunConfig
{
  int schema_version = kConfigSchemaVersion;
  ModelSpec model;
  std::vector<Interval> bounds;
  double h = 1e-3;
  double horizon = 1.0;
  double tau = 1e-3;
  std::vector<std::string> schemes;  ///< subset of energetic, viscous, ve
  std::vector<double> mu;
  std::vector<double> epsilon;
  ViscousTauRule viscous_tau = ViscousTauRule::square;
  State initial_state;

  // tolerances
  double c_tol = 10.0;
  double tol = 0.0;             ///< absolute tolerance; 0 selects C_tol (h + 2 tau)
  double jump_exclusion = 5.0;  ///< exclusion half-width in units of tau

  // mu sweeps
  double bv_epsilon = 2e-3;     ///< BV proxy: viscous scheme with this eps and tau = eps^2
  double max_mu_tau = 0.0;      ///< if > 0, refine tau so that mu tau stays below this
  double max_mu_h = 0.0;        ///< if > 0, refine h so that mu h stays below this
  bool sweep_verify = false;

  std::filesystem::path output_dir;
  std::uint64_t seed = 0;

  /// Checks cross-field invariants; throws UsageError naming the field.
  void validate() const;
  double tolerance() const;
};

/// Parses a YAML run configuration. Unknown keys and malformed values raise
/// UsageError with the offending field and line.
RunConfig load_config(const std::filesystem::path& path);
RunConfig parse_config(const std::string& text);

}  // namespace ris

#endif  // RIS_CONFIG_HPP
