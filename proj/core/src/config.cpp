#include "ris/config.hpp"

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "ris/errors.hpp"

namespace ris
{

namespace
{

std::string where(const YAML::Node& node)
{
  const auto mark = node.Mark();
  return mark.line >= 0 ? " (line " + std::to_string(mark.line + 1) + ")" : std::string();
}

[[noreturn]] void fail(const std::string& field, const YAML::Node& node, const std::string& message)
{
  throw UsageError(field, message + where(node));
}

void require_keys(const YAML::Node& map, const std::string& prefix, std::set<std::string> allowed)
{
  if (!map.IsMap())
  {
    fail(prefix, map, "expected a table");
  }
  for (const auto& kv : map)
  {
    const auto key = kv.first.as<std::string>();
    if (!allowed.contains(key))
    {
      fail(prefix.empty() ? key : prefix + "." + key, kv.first, "unknown key");
    }
  }
}

double as_number(const YAML::Node& node, const std::string& field)
{
  try
  {
    return node.as<double>();
  }
  catch (const YAML::Exception&)
  {
    fail(field, node, "expected a number");
  }
}

std::vector<double> as_numbers(const YAML::Node& node, const std::string& field)
{
  if (node.IsScalar())
  {
    return {as_number(node, field)};
  }
  if (!node.IsSequence())
  {
    fail(field, node, "expected a number or a list of numbers");
  }
  std::vector<double> out;
  for (std::size_t k = 0; k < node.size(); ++k)
  {
    out.push_back(as_number(node[k], field + "[" + std::to_string(k) + "]"));
  }
  return out;
}

State as_state(const YAML::Node& node, const std::string& field)
{
  const auto coords = as_numbers(node, field);
  if (coords.empty() || coords.size() > kMaxDim)
  {
    fail(field, node, "a state has one or two coordinates");
  }
  return State(std::span<const double>(coords));
}

std::string as_string(const YAML::Node& node, const std::string& field)
{
  if (!node.IsScalar())
  {
    fail(field, node, "expected a string");
  }
  return node.as<std::string>();
}

void parse_model(const YAML::Node& node, RunConfig& cfg)
{
  require_keys(node, "model", {"name", "parameters", "reference_point", "power_constant"});
  if (!node["name"])
  {
    fail("model.name", node, "missing");
  }
  cfg.model.name = as_string(node["name"], "model.name");
  if (const auto params = node["parameters"])
  {
    if (!params.IsMap())
    {
      fail("model.parameters", params, "expected a table");
    }
    for (const auto& kv : params)
    {
      const auto key = kv.first.as<std::string>();
      cfg.model.parameters[key] = as_numbers(kv.second, "model.parameters." + key);
    }
  }
  if (const auto ref = node["reference_point"])
  {
    cfg.model.context.reference_point = as_state(ref, "model.reference_point");
  }
  if (const auto cp = node["power_constant"])
  {
    cfg.model.context.power_constant = as_number(cp, "model.power_constant");
  }
}

void parse_grid(const YAML::Node& node, RunConfig& cfg)
{
  require_keys(node, "grid", {"bounds", "h"});
  const auto bounds = node["bounds"];
  if (!bounds || !bounds.IsSequence() || bounds.size() == 0 || bounds.size() > kMaxDim)
  {
    fail("grid.bounds", node, "expected one or two [lo, hi] pairs");
  }
  for (std::size_t k = 0; k < bounds.size(); ++k)
  {
    const auto pair = as_numbers(bounds[k], "grid.bounds[" + std::to_string(k) + "]");
    if (pair.size() != 2 || !(pair[0] < pair[1]))
    {
      fail("grid.bounds[" + std::to_string(k) + "]", bounds[k], "expected [lo, hi] with lo < hi");
    }
    cfg.bounds.push_back({pair[0], pair[1]});
  }
  if (!node["h"])
  {
    fail("grid.h", node, "missing");
  }
  cfg.h = as_number(node["h"], "grid.h");
}

}  // namespace

void RunConfig::validate() const
{
  if (schema_version != kConfigSchemaVersion)
  {
    throw UsageError("schema_version", "unsupported schema version " + std::to_string(schema_version));
  }
  auto positive = [](double v, const char* field) {
    if (!(v > 0.0))
    {
      throw UsageError(field, "must be positive");
    }
  };
  positive(h, "grid.h");
  positive(horizon, "time.T");
  positive(tau, "time.tau");
  positive(c_tol, "tolerances.C_tol");
  positive(model.context.power_constant, "model.power_constant");
  positive(bv_epsilon, "sweep.bv_epsilon");
  if (tol < 0.0)
  {
    throw UsageError("tolerances.tol", "must be non-negative");
  }
  if (jump_exclusion < 0.0)
  {
    throw UsageError("tolerances.jump_exclusion", "must be non-negative");
  }
  if (bounds.empty())
  {
    throw UsageError("grid.bounds", "missing");
  }
  if (initial_state.dim() != bounds.size())
  {
    throw UsageError("initial_state", "dimension does not match grid.bounds");
  }
  if (model.context.reference_point.dim() != bounds.size())
  {
    throw UsageError("model.reference_point", "dimension does not match grid.bounds");
  }
  for (std::size_t k = 0; k < bounds.size(); ++k)
  {
    const double slack = 1e-9 * h;
    if (initial_state[k] < bounds[k].lo - slack || initial_state[k] > bounds[k].hi + slack)
    {
      throw UsageError("initial_state", "outside grid.bounds");
    }
  }
  for (const auto& s : schemes)
  {
    if (s != "energetic" && s != "viscous" && s != "ve")
    {
      throw UsageError("schemes", "unknown scheme '" + s + "' (energetic, viscous, ve)");
    }
  }
  const bool wants_ve = std::find(schemes.begin(), schemes.end(), "ve") != schemes.end();
  const bool wants_viscous = std::find(schemes.begin(), schemes.end(), "viscous") != schemes.end();
  for (const double m : mu)
  {
    if (!(m > 0.0))
    {
      throw UsageError("mu", "mu > 0 is required for the visco-energetic scheme");
    }
  }
  if (!std::is_sorted(mu.begin(), mu.end()))
  {
    throw UsageError("mu", "list must be sorted increasingly");
  }
  for (const double e : epsilon)
  {
    if (!(e > 0.0))
    {
      throw UsageError("epsilon", "must be positive");
    }
  }
  if (wants_ve && mu.empty())
  {
    throw UsageError("mu", "scheme ve requested without any mu");
  }
  if (wants_viscous && epsilon.empty())
  {
    throw UsageError("epsilon", "scheme viscous requested without any epsilon");
  }
  if (max_mu_tau < 0.0 || max_mu_h < 0.0)
  {
    throw UsageError("sweep", "refinement caps must be non-negative");
  }
}

double RunConfig::tolerance() const { return tol > 0.0 ? tol : c_tol * (h + 2.0 * tau); }

RunConfig parse_config(const std::string& text)
{
  YAML::Node root;
  try
  {
    root = YAML::Load(text);
  }
  catch (const YAML::ParserException& e)
  {
    throw UsageError("config", std::string("YAML syntax error: ") + e.what());
  }
  require_keys(root, "",
               {"schema_version", "model", "grid", "time", "schemes", "mu", "epsilon", "viscous_tau",
                "initial_state", "tolerances", "sweep", "output_dir", "seed"});
  RunConfig cfg;
  if (!root["schema_version"])
  {
    fail("schema_version", root, "missing");
  }
  cfg.schema_version = static_cast<int>(as_number(root["schema_version"], "schema_version"));
  if (!root["model"])
  {
    fail("model", root, "missing");
  }
  parse_model(root["model"], cfg);
  if (!root["grid"])
  {
    fail("grid", root, "missing");
  }
  parse_grid(root["grid"], cfg);
  if (const auto time = root["time"])
  {
    require_keys(time, "time", {"T", "tau"});
    if (time["T"])
    {
      cfg.horizon = as_number(time["T"], "time.T");
    }
    if (time["tau"])
    {
      cfg.tau = as_number(time["tau"], "time.tau");
    }
  }
  cfg.model.context.horizon = cfg.horizon;
  if (!cfg.model.context.reference_point.dim())
  {
    cfg.model.context.reference_point = cfg.bounds.size() == 2 ? State(0.0, 0.0) : State(0.0);
  }
  if (const auto schemes = root["schemes"])
  {
    if (!schemes.IsSequence())
    {
      fail("schemes", schemes, "expected a list");
    }
    for (const auto& s : schemes)
    {
      cfg.schemes.push_back(as_string(s, "schemes"));
    }
  }
  if (root["mu"])
  {
    cfg.mu = as_numbers(root["mu"], "mu");
  }
  if (root["epsilon"])
  {
    cfg.epsilon = as_numbers(root["epsilon"], "epsilon");
  }
  if (const auto rule = root["viscous_tau"])
  {
    const auto v = as_string(rule, "viscous_tau");
    if (v == "square")
    {
      cfg.viscous_tau = ViscousTauRule::square;
    }
    else if (v == "fixed")
    {
      cfg.viscous_tau = ViscousTauRule::fixed;
    }
    else
    {
      fail("viscous_tau", rule, "expected 'square' or 'fixed'");
    }
  }
  if (!root["initial_state"])
  {
    fail("initial_state", root, "missing");
  }
  cfg.initial_state = as_state(root["initial_state"], "initial_state");
  if (const auto tol = root["tolerances"])
  {
    require_keys(tol, "tolerances", {"C_tol", "tol", "jump_exclusion"});
    if (tol["C_tol"])
    {
      cfg.c_tol = as_number(tol["C_tol"], "tolerances.C_tol");
    }
    if (tol["tol"])
    {
      cfg.tol = as_number(tol["tol"], "tolerances.tol");
    }
    if (tol["jump_exclusion"])
    {
      cfg.jump_exclusion = as_number(tol["jump_exclusion"], "tolerances.jump_exclusion");
    }
  }
  if (const auto sweep = root["sweep"])
  {
    require_keys(sweep, "sweep", {"bv_epsilon", "max_mu_tau", "max_mu_h", "verify"});
    if (sweep["bv_epsilon"])
    {
      cfg.bv_epsilon = as_number(sweep["bv_epsilon"], "sweep.bv_epsilon");
    }
    if (sweep["max_mu_tau"])
    {
      cfg.max_mu_tau = as_number(sweep["max_mu_tau"], "sweep.max_mu_tau");
    }
    if (sweep["max_mu_h"])
    {
      cfg.max_mu_h = as_number(sweep["max_mu_h"], "sweep.max_mu_h");
    }
    if (sweep["verify"])
    {
      try
      {
        cfg.sweep_verify = sweep["verify"].as<bool>();
      }
      catch (const YAML::Exception&)
      {
        fail("sweep.verify", sweep["verify"], "expected true or false");
      }
    }
  }
  if (const auto out = root["output_dir"])
  {
    cfg.output_dir = as_string(out, "output_dir");
  }
  if (const auto seed = root["seed"])
  {
    cfg.seed = static_cast<std::uint64_t>(as_number(seed, "seed"));
  }
  cfg.validate();
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path)
{
  std::ifstream in(path);
  if (!in)
  {
    throw UsageError("config", "cannot open " + path.string());
  }
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

}  // namespace ris
