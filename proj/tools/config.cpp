#include "config.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "json.hpp"

namespace mdcq {

namespace {

using nlohmann::json;
using Setter = std::function<void(const json&)>;

Setter number(double& slot) {
  return [&slot](const json& v) {
    if (!v.is_number()) throw ConfigError("expected a number");
    slot = v.get<double>();
  };
}

Setter integer(int& slot) {
  return [&slot](const json& v) {
    if (!v.is_number_integer()) throw ConfigError("expected an integer");
    slot = v.get<int>();
  };
}

Setter count(unsigned& slot) {
  return [&slot](const json& v) {
    if (!v.is_number_unsigned()) throw ConfigError("expected a non-negative integer");
    slot = v.get<unsigned>();
  };
}

Setter text(std::string& slot) {
  return [&slot](const json& v) {
    if (!v.is_string()) throw ConfigError("expected a string");
    slot = v.get<std::string>();
  };
}

Setter label(int& N, int& M) {
  return [&N, &M](const json& v) {
    if (!v.is_array() || v.size() != 2 || !v[0].is_number_integer() || !v[1].is_number_integer())
      throw ConfigError("expected [N, M_N]");
    N = v[0].get<int>();
    M = v[1].get<int>();
  };
}

std::map<std::string, std::map<std::string, Setter>> schema(RunConfig& c) {
  return {
      {"molecule",
       {{"mu0_debye", number(c.molecule.mu0_debye)},
        {"B_GHz", number(c.molecule.B_GHz)},
        {"mass_amu", number(c.molecule.mass_amu)},
        {"gamma_sr_MHz", number(c.molecule.gamma_sr_MHz)}}},
      {"states",
       {{"g", label(c.states.g_N, c.states.g_M)},
        {"e", label(c.states.e_N, c.states.e_M)},
        {"E_b", number(c.states.E_b)}}},
      {"crystal",
       {{"dimension", integer(c.crystal.dimension)},
        {"a0_nm", number(c.crystal.a0_nm)},
        {"N", integer(c.crystal.N)},
        {"nu_kHz", number(c.crystal.nu_kHz)},
        {"temperature_uK", number(c.crystal.temperature_uK)},
        {"nu_perp_kHz", number(c.crystal.nu_perp_kHz)},
        {"mu_g_debye", number(c.crystal.mu_g_debye)}}},
      {"model",
       {{"gamma", number(c.model.gamma)},
        {"tau", number(c.model.tau)},
        {"kappa", number(c.model.kappa)},
        {"epsilon", number(c.model.epsilon)},
        {"nu_perp_tilde", number(c.model.nu_perp_tilde)}}},
      {"cavity",
       {{"d_um", number(c.cavity.d_um)},
        {"Gamma_c_kHz", number(c.cavity.Gamma_c_kHz)},
        {"lambda_c_mm", number(c.cavity.lambda_c_mm)},
        {"mode", text(c.cavity.mode)},
        {"g_ref_kHz", number(c.cavity.g_ref_kHz)}}},
      {"numerics",
       {{"N_max", integer(c.numerics.N_max)},
        {"grid2d", integer(c.numerics.grid2d)},
        {"n_grid", integer(c.numerics.n_grid)},
        {"points", integer(c.numerics.points)},
        {"N_surrogate", integer(c.numerics.N_surrogate)},
        {"threads", count(c.numerics.threads)},
        {"t_max", number(c.numerics.t_max)}}},
  };
}

}  // namespace

void apply_config_text(RunConfig& cfg, const std::string& body, const std::string& origin) {
  json doc;
  try {
    doc = json::parse(body);
  } catch (const json::parse_error& e) {
    throw ConfigError(origin + ": " + e.what());
  }
  if (!doc.is_object()) throw ConfigError(origin + ": top level must be an object");
  auto table = schema(cfg);
  for (const auto& [block, entries] : doc.items()) {
    if (block == "schema_version") {
      if (!entries.is_number_integer() || entries.get<int>() != 1)
        throw ConfigError(origin + ": unsupported schema_version");
      continue;
    }
    const auto b = table.find(block);
    if (b == table.end()) throw ConfigError(origin + ": unknown block '" + block + "'");
    if (!entries.is_object()) throw ConfigError(origin + ": block '" + block + "' must be an object");
    for (const auto& [key, value] : entries.items()) {
      const auto k = b->second.find(key);
      if (k == b->second.end())
        throw ConfigError(origin + ": unknown key '" + block + "." + key + "'");
      try {
        k->second(value);
      } catch (const ConfigError& e) {
        throw ConfigError(origin + ": " + block + "." + key + ": " + e.what());
      }
    }
  }
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  RunConfig cfg;
  apply_config_text(cfg, ss.str(), path);
  return cfg;
}

mdc::MoleculeParams RunConfig::molecule_params() const {
  return {molecule.mu0_debye, molecule.B_GHz * 1e9, molecule.mass_amu,
          molecule.gamma_sr_MHz * 1e6};
}

mdc::CavityParams RunConfig::cavity_params() const {
  mdc::CavityParams p;
  p.g_ref = cavity.g_ref_kHz * 1e3;
  p.d = cavity.d_um * 1e-6;
  p.Gamma_c = cavity.Gamma_c_kHz * 1e3;
  p.lambda_c = cavity.lambda_c_mm * 1e-3;
  if (cavity.mode == "cosine") p.shape = mdc::ModeShape::Cosine;
  else if (cavity.mode == "flat") p.shape = mdc::ModeShape::Flat;
  else throw ConfigError("cavity.mode must be 'cosine' or 'flat'");
  return p;
}

void validate(const RunConfig& c) {
  auto need = [](bool ok, const std::string& msg) {
    if (!ok) throw ConfigError(msg);
  };
  need(c.molecule.mu0_debye > 0 && c.molecule.B_GHz > 0 && c.molecule.mass_amu > 0,
       "molecule: mu0_debye, B_GHz and mass_amu must be positive");
  need(c.molecule.gamma_sr_MHz >= 0, "molecule.gamma_sr_MHz must be non-negative");
  need(c.states.g_N >= std::abs(c.states.g_M) && c.states.e_N >= std::abs(c.states.e_M),
       "states: need N >= |M_N|");
  need(c.crystal.dimension == 1 || c.crystal.dimension == 2, "crystal.dimension must be 1 or 2");
  need(c.crystal.a0_nm > 0, "crystal.a0_nm must be positive");
  need(c.crystal.N >= 2, "crystal.N must be >= 2");
  need(std::isnan(c.crystal.nu_kHz) || c.crystal.nu_kHz > 0, "crystal.nu_kHz must be positive");
  need(std::isnan(c.crystal.temperature_uK) || c.crystal.temperature_uK >= 0,
       "crystal.temperature_uK must be non-negative");
  need(c.crystal.nu_perp_kHz >= 0, "crystal.nu_perp_kHz must be non-negative");
  need(c.model.gamma > 0, "model.gamma must be positive");
  need(c.model.tau >= 0, "model.tau must be non-negative");
  need(c.model.nu_perp_tilde >= 0, "model.nu_perp_tilde must be non-negative");
  need(c.cavity.d_um > 0 && c.cavity.lambda_c_mm > 0 && c.cavity.g_ref_kHz > 0,
       "cavity: d_um, lambda_c_mm and g_ref_kHz must be positive");
  need(c.cavity.Gamma_c_kHz >= 0, "cavity.Gamma_c_kHz must be non-negative");
  need(c.numerics.N_max >= 0, "numerics.N_max must be >= 0");
  need(c.numerics.grid2d >= 4, "numerics.grid2d must be >= 4");
  need(c.numerics.n_grid >= 16, "numerics.n_grid must be >= 16");
  need(c.numerics.points >= 2, "numerics.points must be >= 2");
  need(c.numerics.N_surrogate >= 2, "numerics.N_surrogate must be >= 2");
  need(c.numerics.t_max > 0, "numerics.t_max must be positive");
  (void)c.cavity_params();
}

}  // namespace mdcq
