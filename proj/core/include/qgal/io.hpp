#pragma once

// JSON file formats: quantum groups, cocycles, coactions, suite recipes and
// corepresentations.  Complex numbers are always [re, im] pairs; structure
// tensors are nested arrays indexed as documented in fqg.hpp.

#include <string>

#include <nlohmann/json_fwd.hpp>

#include "qgal/galois.hpp"
#include "qgal/projrep.hpp"

namespace qgal {

struct ParseError : std::runtime_error {
  explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

nlohmann::json qg_to_json(const FiniteQuantumGroup& qg);
FiniteQuantumGroup qg_from_json(const nlohmann::json& j);

void write_qg(const FiniteQuantumGroup& qg, const std::string& path);
FiniteQuantumGroup read_qg(const std::string& path);

// cocycle file: { "base": <qg path>, "omega": [[..]] }
void write_cocycle(const std::string& base_ref, const CMat& omega, const std::string& path);
struct CocycleFile {
  std::string base_path;  // resolved
  CMat omega;
};
CocycleFile read_cocycle(const std::string& path);

// coaction file: { "base": <qg path>, "hilbert_dim": n, "n_basis": [...],
//                  "alpha": [...] }
void write_coaction(const std::string& base_ref, const CoactionData& data,
                    const std::string& path);
struct CoactionFile {
  std::string base_path;
  CoactionData data;
};
CoactionFile read_coaction(const std::string& path);

// recipe file: { "kind": "trivial"|"cocycle"|"coaction", "name": ...,
//                "qg": <path>, "cocycle": <path>?, "coaction": <path>? }
struct Recipe {
  std::string kind;
  std::string name;
  std::string qg_path;
  std::string cocycle_path;
  std::string coaction_path;
};
void write_recipe(const Recipe& r, const std::string& path);
Recipe read_recipe(const std::string& path);

// corep file: { "recipe": <path>, "h_dim": h, "g_op": [[..]] }
void write_corep(const std::string& recipe_ref, const ProjectiveCorep& pc,
                 const std::string& path);
struct CorepFile {
  std::string recipe_path;
  ProjectiveCorep corep;
};
CorepFile read_corep(const std::string& path);

nlohmann::json report_to_json(const Report& rep, double tol, std::uint64_t seed);
std::string report_to_text(const Report& rep);

}  // namespace qgal
