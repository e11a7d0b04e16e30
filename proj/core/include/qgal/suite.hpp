#pragma once

// Suite orchestration: build a Galois object from a recipe and run every
// verification the object supports.

#include <cstdint>

#include "qgal/io.hpp"

namespace qgal {

struct RunConfig {
  double tolerance = 1e-9;
  std::uint64_t seed = 0;
  bool json_output = false;

  void check() const {
    if (!(tolerance > 0.0 && tolerance <= 1e-2))
      throw HardError("tolerance must lie in (0, 1e-2]");
  }
};

// tolerance resolution order: --tol flag, QGAL_TOL environment variable,
// default 1e-9
double tolerance_from_env(double fallback = 1e-9);

struct BuiltObject {
  GaloisObject object;
  Recipe recipe;
};

BuiltObject build_from_recipe(const Recipe& recipe, const RunConfig& cfg);

// the full per-object verification: coaction checks, Galois map, crossed
// product, commutation and modular suites, corners, reflection, What_Omega
// (cocycle objects) and the section-6 roundtrip.  Objects failing the Galois
// criterion stop after the criterion checks.
Report run_suite(const Recipe& recipe, const RunConfig& cfg);

}  // namespace qgal
