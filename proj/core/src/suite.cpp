#include "qgal/suite.hpp"

#include <chrono>
#include <cstdlib>

namespace qgal {

double tolerance_from_env(double fallback) {
  if (const char* env = std::getenv("QGAL_TOL")) {
    char* end = nullptr;
    double v = std::strtod(env, &end);
    if (end != env && v > 0) return v;
  }
  return fallback;
}

BuiltObject build_from_recipe(const Recipe& recipe, const RunConfig& cfg) {
  cfg.check();
  BuiltObject out;
  out.recipe = recipe;
  FiniteQuantumGroup qg = read_qg(recipe.qg_path);
  QgContext ctx = make_context(qg, cfg.tolerance);
  if (recipe.kind == "trivial") {
    out.object = trivial_galois_object(ctx, cfg.tolerance);
  } else if (recipe.kind == "cocycle") {
    CocycleFile cf = read_cocycle(recipe.cocycle_path);
    CocycleReport cr = check_cocycle(ctx, cf.omega);
    if (!cr.overall())
      throw HardError("recipe cocycle fails verification (worst residual " +
                      std::to_string(cr.worst_residual()) + ")");
    out.object = cocycle_crossed_product(ctx, cf.omega, cfg.tolerance);
  } else {
    CoactionFile cf = read_coaction(recipe.coaction_path);
    out.object = galois_from_coaction(ctx, cf.data, cfg.tolerance);
  }
  return out;
}

Report run_suite(const Recipe& recipe, const RunConfig& cfg) {
  const auto t0 = std::chrono::steady_clock::now();
  Report rep;
  rep.subject = "suite " + (recipe.name.empty() ? recipe.kind : recipe.name);

  FiniteQuantumGroup qg = read_qg(recipe.qg_path);
  rep.merge(validate(qg, cfg.tolerance), "base");
  QgContext ctx = make_context(qg, cfg.tolerance);

  GaloisObject go;
  if (recipe.kind == "trivial") {
    go = trivial_galois_object(ctx, cfg.tolerance);
  } else if (recipe.kind == "cocycle") {
    CocycleFile cf = read_cocycle(recipe.cocycle_path);
    rep.merge(check_cocycle(ctx, cf.omega), "cocycle");
    go = cocycle_crossed_product(ctx, cf.omega, cfg.tolerance);
  } else {
    CoactionFile cf = read_coaction(recipe.coaction_path);
    rep.merge(validate_coaction(ctx, cf.data, cfg.tolerance), "coaction");
    go = galois_from_coaction(ctx, cf.data, cfg.tolerance);
  }

  Report gm = galois_map_report(go);
  rep.merge(gm, "galois_map");
  CrossedProductResult cp = crossed_product(go);
  rep.merge(cp.report, "crossed_product");

  // Galois criterion both ways: G~ unitary <=> dim(N x| M) = dim(L2 N)^2
  bool gt_unitary = true, dim_matches = true;
  for (const auto& c : gm.checks)
    if (c.name == "isometry" || c.name == "coisometry") gt_unitary = gt_unitary && c.pass;
  for (const auto& c : cp.report.checks)
    if (c.name == "dimension_is_l2n_squared") dim_matches = c.pass;
  rep.add_flag("galois_criterion_agreement", gt_unitary == dim_matches);
  if (!(gt_unitary && dim_matches)) {
    rep.add_flag("galois", false);
    auto t1 = std::chrono::steady_clock::now();
    rep.elapsed_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
    return rep;  // non-Galois: remaining structure is undefined
  }

  rep.merge(implementation_report(go), "implementation");
  rep.merge(commutation_suite(go), "commutation");
  // perturbed negative control on the twisted pentagon
  {
    CMat bad = perturbed_galois_unitary(go, 0.3);
    const int d = go.M.d();
    LegSpace three{d, d, d};
    CMat w12 = leg_embed(go.M.mu.What, {1, 2}, three);
    CMat b13 = leg_embed(bad, {1, 3}, three);
    CMat b23 = leg_embed(bad, {2, 3}, three);
    CMat b12 = leg_embed(bad, {1, 2}, three);
    rep.add_negative("perturbed_pentagon_control",
                     residual(CMat(w12 * b13 * b23), CMat(b23 * b12)), 1e-3);
  }
  rep.merge(modular_suite(go), "modular");

  LinkingCorners lc = intertwiner_corner(go);
  rep.merge(lc.report, "corners");
  rep.merge(corner_coproducts(go, lc), "corner_coproducts");
  rep.merge(unitary_antipode_q(go, lc), "R_Q");

  ReflectedQuantumGroup refl = reflect(go);
  rep.merge(refl.witness, "reflect");
  rep.merge(validate(refl.qg_out, cfg.tolerance), "reflected_qg");
  if (recipe.kind == "trivial") rep.merge(reflect_matches_dual(go, refl), "reflect_vs_dual");
  if (go.from_cocycle && recipe.kind == "cocycle") {
    rep.merge(reflect_matches_twist(go, refl), "reflect_vs_twist");
    rep.merge(twisted_multiplicative_unitary(go, refl), "What_Omega");
  }

  rep.merge(roundtrip_report(go, lc), "roundtrip");

  auto t1 = std::chrono::steady_clock::now();
  rep.elapsed_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
  return rep;
}

}  // namespace qgal
