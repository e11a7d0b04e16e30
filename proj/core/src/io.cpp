#include "qgal/io.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

namespace qgal {

using nlohmann::json;

namespace {

json cplx(const cd& z) { return json::array({z.real(), z.imag()}); }

cd cplx_from(const json& j) {
  if (!j.is_array() || j.size() != 2) throw ParseError("expected [re, im] pair");
  return cd(j[0].get<double>(), j[1].get<double>());
}

json mat_to_json(const CMat& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(cplx(m(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

CMat mat_from_json(const json& j) {
  if (!j.is_array() || j.empty()) throw ParseError("expected a matrix");
  const int rows = static_cast<int>(j.size());
  const int cols = static_cast<int>(j[0].size());
  CMat m(rows, cols);
  for (int i = 0; i < rows; ++i) {
    if (static_cast<int>(j[i].size()) != cols) throw ParseError("ragged matrix");
    for (int k = 0; k < cols; ++k) m(i, k) = cplx_from(j[i][k]);
  }
  return m;
}

json vec_to_json(const CVec& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(cplx(v(i)));
  return out;
}

CVec vec_from_json(const json& j) {
  CVec v(static_cast<Eigen::Index>(j.size()));
  for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = cplx_from(j[static_cast<size_t>(i)]);
  return v;
}

json load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw ParseError(std::string("invalid JSON in ") + path + ": " + e.what());
  }
  return j;
}

void save_file(const json& j, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write " + path);
  out << j.dump(1) << "\n";
}

std::string resolve_ref(const std::string& referencing_file, const std::string& ref) {
  namespace fs = std::filesystem;
  fs::path p(ref);
  if (p.is_absolute()) return ref;
  return (fs::path(referencing_file).parent_path() / p).string();
}

}  // namespace

json qg_to_json(const FiniteQuantumGroup& qg) {
  json j;
  j["name"] = qg.name;
  j["dim"] = qg.dim;
  j["basis"] = qg.basis_labels.empty()
                   ? [&] {
                       std::vector<std::string> lb;
                       for (int i = 0; i < qg.dim; ++i) lb.push_back("e" + std::to_string(i));
                       return lb;
                     }()
                   : qg.basis_labels;
  // mult[i][j][k] = m^k_{ij}: coefficient of e_k in e_i e_j
  json mult = json::array();
  for (int i = 0; i < qg.dim; ++i) {
    json mi = json::array();
    for (int jx = 0; jx < qg.dim; ++jx) {
      json row = json::array();
      for (int k = 0; k < qg.dim; ++k) row.push_back(cplx(qg.mult[i](k, jx)));
      mi.push_back(std::move(row));
    }
    mult.push_back(std::move(mi));
  }
  j["mult"] = std::move(mult);
  j["unit"] = vec_to_json(qg.unit);
  // comult[i][j][k]: coefficient of e_j (x) e_k in Delta(e_i)
  json com = json::array();
  for (int i = 0; i < qg.dim; ++i) com.push_back(mat_to_json(qg.comult[i]));
  j["comult"] = std::move(com);
  j["counit"] = vec_to_json(qg.counit);
  j["star"] = mat_to_json(qg.star);
  j["haar"] = vec_to_json(qg.haar);
  return j;
}

FiniteQuantumGroup qg_from_json(const json& j) {
  FiniteQuantumGroup qg;
  try {
    qg.name = j.value("name", "unnamed");
    qg.dim = j.at("dim").get<int>();
    if (qg.dim <= 0) throw ParseError("dim must be positive");
    if (j.contains("basis")) qg.basis_labels = j["basis"].get<std::vector<std::string>>();
    const json& mult = j.at("mult");
    if (static_cast<int>(mult.size()) != qg.dim) throw ParseError("mult has wrong size");
    qg.mult.assign(qg.dim, zeros(qg.dim, qg.dim));
    for (int i = 0; i < qg.dim; ++i)
      for (int jx = 0; jx < qg.dim; ++jx)
        for (int k = 0; k < qg.dim; ++k) qg.mult[i](k, jx) = cplx_from(mult[i][jx][k]);
    qg.unit = vec_from_json(j.at("unit"));
    const json& com = j.at("comult");
    qg.comult.assign(qg.dim, zeros(qg.dim, qg.dim));
    for (int i = 0; i < qg.dim; ++i) qg.comult[i] = mat_from_json(com[i]);
    qg.counit = vec_from_json(j.at("counit"));
    qg.star = mat_from_json(j.at("star"));
    qg.haar = vec_from_json(j.at("haar"));
  } catch (const json::exception& e) {
    throw ParseError(std::string("invalid quantum group file: ") + e.what());
  }
  if (qg.unit.size() != qg.dim || qg.counit.size() != qg.dim || qg.haar.size() != qg.dim ||
      qg.star.rows() != qg.dim || qg.star.cols() != qg.dim)
    throw ParseError("structure tensor shapes do not match dim");
  return qg;
}

void write_qg(const FiniteQuantumGroup& qg, const std::string& path) {
  save_file(qg_to_json(qg), path);
}

FiniteQuantumGroup read_qg(const std::string& path) { return qg_from_json(load_file(path)); }

void write_cocycle(const std::string& base_ref, const CMat& omega, const std::string& path) {
  json j;
  j["base"] = base_ref;
  j["omega"] = mat_to_json(omega);
  save_file(j, path);
}

CocycleFile read_cocycle(const std::string& path) {
  json j = load_file(path);
  CocycleFile out;
  try {
    out.base_path = resolve_ref(path, j.at("base").get<std::string>());
    out.omega = mat_from_json(j.at("omega"));
  } catch (const json::exception& e) {
    throw ParseError(std::string("invalid cocycle file: ") + e.what());
  }
  return out;
}

void write_coaction(const std::string& base_ref, const CoactionData& data,
                    const std::string& path) {
  json j;
  j["base"] = base_ref;
  j["hilbert_dim"] = data.hilbert_dim;
  json nb = json::array();
  for (const auto& m : data.n_basis) nb.push_back(mat_to_json(m));
  j["n_basis"] = std::move(nb);
  json al = json::array();
  for (const auto& m : data.alpha) al.push_back(mat_to_json(m));
  j["alpha"] = std::move(al);
  save_file(j, path);
}

CoactionFile read_coaction(const std::string& path) {
  json j = load_file(path);
  CoactionFile out;
  try {
    out.base_path = resolve_ref(path, j.at("base").get<std::string>());
    out.data.hilbert_dim = j.at("hilbert_dim").get<int>();
    for (const auto& m : j.at("n_basis")) out.data.n_basis.push_back(mat_from_json(m));
    for (const auto& m : j.at("alpha")) out.data.alpha.push_back(mat_from_json(m));
  } catch (const json::exception& e) {
    throw ParseError(std::string("invalid coaction file: ") + e.what());
  }
  if (out.data.n_basis.empty() || out.data.alpha.size() != out.data.n_basis.size())
    throw ParseError("coaction file: n_basis/alpha size mismatch");
  return out;
}

void write_recipe(const Recipe& r, const std::string& path) {
  json j;
  j["kind"] = r.kind;
  j["name"] = r.name;
  j["qg"] = r.qg_path;
  if (!r.cocycle_path.empty()) j["cocycle"] = r.cocycle_path;
  if (!r.coaction_path.empty()) j["coaction"] = r.coaction_path;
  save_file(j, path);
}

Recipe read_recipe(const std::string& path) {
  json j = load_file(path);
  Recipe r;
  try {
    r.kind = j.at("kind").get<std::string>();
    r.name = j.value("name", "");
    r.qg_path = resolve_ref(path, j.at("qg").get<std::string>());
    if (j.contains("cocycle")) r.cocycle_path = resolve_ref(path, j["cocycle"].get<std::string>());
    if (j.contains("coaction"))
      r.coaction_path = resolve_ref(path, j["coaction"].get<std::string>());
  } catch (const json::exception& e) {
    throw ParseError(std::string("invalid recipe file: ") + e.what());
  }
  if (r.kind != "trivial" && r.kind != "cocycle" && r.kind != "coaction")
    throw ParseError("recipe kind must be trivial, cocycle or coaction");
  if (r.kind == "cocycle" && r.cocycle_path.empty())
    throw ParseError("cocycle recipe needs a cocycle file");
  if (r.kind == "coaction" && r.coaction_path.empty())
    throw ParseError("coaction recipe needs a coaction file");
  return r;
}

void write_corep(const std::string& recipe_ref, const ProjectiveCorep& pc,
                 const std::string& path) {
  json j;
  j["recipe"] = recipe_ref;
  j["h_dim"] = pc.h_dim;
  j["g_op"] = mat_to_json(pc.g_op);
  save_file(j, path);
}

CorepFile read_corep(const std::string& path) {
  json j = load_file(path);
  CorepFile out;
  try {
    out.recipe_path = resolve_ref(path, j.at("recipe").get<std::string>());
    out.corep.h_dim = j.at("h_dim").get<int>();
    out.corep.g_op = mat_from_json(j.at("g_op"));
  } catch (const json::exception& e) {
    throw ParseError(std::string("invalid corep file: ") + e.what());
  }
  return out;
}

json report_to_json(const Report& rep, double tol, std::uint64_t seed) {
  json j;
  j["subject"] = rep.subject;
  j["tolerance"] = tol;
  j["seed"] = seed;
  j["overall"] = rep.overall();
  j["elapsed_ms"] = rep.elapsed_ms;
  json checks = json::array();
  for (const auto& c : rep.checks) {
    json cj;
    cj["name"] = c.name;
    cj["residual"] = c.residual;
    cj["threshold"] = c.threshold;
    cj["pass"] = c.pass;
    if (c.negate) cj["negated"] = true;
    checks.push_back(std::move(cj));
  }
  j["checks"] = std::move(checks);
  return j;
}

std::string report_to_text(const Report& rep) {
  std::ostringstream os;
  os << "== " << rep.subject << "\n";
  for (const auto& c : rep.checks) {
    os.setf(std::ios::scientific);
    os.precision(3);
    os << (c.pass ? "  ok   " : "  FAIL ") << c.name << "  residual " << c.residual
       << (c.negate ? " > " : " <= ") << c.threshold << "\n";
  }
  os << (rep.overall() ? "PASS" : "FAIL") << " (" << rep.checks.size() << " checks)\n";
  return os.str();
}

}  // namespace qgal
