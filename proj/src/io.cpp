#include "opalg/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <Eigen/Eigenvalues>

namespace opalg::io {

namespace {

const Json* find(const Json& j, const std::string& key) {
  if (!j.is_object()) return nullptr;
  const auto it = j.find(key);
  return it == j.end() ? nullptr : &*it;
}

const Json& require(const Json& j, const std::string& key, const std::string& path) {
  const Json* p = find(j, key);
  if (!p) throw SchemaError(path, "missing required field '" + key + "'");
  return *p;
}

double require_number(const Json& j, const std::string& path) {
  if (!j.is_number()) throw SchemaError(path, "expected a number");
  return j.get<double>();
}

int require_int(const Json& j, const std::string& path) {
  if (!j.is_number_integer()) throw SchemaError(path, "expected an integer");
  return j.get<int>();
}

std::vector<int> require_int_list(const Json& j, const std::string& path) {
  if (!j.is_array()) throw SchemaError(path, "expected an array of integers");
  std::vector<int> out;
  for (size_t i = 0; i < j.size(); ++i)
    out.push_back(require_int(j[i], path + "[" + std::to_string(i) + "]"));
  return out;
}

std::string scientific(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3e", x);
  return buf;
}

}  // namespace

Complex parse_complex(const Json& j, const std::string& path) {
  if (!j.is_array() || j.size() != 2)
    throw SchemaError(path, "complex scalar must be a [re, im] pair");
  return Complex(require_number(j[0], path + "[0]"), require_number(j[1], path + "[1]"));
}

Matrix parse_matrix(const Json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) throw SchemaError(path, "matrix must be a non-empty array of rows");
  const size_t rows = j.size();
  const Json& first = j[0];
  if (!first.is_array() || first.empty())
    throw SchemaError(path + "[0]", "matrix row must be a non-empty array");
  const size_t cols = first.size();
  Matrix m(static_cast<Index>(rows), static_cast<Index>(cols));
  for (size_t r = 0; r < rows; ++r) {
    const std::string rpath = path + "[" + std::to_string(r) + "]";
    if (!j[r].is_array() || j[r].size() != cols)
      throw SchemaError(rpath, "matrix rows must all have length " + std::to_string(cols));
    for (size_t c = 0; c < cols; ++c)
      m(static_cast<Index>(r), static_cast<Index>(c)) =
          parse_complex(j[r][c], rpath + "[" + std::to_string(c) + "]");
  }
  return m;
}

Json complex_to_json(const Complex& z) { return Json::array({z.real(), z.imag()}); }

Json matrix_to_json(const Matrix& m) {
  Json rows = Json::array();
  for (Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Index c = 0; c < m.cols(); ++c) row.push_back(complex_to_json(m(r, c)));
    rows.push_back(std::move(row));
  }
  return rows;
}

ProblemSpec parse_spec(const Json& doc) {
  if (!doc.is_object()) throw SchemaError("$", "document must be an object");
  const int version = require_int(require(doc, "schema_version", "$"), "schema_version");
  if (version != 1) throw SchemaError("schema_version", "unsupported schema version");
  ProblemSpec spec;
  const Json& kind = require(doc, "kind", "$");
  if (!kind.is_string()) throw SchemaError("kind", "expected a string");
  spec.kind = kind.get<std::string>();
  static const std::vector<std::string> kinds = {"algebra", "state",   "group",    "action",
                                                 "measurement", "modular", "symmetry", "corpus"};
  if (std::find(kinds.begin(), kinds.end(), spec.kind) == kinds.end())
    throw SchemaError("kind", "unknown kind '" + spec.kind + "'");
  spec.payload = require(doc, "payload", "$");
  if (const Json* meta = find(doc, "metadata")) {
    if (const Json* name = find(*meta, "name"))
      spec.name = name->is_string() ? name->get<std::string>()
                                    : throw SchemaError("metadata.name", "expected a string");
    if (const Json* tol = find(*meta, "tolerance"))
      spec.tolerance = require_number(*tol, "metadata.tolerance");
  }
  if (spec.name.empty()) spec.name = spec.kind;

  // Validate the payload shape eagerly so schema errors surface at parse
  // time with a field path.
  const double tol = spec.tolerance.value_or(kDefaultTol);
  if (spec.kind == "algebra") build_algebra(spec.payload, "payload", tol);
  if (spec.kind == "state") build_state(spec.payload, "payload");
  if (spec.kind == "group") build_group(spec.payload, "payload");
  return spec;
}

ProblemSpec parse_spec_text(const std::string& text) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw SchemaError("$", std::string("invalid JSON: ") + e.what());
  }
  return parse_spec(doc);
}

ProblemSpec load_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SchemaError(path, "cannot open file");
  std::stringstream buffer;
  buffer << in.rdbuf();
  try {
    return parse_spec_text(buffer.str());
  } catch (SchemaError& e) {
    throw SchemaError(path + ":" + e.path(), e.what());
  }
}

FiniteDimAlgebra build_algebra(const Json& payload, const std::string& path, double tol) {
  const Index n = require_int(require(payload, "ambient_dim", path), path + ".ambient_dim");
  if (n < 1) throw SchemaError(path + ".ambient_dim", "must be positive");
  const Json& gens = require(payload, "generators", path);
  if (!gens.is_array()) throw SchemaError(path + ".generators", "expected an array of matrices");
  std::vector<Matrix> generators;
  for (size_t i = 0; i < gens.size(); ++i) {
    const std::string gpath = path + ".generators[" + std::to_string(i) + "]";
    Matrix g = parse_matrix(gens[i], gpath);
    if (g.rows() != n || g.cols() != n)
      throw SchemaError(gpath, "generator must be " + std::to_string(n) + "x" + std::to_string(n));
    generators.push_back(std::move(g));
  }
  return generate_algebra(generators, n, tol);
}

State build_state(const Json& payload, const std::string& path) {
  const Matrix rho = parse_matrix(require(payload, "density", path), path + ".density");
  if (rho.rows() != rho.cols()) throw SchemaError(path + ".density", "density must be square");
  if (!is_valid_state(rho, 1e-7))
    throw SchemaError(path + ".density", "not a positive unit-trace density matrix");
  return State{rho};
}

FiniteAbelianGroup build_group(const Json& payload, const std::string& path) {
  const auto orders = require_int_list(require(payload, "cyclic_orders", path),
                                       path + ".cyclic_orders");
  for (int n : orders)
    if (n < 1) throw SchemaError(path + ".cyclic_orders", "cyclic orders must be positive");
  return FiniteAbelianGroup(orders);
}

namespace {

std::vector<AlgebraAutomorphism> build_maps(const FiniteDimAlgebra& algebra,
                                            const FiniteAbelianGroup& group, const Json& payload,
                                            const std::string& path, double tol) {
  std::vector<AlgebraAutomorphism> maps;
  if (const Json* us = find(payload, "unitaries")) {
    if (!us->is_array() || static_cast<int>(us->size()) != group.order())
      throw SchemaError(path + ".unitaries", "expected one unitary per group element");
    for (size_t i = 0; i < us->size(); ++i) {
      const std::string upath = path + ".unitaries[" + std::to_string(i) + "]";
      const Matrix u = parse_matrix((*us)[i], upath);
      if (u.rows() != algebra.ambient_dim() || u.cols() != algebra.ambient_dim())
        throw SchemaError(upath, "unitary has the wrong dimension");
      if (!is_unitary(u, std::sqrt(tol))) throw SchemaError(upath, "matrix is not unitary");
      maps.push_back(ad_automorphism(algebra, u, tol));
    }
    return maps;
  }
  if (const Json* ps = find(payload, "basis_permutations")) {
    if (!ps->is_array() || static_cast<int>(ps->size()) != group.order())
      throw SchemaError(path + ".basis_permutations", "expected one permutation per group element");
    const Index n = algebra.ambient_dim();
    for (size_t i = 0; i < ps->size(); ++i) {
      const std::string ppath = path + ".basis_permutations[" + std::to_string(i) + "]";
      const auto perm = require_int_list((*ps)[i], ppath);
      if (static_cast<Index>(perm.size()) != n)
        throw SchemaError(ppath, "permutation length must equal the ambient dimension");
      Matrix u = Matrix::Zero(n, n);
      std::vector<bool> seen(perm.size(), false);
      for (size_t k = 0; k < perm.size(); ++k) {
        if (perm[k] < 0 || perm[k] >= n || seen[static_cast<size_t>(perm[k])])
          throw SchemaError(ppath, "not a permutation of 0.." + std::to_string(n - 1));
        seen[static_cast<size_t>(perm[k])] = true;
        u(perm[k], static_cast<Index>(k)) = 1.0;
      }
      maps.push_back(ad_automorphism(algebra, u, tol));
    }
    return maps;
  }
  throw SchemaError(path, "action requires 'unitaries' or 'basis_permutations'");
}

}  // namespace

MeasurementProblem build_measurement(const ProblemSpec& spec, double tol) {
  const Json& p = spec.payload;
  const Index n = require_int(require(p, "factor_dim", "payload"), "payload.factor_dim");
  if (n < 1) throw SchemaError("payload.factor_dim", "must be positive");
  const FiniteDimAlgebra m = full_matrix_algebra(n);

  FiniteDimAlgebra masa_algebra = diagonal_algebra(n);
  if (const Json* mg = find(p, "masa_generators")) {
    if (!mg->is_array()) throw SchemaError("payload.masa_generators", "expected matrices");
    std::vector<Matrix> gens;
    for (size_t i = 0; i < mg->size(); ++i)
      gens.push_back(parse_matrix((*mg)[i], "payload.masa_generators[" + std::to_string(i) + "]"));
    masa_algebra = generate_algebra(gens, n, tol);
  }
  FiniteAbelianGroup group({static_cast<int>(n)});
  if (const Json* g = find(p, "group")) group = build_group(*g, "payload.group");

  MeasurementProblem out{build_coupling(verify_masa(m, masa_algebra, tol), group), State{}, {}, false};

  const Json& initial = require(p, "initial", "payload");
  if (const Json* vec = find(initial, "vector")) {
    if (!vec->is_array() || static_cast<Index>(vec->size()) != n)
      throw SchemaError("payload.initial.vector", "expected a length-" + std::to_string(n) +
                                                      " complex vector");
    Vector xi(n);
    for (size_t i = 0; i < vec->size(); ++i)
      xi(static_cast<Index>(i)) =
          parse_complex((*vec)[i], "payload.initial.vector[" + std::to_string(i) + "]");
    if (xi.norm() <= 0) throw SchemaError("payload.initial.vector", "zero vector");
    out.initial = vector_state(xi);
  } else if (find(initial, "density")) {
    out.initial = build_state(initial, "payload.initial");
    if (out.initial.dim() != n)
      throw SchemaError("payload.initial.density",
                        "density dimension does not match factor_dim");
  } else {
    throw SchemaError("payload.initial", "expected 'vector' or 'density'");
  }

  if (const Json* outcomes = find(p, "outcomes")) {
    out.outcomes = require_int_list(*outcomes, "payload.outcomes");
    for (int g : out.outcomes)
      if (g < 0 || g >= group.order())
        throw SchemaError("payload.outcomes", "outcome outside the group");
    out.has_outcomes = true;
  }
  return out;
}

ModularProblem build_modular(const ProblemSpec& spec, double tol) {
  const Json& p = spec.payload;
  ModularProblem out{build_algebra(require(p, "algebra", "payload"), "payload.algebra", tol),
                     build_state(require(p, "state", "payload"), "payload.state")};
  if (out.state.dim() != out.algebra.ambient_dim())
    throw SchemaError("payload.state.density", "state dimension does not match the algebra");
  return out;
}

SymmetryProblem build_symmetry(const ProblemSpec& spec, double tol) {
  const Json& p = spec.payload;
  SymmetryProblem out;
  out.algebra = build_algebra(require(p, "algebra", "payload"), "payload.algebra", tol);
  const FiniteAbelianGroup group = build_group(require(p, "group", "payload"), "payload.group");
  out.action = make_action(group, build_maps(out.algebra, group, p, "payload", tol));
  for (const Block& b : out.algebra.structure()) out.multiplicities.push_back(b.multiplicity);
  if (const Json* mult = find(p, "multiplicities")) {
    const auto list = require_int_list(*mult, "payload.multiplicities");
    if (static_cast<Index>(list.size()) != out.algebra.block_count())
      throw SchemaError("payload.multiplicities", "one multiplicity per sector required");
    out.multiplicities.assign(list.begin(), list.end());
  }
  if (const Json* h = find(p, "unbroken_subgroup"))
    out.unbroken_subgroup = require_int_list(*h, "payload.unbroken_subgroup");
  if (const Json* ann = find(p, "breaking_type")) {
    if (!ann->is_string()) throw SchemaError("payload.breaking_type", "expected a string");
    out.breaking_type = ann->get<std::string>();
  }
  return out;
}

bool Report::all_pass() const {
  return std::all_of(verdicts.begin(), verdicts.end(), [](const Verdict& v) { return v.pass; });
}

Json report_to_json(const Report& report) {
  Json j;
  j["schema_version"] = 1;
  j["command"] = report.command;
  j["inputs"] = report.inputs;
  j["tolerance"] = report.tolerance;
  j["results"] = report.results;
  Json verdicts = Json::array();
  for (const Verdict& v : report.verdicts) {
    Json vj;
    vj["name"] = v.name;
    vj["pass"] = v.pass;
    vj["residual"] = v.residual;
    vj["tolerance"] = v.tolerance;
    verdicts.push_back(std::move(vj));
  }
  j["verdicts"] = std::move(verdicts);
  return j;
}

Report report_from_json(const Json& j) {
  Report report;
  report.command = require(j, "command", "$").get<std::string>();
  for (const auto& i : require(j, "inputs", "$")) report.inputs.push_back(i.get<std::string>());
  report.tolerance = require(j, "tolerance", "$").get<double>();
  report.results = require(j, "results", "$");
  for (const auto& vj : require(j, "verdicts", "$")) {
    Verdict v;
    v.name = vj.at("name").get<std::string>();
    v.pass = vj.at("pass").get<bool>();
    v.residual = vj.at("residual").get<double>();
    v.tolerance = vj.at("tolerance").get<double>();
    report.verdicts.push_back(std::move(v));
  }
  return report;
}

namespace {

bool is_complex_pair(const Json& j) {
  return j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number();
}

bool is_matrix_json(const Json& j) {
  if (!j.is_array() || j.empty()) return false;
  for (const auto& row : j) {
    if (!row.is_array() || row.empty() || row.size() != j[0].size()) return false;
    for (const auto& entry : row)
      if (!is_complex_pair(entry)) return false;
  }
  return true;
}

std::string compact_complex(const Json& pair) {
  const double re = pair[0].get<double>();
  const double im = pair[1].get<double>();
  char buf[64];
  if (im == 0.0)
    std::snprintf(buf, sizeof(buf), "%.6g", re);
  else
    std::snprintf(buf, sizeof(buf), "%.6g%+.6gi", re, im);
  return buf;
}

void render_value(std::ostringstream& out, const Json& j, int indent) {
  const std::string pad(static_cast<size_t>(indent), ' ');
  if (j.is_object()) {
    for (const auto& [key, value] : j.items()) {
      if (value.is_object() || value.is_array()) {
        out << pad << key << ":\n";
        render_value(out, value, indent + 2);
      } else {
        out << pad << key << ": " << value.dump() << "\n";
      }
    }
  } else if (is_matrix_json(j)) {
    for (const auto& row : j) {
      out << pad << "[";
      for (size_t c = 0; c < row.size(); ++c)
        out << (c ? "  " : " ") << compact_complex(row[c]);
      out << " ]\n";
    }
  } else if (j.is_array()) {
    bool scalars = std::all_of(j.begin(), j.end(), [](const Json& x) { return !x.is_structured(); });
    if (scalars) {
      out << pad << j.dump() << "\n";
    } else {
      for (size_t i = 0; i < j.size(); ++i) {
        out << pad << "- " << i << ":\n";
        render_value(out, j[i], indent + 2);
      }
    }
  } else {
    out << pad << j.dump() << "\n";
  }
}

}  // namespace

std::string render_report(const Report& report, const std::string& format) {
  if (format == "machine") return report_to_json(report).dump(2) + "\n";
  if (format != "human") throw Error("render_report: unknown format '" + format + "'");

  std::ostringstream out;
  out << "command: " << report.command << "\n";
  if (!report.inputs.empty()) {
    out << "inputs:";
    for (const auto& i : report.inputs) out << " " << i;
    out << "\n";
  }
  out << "tolerance: " << scientific(report.tolerance) << "\n";
  if (!report.results.empty()) {
    out << "results:\n";
    render_value(out, report.results, 2);
  }
  if (!report.verdicts.empty()) {
    out << "verdicts:\n";
    size_t width = 0;
    for (const Verdict& v : report.verdicts) width = std::max(width, v.name.size());
    for (const Verdict& v : report.verdicts) {
      out << "  [" << (v.pass ? "PASS" : "FAIL") << "] " << v.name
          << std::string(width - v.name.size() + 2, ' ') << "residual " << scientific(v.residual)
          << "  (tol " << scientific(v.tolerance) << ")\n";
    }
    out << (report.all_pass() ? "status: PASS\n" : "status: FAIL\n");
  }
  return out.str();
}

bool equivalent_trees(const Json& a, const Json& b, double atol, double rtol) {
  if (a.is_number() && b.is_number()) {
    const double x = a.get<double>();
    const double y = b.get<double>();
    return std::abs(x - y) <= atol + rtol * std::max(std::abs(x), std::abs(y));
  }
  if (a.type() != b.type()) return false;
  if (a.is_object()) {
    if (a.size() != b.size()) return false;
    for (const auto& [key, value] : a.items()) {
      const Json* other = find(b, key);
      if (!other || !equivalent_trees(value, *other, atol, rtol)) return false;
    }
    return true;
  }
  if (a.is_array()) {
    if (a.size() != b.size()) return false;
    for (size_t i = 0; i < a.size(); ++i)
      if (!equivalent_trees(a[i], b[i], atol, rtol)) return false;
    return true;
  }
  return a == b;
}

namespace {

double spec_tol(const std::vector<ProblemSpec>& specs, const CommandFlags& flags) {
  for (const auto& s : specs)
    if (s.tolerance) return *s.tolerance;
  return flags.tol;
}

void add_verdict(Report& report, const std::string& name, double residual, double tol) {
  report.verdicts.push_back({name, residual < tol, residual, tol});
}

void add_check(Report& report, const std::string& name, bool pass, double tol) {
  report.verdicts.push_back({name, pass, pass ? 0.0 : 1.0, tol});
}

Json structure_to_json(const FiniteDimAlgebra& a) {
  Json blocks = Json::array();
  for (const Block& b : a.structure()) {
    Json bj;
    bj["dim"] = b.dim;
    bj["multiplicity"] = b.multiplicity;
    blocks.push_back(std::move(bj));
  }
  return blocks;
}

const ProblemSpec& expect_kind(const std::vector<ProblemSpec>& specs, size_t i,
                               const std::string& kind, const std::string& command) {
  if (i >= specs.size())
    throw SchemaError(command, "expects a '" + kind + "' spec as argument " + std::to_string(i + 1));
  if (specs[i].kind != kind)
    throw SchemaError(command, "argument " + std::to_string(i + 1) + " must have kind '" + kind +
                                   "', got '" + specs[i].kind + "'");
  return specs[i];
}

Report run_sectors(const std::vector<ProblemSpec>& specs, const CommandFlags& flags) {
  const double tol = spec_tol(specs, flags);
  Report report;
  report.command = "sectors";
  report.tolerance = tol;
  const ProblemSpec& aspec = expect_kind(specs, 0, "algebra", "sectors");
  const FiniteDimAlgebra a = build_algebra(aspec.payload, "payload", tol);

  Json sectors = Json::array();
  const bool with_state = specs.size() > 1;
  RealVector weights;
  State omega;
  if (with_state) {
    omega = build_state(expect_kind(specs, 1, "state", "sectors").payload, "payload");
    if (omega.dim() != a.ambient_dim())
      throw SchemaError("payload.density", "state dimension does not match the algebra");
    weights = sector_distribution(a, omega);
  }
  for (Index k = 0; k < a.block_count(); ++k) {
    Json s;
    s["sector"] = k;
    s["dim"] = a.structure()[static_cast<size_t>(k)].dim;
    s["multiplicity"] = a.structure()[static_cast<size_t>(k)].multiplicity;
    if (with_state) s["weight"] = weights(k);
    sectors.push_back(std::move(s));
  }
  report.results["ambient_dim"] = a.ambient_dim();
  report.results["algebra_dim"] = a.dim();
  report.results["sector_count"] = a.block_count();
  report.results["sectors"] = std::move(sectors);

  if (with_state) {
    report.results["is_factor_state"] = is_factor_state(a, omega, tol);
    const auto comps = central_decomposition(a, omega, tol);
    Json decomposition = Json::array();
    Matrix barycenter = Matrix::Zero(a.ambient_dim(), a.ambient_dim());
    for (const auto& c : comps) {
      Json cj;
      cj["weight"] = c.weight;
      cj["density"] = matrix_to_json(c.state.density);
      decomposition.push_back(std::move(cj));
      barycenter += c.weight * c.state.density;
    }
    report.results["central_decomposition"] = std::move(decomposition);
    add_verdict(report, "sector-weights-normalized", std::abs(weights.sum() - 1.0), tol);
    add_verdict(report, "barycenter-identity",
                (barycenter - algebra_compression(a, omega.density)).norm(), tol);
  }
  return report;
}

Report run_gns(const std::vector<ProblemSpec>& specs, const CommandFlags& flags) {
  const double tol = spec_tol(specs, flags);
  Report report;
  report.command = "gns";
  report.tolerance = tol;
  const FiniteDimAlgebra a =
      build_algebra(expect_kind(specs, 0, "algebra", "gns").payload, "payload", tol);
  const State omega = build_state(expect_kind(specs, 1, "state", "gns").payload, "payload");
  if (omega.dim() != a.ambient_dim())
    throw SchemaError("payload.density", "state dimension does not match the algebra");

  const auto g = gns(a, omega, tol);
  report.results["gns_dim"] = g.rep.dim;
  Json mult = Json::array();
  for (Index m : g.rep.multiplicities) mult.push_back(m);
  report.results["multiplicities"] = std::move(mult);

  double reproduce = 0.0;
  for (const Matrix& x : a.basis()) {
    const Complex lhs = g.cyclic.adjoint() * g.rep.apply(x) * g.cyclic;
    reproduce = std::max(reproduce, std::abs(lhs - omega(x)));
  }
  add_verdict(report, "gns-reproduces-state", reproduce, std::max(tol, 1e-10));

  if (g.rep.dim > 0) {
    const auto comm = commutant_of_set(g.rep.images, g.rep.dim, tol);
    const FiniteDimAlgebra comm_alg =
        algebra_from_span(comm, g.rep.dim, tol);
    report.results["commutant_dim"] = comm_alg.dim();
    report.results["commutant_structure"] = structure_to_json(comm_alg);
    Matrix orbit(g.rep.dim, a.dim());
    for (Index i = 0; i < a.dim(); ++i)
      orbit.col(i) = g.rep.images[static_cast<size_t>(i)] * g.cyclic;
    add_check(report, "cyclic-vector", rank_of(orbit, tol) == g.rep.dim, tol);
  }
  return report;
}

Report run_measure(const std::vector<ProblemSpec>& specs, const CommandFlags& flags) {
  const double tol = spec_tol(specs, flags);
  Report report;
  report.command = "measure";
  report.tolerance = tol;
  const ProblemSpec& mspec = expect_kind(specs, 0, "measurement", "measure");
  const MeasurementProblem problem = build_measurement(mspec, tol);
  const MeasurementSetup& setup = problem.setup;

  report.results["factor_dim"] = setup.system_dim();
  report.results["pointer_dim"] = setup.pointer_dim;
  Json orders = Json::array();
  for (int o : setup.group.cyclic_orders()) orders.push_back(o);
  report.results["group"] = std::move(orders);

  const RealVector p = outcome_probabilities(setup, problem.initial);
  Json probs = Json::array();
  for (Index g = 0; g < p.size(); ++g) probs.push_back(p(g));
  report.results["probabilities"] = std::move(probs);
  add_verdict(report, "outcome-completeness", std::abs(p.sum() - 1.0), tol);

  Json posts = Json::array();
  for (int g = 0; g < setup.group.order(); ++g) {
    const auto r = measure(setup, problem.initial, {g}, tol);
    Json rj;
    rj["outcome"] = g;
    rj["probability"] = r.probability;
    if (r.post_state) {
      rj["post_density"] = matrix_to_json(r.post_state->density);
      const auto again = measure(setup, *r.post_state, {g}, tol);
      add_verdict(report, "repeatability-outcome-" + std::to_string(g),
                  std::abs(again.probability - 1.0), std::max(tol, 1e-9));
    }
    posts.push_back(std::move(rj));
  }
  report.results["singleton_measurements"] = std::move(posts);

  if (problem.has_outcomes) {
    const auto r = measure(setup, problem.initial, problem.outcomes, tol);
    Json rj;
    rj["outcome_set"] = problem.outcomes;
    rj["probability"] = r.probability;
    if (r.post_state) rj["post_density"] = matrix_to_json(r.post_state->density);
    report.results["outcome_set_measurement"] = std::move(rj);
  }

  if (flags.samples > 0) {
    const auto histogram = sample_outcomes(setup, problem.initial, flags.samples, flags.seed);
    report.results["samples"] = flags.samples;
    report.results["seed"] = flags.seed;
    report.results["histogram"] = histogram;
  }
  add_verdict(report, "modified-pentagonal", check_modified_pentagonal(setup), tol);
  add_verdict(report, "imprimitivity", check_imprimitivity(setup, shift_representation(setup)),
              tol);
  return report;
}

Report run_modular(const std::vector<ProblemSpec>& specs, const CommandFlags& flags) {
  const double tol = spec_tol(specs, flags);
  Report report;
  report.command = "modular";
  report.tolerance = tol;
  const ModularProblem problem = build_modular(expect_kind(specs, 0, "modular", "modular"), tol);

  const auto md = standard_form(problem.algebra, problem.state, tol);
  report.results["gns_dim"] = md.rep.dim;

  Eigen::SelfAdjointEigenSolver<Matrix> es(md.delta);
  RealVector spectrum = es.eigenvalues();
  std::sort(spectrum.data(), spectrum.data() + spectrum.size());
  Json spec_json = Json::array();
  for (Index i = 0; i < spectrum.size(); ++i) spec_json.push_back(spectrum(i));
  report.results["delta_spectrum"] = std::move(spec_json);

  const auto tomita = check_tomita(md, tol);
  const double tomita_tol = std::max(tol, 1e-8);
  add_verdict(report, "s-operator", tomita.s_residual, tomita_tol);
  add_verdict(report, "jmj-commutant", tomita.jmj_residual, tomita_tol);
  add_verdict(report, "modular-flow-invariance", tomita.flow_residual, tomita_tol);
  add_verdict(report, "kms-boundary", tomita.kms_residual, tomita_tol);

  const auto standard_algebra = algebra_from_span(md.rep.images, md.rep.dim, tol);
  const auto galois = galois_identities(standard_algebra, tol);
  report.results["factor"] = galois.factor;
  report.results["join_is_everything"] = galois.join_is_everything;
  add_verdict(report, "center-commutant-is-join", galois.center_commutant_residual, tol);
  add_verdict(report, "fixed-points-recover-algebra", galois.fixed_point_residual, tol);
  return report;
}

Report run_symmetry(const std::vector<ProblemSpec>& specs, const CommandFlags& flags) {
  const double tol = spec_tol(specs, flags);
  Report report;
  report.command = "symmetry";
  report.tolerance = tol;
  const SymmetryProblem problem =
      build_symmetry(expect_kind(specs, 0, "symmetry", "symmetry"), tol);

  const auto rep = represent(std::make_shared<FiniteDimAlgebra>(problem.algebra),
                             problem.multiplicities);
  const auto breaking = breaking_analysis(problem.algebra, problem.action, rep, tol);
  report.results["verdict"] = breaking.broken ? "broken" : "unbroken";
  if (!problem.breaking_type.empty()) report.results["breaking_type"] = problem.breaking_type;
  Json perms = Json::array();
  for (const auto& p : breaking.sector_permutations) perms.push_back(p);
  report.results["sector_permutations"] = std::move(perms);
  Json orbits = Json::array();
  for (const auto& o : breaking.ergodic_components) orbits.push_back(o);
  report.results["ergodic_components"] = std::move(orbits);

  const auto fixed = fixed_point_algebra(problem.algebra, problem.action, tol);
  report.results["fixed_point_dim"] = fixed.dim();
  report.results["fixed_point_structure"] = structure_to_json(fixed);
  double invariance = 0.0;
  for (const Matrix& x : fixed.basis())
    for (const auto& m : problem.action.maps)
      invariance = std::max(invariance, (m.apply(problem.algebra, x) - x).norm());
  add_verdict(report, "fixed-points-invariant", invariance, tol);

  size_t covered = 0;
  for (const auto& o : breaking.ergodic_components) covered += o.size();
  add_check(report, "orbits-partition-sectors",
            covered == static_cast<size_t>(std::count_if(
                           problem.multiplicities.begin(), problem.multiplicities.end(),
                           [](Index m) { return m > 0; })),
            tol);

  if (problem.unbroken_subgroup) {
    const auto augmented =
        augmented_algebra(problem.algebra, problem.action, *problem.unbroken_subgroup, tol);
    Json aj;
    aj["quotient_order"] = augmented.quotient_order;
    aj["ambient_dim"] = augmented.algebra.ambient_dim();
    aj["dim"] = augmented.algebra.dim();
    aj["center_dim"] = augmented.center_dim;
    report.results["augmented"] = std::move(aj);
    add_verdict(report, "augmented-implementability", augmented.implementing_residual,
                std::max(tol, 1e-9));
    if (breaking.broken)
      add_check(report, "augmented-center-nontrivial", augmented.center_dim >= 2, tol);
  }

  // Unitarily implemented action on the full matrix algebra: the sectors
  // of the fixed points are labelled by the characters appearing in U.
  if (problem.algebra.dim() ==
          problem.algebra.ambient_dim() * problem.algebra.ambient_dim() &&
      problem.action.abelian) {
    std::vector<Matrix> unitaries;
    for (const auto& m : problem.action.maps) {
      if (!m.implementing_unitary) break;
      unitaries.push_back(*m.implementing_unitary);
    }
    if (static_cast<int>(unitaries.size()) == problem.action.order()) {
      bool is_rep = true;
      const FiniteAbelianGroup& g = *problem.action.abelian;
      for (int x = 0; x < g.order() && is_rep; ++x)
        for (int y = 0; y < g.order(); ++y)
          if ((unitaries[static_cast<size_t>(x)] * unitaries[static_cast<size_t>(y)] -
               unitaries[static_cast<size_t>(g.add(x, y))])
                  .norm() > std::sqrt(tol)) {
            is_rep = false;
            break;
          }
      if (is_rep) {
        const auto dhr = dhr_toy(problem.algebra, g, unitaries, tol);
        Json dj;
        dj["sector_count"] = dhr.sector_count;
        dj["sector_characters"] = dhr.sector_characters;
        report.results["charge_sectors"] = std::move(dj);
        add_verdict(report, "fixed-points-commutant-duality", dhr.duality_residual, tol);
        add_verdict(report, "sector-character-labels", dhr.labeling_residual,
                    std::max(tol, 1e-8));
      }
    }
  }
  return report;
}

Report run_crossed(const std::vector<ProblemSpec>& specs, const CommandFlags& flags) {
  const double tol = spec_tol(specs, flags);
  Report report;
  report.command = "crossed";
  report.tolerance = tol;

  FiniteDimAlgebra algebra;
  GroupAction action;
  if (!specs.empty() && specs[0].kind == "symmetry") {
    SymmetryProblem problem = build_symmetry(specs[0], tol);
    algebra = std::move(problem.algebra);
    action = std::move(problem.action);
  } else {
    const ProblemSpec& aspec = expect_kind(specs, 0, "algebra", "crossed");
    const ProblemSpec& actspec = expect_kind(specs, 1, "action", "crossed");
    algebra = build_algebra(aspec.payload, "payload", tol);
    const FiniteAbelianGroup group =
        build_group(require(actspec.payload, "group", "payload"), "payload.group");
    action = make_action(group, build_maps(algebra, group, actspec.payload, "payload", tol));
  }

  const auto cp = crossed_product(algebra, action, tol);
  report.results["ambient_dim"] = cp.ambient_dim();
  report.results["dim"] = cp.dim();
  report.results["structure"] = structure_to_json(cp);
  report.results["center_dim"] = center(cp, tol).dim();

  Index expected = 0;
  for (const Block& b : cp.structure()) expected += b.dim * b.dim;
  add_check(report, "structure-dimension-consistency", expected == cp.dim(), tol);
  return report;
}

}  // namespace

Report run_command(const std::string& command, const std::vector<ProblemSpec>& specs,
                   const CommandFlags& flags) {
  if (command == "sectors") return run_sectors(specs, flags);
  if (command == "gns") return run_gns(specs, flags);
  if (command == "measure") return run_measure(specs, flags);
  if (command == "modular") return run_modular(specs, flags);
  if (command == "symmetry") return run_symmetry(specs, flags);
  if (command == "crossed") return run_crossed(specs, flags);
  throw SchemaError("command", "unknown command '" + command + "'");
}

}  // namespace opalg::io
