#include <filesystem>
#include <fstream>
#include <sstream>

#include "opalg/io.hpp"
#include "opalg/rng.hpp"

namespace opalg::io {

namespace {

void add_verdict(Report& report, const std::string& name, double residual, double tol) {
  report.verdicts.push_back({name, residual < tol, residual, tol});
}

void add_check(Report& report, const std::string& name, bool pass, double tol) {
  report.verdicts.push_back({name, pass, pass ? 0.0 : 1.0, tol});
}

// Per-kind invariant suites; verdict names are prefixed with the input
// document's name so aggregated reports stay readable.
void suite_algebra(Report& report, const std::string& prefix, const ProblemSpec& spec,
                   double tol) {
  const FiniteDimAlgebra a = build_algebra(spec.payload, "payload", tol);
  const FiniteDimAlgebra bicomm = commutant(commutant(a, tol), tol);
  add_verdict(report, prefix + "bicommutant", subspace_distance(a.span(), bicomm.span()), tol);

  Index squares = 0, total = 0;
  for (const Block& b : a.structure()) {
    squares += b.dim * b.dim;
    total += b.dim * b.multiplicity;
  }
  add_check(report, prefix + "structure-dimensions",
            squares == a.dim() && total == a.ambient_dim(), tol);

  const auto zs = minimal_central_projections(a);
  double axioms = 0.0;
  Matrix sum = Matrix::Zero(a.ambient_dim(), a.ambient_dim());
  for (size_t i = 0; i < zs.size(); ++i) {
    sum += zs[i];
    axioms = std::max(axioms, (zs[i] * zs[i] - zs[i]).norm());
    for (size_t j = i + 1; j < zs.size(); ++j) axioms = std::max(axioms, (zs[i] * zs[j]).norm());
    for (const Matrix& x : a.basis())
      axioms = std::max(axioms, (zs[i] * x - x * zs[i]).norm());
  }
  axioms = std::max(axioms, (sum - a.unit()).norm());
  add_verdict(report, prefix + "central-projections", axioms, std::max(tol, 1e-8));

  add_verdict(report, prefix + "center-of-commutant",
              subspace_distance(center(a, tol).span(), center(commutant(a, tol), tol).span()),
              std::max(tol, 1e-8));
}

void suite_state(Report& report, const std::string& prefix, const ProblemSpec& spec, double tol) {
  const State omega = build_state(spec.payload, "payload");
  add_check(report, prefix + "valid-density", is_valid_state(omega.density, tol), tol);
}

void suite_group(Report& report, const std::string& prefix, const ProblemSpec& spec, double tol) {
  const FiniteAbelianGroup g = build_group(spec.payload, "payload");
  add_verdict(report, prefix + "pentagonal", check_pentagonal(multiplicative_unitary(g)), tol);

  const Matrix f = fourier_matrix(g);
  add_verdict(report, prefix + "fourier-unitary",
              (f.adjoint() * f - Matrix::Identity(g.order(), g.order())).norm(),
              std::max(tol, 1e-10));

  double diag_residual = 0.0;
  for (int s = 0; s < g.order(); ++s) {
    const Matrix d = f * lambda_translation(g, s) * f.adjoint();
    for (int chi = 0; chi < g.order(); ++chi) diag_residual = std::max(
        diag_residual, std::abs(d(chi, chi) - pairing(g, chi, s)));
  }
  add_verdict(report, prefix + "fourier-diagonalizes-translations", diag_residual,
              std::max(tol, 1e-10));

  CounterRng rng(0xF00D);
  Vector w1(g.order()), w2(g.order());
  for (Index i = 0; i < g.order(); ++i) {
    w1(i) = rng.complex_normal();
    w2(i) = rng.complex_normal();
  }
  add_verdict(report, prefix + "lambda-homomorphism",
              (lambda_of(g, convolution(g, w1, w2)) - lambda_of(g, w1) * lambda_of(g, w2)).norm(),
              std::max(tol, 1e-10));
}

void suite_measurement(Report& report, const std::string& prefix, const ProblemSpec& spec,
                       double tol) {
  const MeasurementProblem problem = build_measurement(spec, tol);
  const MeasurementSetup& setup = problem.setup;
  add_verdict(report, prefix + "coupling-unitary",
              (setup.coupling.adjoint() * setup.coupling -
               Matrix::Identity(setup.total_dim(), setup.total_dim()))
                  .norm(),
              std::max(tol, 1e-10));
  add_verdict(report, prefix + "modified-pentagonal", check_modified_pentagonal(setup), tol);
  add_verdict(report, prefix + "imprimitivity",
              check_imprimitivity(setup, shift_representation(setup)), tol);

  double correlation = 0.0;
  for (int gamma = 0; gamma < setup.group.order(); ++gamma) {
    const Vector xi = setup.system.eigenbasis.col(gamma);
    Vector expected = Vector::Zero(setup.total_dim());
    for (Index i = 0; i < setup.system_dim(); ++i)
      expected(i * setup.pointer_dim + gamma) = xi(i);
    correlation = std::max(correlation, (correlate(setup, xi) - expected).norm());
  }
  add_verdict(report, prefix + "perfect-correlation", correlation, tol);

  const RealVector p = outcome_probabilities(setup, problem.initial);
  add_verdict(report, prefix + "completeness", std::abs(p.sum() - 1.0), tol);

  CounterRng rng(0xCAFE);
  double cp_violation = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const Matrix gmat = random_matrix(setup.system_dim(), setup.system_dim(), rng);
    const Matrix b = gmat * gmat.adjoint();
    const Complex v =
        instrument_value(setup, problem.initial, {trial % setup.group.order()}, b);
    cp_violation = std::max(cp_violation, std::max(-v.real(), std::abs(v.imag())));
  }
  add_verdict(report, prefix + "complete-positivity", cp_violation, std::max(tol, 1e-10));

  double repeat = 0.0;
  for (int gamma = 0; gamma < setup.group.order(); ++gamma) {
    const auto r = measure(setup, problem.initial, {gamma}, tol);
    if (!r.post_state) continue;
    const auto again = measure(setup, *r.post_state, {gamma}, tol);
    repeat = std::max(repeat, std::abs(again.probability - 1.0));
  }
  add_verdict(report, prefix + "repeatability", repeat, std::max(tol, 1e-9));
}

void suite_modular(Report& report, const std::string& prefix, const ProblemSpec& spec,
                   double tol) {
  const ModularProblem problem = build_modular(spec, tol);
  const auto md = standard_form(problem.algebra, problem.state, tol);
  const auto tomita = check_tomita(md, tol);
  const double tomita_tol = std::max(tol, 1e-8);
  add_verdict(report, prefix + "s-operator", tomita.s_residual, tomita_tol);
  add_verdict(report, prefix + "jmj-commutant", tomita.jmj_residual, tomita_tol);
  add_verdict(report, prefix + "modular-flow", tomita.flow_residual, tomita_tol);
  add_verdict(report, prefix + "kms", tomita.kms_residual, tomita_tol);

  const auto alg = algebra_from_span(md.rep.images, md.rep.dim, tol);
  const auto galois = galois_identities(alg, tol);
  add_verdict(report, prefix + "galois-center-commutant", galois.center_commutant_residual, tol);
  add_verdict(report, prefix + "galois-fixed-points", galois.fixed_point_residual, tol);
}

void suite_symmetry(Report& report, const std::string& prefix, const ProblemSpec& spec,
                    double tol) {
  const SymmetryProblem problem = build_symmetry(spec, tol);
  validate_action(problem.algebra, problem.action, tol);
  add_check(report, prefix + "action-valid", true, tol);

  const auto fixed = fixed_point_algebra(problem.algebra, problem.action, tol);
  double invariance = 0.0;
  for (const Matrix& x : fixed.basis())
    for (const auto& m : problem.action.maps)
      invariance = std::max(invariance, (m.apply(problem.algebra, x) - x).norm());
  add_verdict(report, prefix + "fixed-points-invariant", invariance, std::max(tol, 1e-9));

  const auto rep = represent(std::make_shared<FiniteDimAlgebra>(problem.algebra),
                             problem.multiplicities);
  const auto breaking = breaking_analysis(problem.algebra, problem.action, rep, tol);
  size_t covered = 0;
  for (const auto& o : breaking.ergodic_components) covered += o.size();
  const size_t sector_count =
      breaking.sector_permutations.empty() ? 0 : breaking.sector_permutations.front().size();
  add_check(report, prefix + "orbits-partition", covered == sector_count, tol);

  if (problem.unbroken_subgroup) {
    const auto augmented =
        augmented_algebra(problem.algebra, problem.action, *problem.unbroken_subgroup, tol);
    add_verdict(report, prefix + "augmented-implementability", augmented.implementing_residual,
                std::max(tol, 1e-9));
    if (breaking.broken)
      add_check(report, prefix + "augmented-center-nontrivial", augmented.center_dim >= 2, tol);
  }

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
        add_verdict(report, prefix + "charge-duality", dhr.duality_residual, tol);
        add_verdict(report, prefix + "charge-bicommutant", dhr.bicommutant_residual, tol);
        add_verdict(report, prefix + "sector-character-labels", dhr.labeling_residual,
                    std::max(tol, 1e-8));
      }
    }
  }
}

void run_suite(Report& report, const ProblemSpec& spec, double tol) {
  const std::string prefix = spec.name + ": ";
  if (spec.kind == "algebra") return suite_algebra(report, prefix, spec, tol);
  if (spec.kind == "state") return suite_state(report, prefix, spec, tol);
  if (spec.kind == "group") return suite_group(report, prefix, spec, tol);
  if (spec.kind == "measurement") return suite_measurement(report, prefix, spec, tol);
  if (spec.kind == "modular") return suite_modular(report, prefix, spec, tol);
  if (spec.kind == "symmetry") return suite_symmetry(report, prefix, spec, tol);
  if (spec.kind == "action") {
    add_check(report, prefix + "parsed", true, tol);
    return;
  }
  throw SchemaError(spec.name, "no verification suite for kind '" + spec.kind + "'");
}

Json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SchemaError(path, "cannot open file");
  std::stringstream buffer;
  buffer << in.rdbuf();
  try {
    return Json::parse(buffer.str());
  } catch (const nlohmann::json::parse_error& e) {
    throw SchemaError(path, std::string("invalid JSON: ") + e.what());
  }
}

Report run_corpus(const std::string& manifest_path, const Json& manifest,
                  const CommandFlags& flags) {
  Report report;
  report.command = "verify";
  report.tolerance = flags.tol;
  report.inputs.push_back(manifest_path);
  const std::filesystem::path base = std::filesystem::path(manifest_path).parent_path();

  const Json& cases = manifest.at("payload").at("cases");
  Json case_results = Json::array();
  for (size_t c = 0; c < cases.size(); ++c) {
    const Json& entry = cases[c];
    const std::string name = entry.value("name", "case-" + std::to_string(c));
    const std::string command = entry.at("command").get<std::string>();

    CommandFlags case_flags = flags;
    case_flags.format = "machine";
    if (entry.contains("flags")) {
      const Json& fj = entry["flags"];
      if (fj.contains("samples")) case_flags.samples = fj["samples"].get<std::int64_t>();
      if (fj.contains("seed")) case_flags.seed = fj["seed"].get<std::uint64_t>();
      if (fj.contains("tol")) case_flags.tol = fj["tol"].get<double>();
    }

    std::vector<ProblemSpec> specs;
    for (const auto& f : entry.at("files")) {
      const std::string spec_path = (base / f.get<std::string>()).string();
      specs.push_back(load_spec(spec_path));
      // Every referenced spec also runs its own invariant suite.
      run_suite(report, specs.back(), specs.back().tolerance.value_or(case_flags.tol));
    }

    const Report case_report = run_command(command, specs, case_flags);
    for (const Verdict& v : case_report.verdicts)
      report.verdicts.push_back({name + ": " + v.name, v.pass, v.residual, v.tolerance});

    // Machine reports must be byte-stable across two consecutive runs.
    const std::string once = render_report(case_report, "machine");
    const std::string twice = render_report(run_command(command, specs, case_flags), "machine");
    add_check(report, name + ": machine-report-byte-stable", once == twice, case_flags.tol);

    if (entry.contains("expected")) {
      const Json expected = load_json((base / entry["expected"].get<std::string>()).string());
      add_check(report, name + ": matches-expected-report",
                equivalent_trees(report_to_json(case_report), expected), case_flags.tol);
    }

    Json cj;
    cj["name"] = name;
    cj["command"] = command;
    cj["pass"] = case_report.all_pass();
    case_results.push_back(std::move(cj));
  }
  report.results["cases"] = std::move(case_results);
  return report;
}

}  // namespace

Report run_verify(const std::vector<std::string>& paths, const CommandFlags& flags) {
  if (paths.empty()) throw SchemaError("verify", "expects at least one spec or manifest file");

  // Manifest mode: a single file of kind "corpus".
  if (paths.size() == 1) {
    const Json doc = load_json(paths[0]);
    if (doc.is_object() && doc.value("kind", "") == "corpus")
      return run_corpus(paths[0], doc, flags);
  }

  Report report;
  report.command = "verify";
  report.tolerance = flags.tol;
  for (const std::string& path : paths) {
    report.inputs.push_back(path);
    const ProblemSpec spec = load_spec(path);
    const double tol = spec.tolerance.value_or(flags.tol);
    run_suite(report, spec, tol);
  }
  return report;
}

}  // namespace opalg::io
