#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "opalg/measurement.hpp"
#include "opalg/modular.hpp"
#include "opalg/states.hpp"
#include "opalg/symmetry.hpp"

namespace opalg::io {

using Json = nlohmann::ordered_json;

/// A validated problem document: schema_version 1, a kind tag, optional
/// metadata (name, description, tolerance override) and the kind-specific
/// payload. Complex scalars are [re, im] pairs; matrices row-major nested
/// arrays; groups lists of cyclic orders.
struct ProblemSpec {
  std::string kind;
  std::string name;
  std::optional<double> tolerance;
  Json payload;
};

ProblemSpec parse_spec(const Json& doc);
ProblemSpec parse_spec_text(const std::string& text);
ProblemSpec load_spec(const std::string& path);

// Payload -> domain object builders (paths appear in SchemaError messages).
Complex parse_complex(const Json& j, const std::string& path);
Matrix parse_matrix(const Json& j, const std::string& path);
Json complex_to_json(const Complex& z);
Json matrix_to_json(const Matrix& m);

FiniteDimAlgebra build_algebra(const Json& payload, const std::string& path, double tol);
State build_state(const Json& payload, const std::string& path);
FiniteAbelianGroup build_group(const Json& payload, const std::string& path);

struct MeasurementProblem {
  MeasurementSetup setup;
  State initial;
  std::vector<int> outcomes;  // explicit outcome set when given
  bool has_outcomes = false;
};
MeasurementProblem build_measurement(const ProblemSpec& spec, double tol);

struct ModularProblem {
  FiniteDimAlgebra algebra;
  State state;
};
ModularProblem build_modular(const ProblemSpec& spec, double tol);

struct SymmetryProblem {
  FiniteDimAlgebra algebra;
  GroupAction action;
  std::vector<Index> multiplicities;
  std::optional<std::vector<int>> unbroken_subgroup;
  std::string breaking_type;  // user annotation, echoed only
};
SymmetryProblem build_symmetry(const ProblemSpec& spec, double tol);

struct CommandFlags {
  double tol = kDefaultTol;
  std::int64_t samples = 0;
  std::uint64_t seed = 0;
  std::string format = "human";
};

struct Verdict {
  std::string name;
  bool pass = false;
  double residual = 0.0;
  double tolerance = 0.0;
};

struct Report {
  std::string command;
  std::vector<std::string> inputs;
  double tolerance = kDefaultTol;
  Json results;
  std::vector<Verdict> verdicts;

  bool all_pass() const;
};

Json report_to_json(const Report& report);
Report report_from_json(const Json& j);

/// format "machine": stable-key JSON, round-trippable, deterministic
/// ordering; "human": aligned tables with residuals in scientific notation.
std::string render_report(const Report& report, const std::string& format);

/// Numeric-tolerant structural equality of two report trees.
bool equivalent_trees(const Json& a, const Json& b, double atol = 1e-7, double rtol = 1e-6);

/// command in {sectors, gns, measure, modular, symmetry, crossed, verify}.
Report run_command(const std::string& command, const std::vector<ProblemSpec>& specs,
                   const CommandFlags& flags);

/// verify with file paths (manifest document or individual spec files).
Report run_verify(const std::vector<std::string>& paths, const CommandFlags& flags);

}  // namespace opalg::io
