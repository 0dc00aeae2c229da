#pragma once

#include <cstddef>
#include <limits>
#include <string>
#include <string_view>
#include <vector>

namespace cst {

enum class Relation { Eq, Le, Ge };

struct LpTerm {
  std::size_t var;
  double coef;

  friend bool operator==(const LpTerm&, const LpTerm&) = default;
};

struct LpVariable {
  std::string name;
  /// Lower bounds are always 0.
  double upper = std::numeric_limits<double>::infinity();

  friend bool operator==(const LpVariable&, const LpVariable&) = default;
};

struct LpConstraint {
  std::string name;
  std::vector<LpTerm> terms;
  Relation relation = Relation::Eq;
  double rhs = 0.0;

  friend bool operator==(const LpConstraint&, const LpConstraint&) = default;
};

/// A linear program: minimize c.x subject to linear rows and 0 <= x <= u.
class LpModel {
 public:
  std::size_t add_variable(std::string name, double upper = std::numeric_limits<double>::infinity());
  void set_objective(std::size_t var, double coef);
  void add_objective(std::size_t var, double coef);
  void set_upper(std::size_t var, double upper);
  std::size_t add_constraint(std::string name, std::vector<LpTerm> terms, Relation relation, double rhs);

  const std::vector<LpVariable>& variables() const { return vars_; }
  const std::vector<LpConstraint>& constraints() const { return rows_; }
  /// Dense objective, one coefficient per variable.
  const std::vector<double>& objective() const { return cost_; }

  std::size_t num_variables() const { return vars_.size(); }
  std::size_t num_constraints() const { return rows_.size(); }

  /// Throws ValidationError on duplicate names, dangling variable indices or
  /// non-finite data.
  void validate() const;

 private:
  std::vector<LpVariable> vars_;
  std::vector<double> cost_;
  std::vector<LpConstraint> rows_;
};

enum class LpStatus { Optimal, Infeasible, Unbounded };

const char* to_string(LpStatus status);

struct LpSolution {
  LpStatus status = LpStatus::Infeasible;
  double objective = 0.0;
  /// Present when Optimal.
  std::vector<double> values;
  std::size_t iterations = 0;
};

struct SolverOptions {
  double pivot_tolerance = 1e-10;
  double feasibility_tolerance = 1e-7;
  double optimality_tolerance = 1e-9;
  /// Basis inverse is recomputed from scratch after this many pivots; 0
  /// picks max(100, number of rows).
  std::size_t refactor_interval = 0;
  /// 0 picks a limit proportional to the problem size.
  std::size_t max_iterations = 0;
};

/// Two-phase revised simplex: Dantzig pricing, falling back to Bland's rule
/// on runs of degenerate pivots. Deterministic: identical
/// models give bit-identical solutions.
LpSolution solve(const LpModel& model, const SolverOptions& options = {});

/// An optimal value with round-off below the objective's scale flushed to 0,
/// so that p-th roots of an exact zero stay zero.
double snap_objective(const LpModel& model, double objective);

/// Largest violation of a row or bound by `values`.
double max_residual(const LpModel& model, const std::vector<double>& values);

/// Text rendering with MINIMIZE, SUBJECT TO, BOUNDS and END sections.
std::string export_lp(const LpModel& model);

/// Reads the export format back. Variables are numbered by first appearance.
LpModel parse_lp(std::string_view text);

}  // namespace cst
