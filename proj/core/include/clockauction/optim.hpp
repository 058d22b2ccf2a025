#pragma once

#include <cstdint>
#include <limits>
#include <map>
#include <string>
#include <vector>

namespace clockauction::optim {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

enum class Relation { kLessEqual, kGreaterEqual, kEqual };
enum class Sense { kMinimize, kMaximize };

struct Term {
  int variable = 0;
  double coefficient = 0.0;
};

struct Variable {
  std::string name;
  double lower = 0.0;
  double upper = kInfinity;
};

struct Constraint {
  std::string name;
  std::vector<Term> terms;
  Relation relation = Relation::kLessEqual;
  double rhs = 0.0;
};

class LinearProgram {
 public:
  int add_variable(std::string name, double lower = 0.0, double upper = kInfinity);
  void set_bounds(int variable, double lower, double upper);
  void set_objective(int variable, double coefficient);
  void set_sense(Sense sense) { sense_ = sense; }
  int add_constraint(std::string name, std::vector<Term> terms, Relation relation, double rhs);

  Sense sense() const noexcept { return sense_; }
  int num_variables() const noexcept { return static_cast<int>(variables_.size()); }
  int num_constraints() const noexcept { return static_cast<int>(constraints_.size()); }
  const std::vector<Variable>& variables() const noexcept { return variables_; }
  const std::vector<double>& objective() const noexcept { return objective_; }
  const std::vector<Constraint>& constraints() const noexcept { return constraints_; }

  /// Throws ValidationError when a term references an undeclared variable or a
  /// coefficient is not finite.
  void validate() const;

 private:
  std::vector<Variable> variables_;
  std::vector<double> objective_;
  std::vector<Constraint> constraints_;
  Sense sense_ = Sense::kMinimize;
};

/// A linear program in which some variables are restricted to {0, 1}.
class MixedIntegerProgram {
 public:
  int add_binary(std::string name);
  int add_continuous(std::string name, double lower = 0.0, double upper = kInfinity);

  LinearProgram& relaxation() noexcept { return lp_; }
  const LinearProgram& relaxation() const noexcept { return lp_; }
  bool is_binary(int variable) const { return binary_.at(static_cast<std::size_t>(variable)) != 0; }

  void validate() const;

 private:
  LinearProgram lp_;
  std::vector<char> binary_;
};

enum class SolveStatus { kOptimal, kInfeasible, kUnbounded };

std::string to_string(SolveStatus status);

struct Solution {
  SolveStatus status = SolveStatus::kInfeasible;
  std::vector<double> values;
  double objective = 0.0;
  std::int64_t iterations = 0;  // simplex pivots, summed over all nodes for MIPs
  std::int64_t nodes = 0;       // branch-and-bound nodes (1 for a pure LP)

  double value(int variable) const { return values.at(static_cast<std::size_t>(variable)); }
  std::map<std::string, double> named_values(const LinearProgram& lp) const;
};

struct SimplexOptions {
  double pivot_tolerance = 1e-9;
  /// Allowed violation of a row after scaling it to unit max-coefficient. Rows whose
  /// scaled right-hand side exceeds 1 get the same tolerance relative to that size.
  double feasibility_tolerance = 1e-6;
  /// Consecutive degenerate pivots before switching from Dantzig pricing to Bland's rule.
  int degenerate_streak_for_bland = 32;
  /// 0 picks a limit from the problem size.
  std::int64_t max_iterations = 0;
};

/// Interface seam for plugging in an external solver.
class Solver {
 public:
  virtual ~Solver() = default;
  virtual Solution solve(const LinearProgram& lp) const = 0;
  virtual Solution solve(const MixedIntegerProgram& mip) const = 0;
};

/// Dense two-phase primal simplex with deterministic pricing, plus depth-first
/// branch-and-bound on binaries (lowest fractional index first, 0-branch first).
class SimplexSolver final : public Solver {
 public:
  explicit SimplexSolver(SimplexOptions options = {}) : options_(options) {}

  Solution solve(const LinearProgram& lp) const override;
  Solution solve(const MixedIntegerProgram& mip) const override;

  const SimplexOptions& options() const noexcept { return options_; }

 private:
  SimplexOptions options_;
};

const Solver& default_solver();

Solution solve_lp(const LinearProgram& lp);
Solution solve_mip(const MixedIntegerProgram& mip);

/// Largest scaled violation over all rows and bounds.
double max_violation(const LinearProgram& lp, const std::vector<double>& values);

/// CPLEX LP text format for cross-checking with external solvers.
std::string to_lp_format(const LinearProgram& lp);
std::string to_lp_format(const MixedIntegerProgram& mip);

}  // namespace clockauction::optim
