#include "clockauction/optim.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <set>
#include <sstream>

#include "clockauction/error.hpp"

namespace clockauction::optim {

int LinearProgram::add_variable(std::string name, double lower, double upper) {
  variables_.push_back(Variable{std::move(name), lower, upper});
  objective_.push_back(0.0);
  return static_cast<int>(variables_.size()) - 1;
}

void LinearProgram::set_bounds(int variable, double lower, double upper) {
  auto& v = variables_.at(static_cast<std::size_t>(variable));
  v.lower = lower;
  v.upper = upper;
}

void LinearProgram::set_objective(int variable, double coefficient) {
  objective_.at(static_cast<std::size_t>(variable)) = coefficient;
}

int LinearProgram::add_constraint(std::string name, std::vector<Term> terms, Relation relation, double rhs) {
  constraints_.push_back(Constraint{std::move(name), std::move(terms), relation, rhs});
  return static_cast<int>(constraints_.size()) - 1;
}

void LinearProgram::validate() const {
  for (const auto& v : variables_) {
    if (std::isnan(v.lower) || std::isnan(v.upper) || v.lower == kInfinity || v.upper == -kInfinity) {
      throw ValidationError("variable " + v.name + " has invalid bounds");
    }
  }
  for (double c : objective_) {
    if (!std::isfinite(c)) throw ValidationError("objective coefficient is not finite");
  }
  for (const auto& c : constraints_) {
    if (!std::isfinite(c.rhs)) throw ValidationError("constraint " + c.name + " has non-finite rhs");
    for (const auto& t : c.terms) {
      if (t.variable < 0 || t.variable >= num_variables()) {
        throw ValidationError("constraint " + c.name + " references undeclared variable " +
                              std::to_string(t.variable));
      }
      if (!std::isfinite(t.coefficient)) {
        throw ValidationError("constraint " + c.name + " has a non-finite coefficient");
      }
    }
  }
}

int MixedIntegerProgram::add_binary(std::string name) {
  binary_.push_back(1);
  return lp_.add_variable(std::move(name), 0.0, 1.0);
}

int MixedIntegerProgram::add_continuous(std::string name, double lower, double upper) {
  binary_.push_back(0);
  return lp_.add_variable(std::move(name), lower, upper);
}

void MixedIntegerProgram::validate() const {
  lp_.validate();
  if (binary_.size() != lp_.variables().size()) {
    throw ValidationError("variables must be added through MixedIntegerProgram");
  }
  for (std::size_t i = 0; i < binary_.size(); ++i) {
    const auto& v = lp_.variables()[i];
    if (binary_[i] && (v.lower < 0.0 || v.upper > 1.0)) {
      throw ValidationError("binary variable " + v.name + " must have bounds within [0, 1]");
    }
  }
}

std::string to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::kOptimal:
      return "optimal";
    case SolveStatus::kInfeasible:
      return "infeasible";
    case SolveStatus::kUnbounded:
      return "unbounded";
  }
  return "unknown";
}

std::map<std::string, double> Solution::named_values(const LinearProgram& lp) const {
  std::map<std::string, double> out;
  for (std::size_t i = 0; i < values.size() && i < lp.variables().size(); ++i) {
    out[lp.variables()[i].name] = values[i];
  }
  return out;
}

double max_violation(const LinearProgram& lp, const std::vector<double>& x) {
  double worst = 0.0;
  for (const auto& c : lp.constraints()) {
    double activity = 0.0;
    double scale = 0.0;
    for (const auto& t : c.terms) {
      activity += t.coefficient * x[static_cast<std::size_t>(t.variable)];
      scale = std::max(scale, std::abs(t.coefficient));
    }
    if (scale == 0.0) scale = 1.0;
    double v = 0.0;
    switch (c.relation) {
      case Relation::kLessEqual:
        v = activity - c.rhs;
        break;
      case Relation::kGreaterEqual:
        v = c.rhs - activity;
        break;
      case Relation::kEqual:
        v = std::abs(activity - c.rhs);
        break;
    }
    v /= scale;
    v /= std::max(1.0, std::abs(c.rhs) / scale);
    worst = std::max(worst, v);
  }
  for (std::size_t i = 0; i < lp.variables().size(); ++i) {
    const auto& var = lp.variables()[i];
    if (std::isfinite(var.lower)) {
      worst = std::max(worst, (var.lower - x[i]) / std::max(1.0, std::abs(var.lower)));
    }
    if (std::isfinite(var.upper)) {
      worst = std::max(worst, (x[i] - var.upper) / std::max(1.0, std::abs(var.upper)));
    }
  }
  return worst;
}

namespace {

// How an original variable maps onto nonnegative standard-form columns:
// x = offset + sign * y[col] - y[neg_col].
struct ColumnMap {
  int col = -1;
  int neg_col = -1;
  double offset = 0.0;
  double sign = 1.0;
};

struct StdRow {
  std::vector<std::pair<int, double>> coef;  // column, coefficient
  Relation relation = Relation::kLessEqual;
  double rhs = 0.0;
};

class Tableau {
 public:
  Tableau(int rows, int cols) : m_(rows), n_(cols), data_(static_cast<std::size_t>(rows + 1) * (cols + 1), 0.0), basis_(rows, -1) {}

  double& at(int i, int j) { return data_[static_cast<std::size_t>(i) * (n_ + 1) + j]; }
  double at(int i, int j) const { return data_[static_cast<std::size_t>(i) * (n_ + 1) + j]; }
  double& rhs(int i) { return at(i, n_); }
  double& cost(int j) { return at(m_, j); }
  int rows() const { return m_; }
  int cols() const { return n_; }
  std::vector<int>& basis() { return basis_; }

  void pivot(int r, int c) {
    const double piv = at(r, c);
    double* row = &at(r, 0);
    nz_.clear();
    for (int j = 0; j <= n_; ++j) {
      if (row[j] != 0.0) {
        row[j] /= piv;
        nz_.push_back(j);
      }
    }
    row[c] = 1.0;
    for (int i = 0; i <= m_; ++i) {
      if (i == r) continue;
      double* other = &at(i, 0);
      const double f = other[c];
      if (f == 0.0) continue;
      for (int j : nz_) other[j] -= f * row[j];
      other[c] = 0.0;
    }
    basis_[r] = c;
  }

  // Sets the objective row to reduced costs for `costs` under the current basis.
  void load_costs(const std::vector<double>& costs) {
    for (int j = 0; j <= n_; ++j) cost(j) = j < n_ ? costs[j] : 0.0;
    for (int i = 0; i < m_; ++i) {
      const double cb = costs[basis_[i]];
      if (cb == 0.0) continue;
      for (int j = 0; j <= n_; ++j) cost(j) -= cb * at(i, j);
    }
  }

 private:
  int m_;
  int n_;
  std::vector<double> data_;
  std::vector<int> basis_;
  std::vector<int> nz_;
};

enum class PhaseResult { kOptimal, kUnbounded };

class SimplexRun {
 public:
  SimplexRun(const LinearProgram& lp, const SimplexOptions& opt) : lp_(lp), opt_(opt) {}

  Solution run() {
    Solution sol;
    sol.nodes = 1;
    if (!build()) {
      sol.status = SolveStatus::kInfeasible;
      return sol;
    }
    const int m = static_cast<int>(rows_.size());
    const int ny = num_struct_;
    // column layout: [0, ny) structural, then slack/surplus, then artificial
    std::vector<int> slack_col(m, -1);
    std::vector<int> art_col(m, -1);
    int next = ny;
    for (int i = 0; i < m; ++i) {
      if (rows_[i].relation != Relation::kEqual) slack_col[i] = next++;
    }
    first_artificial_ = next;
    for (int i = 0; i < m; ++i) {
      if (rows_[i].relation != Relation::kLessEqual) art_col[i] = next++;
    }
    const int ncols = next;
    Tableau t(m, ncols);
    for (int i = 0; i < m; ++i) {
      for (const auto& [c, a] : rows_[i].coef) t.at(i, c) += a;
      t.rhs(i) = rows_[i].rhs;
      if (rows_[i].relation == Relation::kLessEqual) {
        t.at(i, slack_col[i]) = 1.0;
        t.basis()[i] = slack_col[i];
      } else {
        if (rows_[i].relation == Relation::kGreaterEqual) t.at(i, slack_col[i]) = -1.0;
        t.at(i, art_col[i]) = 1.0;
        t.basis()[i] = art_col[i];
      }
    }
    max_iterations_ = opt_.max_iterations > 0 ? opt_.max_iterations
                                              : 50'000 + 50 * static_cast<std::int64_t>(m + ncols);

    double max_rhs = 1.0;
    for (int i = 0; i < m; ++i) max_rhs = std::max(max_rhs, std::abs(t.rhs(i)));

    if (first_artificial_ < ncols) {
      std::vector<double> c1(ncols, 0.0);
      for (int j = first_artificial_; j < ncols; ++j) c1[j] = 1.0;
      t.load_costs(c1);
      cost_tol_ = opt_.pivot_tolerance;
      run_phase(t, /*allow_artificial=*/true);
      const double infeas = -t.rhs(m);
      if (infeas > 1e-9 * max_rhs + 1e-9) {
        sol.status = SolveStatus::kInfeasible;
        sol.iterations = iterations_;
        return sol;
      }
      drive_out_artificials(t);
    }

    std::vector<double> c2(ncols, 0.0);
    for (int j = 0; j < ny; ++j) c2[j] = struct_cost_[j];
    double cmax = 0.0;
    for (double c : c2) cmax = std::max(cmax, std::abs(c));
    cost_tol_ = opt_.pivot_tolerance * std::max(1.0, cmax);
    t.load_costs(c2);
    if (run_phase(t, /*allow_artificial=*/false) == PhaseResult::kUnbounded) {
      sol.status = SolveStatus::kUnbounded;
      sol.iterations = iterations_;
      return sol;
    }

    std::vector<double> y(ncols, 0.0);
    for (int i = 0; i < m; ++i) y[t.basis()[i]] = std::max(0.0, t.rhs(i));
    sol.values.assign(lp_.variables().size(), 0.0);
    for (std::size_t v = 0; v < maps_.size(); ++v) {
      const auto& cm = maps_[v];
      double x = cm.offset;
      if (cm.col >= 0) x += cm.sign * y[cm.col];
      if (cm.neg_col >= 0) x -= y[cm.neg_col];
      sol.values[v] = x;
    }
    sol.objective = 0.0;
    for (std::size_t v = 0; v < sol.values.size(); ++v) sol.objective += lp_.objective()[v] * sol.values[v];
    sol.status = SolveStatus::kOptimal;
    sol.iterations = iterations_;

    const double viol = max_violation(lp_, sol.values);
    if (viol > opt_.feasibility_tolerance) {
      std::ostringstream msg;
      msg << "simplex solution violates constraints by " << viol << " (scaled)";
      throw SolverError(msg.str());
    }
    return sol;
  }

 private:
  // Converts the program to rows over nonnegative columns. Returns false when the
  // program is trivially infeasible (crossed bounds, violated empty row).
  bool build() {
    const auto& vars = lp_.variables();
    const double sense = lp_.sense() == Sense::kMaximize ? -1.0 : 1.0;
    maps_.resize(vars.size());
    std::vector<double> upper_room;  // per structural column, +inf when unbounded
    for (std::size_t i = 0; i < vars.size(); ++i) {
      const auto& v = vars[i];
      auto& cm = maps_[i];
      const double c = sense * lp_.objective()[i];
      if (v.lower > v.upper + 1e-12) return false;
      if (std::isfinite(v.lower) && std::isfinite(v.upper) && v.upper - v.lower <= 1e-12) {
        cm.offset = v.lower;
        continue;
      }
      if (std::isfinite(v.lower)) {
        cm.offset = v.lower;
        cm.col = add_struct(c);
        upper_room.push_back(std::isfinite(v.upper) ? v.upper - v.lower : kInfinity);
      } else if (std::isfinite(v.upper)) {
        cm.offset = v.upper;
        cm.sign = -1.0;
        cm.col = add_struct(-c);
        upper_room.push_back(kInfinity);
      } else {
        cm.col = add_struct(c);
        upper_room.push_back(kInfinity);
        cm.neg_col = add_struct(-c);
        upper_room.push_back(kInfinity);
      }
    }

    for (const auto& con : lp_.constraints()) {
      std::map<int, double> acc;
      double rhs = con.rhs;
      for (const auto& term : con.terms) {
        const auto& cm = maps_[static_cast<std::size_t>(term.variable)];
        rhs -= term.coefficient * cm.offset;
        if (cm.col >= 0) acc[cm.col] += term.coefficient * cm.sign;
        if (cm.neg_col >= 0) acc[cm.neg_col] -= term.coefficient;
      }
      StdRow row;
      row.relation = con.relation;
      double scale = 0.0;
      for (const auto& [c, a] : acc) {
        if (a != 0.0) {
          row.coef.emplace_back(c, a);
          scale = std::max(scale, std::abs(a));
        }
      }
      if (row.coef.empty()) {
        const double tol = opt_.feasibility_tolerance * std::max(1.0, std::abs(con.rhs));
        const bool ok = (con.relation == Relation::kLessEqual && 0.0 <= rhs + tol) ||
                        (con.relation == Relation::kGreaterEqual && 0.0 >= rhs - tol) ||
                        (con.relation == Relation::kEqual && std::abs(rhs) <= tol);
        if (!ok) return false;
        continue;
      }
      for (auto& [c, a] : row.coef) a /= scale;
      row.rhs = rhs / scale;
      normalize(row);
      rows_.push_back(std::move(row));
    }

    // Explicit upper-bound rows, skipped when another row already implies the bound.
    for (int col = 0; col < num_struct_; ++col) {
      const double room = upper_room[static_cast<std::size_t>(col)];
      if (!std::isfinite(room) || implied_upper(col) <= room + 1e-12) continue;
      StdRow row;
      row.coef.emplace_back(col, 1.0);
      row.relation = Relation::kLessEqual;
      row.rhs = room;
      rows_.push_back(std::move(row));
    }
    return true;
  }

  static void normalize(StdRow& row) {
    if (row.rhs < 0.0) {
      row.rhs = -row.rhs;
      for (auto& [c, a] : row.coef) a = -a;
      if (row.relation == Relation::kLessEqual) {
        row.relation = Relation::kGreaterEqual;
      } else if (row.relation == Relation::kGreaterEqual) {
        row.relation = Relation::kLessEqual;
      }
    }
  }

  // Tightest bound on a column implied by a "<=" or "=" row with nonnegative coefficients.
  double implied_upper(int col) const {
    double best = kInfinity;
    for (const auto& row : rows_) {
      if (row.relation == Relation::kGreaterEqual) continue;
      double a_col = 0.0;
      bool all_nonneg = true;
      for (const auto& [c, a] : row.coef) {
        if (a < 0.0) {
          all_nonneg = false;
          break;
        }
        if (c == col) a_col = a;
      }
      if (all_nonneg && a_col > 0.0) best = std::min(best, row.rhs / a_col);
    }
    return best;
  }

  int add_struct(double cost) {
    struct_cost_.push_back(cost);
    return num_struct_++;
  }

  PhaseResult run_phase(Tableau& t, bool allow_artificial) {
    const int m = t.rows();
    const int limit = allow_artificial ? t.cols() : first_artificial_;
    int degenerate_streak = 0;
    bool bland = false;
    while (true) {
      if (++iterations_ > max_iterations_) throw SolverError("simplex iteration limit reached");
      int enter = -1;
      double best = -cost_tol_;
      for (int j = 0; j < limit; ++j) {
        const double d = t.cost(j);
        if (d < best) {
          enter = j;
          if (bland) break;
          best = d;
        }
      }
      if (enter < 0) return PhaseResult::kOptimal;

      int leave = -1;
      double best_ratio = kInfinity;
      for (int i = 0; i < m; ++i) {
        const double a = t.at(i, enter);
        if (a <= opt_.pivot_tolerance) continue;
        const double ratio = t.rhs(i) / a;
        if (leave < 0 || ratio < best_ratio - 1e-12 * std::max(1.0, std::abs(best_ratio)) ||
            (ratio <= best_ratio + 1e-12 * std::max(1.0, std::abs(best_ratio)) &&
             t.basis()[i] < t.basis()[leave])) {
          if (leave < 0 || ratio < best_ratio) best_ratio = ratio;
          leave = i;
        }
      }
      if (leave < 0) return PhaseResult::kUnbounded;

      if (best_ratio <= 1e-12) {
        if (++degenerate_streak >= opt_.degenerate_streak_for_bland) bland = true;
      } else {
        degenerate_streak = 0;
      }
      t.pivot(leave, enter);
      for (int i = 0; i < m; ++i) {
        if (t.rhs(i) < 0.0 && t.rhs(i) > -1e-9) t.rhs(i) = 0.0;
      }
    }
  }

  void drive_out_artificials(Tableau& t) {
    for (int i = 0; i < t.rows(); ++i) {
      if (t.basis()[i] < first_artificial_) continue;
      int best = -1;
      double best_abs = opt_.pivot_tolerance;
      for (int j = 0; j < first_artificial_; ++j) {
        if (std::abs(t.at(i, j)) > best_abs) {
          best_abs = std::abs(t.at(i, j));
          best = j;
        }
      }
      if (best >= 0) {
        t.pivot(i, best);
      } else {
        // redundant row: the artificial stays basic at zero and can never grow
        for (int j = 0; j < t.cols(); ++j) {
          if (j != t.basis()[i]) t.at(i, j) = 0.0;
        }
        t.rhs(i) = 0.0;
      }
    }
  }

  const LinearProgram& lp_;
  const SimplexOptions& opt_;
  std::vector<ColumnMap> maps_;
  std::vector<double> struct_cost_;
  int num_struct_ = 0;
  std::vector<StdRow> rows_;
  int first_artificial_ = 0;
  double cost_tol_ = 1e-9;
  std::int64_t iterations_ = 0;
  std::int64_t max_iterations_ = 0;
};

}  // namespace

Solution SimplexSolver::solve(const LinearProgram& lp) const {
  lp.validate();
  return SimplexRun(lp, options_).run();
}

Solution SimplexSolver::solve(const MixedIntegerProgram& mip) const {
  mip.validate();
  const LinearProgram& base = mip.relaxation();
  const int n = base.num_variables();
  const bool maximize = base.sense() == Sense::kMaximize;
  // Internally minimize `sign * objective`.
  const double sign = maximize ? -1.0 : 1.0;

  struct Node {
    std::vector<std::pair<int, double>> fixings;
  };
  std::vector<Node> stack;
  stack.push_back(Node{});

  Solution best;
  best.status = SolveStatus::kInfeasible;
  double best_value = kInfinity;
  std::int64_t iterations = 0;
  std::int64_t nodes = 0;

  LinearProgram work = base;
  while (!stack.empty()) {
    Node node = std::move(stack.back());
    stack.pop_back();
    ++nodes;
    for (int v = 0; v < n; ++v) {
      const auto& orig = base.variables()[static_cast<std::size_t>(v)];
      work.set_bounds(v, orig.lower, orig.upper);
    }
    for (const auto& [v, val] : node.fixings) work.set_bounds(v, val, val);

    const Solution relaxed = SimplexRun(work, options_).run();
    iterations += relaxed.iterations;
    if (relaxed.status == SolveStatus::kInfeasible) continue;
    if (relaxed.status == SolveStatus::kUnbounded) {
      Solution out;
      out.status = SolveStatus::kUnbounded;
      out.iterations = iterations;
      out.nodes = nodes;
      return out;
    }
    const double value = sign * relaxed.objective;
    const bool have_incumbent = best_value < kInfinity;
    const double prune_tol = have_incumbent ? 1e-9 * std::max(1.0, std::abs(best_value)) : 0.0;
    if (have_incumbent && value >= best_value - prune_tol) continue;

    int branch_var = -1;
    for (int v = 0; v < n; ++v) {
      if (!mip.is_binary(v)) continue;
      const double x = relaxed.values[static_cast<std::size_t>(v)];
      if (std::abs(x - std::round(x)) > 1e-6) {
        branch_var = v;
        break;
      }
    }
    if (branch_var < 0) {
      Solution candidate = relaxed;
      for (int v = 0; v < n; ++v) {
        if (mip.is_binary(v)) candidate.values[static_cast<std::size_t>(v)] = std::round(candidate.values[static_cast<std::size_t>(v)]);
      }
      candidate.objective = 0.0;
      for (int v = 0; v < n; ++v) {
        candidate.objective += base.objective()[static_cast<std::size_t>(v)] * candidate.values[static_cast<std::size_t>(v)];
      }
      if (max_violation(base, candidate.values) > options_.feasibility_tolerance) {
        throw SolverError("rounded integral solution violates constraints");
      }
      const double cand_value = sign * candidate.objective;
      if (!have_incumbent || cand_value < best_value - prune_tol) {
        best_value = cand_value;
        best = std::move(candidate);
      }
      continue;
    }
    Node one = node;
    one.fixings.emplace_back(branch_var, 1.0);
    Node zero = std::move(node);
    zero.fixings.emplace_back(branch_var, 0.0);
    stack.push_back(std::move(one));
    stack.push_back(std::move(zero));
  }
  best.iterations = iterations;
  best.nodes = nodes;
  return best;
}

const Solver& default_solver() {
  static const SimplexSolver kSolver;
  return kSolver;
}

Solution solve_lp(const LinearProgram& lp) { return default_solver().solve(lp); }

Solution solve_mip(const MixedIntegerProgram& mip) { return default_solver().solve(mip); }

namespace {

std::string lp_name(const std::string& name, std::size_t index, char prefix) {
  std::string out;
  for (char ch : name) {
    const bool ok = std::isalnum(static_cast<unsigned char>(ch)) || ch == '_' || ch == '.' || ch == '[' ||
                    ch == ']' || ch == '(' || ch == ')';
    out += ok ? ch : '_';
  }
  if (out.empty() || std::isdigit(static_cast<unsigned char>(out.front())) || out.front() == '.') {
    out = std::string(1, prefix) + std::to_string(index) + (out.empty() ? "" : "_" + out);
  }
  return out;
}

void write_number(std::ostringstream& out, double v) { out << std::setprecision(17) << v; }

void write_lp_body(std::ostringstream& out, const LinearProgram& lp, const std::vector<std::string>& names) {
  out << (lp.sense() == Sense::kMinimize ? "Minimize\n" : "Maximize\n") << " obj:";
  bool any = false;
  for (std::size_t i = 0; i < names.size(); ++i) {
    const double c = lp.objective()[i];
    if (c == 0.0) continue;
    out << (c < 0 ? " - " : " + ");
    write_number(out, std::abs(c));
    out << ' ' << names[i];
    any = true;
  }
  if (!any && !names.empty()) out << " 0 " << names[0];
  out << "\nSubject To\n";
  for (std::size_t k = 0; k < lp.constraints().size(); ++k) {
    const auto& c = lp.constraints()[k];
    out << ' ' << lp_name(c.name, k, 'c') << ':';
    if (c.terms.empty()) out << " 0 " << (names.empty() ? "x0" : names[0]);
    for (const auto& t : c.terms) {
      out << (t.coefficient < 0 ? " - " : " + ");
      write_number(out, std::abs(t.coefficient));
      out << ' ' << names[static_cast<std::size_t>(t.variable)];
    }
    out << (c.relation == Relation::kLessEqual ? " <= " : c.relation == Relation::kGreaterEqual ? " >= " : " = ");
    write_number(out, c.rhs);
    out << '\n';
  }
  out << "Bounds\n";
  for (std::size_t i = 0; i < names.size(); ++i) {
    const auto& v = lp.variables()[i];
    if (!std::isfinite(v.lower) && !std::isfinite(v.upper)) {
      out << ' ' << names[i] << " free\n";
      continue;
    }
    out << ' ';
    if (std::isfinite(v.lower)) {
      write_number(out, v.lower);
    } else {
      out << "-inf";
    }
    out << " <= " << names[i] << " <= ";
    if (std::isfinite(v.upper)) {
      write_number(out, v.upper);
    } else {
      out << "+inf";
    }
    out << '\n';
  }
}

std::vector<std::string> variable_names(const LinearProgram& lp) {
  std::vector<std::string> names;
  std::set<std::string> used;
  for (std::size_t i = 0; i < lp.variables().size(); ++i) {
    std::string n = lp_name(lp.variables()[i].name, i, 'x');
    if (!used.insert(n).second) {
      n += "_" + std::to_string(i);
      used.insert(n);
    }
    names.push_back(std::move(n));
  }
  return names;
}

}  // namespace

std::string to_lp_format(const LinearProgram& lp) {
  std::ostringstream out;
  write_lp_body(out, lp, variable_names(lp));
  out << "End\n";
  return out.str();
}

std::string to_lp_format(const MixedIntegerProgram& mip) {
  std::ostringstream out;
  const auto names = variable_names(mip.relaxation());
  write_lp_body(out, mip.relaxation(), names);
  out << "Binary\n";
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (mip.is_binary(static_cast<int>(i))) out << ' ' << names[i] << '\n';
  }
  out << "End\n";
  return out.str();
}

}  // namespace clockauction::optim
