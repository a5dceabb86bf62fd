#pragma once

// Small dense two-phase simplex for the audit programs (a few hundred rows,
// under ~100 columns). All variables are nonnegative; the objective is
// maximized.

#include <cstddef>
#include <vector>

namespace odist::lp {

enum class Sense { LessEqual, GreaterEqual, Equal };

struct Term {
  std::size_t var;
  double coef;
};

struct Constraint {
  std::vector<Term> terms;
  Sense sense;
  double rhs;
};

class LinearProgram {
 public:
  explicit LinearProgram(std::size_t num_vars = 0) : objective_(num_vars, 0.0) {}

  std::size_t num_vars() const { return objective_.size(); }
  std::size_t add_variable(double objective_coef = 0.0) {
    objective_.push_back(objective_coef);
    return objective_.size() - 1;
  }
  void set_objective(std::size_t var, double coef) { objective_.at(var) = coef; }
  void add_to_objective(std::size_t var, double coef) { objective_.at(var) += coef; }
  void add_constraint(std::vector<Term> terms, Sense sense, double rhs) {
    rows_.push_back({std::move(terms), sense, rhs});
  }

  const std::vector<double>& objective() const { return objective_; }
  const std::vector<Constraint>& constraints() const { return rows_; }

 private:
  std::vector<double> objective_;
  std::vector<Constraint> rows_;
};

enum class Status { Optimal, Infeasible, Unbounded };

struct Solution {
  Status status = Status::Infeasible;
  double value = 0.0;
  std::vector<double> x;
};

/// Maximizes c'x subject to the constraints and x >= 0.
Solution maximize(const LinearProgram& program);

}  // namespace odist::lp
