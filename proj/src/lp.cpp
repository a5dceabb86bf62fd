#include "odist/lp.hpp"

#include <cmath>
#include <limits>
#include <utility>

namespace odist::lp {

namespace {

constexpr double kEps = 1e-9;

// Tableau simplex with an artificial column for phase one (the KACTL
// formulation). Entering columns are chosen by most negative reduced cost;
// after too many degenerate-looking pivots it switches to Bland's rule,
// which cannot cycle.
class Tableau {
 public:
  Tableau(const std::vector<std::vector<double>>& a, const std::vector<double>& b, const std::vector<double>& c)
      : m_(static_cast<int>(b.size())),
        n_(static_cast<int>(c.size())),
        cols_(n_ + 2),
        nonbasic_(n_ + 1),
        basic_(m_),
        d_(static_cast<std::size_t>(m_ + 2) * cols_, 0.0) {
    for (int i = 0; i < m_; ++i)
      for (int j = 0; j < n_; ++j) at(i, j) = a[i][j];
    for (int i = 0; i < m_; ++i) {
      basic_[i] = n_ + i;
      at(i, n_) = -1;
      at(i, n_ + 1) = b[i];
    }
    for (int j = 0; j < n_; ++j) {
      nonbasic_[j] = j;
      at(m_, j) = -c[j];
    }
    nonbasic_[n_] = -1;
    at(m_ + 1, n_) = 1;
  }

  Status solve(std::vector<double>& x, double& value) {
    int r = 0;
    for (int i = 1; i < m_; ++i)
      if (at(i, n_ + 1) < at(r, n_ + 1)) r = i;
    if (m_ > 0 && at(r, n_ + 1) < -kEps) {
      pivot(r, n_);
      if (!simplex(2) || at(m_ + 1, n_ + 1) < -kEps) return Status::Infeasible;
      for (int i = 0; i < m_; ++i) {
        if (basic_[i] != -1) continue;
        int s = 0;
        for (int j = 1; j <= n_; ++j)
          if (std::make_pair(at(i, j), nonbasic_[j]) < std::make_pair(at(i, s), nonbasic_[s])) s = j;
        pivot(i, s);
      }
    }
    const bool bounded = simplex(1);
    x.assign(n_, 0.0);
    for (int i = 0; i < m_; ++i)
      if (basic_[i] >= 0 && basic_[i] < n_) x[basic_[i]] = at(i, n_ + 1);
    if (!bounded) return Status::Unbounded;
    value = at(m_, n_ + 1);
    return Status::Optimal;
  }

 private:
  double& at(int r, int c) { return d_[static_cast<std::size_t>(r) * cols_ + c]; }

  void pivot(int r, int s) {
    double* pr = &at(r, 0);
    const double inv = 1.0 / pr[s];
    for (int i = 0; i < m_ + 2; ++i) {
      if (i == r) continue;
      double* pi = &at(i, 0);
      if (std::abs(pi[s]) <= kEps) continue;
      const double factor = pi[s] * inv;
      for (int j = 0; j < cols_; ++j) pi[j] -= pr[j] * factor;
      pi[s] = pr[s] * factor;
    }
    for (int j = 0; j < cols_; ++j)
      if (j != s) pr[j] *= inv;
    for (int i = 0; i < m_ + 2; ++i)
      if (i != r) at(i, s) *= -inv;
    pr[s] = inv;
    std::swap(basic_[r], nonbasic_[s]);
  }

  bool simplex(int phase) {
    const int obj = m_ + phase - 1;
    const long dantzig_budget = 50L * (m_ + n_ + 2);
    for (long iter = 0;; ++iter) {
      const bool bland = iter > dantzig_budget;
      int s = -1;
      for (int j = 0; j <= n_; ++j) {
        if (nonbasic_[j] == -phase) continue;
        if (bland) {
          if (at(obj, j) < -kEps && (s == -1 || nonbasic_[j] < nonbasic_[s])) s = j;
        } else if (s == -1 || std::make_pair(at(obj, j), nonbasic_[j]) < std::make_pair(at(obj, s), nonbasic_[s])) {
          s = j;
        }
      }
      if (s == -1 || at(obj, s) >= -kEps) return true;
      int r = -1;
      for (int i = 0; i < m_; ++i) {
        if (at(i, s) <= kEps) continue;
        if (r == -1 ||
            std::make_pair(at(i, n_ + 1) / at(i, s), basic_[i]) < std::make_pair(at(r, n_ + 1) / at(r, s), basic_[r]))
          r = i;
      }
      if (r == -1) return false;
      pivot(r, s);
    }
  }

  int m_, n_, cols_;
  std::vector<int> nonbasic_, basic_;
  std::vector<double> d_;
};

}  // namespace

Solution maximize(const LinearProgram& program) {
  const std::size_t n = program.num_vars();
  std::vector<std::vector<double>> a;
  std::vector<double> b;
  auto push_row = [&](const Constraint& c, double sign) {
    std::vector<double> row(n, 0.0);
    for (const auto& t : c.terms) row.at(t.var) += sign * t.coef;
    a.push_back(std::move(row));
    b.push_back(sign * c.rhs);
  };
  for (const auto& c : program.constraints()) {
    switch (c.sense) {
      case Sense::LessEqual:
        push_row(c, 1.0);
        break;
      case Sense::GreaterEqual:
        push_row(c, -1.0);
        break;
      case Sense::Equal:
        push_row(c, 1.0);
        push_row(c, -1.0);
        break;
    }
  }
  Tableau tableau(a, b, program.objective());
  Solution sol;
  sol.status = tableau.solve(sol.x, sol.value);
  if (sol.status == Status::Unbounded) sol.value = std::numeric_limits<double>::infinity();
  if (sol.status == Status::Infeasible) sol.value = -std::numeric_limits<double>::infinity();
  return sol;
}

}  // namespace odist::lp
