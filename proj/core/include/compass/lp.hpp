#pragma once

#include <vector>

#include "compass/types.hpp"

namespace compass::lp {

enum class Status { Optimal, Infeasible, Unbounded, Stalled };

struct Result {
  Status status = Status::Stalled;
  double objective = 0.0;
  Vec x;     // primal values in the caller's variable space
  Vec dual;  // one multiplier per row; 0 for rows found redundant
  int iterations = 0;
};

/// min c'x  s.t.  A x = b, x >= 0.
/// Dense two-phase revised simplex, Bland's rule for entering and leaving
/// variables, basis refactorized every iteration. Redundant rows are
/// detected at the end of phase 1 and dropped.
Result solve_standard(const Mat& A, const Vec& b, const Vec& c);

enum class Rel { Eq, Le, Ge };

/// General-form builder lowered to standard form: free variables are split
/// into positive and negative parts, Le/Ge rows get slack columns.
class Problem {
 public:
  explicit Problem(int num_vars);
  void set_objective(const Vec& c);  // min c'x
  void set_free(int var);            // default is x >= 0
  void add_row(const Vec& coeffs, Rel rel, double rhs);
  int num_vars() const { return num_vars_; }
  int num_rows() const { return static_cast<int>(rhs_.size()); }
  Result solve() const;

 private:
  int num_vars_ = 0;
  Vec objective_;
  std::vector<char> free_;
  std::vector<Vec> rows_;
  std::vector<Rel> rels_;
  std::vector<double> rhs_;
};

}  // namespace compass::lp
