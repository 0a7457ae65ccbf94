#include "compass/lp.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>

namespace compass::lp {
namespace {

constexpr double kFeasTol = 1e-8;
constexpr double kCostTol = 1e-8;
constexpr double kPivotTol = 1e-9;
constexpr double kRatioTie = 1e-9;

Mat basis_matrix(const Mat& A, const std::vector<int>& basis) {
  Mat B(A.rows(), static_cast<Eigen::Index>(basis.size()));
  for (std::size_t i = 0; i < basis.size(); ++i) B.col(i) = A.col(basis[i]);
  return B;
}

// One simplex run from a feasible basis. Only columns marked in `allowed`
// may enter; `iterations` accumulates across calls.
Status run_simplex(const Mat& A, const Vec& b, const Vec& c,
                   std::vector<int>& basis, const std::vector<char>& allowed,
                   int max_iter, int& iterations) {
  const int m = static_cast<int>(A.rows());
  const int n = static_cast<int>(A.cols());
  std::vector<char> in_basis(n, 0);
  for (int j : basis) in_basis[j] = 1;

  while (iterations < max_iter) {
    ++iterations;
    Mat Binv = Eigen::PartialPivLU<Mat>(basis_matrix(A, basis)).inverse();
    Vec xB = Binv * b;
    Vec cB(m);
    for (int i = 0; i < m; ++i) cB[i] = c[basis[i]];
    Vec y = Binv.transpose() * cB;

    // Bland: smallest eligible index enters
    int enter = -1;
    for (int j = 0; j < n; ++j) {
      if (in_basis[j] || !allowed[j]) continue;
      if (c[j] - y.dot(A.col(j)) < -kCostTol) {
        enter = j;
        break;
      }
    }
    if (enter < 0) return Status::Optimal;

    Vec d = Binv * A.col(enter);
    double min_ratio = std::numeric_limits<double>::infinity();
    for (int i = 0; i < m; ++i)
      if (d[i] > kPivotTol)
        min_ratio = std::min(min_ratio, std::max(xB[i], 0.0) / d[i]);
    if (!std::isfinite(min_ratio)) return Status::Unbounded;

    // Bland again: among ties, smallest basic variable index leaves
    int leave = -1;
    for (int i = 0; i < m; ++i) {
      if (d[i] <= kPivotTol) continue;
      if (std::max(xB[i], 0.0) / d[i] <= min_ratio + kRatioTie &&
          (leave < 0 || basis[i] < basis[leave]))
        leave = i;
    }
    in_basis[basis[leave]] = 0;
    in_basis[enter] = 1;
    basis[leave] = enter;
  }
  return Status::Stalled;
}

}  // namespace

Result solve_standard(const Mat& A_in, const Vec& b_in, const Vec& c) {
  const int m = static_cast<int>(A_in.rows());
  const int n = static_cast<int>(A_in.cols());
  if (b_in.size() != m || c.size() != n)
    throw DimensionMismatch("lp: shape mismatch");
  ensure_finite(A_in, "lp A");
  ensure_finite(b_in, "lp b");
  ensure_finite(c, "lp c");

  Result out;
  if (m == 0) {
    bool bounded = true;
    for (int j = 0; j < n; ++j)
      if (c[j] < -kCostTol) bounded = false;
    out.status = bounded ? Status::Optimal : Status::Unbounded;
    out.x = Vec::Zero(n);
    out.dual = Vec();
    return out;
  }

  Mat A = A_in;
  Vec b = b_in;
  Vec row_sign = Vec::Ones(m);
  for (int i = 0; i < m; ++i) {
    if (b[i] < 0) {
      A.row(i) *= -1.0;
      b[i] = -b[i];
      row_sign[i] = -1.0;
    }
  }

  // phase 1: artificial basis, minimize the artificials
  Mat A1(m, n + m);
  A1.leftCols(n) = A;
  A1.rightCols(m) = Mat::Identity(m, m);
  Vec c1 = Vec::Zero(n + m);
  c1.tail(m).setOnes();
  std::vector<int> basis(m);
  for (int i = 0; i < m; ++i) basis[i] = n + i;
  std::vector<char> allowed(n + m, 0);
  std::fill(allowed.begin(), allowed.begin() + n, 1);

  const int max_iter = 50 * (n + 2 * m);
  Status s1 = run_simplex(A1, b, c1, basis, allowed, max_iter, out.iterations);
  if (s1 != Status::Optimal) {
    out.status = Status::Stalled;
    return out;
  }
  {
    Mat Binv = Eigen::PartialPivLU<Mat>(basis_matrix(A1, basis)).inverse();
    Vec xB = Binv * b;
    double infeas = 0.0;
    for (int i = 0; i < m; ++i)
      if (basis[i] >= n) infeas += std::max(xB[i], 0.0);
    if (infeas > kFeasTol) {
      out.status = Status::Infeasible;
      out.objective = infeas;
      return out;
    }
  }

  // drive remaining artificials out; rows that offer no pivot are redundant
  std::vector<char> drop_row(m, 0);
  for (int r = 0; r < m; ++r) {
    if (basis[r] < n) continue;
    Mat Binv = Eigen::PartialPivLU<Mat>(basis_matrix(A1, basis)).inverse();
    Eigen::RowVectorXd row = Binv.row(r) * A;
    std::vector<char> used(n, 0);
    for (int j : basis)
      if (j < n) used[j] = 1;
    int piv = -1;
    for (int j = 0; j < n; ++j) {
      if (!used[j] && std::abs(row[j]) > kPivotTol) {
        piv = j;
        break;
      }
    }
    if (piv >= 0)
      basis[r] = piv;
    else
      drop_row[basis[r] - n] = 1;
  }

  std::vector<int> kept;
  for (int i = 0; i < m; ++i)
    if (!drop_row[i]) kept.push_back(i);
  const int m2 = static_cast<int>(kept.size());
  Mat A2(m2, n);
  Vec b2(m2);
  for (int i = 0; i < m2; ++i) {
    A2.row(i) = A.row(kept[i]);
    b2[i] = b[kept[i]];
  }
  std::vector<int> basis2;
  for (int r = 0; r < m; ++r)
    if (basis[r] < n) basis2.push_back(basis[r]);
  if (static_cast<int>(basis2.size()) != m2 ||
      Eigen::FullPivLU<Mat>(basis_matrix(A2, basis2)).rank() < m2) {
    out.status = Status::Stalled;
    return out;
  }

  std::vector<char> allowed2(n, 1);
  Status s2 = run_simplex(A2, b2, c, basis2, allowed2, max_iter, out.iterations);
  if (s2 != Status::Optimal) {
    out.status = s2;
    return out;
  }

  Mat Binv = Eigen::PartialPivLU<Mat>(basis_matrix(A2, basis2)).inverse();
  Vec xB = Binv * b2;
  out.x = Vec::Zero(n);
  for (int r = 0; r < m2; ++r) out.x[basis2[r]] = std::max(xB[r], 0.0);
  out.objective = c.dot(out.x);
  Vec cB(m2);
  for (int r = 0; r < m2; ++r) cB[r] = c[basis2[r]];
  Vec y = Binv.transpose() * cB;
  out.dual = Vec::Zero(m);
  for (int i = 0; i < m2; ++i) out.dual[kept[i]] = y[i] * row_sign[kept[i]];
  out.status = Status::Optimal;
  return out;
}

Problem::Problem(int num_vars) : num_vars_(num_vars), free_(num_vars, 0) {
  if (num_vars <= 0) throw InvalidArgument("lp: need at least one variable");
  objective_ = Vec::Zero(num_vars);
}

void Problem::set_objective(const Vec& c) {
  if (c.size() != num_vars_) throw DimensionMismatch("lp: objective size");
  objective_ = c;
}

void Problem::set_free(int var) {
  if (var < 0 || var >= num_vars_) throw InvalidArgument("lp: bad variable");
  free_[var] = 1;
}

void Problem::add_row(const Vec& coeffs, Rel rel, double rhs) {
  if (coeffs.size() != num_vars_) throw DimensionMismatch("lp: row size");
  rows_.push_back(coeffs);
  rels_.push_back(rel);
  rhs_.push_back(rhs);
}

Result Problem::solve() const {
  const int m = static_cast<int>(rhs_.size());
  std::vector<int> neg_col(num_vars_, -1);
  int cols = num_vars_;
  for (int v = 0; v < num_vars_; ++v)
    if (free_[v]) neg_col[v] = cols++;
  std::vector<int> slack_col(m, -1);
  for (int i = 0; i < m; ++i)
    if (rels_[i] != Rel::Eq) slack_col[i] = cols++;

  Mat A = Mat::Zero(m, cols);
  Vec b(m);
  for (int i = 0; i < m; ++i) {
    for (int v = 0; v < num_vars_; ++v) {
      A(i, v) = rows_[i][v];
      if (neg_col[v] >= 0) A(i, neg_col[v]) = -rows_[i][v];
    }
    if (slack_col[i] >= 0) A(i, slack_col[i]) = rels_[i] == Rel::Le ? 1.0 : -1.0;
    b[i] = rhs_[i];
  }
  Vec c = Vec::Zero(cols);
  for (int v = 0; v < num_vars_; ++v) {
    c[v] = objective_[v];
    if (neg_col[v] >= 0) c[neg_col[v]] = -objective_[v];
  }

  Result raw = solve_standard(A, b, c);
  Result out;
  out.status = raw.status;
  out.iterations = raw.iterations;
  out.dual = raw.dual;
  out.objective = raw.objective;
  if (raw.status == Status::Optimal) {
    out.x = Vec(num_vars_);
    for (int v = 0; v < num_vars_; ++v) {
      out.x[v] = raw.x[v];
      if (neg_col[v] >= 0) out.x[v] -= raw.x[neg_col[v]];
    }
  }
  return out;
}

}  // namespace compass::lp
