#include "support/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

namespace testsupport {
namespace {

constexpr double kEps = 1e-9;

// One simplex run on an explicit tableau: rows 0..m-1 are constraints,
// row m is the (reduced) objective. basis[i] is the column basic in row i.
// Returns false when unbounded.
bool run_tableau(Mat& T, std::vector<int>& basis, int cols) {
  const long m = T.rows() - 1;
  for (int iter = 0; iter < 20000; ++iter) {
    int enter = -1;
    for (int j = 0; j < cols; ++j) {
      if (T(m, j) < -kEps) {
        enter = j;  // Bland: first improving column
        break;
      }
    }
    if (enter < 0) return true;
    long leave = -1;
    double best_ratio = 0.0;
    for (long i = 0; i < m; ++i) {
      if (T(i, enter) > kEps) {
        double ratio = T(i, cols) / T(i, enter);
        if (leave < 0 || ratio < best_ratio - kEps ||
            (ratio < best_ratio + kEps &&
             basis[static_cast<std::size_t>(i)] <
                 basis[static_cast<std::size_t>(leave)])) {
          leave = i;
          best_ratio = ratio;
        }
      }
    }
    if (leave < 0) return false;
    double piv = T(leave, enter);
    T.row(leave) /= piv;
    for (long i = 0; i <= m; ++i) {
      if (i == leave) continue;
      double f = T(i, enter);
      if (f != 0.0) T.row(i) -= f * T.row(leave);
    }
    basis[static_cast<std::size_t>(leave)] = enter;
  }
  return true;  // treated as converged; callers use small instances
}

}  // namespace

TabResult tableau_solve(const Mat& A, const Vec& b, const Vec& c) {
  const int m = static_cast<int>(A.rows());
  const int n = static_cast<int>(A.cols());

  // phase 1: minimize the sum of artificials
  Mat T1 = Mat::Zero(m + 1, n + m + 1);
  std::vector<int> basis(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) {
    double s = b[i] >= 0 ? 1.0 : -1.0;
    T1.row(i).head(n) = s * A.row(i);
    T1(i, n + i) = 1.0;
    T1(i, n + m) = s * b[i];
    basis[static_cast<std::size_t>(i)] = n + i;
  }
  for (int i = 0; i < m; ++i) T1.row(m) -= T1.row(i);
  run_tableau(T1, basis, n + m);
  if (T1(m, n + m) < -1e-7) return {TabStatus::Infeasible, 0.0, Vec()};

  // drive artificials out of the basis where possible
  for (int i = 0; i < m; ++i) {
    if (basis[static_cast<std::size_t>(i)] < n) continue;
    int enter = -1;
    for (int j = 0; j < n; ++j) {
      if (std::abs(T1(i, j)) > 1e-7) {
        enter = j;
        break;
      }
    }
    if (enter < 0) continue;  // redundant row
    double piv = T1(i, enter);
    T1.row(i) /= piv;
    for (int r = 0; r <= m; ++r) {
      if (r == i) continue;
      double f = T1(r, enter);
      if (f != 0.0) T1.row(r) -= f * T1.row(i);
    }
    basis[static_cast<std::size_t>(i)] = enter;
  }

  // phase 2 on the original columns
  Mat T2 = Mat::Zero(m + 1, n + 1);
  T2.topLeftCorner(m, n) = T1.topLeftCorner(m, n);
  T2.col(n).head(m) = T1.col(n + m).head(m);
  T2.row(m).head(n) = c.transpose();
  for (int i = 0; i < m; ++i) {
    int bj = basis[static_cast<std::size_t>(i)];
    if (bj < n) T2.row(m) -= T2(m, bj) * T2.row(i);
  }
  if (!run_tableau(T2, basis, n)) return {TabStatus::Unbounded, 0.0, Vec()};

  TabResult out;
  out.status = TabStatus::Optimal;
  out.x = Vec::Zero(n);
  for (int i = 0; i < m; ++i) {
    int bj = basis[static_cast<std::size_t>(i)];
    if (bj < n) out.x[bj] = T2(i, n);
  }
  out.objective = c.dot(out.x);
  return out;
}

bool l1_cone_member(const Vec& z, int k) {
  std::vector<double> a(static_cast<std::size_t>(z.size()));
  for (int i = 0; i < z.size(); ++i) a[static_cast<std::size_t>(i)] = std::abs(z[i]);
  std::sort(a.begin(), a.end(), std::greater<>());
  double head = std::accumulate(a.begin(), a.begin() + k, 0.0);
  double total = std::accumulate(a.begin(), a.end(), 0.0);
  return total - head <= head + 1e-10;
}

bool wl1_cone_member(const Vec& z, const Vec& w, int k) {
  std::vector<double> m(static_cast<std::size_t>(z.size()));
  for (int i = 0; i < z.size(); ++i)
    m[static_cast<std::size_t>(i)] = w[i] * std::abs(z[i]);
  std::sort(m.begin(), m.end(), std::greater<>());
  double head = std::accumulate(m.begin(), m.begin() + k, 0.0);
  double total = std::accumulate(m.begin(), m.end(), 0.0);
  return total - head <= head + 1e-10;
}

namespace {

// z = (1, a, b), 0 <= a, b <= 1: in the cone iff a + b <= 1.
double grid_max_31(double (*objective)(double, double)) {
  const double step = 1e-4;
  double best = 0.0;
  double best_a = 0.0;
  double best_b = 0.0;
  const int cells = static_cast<int>(1.0 / step) + 1;
  for (int ia = 0; ia < cells; ++ia) {
    double a = ia * step;
    for (int ib = 0; ia + ib < cells; ++ib) {
      double b = ib * step;
      double v = objective(a, b);
      if (v > best) {
        best = v;
        best_a = a;
        best_b = b;
      }
    }
  }
  // two zoom passes around the winner, shrinking the window 100x each time
  double window = step;
  for (int pass = 0; pass < 2; ++pass) {
    double fine = window / 50.0;
    double a0 = best_a;
    double b0 = best_b;
    for (int ia = -50; ia <= 50; ++ia) {
      for (int ib = -50; ib <= 50; ++ib) {
        double a = std::clamp(a0 + ia * fine, 0.0, 1.0);
        double b = std::clamp(b0 + ib * fine, 0.0, 1.0);
        if (a + b > 1.0) continue;
        double v = objective(a, b);
        if (v > best) {
          best = v;
          best_a = a;
          best_b = b;
        }
      }
    }
    window = fine;
  }
  return best;
}

double b_objective_31(double a, double b) {
  double hi = std::max(a, b);
  double lo = std::min(a, b);
  return lo * lo / (1.0 + hi * hi);
}

double d_objective_31(double a, double b) {
  double s = a + b;
  return s * s;  // head coordinate is 1 by the parametrization
}

}  // namespace

double grid_b_l1_31() { return grid_max_31(&b_objective_31); }

double grid_d_l1_31() { return grid_max_31(&d_objective_31); }

McEstimate mc_au_l1(int n, int k, long long samples, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  long long inside = 0;
  Vec z(n);
  for (long long s = 0; s < samples; ++s) {
    for (int i = 0; i < n; ++i) z[i] = normal(gen);
    if (l1_cone_member(z, k)) ++inside;
  }
  double p = static_cast<double>(samples - inside) / static_cast<double>(samples);
  return {p, binomial_half_width(p, samples)};
}

McEstimate mc_au_wl1(const Vec& w, int k, long long samples,
                     std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  int n = static_cast<int>(w.size());
  long long inside = 0;
  Vec z(n);
  for (long long s = 0; s < samples; ++s) {
    for (int i = 0; i < n; ++i) z[i] = normal(gen);
    if (wl1_cone_member(z, w, k)) ++inside;
  }
  double p = static_cast<double>(samples - inside) / static_cast<double>(samples);
  return {p, binomial_half_width(p, samples)};
}

double vertex_min_l1(const Mat& M, const Vec& y) {
  const int m = static_cast<int>(M.rows());
  const int n = static_cast<int>(M.cols());
  Mat S(m, 2 * n);
  S.leftCols(n) = M;
  S.rightCols(n) = -M;

  double best = std::numeric_limits<double>::infinity();
  if (y.norm() <= 1e-12) return 0.0;

  std::vector<int> cols(static_cast<std::size_t>(m));
  // enumerate all m-subsets of the 2n columns
  for (int i = 0; i < m; ++i) cols[static_cast<std::size_t>(i)] = i;
  while (true) {
    Mat B(m, m);
    for (int i = 0; i < m; ++i) B.col(i) = S.col(cols[static_cast<std::size_t>(i)]);
    Eigen::FullPivLU<Mat> lu(B);
    if (lu.isInvertible()) {
      Vec t = lu.solve(y);
      if ((B * t - y).norm() <= 1e-8 && t.minCoeff() >= -1e-9)
        best = std::min(best, t.sum());
    }
    int pos = m - 1;
    while (pos >= 0 && cols[static_cast<std::size_t>(pos)] == 2 * n - m + pos)
      --pos;
    if (pos < 0) break;
    ++cols[static_cast<std::size_t>(pos)];
    for (int j = pos + 1; j < m; ++j)
      cols[static_cast<std::size_t>(j)] = cols[static_cast<std::size_t>(j - 1)] + 1;
  }
  return best;
}

double sampled_gauge_ksup2_n4(const Vec& x, int angles_per_support) {
  const int n = 4;
  const int supports[6][2] = {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}};
  std::vector<Vec> atoms;
  atoms.reserve(static_cast<std::size_t>(6 * angles_per_support));
  for (const auto& sup : supports) {
    for (int a = 0; a < angles_per_support; ++a) {
      double theta = 2.0 * M_PI * a / angles_per_support;
      Vec atom = Vec::Zero(n);
      atom[sup[0]] = std::cos(theta);
      atom[sup[1]] = std::sin(theta);
      atoms.push_back(atom);
    }
  }
  const int p = static_cast<int>(atoms.size());
  Mat A(n, p);
  for (int j = 0; j < p; ++j) A.col(j) = atoms[static_cast<std::size_t>(j)];
  TabResult r = tableau_solve(A, x, Vec::Ones(p));
  return r.status == TabStatus::Optimal
             ? r.objective
             : std::numeric_limits<double>::infinity();
}

double binomial_half_width(double p_hat, long long samples) {
  return 1.96 * std::sqrt(p_hat * (1.0 - p_hat) / static_cast<double>(samples));
}

}  // namespace testsupport
