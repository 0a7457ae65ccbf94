#pragma once

// Independent reference implementations for cross-checking the library.
// Nothing here may call into the library beyond the shared Vec/Mat aliases.

#include <cstdint>
#include <vector>

#include <compass/types.hpp>

namespace testsupport {

using compass::Mat;
using compass::Vec;

enum class TabStatus { Optimal, Infeasible, Unbounded };

struct TabResult {
  TabStatus status = TabStatus::Infeasible;
  double objective = 0.0;
  Vec x;
};

/// Full-tableau two-phase simplex with Bland's rule for
/// min c'x s.t. Ax = b, x >= 0. Deliberately a different algorithm family
/// from the library's revised simplex.
TabResult tableau_solve(const Mat& A, const Vec& b, const Vec& c);

/// Exact l1 model-cone membership from the hand derivation: descent from a
/// large multiple of the best k-support works iff the off-support l1 mass
/// is at most the on-support mass.
bool l1_cone_member(const Vec& z, int k);

/// Weighted analog: the best support takes the k largest w_i |z_i|.
bool wl1_cone_member(const Vec& z, const Vec& w, int k);

/// Two-parameter grid maximization of the tail-to-head energy ratio over
/// the l1 cone at (n=3, k=1), step 1e-4 with two local zoom passes.
double grid_b_l1_31();

/// Same grid, l1-of-tail squared over head squared (the sufficient-side
/// objective at k=1).
double grid_d_l1_31();

struct McEstimate {
  double estimate = 0.0;
  double half_width = 0.0;
};

/// Monte-Carlo estimate of the uniform non-membership fraction for l1 with
/// std::mt19937_64 sampling, independent of the library's RNG and tests.
McEstimate mc_au_l1(int n, int k, long long samples, std::uint64_t seed);

/// Same sampler for a weighted l1 cone.
McEstimate mc_au_wl1(const Vec& w, int k, long long samples,
                     std::uint64_t seed);

/// min ||x||_1 s.t. Mx = y by enumerating basic feasible points of the
/// split-variable polytope. Feasible instances only; returns the optimum.
double vertex_min_l1(const Mat& M, const Vec& y);

/// Gauge of x with respect to a dense angular sampling of 2-sparse unit
/// atoms (n = 4), solved with the tableau oracle. Upper bound on the
/// k-support norm, tight as the sampling grows.
double sampled_gauge_ksup2_n4(const Vec& x, int angles_per_support);

double binomial_half_width(double p_hat, long long samples);

}  // namespace testsupport
