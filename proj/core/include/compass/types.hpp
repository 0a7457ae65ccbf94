#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>
#include <vector>

namespace compass {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

// ---------------------------------------------------------------------------
// Errors
// ---------------------------------------------------------------------------

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

/// Requested gauge value of a vector outside the linear span of the atoms.
class SpanError : public Error {
 public:
  using Error::Error;
};

class ZeroVector : public Error {
 public:
  using Error::Error;
};

class BudgetExceeded : public Error {
 public:
  using Error::Error;
};

class Infeasible : public Error {
 public:
  using Error::Error;
};

class SolverStall : public Error {
 public:
  using Error::Error;
};

class CertificateError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Throws InvalidArgument if v contains NaN or infinite entries.
void ensure_finite(const Vec& v, const char* what);
void ensure_finite(const Mat& m, const char* what);

/// Shortest decimal string that round-trips the value (std::to_chars).
std::string format_double(double v);

// ---------------------------------------------------------------------------
// SparseModel
// ---------------------------------------------------------------------------

/// The pair (n, k): k-sparse vectors in R^n. Secant differences are 2k-sparse.
struct SparseModel {
  int n = 0;
  int k = 0;

  SparseModel(int n_, int k_);

  int secant_order() const { return 2 * k; }
};

// ---------------------------------------------------------------------------
// Support
// ---------------------------------------------------------------------------

/// Sorted set of coordinate indices inside a fixed ambient dimension.
class Support {
 public:
  Support(std::vector<int> indices, int ambient_dim);

  static Support empty(int ambient_dim);
  static Support full(int ambient_dim);

  const std::vector<int>& indices() const { return indices_; }
  int ambient_dim() const { return ambient_dim_; }
  int size() const { return static_cast<int>(indices_.size()); }
  bool contains(int i) const;
  Support complement() const;

  bool operator==(const Support& other) const = default;

 private:
  std::vector<int> indices_;
  int ambient_dim_ = 0;
};

/// Calls fn(indices) for every size-k subset of {0,..,n-1} in lexicographic
/// order. fn returns false to stop early.
template <typename Fn>
void for_each_subset(int n, int k, Fn&& fn) {
  if (k < 0 || k > n) return;
  std::vector<int> idx(k);
  for (int i = 0; i < k; ++i) idx[i] = i;
  while (true) {
    if (!fn(static_cast<const std::vector<int>&>(idx))) return;
    int pos = k - 1;
    while (pos >= 0 && idx[pos] == n - k + pos) --pos;
    if (pos < 0) return;
    ++idx[pos];
    for (int j = pos + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

/// C(n, k) with saturation at 2^63-1.
long long binomial(int n, int k);

}  // namespace compass
