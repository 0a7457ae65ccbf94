#include "compass/types.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>

namespace compass {

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc()) throw Error("format_double failed");
  return std::string(buf, ptr);
}

void ensure_finite(const Vec& v, const char* what) {
  if (!v.allFinite()) {
    throw InvalidArgument(std::string(what) + ": non-finite entries");
  }
}

void ensure_finite(const Mat& m, const char* what) {
  if (!m.allFinite()) {
    throw InvalidArgument(std::string(what) + ": non-finite entries");
  }
}

SparseModel::SparseModel(int n_, int k_) : n(n_), k(k_) {
  if (k < 1) throw InvalidArgument("SparseModel: k must be >= 1");
  if (n < 2 * k) {
    throw InvalidArgument("SparseModel: requires n >= 2k (got n=" +
                          std::to_string(n) + ", k=" + std::to_string(k) + ")");
  }
}

Support::Support(std::vector<int> indices, int ambient_dim)
    : indices_(std::move(indices)), ambient_dim_(ambient_dim) {
  if (ambient_dim_ < 0) throw InvalidArgument("Support: negative dimension");
  std::sort(indices_.begin(), indices_.end());
  for (std::size_t i = 0; i < indices_.size(); ++i) {
    if (indices_[i] < 0 || indices_[i] >= ambient_dim_) {
      throw InvalidArgument("Support: index out of range");
    }
    if (i > 0 && indices_[i] == indices_[i - 1]) {
      throw InvalidArgument("Support: duplicate index");
    }
  }
}

Support Support::empty(int ambient_dim) { return Support({}, ambient_dim); }

Support Support::full(int ambient_dim) {
  std::vector<int> idx(ambient_dim);
  for (int i = 0; i < ambient_dim; ++i) idx[i] = i;
  return Support(std::move(idx), ambient_dim);
}

bool Support::contains(int i) const {
  return std::binary_search(indices_.begin(), indices_.end(), i);
}

Support Support::complement() const {
  std::vector<int> rest;
  rest.reserve(ambient_dim_ - size());
  for (int i = 0; i < ambient_dim_; ++i) {
    if (!contains(i)) rest.push_back(i);
  }
  return Support(std::move(rest), ambient_dim_);
}

long long binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  long long result = 1;
  const long long cap = std::numeric_limits<long long>::max();
  for (int i = 1; i <= k; ++i) {
    // result * (n - k + i) / i is exact at every step
    long long num = n - k + i;
    if (result > cap / num) return cap;
    result = result * num / i;
  }
  return result;
}

}  // namespace compass
