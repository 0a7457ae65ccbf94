#include "compass/regularizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "compass/lp.hpp"
#include "compass/rng.hpp"

namespace compass {

AtomSet::AtomSet(int n, int k, std::vector<Vec> atoms)
    : n_(n), k_(k), atoms_(std::move(atoms)) {
  if (n_ < 1 || k_ < 1 || k_ > n_) throw InvalidArgument("AtomSet: bad (n, k)");
  if (atoms_.empty()) throw InvalidArgument("AtomSet: no atoms");
  double max_norm = 0.0;
  for (const Vec& a : atoms_) {
    if (a.size() != n_) throw DimensionMismatch("AtomSet: atom length");
    ensure_finite(a, "atom");
    int nnz = 0;
    for (int i = 0; i < n_; ++i)
      if (a[i] != 0.0) ++nnz;
    if (nnz > k_) throw InvalidArgument("AtomSet: atom not k-sparse");
    double norm = a.norm();
    if (norm > 1.0 + 1e-9) throw InvalidArgument("AtomSet: atom norm > 1");
    max_norm = std::max(max_norm, norm);
  }
  if (max_norm < 1.0 - 1e-9)
    throw InvalidArgument("AtomSet: max atom norm must be 1");
  signed_ = Mat(n_, 2 * size());
  for (int j = 0; j < size(); ++j) {
    signed_.col(j) = atoms_[static_cast<std::size_t>(j)];
    signed_.col(size() + j) = -atoms_[static_cast<std::size_t>(j)];
  }
}

AtomSet sample_atoms(const SparseModel& model, int count, std::uint64_t seed) {
  if (count < 2 * model.n)
    throw InvalidArgument("sample_atoms: need count >= 2n for a spanning set");
  std::vector<Vec> atoms;
  atoms.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    Rng rng =
        Rng::substream(seed, static_cast<std::uint64_t>(i), 0, stream::kAtom);
    std::vector<int> idx(static_cast<std::size_t>(model.n));
    std::iota(idx.begin(), idx.end(), 0);
    for (int j = 0; j < model.k; ++j)
      std::swap(idx[j], idx[j + rng.uniform_int(0, model.n - 1 - j)]);
    Vec dir = rng.unit_sphere(model.k);
    Vec atom = Vec::Zero(model.n);
    for (int j = 0; j < model.k; ++j) atom[idx[j]] = dir[j];
    atoms.push_back(std::move(atom));
  }
  return AtomSet(model.n, model.k, std::move(atoms));
}

AtomSet basis_atoms(int n) {
  std::vector<Vec> atoms;
  atoms.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) atoms.push_back(Vec::Unit(n, i));
  return AtomSet(n, 1, std::move(atoms));
}

Regularizer Regularizer::l1() {
  Regularizer r;
  r.kind_ = Kind::L1;
  return r;
}

Regularizer Regularizer::weighted_l1(Vec weights) {
  if (weights.size() < 1) throw InvalidArgument("weighted_l1: empty weights");
  ensure_finite(weights, "weights");
  for (int i = 0; i < weights.size(); ++i)
    if (weights[i] <= 0.0)
      throw InvalidArgument("weighted_l1: weights must be positive");
  Regularizer r;
  r.kind_ = Kind::WeightedL1;
  r.weights_ = std::move(weights);
  return r;
}

Regularizer Regularizer::k_support(int k) {
  if (k < 1) throw InvalidArgument("k_support: k must be >= 1");
  Regularizer r;
  r.kind_ = Kind::KSupport;
  r.ksup_ = k;
  return r;
}

Regularizer Regularizer::atomic(AtomSet atoms) {
  Regularizer r;
  r.kind_ = Kind::FiniteAtomic;
  r.atoms_ = std::make_shared<const AtomSet>(std::move(atoms));
  return r;
}

const Vec& Regularizer::weights() const {
  if (kind_ != Kind::WeightedL1) throw InvalidArgument("not a weighted l1");
  return weights_;
}

int Regularizer::support_size() const {
  if (kind_ != Kind::KSupport) throw InvalidArgument("not a k-support gauge");
  return ksup_;
}

const AtomSet& Regularizer::atom_set() const {
  if (kind_ != Kind::FiniteAtomic) throw InvalidArgument("not an atomic norm");
  return *atoms_;
}

std::string Regularizer::descriptor() const {
  switch (kind_) {
    case Kind::L1:
      return "l1";
    case Kind::WeightedL1: {
      std::string s = "wl1[";
      for (int i = 0; i < weights_.size(); ++i) {
        if (i) s += ';';
        s += format_double(weights_[i]);
      }
      return s + "]";
    }
    case Kind::KSupport:
      return "ksupport[" + std::to_string(ksup_) + "]";
    case Kind::FiniteAtomic:
      return "atomic[" + std::to_string(atoms_->size()) + "]";
  }
  throw Error("unreachable");
}

double k_support_norm(const Vec& x, int k) {
  const int n = static_cast<int>(x.size());
  if (k < 1 || k > n) throw DimensionMismatch("k_support_norm: bad k");
  std::vector<double> a(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) a[static_cast<std::size_t>(i)] = std::abs(x[i]);
  std::sort(a.begin(), a.end(), std::greater<>());
  std::vector<double> suffix(static_cast<std::size_t>(n) + 1, 0.0);
  for (int i = n - 1; i >= 0; --i)
    suffix[static_cast<std::size_t>(i)] =
        suffix[static_cast<std::size_t>(i) + 1] + a[static_cast<std::size_t>(i)];
  double head_sq = 0.0;
  std::vector<double> prefix_sq(static_cast<std::size_t>(k), 0.0);
  for (int h = 0; h < k; ++h) {
    prefix_sq[static_cast<std::size_t>(h)] = head_sq;
    head_sq += a[static_cast<std::size_t>(h)] * a[static_cast<std::size_t>(h)];
  }
  for (int r = 0; r < k; ++r) {
    int h = k - r - 1;  // head length
    double tail = suffix[static_cast<std::size_t>(h)];
    double mean = tail / (r + 1);
    double left = h == 0 ? std::numeric_limits<double>::infinity()
                         : a[static_cast<std::size_t>(h) - 1];
    if (left > mean && mean >= a[static_cast<std::size_t>(h)]) {
      return std::sqrt(prefix_sq[static_cast<std::size_t>(h)] +
                       tail * tail / (r + 1));
    }
  }
  return suffix[0] / std::sqrt(static_cast<double>(k));
}

double evaluate(const Regularizer& R, const Vec& x) {
  ensure_finite(x, "evaluate x");
  switch (R.kind()) {
    case Regularizer::Kind::L1:
      return x.lpNorm<1>();
    case Regularizer::Kind::WeightedL1: {
      if (R.weights().size() != x.size())
        throw DimensionMismatch("evaluate: weights length");
      return R.weights().dot(x.cwiseAbs());
    }
    case Regularizer::Kind::KSupport:
      return k_support_norm(x, R.support_size());
    case Regularizer::Kind::FiniteAtomic: {
      const AtomSet& atoms = R.atom_set();
      if (x.size() != atoms.n()) throw DimensionMismatch("evaluate: x length");
      double scale = x.norm();
      if (scale == 0.0) return 0.0;
      Vec c = Vec::Ones(atoms.signed_matrix().cols());
      lp::Result res = lp::solve_standard(atoms.signed_matrix(), x / scale, c);
      if (res.status == lp::Status::Infeasible)
        throw SpanError("gauge: vector outside the span of the atoms");
      if (res.status != lp::Status::Optimal)
        throw SolverStall("gauge: simplex did not converge");
      return scale * res.objective;
    }
  }
  throw Error("unreachable");
}

Support top_support(const Vec& z, int size) {
  const int n = static_cast<int>(z.size());
  if (size < 0 || size > n) throw InvalidArgument("top_support: bad size");
  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int i, int j) {
    double ai = std::abs(z[i]), aj = std::abs(z[j]);
    if (ai != aj) return ai > aj;
    return i < j;
  });
  order.resize(static_cast<std::size_t>(size));
  return Support(std::move(order), n);
}

Vec project_support(const Vec& z, const Support& S) {
  if (S.ambient_dim() != z.size())
    throw DimensionMismatch("project_support: dimension");
  Vec out = Vec::Zero(z.size());
  for (int i : S.indices()) out[i] = z[i];
  return out;
}

}  // namespace compass
