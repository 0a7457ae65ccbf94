#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "compass/types.hpp"

namespace compass {

/// Finite set of k-sparse atoms with max Euclidean norm 1. The gauge of
/// conv(±atoms) is the induced atomic norm.
class AtomSet {
 public:
  AtomSet(int n, int k, std::vector<Vec> atoms);
  int n() const { return n_; }
  int k() const { return k_; }
  int size() const { return static_cast<int>(atoms_.size()); }
  const Vec& atom(int i) const { return atoms_[static_cast<std::size_t>(i)]; }
  const std::vector<Vec>& atoms() const { return atoms_; }
  /// n x 2p matrix [A, -A]; columns are the signed atoms.
  const Mat& signed_matrix() const { return signed_; }

 private:
  int n_;
  int k_;
  std::vector<Vec> atoms_;
  Mat signed_;
};

/// `count` atoms, each on a uniformly chosen k-subset with a uniform
/// direction on that subset's unit sphere. Deterministic given seed.
AtomSet sample_atoms(const SparseModel& model, int count, std::uint64_t seed);

/// Atoms {e_i}; with the implied sign symmetry the gauge is the l1 norm.
AtomSet basis_atoms(int n);

class Regularizer {
 public:
  enum class Kind { L1, WeightedL1, KSupport, FiniteAtomic };

  static Regularizer l1();
  static Regularizer weighted_l1(Vec weights);
  static Regularizer k_support(int k);
  static Regularizer atomic(AtomSet atoms);

  Kind kind() const { return kind_; }
  const Vec& weights() const;
  int support_size() const;
  const AtomSet& atom_set() const;
  /// CSV-safe tag: "l1", "wl1[1;1;10]", "ksupport[2]", "atomic[16]"
  std::string descriptor() const;

 private:
  Regularizer() = default;
  Kind kind_ = Kind::L1;
  Vec weights_;
  int ksup_ = 0;
  std::shared_ptr<const AtomSet> atoms_;
};

/// R(x). Closed form for L1/WeightedL1/KSupport; gauge LP for FiniteAtomic.
double evaluate(const Regularizer& R, const Vec& x);

/// Gauge of the convex hull of unit-norm k-sparse vectors, by the sorted
/// coordinate characterization: with a = |x| sorted descending, the unique
/// r in {0..k-1} with a[k-r-2] > tail/(r+1) >= a[k-r-1] (head index -1
/// reads as +inf, tail = sum from k-r-1 on) gives
/// value^2 = sum of head squares + tail^2/(r+1).
double k_support_norm(const Vec& x, int k);

/// Indices of the `size` largest entries by absolute value, ties broken
/// toward the lowest index.
Support top_support(const Vec& z, int size);

/// Copy of z with entries outside S zeroed.
Vec project_support(const Vec& z, const Support& S);

}  // namespace compass
