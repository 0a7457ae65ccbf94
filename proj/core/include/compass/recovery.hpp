#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "compass/regularizer.hpp"
#include "compass/rip.hpp"
#include "compass/types.hpp"

namespace compass {

struct RecoveryInstance {
  MeasurementOperator M;
  Vec y;
  std::optional<Vec> x0;
  Regularizer R;

  RecoveryInstance(MeasurementOperator op, Vec rhs, std::optional<Vec> truth,
                   Regularizer reg);
};

/// Norm minimization over the affine feasible set: arg min R(x) s.t. Mx = y.
/// Redundant rows are dropped internally; inconsistent rows raise Infeasible.
Vec solve(const RecoveryInstance& instance);

struct Certificate {
  enum class Kind { Uniform, Nonuniform };
  Kind kind = Kind::Uniform;
  bool holds = false;
  Vec violating_direction;  // empty when absent
  double margin = 0.0;
};

/// Uniform recovery test: no kernel vector may carry at least as much
/// weighted mass on any k-support as off it. Weighted forms only (L1 or
/// WeightedL1).
Certificate nsp_certificate(const MeasurementOperator& M,
                            const SparseModel& model, const Regularizer& R,
                            long long budget = 1000000);

/// Point recovery test at x0: no kernel ray may descend (or tie) the norm
/// from x0. Weighted forms only; ties count as failures.
Certificate nonuniform_certificate(const MeasurementOperator& M, const Vec& x0,
                                   const Regularizer& R);

struct PhaseRow {
  int m = 0;
  long long trials = 0;
  long long successes = 0;
  double rate = 0.0;
};

struct PhaseTable {
  SparseModel model;
  std::string regularizer;
  std::uint64_t seed = 0;
  std::vector<PhaseRow> rows;
};

/// Gaussian sampling experiment: per m, draw M with N(0, 1/m) entries and a
/// unit k-sparse x0, solve, and count exact recoveries (distance <= 1e-5).
PhaseTable phase_transition(const SparseModel& model, const Regularizer& R,
                            const std::vector<int>& m_range, long long trials,
                            std::uint64_t seed, int workers = 0);

}  // namespace compass
