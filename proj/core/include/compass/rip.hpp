#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "compass/cones.hpp"
#include "compass/regularizer.hpp"
#include "compass/types.hpp"

namespace compass {

struct MeasurementOperator {
  Mat matrix;
  explicit MeasurementOperator(Mat m);
  int rows() const { return static_cast<int>(matrix.rows()); }
  int cols() const { return static_cast<int>(matrix.cols()); }
};

struct RipResult {
  double delta = 0.0;
  Support witness_support = Support::empty(0);
  Vec witness_vector;
};

/// Worst |lambda - 1| of the column Gram matrix over all 2k-supports, with
/// the attaining unit eigenvector. Throws BudgetExceeded when the support
/// count passes `budget`.
RipResult rip_constant(const MeasurementOperator& M, const SparseModel& model,
                       long long budget = 1000000);

/// ||z_{T2}||^2 / ||z||^2 with T2 the top 2k coordinates: the closed form
/// of the deviation constant of I minus the projector onto z.
double rip_projector(const Vec& z, const SparseModel& model);

struct FunctionalResult {
  double value = 0.0;
  Vec argmax_z;
  Vec witness_model_point;  // model point certifying membership, may be empty
  long long restarts_used = 0;
  std::string certificate;  // "analytic" or "search"
};

/// Upper estimate of the infimum of rip_projector over the model descent
/// cone, by multi-start search constrained by cone membership.
FunctionalResult delta_nec(const Regularizer& R, const SparseModel& model,
                           long long search_budget, std::uint64_t seed);

/// Lower estimate of sup ||z_{T2^c}||^2 / ||z_{T2}||^2 over the cone.
FunctionalResult b_sigma(const Regularizer& R, const SparseModel& model,
                         long long search_budget, std::uint64_t seed);

/// Lower estimate of sup (k-support norm of z_{T^c})^2 / ||z_T||^2 over
/// the cone, T the top k coordinates.
FunctionalResult d_sigma(const Regularizer& R, const SparseModel& model,
                         long long search_budget, std::uint64_t seed);

struct SandwichReport {
  std::vector<double> deltas;   // delta(M) per supplied operator
  double min_delta = 0.0;       // empirical upper bound on the sharp constant
  int arg_min = -1;
  double delta_nec_value = 0.0;
  bool consistent = false;      // min_delta <= delta_nec + 1e-6
};

/// Every operator must have a kernel direction inside the cone (certified
/// here; CertificateError otherwise). Reports min delta(M) over the list
/// against delta_nec; the caller keeps the bound tight by including the
/// projector complement of a b_sigma witness.
SandwichReport verify_sandwich(const Regularizer& R, const SparseModel& model,
                               const std::vector<MeasurementOperator>& Ms,
                               long long search_budget, std::uint64_t seed);

}  // namespace compass
