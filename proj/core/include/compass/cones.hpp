#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "compass/regularizer.hpp"
#include "compass/types.hpp"

namespace compass {

/// Additive slack in every descent comparison, so boundary membership does
/// not flip on rounding.
inline constexpr double kDescentSlack = 1e-10;

struct RayOptions {
  double t_ray = 1e6;
  double eps_ray = 1e-7;
  int n_starts = 16;   // restarts per support when k >= 3
  int angle_grid = 64; // circle resolution when k == 2
  std::uint64_t seed = 0x5eedbea7u;
  // directions tried first on any support containing them; lets a caller
  // certify a witness it constructed without waiting on the search
  std::vector<Vec> probes;
};

struct ComplianceReport {
  double estimate = 0.0;
  double half_width = 0.0;
  long long samples = 0;
  std::uint64_t seed = 0;
  std::string regularizer_descriptor;
};

/// R(x + z) <= R(x), with kDescentSlack.
bool in_descent_set(const Regularizer& R, const Vec& x, const Vec& z);

/// Reusable membership test for the model descent cone: does some k-sparse
/// x satisfy R(x+z) <= R(x)? Closed-form route for l1, weighted l1, and
/// atomic sets whose atoms are all 1-sparse; ray search otherwise.
class DescentConeTest {
 public:
  DescentConeTest(Regularizer R, SparseModel model, RayOptions opts = {});

  bool member(const Vec& z) const;
  const Regularizer& regularizer() const { return R_; }
  const SparseModel& model() const { return model_; }

 private:
  enum class Path { TopSupport, WeightedTopSupport, Ray };
  Regularizer R_;
  SparseModel model_;
  RayOptions opts_;
  Path path_ = Path::Ray;
  Vec weights_;
  std::vector<char> blocked_;  // axes carrying no atom (1-sparse atomic route)
};

bool in_model_descent_cone(const Regularizer& R, const SparseModel& model,
                           const Vec& z);

/// Membership by minimizing R(t u + z) - t R(u) over k-supports and unit
/// directions u at large t; for finite atomic norms the settled limit is
/// computed by a sensitivity program instead of literal large-t evaluation.
bool ray_membership(const Regularizer& R, const SparseModel& model,
                    const Vec& z, const RayOptions& opts = {});

/// i.i.d. uniform unit vectors; sample i depends only on (seed, i).
std::vector<Vec> sample_sphere(int n, long long count, std::uint64_t seed);

/// 1 minus the fraction of sphere directions inside the model descent cone.
ComplianceReport estimate_A_uniform(const Regularizer& R,
                                    const SparseModel& model,
                                    long long samples, std::uint64_t seed,
                                    int workers = 0);

/// 1 minus the fraction of sphere directions whose ray meets the descent
/// set of a fixed model point x.
ComplianceReport estimate_A_point(const Regularizer& R,
                                  const SparseModel& model, const Vec& x,
                                  long long samples, std::uint64_t seed,
                                  int workers = 0);

/// min over representative model points of estimate_A_point, sharing one
/// sphere sample stream, so the result is never below estimate_A_uniform
/// at the same (samples, seed).
ComplianceReport estimate_A_nonuniform(const Regularizer& R,
                                       const SparseModel& model,
                                       long long samples, std::uint64_t seed,
                                       int workers = 0);

/// The model points scanned by estimate_A_nonuniform: symmetry collapses
/// l1 to a single point, weighted-l1-like norms enumerate supports, the
/// k-support gauge samples magnitude profiles, finite atomic norms sample
/// model points.
std::vector<Vec> nonuniform_representatives(const Regularizer& R,
                                            const SparseModel& model,
                                            std::uint64_t seed);

}  // namespace compass
