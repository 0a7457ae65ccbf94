#include "compass/recovery.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <utility>

#include "compass/lp.hpp"
#include "compass/parallel.hpp"
#include "compass/rng.hpp"

namespace compass {
namespace {

constexpr double kFeasTol = 1e-8;
constexpr double kMarginTol = 1e-9;
constexpr double kSuccessTol = 1e-5;

Vec certificate_weights(const Regularizer& R, int n) {
  switch (R.kind()) {
    case Regularizer::Kind::L1:
      return Vec::Ones(n);
    case Regularizer::Kind::WeightedL1:
      if (R.weights().size() != n)
        throw DimensionMismatch("weights length vs operator");
      return R.weights();
    default:
      throw InvalidArgument("certificate needs an explicit weight form");
  }
}

// independent rows of M by modified Gram-Schmidt; unselected rows must stay
// consistent with their right-hand side
struct ReducedSystem {
  Mat M;
  Vec y;
};

ReducedSystem reduce_rows(const Mat& M, const Vec& y) {
  const int m = static_cast<int>(M.rows());
  const double scale = std::max(1.0, M.cwiseAbs().maxCoeff());
  std::vector<int> picked;
  std::vector<Vec> basis;  // orthonormalized picked rows
  std::vector<int> rest;
  for (int i = 0; i < m; ++i) {
    Vec r = M.row(i).transpose();
    for (const Vec& b : basis) r -= r.dot(b) * b;
    if (r.norm() > 1e-10 * scale) {
      basis.push_back(r / r.norm());
      picked.push_back(i);
    } else {
      rest.push_back(i);
    }
  }
  ReducedSystem out;
  out.M.resize(static_cast<Eigen::Index>(picked.size()), M.cols());
  out.y.resize(static_cast<Eigen::Index>(picked.size()));
  for (std::size_t j = 0; j < picked.size(); ++j) {
    out.M.row(static_cast<Eigen::Index>(j)) = M.row(picked[j]);
    out.y[static_cast<Eigen::Index>(j)] = y[picked[j]];
  }
  if (!rest.empty() && !picked.empty()) {
    Eigen::ColPivHouseholderQR<Mat> qr(out.M.transpose());
    for (int i : rest) {
      Vec coef = qr.solve(Vec(M.row(i).transpose()));
      double expect = coef.dot(out.y);
      if (std::abs(expect - y[i]) > kFeasTol * (1.0 + std::abs(y[i])))
        throw Infeasible("right-hand side outside the operator range");
    }
  } else if (picked.empty()) {
    for (int i = 0; i < m; ++i)
      if (std::abs(y[i]) > kFeasTol)
        throw Infeasible("right-hand side outside the operator range");
  }
  return out;
}

Vec solve_weighted(const Mat& M, const Vec& y, const Vec& w) {
  const int n = static_cast<int>(M.cols());
  Mat A(M.rows(), 2 * n);
  A.leftCols(n) = M;
  A.rightCols(n) = -M;
  Vec c(2 * n);
  c.head(n) = w;
  c.tail(n) = w;
  lp::Result res = lp::solve_standard(A, y, c);
  if (res.status == lp::Status::Infeasible)
    throw Infeasible("right-hand side outside the operator range");
  if (res.status != lp::Status::Optimal)
    throw SolverStall("norm minimization did not converge");
  return res.x.head(n) - res.x.tail(n);
}

Vec solve_atomic(const Mat& M, const Vec& y, const AtomSet& atoms) {
  const Mat& S = atoms.signed_matrix();
  Mat A = M * S;
  Vec c = Vec::Ones(A.cols());
  lp::Result res = lp::solve_standard(A, y, c);
  if (res.status == lp::Status::Infeasible)
    throw Infeasible("no finite-gauge point satisfies the measurements");
  if (res.status != lp::Status::Optimal)
    throw SolverStall("gauge minimization did not converge");
  return S * res.x;
}

std::vector<int> nonzero_indices(const Vec& x) {
  std::vector<int> idx;
  for (int i = 0; i < x.size(); ++i)
    if (x[i] != 0.0) idx.push_back(i);
  return idx;
}

}  // namespace

RecoveryInstance::RecoveryInstance(MeasurementOperator op, Vec rhs,
                                   std::optional<Vec> truth, Regularizer reg)
    : M(std::move(op)), y(std::move(rhs)), x0(std::move(truth)),
      R(std::move(reg)) {
  if (y.size() != M.rows()) throw DimensionMismatch("y length vs operator");
  ensure_finite(y, "y");
  if (x0) {
    if (x0->size() != M.cols())
      throw DimensionMismatch("x0 length vs operator");
    ensure_finite(*x0, "x0");
    if ((M.matrix * *x0 - y).norm() > 1e-12 * (1.0 + y.norm()))
      throw InvalidArgument("x0 does not reproduce the measurements");
  }
}

Vec solve(const RecoveryInstance& instance) {
  ReducedSystem sys = reduce_rows(instance.M.matrix, instance.y);
  if (sys.M.rows() == 0) return Vec::Zero(instance.M.cols());
  Vec x;
  switch (instance.R.kind()) {
    case Regularizer::Kind::L1:
      x = solve_weighted(sys.M, sys.y, Vec::Ones(sys.M.cols()));
      break;
    case Regularizer::Kind::WeightedL1:
      if (instance.R.weights().size() != sys.M.cols())
        throw DimensionMismatch("weights length vs operator");
      x = solve_weighted(sys.M, sys.y, instance.R.weights());
      break;
    case Regularizer::Kind::FiniteAtomic:
      if (instance.R.atom_set().n() != sys.M.cols())
        throw DimensionMismatch("atom dimension vs operator");
      x = solve_atomic(sys.M, sys.y, instance.R.atom_set());
      break;
    case Regularizer::Kind::KSupport:
      throw InvalidArgument("norm minimization not available for this form");
  }
  if ((instance.M.matrix * x - instance.y).norm() >
      kFeasTol * (1.0 + instance.y.norm()))
    throw SolverStall("solution misses the feasibility tolerance");
  return x;
}

Certificate nsp_certificate(const MeasurementOperator& M,
                            const SparseModel& model, const Regularizer& R,
                            long long budget) {
  if (M.cols() != model.n)
    throw DimensionMismatch("operator columns vs model dimension");
  Vec w = certificate_weights(R, model.n);
  Certificate cert;
  cert.kind = Certificate::Kind::Uniform;

  Eigen::FullPivLU<Mat> lu(M.matrix);
  const int d = static_cast<int>(lu.dimensionOfKernel());
  if (d == 0) {
    cert.holds = true;
    cert.margin = 1.0;
    return cert;
  }
  Mat K = lu.kernel();

  if (double(binomial(model.n, model.k)) * double(1 << model.k) >
      double(budget))
    throw BudgetExceeded("support and sign enumeration exceeds budget");

  double worst = -std::numeric_limits<double>::infinity();
  Vec worst_dir;
  bool unbounded = false;
  for_each_subset(model.n, model.k, [&](const std::vector<int>& T) {
    std::vector<int> comp;
    for (int i = 0; i < model.n; ++i)
      if (!std::binary_search(T.begin(), T.end(), i)) comp.push_back(i);
    const int nc = static_cast<int>(comp.size());

    // kernel direction with no off-support mass beats every program
    {
      Mat off(nc, d);
      for (int r = 0; r < nc; ++r) off.row(r) = K.row(comp[static_cast<std::size_t>(r)]);
      Eigen::FullPivLU<Mat> off_lu(off);
      if (off_lu.dimensionOfKernel() > 0) {
        Vec beta = off_lu.kernel().col(0);
        Vec v = K * beta;
        if (v.norm() > 1e-10) {
          unbounded = true;
          worst_dir = v / v.norm();
          return false;
        }
      }
    }

    for (unsigned mask = 0; mask < (1u << model.k); ++mask) {
      lp::Problem built(d + nc);  // alpha free, t >= 0
      Vec obj = Vec::Zero(d + nc);
      for (int j = 0; j < d; ++j) {
        double coef = 0.0;
        for (int t = 0; t < model.k; ++t) {
          int i = T[static_cast<std::size_t>(t)];
          double sign = (mask >> t) & 1u ? -1.0 : 1.0;
          coef -= w[i] * sign * K(i, j);
        }
        obj[j] = coef;
      }
      built.set_objective(obj);
      for (int j = 0; j < d; ++j) built.set_free(j);
      for (int r = 0; r < nc; ++r) {
        int i = comp[static_cast<std::size_t>(r)];
        Vec row = Vec::Zero(d + nc);
        row.head(d) = K.row(i).transpose();
        row[d + r] = -1.0;
        built.add_row(row, lp::Rel::Le, 0.0);
        row.head(d) = -K.row(i).transpose();
        built.add_row(row, lp::Rel::Le, 0.0);
      }
      Vec cap = Vec::Zero(d + nc);
      for (int r = 0; r < nc; ++r) cap[d + r] = w[comp[static_cast<std::size_t>(r)]];
      built.add_row(cap, lp::Rel::Le, 1.0);
      lp::Result res = built.solve();
      if (res.status == lp::Status::Unbounded) {
        unbounded = true;
        return false;
      }
      if (res.status != lp::Status::Optimal)
        throw SolverStall("support program did not converge");
      double val = -res.objective;
      if (val > worst) {
        worst = val;
        Vec v = K * res.x.head(d);
        worst_dir = v.norm() > 1e-12 ? Vec(v / v.norm()) : Vec();
      }
    }
    return true;
  });

  if (unbounded) {
    cert.holds = false;
    cert.margin = -std::numeric_limits<double>::infinity();
    cert.violating_direction = worst_dir;
    return cert;
  }
  cert.margin = 1.0 - worst;
  cert.holds = worst < 1.0 - kMarginTol;
  if (worst >= 1.0) cert.violating_direction = worst_dir;
  return cert;
}

Certificate nonuniform_certificate(const MeasurementOperator& M, const Vec& x0,
                                   const Regularizer& R) {
  if (x0.size() != M.cols()) throw DimensionMismatch("x0 length vs operator");
  ensure_finite(x0, "x0");
  const int n = M.cols();
  Vec w = certificate_weights(R, n);
  Certificate cert;
  cert.kind = Certificate::Kind::Nonuniform;

  std::vector<int> T = nonzero_indices(x0);
  std::vector<int> comp;
  for (int i = 0; i < n; ++i)
    if (x0[i] == 0.0) comp.push_back(i);
  const int kT = static_cast<int>(T.size());
  const int nc = static_cast<int>(comp.size());

  if (kT > 0) {
    Mat MT(M.rows(), kT);
    for (int j = 0; j < kT; ++j) MT.col(j) = M.matrix.col(T[static_cast<std::size_t>(j)]);
    Eigen::FullPivLU<Mat> lu(MT);
    if (lu.rank() < kT) {
      // a kernel vector lives on the support, so x0 ties with a neighbor
      Vec beta = lu.kernel().col(0);
      Vec v = Vec::Zero(n);
      for (int j = 0; j < kT; ++j) v[T[static_cast<std::size_t>(j)]] = beta[j];
      double peak = v.cwiseAbs().maxCoeff();
      double low = std::numeric_limits<double>::infinity();
      for (int i : T) low = std::min(low, std::abs(x0[i]));
      double lam = 0.5 * low / peak;
      double drift = 0.0;
      for (int i : T) drift += w[i] * (x0[i] > 0.0 ? 1.0 : -1.0) * v[i];
      if (drift > 0.0) v = -v;
      cert.holds = false;
      cert.margin = 0.0;
      cert.violating_direction = lam * v;
      return cert;
    }
  }

  const int m = static_cast<int>(M.rows());
  lp::Problem prob(n + nc);  // z free, t >= 0
  Vec obj = Vec::Zero(n + nc);
  for (int i : T) obj[i] = w[i] * (x0[i] > 0.0 ? 1.0 : -1.0);
  prob.set_objective(obj);
  for (int j = 0; j < n; ++j) prob.set_free(j);
  for (int r = 0; r < m; ++r) {
    Vec row = Vec::Zero(n + nc);
    row.head(n) = M.matrix.row(r).transpose();
    prob.add_row(row, lp::Rel::Eq, 0.0);
  }
  for (int r = 0; r < nc; ++r) {
    int i = comp[static_cast<std::size_t>(r)];
    Vec row = Vec::Zero(n + nc);
    row[i] = 1.0;
    row[n + r] = -1.0;
    prob.add_row(row, lp::Rel::Le, 0.0);
    row[i] = -1.0;
    prob.add_row(row, lp::Rel::Le, 0.0);
  }
  Vec cap = Vec::Zero(n + nc);
  for (int r = 0; r < nc; ++r) cap[n + r] = w[comp[static_cast<std::size_t>(r)]];
  prob.add_row(cap, lp::Rel::Le, 1.0);

  lp::Result res = prob.solve();
  if (res.status != lp::Status::Optimal)
    throw SolverStall("descent program did not converge");
  double eta = -res.objective;
  cert.margin = 1.0 - eta;
  cert.holds = eta < 1.0 - kMarginTol;
  if (eta >= 1.0) {
    Vec z = res.x.head(n);
    double peak = 0.0;
    for (int i : T) peak = std::max(peak, std::abs(z[i]));
    double low = std::numeric_limits<double>::infinity();
    for (int i : T) low = std::min(low, std::abs(x0[i]));
    double lam = T.empty() ? 1.0 : std::min(1.0, 0.5 * low / peak);
    cert.violating_direction = lam * z;
  }
  return cert;
}

PhaseTable phase_transition(const SparseModel& model, const Regularizer& R,
                            const std::vector<int>& m_range, long long trials,
                            std::uint64_t seed, int workers) {
  if (trials < 10) throw InvalidArgument("phase experiment needs >= 10 trials");
  for (int m : m_range)
    if (m < 1) throw InvalidArgument("measurement counts must be positive");
  PhaseTable table{model, R.descriptor(), seed, {}};
  for (int m : m_range) {
    std::atomic<long long> successes{0};
    parallel_for(trials, resolve_workers(workers), [&](std::int64_t t) {
      Rng mrng = Rng::substream(seed, static_cast<std::uint64_t>(m),
                                static_cast<std::uint64_t>(t), stream::kMatrix);
      Mat M(m, model.n);
      for (int r = 0; r < m; ++r)
        M.row(r) =
            (mrng.gaussian_vector(model.n) / std::sqrt(double(m))).transpose();
      Rng srng = Rng::substream(seed, static_cast<std::uint64_t>(m),
                                static_cast<std::uint64_t>(t), stream::kSignal);
      std::vector<int> idx(static_cast<std::size_t>(model.n));
      for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = static_cast<int>(i);
      for (int j = 0; j < model.k; ++j) {
        int swap = srng.uniform_int(j, model.n - 1);
        std::swap(idx[static_cast<std::size_t>(j)], idx[static_cast<std::size_t>(swap)]);
      }
      Vec dir = srng.unit_sphere(model.k);
      Vec x0 = Vec::Zero(model.n);
      for (int j = 0; j < model.k; ++j) x0[idx[static_cast<std::size_t>(j)]] = dir[j];
      Vec y = M * x0;
      try {
        RecoveryInstance inst(MeasurementOperator(M), y, x0, R);
        Vec x = solve(inst);
        if ((x - x0).norm() <= kSuccessTol)
          successes.fetch_add(1, std::memory_order_relaxed);
      } catch (const Error&) {
        // a failed solve counts as a failed recovery
      }
    });
    PhaseRow row;
    row.m = m;
    row.trials = trials;
    row.successes = successes.load();
    row.rate = double(row.successes) / double(trials);
    table.rows.push_back(row);
  }
  return table;
}

}  // namespace compass
