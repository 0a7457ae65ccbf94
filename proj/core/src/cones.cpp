#include "compass/cones.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <utility>

#include "compass/lp.hpp"
#include "compass/parallel.hpp"
#include "compass/rng.hpp"

namespace compass {
namespace {

constexpr double kNumericDiffStep = 1e-7;
constexpr double kNumericSlack = 1e-9;
constexpr int kMaxRepresentatives = 64;
constexpr long long kSupportBudget = 200000;
const double kInf = std::numeric_limits<double>::infinity();

std::vector<int> weighted_top(const Vec& w, const Vec& z, int k) {
  std::vector<int> order(static_cast<std::size_t>(z.size()));
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int i, int j) {
    double a = w[i] * std::abs(z[i]), b = w[j] * std::abs(z[j]);
    if (a != b) return a > b;
    return i < j;
  });
  order.resize(static_cast<std::size_t>(k));
  return order;
}

// ||z_{T^c}||_w - ||z_T||_w over the best k-support T
double weighted_cone_margin(const Vec& w, const Vec& z, int k) {
  double total = 0.0;
  for (int i = 0; i < z.size(); ++i) total += w[i] * std::abs(z[i]);
  double head = 0.0;
  for (int i : weighted_top(w, z, k)) head += w[i] * std::abs(z[i]);
  return total - 2.0 * head;
}

// gauge weights when every atom is 1-sparse: w_i = 1 / (largest magnitude
// carried on axis i); axes with no atom are flagged instead
bool one_sparse_weights(const AtomSet& atoms, Vec& w, std::vector<char>& blocked) {
  for (const Vec& a : atoms.atoms()) {
    int nnz = 0;
    for (int i = 0; i < a.size(); ++i)
      if (a[i] != 0.0) ++nnz;
    if (nnz > 1) return false;
  }
  const int n = atoms.n();
  Vec peak = Vec::Zero(n);
  for (const Vec& a : atoms.atoms())
    for (int i = 0; i < n; ++i) peak[i] = std::max(peak[i], std::abs(a[i]));
  w = Vec::Ones(n);
  blocked.assign(static_cast<std::size_t>(n), 0);
  for (int i = 0; i < n; ++i) {
    if (peak[i] > 0.0)
      w[i] = 1.0 / peak[i];
    else
      blocked[static_cast<std::size_t>(i)] = 1;
  }
  return true;
}

// settled limit of R(t u + z) - t R(u) for the atomic gauge: the value of
//   max <y,z>  s.t.  |<a_j, y>| <= 1,  <y,u> = R(u)
// obtained through its standard-form dual (n rows instead of 2p+1)
double atomic_ray_limit(const AtomSet& atoms, const Vec& u, double Ru,
                        const Vec& z) {
  const Mat& S = atoms.signed_matrix();
  const int p2 = static_cast<int>(S.cols());
  lp::Problem prob(p2 + 1);
  Vec c(p2 + 1);
  c.head(p2).setOnes();
  c[p2] = Ru;
  prob.set_objective(c);
  prob.set_free(p2);
  for (int i = 0; i < atoms.n(); ++i) {
    Vec row(p2 + 1);
    row.head(p2) = S.row(i);
    row[p2] = u[i];
    prob.add_row(row, lp::Rel::Eq, z[i]);
  }
  lp::Result res = prob.solve();
  if (res.status == lp::Status::Infeasible) return kInf;  // z leaves the span
  if (res.status != lp::Status::Optimal)
    throw SolverStall("ray limit program did not converge");
  return res.objective;
}

Vec embed(const std::vector<int>& T, const Vec& dir, int n) {
  Vec u = Vec::Zero(n);
  for (std::size_t j = 0; j < T.size(); ++j)
    u[T[j]] = dir[static_cast<Eigen::Index>(j)];
  return u;
}

double ray_value(const Regularizer& R, const Vec& u, const Vec& z,
                 const RayOptions& o) {
  if (R.kind() == Regularizer::Kind::FiniteAtomic)
    return atomic_ray_limit(R.atom_set(), u, evaluate(R, u), z);
  return evaluate(R, o.t_ray * u + z) - o.t_ray * evaluate(R, u);
}

std::uint64_t hash_support(const std::vector<int>& T) {
  std::uint64_t h = 0x51ab1e5eedULL;
  for (int i : T) h = mix64(h ^ static_cast<std::uint64_t>(i + 1));
  return h;
}

template <typename Fn>
double golden_min(Fn&& f, double lo, double hi, int iters) {
  const double g = 0.6180339887498949;
  double a = lo, b = hi;
  double x1 = b - g * (b - a), x2 = a + g * (b - a);
  double f1 = f(x1), f2 = f(x2);
  for (int it = 0; it < iters; ++it) {
    if (f1 < f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - g * (b - a);
      f1 = f(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + g * (b - a);
      f2 = f(x2);
    }
  }
  return std::min(f1, f2);
}

// min of the ray value over unit directions on one support (early exit
// once a value clears eps_ray)
double support_ray_min(const Regularizer& R, const std::vector<int>& T,
                       const Vec& z, const RayOptions& o) {
  const int n = static_cast<int>(z.size());
  const int k = static_cast<int>(T.size());
  double probe_best = kInf;
  for (const Vec& p : o.probes) {
    if (static_cast<int>(p.size()) != n) continue;
    bool fits = true;
    for (int i = 0; i < n && fits; ++i)
      if (p[i] != 0.0 && !std::binary_search(T.begin(), T.end(), i))
        fits = false;
    if (!fits) continue;
    Vec dir(k);
    for (int j = 0; j < k; ++j) dir[j] = p[T[static_cast<std::size_t>(j)]];
    double norm = dir.norm();
    if (norm < 1e-12) continue;
    dir /= norm;
    probe_best = std::min(probe_best, ray_value(R, embed(T, dir, n), z, o));
    if (probe_best <= o.eps_ray) return probe_best;
  }
  if (k == 1) {
    Vec dir(1);
    dir[0] = 1.0;
    double best = std::min(probe_best, ray_value(R, embed(T, dir, n), z, o));
    if (best <= o.eps_ray) return best;
    dir[0] = -1.0;
    return std::min(best, ray_value(R, embed(T, dir, n), z, o));
  }
  if (k == 2) {
    auto phi = [&](double theta) {
      Vec dir(2);
      dir[0] = std::cos(theta);
      dir[1] = std::sin(theta);
      return ray_value(R, embed(T, dir, n), z, o);
    };
    const double two_pi = 2.0 * std::numbers::pi;
    double best = probe_best, best_theta = 0.0;
    for (int g = 0; g < o.angle_grid; ++g) {
      double theta = two_pi * g / o.angle_grid;
      double v = phi(theta);
      if (v < best) {
        best = v;
        best_theta = theta;
      }
      if (best <= o.eps_ray) return best;
    }
    double delta = two_pi / o.angle_grid;
    return std::min(best,
                    golden_min(phi, best_theta - delta, best_theta + delta, 48));
  }
  double overall = probe_best;
  for (int r = 0; r < o.n_starts; ++r) {
    Rng rng = Rng::substream(o.seed, static_cast<std::uint64_t>(r),
                             hash_support(T), stream::kRestart);
    Vec dir = rng.unit_sphere(k);
    double cur = ray_value(R, embed(T, dir, n), z, o);
    double step = 0.5;
    int guard = 0;
    while (step > 1e-6 && guard++ < 500) {
      bool improved = false;
      for (int j = 0; j < k; ++j) {
        for (double s : {1.0, -1.0}) {
          Vec cand = dir;
          cand[j] += s * step;
          double norm = cand.norm();
          if (norm < 1e-12) continue;
          cand /= norm;
          double v = ray_value(R, embed(T, cand, n), z, o);
          if (v < cur - 1e-12) {
            cur = v;
            dir = cand;
            improved = true;
          }
        }
      }
      if (cur <= o.eps_ray) return cur;
      if (!improved) step *= 0.5;
    }
    overall = std::min(overall, cur);
    if (overall <= o.eps_ray) return overall;
  }
  return overall;
}

struct PointTest {
  Regularizer R;
  Vec x;
  double Rx = 0.0;
  bool closed = false;   // d(z) = lin . z + absw . |z|
  bool numeric = false;  // one-sided difference quotient
  Vec lin, absw;
  std::vector<char> blocked;

  bool member(const Vec& z) const {
    if (closed) {
      for (std::size_t i = 0; i < blocked.size(); ++i)
        if (blocked[i] && z[static_cast<Eigen::Index>(i)] != 0.0) return false;
      return lin.dot(z) + absw.dot(z.cwiseAbs()) <= kDescentSlack;
    }
    if (numeric) {
      double d = (evaluate(R, x + kNumericDiffStep * z) - Rx) / kNumericDiffStep;
      return d <= kNumericSlack;
    }
    return atomic_ray_limit(R.atom_set(), x, Rx, z) <= kNumericSlack;
  }
};

void fill_sign_form(PointTest& t, const Vec& x, const Vec& w) {
  const int n = static_cast<int>(x.size());
  t.closed = true;
  t.lin = Vec::Zero(n);
  t.absw = Vec::Zero(n);
  for (int i = 0; i < n; ++i) {
    if (x[i] != 0.0)
      t.lin[i] = w[i] * (x[i] > 0.0 ? 1.0 : -1.0);
    else
      t.absw[i] = w[i];
  }
}

PointTest make_point_test(const Regularizer& R, const SparseModel& model,
                          const Vec& x) {
  if (x.size() != model.n) throw DimensionMismatch("model point length");
  ensure_finite(x, "model point");
  int nnz = 0;
  for (int i = 0; i < x.size(); ++i)
    if (x[i] != 0.0) ++nnz;
  if (nnz == 0) throw ZeroVector("model point must be nonzero");
  if (nnz > model.k)
    throw InvalidArgument("model point is not k-sparse");
  PointTest t{R, x};
  switch (R.kind()) {
    case Regularizer::Kind::L1:
      fill_sign_form(t, x, Vec::Ones(model.n));
      break;
    case Regularizer::Kind::WeightedL1:
      if (R.weights().size() != model.n)
        throw DimensionMismatch("weights length");
      fill_sign_form(t, x, R.weights());
      break;
    case Regularizer::Kind::KSupport:
      t.numeric = true;
      t.Rx = evaluate(R, x);
      break;
    case Regularizer::Kind::FiniteAtomic: {
      Vec w;
      std::vector<char> blocked;
      if (one_sparse_weights(R.atom_set(), w, blocked)) {
        for (int i = 0; i < x.size(); ++i)
          if (blocked[static_cast<std::size_t>(i)] && x[i] != 0.0)
            throw SpanError("model point outside the span of the atoms");
        fill_sign_form(t, x, w);
        t.blocked = std::move(blocked);
      } else {
        t.Rx = evaluate(R, x);  // throws SpanError off the span
      }
      break;
    }
  }
  return t;
}

ComplianceReport report_from_counts(long long hits, long long samples,
                                    std::uint64_t seed,
                                    const Regularizer& R) {
  double p = static_cast<double>(hits) / static_cast<double>(samples);
  ComplianceReport rep;
  rep.estimate = 1.0 - p;
  rep.half_width = 1.96 * std::sqrt(p * (1.0 - p) / static_cast<double>(samples));
  rep.samples = samples;
  rep.seed = seed;
  rep.regularizer_descriptor = R.descriptor();
  return rep;
}

// supports scored by total weight, ascending; ties keep lexicographic order
std::vector<Vec> support_representatives(const Vec& w,
                                         const std::vector<char>& blocked,
                                         const SparseModel& model) {
  std::vector<int> axes;
  for (int i = 0; i < model.n; ++i)
    if (blocked.empty() || !blocked[static_cast<std::size_t>(i)])
      axes.push_back(i);
  const int kk = std::min<int>(model.k, static_cast<int>(axes.size()));
  if (kk == 0) throw SpanError("atoms span no axis");
  if (binomial(static_cast<int>(axes.size()), kk) > kSupportBudget)
    throw BudgetExceeded("too many supports to enumerate");
  std::vector<std::pair<double, std::vector<int>>> scored;
  for_each_subset(static_cast<int>(axes.size()), kk,
                  [&](const std::vector<int>& pick) {
                    std::vector<int> T;
                    double score = 0.0;
                    for (int j : pick) {
                      T.push_back(axes[static_cast<std::size_t>(j)]);
                      score += w[axes[static_cast<std::size_t>(j)]];
                    }
                    scored.emplace_back(score, std::move(T));
                    return true;
                  });
  std::stable_sort(scored.begin(), scored.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });
  if (static_cast<int>(scored.size()) > kMaxRepresentatives)
    scored.resize(kMaxRepresentatives);
  std::vector<Vec> reps;
  reps.reserve(scored.size());
  const double scale = 1.0 / std::sqrt(static_cast<double>(kk));
  for (const auto& [score, T] : scored) {
    Vec x = Vec::Zero(model.n);
    for (int i : T) x[i] = scale;
    reps.push_back(std::move(x));
  }
  return reps;
}

}  // namespace

bool in_descent_set(const Regularizer& R, const Vec& x, const Vec& z) {
  if (x.size() != z.size()) throw DimensionMismatch("in_descent_set lengths");
  return evaluate(R, x + z) <= evaluate(R, x) + kDescentSlack;
}

DescentConeTest::DescentConeTest(Regularizer R, SparseModel model,
                                 RayOptions opts)
    : R_(std::move(R)), model_(model), opts_(opts) {
  switch (R_.kind()) {
    case Regularizer::Kind::L1:
      path_ = Path::TopSupport;
      break;
    case Regularizer::Kind::WeightedL1:
      if (R_.weights().size() != model_.n)
        throw DimensionMismatch("weights length vs model");
      path_ = Path::WeightedTopSupport;
      weights_ = R_.weights();
      blocked_.assign(static_cast<std::size_t>(model_.n), 0);
      break;
    case Regularizer::Kind::KSupport:
      path_ = Path::Ray;
      break;
    case Regularizer::Kind::FiniteAtomic:
      if (R_.atom_set().n() != model_.n)
        throw DimensionMismatch("atom dimension vs model");
      if (one_sparse_weights(R_.atom_set(), weights_, blocked_))
        path_ = Path::WeightedTopSupport;
      else
        path_ = Path::Ray;
      break;
  }
}

bool DescentConeTest::member(const Vec& z) const {
  if (z.size() != model_.n) throw DimensionMismatch("z length vs model");
  ensure_finite(z, "z");
  if (z.norm() == 0.0) throw ZeroVector("cone membership needs z != 0");
  switch (path_) {
    case Path::TopSupport: {
      double total = z.lpNorm<1>();
      double head = 0.0;
      Support top = top_support(z, model_.k);
      for (int i : top.indices()) head += std::abs(z[i]);
      return total - 2.0 * head <= kDescentSlack;
    }
    case Path::WeightedTopSupport: {
      for (std::size_t i = 0; i < blocked_.size(); ++i)
        if (blocked_[i] && z[static_cast<Eigen::Index>(i)] != 0.0) return false;
      return weighted_cone_margin(weights_, z, model_.k) <= kDescentSlack;
    }
    case Path::Ray:
      return ray_membership(R_, model_, z, opts_);
  }
  throw Error("unreachable");
}

bool in_model_descent_cone(const Regularizer& R, const SparseModel& model,
                           const Vec& z) {
  return DescentConeTest(R, model).member(z);
}

bool ray_membership(const Regularizer& R, const SparseModel& model,
                    const Vec& z, const RayOptions& opts) {
  if (z.size() != model.n) throw DimensionMismatch("z length vs model");
  ensure_finite(z, "z");
  double norm = z.norm();
  if (norm == 0.0) throw ZeroVector("cone membership needs z != 0");
  Vec zn = z / norm;
  RayOptions o = opts;
  if (R.kind() == Regularizer::Kind::FiniteAtomic) {
    // atoms are certificate directions in their own right; probing them keeps
    // the test exact on thin atom spans where the direction search can stall
    for (const Vec& a : R.atom_set().atoms())
      if (a.norm() > 1e-12) o.probes.push_back(a / a.norm());
  }
  bool found = false;
  for_each_subset(model.n, model.k, [&](const std::vector<int>& T) {
    if (support_ray_min(R, T, zn, o) <= o.eps_ray) {
      found = true;
      return false;
    }
    return true;
  });
  return found;
}

std::vector<Vec> sample_sphere(int n, long long count, std::uint64_t seed) {
  if (n < 1) throw InvalidArgument("sample_sphere: n must be >= 1");
  if (count < 1) throw InvalidArgument("sample_sphere: count must be >= 1");
  std::vector<Vec> out;
  out.reserve(static_cast<std::size_t>(count));
  for (long long i = 0; i < count; ++i)
    out.push_back(Rng::substream(seed, static_cast<std::uint64_t>(i), 0,
                                 stream::kSphere)
                      .unit_sphere(n));
  return out;
}

ComplianceReport estimate_A_uniform(const Regularizer& R,
                                    const SparseModel& model,
                                    long long samples, std::uint64_t seed,
                                    int workers) {
  if (samples < 1000)
    throw InvalidArgument("compliance estimate needs at least 1000 samples");
  DescentConeTest test(R, model);
  std::atomic<long long> hits{0};
  parallel_for(samples, resolve_workers(workers), [&](std::int64_t i) {
    Vec z = Rng::substream(seed, static_cast<std::uint64_t>(i), 0,
                           stream::kSphere)
                .unit_sphere(model.n);
    if (test.member(z)) hits.fetch_add(1, std::memory_order_relaxed);
  });
  return report_from_counts(hits.load(), samples, seed, R);
}

ComplianceReport estimate_A_point(const Regularizer& R,
                                  const SparseModel& model, const Vec& x,
                                  long long samples, std::uint64_t seed,
                                  int workers) {
  if (samples < 1000)
    throw InvalidArgument("compliance estimate needs at least 1000 samples");
  PointTest test = make_point_test(R, model, x);
  std::atomic<long long> hits{0};
  parallel_for(samples, resolve_workers(workers), [&](std::int64_t i) {
    Vec z = Rng::substream(seed, static_cast<std::uint64_t>(i), 0,
                           stream::kSphere)
                .unit_sphere(model.n);
    if (test.member(z)) hits.fetch_add(1, std::memory_order_relaxed);
  });
  return report_from_counts(hits.load(), samples, seed, R);
}

ComplianceReport estimate_A_nonuniform(const Regularizer& R,
                                       const SparseModel& model,
                                       long long samples, std::uint64_t seed,
                                       int workers) {
  if (samples < 1000)
    throw InvalidArgument("compliance estimate needs at least 1000 samples");
  std::vector<Vec> reps = nonuniform_representatives(R, model, seed);
  std::vector<PointTest> tests;
  tests.reserve(reps.size());
  for (const Vec& x : reps) tests.push_back(make_point_test(R, model, x));
  std::vector<std::atomic<long long>> hits(tests.size());
  parallel_for(samples, resolve_workers(workers), [&](std::int64_t i) {
    Vec z = Rng::substream(seed, static_cast<std::uint64_t>(i), 0,
                           stream::kSphere)
                .unit_sphere(model.n);
    for (std::size_t t = 0; t < tests.size(); ++t)
      if (tests[t].member(z)) hits[t].fetch_add(1, std::memory_order_relaxed);
  });
  long long best = 0;
  for (auto& h : hits) best = std::max(best, h.load());
  return report_from_counts(best, samples, seed, R);
}

std::vector<Vec> nonuniform_representatives(const Regularizer& R,
                                            const SparseModel& model,
                                            std::uint64_t seed) {
  const int n = model.n, k = model.k;
  switch (R.kind()) {
    case Regularizer::Kind::L1: {
      Vec x = Vec::Zero(n);
      for (int i = 0; i < k; ++i) x[i] = 1.0 / std::sqrt(double(k));
      return {x};
    }
    case Regularizer::Kind::WeightedL1:
      if (R.weights().size() != n) throw DimensionMismatch("weights length");
      return support_representatives(R.weights(), {}, model);
    case Regularizer::Kind::KSupport: {
      if (k == 1) return {Vec::Unit(n, 0)};
      std::vector<Vec> reps;
      for (int j = 0; j < kMaxRepresentatives; ++j) {
        Rng rng = Rng::substream(seed, static_cast<std::uint64_t>(j), 0,
                                 stream::kRepresentative);
        Vec profile = rng.unit_sphere(k).cwiseAbs();
        std::sort(profile.data(), profile.data() + k, std::greater<>());
        Vec x = Vec::Zero(n);
        x.head(k) = profile;
        reps.push_back(std::move(x));
      }
      return reps;
    }
    case Regularizer::Kind::FiniteAtomic: {
      Vec w;
      std::vector<char> blocked;
      if (one_sparse_weights(R.atom_set(), w, blocked))
        return support_representatives(w, blocked, model);
      std::vector<Vec> reps;
      for (int j = 0; j < kMaxRepresentatives; ++j) {
        Rng rng = Rng::substream(seed, static_cast<std::uint64_t>(j), 0,
                                 stream::kRepresentative);
        std::vector<int> idx(static_cast<std::size_t>(n));
        std::iota(idx.begin(), idx.end(), 0);
        for (int j2 = 0; j2 < k; ++j2)
          std::swap(idx[j2], idx[j2 + rng.uniform_int(0, n - 1 - j2)]);
        std::vector<int> T(idx.begin(), idx.begin() + k);
        reps.push_back(embed(T, rng.unit_sphere(k), n));
      }
      return reps;
    }
  }
  throw Error("unreachable");
}

}  // namespace compass
