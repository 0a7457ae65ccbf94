#include <benchmark/benchmark.h>

#include <compass/cones.hpp>
#include <compass/lp.hpp>
#include <compass/recovery.hpp>
#include <compass/rip.hpp>
#include <compass/rng.hpp>

using namespace compass;

namespace {

Vec dense_point(int n, std::uint64_t seed) {
  Rng rng(seed);
  return rng.gaussian_vector(n);
}

void BM_gauge_l1(benchmark::State& state) {
  Regularizer R = Regularizer::l1();
  Vec x = dense_point(64, 1);
  for (auto _ : state) benchmark::DoNotOptimize(evaluate(R, x));
}
BENCHMARK(BM_gauge_l1);

void BM_gauge_ksupport(benchmark::State& state) {
  Regularizer R = Regularizer::k_support(3);
  Vec x = dense_point(64, 2);
  for (auto _ : state) benchmark::DoNotOptimize(evaluate(R, x));
}
BENCHMARK(BM_gauge_ksupport);

void BM_gauge_atomic_lp(benchmark::State& state) {
  SparseModel model(8, 2);
  Regularizer R = Regularizer::atomic(sample_atoms(model, 32, 3));
  Vec x = dense_point(8, 4);
  for (auto _ : state) benchmark::DoNotOptimize(evaluate(R, x));
}
BENCHMARK(BM_gauge_atomic_lp);

void BM_cone_member_closed_form(benchmark::State& state) {
  SparseModel model(16, 3);
  DescentConeTest test(Regularizer::l1(), model);
  Vec z = dense_point(16, 5);
  for (auto _ : state) benchmark::DoNotOptimize(test.member(z));
}
BENCHMARK(BM_cone_member_closed_form);

void BM_cone_member_ray_search(benchmark::State& state) {
  SparseModel model(6, 2);
  DescentConeTest test(Regularizer::atomic(sample_atoms(model, 16, 6)), model);
  Vec z = dense_point(6, 7);
  for (auto _ : state) benchmark::DoNotOptimize(test.member(z));
}
BENCHMARK(BM_cone_member_ray_search);

void BM_rip_enumeration(benchmark::State& state) {
  SparseModel model(10, 2);
  Rng rng(8);
  Mat M(6, 10);
  for (int r = 0; r < 6; ++r) M.row(r) = rng.gaussian_vector(10).transpose();
  MeasurementOperator op(std::move(M));
  for (auto _ : state) benchmark::DoNotOptimize(rip_constant(op, model).delta);
}
BENCHMARK(BM_rip_enumeration);

void BM_basis_pursuit(benchmark::State& state) {
  Rng rng(9);
  Mat M(10, 20);
  for (int r = 0; r < 10; ++r) M.row(r) = rng.gaussian_vector(20).transpose();
  Vec x0 = Vec::Zero(20);
  x0[3] = 1.5;
  x0[11] = -0.7;
  Vec y = M * x0;
  RecoveryInstance inst(MeasurementOperator(M), y, x0, Regularizer::l1());
  for (auto _ : state) benchmark::DoNotOptimize(solve(inst).sum());
}
BENCHMARK(BM_basis_pursuit);

void BM_sphere_sampling(benchmark::State& state) {
  for (auto _ : state)
    benchmark::DoNotOptimize(sample_sphere(8, 1000, 10).back().sum());
}
BENCHMARK(BM_sphere_sampling);

void BM_uniform_measure(benchmark::State& state) {
  SparseModel model(4, 1);
  Regularizer R = Regularizer::l1();
  for (auto _ : state)
    benchmark::DoNotOptimize(
        estimate_A_uniform(R, model, 2000, 11).estimate);
}
BENCHMARK(BM_uniform_measure);

void BM_necessary_functional(benchmark::State& state) {
  SparseModel model(4, 1);
  Regularizer R = Regularizer::l1();
  for (auto _ : state)
    benchmark::DoNotOptimize(b_sigma(R, model, 2000, 12).value);
}
BENCHMARK(BM_necessary_functional);

}  // namespace

BENCHMARK_MAIN();
