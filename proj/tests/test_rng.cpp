#include <compass/rng.hpp>

#include <cmath>
#include <set>

#include "doctest.h"

using namespace compass;

TEST_CASE("streams are reproducible") {
  Rng a = Rng::substream(7, 1, 2, 3);
  Rng b = Rng::substream(7, 1, 2, 3);
  for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());
}

TEST_CASE("distinct indices give distinct streams") {
  std::set<std::uint64_t> firsts;
  for (std::uint64_t i = 0; i < 64; ++i)
    firsts.insert(Rng::substream(7, i, 0, stream::kSphere).next_u64());
  for (std::uint64_t i = 0; i < 64; ++i)
    firsts.insert(Rng::substream(7, i, 0, stream::kMatrix).next_u64());
  CHECK(firsts.size() == 128);
}

TEST_CASE("uniform ranges") {
  Rng rng(123);
  for (int i = 0; i < 1000; ++i) {
    double u = rng.uniform();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    double v = rng.uniform_open();
    CHECK(v > 0.0);
    CHECK(v <= 1.0);
    double w = rng.uniform(-2.0, 3.0);
    CHECK(w >= -2.0);
    CHECK(w < 3.0);
  }
}

TEST_CASE("uniform_int covers the inclusive range") {
  Rng rng(9);
  std::set<int> seen;
  for (int i = 0; i < 2000; ++i) {
    int v = rng.uniform_int(2, 5);
    CHECK(v >= 2);
    CHECK(v <= 5);
    seen.insert(v);
  }
  CHECK(seen.size() == 4);
}

TEST_CASE("normal moments are sane") {
  Rng rng(4242);
  const int count = 20000;
  double sum = 0.0;
  double sq = 0.0;
  for (int i = 0; i < count; ++i) {
    double x = rng.normal();
    sum += x;
    sq += x * x;
  }
  double mean = sum / count;
  double var = sq / count - mean * mean;
  CHECK(std::abs(mean) < 0.03);
  CHECK(std::abs(var - 1.0) < 0.05);
}

TEST_CASE("unit sphere samples have norm one") {
  Rng rng(5);
  for (int i = 0; i < 50; ++i) {
    Vec v = rng.unit_sphere(4);
    CHECK(v.size() == 4);
    CHECK(std::abs(v.norm() - 1.0) < 1e-12);
  }
  CHECK(rng.gaussian_vector(7).size() == 7);
}

TEST_CASE("mix64 scrambles") {
  CHECK(mix64(0) != 0);
  CHECK(mix64(1) != mix64(2));
}
