#include <compass/parallel.hpp>
#include <compass/types.hpp>

#include <atomic>
#include <numeric>
#include <vector>

#include "doctest.h"

using namespace compass;

TEST_CASE("parallel_for covers every index exactly once") {
  for (int workers : {1, 2, 7}) {
    std::vector<int> hits(1000, 0);
    parallel_for(1000, workers, [&](std::int64_t i) {
      hits[static_cast<std::size_t>(i)] += 1;
    });
    CHECK(std::accumulate(hits.begin(), hits.end(), 0) == 1000);
    CHECK(*std::min_element(hits.begin(), hits.end()) == 1);
  }
}

TEST_CASE("results do not depend on the worker count") {
  auto run = [](int workers) {
    std::vector<double> out(200);
    parallel_for(200, workers, [&](std::int64_t i) {
      out[static_cast<std::size_t>(i)] = static_cast<double>(i * i) / 7.0;
    });
    return out;
  };
  CHECK(run(1) == run(5));
}

TEST_CASE("empty and tiny ranges") {
  std::atomic<int> count{0};
  parallel_for(0, 4, [&](std::int64_t) { count.fetch_add(1); });
  CHECK(count.load() == 0);
  parallel_for(2, 16, [&](std::int64_t) { count.fetch_add(1); });
  CHECK(count.load() == 2);
}

TEST_CASE("first exception is rethrown") {
  CHECK_THROWS_AS(
      parallel_for(64, 4,
                   [&](std::int64_t i) {
                     if (i == 13) throw InvalidArgument("boom");
                   }),
      InvalidArgument);
}

TEST_CASE("resolve_workers floors at one") {
  CHECK(resolve_workers(0) >= 1);
  CHECK(resolve_workers(3) == 3);
}
