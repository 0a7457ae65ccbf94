#include <compass/types.hpp>

#include <cmath>
#include <limits>
#include <vector>

#include "doctest.h"

using namespace compass;

TEST_CASE("sparse model enforces its bounds") {
  CHECK_NOTHROW(SparseModel(3, 1));
  CHECK_NOTHROW(SparseModel(4, 2));
  CHECK_NOTHROW(SparseModel(2, 1));
  CHECK_THROWS_AS(SparseModel(3, 0), InvalidArgument);
  CHECK_THROWS_AS(SparseModel(3, 2), InvalidArgument);
  CHECK_THROWS_AS(SparseModel(1, 1), InvalidArgument);
  CHECK(SparseModel(5, 2).secant_order() == 4);
}

TEST_CASE("support validates and sorts") {
  Support s({2, 0}, 4);
  CHECK(s.indices() == std::vector<int>{0, 2});
  CHECK(s.size() == 2);
  CHECK(s.contains(0));
  CHECK(s.contains(2));
  CHECK_FALSE(s.contains(1));
  CHECK(s.complement().indices() == std::vector<int>{1, 3});
  CHECK(Support::empty(3).size() == 0);
  CHECK(Support::full(3).indices() == std::vector<int>{0, 1, 2});
  CHECK_THROWS_AS(Support({0, 0}, 3), InvalidArgument);
  CHECK_THROWS_AS(Support({3}, 3), InvalidArgument);
  CHECK_THROWS_AS(Support({-1}, 3), InvalidArgument);
}

TEST_CASE("subset enumeration is lexicographic and complete") {
  std::vector<std::vector<int>> seen;
  for_each_subset(4, 2, [&](const std::vector<int>& idx) {
    seen.push_back(idx);
    return true;
  });
  REQUIRE(seen.size() == 6);
  CHECK(seen.front() == std::vector<int>{0, 1});
  CHECK(seen[1] == std::vector<int>{0, 2});
  CHECK(seen.back() == std::vector<int>{2, 3});

  int count = 0;
  for_each_subset(6, 3, [&](const std::vector<int>&) {
    ++count;
    return count < 4;  // early stop
  });
  CHECK(count == 4);
}

TEST_CASE("binomial values and saturation") {
  CHECK(binomial(4, 2) == 6);
  CHECK(binomial(6, 0) == 1);
  CHECK(binomial(6, 6) == 1);
  CHECK(binomial(5, 7) == 0);
  CHECK(binomial(70, 35) == std::numeric_limits<long long>::max());
}

TEST_CASE("finiteness guard") {
  Vec ok(2);
  ok << 1.0, -2.0;
  CHECK_NOTHROW(ensure_finite(ok, "ok"));
  Vec bad(2);
  bad << 1.0, std::nan("");
  CHECK_THROWS_AS(ensure_finite(bad, "bad"), InvalidArgument);
  Mat mbad = Mat::Zero(2, 2);
  mbad(1, 1) = std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(ensure_finite(mbad, "mbad"), InvalidArgument);
}

TEST_CASE("double formatting round-trips") {
  CHECK(format_double(0.5) == "0.5");
  CHECK(format_double(1.0) == "1");
  CHECK(format_double(0.0) == "0");
  double v = 1.0 / 3.0;
  CHECK(std::stod(format_double(v)) == v);
  CHECK(std::stod(format_double(0.1)) == 0.1);
}
