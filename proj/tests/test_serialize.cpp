#include <compass/serialize.hpp>

#include <string>
#include <vector>

#include "doctest.h"
#include "json.hpp"

using namespace compass;

namespace {

AtomSet small_atoms() {
  Vec a = Vec::Zero(3), b = Vec::Zero(3), c = Vec::Zero(3);
  a[0] = 1.0;
  b[1] = -1.0;
  c[2] = 0.5;
  return AtomSet(3, 1, {a, b, c});
}

}  // namespace

TEST_CASE("atom set json roundtrip") {
  AtomSet atoms = small_atoms();
  AtomSet back = atom_set_from_json(atom_set_to_json(atoms));
  CHECK(back.n() == 3);
  CHECK(back.k() == 1);
  REQUIRE(back.atoms().size() == 3);
  for (std::size_t i = 0; i < 3; ++i)
    CHECK((back.atoms()[i] - atoms.atoms()[i]).norm() == 0.0);
}

TEST_CASE("regularizer json roundtrip per kind") {
  Vec w(3);
  w << 1, 2, 3;
  Vec probe(3);
  probe << 0.4, -1.2, 2.0;
  std::vector<Regularizer> all = {Regularizer::l1(), Regularizer::weighted_l1(w),
                                  Regularizer::k_support(2),
                                  Regularizer::atomic(small_atoms())};
  for (const Regularizer& R : all) {
    Regularizer back = regularizer_from_json(regularizer_to_json(R));
    CHECK(back.kind() == R.kind());
    CHECK(back.descriptor() == R.descriptor());
    CHECK(evaluate(back, probe) ==
          doctest::Approx(evaluate(R, probe)).epsilon(1e-12));
  }
}

TEST_CASE("serializer input validation") {
  CHECK_THROWS_AS(regularizer_from_json("not json"), ConfigError);
  CHECK_THROWS_AS(regularizer_from_json("{\"kind\": \"nuclear\"}"), ConfigError);
  CHECK_THROWS_AS(regularizer_from_json("{\"kind\": \"wl1\"}"), ConfigError);
  CHECK_THROWS_AS(atom_set_from_json("{\"n\": 2, \"k\": 1}"), ConfigError);
  CHECK_THROWS_AS(instance_from_json("{\"rows\": 1}"), ConfigError);
  CHECK_THROWS_AS(
      instance_from_json("{\"rows\": 2, \"cols\": 2, \"M\": [1, 0, 0], "
                         "\"y\": [1, 1], \"regularizer\": {\"kind\": \"l1\"}}"),
      ConfigError);
}

TEST_CASE("compliance report json fields") {
  ComplianceReport report;
  report.estimate = 0.25;
  report.half_width = 0.01;
  report.samples = 1000;
  report.seed = 42;
  report.regularizer_descriptor = "l1";
  nlohmann::json j = nlohmann::json::parse(compliance_to_json(report));
  CHECK(j["estimate"].get<double>() == 0.25);
  CHECK(j["half_width"].get<double>() == 0.01);
  CHECK(j["samples"].get<long long>() == 1000);
  CHECK(j["seed"].get<std::uint64_t>() == 42);
  CHECK(j["regularizer_descriptor"].get<std::string>() == "l1");
}

TEST_CASE("functional csv exact text") {
  std::vector<FunctionalRow> rows = {{"l1", 3, 1, "B", 0.2, 16, 7},
                                     {"wl1[1;2]", 3, 1, "D", 1.0, 16, 7}};
  CHECK(functional_csv(rows) ==
        "regularizer,n,k,functional,value,restarts,seed\n"
        "l1,3,1,B,0.2,16,7\n"
        "wl1[1;2],3,1,D,1,16,7\n");
}

TEST_CASE("phase csv exact text") {
  PhaseTable table{SparseModel(4, 1), "l1", 9, {}};
  table.rows.push_back({2, 10, 5, 0.5});
  table.rows.push_back({4, 10, 10, 1.0});
  CHECK(phase_csv(table) ==
        "n,k,m,regularizer,trials,successes,rate,seed\n"
        "4,1,2,l1,10,5,0.5,9\n"
        "4,1,4,l1,10,10,1,9\n");
}

TEST_CASE("rip csv exact text") {
  std::vector<RipRow> rows = {{3, 1, 3, "identity", 0.0, 3},
                              {3, 1, 2, "gaussian#m02d00", 0.625, 3}};
  CHECK(rip_csv(rows) ==
        "n,k,m,operator,delta,seed\n"
        "3,1,3,identity,0,3\n"
        "3,1,2,gaussian#m02d00,0.625,3\n");
}

TEST_CASE("instance json roundtrip") {
  Mat M(2, 3);
  M << 1, 0, 0, 0, 1, 1;
  Vec x0(3);
  x0 << 5, 0, 0;
  RecoveryInstance inst(MeasurementOperator(M), Vec(M * x0), x0,
                        Regularizer::l1());
  RecoveryInstance back = instance_from_json(instance_to_json(inst));
  CHECK((back.M.matrix - M).norm() == 0.0);
  CHECK((back.y - inst.y).norm() == 0.0);
  REQUIRE(back.x0.has_value());
  CHECK((*back.x0 - x0).norm() == 0.0);
  CHECK(back.R.kind() == Regularizer::Kind::L1);

  RecoveryInstance bare(MeasurementOperator(M), Vec(M * x0), std::nullopt,
                        Regularizer::l1());
  CHECK_FALSE(instance_from_json(instance_to_json(bare)).x0.has_value());
}

TEST_CASE("instance json carries solution and certificate when given") {
  Mat M = Mat::Identity(2, 2);
  Vec y(2);
  y << 1, 0;
  RecoveryInstance inst(MeasurementOperator(M), y, y, Regularizer::l1());
  Certificate cert;
  cert.kind = Certificate::Kind::Nonuniform;
  cert.holds = false;
  cert.margin = -0.125;
  cert.violating_direction = Vec::Ones(2);
  Vec x = y;
  nlohmann::json j =
      nlohmann::json::parse(instance_to_json(inst, &x, &cert));
  REQUIRE(j.contains("solution"));
  CHECK(j["solution"].size() == 2);
  REQUIRE(j.contains("certificate"));
  CHECK(j["certificate"]["kind"].get<std::string>() == "nonuniform");
  CHECK(j["certificate"]["holds"].get<bool>() == false);
  CHECK(j["certificate"]["margin"].get<double>() == -0.125);
  CHECK(j["certificate"]["violating_direction"].size() == 2);
}
