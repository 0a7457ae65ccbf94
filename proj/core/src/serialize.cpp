#include "compass/serialize.hpp"

#include <sstream>
#include <utility>

#include "json.hpp"

namespace compass {
namespace {

using nlohmann::json;

json vec_to_array(const Vec& v) {
  json arr = json::array();
  for (int i = 0; i < v.size(); ++i) arr.push_back(v[i]);
  return arr;
}

Vec array_to_vec(const json& arr, const char* what) {
  if (!arr.is_array()) throw ConfigError(std::string(what) + ": expected an array");
  Vec v(static_cast<Eigen::Index>(arr.size()));
  for (std::size_t i = 0; i < arr.size(); ++i) {
    if (!arr[i].is_number())
      throw ConfigError(std::string(what) + ": expected numbers");
    v[static_cast<Eigen::Index>(i)] = arr[i].get<double>();
  }
  return v;
}

json parse(const std::string& text, const char* what) {
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded())
    throw ConfigError(std::string(what) + ": malformed JSON");
  return j;
}

json atom_set_to_node(const AtomSet& atoms) {
  json j;
  j["n"] = atoms.n();
  j["k"] = atoms.k();
  json rows = json::array();
  for (const Vec& a : atoms.atoms()) rows.push_back(vec_to_array(a));
  j["atoms"] = std::move(rows);
  return j;
}

AtomSet atom_set_from_node(const json& j) {
  if (!j.is_object() || !j.contains("n") || !j.contains("k") ||
      !j.contains("atoms"))
    throw ConfigError("atom set: need n, k, and atoms");
  int n = j["n"].get<int>();
  int k = j["k"].get<int>();
  std::vector<Vec> atoms;
  for (const json& row : j["atoms"]) atoms.push_back(array_to_vec(row, "atom"));
  return AtomSet(n, k, std::move(atoms));
}

json regularizer_to_node(const Regularizer& R) {
  json j;
  switch (R.kind()) {
    case Regularizer::Kind::L1:
      j["kind"] = "l1";
      break;
    case Regularizer::Kind::WeightedL1:
      j["kind"] = "wl1";
      j["weights"] = vec_to_array(R.weights());
      break;
    case Regularizer::Kind::KSupport:
      j["kind"] = "ksupport";
      j["k"] = R.support_size();
      break;
    case Regularizer::Kind::FiniteAtomic:
      j["kind"] = "atomic";
      j["atoms"] = atom_set_to_node(R.atom_set());
      break;
  }
  return j;
}

Regularizer regularizer_from_node(const json& j) {
  if (!j.is_object() || !j.contains("kind"))
    throw ConfigError("regularizer: need a kind");
  std::string kind = j["kind"].get<std::string>();
  if (kind == "l1") return Regularizer::l1();
  if (kind == "wl1") {
    if (!j.contains("weights")) throw ConfigError("wl1: need weights");
    return Regularizer::weighted_l1(array_to_vec(j["weights"], "weights"));
  }
  if (kind == "ksupport") {
    if (!j.contains("k")) throw ConfigError("ksupport: need k");
    return Regularizer::k_support(j["k"].get<int>());
  }
  if (kind == "atomic") {
    if (!j.contains("atoms")) throw ConfigError("atomic: need atoms");
    return Regularizer::atomic(atom_set_from_node(j["atoms"]));
  }
  throw ConfigError("regularizer: unknown kind '" + kind + "'");
}

json certificate_to_node(const Certificate& cert) {
  json j;
  j["kind"] =
      cert.kind == Certificate::Kind::Uniform ? "uniform" : "nonuniform";
  j["holds"] = cert.holds;
  j["margin"] = cert.margin;
  if (cert.violating_direction.size() > 0)
    j["violating_direction"] = vec_to_array(cert.violating_direction);
  return j;
}

}  // namespace

std::string atom_set_to_json(const AtomSet& atoms) {
  return atom_set_to_node(atoms).dump(2);
}

AtomSet atom_set_from_json(const std::string& text) {
  return atom_set_from_node(parse(text, "atom set"));
}

std::string regularizer_to_json(const Regularizer& R) {
  return regularizer_to_node(R).dump(2);
}

Regularizer regularizer_from_json(const std::string& text) {
  return regularizer_from_node(parse(text, "regularizer"));
}

std::string compliance_to_json(const ComplianceReport& report) {
  json j;
  j["estimate"] = report.estimate;
  j["half_width"] = report.half_width;
  j["samples"] = report.samples;
  j["seed"] = report.seed;
  j["regularizer_descriptor"] = report.regularizer_descriptor;
  return j.dump(2);
}

std::string functional_csv(const std::vector<FunctionalRow>& rows) {
  std::ostringstream out;
  out << "regularizer,n,k,functional,value,restarts,seed\n";
  for (const FunctionalRow& r : rows)
    out << r.regularizer << ',' << r.n << ',' << r.k << ',' << r.functional
        << ',' << format_double(r.value) << ',' << r.restarts << ',' << r.seed
        << '\n';
  return out.str();
}

std::string phase_csv(const PhaseTable& table) {
  std::ostringstream out;
  out << "n,k,m,regularizer,trials,successes,rate,seed\n";
  for (const PhaseRow& r : table.rows)
    out << table.model.n << ',' << table.model.k << ',' << r.m << ','
        << table.regularizer << ',' << r.trials << ',' << r.successes << ','
        << format_double(r.rate) << ',' << table.seed << '\n';
  return out.str();
}

std::string rip_csv(const std::vector<RipRow>& rows) {
  std::ostringstream out;
  out << "n,k,m,operator,delta,seed\n";
  for (const RipRow& r : rows)
    out << r.n << ',' << r.k << ',' << r.m << ',' << r.operator_name << ','
        << format_double(r.delta) << ',' << r.seed << '\n';
  return out.str();
}

std::string instance_to_json(const RecoveryInstance& instance,
                             const Vec* solution,
                             const Certificate* certificate) {
  json j;
  j["rows"] = instance.M.rows();
  j["cols"] = instance.M.cols();
  json flat = json::array();
  for (int r = 0; r < instance.M.rows(); ++r)
    for (int c = 0; c < instance.M.cols(); ++c)
      flat.push_back(instance.M.matrix(r, c));
  j["M"] = std::move(flat);
  j["y"] = vec_to_array(instance.y);
  if (instance.x0) j["x0"] = vec_to_array(*instance.x0);
  j["regularizer"] = regularizer_to_node(instance.R);
  if (solution) j["solution"] = vec_to_array(*solution);
  if (certificate) j["certificate"] = certificate_to_node(*certificate);
  return j.dump(2);
}

RecoveryInstance instance_from_json(const std::string& text) {
  json j = parse(text, "instance");
  if (!j.is_object() || !j.contains("rows") || !j.contains("cols") ||
      !j.contains("M") || !j.contains("y") || !j.contains("regularizer"))
    throw ConfigError("instance: need rows, cols, M, y, regularizer");
  int rows = j["rows"].get<int>();
  int cols = j["cols"].get<int>();
  if (rows < 1 || cols < 1) throw ConfigError("instance: bad dimensions");
  Vec flat = array_to_vec(j["M"], "M");
  if (flat.size() != static_cast<Eigen::Index>(rows) * cols)
    throw ConfigError("instance: M length does not match rows*cols");
  Mat M(rows, cols);
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) M(r, c) = flat[r * cols + c];
  Vec y = array_to_vec(j["y"], "y");
  std::optional<Vec> x0;
  if (j.contains("x0")) x0 = array_to_vec(j["x0"], "x0");
  Regularizer R = regularizer_from_node(j["regularizer"]);
  return RecoveryInstance(MeasurementOperator(std::move(M)), std::move(y),
                          std::move(x0), std::move(R));
}

}  // namespace compass
