#include "experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <utility>

#include <Eigen/Dense>

#include <compass/parallel.hpp>
#include <compass/rng.hpp>

#include "json.hpp"
#include "svg.hpp"

namespace compass::experiments {
namespace {

using nlohmann::json;

json parse_object(const std::string& text, const char* what) {
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded())
    throw ConfigError(std::string(what) + ": malformed JSON");
  if (!j.is_object())
    throw ConfigError(std::string(what) + ": expected a JSON object");
  return j;
}

long long read_count(const json& j, const char* key, long long fallback) {
  if (!j.contains(key)) return fallback;
  const json& v = j.at(key);
  if (!v.is_number_integer() || v.get<long long>() <= 0)
    throw ConfigError(std::string(key) + ": expected a positive integer");
  return v.get<long long>();
}

int read_small_count(const json& j, const char* key, int fallback,
                     int min_value = 0) {
  if (!j.contains(key)) return fallback;
  const json& v = j.at(key);
  if (!v.is_number_integer() || v.get<long long>() < min_value ||
      v.get<long long>() > 1000000)
    throw ConfigError(std::string(key) + ": out of range");
  return static_cast<int>(v.get<long long>());
}

double read_tol(const json& j, const char* key, double fallback) {
  if (!j.contains(key)) return fallback;
  const json& v = j.at(key);
  if (!v.is_number() || !(v.get<double>() > 0.0))
    throw ConfigError(std::string(key) + ": expected a positive number");
  return v.get<double>();
}

std::string label_index(const char* prefix, int i) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%s#%03d", prefix, i);
  return buf;
}

json vec_node(const Vec& v) {
  json arr = json::array();
  for (int i = 0; i < v.size(); ++i) arr.push_back(v[i]);
  return arr;
}

json functional_node(const FunctionalResult& r) {
  json j;
  j["value"] = r.value;
  j["argmax_z"] = vec_node(r.argmax_z);
  j["witness_model_point"] = vec_node(r.witness_model_point);
  j["restarts_used"] = r.restarts_used;
  j["certificate"] = r.certificate;
  return j;
}

json compliance_node(const ComplianceReport& r) {
  json j;
  j["estimate"] = r.estimate;
  j["half_width"] = r.half_width;
  j["samples"] = r.samples;
  j["seed"] = r.seed;
  return j;
}

json label_map(const std::vector<LabeledRegularizer>& specs) {
  json m = json::object();
  for (const auto& s : specs) m[s.label] = s.value.descriptor();
  return m;
}

std::string utc_stamp() {
  std::time_t now = std::time(nullptr);
  std::tm tm {};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y%m%d-%H%M%S", &tm);
  return buf;
}

void write_file(const std::filesystem::path& path, const std::string& body) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  out << body;
  if (!out) throw Error("short write to " + path.string());
}

std::vector<std::string> messages(const json& violations) {
  std::vector<std::string> out;
  for (const auto& v : violations) out.push_back(v.at("message").get<std::string>());
  return out;
}

// header emitted once, then the data lines of each table
std::string concat_phase_csv(const std::vector<PhaseTable>& tables) {
  std::string out = "n,k,m,regularizer,trials,successes,rate,seed\n";
  for (const PhaseTable& t : tables) {
    std::string one = phase_csv(t);
    out += one.substr(one.find('\n') + 1);
  }
  return out;
}

}  // namespace

ExperimentConfig parse_config(const std::string& json_text) {
  json j = parse_object(json_text, "config");
  static const char* known[] = {
      "experiment", "n", "k", "regularizers", "samples", "trials", "budget",
      "weighted_draws", "atomic_draws", "atoms_per_set", "gaussian_draws",
      "m_range", "tol_b", "tol_d", "workers", "svg", "seed", "out_dir",
      "stamp"};
  for (const auto& item : j.items()) {
    bool ok = false;
    for (const char* key : known) ok = ok || item.key() == key;
    if (!ok) throw ConfigError("config: unknown key '" + item.key() + "'");
  }

  ExperimentConfig cfg;
  if (j.contains("experiment")) {
    if (!j.at("experiment").is_string())
      throw ConfigError("experiment: expected a string");
    cfg.experiment = j.at("experiment").get<std::string>();
  }
  cfg.n = read_small_count(j, "n", cfg.n, 1);
  cfg.k = read_small_count(j, "k", cfg.k, 1);
  cfg.samples = read_count(j, "samples", cfg.samples);
  cfg.trials = read_count(j, "trials", cfg.trials);
  cfg.budget = read_count(j, "budget", cfg.budget);
  cfg.weighted_draws = read_small_count(j, "weighted_draws", cfg.weighted_draws);
  cfg.atomic_draws = read_small_count(j, "atomic_draws", cfg.atomic_draws);
  cfg.atoms_per_set = read_small_count(j, "atoms_per_set", cfg.atoms_per_set, 1);
  cfg.gaussian_draws = read_small_count(j, "gaussian_draws", cfg.gaussian_draws);
  cfg.tol_b = read_tol(j, "tol_b", cfg.tol_b);
  cfg.tol_d = read_tol(j, "tol_d", cfg.tol_d);
  cfg.workers = read_small_count(j, "workers", cfg.workers);
  if (j.contains("svg")) {
    if (!j.at("svg").is_boolean()) throw ConfigError("svg: expected a boolean");
    cfg.svg = j.at("svg").get<bool>();
  }
  if (j.contains("seed")) {
    if (!j.at("seed").is_number_integer())
      throw ConfigError("seed: expected an integer");
    cfg.seed = j.at("seed").get<std::uint64_t>();
  }
  if (j.contains("out_dir")) {
    if (!j.at("out_dir").is_string())
      throw ConfigError("out_dir: expected a string");
    cfg.out_dir = j.at("out_dir").get<std::string>();
  }
  if (j.contains("stamp")) {
    if (!j.at("stamp").is_string())
      throw ConfigError("stamp: expected a string");
    cfg.stamp = j.at("stamp").get<std::string>();
  }
  if (j.contains("m_range")) {
    const json& arr = j.at("m_range");
    if (!arr.is_array()) throw ConfigError("m_range: expected an array");
    for (const auto& v : arr) {
      if (!v.is_number_integer() || v.get<long long>() < 1 ||
          v.get<long long>() > 10000)
        throw ConfigError("m_range: entries must be positive integers");
      cfg.m_range.push_back(static_cast<int>(v.get<long long>()));
    }
    std::sort(cfg.m_range.begin(), cfg.m_range.end());
    cfg.m_range.erase(std::unique(cfg.m_range.begin(), cfg.m_range.end()),
                      cfg.m_range.end());
  }
  if (j.contains("regularizers")) {
    const json& arr = j.at("regularizers");
    if (!arr.is_array())
      throw ConfigError("regularizers: expected an array");
    for (const auto& node : arr)
      cfg.regularizers.push_back(regularizer_from_json(node.dump()));
  }
  if (cfg.k > cfg.n) throw ConfigError("config: k exceeds n");
  return cfg;
}

Regularizer draw_weighted_l1(int n, std::uint64_t seed, int draw) {
  Rng rng = Rng::substream(seed, static_cast<std::uint64_t>(draw), 0,
                           stream::kWeights);
  const double lo = std::log(0.1);
  const double hi = std::log(10.0);
  Vec w(n);
  for (int i = 0; i < n; ++i) w[i] = std::exp(rng.uniform(lo, hi));
  return Regularizer::weighted_l1(w);
}

AtomSet draw_spanning_atoms(const SparseModel& model, int count,
                            std::uint64_t seed, int draw) {
  if (count < model.n)
    throw InvalidArgument("atom set too small to span the space");
  for (int attempt = 0; attempt < 64; ++attempt) {
    Rng sub = Rng::substream(seed, static_cast<std::uint64_t>(draw),
                             static_cast<std::uint64_t>(attempt), stream::kAtom);
    AtomSet atoms = sample_atoms(model, count, sub.next_u64());
    Mat A(model.n, count);
    for (int i = 0; i < count; ++i) A.col(i) = atoms.atom(i);
    if (Eigen::FullPivLU<Mat>(A).rank() == model.n) return atoms;
  }
  throw SolverStall("atom draws kept missing full span");
}

std::vector<LabeledRegularizer> sweep_regularizers(
    const ExperimentConfig& config) {
  std::vector<LabeledRegularizer> out;
  out.push_back({"l1", Regularizer::l1()});
  for (int d = 0; d < config.weighted_draws; ++d)
    out.push_back({label_index("wl1", d),
                   draw_weighted_l1(config.n, config.seed, d)});
  for (int d = 0; d < config.atomic_draws; ++d)
    out.push_back({label_index("atomic", d),
                   Regularizer::atomic(draw_spanning_atoms(
                       config.model(), config.atoms_per_set, config.seed, d))});
  for (std::size_t i = 0; i < config.regularizers.size(); ++i)
    out.push_back({label_index("spec", static_cast<int>(i)),
                   config.regularizers[i]});
  return out;
}

std::vector<LabeledRegularizer> compliance_regularizers(
    const ExperimentConfig& config) {
  ExperimentConfig fixed = config;
  fixed.weighted_draws = 3;
  fixed.atomic_draws = 5;
  return sweep_regularizers(fixed);
}

Theorem1Data theorem1(const ExperimentConfig& config) {
  SparseModel model = config.model();
  if (model.n < 2 * model.k)
    throw ConfigError("theorem1 needs n >= 2k");
  std::vector<LabeledRegularizer> specs = sweep_regularizers(config);

  struct Pair {
    FunctionalResult b;
    FunctionalResult d;
  };
  std::vector<Pair> results(specs.size());
  parallel_for(static_cast<std::int64_t>(specs.size()),
               resolve_workers(config.workers), [&](std::int64_t i) {
                 const Regularizer& R = specs[static_cast<std::size_t>(i)].value;
                 auto& slot = results[static_cast<std::size_t>(i)];
                 slot.b = b_sigma(R, model, config.budget, config.seed);
                 slot.d = d_sigma(R, model, config.budget, config.seed);
               });

  Theorem1Data data;
  json spec_nodes = json::array();
  for (std::size_t i = 0; i < specs.size(); ++i) {
    const auto& s = specs[i];
    data.rows.push_back({s.label, model.n, model.k, "b_sigma",
                         results[i].b.value, results[i].b.restarts_used,
                         config.seed});
    data.rows.push_back({s.label, model.n, model.k, "d_sigma",
                         results[i].d.value, results[i].d.restarts_used,
                         config.seed});
    json node;
    node["label"] = s.label;
    node["b_sigma"] = functional_node(results[i].b);
    node["d_sigma"] = functional_node(results[i].d);
    spec_nodes.push_back(std::move(node));
  }

  const Pair& base = results[0];
  json violation_nodes = json::array();
  auto check = [&](const char* functional, double l1_value,
                   const FunctionalResult& l1_result, double tol) {
    for (std::size_t i = 1; i < specs.size(); ++i) {
      const FunctionalResult& r =
          functional[0] == 'b' ? results[i].b : results[i].d;
      if (l1_value <= r.value + tol) continue;
      bool l1_ok = l1_result.argmax_z.size() > 0 &&
                   in_model_descent_cone(Regularizer::l1(), model,
                                         l1_result.argmax_z);
      bool other_ok = r.argmax_z.size() > 0 &&
                      in_model_descent_cone(specs[i].value, model, r.argmax_z);
      json v;
      std::ostringstream msg;
      msg << functional << "(l1) = " << format_double(l1_value)
          << " exceeds " << functional << "(" << specs[i].label
          << ") = " << format_double(r.value) << " beyond " << tol;
      v["message"] = msg.str();
      v["functional"] = functional;
      v["label"] = specs[i].label;
      v["l1_value"] = l1_value;
      v["competitor_value"] = r.value;
      v["l1_witness"] = vec_node(l1_result.argmax_z);
      v["competitor_witness"] = vec_node(r.argmax_z);
      v["l1_witness_reverified"] = l1_ok;
      v["competitor_witness_reverified"] = other_ok;
      violation_nodes.push_back(std::move(v));
    }
  };
  check("b_sigma", base.b.value, base.b, config.tol_b);
  check("d_sigma", base.d.value, base.d, config.tol_d);

  json summary;
  summary["experiment"] = "theorem1";
  summary["n"] = model.n;
  summary["k"] = model.k;
  summary["budget"] = config.budget;
  summary["seed"] = config.seed;
  summary["tol_b"] = config.tol_b;
  summary["tol_d"] = config.tol_d;
  summary["labels"] = label_map(specs);
  summary["results"] = std::move(spec_nodes);
  summary["violations"] = violation_nodes;
  data.summary_json = summary.dump(2) + "\n";
  data.violations = messages(violation_nodes);
  data.csv = functional_csv(data.rows);

  Series b_series{"b_sigma", {}, {}};
  Series d_series{"d_sigma", {}, {}};
  for (std::size_t i = 0; i < specs.size(); ++i) {
    b_series.x.push_back(static_cast<double>(i));
    b_series.y.push_back(results[i].b.value);
    d_series.x.push_back(static_cast<double>(i));
    d_series.y.push_back(results[i].d.value);
  }
  data.svg = line_chart("cone measures across competitors (index 0 = l1)",
                        "competitor index", "measure value",
                        {b_series, d_series}, true);
  return data;
}

ComplianceData compliance(const ExperimentConfig& config) {
  SparseModel model = config.model();
  std::vector<LabeledRegularizer> specs = compliance_regularizers(config);

  ComplianceData data;
  for (const auto& s : specs) {
    ComplianceEntry e;
    e.label = s.label;
    e.uniform = estimate_A_uniform(s.value, model, config.samples, config.seed,
                                   config.workers);
    e.nonuniform = estimate_A_nonuniform(s.value, model, config.samples,
                                         config.seed, config.workers);
    data.entries.push_back(std::move(e));
  }

  json violation_nodes = json::array();
  std::size_t best_u = 0;
  std::size_t best_nu = 0;
  for (std::size_t i = 0; i < data.entries.size(); ++i) {
    const ComplianceEntry& e = data.entries[i];
    if (e.uniform.estimate > data.entries[best_u].uniform.estimate) best_u = i;
    if (e.nonuniform.estimate > data.entries[best_nu].nonuniform.estimate)
      best_nu = i;
    if (e.nonuniform.estimate < e.uniform.estimate) {
      // shared sample stream makes the inclusion exact, so any gap is real
      json v;
      v["message"] = "nonuniform estimate below uniform estimate for " +
                     e.label;
      v["label"] = e.label;
      v["uniform"] = compliance_node(e.uniform);
      v["nonuniform"] = compliance_node(e.nonuniform);
      violation_nodes.push_back(std::move(v));
    }
  }
  const ComplianceEntry& base = data.entries[0];
  for (std::size_t i = 1; i < data.entries.size(); ++i) {
    const ComplianceEntry& e = data.entries[i];
    double band = 3.0 * (base.uniform.half_width + e.uniform.half_width);
    if (e.uniform.estimate > base.uniform.estimate + band) {
      json v;
      v["message"] = e.label +
                     " exceeds the uniform compliance of l1 beyond "
                     "statistical ties";
      v["label"] = e.label;
      v["l1_uniform"] = compliance_node(base.uniform);
      v["competitor_uniform"] = compliance_node(e.uniform);
      violation_nodes.push_back(std::move(v));
    }
  }
  data.best_uniform = data.entries[best_u].label;
  data.best_nonuniform = data.entries[best_nu].label;
  data.violations = messages(violation_nodes);

  std::ostringstream csv;
  csv << "regularizer,n,k,measure,estimate,half_width,samples,seed\n";
  for (const ComplianceEntry& e : data.entries) {
    csv << e.label << ',' << model.n << ',' << model.k << ",AU,"
        << format_double(e.uniform.estimate) << ','
        << format_double(e.uniform.half_width) << ',' << e.uniform.samples
        << ',' << e.uniform.seed << '\n';
    csv << e.label << ',' << model.n << ',' << model.k << ",ANU,"
        << format_double(e.nonuniform.estimate) << ','
        << format_double(e.nonuniform.half_width) << ','
        << e.nonuniform.samples << ',' << e.nonuniform.seed << '\n';
  }
  data.csv = csv.str();

  json summary;
  summary["experiment"] = "compliance";
  summary["n"] = model.n;
  summary["k"] = model.k;
  summary["samples"] = config.samples;
  summary["seed"] = config.seed;
  summary["labels"] = label_map(specs);
  json entries = json::array();
  for (const ComplianceEntry& e : data.entries) {
    json node;
    node["label"] = e.label;
    node["uniform"] = compliance_node(e.uniform);
    node["nonuniform"] = compliance_node(e.nonuniform);
    entries.push_back(std::move(node));
  }
  summary["results"] = std::move(entries);
  summary["best_uniform"] = data.best_uniform;
  summary["best_nonuniform"] = data.best_nonuniform;
  summary["violations"] = violation_nodes;
  data.summary_json = summary.dump(2) + "\n";

  std::vector<std::string> labels;
  std::vector<double> values;
  std::vector<double> widths;
  for (const ComplianceEntry& e : data.entries) {
    labels.push_back(e.label);
    values.push_back(e.uniform.estimate);
    widths.push_back(e.uniform.half_width);
  }
  data.svg = bar_chart("uniform compliance estimates", "estimate", labels,
                       values, widths);
  return data;
}

PhaseData phase(const ExperimentConfig& config) {
  SparseModel model = config.model();
  std::vector<int> m_range = config.m_range;
  if (m_range.empty())
    for (int m = 1; m <= model.n; ++m) m_range.push_back(m);

  std::vector<LabeledRegularizer> specs;
  specs.push_back({"l1", Regularizer::l1()});
  for (std::size_t i = 0; i < config.regularizers.size(); ++i)
    specs.push_back({label_index("spec", static_cast<int>(i)),
                     config.regularizers[i]});

  PhaseData data;
  for (const auto& s : specs) {
    PhaseTable table = phase_transition(model, s.value, m_range, config.trials,
                                        config.seed, config.workers);
    table.regularizer = s.label;
    data.tables.push_back(std::move(table));
  }

  json violation_nodes = json::array();
  for (const PhaseTable& table : data.tables) {
    for (const PhaseRow& row : table.rows) {
      if (row.m == model.n && row.rate != 1.0) {
        json v;
        v["message"] = table.regularizer +
                       ": success rate below 1 at m = n (rate " +
                       format_double(row.rate) + ")";
        v["label"] = table.regularizer;
        v["m"] = row.m;
        v["successes"] = row.successes;
        v["trials"] = row.trials;
        violation_nodes.push_back(std::move(v));
      }
    }
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
      for (std::size_t jrow = i + 1; jrow < table.rows.size(); ++jrow) {
        const PhaseRow& a = table.rows[i];
        const PhaseRow& b = table.rows[jrow];
        double va = a.rate * (1.0 - a.rate);
        double vb = b.rate * (1.0 - b.rate);
        double sigma = std::sqrt(std::max(va, vb) /
                                 static_cast<double>(std::max<long long>(
                                     1, a.trials)));
        if (b.rate < a.rate - 3.0 * sigma - 1e-12) {
          json v;
          std::ostringstream msg;
          msg << table.regularizer << ": rate drops from "
              << format_double(a.rate) << " at m=" << a.m << " to "
              << format_double(b.rate) << " at m=" << b.m
              << " beyond the 3-sigma band";
          v["message"] = msg.str();
          v["label"] = table.regularizer;
          v["m_low"] = a.m;
          v["m_high"] = b.m;
          v["rate_low"] = a.rate;
          v["rate_high"] = b.rate;
          v["sigma"] = sigma;
          violation_nodes.push_back(std::move(v));
        }
      }
    }
  }
  data.violations = messages(violation_nodes);
  data.csv = concat_phase_csv(data.tables);

  json summary;
  summary["experiment"] = "phase";
  summary["n"] = model.n;
  summary["k"] = model.k;
  summary["trials"] = config.trials;
  summary["seed"] = config.seed;
  summary["labels"] = label_map(specs);
  json tables = json::array();
  for (const PhaseTable& t : data.tables) {
    json node;
    node["regularizer"] = t.regularizer;
    json rows = json::array();
    for (const PhaseRow& r : t.rows) {
      json row;
      row["m"] = r.m;
      row["trials"] = r.trials;
      row["successes"] = r.successes;
      row["rate"] = r.rate;
      rows.push_back(std::move(row));
    }
    node["rows"] = std::move(rows);
    tables.push_back(std::move(node));
  }
  summary["results"] = std::move(tables);
  summary["violations"] = violation_nodes;
  data.summary_json = summary.dump(2) + "\n";

  std::vector<Series> series;
  for (const PhaseTable& t : data.tables) {
    Series s{t.regularizer, {}, {}};
    for (const PhaseRow& r : t.rows) {
      s.x.push_back(static_cast<double>(r.m));
      s.y.push_back(r.rate);
    }
    series.push_back(std::move(s));
  }
  data.svg = line_chart("exact recovery rate by measurement count",
                        "measurements m", "success rate", series);
  return data;
}

RipData rip_experiment(const ExperimentConfig& config) {
  SparseModel model = config.model();
  if (model.n < 2 * model.k)
    throw ConfigError("rip experiment needs n >= 2k");
  Regularizer R =
      config.regularizers.empty() ? Regularizer::l1() : config.regularizers[0];
  std::vector<int> m_range = config.m_range;
  if (m_range.empty())
    for (int m = 1; m <= model.n; ++m) m_range.push_back(m);

  RipData data;
  {
    MeasurementOperator identity(Mat::Identity(model.n, model.n));
    RipResult r = rip_constant(identity, model, config.budget);
    data.rows.push_back({model.n, model.k, model.n, "identity", r.delta,
                         config.seed});
  }
  for (int m : m_range) {
    for (int d = 0; d < config.gaussian_draws; ++d) {
      Rng rng = Rng::substream(config.seed, static_cast<std::uint64_t>(m),
                               static_cast<std::uint64_t>(d), stream::kMatrix);
      Mat M(m, model.n);
      for (int r = 0; r < m; ++r)
        M.row(r) =
            (rng.gaussian_vector(model.n) / std::sqrt(double(m))).transpose();
      RipResult rr =
          rip_constant(MeasurementOperator(std::move(M)), model, config.budget);
      char name[32];
      std::snprintf(name, sizeof(name), "gaussian#m%02dd%02d", m, d);
      data.rows.push_back({model.n, model.k, m, name, rr.delta, config.seed});
    }
  }

  data.nec = delta_nec(R, model, config.budget, config.seed);
  Vec z = data.nec.argmax_z;
  Mat complement =
      Mat::Identity(model.n, model.n) - (z * z.transpose()) / z.squaredNorm();
  std::vector<MeasurementOperator> ops;
  ops.emplace_back(std::move(complement));
  data.sandwich =
      verify_sandwich(R, model, ops, config.budget, config.seed);
  data.rows.push_back({model.n, model.k, model.n, "cone_complement",
                       data.sandwich.deltas[0], config.seed});

  json violation_nodes = json::array();
  if (!data.sandwich.consistent) {
    json v;
    v["message"] =
        "min operator constant exceeds the necessary threshold bound";
    v["min_delta"] = data.sandwich.min_delta;
    v["delta_nec"] = data.sandwich.delta_nec_value;
    v["witness_z"] = vec_node(z);
    violation_nodes.push_back(std::move(v));
  }
  data.violations = messages(violation_nodes);
  data.csv = rip_csv(data.rows);

  json summary;
  summary["experiment"] = "rip";
  summary["n"] = model.n;
  summary["k"] = model.k;
  summary["budget"] = config.budget;
  summary["seed"] = config.seed;
  summary["regularizer"] = R.descriptor();
  summary["delta_nec"] = functional_node(data.nec);
  json sw;
  sw["deltas"] = data.sandwich.deltas;
  sw["min_delta"] = data.sandwich.min_delta;
  sw["arg_min"] = data.sandwich.arg_min;
  sw["delta_nec_value"] = data.sandwich.delta_nec_value;
  sw["consistent"] = data.sandwich.consistent;
  summary["sandwich"] = std::move(sw);
  summary["violations"] = violation_nodes;
  data.summary_json = summary.dump(2) + "\n";

  std::vector<Series> series;
  for (int d = 0; d < config.gaussian_draws; ++d) {
    Series s{label_index("gaussian", d), {}, {}};
    for (const RipRow& r : data.rows) {
      char name[32];
      std::snprintf(name, sizeof(name), "gaussian#m%02dd%02d", r.m, d);
      if (r.operator_name == name) {
        s.x.push_back(static_cast<double>(r.m));
        s.y.push_back(r.delta);
      }
    }
    series.push_back(std::move(s));
  }
  if (!m_range.empty()) {
    Series nec{"necessary threshold",
               {static_cast<double>(m_range.front()),
                static_cast<double>(m_range.back())},
               {data.nec.value, data.nec.value}};
    series.push_back(std::move(nec));
  }
  data.svg = line_chart("operator constants against the necessary threshold",
                        "measurements m", "delta", series);
  return data;
}

int run_experiment(const ExperimentConfig& config) {
  std::string csv;
  std::string summary;
  std::string svg;
  std::vector<std::string> violations;
  if (config.experiment == "theorem1") {
    Theorem1Data d = theorem1(config);
    csv = std::move(d.csv);
    summary = std::move(d.summary_json);
    svg = std::move(d.svg);
    violations = std::move(d.violations);
  } else if (config.experiment == "compliance") {
    ComplianceData d = compliance(config);
    csv = std::move(d.csv);
    summary = std::move(d.summary_json);
    svg = std::move(d.svg);
    violations = std::move(d.violations);
  } else if (config.experiment == "phase") {
    PhaseData d = phase(config);
    csv = std::move(d.csv);
    summary = std::move(d.summary_json);
    svg = std::move(d.svg);
    violations = std::move(d.violations);
  } else if (config.experiment == "rip") {
    RipData d = rip_experiment(config);
    csv = std::move(d.csv);
    summary = std::move(d.summary_json);
    svg = std::move(d.svg);
    violations = std::move(d.violations);
  } else {
    throw ConfigError("unknown experiment '" + config.experiment + "'");
  }

  std::filesystem::path dir(config.out_dir);
  std::filesystem::create_directories(dir);
  std::string stamp = config.stamp.empty() ? utc_stamp() : config.stamp;
  std::filesystem::path csv_path = dir / (config.experiment + "_" + stamp + ".csv");
  std::filesystem::path summary_path = dir / "summary.json";
  write_file(csv_path, csv);
  write_file(summary_path, summary);
  std::cout << "wrote " << csv_path.string() << "\n";
  std::cout << "wrote " << summary_path.string() << "\n";
  if (config.svg && !svg.empty()) {
    std::filesystem::path svg_path =
        dir / (config.experiment + "_" + stamp + ".svg");
    write_file(svg_path, svg);
    std::cout << "wrote " << svg_path.string() << "\n";
  }
  for (const std::string& v : violations) std::cout << "violation: " << v << "\n";
  if (!violations.empty()) {
    std::cout << violations.size() << " violation(s); see summary.json for "
              << "the witnesses\n";
    return 2;
  }
  return 0;
}

int run_solve(const std::string& instance_json, const std::string& out_dir,
              const std::string& stamp) {
  RecoveryInstance instance = instance_from_json(instance_json);
  Vec x = solve(instance);

  bool certified = false;
  Certificate cert;
  bool weighted_form = instance.R.kind() == Regularizer::Kind::L1 ||
                       instance.R.kind() == Regularizer::Kind::WeightedL1;
  if (instance.x0 && weighted_form) {
    cert = nonuniform_certificate(instance.M, *instance.x0, instance.R);
    certified = true;
  }

  std::filesystem::path dir(out_dir);
  std::filesystem::create_directories(dir);
  std::string tag = stamp.empty() ? utc_stamp() : stamp;
  std::filesystem::path out_path = dir / ("solve_" + tag + ".json");
  write_file(out_path,
             instance_to_json(instance, &x, certified ? &cert : nullptr));

  std::cout << "objective " << format_double(evaluate(instance.R, x)) << "\n";
  if (instance.x0) {
    double dist = (x - *instance.x0).norm();
    std::cout << "distance to supplied signal " << format_double(dist) << "\n";
  }
  if (certified)
    std::cout << "certificate " << (cert.holds ? "holds" : "fails")
              << ", margin " << format_double(cert.margin) << "\n";
  std::cout << "wrote " << out_path.string() << "\n";
  return 0;
}

}  // namespace compass::experiments
