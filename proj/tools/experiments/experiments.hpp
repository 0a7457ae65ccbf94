#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <compass/cones.hpp>
#include <compass/recovery.hpp>
#include <compass/regularizer.hpp>
#include <compass/rip.hpp>
#include <compass/serialize.hpp>

namespace compass::experiments {

struct ExperimentConfig {
  std::string experiment;  // theorem1 | compliance | phase | rip
  int n = 3;
  int k = 1;
  std::vector<Regularizer> regularizers;  // explicit extra specs
  long long samples = 100000;
  long long trials = 500;
  long long budget = 10000;
  int weighted_draws = 200;
  int atomic_draws = 100;
  int atoms_per_set = 32;
  int gaussian_draws = 3;
  std::vector<int> m_range;  // defaults to 1..n
  double tol_b = 1e-4;
  double tol_d = 1e-3;
  int workers = 0;
  bool svg = true;
  std::uint64_t seed = 0;
  std::string out_dir = ".";
  std::string stamp;  // filename timestamp override

  SparseModel model() const { return SparseModel(n, k); }
};

/// Parses the JSON document and applies defaults; throws ConfigError on
/// malformed or out-of-range fields. The experiment name and seed come from
/// the command line, not the file.
ExperimentConfig parse_config(const std::string& json_text);

/// Log-uniform coordinate weights in [1/10, 10].
Regularizer draw_weighted_l1(int n, std::uint64_t seed, int draw);

/// Atom sample rejected until the atoms span the whole space, so the gauge
/// is a norm.
AtomSet draw_spanning_atoms(const SparseModel& model, int count,
                            std::uint64_t seed, int draw);

struct LabeledRegularizer {
  std::string label;
  Regularizer value;
};

/// The sweep family: l1 first, then weighted draws, then atomic draws, then
/// any explicit specs from the config.
std::vector<LabeledRegularizer> sweep_regularizers(
    const ExperimentConfig& config);

/// Compliance spec list: l1, three weighted draws, five atomic draws, plus
/// explicit specs.
std::vector<LabeledRegularizer> compliance_regularizers(
    const ExperimentConfig& config);

struct Theorem1Data {
  std::vector<FunctionalRow> rows;
  std::vector<std::string> violations;
  std::string csv;
  std::string summary_json;
  std::string svg;
};
Theorem1Data theorem1(const ExperimentConfig& config);

struct ComplianceEntry {
  std::string label;
  ComplianceReport uniform;
  ComplianceReport nonuniform;
};
struct ComplianceData {
  std::vector<ComplianceEntry> entries;
  std::string best_uniform;
  std::string best_nonuniform;
  std::vector<std::string> violations;
  std::string csv;
  std::string summary_json;
  std::string svg;
};
ComplianceData compliance(const ExperimentConfig& config);

struct PhaseData {
  std::vector<PhaseTable> tables;
  std::vector<std::string> violations;
  std::string csv;
  std::string summary_json;
  std::string svg;
};
PhaseData phase(const ExperimentConfig& config);

struct RipData {
  std::vector<RipRow> rows;
  FunctionalResult nec;
  SandwichReport sandwich;
  std::vector<std::string> violations;
  std::string csv;
  std::string summary_json;
  std::string svg;
};
RipData rip_experiment(const ExperimentConfig& config);

/// Writes <experiment>_<stamp>.csv, summary.json, and the optional SVG under
/// out_dir. Returns 0, or 2 when the run's own assertions were violated.
int run_experiment(const ExperimentConfig& config);

/// One-off instance: solve, certify when x0 is present, dump the annotated
/// instance as solve_<stamp>.json. Returns 0.
int run_solve(const std::string& instance_json, const std::string& out_dir,
              const std::string& stamp);

}  // namespace compass::experiments
