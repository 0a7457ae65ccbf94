#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "compass/cones.hpp"
#include "compass/recovery.hpp"
#include "compass/regularizer.hpp"
#include "compass/rip.hpp"
#include "compass/types.hpp"

namespace compass {

/// {"n": ..., "k": ..., "atoms": [[...], ...]}
std::string atom_set_to_json(const AtomSet& atoms);
AtomSet atom_set_from_json(const std::string& text);

/// {"kind": "l1"} | {"kind": "wl1", "weights": [...]} |
/// {"kind": "ksupport", "k": ...} | {"kind": "atomic", "atoms": {...}}
std::string regularizer_to_json(const Regularizer& R);
Regularizer regularizer_from_json(const std::string& text);

std::string compliance_to_json(const ComplianceReport& report);

struct FunctionalRow {
  std::string regularizer;
  int n = 0;
  int k = 0;
  std::string functional;
  double value = 0.0;
  long long restarts = 0;
  std::uint64_t seed = 0;
};
std::string functional_csv(const std::vector<FunctionalRow>& rows);

std::string phase_csv(const PhaseTable& table);

struct RipRow {
  int n = 0;
  int k = 0;
  int m = 0;
  std::string operator_name;
  double delta = 0.0;
  std::uint64_t seed = 0;
};
std::string rip_csv(const std::vector<RipRow>& rows);

/// Instance dump with the operator stored row-major; solution and
/// certificate are included when present.
std::string instance_to_json(const RecoveryInstance& instance,
                             const Vec* solution = nullptr,
                             const Certificate* certificate = nullptr);
RecoveryInstance instance_from_json(const std::string& text);

}  // namespace compass
