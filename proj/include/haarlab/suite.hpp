#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "haarlab/tree_io.hpp"

namespace haarlab {

struct SuiteConfig {
  std::uint64_t seed = 42;
  std::size_t trees = 50;              // random trees for the partial-sum and packing runs
  int depth = 6;
  std::size_t constant_trees = 20;     // trees with at most 12 atoms for the {0,1} vs [-1,1] comparison
  std::uint64_t continuous_draws = 10000;
  std::size_t scan_instances = 200;
  std::size_t draws = 1000;            // outer-space, two-weight and decomposition draws
  std::size_t exact_instances = 100;   // rational two-weight instances
  std::uint64_t bellman_samples = 1000000;
  double tol = 1e-9;
};

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string summary;
  Json details;
  double seconds = 0;  // wall time, kept out of the JSON report
};

CriterionResult run_counterexample_criterion(const SuiteConfig& cfg);
CriterionResult run_partial_sum_criterion(const SuiteConfig& cfg);
CriterionResult run_constant_criterion(const SuiteConfig& cfg);
CriterionResult run_linearity_criterion(const SuiteConfig& cfg);
CriterionResult run_outer_space_criterion(const SuiteConfig& cfg);
CriterionResult run_bellman_criterion(const SuiteConfig& cfg);
CriterionResult run_packing_criterion(const SuiteConfig& cfg);
CriterionResult run_t1_criterion(const SuiteConfig& cfg);
CriterionResult run_sigma_criterion(const SuiteConfig& cfg);

// Every criterion above, in order.
std::vector<CriterionResult> run_suite(const SuiteConfig& cfg);

Json to_json(const CriterionResult& r);

}  // namespace haarlab
