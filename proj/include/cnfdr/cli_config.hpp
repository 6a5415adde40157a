#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cnfdr/pvalues.hpp"
#include "cnfdr/simharness.hpp"

namespace cnfdr {

// One `simulate` invocation: where the base configuration comes from (a
// bundled preset or a JSON file) plus the flag overrides layered on top.
struct CliRun {
  int preset = 0;            // 1..5; 0 when a config file is used
  std::string config_path;   // empty when a preset is used
  std::optional<std::size_t> n;
  std::optional<std::size_t> reps;
  std::optional<double> alpha;
  std::optional<std::uint64_t> seed;
  std::optional<std::vector<Method>> methods;
  std::optional<double> sum_lower;
  std::optional<PairMargin> pair_margin;
};

// The five bundled study models with the study defaults
// (n = 5000, reps = 200, alpha = 0.25, seed = 1, all four methods).
SimConfig preset_config(int id);

// Reads a JSON config file.  Top-level keys: exactly one of "preset" or
// "model", plus optional "n", "reps", "alpha", "seed", "methods", "variant".
// Unknown or ill-typed keys are rejected with their full key path.
SimConfig parse_config_file(const std::string& path);

// Base configuration (preset or file) with the overrides applied.
SimConfig parse_config(const CliRun& run);

// "seq,glb,max,mix" -> methods; throws on unknown names.
std::vector<Method> parse_method_list(const std::string& csv);

// Writes metrics.csv, curves.csv and coeffs.csv into dir (which must exist).
// Values carry 6 significant digits; rows are ordered by method name, then
// index, so identical reports serialize to identical bytes.  An absent pFDR
// (no repetition rejected anything) is an empty field.
void write_outputs(const SimReport& report, const std::string& dir);

}  // namespace cnfdr
