// Copyright 2026 The sbalab Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Seeded experiments driven by JSON configs, and their CSV / JSON results.
//
// Config (one experiment per file; unknown keys are rejected):
//   {
//     "experiment": "poa" | "smoothness" | "approx" | "lemma-suite" | "instance-repro",
//     "instance":  {"generator": "star", "params": {"m": 8, "eps": 0.01}}
//                | {"file": "profile.json"},
//     "mechanism": {"kind": "single-bid" | "grand-bundle" | "hybrid", "p": 0.5},
//     "grid":      {"ratio": 1.05},
//     "rounds":    10000,
//     "seeds":     [0, 1],
//     "suite":     {"name": "...", "profiles": 20, "trials": 50, "m": 8, "d": 2, "c": 1.0},
//     "output":    "results.csv"
//   }
//
// CSV columns: experiment, seed, m, n, d, mechanism, opt_sw, eq_sw, ratio,
// bound, regret, pass. Numbers print with 9 significant digits; fields that
// do not apply are empty. For smoothness runs `ratio` is the smallest margin
// LHS - RHS and `bound` the implied welfare-ratio bound max(1, mu) / lambda.
// For approx and lemma-suite runs `ratio` is the worst observed quantity of
// the suite (see suite descriptions in README) and `bound` its limit.

#ifndef SBALAB_HARNESS_HPP_
#define SBALAB_HARNESS_HPP_

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sbalab/instances.hpp"
#include "sbalab/learning.hpp"

namespace sbalab {

enum class ExperimentKind { kPoa, kSmoothness, kApprox, kLemmaSuite, kInstanceRepro };
std::string experiment_name(ExperimentKind k);

struct InstanceSpec {
  std::string generator;  // empty when `file` is set
  std::map<std::string, double> params;
  std::filesystem::path file;
};

struct SuiteSpec {
  std::string name;
  int profiles = 20;
  int trials = 50;
  int m = 6;
  int d = 1;
  double c = 1.0;
};

struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::kInstanceRepro;
  std::optional<InstanceSpec> instance;
  MechanismKind mechanism = MechanismKind::kSingleBid;
  double p = 0.5;
  double grid_ratio = 1.05;
  int rounds = 10000;
  std::vector<std::uint64_t> seeds{0};
  std::optional<SuiteSpec> suite;
  std::filesystem::path output;
  // FNV-1a of the canonical JSON text of the config
  std::string hash;
};

// Throws ConfigError naming the JSON path of the offending field.
ExperimentConfig parse_config_text(const std::string& text);
ExperimentConfig parse_config(const std::filesystem::path& path);

struct Assertion {
  std::string name;
  bool pass = true;
  std::string detail;
};

struct ResultRecord {
  std::string experiment;
  std::string config_hash;
  std::uint64_t seed = 0;
  std::optional<int> m;
  std::optional<int> n;
  std::optional<int> d;
  std::string mechanism;
  std::optional<double> opt_sw;
  std::optional<double> eq_sw;
  std::optional<double> ratio;
  std::optional<double> bound;
  std::optional<double> regret;
  std::vector<Assertion> assertions;
  // not written to the CSV, so outputs stay byte-identical across runs
  double wall_seconds = 0.0;

  bool pass() const;
  bool operator==(const ResultRecord& o) const;
};

// Builds a named instance; unknown generators or parameters throw ConfigError.
InstanceBundle make_instance(const std::string& generator,
                             const std::map<std::string, double>& params);

// One record per seed, in seed order; seeds run concurrently.
std::vector<ResultRecord> run_experiment(const ExperimentConfig& config);

enum class ResultFormat { kCsv, kJson };
ResultFormat parse_format(const std::string& name);

std::string results_to_csv(const std::vector<ResultRecord>& records);
std::string results_to_json(const std::vector<ResultRecord>& records);
std::vector<ResultRecord> results_from_json(const std::string& text);
// Atomic write in the given format.
void write_results(const std::vector<ResultRecord>& records, const std::filesystem::path& path,
                   ResultFormat format);

// 0 when every assertion passed, 2 otherwise.
int exit_code(const std::vector<ResultRecord>& records);

// Threads from SBALAB_THREADS, when set.
void apply_thread_env();

// The coarse-correlated welfare-ratio bound for profiles of maxima over
// complement-degree-d valuations on m goods, before the regret slack:
// (d+1)(d+2) H(m/(d+1)) / (1 - e^-(d+1)).
double cce_ratio_bound(int m, int d);

}  // namespace sbalab

#endif  // SBALAB_HARNESS_HPP_
