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

#include "sbalab/harness.hpp"

#include <gtest/gtest.h>
#include <omp.h>

#include <filesystem>

#include "sbalab/valuation_io.hpp"

namespace sbalab {
namespace {

TEST(Harness, ParsesAFullConfig) {
  const ExperimentConfig c = parse_config_text(R"({
    "experiment": "poa",
    "instance": {"generator": "random-mps-d", "params": {"m": 6, "d": 2}},
    "mechanism": {"kind": "hybrid", "p": 0.25},
    "grid": {"ratio": 1.1},
    "rounds": 50,
    "seeds": [3, 4],
    "output": "out.csv"
  })");
  EXPECT_EQ(c.kind, ExperimentKind::kPoa);
  EXPECT_EQ(c.mechanism, MechanismKind::kHybrid);
  EXPECT_DOUBLE_EQ(c.p, 0.25);
  EXPECT_DOUBLE_EQ(c.grid_ratio, 1.1);
  EXPECT_EQ(c.rounds, 50);
  EXPECT_EQ(c.seeds, (std::vector<std::uint64_t>{3, 4}));
  ASSERT_TRUE(c.instance.has_value());
  EXPECT_DOUBLE_EQ(c.instance->params.at("m"), 6.0);
  EXPECT_EQ(c.output, "out.csv");
  EXPECT_FALSE(c.hash.empty());
}

TEST(Harness, ErrorsNameTheJsonPath) {
  const auto path_of = [](const std::string& text) {
    try {
      parse_config_text(text);
    } catch (const ConfigError& e) {
      return e.path();
    }
    return std::string("no error");
  };
  EXPECT_EQ(path_of(R"({"experiment": "poa", "bogus": 1})"), "$.bogus");
  EXPECT_EQ(path_of(R"({"experiment": "nope"})"), "$.experiment");
  EXPECT_EQ(path_of(R"({"experiment": "poa", "rounds": -1, "instance": {"generator": "star"}})"),
            "$.rounds");
  EXPECT_NE(path_of("{not json"), "no error");
}

TEST(Harness, HashIgnoresKeyOrder) {
  const ExperimentConfig a = parse_config_text(
      R"({"experiment": "instance-repro", "instance": {"generator": "star"}, "seeds": [1]})");
  const ExperimentConfig b = parse_config_text(
      R"({"seeds": [1], "instance": {"generator": "star"}, "experiment": "instance-repro"})");
  const ExperimentConfig c = parse_config_text(
      R"({"seeds": [2], "instance": {"generator": "star"}, "experiment": "instance-repro"})");
  EXPECT_EQ(a.hash, b.hash);
  EXPECT_NE(a.hash, c.hash);
}

TEST(Harness, UnknownGeneratorParameter) {
  EXPECT_THROW(make_instance("star", {{"k", 3.0}}), ConfigError);
  EXPECT_THROW(make_instance("nope", {}), ConfigError);
  EXPECT_EQ(make_instance("star", {{"m", 5.0}}).vals.front().m(), 5);
}

TEST(Harness, ReproStarPasses) {
  const ExperimentConfig c = parse_config_text(
      R"({"experiment": "instance-repro", "instance": {"generator": "star", "params": {"m": 8, "eps": 0.01}}})");
  const auto records = run_experiment(c);
  ASSERT_EQ(records.size(), 1u);
  EXPECT_TRUE(records[0].pass());
  EXPECT_NEAR(*records[0].eq_sw, 0.885, 1e-6);
  EXPECT_EQ(exit_code(records), 0);
}

TEST(Harness, CsvLayout) {
  ResultRecord r;
  r.experiment = "poa";
  r.seed = 7;
  r.m = 4;
  r.mechanism = "single-bid";
  r.ratio = 1.0 / 3.0;
  r.assertions.push_back({"x", false, ""});
  const std::string csv = results_to_csv({r});
  EXPECT_EQ(csv,
            "experiment,seed,m,n,d,mechanism,opt_sw,eq_sw,ratio,bound,regret,pass\n"
            "poa,7,4,,,single-bid,,,0.333333333,,,false\n");
  EXPECT_EQ(exit_code({r}), 2);
}

TEST(Harness, JsonRoundTripAndAtomicWrite) {
  const ExperimentConfig c = parse_config_text(
      R"({"experiment": "lemma-suite", "suite": {"name": "crossing", "m": 6, "d": 1, "profiles": 5}, "seeds": [0, 1]})");
  const auto records = run_experiment(c);
  EXPECT_EQ(results_from_json(results_to_json(records)), records);
  const auto dir = std::filesystem::temp_directory_path() / "sbalab_harness_test";
  std::filesystem::create_directories(dir);
  write_results(records, dir / "r.csv", ResultFormat::kCsv);
  EXPECT_EQ(read_text(dir / "r.csv"), results_to_csv(records));
  EXPECT_FALSE(std::filesystem::exists(dir / "r.csv.tmp"));
  std::filesystem::remove_all(dir);
  EXPECT_THROW(parse_format("xml"), ConfigError);
}

TEST(Harness, OutputDoesNotDependOnThreadCount) {
  const ExperimentConfig c = parse_config_text(R"({
    "experiment": "poa",
    "instance": {"generator": "random-mps-d", "params": {"n": 2, "m": 5, "d": 1}},
    "rounds": 200, "seeds": [0, 1, 2, 3]})");
  const int before = omp_get_max_threads();
  omp_set_num_threads(1);
  const std::string one = results_to_csv(run_experiment(c));
  omp_set_num_threads(4);
  const std::string four = results_to_csv(run_experiment(c));
  omp_set_num_threads(before);
  EXPECT_EQ(one, four);
}

TEST(Harness, UnknownOptimumLeavesRatioEmpty) {
  const auto records = run_experiment(parse_config_text(R"({
    "experiment": "poa",
    "instance": {"generator": "random-mps-d", "params": {"n": 2, "m": 20, "d": 1}},
    "rounds": 20})"));
  ASSERT_EQ(records.size(), 1u);
  EXPECT_FALSE(records[0].opt_sw.has_value());
  EXPECT_FALSE(records[0].ratio.has_value());
  EXPECT_TRUE(records[0].eq_sw.has_value());
  EXPECT_TRUE(records[0].pass());
}

TEST(Harness, SuitesRun) {
  for (const char* text : {
           R"({"experiment": "smoothness", "suite": {"name": "block-uniform", "m": 4, "d": 2, "profiles": 3, "trials": 4}})",
           R"({"experiment": "smoothness", "mechanism": {"kind": "hybrid"}, "suite": {"name": "hybrid", "m": 4, "profiles": 3, "trials": 4}})",
           R"({"experiment": "approx", "suite": {"name": "pointwise", "m": 6, "d": 2, "profiles": 5}})",
           R"({"experiment": "approx", "suite": {"name": "pairing", "m": 6, "d": 2, "profiles": 5}})",
           R"({"experiment": "lemma-suite", "suite": {"name": "dep-plus", "m": 5, "profiles": 5}})"}) {
    const auto records = run_experiment(parse_config_text(text));
    ASSERT_EQ(records.size(), 1u);
    EXPECT_TRUE(records[0].pass()) << text;
  }
}

TEST(Harness, CceBound) {
  // (d+1)(d+2) H(m/(d+1)) / (1 - e^-(d+1)) with m = 4, d = 1: 6 * 1.5 / (1 - e^-2)
  EXPECT_NEAR(cce_ratio_bound(4, 1), 6.0 * 1.5 / (1.0 - std::exp(-2.0)), 1e-12);
}

}  // namespace
}  // namespace sbalab
