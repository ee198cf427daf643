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

// Command-line front end. Every experiment subcommand builds a JSON config
// and goes through the same runner as `sbalab run <config.json>`.
//
// Exit status: 0 when every assertion holds, 2 when one fails, 1 on errors.
// Wall time goes to stderr only.

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "sbalab/harness.hpp"
#include "sbalab/hierarchy.hpp"
#include "sbalab/learning.hpp"
#include "sbalab/valuation_io.hpp"

namespace {

using nlohmann::json;
using namespace sbalab;

// "key=value" pairs into a params object.
json parse_params(const std::vector<std::string>& pairs) {
  json params = json::object();
  for (const std::string& kv : pairs) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw ConfigError("--param", "expected key=value, got '" + kv + "'");
    }
    const std::string value = kv.substr(eq + 1);
    std::size_t used = 0;
    double x = 0.0;
    try {
      x = std::stod(value, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != value.size()) throw ConfigError("--param " + kv.substr(0, eq), "expected a number");
    params[kv.substr(0, eq)] = x;
  }
  return params;
}

struct Common {
  std::vector<std::uint64_t> seeds{0};
  std::string out;
  std::string format = "csv";
};

void add_common(CLI::App* app, Common& c) {
  app->add_option("--seed", c.seeds, "seed(s); one record per seed");
  app->add_option("--out", c.out, "results file (stdout when omitted)");
  app->add_option("--format", c.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
}

int execute(json config, const Common& c) {
  config["seeds"] = c.seeds;
  const ExperimentConfig cfg = parse_config_text(config.dump());
  const auto start = std::chrono::steady_clock::now();
  const std::vector<ResultRecord> records = run_experiment(cfg);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const ResultFormat fmt = parse_format(c.format);
  std::filesystem::path out = c.out.empty() ? cfg.output : std::filesystem::path(c.out);
  if (out.empty()) {
    std::cout << (fmt == ResultFormat::kCsv ? results_to_csv(records) : results_to_json(records));
  } else {
    write_results(records, out, fmt);
  }
  for (const ResultRecord& r : records) {
    for (const Assertion& a : r.assertions) {
      if (!a.pass) {
        std::cerr << "FAILED seed " << r.seed << ": " << a.name
                  << (a.detail.empty() ? "" : " (" + a.detail + ")") << "\n";
      }
    }
  }
  std::fprintf(stderr, "wall time %.3f s\n", secs);
  return exit_code(records);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"sbalab: single-bid auction experiments"};
  app.require_subcommand(1);

  Common common;
  std::string instance;
  std::vector<std::string> params;
  double p = 0.5;

  auto* repro = app.add_subcommand("repro", "reproduce a lower-bound instance");
  repro->add_option("instance", instance, "star | sm-star | hybrid-lb | pos-layered | "
                                          "tight-partition | complete-hypergraph")
      ->required();
  repro->add_option("--param", params, "generator parameter key=value");
  repro->add_option("--p", p, "hybrid single-bid probability");
  add_common(repro, common);

  std::string valuation_file;
  std::string mechanism = "single-bid";
  int rounds = 10000;
  std::string history;
  auto* learn = app.add_subcommand("learn", "no-regret play and its welfare ratio");
  learn->add_option("--instance", instance, "generator name");
  learn->add_option("--valuation", valuation_file, "valuation profile JSON");
  learn->add_option("--param", params, "generator parameter key=value");
  learn->add_option("--mechanism", mechanism, "single-bid | grand-bundle | hybrid");
  learn->add_option("--p", p, "hybrid single-bid probability");
  learn->add_option("--rounds", rounds, "rounds of play");
  learn->add_option("--history", history, "per-round CSV of the first seed's play");
  add_common(learn, common);

  std::string suite;
  int m = 6;
  int d = 1;
  double c = 1.0;
  int profiles = 20;
  int trials = 50;
  auto* smooth = app.add_subcommand("smooth", "numeric smoothness suites");
  smooth->add_option("--suite", suite, "block-uniform | grand-dominant | small-bundles | "
                                       "lopsided-grand | spread-single-bid | general-single-bid | hybrid")
      ->required();
  smooth->add_option("--m", m);
  smooth->add_option("--d", d);
  smooth->add_option("--c", c);
  smooth->add_option("--p", p);
  smooth->add_option("--profiles", profiles);
  smooth->add_option("--trials", trials);
  add_common(smooth, common);

  auto* approx = app.add_subcommand("approx", "pointwise approximation suites");
  approx->add_option("--suite", suite, "pointwise | pairing")->required();
  approx->add_option("--m", m);
  approx->add_option("--d", d);
  approx->add_option("--profiles", profiles);
  add_common(approx, common);

  auto* lemma = app.add_subcommand("lemma", "structural property suites");
  lemma->add_option("--suite", suite, "crossing | dep-plus | graph-properties")->required();
  lemma->add_option("--m", m);
  lemma->add_option("--d", d);
  lemma->add_option("--profiles", profiles);
  add_common(lemma, common);

  auto* classify_cmd = app.add_subcommand("classify", "class labels of a valuation");
  classify_cmd->add_option("valuation", valuation_file, "valuation or profile JSON")->required();

  std::string gen_out;
  auto* gen = app.add_subcommand("gen", "write an instance as JSON plus a meta sidecar");
  gen->add_option("instance", instance, "generator name")->required();
  gen->add_option("--param", params, "generator parameter key=value");
  gen->add_option("--out", gen_out, "profile JSON path; meta goes to <out>.meta.json")->required();

  std::string config_path;
  auto* run = app.add_subcommand("run", "run a JSON experiment config");
  run->add_option("config", config_path)->required();
  run->add_option("--out", common.out);
  run->add_option("--format", common.format)->check(CLI::IsMember({"csv", "json"}));

  CLI11_PARSE(app, argc, argv);

  try {
    apply_thread_env();
    if (*repro) {
      json cfg = {{"experiment", "instance-repro"},
                  {"instance", {{"generator", instance}, {"params", parse_params(params)}}},
                  {"mechanism", {{"kind", instance == "hybrid-lb" ? "hybrid" : "single-bid"}, {"p", p}}}};
      return execute(cfg, common);
    }
    if (*learn) {
      json inst;
      if (!valuation_file.empty()) {
        inst = {{"file", valuation_file}};
      } else {
        inst = {{"generator", instance.empty() ? "random-mps-d" : instance},
                {"params", parse_params(params)}};
      }
      json cfg = {{"experiment", "poa"},
                  {"instance", inst},
                  {"mechanism", {{"kind", mechanism}, {"p", p}}},
                  {"rounds", rounds}};
      if (!history.empty()) {
        const ExperimentConfig parsed = parse_config_text(cfg.dump());
        InstanceBundle b;
        if (!valuation_file.empty()) {
          b.vals = profile_from_json(read_text(valuation_file));
        } else {
          b = make_instance(parsed.instance->generator, parsed.instance->params);
        }
        const MechanismSpec mech{parsed.mechanism, parsed.p, b.meta.tie};
        const auto grids = default_grids(b.vals, b.meta.critical_bids, parsed.grid_ratio);
        const PlayHistory h = no_regret_run(b.vals, mech, grids, rounds, common.seeds.front());
        std::ofstream os(history);
        if (!os) throw IoError("cannot write " + history);
        write_history_csv(os, h, grids);
      }
      return execute(cfg, common);
    }
    if (*smooth) {
      json cfg = {{"experiment", "smoothness"},
                  {"mechanism", {{"kind", suite == "hybrid" ? "hybrid" : "single-bid"}, {"p", p}}},
                  {"suite", {{"name", suite}, {"m", m}, {"d", d}, {"c", c},
                             {"profiles", profiles}, {"trials", trials}}}};
      return execute(cfg, common);
    }
    if (*approx || *lemma) {
      json cfg = {{"experiment", *approx ? "approx" : "lemma-suite"},
                  {"suite", {{"name", suite}, {"m", m}, {"d", d}, {"profiles", profiles}}}};
      return execute(cfg, common);
    }
    if (*classify_cmd) {
      for (const Valuation& v : profile_from_json(read_text(valuation_file))) {
        std::cout << classification_to_json(classify(v));
      }
      return 0;
    }
    if (*gen) {
      json ps = parse_params(params);
      std::map<std::string, double> pm;
      for (const auto& [k, v] : ps.items()) pm[k] = v.get<double>();
      const InstanceBundle b = make_instance(instance, pm);
      write_text_atomic(gen_out, profile_to_json(b.vals));
      write_text_atomic(gen_out + ".meta.json", meta_to_json(b.meta));
      return 0;
    }
    if (*run) {
      const ExperimentConfig cfg = parse_config(config_path);
      const auto start = std::chrono::steady_clock::now();
      const auto records = run_experiment(cfg);
      const double secs =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      const std::filesystem::path out = common.out.empty() ? cfg.output : std::filesystem::path(common.out);
      const ResultFormat fmt = parse_format(common.format);
      if (out.empty()) {
        std::cout << (fmt == ResultFormat::kCsv ? results_to_csv(records) : results_to_json(records));
      } else {
        write_results(records, out, fmt);
      }
      std::fprintf(stderr, "wall time %.3f s\n", secs);
      return exit_code(records);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
