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

#include "sbalab/valuation_io.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"

namespace sbalab {

using nlohmann::json;

namespace {

json items_json(const ItemSet& s) { return json(s.members()); }

json edges_json(const HypergraphValuation& h) {
  json edges = json::array();
  for (const Hyperedge& e : h.edges()) {
    edges.push_back({{"items", items_json(e.members)}, {"weight", e.weight}});
  }
  return edges;
}

json valuation_json(const Valuation& v) {
  json j;
  j["m"] = v.m();
  if (v.is_hypergraph()) {
    j["edges"] = edges_json(v.hypergraph());
  } else {
    json parts = json::array();
    for (const HypergraphValuation& p : v.max().parts()) parts.push_back({{"edges", edges_json(p)}});
    j["parts"] = parts;
  }
  return j;
}

const json& field(const json& j, const std::string& key, const std::string& path) {
  if (!j.is_object()) throw ConfigError(path, "expected an object");
  const auto it = j.find(key);
  if (it == j.end()) throw ConfigError(path + "." + key, "missing field");
  return *it;
}

ItemSet parse_items(const json& j, const std::string& path) {
  if (!j.is_array()) throw ConfigError(path, "expected an array of item indices");
  ItemSet s;
  for (std::size_t k = 0; k < j.size(); ++k) {
    if (!j[k].is_number_integer()) {
      throw ConfigError(path + "[" + std::to_string(k) + "]", "expected an integer");
    }
    const int item = j[k].get<int>();
    if (item < 0 || item >= kMaxItems) {
      throw ValidationError(ValidationError::Kind::kItemOutOfRange,
                            path + ": item " + std::to_string(item) + " out of range");
    }
    s.insert(item);
  }
  return s;
}

double parse_number(const json& j, const std::string& path) {
  if (!j.is_number()) throw ConfigError(path, "expected a number");
  return j.get<double>();
}

HypergraphValuation parse_hypergraph(int m, const json& edges, const std::string& path) {
  if (!edges.is_array()) throw ConfigError(path, "expected an array of edges");
  std::vector<Hyperedge> out;
  for (std::size_t k = 0; k < edges.size(); ++k) {
    const std::string p = path + "[" + std::to_string(k) + "]";
    out.push_back({parse_items(field(edges[k], "items", p), p + ".items"),
                   parse_number(field(edges[k], "weight", p), p + ".weight")});
  }
  return validate_hypergraph(m, std::move(out));
}

Valuation parse_valuation(const json& j, const std::string& path) {
  const json& mj = field(j, "m", path);
  if (!mj.is_number_integer()) throw ConfigError(path + ".m", "expected an integer");
  const int m = mj.get<int>();
  if (m < 0 || m > kMaxItems) throw ConfigError(path + ".m", "item count out of range");
  const bool has_edges = j.contains("edges");
  const bool has_parts = j.contains("parts");
  if (has_edges == has_parts) throw ConfigError(path, "exactly one of edges / parts required");
  if (has_edges) return Valuation(parse_hypergraph(m, j["edges"], path + ".edges"));
  const json& parts = j["parts"];
  if (!parts.is_array() || parts.empty()) throw ConfigError(path + ".parts", "expected a nonempty array");
  std::vector<HypergraphValuation> hs;
  for (std::size_t k = 0; k < parts.size(); ++k) {
    const std::string p = path + ".parts[" + std::to_string(k) + "]";
    hs.push_back(parse_hypergraph(m, field(parts[k], "edges", p), p + ".edges"));
  }
  return Valuation(MaxValuation(std::move(hs)));
}

json parse_text(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError("$", std::string("malformed JSON: ") + e.what());
  }
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

const char* tie_name(DemandTie t) {
  return t == DemandTie::kMostItems ? "most-items" : "fewest-items";
}

}  // namespace

std::string valuation_to_json(const Valuation& v) { return dump(valuation_json(v)); }

Valuation valuation_from_json(const std::string& text) {
  return parse_valuation(parse_text(text), "$");
}

std::string profile_to_json(std::span<const Valuation> vals) {
  json agents = json::array();
  for (const Valuation& v : vals) agents.push_back(valuation_json(v));
  return dump({{"agents", agents}});
}

std::vector<Valuation> profile_from_json(const std::string& text) {
  const json j = parse_text(text);
  std::vector<Valuation> out;
  if (j.is_object() && j.contains("agents")) {
    const json& agents = j["agents"];
    if (!agents.is_array()) throw ConfigError("$.agents", "expected an array");
    for (std::size_t k = 0; k < agents.size(); ++k) {
      out.push_back(parse_valuation(agents[k], "$.agents[" + std::to_string(k) + "]"));
    }
  } else {
    out.push_back(parse_valuation(j, "$"));
  }
  return out;
}

std::string meta_to_json(const InstanceMeta& meta) {
  json params = json::object();
  for (const auto& [k, v] : meta.params) params[k] = v;
  json demand = json::array();
  for (DemandTie t : meta.tie.demand) demand.push_back(tie_name(t));
  json profiles = json::array();
  for (const ShippedProfile& p : meta.profiles) {
    profiles.push_back({{"branch", std::string(branch_name(p.branch))}, {"bids", p.bids}});
  }
  json blocks = json::array();
  for (const ItemSet& b : meta.expected_blocks) blocks.push_back(items_json(b));
  return dump({{"name", meta.name},
               {"params", params},
               {"expected_opt", meta.expected_opt},
               {"expected_eq_sw", meta.expected_eq_sw},
               {"expected_ratio", meta.expected_ratio},
               {"tie_order", meta.tie.order},
               {"demand_ties", demand},
               {"critical_bids", meta.critical_bids},
               {"profiles", profiles},
               {"expected_blocks", blocks}});
}

InstanceMeta meta_from_json(const std::string& text) {
  const json j = parse_text(text);
  InstanceMeta m;
  try {
    m.name = j.at("name").get<std::string>();
    for (const auto& [k, v] : j.at("params").items()) m.params.emplace_back(k, v.get<double>());
    m.expected_opt = j.at("expected_opt").get<double>();
    m.expected_eq_sw = j.at("expected_eq_sw").get<double>();
    m.expected_ratio = j.at("expected_ratio").get<double>();
    m.tie.order = j.at("tie_order").get<std::vector<int>>();
    for (const json& t : j.at("demand_ties")) {
      const auto s = t.get<std::string>();
      if (s != "most-items" && s != "fewest-items") throw ConfigError("$.demand_ties", "unknown tie " + s);
      m.tie.demand.push_back(s == "most-items" ? DemandTie::kMostItems : DemandTie::kFewestItems);
    }
    m.critical_bids = j.at("critical_bids").get<std::vector<double>>();
    for (const json& p : j.at("profiles")) {
      const auto b = p.at("branch").get<std::string>();
      m.profiles.push_back({b == branch_name(Branch::kGrandBundle) ? Branch::kGrandBundle
                                                                   : Branch::kSingleBid,
                            p.at("bids").get<std::vector<double>>()});
    }
    for (const json& b : j.at("expected_blocks")) m.expected_blocks.push_back(parse_items(b, "$.expected_blocks"));
  } catch (const json::exception& e) {
    throw ConfigError("$", std::string("malformed instance meta: ") + e.what());
  }
  return m;
}

std::string classification_to_json(const ClassLabel& label) {
  return dump({{"m", label.m},
               {"parts", label.parts},
               {"ph_rank", label.ph_rank},
               {"sm_degree", label.sm_degree},
               {"part_sm_degrees", label.part_sm_degrees},
               {"min_ch_block", label.min_ch_block}});
}

std::string certificate_to_json(const ApproxCertificate& cert) {
  json blocks = json::array();
  for (const ItemSet& b : cert.blocks.blocks) blocks.push_back(items_json(b));
  json partition = json::array();
  for (const ItemSet& b : cert.partition.blocks) partition.push_back(items_json(b));
  return dump({{"beta", cert.beta},
               {"x", items_json(cert.x)},
               {"support", items_json(cert.support)},
               {"unit_value", cert.blocks.unit_value},
               {"blocks", blocks},
               {"partition", partition},
               {"checked_sets", cert.checked_sets},
               {"exhaustive", cert.exhaustive}});
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_atomic(const std::filesystem::path& path, const std::string& text) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + tmp.string());
    out << text;
    out.flush();
    if (!out) throw IoError("write failed for " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw IoError("cannot rename " + tmp.string() + " to " + path.string() + ": " + ec.message());
}

}  // namespace sbalab
