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

// Misra-Gries edge colouring.

#include <algorithm>
#include <map>
#include <set>
#include <string>

#include "sbalab/approximation.hpp"

namespace sbalab {

namespace {

class FanColoring {
 public:
  FanColoring(int n, int colors)
      : colors_(colors),
        at_(static_cast<std::size_t>(n), std::vector<int>(static_cast<std::size_t>(colors), -1)) {}

  // neighbour of u along colour c, or -1
  int along(int u, int c) const { return at_[idx(u)][idx(c)]; }
  bool free(int u, int c) const { return along(u, c) < 0; }
  int color_of(int u, int v) const {
    for (int c = 0; c < colors_; ++c) {
      if (along(u, c) == v) return c;
    }
    return -1;
  }
  int any_free(int u) const {
    for (int c = 0; c < colors_; ++c) {
      if (free(u, c)) return c;
    }
    return -1;
  }
  void set(int u, int v, int c) {
    at_[idx(u)][idx(c)] = v;
    at_[idx(v)][idx(c)] = u;
  }
  void clear(int u, int v) {
    const int c = color_of(u, v);
    if (c < 0) return;
    at_[idx(u)][idx(c)] = -1;
    at_[idx(v)][idx(c)] = -1;
  }

  void color_edge(int u, int v0, const std::vector<std::vector<int>>& adj) {
    // maximal fan of u starting at v0
    std::vector<int> fan{v0};
    std::vector<bool> in_fan(adj.size(), false);
    in_fan[idx(v0)] = true;
    for (bool grew = true; grew;) {
      grew = false;
      for (int x : adj[idx(u)]) {
        if (in_fan[idx(x)]) continue;
        const int cx = color_of(u, x);
        if (cx >= 0 && free(fan.back(), cx)) {
          fan.push_back(x);
          in_fan[idx(x)] = true;
          grew = true;
          break;
        }
      }
    }
    const int c = any_free(u);
    const int d = any_free(fan.back());
    // invert the cd-path starting at u (u lacks c, so the path starts with d)
    if (c != d) {
      std::vector<std::pair<int, int>> path;
      std::vector<int> path_color;
      int x = u;
      int col = d;
      while (along(x, col) >= 0) {
        const int y = along(x, col);
        path.emplace_back(x, y);
        path_color.push_back(col);
        x = y;
        col = col == d ? c : d;
      }
      for (const auto& [a, b] : path) clear(a, b);
      for (std::size_t i = 0; i < path.size(); ++i) {
        set(path[i].first, path[i].second, path_color[i] == d ? c : d);
      }
    }
    // first fan vertex w with d free whose prefix is still a fan
    std::size_t w = 0;
    for (; w < fan.size(); ++w) {
      if (w > 0) {
        const int cw = color_of(u, fan[w]);
        if (cw < 0 || !free(fan[w - 1], cw)) {
          w = fan.size();
          break;
        }
      }
      if (free(fan[w], d)) break;
    }
    if (w >= fan.size()) throw std::logic_error("vizing_color: fan rotation invariant broken");
    for (std::size_t i = 0; i < w; ++i) {
      const int next = color_of(u, fan[i + 1]);
      clear(u, fan[i + 1]);
      set(u, fan[i], next);
    }
    set(u, fan[w], d);
  }

 private:
  static std::size_t idx(int i) { return static_cast<std::size_t>(i); }

  int colors_;
  std::vector<std::vector<int>> at_;
};

}  // namespace

EdgeColoring vizing_color(const std::vector<std::pair<int, int>>& edges) {
  EdgeColoring out;
  out.edges = edges;
  int n = 0;
  std::set<std::pair<int, int>> seen;
  for (const auto& [a, b] : edges) {
    if (a < 0 || b < 0) throw DomainError("vizing_color: negative vertex id");
    if (a == b) throw DomainError("vizing_color: self loop at " + std::to_string(a));
    if (!seen.insert(std::minmax(a, b)).second) {
      throw DomainError("vizing_color: repeated edge " + std::to_string(a) + "-" +
                        std::to_string(b));
    }
    n = std::max({n, a + 1, b + 1});
  }
  std::vector<std::vector<int>> adj(static_cast<std::size_t>(n));
  for (const auto& [a, b] : edges) {
    adj[static_cast<std::size_t>(a)].push_back(b);
    adj[static_cast<std::size_t>(b)].push_back(a);
  }
  for (const auto& nb : adj) out.max_degree = std::max(out.max_degree, static_cast<int>(nb.size()));
  if (edges.empty()) return out;

  FanColoring fc(n, out.max_degree + 1);
  for (const auto& [a, b] : edges) fc.color_edge(a, b, adj);
  out.color.reserve(edges.size());
  for (const auto& [a, b] : edges) {
    out.color.push_back(fc.color_of(a, b));
    out.num_colors = std::max(out.num_colors, out.color.back() + 1);
  }
  return out;
}

bool is_proper(const EdgeColoring& c) {
  std::set<std::pair<int, int>> used;  // (vertex, colour)
  for (std::size_t i = 0; i < c.edges.size(); ++i) {
    if (c.color[i] < 0) return false;
    if (!used.insert({c.edges[i].first, c.color[i]}).second) return false;
    if (!used.insert({c.edges[i].second, c.color[i]}).second) return false;
  }
  return true;
}

}  // namespace sbalab
