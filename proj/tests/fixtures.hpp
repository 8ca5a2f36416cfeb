#pragma once

#include <algorithm>
#include <cstdint>
#include <deque>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "urnc/network.hpp"
#include "urnc/rng.hpp"
#include "urnc/sim.hpp"

namespace fixture {

// Random DAG whose every sink has min-cut >= `cut` (the generator tops up).
inline urnc::Network random_net(std::uint64_t seed, int nodes = 8, int sinks = 2, int cut = 2, int max_cap = 1,
                                double prob = 0.35) {
  urnc::RandomDagParams p;
  p.n_nodes = nodes;
  p.n_sinks = sinks;
  p.min_cut = cut;
  p.max_cap = max_cap;
  p.edge_prob = prob;
  return urnc::gen_random_dag(seed, p);
}

inline std::size_t count_coding(const urnc::VirtualGraph& vg) { return vg.coding_nodes().size(); }

inline bool reaches(const urnc::Network& net, const std::string& from, const std::string& to) {
  std::map<std::string, std::vector<std::string>> out;
  for (const auto& e : net.edges) out[e.tail].push_back(e.head);
  std::set<std::string> seen{from};
  std::deque<std::string> q{from};
  while (!q.empty()) {
    auto v = q.front();
    q.pop_front();
    if (v == to) return true;
    for (const auto& w : out[v]) {
      if (seen.insert(w).second) q.push_back(w);
    }
  }
  return false;
}

// Up to `max_events` joins and leaves applied to a working copy of `net`:
// relays spliced between existing nodes, direct shortcuts, and removals.
inline std::vector<urnc::ChurnEvent> churn_script(const urnc::Network& net, std::uint64_t seed, int max_events = 10) {
  urnc::Rng rng(urnc::derive_seed(seed, "churn"));
  urnc::Network cur = net;
  std::vector<urnc::ChurnEvent> events;
  int fresh = 0;
  const int target = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(max_events)));
  auto pick_node = [&](bool allow_source, bool allow_sink) {
    std::vector<std::string> ids;
    for (const auto& n : cur.nodes) {
      if (!allow_source && n.id == cur.source) continue;
      if (!allow_sink && n.role == urnc::Role::Sink) continue;
      ids.push_back(n.id);
    }
    return ids.empty() ? std::string() : ids[rng.below(ids.size())];
  };
  while (static_cast<int>(events.size()) < target) {
    const auto kind = rng.below(3);
    if (kind == 0 && static_cast<int>(events.size()) + 2 <= target) {
      // Relay u -> w -> v.
      const std::string u = pick_node(true, false);
      const std::string v = pick_node(false, true);
      if (u.empty() || v.empty() || u == v || reaches(cur, v, u)) continue;
      const std::string w = "j" + std::to_string(fresh++);
      urnc::ChurnEvent a;
      a.edge = {"je" + std::to_string(fresh) + "a", u, w, 1};
      urnc::ChurnEvent b;
      b.edge = {"je" + std::to_string(fresh) + "b", w, v, 1};
      cur.nodes.push_back({w, urnc::Role::Internal});
      cur.edges.push_back(a.edge);
      cur.edges.push_back(b.edge);
      events.push_back(a);
      events.push_back(b);
    } else if (kind == 1) {
      const std::string u = pick_node(true, false);
      const std::string v = pick_node(false, true);
      if (u.empty() || v.empty() || u == v || reaches(cur, v, u)) continue;
      urnc::ChurnEvent a;
      a.edge = {"jd" + std::to_string(fresh++), u, v, 1};
      cur.edges.push_back(a.edge);
      events.push_back(a);
    } else {
      if (cur.edges.empty()) continue;
      const auto idx = rng.below(cur.edges.size());
      urnc::ChurnEvent a;
      a.kind = urnc::ChurnEvent::Kind::Leave;
      a.edge.id = cur.edges[idx].id;
      cur.edges.erase(cur.edges.begin() + static_cast<std::ptrdiff_t>(idx));
      events.push_back(a);
    }
  }
  return events;
}

}  // namespace fixture
