#include "urnc/network.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <set>
#include <unordered_map>

#include <boost/graph/adjacency_list.hpp>
#include <boost/graph/edmonds_karp_max_flow.hpp>

#include "urnc/error.hpp"
#include "urnc/rng.hpp"

namespace urnc {

using nlohmann::json;

const char* role_name(Role r) noexcept {
  switch (r) {
    case Role::Source: return "source";
    case Role::Sink: return "sink";
    case Role::Internal: return "internal";
  }
  return "internal";
}

bool Network::has_node(const std::string& id) const {
  return std::any_of(nodes.begin(), nodes.end(), [&](const NodeRecord& n) { return n.id == id; });
}

const NodeRecord& Network::node(const std::string& id) const {
  for (const auto& n : nodes) {
    if (n.id == id) return n;
  }
  throw Error(Errc::UnknownNode, "no node '" + id + "'");
}

int Network::max_capacity() const {
  int c = 0;
  for (const auto& e : edges) c = std::max(c, e.cap);
  return c;
}

std::vector<UnitLink> Network::unit_links() const {
  std::vector<UnitLink> out;
  std::map<std::pair<std::string, std::string>, int> parallel;
  for (const auto& e : edges) {
    for (int k = 0; k < e.cap; ++k) {
      UnitLink l;
      l.id = e.id + "#" + std::to_string(k);
      l.edge_id = e.id;
      l.tail = e.tail;
      l.head = e.head;
      l.parallel_index = parallel[{e.tail, e.head}]++;
      out.push_back(std::move(l));
    }
  }
  return out;
}

json to_json(const Network& net) {
  json j;
  j["nodes"] = json::array();
  for (const auto& n : net.nodes) j["nodes"].push_back({{"id", n.id}, {"role", role_name(n.role)}});
  j["edges"] = json::array();
  for (const auto& e : net.edges) {
    j["edges"].push_back({{"id", e.id}, {"tail", e.tail}, {"head", e.head}, {"cap", e.cap}});
  }
  j["source"] = net.source;
  j["sinks"] = net.sinks;
  return j;
}

namespace {

void require_fields(const json& obj, std::initializer_list<const char*> allowed, const char* what) {
  if (!obj.is_object()) throw Error(Errc::MalformedNetwork, std::string(what) + " must be an object");
  for (const auto& [key, _] : obj.items()) {
    if (std::find_if(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; }) ==
        allowed.end()) {
      throw Error(Errc::MalformedNetwork, std::string("unknown field '") + key + "' in " + what);
    }
  }
  for (const char* a : allowed) {
    if (!obj.contains(a)) throw Error(Errc::MalformedNetwork, std::string("missing field '") + a + "' in " + what);
  }
}

std::string get_string(const json& obj, const char* key) {
  const auto& v = obj.at(key);
  if (!v.is_string()) throw Error(Errc::MalformedNetwork, std::string("field '") + key + "' must be a string");
  return v.get<std::string>();
}

}  // namespace

Network network_from_json(const json& j) {
  require_fields(j, {"nodes", "edges", "source", "sinks"}, "network");
  Network net;
  if (!j["nodes"].is_array() || !j["edges"].is_array() || !j["sinks"].is_array()) {
    throw Error(Errc::MalformedNetwork, "nodes, edges and sinks must be arrays");
  }
  for (const auto& n : j["nodes"]) {
    require_fields(n, {"id", "role"}, "node");
    NodeRecord rec;
    rec.id = get_string(n, "id");
    const std::string role = get_string(n, "role");
    if (role == "source") rec.role = Role::Source;
    else if (role == "sink") rec.role = Role::Sink;
    else if (role == "internal") rec.role = Role::Internal;
    else throw Error(Errc::MalformedNetwork, "unknown role '" + role + "'");
    net.nodes.push_back(std::move(rec));
  }
  for (const auto& e : j["edges"]) {
    require_fields(e, {"id", "tail", "head", "cap"}, "edge");
    EdgeRecord rec;
    rec.id = get_string(e, "id");
    rec.tail = get_string(e, "tail");
    rec.head = get_string(e, "head");
    if (!e["cap"].is_number_integer()) throw Error(Errc::MalformedNetwork, "edge cap must be an integer");
    rec.cap = e["cap"].get<int>();
    net.edges.push_back(std::move(rec));
  }
  net.source = get_string(j, "source");
  for (const auto& s : j["sinks"]) {
    if (!s.is_string()) throw Error(Errc::MalformedNetwork, "sink ids must be strings");
    net.sinks.push_back(s.get<std::string>());
  }
  return net;
}

std::vector<std::string> topological_order(const Network& net) {
  std::map<std::string, int> indeg;
  std::map<std::string, std::vector<std::string>> out;
  for (const auto& n : net.nodes) indeg[n.id] = 0;
  for (const auto& e : net.edges) {
    ++indeg[e.head];
    out[e.tail].push_back(e.head);
  }
  std::vector<std::string> order;
  std::deque<std::string> ready;
  for (const auto& n : net.nodes) {
    if (indeg[n.id] == 0) ready.push_back(n.id);
  }
  while (!ready.empty()) {
    std::string v = ready.front();
    ready.pop_front();
    order.push_back(v);
    for (const auto& w : out[v]) {
      if (--indeg[w] == 0) ready.push_back(w);
    }
  }
  if (order.size() != net.nodes.size()) throw Error(Errc::CycleDetected, "network contains a directed cycle");
  return order;
}

void validate(const Network& net) {
  std::set<std::string> ids;
  for (const auto& n : net.nodes) {
    if (n.id.empty() || !ids.insert(n.id).second) {
      throw Error(Errc::MalformedNetwork, "empty or duplicate node id '" + n.id + "'");
    }
  }
  std::set<std::string> edge_ids;
  for (const auto& e : net.edges) {
    if (e.id.empty() || !edge_ids.insert(e.id).second) {
      throw Error(Errc::MalformedNetwork, "empty or duplicate edge id '" + e.id + "'");
    }
    if (!ids.count(e.tail) || !ids.count(e.head)) {
      throw Error(Errc::MalformedNetwork, "edge '" + e.id + "' references an unknown node");
    }
    if (e.tail == e.head) throw Error(Errc::CycleDetected, "self-loop on edge '" + e.id + "'");
    if (e.cap < 1) throw Error(Errc::MalformedNetwork, "edge '" + e.id + "' has non-positive capacity");
  }
  int sources = 0;
  for (const auto& n : net.nodes) {
    if (n.role == Role::Source) ++sources;
  }
  if (sources != 1 || !ids.count(net.source) || net.node(net.source).role != Role::Source) {
    throw Error(Errc::MalformedNetwork, "network must have exactly one source matching 'source'");
  }
  if (net.sinks.empty()) throw Error(Errc::MalformedNetwork, "network has no sinks");
  std::set<std::string> sink_set;
  for (const auto& t : net.sinks) {
    if (!ids.count(t) || net.node(t).role != Role::Sink || !sink_set.insert(t).second) {
      throw Error(Errc::MalformedNetwork, "sink '" + t + "' is not a unique sink-role node");
    }
  }
  for (const auto& n : net.nodes) {
    if (n.role == Role::Sink && !sink_set.count(n.id)) {
      throw Error(Errc::MalformedNetwork, "sink-role node '" + n.id + "' missing from 'sinks'");
    }
  }
  for (const auto& e : net.edges) {
    if (e.head == net.source) throw Error(Errc::MalformedNetwork, "source has an incoming edge");
  }
  topological_order(net);
  const auto depth = depth_map(net);
  for (const auto& t : net.sinks) {
    if (!depth.count(t)) throw Error(Errc::UnreachableSink, "sink '" + t + "' is unreachable from the source");
  }
}

std::size_t FlowGraph::add_node() {
  adj_.emplace_back();
  return adj_.size() - 1;
}

std::size_t FlowGraph::add_edge(std::size_t tail, std::size_t head, int tag) {
  adj_[tail].push_back({head, tag});
  return adj_[tail].size() - 1;
}

int FlowGraph::max_flow(const std::vector<std::size_t>& sources, std::size_t sink,
                        std::vector<std::vector<int>>* paths) const {
  using Traits = boost::adjacency_list_traits<boost::vecS, boost::vecS, boost::directedS>;
  using Graph = boost::adjacency_list<
      boost::vecS, boost::vecS, boost::directedS, boost::no_property,
      boost::property<boost::edge_capacity_t, long,
                      boost::property<boost::edge_residual_capacity_t, long,
                                      boost::property<boost::edge_reverse_t, Traits::edge_descriptor>>>>;
  const std::size_t super = adj_.size();
  Graph g(adj_.size() + 1);
  auto cap = boost::get(boost::edge_capacity, g);
  auto rev = boost::get(boost::edge_reverse, g);
  auto res = boost::get(boost::edge_residual_capacity, g);
  auto add = [&](std::size_t u, std::size_t v, long c) {
    const auto e = boost::add_edge(u, v, g).first;
    const auto r = boost::add_edge(v, u, g).first;
    cap[e] = c;
    cap[r] = 0;
    rev[e] = r;
    rev[r] = e;
    return e;
  };
  // arcs[u][i] mirrors adj_[u][i].
  std::vector<std::vector<Traits::edge_descriptor>> arcs(adj_.size());
  for (std::size_t u = 0; u < adj_.size(); ++u) {
    for (const Arc& a : adj_[u]) arcs[u].push_back(add(u, a.head, 1));
  }
  // Super-source arcs are unbounded.
  for (std::size_t s : sources) add(super, s, std::numeric_limits<int>::max() / 2);
  const int flow = static_cast<int>(boost::edmonds_karp_max_flow(g, super, sink));
  if (paths) {
    paths->clear();
    std::vector<std::vector<int>> used(adj_.size());
    std::vector<long> net_out(adj_.size(), 0);
    for (std::size_t u = 0; u < adj_.size(); ++u) {
      used[u].assign(adj_[u].size(), 0);
      for (std::size_t i = 0; i < adj_[u].size(); ++i) {
        used[u][i] = static_cast<int>(cap[arcs[u][i]] - res[arcs[u][i]]);
        net_out[u] += used[u][i];
        net_out[adj_[u][i].head] -= used[u][i];
      }
    }
    std::vector<std::size_t> starts;
    for (std::size_t s : sources) {
      for (long k = 0; k < net_out[s]; ++k) starts.push_back(s);
    }
    for (std::size_t s : starts) {
      std::vector<int> path;
      std::size_t u = s;
      while (u != sink) {
        bool moved = false;
        for (std::size_t i = 0; i < adj_[u].size(); ++i) {
          if (used[u][i] > 0) {
            --used[u][i];
            path.push_back(adj_[u][i].tag);
            u = adj_[u][i].head;
            moved = true;
            break;
          }
        }
        if (!moved) throw Error(Errc::Internal, "flow decomposition got stuck");
      }
      paths->push_back(std::move(path));
    }
  }
  return flow;
}

CutSpec min_cut(const Network& net) {
  std::unordered_map<std::string, std::size_t> index;
  FlowGraph g;
  for (const auto& n : net.nodes) index[n.id] = g.add_node();
  const auto links = net.unit_links();
  for (std::size_t k = 0; k < links.size(); ++k) {
    g.add_edge(index.at(links[k].tail), index.at(links[k].head), static_cast<int>(k));
  }
  CutSpec spec;
  spec.value = std::numeric_limits<int>::max();
  for (const auto& t : net.sinks) {
    std::vector<std::vector<int>> tagged;
    const int f = g.max_flow({index.at(net.source)}, index.at(t), &tagged);
    spec.per_sink[t] = f;
    spec.value = std::min(spec.value, f);
    auto& out = spec.paths[t];
    for (const auto& p : tagged) {
      std::vector<std::string> ids;
      for (int tag : p) ids.push_back(links[static_cast<std::size_t>(tag)].id);
      out.push_back(std::move(ids));
    }
  }
  if (net.sinks.empty()) spec.value = 0;
  return spec;
}

std::map<std::string, int> depth_map(const Network& net) {
  std::map<std::string, std::vector<std::string>> out;
  for (const auto& e : net.edges) out[e.tail].push_back(e.head);
  std::map<std::string, int> depth{{net.source, 0}};
  std::deque<std::string> q{net.source};
  while (!q.empty()) {
    const std::string v = q.front();
    q.pop_front();
    for (const auto& w : out[v]) {
      if (!depth.count(w)) {
        depth[w] = depth[v] + 1;
        q.push_back(w);
      }
    }
  }
  return depth;
}

Network gen_butterfly() {
  Network net;
  net.nodes = {{"s", Role::Source}, {"a", Role::Internal},  {"b", Role::Internal}, {"c", Role::Internal},
               {"d", Role::Internal}, {"t1", Role::Sink}, {"t2", Role::Sink}};
  net.edges = {{"sa", "s", "a", 1}, {"sb", "s", "b", 1}, {"ac", "a", "c", 1},
               {"bc", "b", "c", 1}, {"cd", "c", "d", 1}, {"at1", "a", "t1", 1},
               {"dt1", "d", "t1", 1}, {"bt2", "b", "t2", 1}, {"dt2", "d", "t2", 1}};
  net.source = "s";
  net.sinks = {"t1", "t2"};
  return net;
}

Network gen_random_dag(std::uint64_t seed, const RandomDagParams& p) {
  if (p.n_nodes < 2 || p.n_sinks < 1 || p.n_sinks >= p.n_nodes || p.edge_prob < 0.0 ||
      p.edge_prob > 1.0 || p.min_cut < 1 || p.max_cap < 1) {
    throw Error(Errc::ParameterOutOfRange, "invalid random DAG parameters");
  }
  Rng rng(derive_seed(seed, "random-dag"));
  Network net;
  const int n = p.n_nodes;
  const int first_sink = n - p.n_sinks;
  auto name = [&](int i) {
    if (i == 0) return std::string("s");
    if (i >= first_sink) return "t" + std::to_string(i - first_sink + 1);
    return "v" + std::to_string(i);
  };
  for (int i = 0; i < n; ++i) {
    const Role role = i == 0 ? Role::Source : (i >= first_sink ? Role::Sink : Role::Internal);
    net.nodes.push_back({name(i), role});
  }
  net.source = "s";
  for (int i = first_sink; i < n; ++i) net.sinks.push_back(name(i));
  int edge_no = 0;
  auto add = [&](int u, int v, int cap) {
    net.edges.push_back({"e" + std::to_string(edge_no++), name(u), name(v), cap});
  };
  for (int v = 1; v < n; ++v) {
    bool has_in = false;
    for (int u = 0; u < v; ++u) {
      // Sinks only feed later sinks rarely; keep them terminal.
      if (u >= first_sink) continue;
      if (rng.uniform() < p.edge_prob) {
        add(u, v, 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(p.max_cap))));
        has_in = true;
      }
    }
    if (!has_in) add(static_cast<int>(rng.below(static_cast<std::uint64_t>(std::min(v, first_sink)))), v, 1);
  }
  for (int i = first_sink; i < n; ++i) {
    // Top up with direct source links until the requested cut holds.
    while (true) {
      CutSpec cut = min_cut(net);
      if (cut.per_sink.at(name(i)) >= p.min_cut) break;
      add(0, i, 1);
    }
  }
  return net;
}

Network gen_lower_bound(int depth, LowerBoundMode mode, int pair_i, int pair_j) {
  if (depth < 1 || depth > 12) throw Error(Errc::ParameterOutOfRange, "lower-bound depth must be in [1, 12]");
  const int leaves = 1 << depth;
  if (mode == LowerBoundMode::OneSink &&
      (pair_i < 0 || pair_j < 0 || pair_i >= leaves || pair_j >= leaves || pair_i == pair_j)) {
    throw Error(Errc::ParameterOutOfRange, "forwarding pair out of range");
  }
  Network net;
  net.source = "s";
  net.nodes.push_back({"s", Role::Source});
  auto tree_name = [](int level, int idx) {
    return level == 0 ? std::string("s") : "u" + std::to_string(level) + "_" + std::to_string(idx);
  };
  for (int level = 1; level <= depth; ++level) {
    for (int idx = 0; idx < (1 << level); ++idx) {
      net.nodes.push_back({tree_name(level, idx), Role::Internal});
      net.edges.push_back({"b" + std::to_string(level) + "_" + std::to_string(idx), tree_name(level - 1, idx / 2),
                           tree_name(level, idx), 2});
    }
  }
  for (int k = 0; k < leaves; ++k) {
    net.nodes.push_back({"f" + std::to_string(k), Role::Internal});
    net.edges.push_back({"l" + std::to_string(k), tree_name(depth, k), "f" + std::to_string(k), 1});
  }
  auto add_sink = [&](int i, int j) {
    const std::string t = "t" + std::to_string(i) + "_" + std::to_string(j);
    net.nodes.push_back({t, Role::Sink});
    net.sinks.push_back(t);
    net.edges.push_back({"x" + std::to_string(i) + "_" + std::to_string(j) + "a", "f" + std::to_string(i), t, 1});
    net.edges.push_back({"x" + std::to_string(i) + "_" + std::to_string(j) + "b", "f" + std::to_string(j), t, 1});
  };
  if (mode == LowerBoundMode::ManySinks) {
    for (int i = 0; i < leaves; ++i) {
      for (int j = i + 1; j < leaves; ++j) add_sink(i, j);
    }
  } else {
    add_sink(std::min(pair_i, pair_j), std::max(pair_i, pair_j));
  }
  return net;
}

Network gen_combination(int n, int k) {
  if (n < 1 || k < 1 || k > n || n > 16) throw Error(Errc::ParameterOutOfRange, "combination network needs 1 <= k <= n <= 16");
  Network net;
  net.source = "s";
  net.nodes.push_back({"s", Role::Source});
  for (int i = 0; i < n; ++i) {
    net.nodes.push_back({"r" + std::to_string(i), Role::Internal});
    net.edges.push_back({"sr" + std::to_string(i), "s", "r" + std::to_string(i), 1});
  }
  for (unsigned mask = 0; mask < (1u << n); ++mask) {
    if (std::popcount(mask) != k) continue;
    std::string t = "t";
    for (int i = 0; i < n; ++i) {
      if (mask & (1u << i)) t += "_" + std::to_string(i);
    }
    net.nodes.push_back({t, Role::Sink});
    net.sinks.push_back(t);
    for (int i = 0; i < n; ++i) {
      if (mask & (1u << i)) net.edges.push_back({"r" + std::to_string(i) + t, "r" + std::to_string(i), t, 1});
    }
  }
  return net;
}

}  // namespace urnc
