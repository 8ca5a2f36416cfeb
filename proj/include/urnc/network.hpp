#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

namespace urnc {

enum class Role { Source, Sink, Internal };

const char* role_name(Role r) noexcept;

struct NodeRecord {
  std::string id;
  Role role = Role::Internal;

  bool operator==(const NodeRecord&) const = default;
};

struct EdgeRecord {
  std::string id;
  std::string tail;
  std::string head;
  int cap = 1;

  bool operator==(const EdgeRecord&) const = default;
};

/// One packet-per-time-step link obtained by splitting a capacity-c edge
/// into c parallel unit links.
struct UnitLink {
  std::string id;       // "<edge-id>#<k>"
  std::string edge_id;  // originating edge record
  std::string tail;
  std::string head;
  int parallel_index = 0;  // 0-based position among all unit links tail->head
};

/// Single-source multicast DAG.
struct Network {
  std::vector<NodeRecord> nodes;
  std::vector<EdgeRecord> edges;
  std::string source;
  std::vector<std::string> sinks;

  bool has_node(const std::string& id) const;
  const NodeRecord& node(const std::string& id) const;
  /// Largest single-edge capacity c (0 for an edgeless network).
  int max_capacity() const;
  /// Capacity expansion in edge-list order.
  std::vector<UnitLink> unit_links() const;

  bool operator==(const Network&) const = default;
};

nlohmann::json to_json(const Network& net);
/// Strict loader: rejects unknown fields and wrong types with MalformedNetwork.
Network network_from_json(const nlohmann::json& j);

/// Throws CycleDetected, UnreachableSink or MalformedNetwork.
void validate(const Network& net);

/// Unit-capacity digraph; max-flow runs on Boost.Graph, paths are decomposed by tag.
class FlowGraph {
 public:
  explicit FlowGraph(std::size_t nodes = 0) : adj_(nodes) {}

  std::size_t add_node();
  /// Returns the edge index; `tag` is reported back in decomposed paths.
  std::size_t add_edge(std::size_t tail, std::size_t head, int tag = -1);
  std::size_t node_count() const noexcept { return adj_.size(); }

  /// Max number of edge-disjoint paths from any of `sources` to `sink`.
  /// When `paths` is given, it receives one tag sequence per path.
  int max_flow(const std::vector<std::size_t>& sources, std::size_t sink,
               std::vector<std::vector<int>>* paths = nullptr) const;

 private:
  struct Arc {
    std::size_t head;
    int tag;
  };
  std::vector<std::vector<Arc>> adj_;
};

struct CutSpec {
  int value = 0;  // min over sinks
  std::map<std::string, int> per_sink;
  /// One set of edge-disjoint paths per sink, as unit-link id sequences.
  std::map<std::string, std::vector<std::vector<std::string>>> paths;
};

CutSpec min_cut(const Network& net);

/// Shortest hop distance from the source; unreachable nodes are absent.
std::map<std::string, int> depth_map(const Network& net);

/// Topological order of node ids (Kahn, ties broken by node-list order).
std::vector<std::string> topological_order(const Network& net);

// Generators.

Network gen_butterfly();

struct RandomDagParams {
  int n_nodes = 10;
  double edge_prob = 0.3;
  int n_sinks = 2;
  int min_cut = 1;  // every sink is topped up to at least this cut
  int max_cap = 1;
};
Network gen_random_dag(std::uint64_t seed, const RandomDagParams& params);

enum class LowerBoundMode { ManySinks, OneSink };
/// Capacity-2 binary tree of the given depth, one forwarding node per leaf,
/// and either C(2^depth, 2) sinks or a single sink on forwarders (i, j).
Network gen_lower_bound(int depth, LowerBoundMode mode, int pair_i = 0, int pair_j = 1);

/// Source -> n relays -> one sink per k-subset of relays.
Network gen_combination(int n, int k);

}  // namespace urnc
