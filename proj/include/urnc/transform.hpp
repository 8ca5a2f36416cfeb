#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "urnc/network.hpp"

namespace urnc {

enum class NodeKind { SourceCopy, Broadcast, Coding, Connection, Virtual, SinkCopy };

const char* kind_name(NodeKind k) noexcept;

/// Port name used as `out_link` by the in-tree leaf that feeds a sink copy.
inline constexpr const char* kSinkPort = "@sink";

struct VNode {
  std::string id;
  NodeKind kind = NodeKind::Broadcast;
  int depth = -1;  // frozen once the node is first reachable
  std::string owner;     // original node whose gadget holds this node
  std::string in_link;   // in-tree membership (unit link id or "copy<k>")
  std::string out_link;  // out-tree membership
  bool active = true;
  std::uint64_t seq = 0;  // creation order
  std::vector<std::string> ins;
  std::vector<std::string> outs;
};

struct VEdge {
  std::string id;
  std::string tail;
  std::string head;
};

struct VirtualGraph {
  std::map<std::string, VNode> nodes;
  std::map<std::string, VEdge> edges;
  std::map<std::string, std::string> provenance;  // unit link id -> virtual edge id
  Network original;
  int rate = 1;
  std::vector<std::string> source_copies;
  std::map<std::string, std::string> sink_copy;  // original sink -> terminal node
  std::set<std::string> unit_fed;                // source links fed straight from a copy
  std::set<std::string> retired_links;
  std::uint64_t next_seq = 0;
  std::uint64_t generation = 0;

  const VNode& node(const std::string& id) const;
  const VEdge& edge(const std::string& id) const;
  bool has_node(const std::string& id) const { return nodes.count(id) != 0; }

  std::vector<std::string> topological_order() const;
  std::vector<std::string> coding_nodes() const;
  /// Shortest hop distance from the nearest source copy; -1 when unreachable.
  std::map<std::string, int> bfs_depth() const;
};

VirtualGraph transform(const Network& net, int rate);

/// In-place surgery. A missing endpoint is created with `new_role`.
void join_link(VirtualGraph& vg, const EdgeRecord& link, Role new_role = Role::Internal);
void leave_link(VirtualGraph& vg, const std::string& edge_id);

/// Per-sink max-flow from the source copies to each sink terminal.
std::map<std::string, int> virtual_min_cut(const VirtualGraph& vg);

/// Empty when every structural invariant holds.
std::vector<std::string> check_invariants(const VirtualGraph& vg);

nlohmann::json to_json(const VirtualGraph& vg);

}  // namespace urnc
