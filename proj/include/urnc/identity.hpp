#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "urnc/bignat.hpp"
#include "urnc/network.hpp"
#include "urnc/transform.hpp"

namespace urnc {

struct NodeId {
  std::string bits;

  /// The integer whose binary expansion is "1" followed by `bits`.
  BigInt as_int() const;
  bool operator==(const NodeId&) const = default;
};

/// Orders IDs by their integer value (shorter first, then lexicographic).
bool id_less(const NodeId& a, const NodeId& b);

/// Prefix-tree ID allocator. A node named p holds ID p+"0"; its children are
/// named under p+"1", and one spare child name is always held in reserve.
class IdRegistry {
 public:
  struct LogEntry {
    std::string node;
    std::string parent;  // empty for the root
    std::string id;
  };

  /// Registers the root and returns its ID ("0").
  NodeId assign_root(const std::string& node);
  /// Gives every child in `children` a fixed-width slot under `parent`.
  std::vector<NodeId> assign_children(const NodeId& parent, const std::vector<std::string>& children);
  /// Consumes the parent's reserve: r becomes the child's name r+"0" and r+"1" the new reserve.
  NodeId assign_new(const NodeId& parent, const std::string& node = {});

  bool has_node(const std::string& node) const { return by_node_.count(node) != 0; }
  const NodeId& id_of(const std::string& node) const;
  std::vector<NodeId> all_ids() const;
  const std::vector<LogEntry>& log() const noexcept { return log_; }
  std::size_t size() const noexcept { return reserve_.size(); }

  nlohmann::json to_json() const;

 private:
  NodeId bind(const std::string& name, const std::string& node, const std::string& parent);

  std::map<std::string, std::string> reserve_;  // ID bits -> reserve name
  std::map<std::string, NodeId> by_node_;
  std::vector<LogEntry> log_;
  std::size_t anon_ = 0;
};

/// BFS-tree assignment from the source; the parent of a node is its
/// smallest-ID in-neighbour one level up.
IdRegistry assign_ids(const Network& net);
/// The original source is the root; the source copies are its children.
IdRegistry assign_ids(const VirtualGraph& vg);
/// Gives IDs to nodes of `vg` that have none, via the reserve mechanism.
void extend_ids(IdRegistry& reg, const VirtualGraph& vg);

bool prefix_free(std::vector<std::string> ids);

BigInt cantor_pair(const BigInt& x, const BigInt& y);
std::pair<BigInt, BigInt> cantor_unpair(const BigInt& n);
/// Left fold of the pairing over 1..5 components.
BigInt cantor_tuple(const std::vector<BigInt>& v);

}  // namespace urnc
