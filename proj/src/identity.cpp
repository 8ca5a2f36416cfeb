#include "urnc/identity.hpp"

#include <algorithm>
#include <set>

#include "urnc/error.hpp"

namespace urnc {

BigInt NodeId::as_int() const {
  BigInt v = 1;
  for (char c : bits) {
    v <<= 1;
    if (c == '1') v |= 1;
  }
  return v;
}

bool id_less(const NodeId& a, const NodeId& b) {
  if (a.bits.size() != b.bits.size()) return a.bits.size() < b.bits.size();
  return a.bits < b.bits;
}

namespace {

std::string binary(std::size_t value, std::size_t width) {
  std::string out(width, '0');
  for (std::size_t i = 0; i < width; ++i) {
    if (value >> (width - 1 - i) & 1u) out[i] = '1';
  }
  return out;
}

std::size_t bit_width_of(std::size_t c) {
  std::size_t w = 0;
  while ((std::size_t{1} << w) <= c) ++w;
  return w;
}

}  // namespace

NodeId IdRegistry::bind(const std::string& name, const std::string& node, const std::string& parent) {
  NodeId id{name + "0"};
  if (reserve_.count(id.bits)) throw Error(Errc::Internal, "ID collision on " + id.bits);
  reserve_[id.bits] = name + "1";  // no children yet: zero-width slots, reserve slot 0
  const std::string key = node.empty() ? "#" + std::to_string(anon_++) : node;
  if (by_node_.count(key)) throw Error(Errc::Internal, "node '" + key + "' already has an ID");
  by_node_[key] = id;
  log_.push_back({key, parent, id.bits});
  return id;
}

NodeId IdRegistry::assign_root(const std::string& node) {
  if (!reserve_.empty()) throw Error(Errc::Internal, "registry already has a root");
  return bind("", node, "");
}

std::vector<NodeId> IdRegistry::assign_children(const NodeId& parent, const std::vector<std::string>& children) {
  auto it = reserve_.find(parent.bits);
  if (it == reserve_.end()) throw Error(Errc::UnknownParent, "no ID '" + parent.bits + "'");
  const std::string name = parent.bits.substr(0, parent.bits.size() - 1);
  if (it->second != name + "1") throw Error(Errc::Internal, "children already assigned under " + parent.bits);
  const std::size_t c = children.size();
  const std::size_t w = bit_width_of(c);
  std::vector<NodeId> out;
  for (std::size_t k = 0; k < c; ++k) out.push_back(bind(name + "1" + binary(k, w), children[k], parent.bits));
  reserve_.at(parent.bits) = name + "1" + binary(c, w);
  return out;
}

NodeId IdRegistry::assign_new(const NodeId& parent, const std::string& node) {
  auto it = reserve_.find(parent.bits);
  if (it == reserve_.end()) throw Error(Errc::UnknownParent, "no ID '" + parent.bits + "'");
  const std::string r = it->second;
  it->second = r + "1";
  std::string parent_node;
  for (const auto& e : log_) {
    if (e.id == parent.bits) parent_node = e.node;
  }
  return bind(r + "0", node, parent_node);
}

const NodeId& IdRegistry::id_of(const std::string& node) const {
  auto it = by_node_.find(node);
  if (it == by_node_.end()) throw Error(Errc::UnknownNode, "no ID for node '" + node + "'");
  return it->second;
}

std::vector<NodeId> IdRegistry::all_ids() const {
  std::vector<NodeId> out;
  for (const auto& [bits, _] : reserve_) out.push_back({bits});
  return out;
}

nlohmann::json IdRegistry::to_json() const {
  nlohmann::json j;
  j["ids"] = nlohmann::json::object();
  for (const auto& [node, id] : by_node_) j["ids"][node] = id.bits;
  j["log"] = nlohmann::json::array();
  for (const auto& e : log_) j["log"].push_back({{"node", e.node}, {"parent", e.parent}, {"id", e.id}});
  return j;
}

bool prefix_free(std::vector<std::string> ids) {
  std::sort(ids.begin(), ids.end());
  for (std::size_t i = 1; i < ids.size(); ++i) {
    if (ids[i].compare(0, ids[i - 1].size(), ids[i - 1]) == 0) return false;
  }
  return true;
}

namespace {

struct Adjacency {
  std::map<std::string, std::vector<std::string>> in;
  std::map<std::string, std::vector<std::string>> out;
  std::vector<std::string> nodes;
};

// Level-synchronous BFS; each level's IDs are fixed before its children are placed.
void bfs_assign(IdRegistry& reg, const Adjacency& adj, const std::string& root,
                const std::vector<std::string>& first_level) {
  const NodeId root_id = reg.assign_root(root);
  reg.assign_children(root_id, first_level);
  std::vector<std::string> level = first_level;
  std::set<std::string> seen(level.begin(), level.end());
  seen.insert(root);
  while (!level.empty()) {
    std::map<std::string, std::vector<std::string>> kids;
    std::vector<std::string> next;
    std::set<std::string> level_set(level.begin(), level.end());
    std::set<std::string> candidates;
    for (const auto& v : level) {
      auto it = adj.out.find(v);
      if (it == adj.out.end()) continue;
      for (const auto& w : it->second) {
        if (!seen.count(w)) candidates.insert(w);
      }
    }
    for (const auto& w : candidates) {
      const std::string* best = nullptr;
      for (const auto& p : adj.in.at(w)) {
        if (!level_set.count(p)) continue;
        if (!best || id_less(reg.id_of(p), reg.id_of(*best))) best = &p;
      }
      kids[*best].push_back(w);
      seen.insert(w);
    }
    for (const auto& v : level) {
      auto it = kids.find(v);
      if (it == kids.end()) continue;
      reg.assign_children(reg.id_of(v), it->second);
      next.insert(next.end(), it->second.begin(), it->second.end());
    }
    std::sort(next.begin(), next.end());
    level = std::move(next);
  }
}

// Nodes the BFS never reached hang off their smallest-ID neighbour.
void attach_stragglers(IdRegistry& reg, const Adjacency& adj) {
  bool progress = true;
  while (progress) {
    progress = false;
    for (const auto& v : adj.nodes) {
      if (reg.has_node(v)) continue;
      const NodeId* best = nullptr;
      for (const auto* side : {&adj.in, &adj.out}) {
        auto it = side->find(v);
        if (it == side->end()) continue;
        for (const auto& p : it->second) {
          if (!reg.has_node(p)) continue;
          if (!best || id_less(reg.id_of(p), *best)) best = &reg.id_of(p);
        }
        if (best) break;  // in-neighbours take precedence
      }
      if (!best) continue;
      reg.assign_new(*best, v);
      progress = true;
    }
  }
}

Adjacency adjacency_of(const VirtualGraph& vg) {
  Adjacency adj;
  for (const auto& [id, _] : vg.nodes) {
    adj.nodes.push_back(id);
    adj.in[id];
    adj.out[id];
  }
  for (const auto& [id, e] : vg.edges) {
    adj.out[e.tail].push_back(e.head);
    adj.in[e.head].push_back(e.tail);
  }
  return adj;
}

}  // namespace

IdRegistry assign_ids(const Network& net) {
  Adjacency adj;
  for (const auto& n : net.nodes) {
    adj.nodes.push_back(n.id);
    adj.in[n.id];
    adj.out[n.id];
  }
  std::set<std::pair<std::string, std::string>> seen_pairs;
  for (const auto& e : net.edges) {
    if (!seen_pairs.insert({e.tail, e.head}).second) continue;
    adj.out[e.tail].push_back(e.head);
    adj.in[e.head].push_back(e.tail);
  }
  IdRegistry reg;
  std::vector<std::string> first;
  for (const auto& w : adj.out[net.source]) first.push_back(w);
  std::sort(first.begin(), first.end());
  bfs_assign(reg, adj, net.source, first);
  attach_stragglers(reg, adj);
  return reg;
}

IdRegistry assign_ids(const VirtualGraph& vg) {
  Adjacency adj = adjacency_of(vg);
  IdRegistry reg;
  bfs_assign(reg, adj, vg.original.source, vg.source_copies);
  attach_stragglers(reg, adj);
  return reg;
}

void extend_ids(IdRegistry& reg, const VirtualGraph& vg) { attach_stragglers(reg, adjacency_of(vg)); }

BigInt cantor_pair(const BigInt& x, const BigInt& y) {
  if (x < 0 || y < 0) throw Error(Errc::ParameterOutOfRange, "pairing needs non-negative arguments");
  const BigInt s = x + y;
  return s * (s + 1) / 2 + y;
}

std::pair<BigInt, BigInt> cantor_unpair(const BigInt& n) {
  if (n < 0) throw Error(Errc::ParameterOutOfRange, "unpairing needs a non-negative argument");
  const BigInt disc = 8 * n + 1;
  const BigInt w = (boost::multiprecision::sqrt(disc) - 1) / 2;
  const BigInt t = w * (w + 1) / 2;
  const BigInt y = n - t;
  return {w - y, y};
}

BigInt cantor_tuple(const std::vector<BigInt>& v) {
  if (v.empty() || v.size() > 5) throw Error(Errc::ParameterOutOfRange, "tuples must have 1 to 5 components");
  BigInt acc = v.front();
  if (acc < 0) throw Error(Errc::ParameterOutOfRange, "pairing needs non-negative arguments");
  for (std::size_t i = 1; i < v.size(); ++i) acc = cantor_pair(acc, v[i]);
  return acc;
}

}  // namespace urnc
