#include "urnc/transform.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <unordered_map>

#include "urnc/error.hpp"

namespace urnc {

const char* kind_name(NodeKind k) noexcept {
  switch (k) {
    case NodeKind::SourceCopy: return "source-copy";
    case NodeKind::Broadcast: return "broadcast";
    case NodeKind::Coding: return "coding";
    case NodeKind::Connection: return "connection";
    case NodeKind::Virtual: return "virtual";
    case NodeKind::SinkCopy: return "sink-copy";
  }
  return "broadcast";
}

const VNode& VirtualGraph::node(const std::string& id) const {
  auto it = nodes.find(id);
  if (it == nodes.end()) throw Error(Errc::UnknownNode, "no virtual node '" + id + "'");
  return it->second;
}

const VEdge& VirtualGraph::edge(const std::string& id) const {
  auto it = edges.find(id);
  if (it == edges.end()) throw Error(Errc::UnknownEdge, "no virtual edge '" + id + "'");
  return it->second;
}

std::vector<std::string> VirtualGraph::topological_order() const {
  std::map<std::string, std::size_t> indeg;
  std::set<std::string> ready;
  for (const auto& [id, n] : nodes) {
    indeg[id] = n.ins.size();
    if (n.ins.empty()) ready.insert(id);
  }
  std::vector<std::string> order;
  order.reserve(nodes.size());
  while (!ready.empty()) {
    const std::string v = *ready.begin();
    ready.erase(ready.begin());
    order.push_back(v);
    for (const auto& e : nodes.at(v).outs) {
      const std::string& w = edges.at(e).head;
      if (--indeg[w] == 0) ready.insert(w);
    }
  }
  if (order.size() != nodes.size()) throw Error(Errc::CycleDetected, "virtual graph contains a cycle");
  return order;
}

std::vector<std::string> VirtualGraph::coding_nodes() const {
  std::vector<std::string> out;
  for (const auto& [id, n] : nodes) {
    if (n.kind == NodeKind::Coding) out.push_back(id);
  }
  return out;
}

std::map<std::string, int> VirtualGraph::bfs_depth() const {
  std::map<std::string, int> depth;
  for (const auto& [id, _] : nodes) depth[id] = -1;
  std::deque<std::string> q;
  for (const auto& c : source_copies) {
    if (nodes.count(c)) {
      depth[c] = 0;
      q.push_back(c);
    }
  }
  while (!q.empty()) {
    const std::string v = q.front();
    q.pop_front();
    for (const auto& e : nodes.at(v).outs) {
      const std::string& w = edges.at(e).head;
      if (depth[w] < 0) {
        depth[w] = depth[v] + 1;
        q.push_back(w);
      }
    }
  }
  return depth;
}

namespace {

VNode& add_node(VirtualGraph& vg, const std::string& id, NodeKind kind, const std::string& owner,
                const std::string& in_link, const std::string& out_link) {
  if (vg.nodes.count(id)) throw Error(Errc::Internal, "virtual node '" + id + "' already exists");
  VNode n;
  n.id = id;
  n.kind = kind;
  n.owner = owner;
  n.in_link = in_link;
  n.out_link = out_link;
  n.seq = vg.next_seq++;
  return vg.nodes[id] = std::move(n);
}

std::string add_edge(VirtualGraph& vg, const std::string& tail, const std::string& head, std::string id = {}) {
  if (id.empty()) id = tail + ">" + head;
  if (vg.edges.count(id)) throw Error(Errc::Internal, "virtual edge '" + id + "' already exists");
  vg.edges[id] = VEdge{id, tail, head};
  vg.nodes.at(tail).outs.push_back(id);
  vg.nodes.at(head).ins.push_back(id);
  return id;
}

void remove_edge(VirtualGraph& vg, const std::string& id) {
  const VEdge e = vg.edge(id);
  auto drop = [&](std::vector<std::string>& v) { v.erase(std::remove(v.begin(), v.end(), id), v.end()); };
  drop(vg.nodes.at(e.tail).outs);
  drop(vg.nodes.at(e.head).ins);
  vg.edges.erase(id);
}

void remove_node(VirtualGraph& vg, const std::string& id) {
  const VNode n = vg.node(id);
  for (const auto& e : n.ins) remove_edge(vg, e);
  for (const auto& e : n.outs) remove_edge(vg, e);
  vg.nodes.erase(id);
}

std::string connection_id(const std::string& owner, const std::string& in, const std::string& out) {
  return owner + "/x/" + in + "/" + out;
}

// Left-heavy binary tree over `leaves`; edges point away from the root.
std::string build_in_tree(VirtualGraph& vg, const std::string& owner, const std::string& link,
                          const std::vector<std::string>& leaves, const std::string& path) {
  if (leaves.size() == 1) return leaves.front();
  const std::string id = owner + "/in/" + link + "/r" + path;
  add_node(vg, id, NodeKind::Broadcast, owner, link, "");
  const std::size_t left = (leaves.size() + 1) / 2;
  const std::vector<std::string> lhs(leaves.begin(), leaves.begin() + static_cast<std::ptrdiff_t>(left));
  const std::vector<std::string> rhs(leaves.begin() + static_cast<std::ptrdiff_t>(left), leaves.end());
  add_edge(vg, id, build_in_tree(vg, owner, link, lhs, path + "0"));
  add_edge(vg, id, build_in_tree(vg, owner, link, rhs, path + "1"));
  return id;
}

// Same shape with edges pointing toward the root.
std::string build_out_tree(VirtualGraph& vg, const std::string& owner, const std::string& link,
                           const std::vector<std::string>& leaves, const std::string& path) {
  if (leaves.size() == 1) return leaves.front();
  const std::string id = owner + "/out/" + link + "/r" + path;
  add_node(vg, id, NodeKind::Coding, owner, "", link);
  const std::size_t left = (leaves.size() + 1) / 2;
  const std::vector<std::string> lhs(leaves.begin(), leaves.begin() + static_cast<std::ptrdiff_t>(left));
  const std::vector<std::string> rhs(leaves.begin() + static_cast<std::ptrdiff_t>(left), leaves.end());
  add_edge(vg, build_out_tree(vg, owner, link, lhs, path + "0"), id);
  add_edge(vg, build_out_tree(vg, owner, link, rhs, path + "1"), id);
  return id;
}

std::vector<std::string> links_into(const Network& net, const std::string& v) {
  std::vector<std::string> out;
  for (const auto& l : net.unit_links()) {
    if (l.head == v) out.push_back(l.id);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::string> links_out_of(const Network& net, const std::string& v) {
  std::vector<std::string> out;
  for (const auto& l : net.unit_links()) {
    if (l.tail == v) out.push_back(l.id);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::string copy_link(int k) { return "copy" + std::to_string(k); }

// Input ports of `v`: its unit in-links, or the copy pseudo-links at the source.
std::vector<std::string> in_ports(const VirtualGraph& vg, const std::string& v) {
  if (v == vg.original.source) {
    std::vector<std::string> out;
    for (int k = 0; k < vg.rate; ++k) out.push_back(copy_link(k));
    return out;
  }
  return links_into(vg.original, v);
}

void refresh_depths(VirtualGraph& vg) {
  const auto bfs = vg.bfs_depth();
  for (auto& [id, n] : vg.nodes) {
    if (n.depth < 0) n.depth = bfs.at(id);
    n.active = bfs.at(id) >= 0;
  }
}

std::vector<std::string> reserves(const VirtualGraph& vg, const std::string& owner, const std::string& in_link,
                                  const std::string& out_link) {
  std::vector<const VNode*> found;
  for (const auto& [id, n] : vg.nodes) {
    if (n.kind == NodeKind::Virtual && n.owner == owner && n.in_link == in_link && n.out_link == out_link) {
      found.push_back(&n);
    }
  }
  std::sort(found.begin(), found.end(), [](const VNode* a, const VNode* b) { return a->seq < b->seq; });
  std::vector<std::string> out;
  for (const auto* n : found) out.push_back(n->id);
  return out;
}

std::string reserve_suffix(const VirtualGraph& vg) { return "~" + std::to_string(vg.generation); }

// Hands out a connection leaf in in-tree `in_link` of `owner` destined for out-tree `out_link`.
std::string take_in_reserve(VirtualGraph& vg, const std::string& owner, const std::string& in_link,
                            const std::string& out_link) {
  auto pool = reserves(vg, owner, in_link, "");
  if (pool.empty()) throw Error(Errc::Internal, "in-tree '" + in_link + "' at '" + owner + "' has no reserve");
  if (pool.size() >= 2) {
    VNode& n = vg.nodes.at(pool.front());
    n.kind = NodeKind::Connection;
    n.out_link = out_link;
    return n.id;
  }
  const std::string r = pool.front();
  vg.nodes.at(r).kind = NodeKind::Broadcast;
  const std::string conn = connection_id(owner, in_link, out_link);
  add_node(vg, conn, NodeKind::Connection, owner, in_link, out_link);
  const std::string spare = r + reserve_suffix(vg);
  add_node(vg, spare, NodeKind::Virtual, owner, in_link, "");
  add_edge(vg, r, conn);
  add_edge(vg, r, spare);
  return conn;
}

std::string take_out_reserve(VirtualGraph& vg, const std::string& owner, const std::string& out_link,
                             const std::string& in_link) {
  auto pool = reserves(vg, owner, "", out_link);
  if (pool.empty()) throw Error(Errc::Internal, "out-tree '" + out_link + "' at '" + owner + "' has no reserve");
  if (pool.size() >= 2) {
    VNode& n = vg.nodes.at(pool.front());
    n.kind = NodeKind::Connection;
    n.in_link = in_link;
    return n.id;
  }
  const std::string r = pool.front();
  vg.nodes.at(r).kind = NodeKind::Coding;
  const std::string conn = connection_id(owner, in_link, out_link);
  add_node(vg, conn, NodeKind::Connection, owner, in_link, out_link);
  const std::string spare = r + reserve_suffix(vg);
  add_node(vg, spare, NodeKind::Virtual, owner, "", out_link);
  add_edge(vg, conn, r);
  add_edge(vg, spare, r);
  return conn;
}

std::string ensure_sink_copy(VirtualGraph& vg, const std::string& t) {
  auto it = vg.sink_copy.find(t);
  if (it != vg.sink_copy.end()) return it->second;
  const std::string id = t + "/sink";
  add_node(vg, id, NodeKind::SinkCopy, t, "", "");
  vg.sink_copy[t] = id;
  return id;
}

bool is_sink(const Network& net, const std::string& v) {
  return std::find(net.sinks.begin(), net.sinks.end(), v) != net.sinks.end();
}

// In-tree for port `in` at `owner`, with the given connection leaves already created.
std::string make_in_tree(VirtualGraph& vg, const std::string& owner, const std::string& in,
                         std::vector<std::string> leaves) {
  if (is_sink(vg.original, owner)) {
    const std::string term = ensure_sink_copy(vg, owner);
    const std::string leaf = connection_id(owner, in, kSinkPort);
    add_node(vg, leaf, NodeKind::Connection, owner, in, kSinkPort);
    add_edge(vg, leaf, term);
    leaves.push_back(leaf);
  }
  const std::string spare = owner + "/in/" + in + "/v";
  add_node(vg, spare, NodeKind::Virtual, owner, in, "");
  leaves.push_back(spare);
  return build_in_tree(vg, owner, in, leaves, "");
}

std::string make_out_tree(VirtualGraph& vg, const std::string& owner, const std::string& out,
                          std::vector<std::string> leaves) {
  const std::string spare = owner + "/out/" + out + "/v";
  add_node(vg, spare, NodeKind::Virtual, owner, "", out);
  leaves.push_back(spare);
  return build_out_tree(vg, owner, out, leaves, "");
}

void build_gadget(VirtualGraph& vg, const std::string& v, std::map<std::string, std::string>& in_root,
                  std::map<std::string, std::string>& out_root) {
  const bool source = v == vg.original.source;
  const auto ins = in_ports(vg, v);
  const auto outs = links_out_of(vg.original, v);
  if (is_sink(vg.original, v)) ensure_sink_copy(vg, v);

  // feeds[(i, m)] holds the connection node when in-port i reaches out-link m.
  std::map<std::pair<std::size_t, std::size_t>, std::string> feeds;
  for (std::size_t m = 0; m < outs.size(); ++m) {
    const bool direct = source && m < static_cast<std::size_t>(vg.rate);
    for (std::size_t i = 0; i < ins.size(); ++i) {
      if (direct && i != m) continue;
      const std::string id = connection_id(v, ins[i], outs[m]);
      add_node(vg, id, NodeKind::Connection, v, ins[i], outs[m]);
      feeds[{i, m}] = id;
    }
    if (direct) vg.unit_fed.insert(outs[m]);
  }
  for (std::size_t i = 0; i < ins.size(); ++i) {
    std::vector<std::string> leaves;
    for (std::size_t m = 0; m < outs.size(); ++m) {
      auto it = feeds.find({i, m});
      if (it != feeds.end()) leaves.push_back(it->second);
    }
    const std::string root = make_in_tree(vg, v, ins[i], leaves);
    if (source) {
      const std::string copy = v + "/copy" + std::to_string(i);
      add_node(vg, copy, NodeKind::SourceCopy, v, "", "");
      vg.source_copies.push_back(copy);
      add_edge(vg, copy, root);
    } else {
      in_root[ins[i]] = root;
    }
  }
  for (std::size_t m = 0; m < outs.size(); ++m) {
    if (vg.unit_fed.count(outs[m])) {
      out_root[outs[m]] = feeds.at({m, m});
      continue;
    }
    std::vector<std::string> leaves;
    for (std::size_t i = 0; i < ins.size(); ++i) leaves.push_back(feeds.at({i, m}));
    out_root[outs[m]] = make_out_tree(vg, v, outs[m], leaves);
  }
}

std::string link_edge_id(const std::string& link) { return "link:" + link; }

// Folds split nodes whose two children are both spare leaves back into one spare.
void collapse_in(VirtualGraph& vg, std::string x) {
  while (true) {
    const VNode& leaf = vg.nodes.at(x);
    if (leaf.ins.size() != 1) return;
    const std::string p = vg.edges.at(leaf.ins.front()).tail;
    const VNode& parent = vg.nodes.at(p);
    if (parent.kind != NodeKind::Broadcast || parent.owner != leaf.owner || parent.in_link != leaf.in_link) return;
    if (parent.outs.size() != 2) return;
    std::vector<std::string> kids;
    for (const auto& e : parent.outs) kids.push_back(vg.edges.at(e).head);
    for (const auto& k : kids) {
      const VNode& kn = vg.nodes.at(k);
      if (kn.kind != NodeKind::Virtual || !kn.outs.empty()) return;
    }
    for (const auto& k : kids) remove_node(vg, k);
    vg.nodes.at(p).kind = NodeKind::Virtual;
    x = p;
  }
}

void collapse_out(VirtualGraph& vg, std::string x) {
  while (true) {
    const VNode& leaf = vg.nodes.at(x);
    if (leaf.outs.size() != 1) return;
    const std::string p = vg.edges.at(leaf.outs.front()).head;
    const VNode& parent = vg.nodes.at(p);
    if (parent.kind != NodeKind::Coding || parent.owner != leaf.owner || parent.out_link != leaf.out_link) return;
    if (parent.ins.size() != 2) return;
    std::vector<std::string> kids;
    for (const auto& e : parent.ins) kids.push_back(vg.edges.at(e).tail);
    for (const auto& k : kids) {
      const VNode& kn = vg.nodes.at(k);
      if (kn.kind != NodeKind::Virtual || !kn.ins.empty()) return;
    }
    for (const auto& k : kids) remove_node(vg, k);
    vg.nodes.at(p).kind = NodeKind::Virtual;
    x = p;
  }
}

bool reaches(const Network& net, const std::string& from, const std::string& to) {
  std::map<std::string, std::vector<std::string>> out;
  for (const auto& e : net.edges) out[e.tail].push_back(e.head);
  std::set<std::string> seen{from};
  std::deque<std::string> q{from};
  while (!q.empty()) {
    const std::string v = q.front();
    q.pop_front();
    if (v == to) return true;
    for (const auto& w : out[v]) {
      if (seen.insert(w).second) q.push_back(w);
    }
  }
  return false;
}

void join_unit(VirtualGraph& vg, const std::string& link, const std::string& u, const std::string& v) {
  // Tail side: a new out-tree fed by one leaf from each existing in-tree of u.
  std::string out_root;
  {
    std::vector<std::string> leaves;
    for (const auto& i : in_ports(vg, u)) leaves.push_back(take_in_reserve(vg, u, i, link));
    out_root = make_out_tree(vg, u, link, leaves);
  }
  // Head side: a new in-tree feeding one leaf into each existing out-tree of v.
  std::string in_root;
  {
    std::vector<std::string> leaves;
    for (const auto& m : links_out_of(vg.original, v)) {
      if (m == link) continue;
      leaves.push_back(take_out_reserve(vg, v, m, link));
    }
    in_root = make_in_tree(vg, v, link, leaves);
  }
  vg.provenance[link] = add_edge(vg, out_root, in_root, link_edge_id(link));
}

void leave_unit(VirtualGraph& vg, const std::string& link, const std::string& u, const std::string& v) {
  remove_edge(vg, vg.provenance.at(link));
  vg.provenance.erase(link);
  std::vector<std::string> doomed;
  std::vector<std::string> in_spares;
  std::vector<std::string> out_spares;
  for (auto& [id, n] : vg.nodes) {
    if (n.owner == u && n.out_link == link) {
      if (n.kind == NodeKind::Connection && !n.in_link.empty()) {
        in_spares.push_back(id);
      } else {
        doomed.push_back(id);
      }
    } else if (n.owner == v && n.in_link == link) {
      if (n.kind == NodeKind::Connection && !n.out_link.empty() && n.out_link != kSinkPort) {
        out_spares.push_back(id);
      } else {
        doomed.push_back(id);
      }
    }
  }
  for (const auto& id : doomed) remove_node(vg, id);
  for (const auto& id : in_spares) {
    VNode& n = vg.nodes.at(id);
    for (const auto& e : std::vector<std::string>(n.outs)) remove_edge(vg, e);
    n.kind = NodeKind::Virtual;
    n.out_link.clear();
  }
  for (const auto& id : out_spares) {
    VNode& n = vg.nodes.at(id);
    for (const auto& e : std::vector<std::string>(n.ins)) remove_edge(vg, e);
    n.kind = NodeKind::Virtual;
    n.in_link.clear();
  }
  for (const auto& id : in_spares) {
    if (vg.nodes.count(id)) collapse_in(vg, id);
  }
  for (const auto& id : out_spares) {
    if (vg.nodes.count(id)) collapse_out(vg, id);
  }
  vg.unit_fed.erase(link);
  vg.retired_links.insert(link);
}

}  // namespace

VirtualGraph transform(const Network& net, int rate) {
  validate(net);
  if (rate < 1) throw Error(Errc::ParameterOutOfRange, "rate must be at least 1");
  VirtualGraph vg;
  vg.original = net;
  vg.rate = rate;
  std::map<std::string, std::string> in_root;
  std::map<std::string, std::string> out_root;
  for (const auto& n : net.nodes) build_gadget(vg, n.id, in_root, out_root);
  for (const auto& l : net.unit_links()) {
    vg.provenance[l.id] = add_edge(vg, out_root.at(l.id), in_root.at(l.id), link_edge_id(l.id));
  }
  refresh_depths(vg);
  return vg;
}

void join_link(VirtualGraph& vg, const EdgeRecord& link, Role new_role) {
  if (link.cap < 1) throw Error(Errc::MalformedNetwork, "joined link needs positive capacity");
  if (link.tail == link.head) throw Error(Errc::CycleDetected, "self-loop join");
  for (const auto& e : vg.original.edges) {
    if (e.id == link.id) throw Error(Errc::MalformedNetwork, "edge id '" + link.id + "' already in use");
  }
  for (int k = 0; k < link.cap; ++k) {
    if (vg.retired_links.count(link.id + "#" + std::to_string(k))) {
      throw Error(Errc::MalformedNetwork, "edge id '" + link.id + "' was used before");
    }
  }
  const bool has_tail = vg.original.has_node(link.tail);
  const bool has_head = vg.original.has_node(link.head);
  if (!has_tail && !has_head) throw Error(Errc::UnknownNode, "join must attach to an existing node");
  if (link.head == vg.original.source) throw Error(Errc::MalformedNetwork, "source cannot receive links");
  if (new_role == Role::Source) throw Error(Errc::MalformedNetwork, "joined node cannot be a source");
  if (has_tail && has_head && reaches(vg.original, link.head, link.tail)) {
    throw Error(Errc::CycleDetected, "link '" + link.id + "' would close a cycle");
  }
  ++vg.generation;
  for (const auto* end : {&link.tail, &link.head}) {
    if (!vg.original.has_node(*end)) {
      vg.original.nodes.push_back({*end, new_role});
      if (new_role == Role::Sink) {
        vg.original.sinks.push_back(*end);
        ensure_sink_copy(vg, *end);
      }
    }
  }
  // A fresh tail has no in-links: its out-trees are lone spares.
  vg.original.edges.push_back(link);
  for (int k = 0; k < link.cap; ++k) join_unit(vg, link.id + "#" + std::to_string(k), link.tail, link.head);
  refresh_depths(vg);
}

void leave_link(VirtualGraph& vg, const std::string& edge_id) {
  auto it = std::find_if(vg.original.edges.begin(), vg.original.edges.end(),
                         [&](const EdgeRecord& e) { return e.id == edge_id; });
  if (it == vg.original.edges.end()) throw Error(Errc::UnknownEdge, "no edge '" + edge_id + "'");
  const EdgeRecord rec = *it;
  ++vg.generation;
  for (int k = 0; k < rec.cap; ++k) leave_unit(vg, rec.id + "#" + std::to_string(k), rec.tail, rec.head);
  vg.original.edges.erase(it);
  refresh_depths(vg);
}

std::map<std::string, int> virtual_min_cut(const VirtualGraph& vg) {
  std::unordered_map<std::string, std::size_t> index;
  FlowGraph g;
  for (const auto& [id, _] : vg.nodes) index[id] = g.add_node();
  for (const auto& [id, e] : vg.edges) g.add_edge(index.at(e.tail), index.at(e.head));
  std::vector<std::size_t> sources;
  for (const auto& c : vg.source_copies) sources.push_back(index.at(c));
  std::map<std::string, int> out;
  for (const auto& t : vg.original.sinks) {
    auto it = vg.sink_copy.find(t);
    out[t] = it == vg.sink_copy.end() ? 0 : g.max_flow(sources, index.at(it->second));
  }
  return out;
}

namespace {

// Number of directed paths from `from` to `to` using only nodes owned by `owner`.
std::uint64_t count_paths(const VirtualGraph& vg, const std::vector<std::string>& order, const std::string& owner,
                          const std::string& from, const std::string& to) {
  std::map<std::string, std::uint64_t> ways{{from, 1}};
  for (const auto& v : order) {
    auto it = ways.find(v);
    if (it == ways.end()) continue;
    const std::uint64_t w = it->second;
    for (const auto& e : vg.nodes.at(v).outs) {
      const std::string& h = vg.edges.at(e).head;
      if (vg.nodes.at(h).owner != owner) continue;
      ways[h] = std::min<std::uint64_t>(ways[h] + w, 1u << 30);
    }
  }
  auto it = ways.find(to);
  return it == ways.end() ? 0 : it->second;
}

}  // namespace

std::vector<std::string> check_invariants(const VirtualGraph& vg) {
  std::vector<std::string> bad;
  std::vector<std::string> order;
  try {
    order = vg.topological_order();
  } catch (const Error& e) {
    bad.push_back(e.what());
    return bad;
  }
  for (const auto& [id, n] : vg.nodes) {
    const std::size_t in = n.ins.size();
    const std::size_t out = n.outs.size();
    bool ok = true;
    switch (n.kind) {
      case NodeKind::SourceCopy: ok = in == 0 && out <= 2; break;
      case NodeKind::Broadcast: ok = in == 1 && out >= 1 && out <= 2; break;
      case NodeKind::Coding: ok = in == 2 && out == 1; break;
      case NodeKind::Connection: ok = in == 1 && out == 1; break;
      case NodeKind::Virtual: ok = (in == 1 && out == 0) || (in == 0 && out == 1); break;
      case NodeKind::SinkCopy: ok = out == 0; break;
    }
    if (!ok) {
      bad.push_back("degree rule broken at " + id + " (" + kind_name(n.kind) + ", in " + std::to_string(in) +
                    ", out " + std::to_string(out) + ")");
    }
  }
  const auto links = vg.original.unit_links();
  for (const auto& l : links) {
    if (!vg.provenance.count(l.id)) bad.push_back("link " + l.id + " has no virtual edge");
  }
  for (const auto& nrec : vg.original.nodes) {
    const std::string& v = nrec.id;
    std::vector<std::pair<std::string, std::string>> ins;  // port, entry node
    if (v == vg.original.source) {
      for (std::size_t k = 0; k < vg.source_copies.size(); ++k) ins.push_back({copy_link(static_cast<int>(k)), vg.source_copies[k]});
    } else {
      for (const auto& l : links) {
        if (l.head == v) ins.push_back({l.id, vg.edge(vg.provenance.at(l.id)).head});
      }
    }
    std::vector<std::pair<std::string, std::string>> outs;  // link, exit node
    for (const auto& l : links) {
      if (l.tail == v) outs.push_back({l.id, vg.edge(vg.provenance.at(l.id)).tail});
    }
    if (is_sink(vg.original, v)) outs.push_back({kSinkPort, vg.sink_copy.at(v)});
    for (std::size_t i = 0; i < ins.size(); ++i) {
      for (const auto& [link, exit] : outs) {
        std::uint64_t want = 1;
        if (vg.unit_fed.count(link)) {
          const VNode& exit_node = vg.nodes.at(exit);
          want = exit_node.in_link == ins[i].first ? 1 : 0;
        }
        const std::uint64_t got = count_paths(vg, order, v, ins[i].second, exit);
        if (got != want) {
          bad.push_back("gadget " + v + ": " + std::to_string(got) + " paths from " + ins[i].first + " to " + link);
        }
      }
      if (reserves(vg, v, ins[i].first, "").empty()) bad.push_back("in-tree " + ins[i].first + " at " + v + " has no reserve");
    }
    for (const auto& [link, exit] : outs) {
      if (link == kSinkPort || vg.unit_fed.count(link)) continue;
      if (reserves(vg, v, "", link).empty()) bad.push_back("out-tree " + link + " at " + v + " has no reserve");
    }
  }
  return bad;
}

nlohmann::json to_json(const VirtualGraph& vg) {
  nlohmann::json j;
  j["rate"] = vg.rate;
  j["source"] = vg.original.source;
  j["source_copies"] = vg.source_copies;
  j["sinks"] = nlohmann::json::array();
  for (const auto& t : vg.original.sinks) {
    auto it = vg.sink_copy.find(t);
    j["sinks"].push_back({{"id", t}, {"terminal", it == vg.sink_copy.end() ? "" : it->second}});
  }
  j["nodes"] = nlohmann::json::array();
  for (const auto& [id, n] : vg.nodes) {
    j["nodes"].push_back({{"id", id}, {"kind", kind_name(n.kind)}, {"depth", n.depth}, {"origin", n.owner},
                          {"active", n.active}});
  }
  j["edges"] = nlohmann::json::array();
  for (const auto& [id, e] : vg.edges) j["edges"].push_back({{"id", id}, {"tail", e.tail}, {"head", e.head}, {"cap", 1}});
  j["provenance"] = nlohmann::json::object();
  for (const auto& [link, e] : vg.provenance) j["provenance"][link] = nlohmann::json::array({e});
  return j;
}

}  // namespace urnc
