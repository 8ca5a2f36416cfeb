#include <doctest.h>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "urnc/error.hpp"
#include "urnc/transform.hpp"

using namespace urnc;

namespace {

// Node id -> (kind, ins, outs) over active nodes, plus edges.
using Shape = std::pair<std::map<std::string, std::tuple<NodeKind, std::vector<std::string>, std::vector<std::string>>>,
                        std::map<std::string, std::pair<std::string, std::string>>>;

Shape shape_of(const VirtualGraph& vg) {
  Shape s;
  for (const auto& [id, n] : vg.nodes) {
    if (n.active) s.first[id] = {n.kind, n.ins, n.outs};
  }
  for (const auto& [id, e] : vg.edges) s.second[id] = {e.tail, e.head};
  return s;
}

std::size_t count(const VirtualGraph& vg, const std::string& owner, NodeKind kind) {
  std::size_t c = 0;
  for (const auto& [_, n] : vg.nodes) c += n.owner == owner && n.kind == kind ? 1 : 0;
  return c;
}

Network three_by_three() {
  Network n;
  n.nodes = {{"s", Role::Source}, {"a", Role::Internal}, {"t", Role::Sink}};
  n.edges = {{"in", "s", "a", 3}, {"out", "a", "t", 3}};
  n.source = "s";
  n.sinks = {"t"};
  return n;
}

}  // namespace

TEST_CASE("a 3-in 3-out node gets nine connections and six spares") {
  const VirtualGraph vg = transform(three_by_three(), 3);
  CHECK(count(vg, "a", NodeKind::Connection) == 9);
  CHECK(count(vg, "a", NodeKind::Virtual) == 6);
  CHECK(check_invariants(vg).empty());
  CHECK(virtual_min_cut(vg).at("t") == 3);
}

TEST_CASE("butterfly gadget") {
  const VirtualGraph vg = transform(gen_butterfly(), 2);
  CHECK(vg.source_copies.size() == 2);
  CHECK(check_invariants(vg).empty());
  CHECK(virtual_min_cut(vg) == std::map<std::string, int>{{"t1", 2}, {"t2", 2}});
  // every virtual node has in/out degree at most two
  for (const auto& [_, n] : vg.nodes) {
    CHECK(n.ins.size() <= 2);
    CHECK(n.outs.size() <= 2);
  }
  CHECK_FALSE(vg.coding_nodes().empty());
  for (const auto& id : vg.coding_nodes()) {
    CHECK(vg.node(id).ins.size() == 2);
    CHECK(vg.node(id).outs.size() == 1);
  }
}

TEST_CASE("depths match shortest hop distance") {
  for (std::uint64_t s = 0; s < 20; ++s) {
    const VirtualGraph vg = transform(fixture::random_net(200 + s), 2);
    std::vector<std::pair<std::string, std::string>> edges;
    for (const auto& [_, e] : vg.edges) edges.push_back({e.tail, e.head});
    const auto want = oracle::relax_depths(edges, vg.source_copies);
    for (const auto& [id, n] : vg.nodes) {
      if (!n.active) continue;
      if (want.count(id)) CHECK(n.depth == want.at(id) + vg.node(vg.source_copies[0]).depth);
    }
  }
}

TEST_CASE("transform preserves every sink's min-cut") {
  for (std::uint64_t s = 0; s < 40; ++s) {
    const Network net = fixture::random_net(300 + s, 7, 2, 1 + static_cast<int>(s % 3), 3);
    int out_degree = 0;
    for (const auto& l : net.unit_links()) out_degree += l.tail == net.source ? 1 : 0;
    const VirtualGraph vg = transform(net, out_degree);
    CHECK(virtual_min_cut(vg) == min_cut(net).per_sink);
    // a smaller rate caps each sink at the rate
    const VirtualGraph capped = transform(net, 1);
    for (const auto& [t, c] : virtual_min_cut(capped)) CHECK(c == 1);
    CHECK(check_invariants(vg).empty());
  }
}

TEST_CASE("join then leave restores the gadget") {
  for (std::uint64_t s = 0; s < 20; ++s) {
    const Network net = fixture::random_net(400 + s, 7);
    VirtualGraph vg = transform(net, 2);
    const Shape before = shape_of(vg);
    const auto order = topological_order(net);
    // a shortcut forward in topological order never closes a cycle
    const std::string u = order[1 + s % (order.size() - 2)];
    std::string v;
    for (std::size_t i = order.size(); i-- > 0;) {
      if (net.node(order[i]).role != Role::Source && order[i] != u) {
        v = order[i];
        break;
      }
    }
    if (fixture::reaches(net, v, u)) continue;
    join_link(vg, {"extra", u, v, 1});
    CHECK(check_invariants(vg).empty());
    CHECK(shape_of(vg) != before);
    leave_link(vg, "extra");
    CHECK(check_invariants(vg).empty());
    CHECK(shape_of(vg) == before);
  }
}

TEST_CASE("random churn keeps invariants and tracks the cut") {
  for (std::uint64_t s = 0; s < 30; ++s) {
    const Network net = fixture::random_net(500 + s, 7);
    VirtualGraph vg = transform(net, 2);
    for (const auto& ev : fixture::churn_script(net, 600 + s, 20)) {
      if (ev.kind == ChurnEvent::Kind::Join) {
        join_link(vg, ev.edge, ev.new_role);
      } else {
        leave_link(vg, ev.edge.id);
      }
      const auto bad = check_invariants(vg);
      CHECK_MESSAGE(bad.empty(), (bad.empty() ? "" : bad.front()));
      const auto want = min_cut(vg.original).per_sink;
      const auto got = virtual_min_cut(vg);
      for (const auto& [t, c] : want) CHECK(got.at(t) == std::min(c, vg.rate));
    }
  }
}

TEST_CASE("pre-existing names survive a join") {
  VirtualGraph vg = transform(gen_butterfly(), 2);
  std::set<std::string> before;
  for (const auto& [id, _] : vg.nodes) before.insert(id);
  join_link(vg, {"new", "a", "t2", 1});
  for (const auto& id : before) CHECK(vg.has_node(id));
}

TEST_CASE("bad churn is rejected") {
  VirtualGraph vg = transform(gen_butterfly(), 2);
  CHECK_THROWS_AS(join_link(vg, {"loop", "t1", "a", 1}), Error);
  CHECK_THROWS_AS(join_link(vg, {"sa", "a", "t2", 1}), Error);
  CHECK_THROWS_AS(join_link(vg, {"back", "a", "s", 1}), Error);
  CHECK_THROWS_AS(leave_link(vg, "nope"), Error);
  CHECK_THROWS_AS(transform(gen_butterfly(), 0), Error);
}

TEST_CASE("serialized graph lists every node") {
  const VirtualGraph vg = transform(gen_butterfly(), 2);
  const auto j = to_json(vg);
  CHECK(j.at("nodes").size() == vg.nodes.size());
  CHECK(j.at("edges").size() == vg.edges.size());
}

TEST_CASE("pass-through node has one connection") {
  Network line;
  line.nodes = {{"s", Role::Source}, {"a", Role::Internal}, {"t", Role::Sink}};
  line.edges = {{"e1", "s", "a", 1}, {"e2", "a", "t", 1}};
  line.source = "s";
  line.sinks = {"t"};
  VirtualGraph vg = transform(line, 1);
  // each side is a two-leaf tree: the connection and one reserve
  CHECK(count(vg, "a", NodeKind::Connection) == 1);
  CHECK(count(vg, "a", NodeKind::Virtual) == 2);
  // a second incoming link splits the outgoing side's reserve and brings its own
  join_link(vg, {"e3", "s", "a", 1});
  CHECK(count(vg, "a", NodeKind::Connection) == 2);
  CHECK(count(vg, "a", NodeKind::Virtual) == 3);
  CHECK(check_invariants(vg).empty());
}

TEST_CASE("surgery is local and depths stay frozen") {
  for (std::uint64_t s = 0; s < 20; ++s) {
    const Network net = fixture::random_net(1100 + s, 8);
    VirtualGraph vg = transform(net, 2);
    const auto script = fixture::churn_script(net, 1200 + s, 6);
    for (const auto& ev : script) {
      const VirtualGraph before = vg;
      std::set<std::string> touched;
      if (ev.kind == ChurnEvent::Kind::Join) {
        join_link(vg, ev.edge, ev.new_role);
        touched = {ev.edge.tail, ev.edge.head};
      } else {
        const auto& rec = *std::find_if(before.original.edges.begin(), before.original.edges.end(),
                                        [&](const EdgeRecord& e) { return e.id == ev.edge.id; });
        leave_link(vg, ev.edge.id);
        touched = {rec.tail, rec.head};
      }
      for (const auto& [id, n] : before.nodes) {
        if (!vg.has_node(id)) {
          CHECK(touched.count(n.owner) == 1);
          continue;
        }
        const VNode& after = vg.node(id);
        if (n.depth >= 0) CHECK(after.depth == n.depth);
        if (!touched.count(n.owner)) {
          CHECK(after.ins == n.ins);
          CHECK(after.outs == n.outs);
          CHECK(after.kind == n.kind);
        }
      }
    }
  }
}

TEST_CASE("leaving the sole input deactivates the node") {
  Network net = gen_butterfly();
  VirtualGraph vg = transform(net, 2);
  leave_link(vg, "sa");
  for (const auto& [_, n] : vg.nodes) {
    if (n.owner == "a") CHECK_FALSE(n.active);
  }
  CHECK(check_invariants(vg).empty());
}

TEST_CASE("removing a parallel link lowers the cut") {
  Network net;
  net.nodes = {{"s", Role::Source}, {"a", Role::Internal}, {"t", Role::Sink}};
  net.edges = {{"p1", "s", "a", 1}, {"p2", "s", "a", 1}, {"p3", "s", "a", 1}, {"q", "a", "t", 3}};
  net.source = "s";
  net.sinks = {"t"};
  VirtualGraph vg = transform(net, 3);
  CHECK(virtual_min_cut(vg).at("t") == 3);
  leave_link(vg, "p2");
  CHECK(virtual_min_cut(vg).at("t") == 2);
  CHECK(min_cut(vg.original).per_sink.at("t") == 2);
  // edge ids are never reused, so the link comes back under a new one
  CHECK_THROWS_AS(join_link(vg, {"p2", "s", "a", 1}), Error);
  join_link(vg, {"p4", "s", "a", 1});
  CHECK(virtual_min_cut(vg).at("t") == 3);
  CHECK(check_invariants(vg).empty());
}
