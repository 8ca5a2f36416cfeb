// One PASS/FAIL line per acceptance criterion. Exit status is non-zero when any fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>
#include <string>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "urnc/codes.hpp"
#include "urnc/error.hpp"
#include "urnc/identity.hpp"
#include "urnc/sim.hpp"
#include "urnc/szcheck.hpp"
#include "urnc/transform.hpp"

using namespace urnc;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::vector<BinaryPoly> to_polys(const std::vector<std::string>& bits) {
  std::vector<BinaryPoly> out;
  for (const auto& b : bits) out.push_back(BinaryPoly::from_bitstring(b));
  return out;
}

// 1. R2-D2 decodes every sink bit-exactly.
Outcome zero_error_r2d2() {
  std::vector<Network> nets{gen_butterfly()};
  for (std::uint64_t s = 0; nets.size() < 51; ++s) nets.push_back(fixture::random_net(1000 + s, 8, 2, 2, 2));
  int failures = 0;
  int checks = 0;
  for (std::size_t i = 0; i < nets.size(); ++i) {
    const VirtualGraph vg = transform(nets[i], 2);
    const IdRegistry reg = assign_ids(vg);
    const CodeAssignment ca = assign_r2d2(vg, reg);
    for (int m = 0; m < 100; ++m) {
      const auto xs = to_polys(random_messages(derive_seed(i, static_cast<std::uint64_t>(m)), 2, 64));
      const EdgeStates st = encode_payloads(vg, ca, xs);
      for (const auto& t : vg.original.sinks) {
        ++checks;
        try {
          const auto got = decode(vg, st, t);
          if (got != xs) ++failures;
        } catch (const Error&) {
          ++failures;
        }
      }
    }
  }
  std::ostringstream d;
  d << nets.size() << " networks, " << checks << " sink decodes, " << failures << " failures";
  return {failures == 0, d.str()};
}

// Path-system oracle for C3-P0: XOR-multiset of exponent sums over every choice of
// one path per source copy into a permutation of the chosen sink edges.
struct C3Check {
  bool det_matches = false;
  bool distinct_paths = false;
  bool nonzero = false;
};

BigInt k_label(const IdRegistry& reg, const VirtualGraph& vg, const std::string& in_edge) {
  const VEdge& e = vg.edge(in_edge);
  const VNode& v = vg.node(e.head);
  const std::string& w = vg.edge(v.outs.front()).head;
  BigInt acc = reg.id_of(e.tail).as_int();
  for (const BigInt& x : {BigInt(0), reg.id_of(e.head).as_int(), BigInt(0), reg.id_of(w).as_int()}) {
    const BigInt s = acc + x;
    acc = s * (s + 1) / 2 + x;
  }
  return acc;
}

C3Check c3p0_oracle(const VirtualGraph& vg, const IdRegistry& reg, const EdgeStates& st, const std::string& sink,
                    const Rational& det_value) {
  std::vector<std::string> chosen;
  transfer_matrix(vg, st, sink, &chosen);
  auto out_edges = [&](const std::string& v) {
    std::vector<std::pair<std::string, std::string>> out;
    for (const auto& e : vg.node(v).outs) out.push_back({e, vg.edge(e).head});
    return out;
  };
  const std::size_t r = chosen.size();
  // exps[k][j] = exponent position-lists of every path copy k -> chosen[j]
  std::vector<std::vector<std::vector<std::vector<BigInt>>>> exps(r, std::vector<std::vector<std::vector<BigInt>>>(r));
  bool distinct = true;
  for (std::size_t j = 0; j < r; ++j) {
    std::set<std::set<BigInt>> seen;
    for (std::size_t k = 0; k < r; ++k) {
      std::vector<std::vector<std::string>> paths;
      std::vector<std::string> stack;
      oracle::all_paths(out_edges, vg.source_copies[k], vg.edge(chosen[j]).tail, stack, paths);
      for (auto& p : paths) {
        p.push_back(chosen[j]);
        std::vector<BigInt> hops;
        for (const auto& e : p) {
          if (vg.node(vg.edge(e).head).kind == NodeKind::Coding) hops.push_back(k_label(reg, vg, e));
        }
        if (!seen.insert(oracle::sum_of_powers(hops)).second) distinct = false;
        exps[k][j].push_back(std::move(hops));
      }
    }
  }
  std::map<std::set<BigInt>, int> terms;
  std::vector<std::size_t> perm(r);
  for (std::size_t i = 0; i < r; ++i) perm[i] = i;
  do {
    std::function<void(std::size_t, std::vector<BigInt>&)> rec = [&](std::size_t k, std::vector<BigInt>& acc) {
      if (k == r) {
        terms[oracle::sum_of_powers(acc)] ^= 1;
        return;
      }
      for (const auto& hops : exps[k][perm[k]]) {
        const std::size_t mark = acc.size();
        acc.insert(acc.end(), hops.begin(), hops.end());
        rec(k + 1, acc);
        acc.resize(mark);
      }
    };
    std::vector<BigInt> acc;
    rec(0, acc);
  } while (std::next_permutation(perm.begin(), perm.end()));
  std::set<std::set<BigInt>> expected;
  for (const auto& [e, odd] : terms) {
    if (odd) expected.insert(e);
  }
  std::set<std::set<BigInt>> got;
  for (const auto& x : det_value.num().exponents()) got.insert(std::set<BigInt>(x.bits().begin(), x.bits().end()));
  C3Check c;
  c.det_matches = det_value.den().is_one() && expected == got;
  c.distinct_paths = distinct;
  c.nonzero = !expected.empty();
  return c;
}

Outcome zero_error_c3p0() {
  int nets = 0;
  int failures = 0;
  int sinks = 0;
  std::size_t max_coding = 0;
  for (std::uint64_t s = 0; nets < 20 && s < 5000; ++s) {
    const Network net = fixture::random_net(5000 + s, 5 + static_cast<int>(s % 2), 1 + static_cast<int>(s % 2), 2, 1, 0.3);
    const VirtualGraph vg = transform(net, 2);
    if (fixture::count_coding(vg) > 12) continue;
    ++nets;
    max_coding = std::max(max_coding, fixture::count_coding(vg));
    const IdRegistry reg = assign_ids(vg);
    const CodeAssignment ca = assign_c3p0(vg, reg);
    const EdgeStates st = percolate(vg, ca, 2);
    for (const auto& t : net.sinks) {
      ++sinks;
      const Rational d = det(transfer_matrix(vg, st, t));
      const C3Check c = c3p0_oracle(vg, reg, st, t, d);
      if (d.is_zero() || !c.det_matches || !c.distinct_paths || !c.nonzero) ++failures;
    }
  }
  std::ostringstream d;
  d << nets << " networks (<= " << max_coding << " coding nodes), " << sinks << " sinks, " << failures << " failures";
  return {nets == 20 && failures == 0, d.str()};
}

std::vector<Network> bound_nets() {
  std::vector<Network> nets{gen_butterfly()};
  for (std::uint64_t s = 0; nets.size() < 21; ++s) nets.push_back(fixture::random_net(2000 + s, 8, 2, 2, 1));
  return nets;
}

Outcome mc_bound(Design design) {
  const auto nets = bound_nets();
  int cells = 0;
  int bad = 0;
  double worst = 0;
  for (double eps : {0.5, 0.2}) {
    for (std::size_t i = 0; i < nets.size(); ++i) {
      CodeParams p{eps, 2, static_cast<int>(nets[i].sinks.size())};
      const MonteCarloResult mc = monte_carlo(nets[i], design, p, 500, derive_seed(77, i), 1);
      ++cells;
      worst = std::max(worst, mc.rate);
      if (mc.rate > eps + 3 * mc.ci95) ++bad;
    }
  }
  std::ostringstream d;
  d << cells << " cells x 500 trials, worst failure rate " << worst << ", " << bad << " cells over bound";
  return {bad == 0, d.str()};
}

// 4 also checks that SUP draws ignore the sink count.
Outcome sup_bound() {
  Outcome o = mc_bound(Design::SUP);
  int same = 0;
  int wup_changed = 0;
  int tried = 0;
  for (std::uint64_t s = 0; s < 20; ++s) {
    const Network full = fixture::random_net(2100 + s, 8, 3, 2, 1);
    Network fewer = full;
    // Demote the last sink to a plain node; the topology is untouched.
    const std::string t = fewer.sinks.back();
    fewer.sinks.pop_back();
    for (auto& n : fewer.nodes) {
      if (n.id == t) n.role = Role::Internal;
    }
    const VirtualGraph a = transform(full, 2);
    const VirtualGraph b = transform(fewer, 2);
    const IdRegistry ra = assign_ids(a);
    const IdRegistry rb = assign_ids(b);
    // At epsilon 0.5 the WUP budget moves between 2 and 3 sinks, so it serves as a contrast.
    CodeParams p{0.5, 2, 1};
    ++tried;
    if (make_assignment(a, ra, Design::SUP, p, 99).coeffs == make_assignment(b, rb, Design::SUP, p, 99).coeffs) ++same;
    if (make_assignment(a, ra, Design::WUP, p, 99).coeffs != make_assignment(b, rb, Design::WUP, p, 99).coeffs) {
      ++wup_changed;
    }
  }
  o.detail += "; SUP identical across sink counts in " + std::to_string(same) + "/" + std::to_string(tried) +
              " (WUP differs in " + std::to_string(wup_changed) + ")";
  o.pass = o.pass && same == tried;
  return o;
}

Outcome sz_lemma() {
  SzGenParams params;
  const SzCorpusReport rep = sz_corpus(200, 200, 4242, params);
  std::set<std::size_t> sizes;
  std::size_t mixed = 0;
  for (const auto& e : rep.entries) {
    std::set<std::size_t> here;
    for (const auto& s : e.instance.at("sets")) {
      sizes.insert(s.size());
      here.insert(s.size());
    }
    if (here.size() > 1) ++mixed;
  }
  std::ostringstream d;
  d << rep.entries.size() << " instances (" << mixed << " with mixed set sizes), " << rep.violations << " violations";
  return {rep.violations == 0 && sizes.size() == 3, d.str()};
}

int source_out_degree(const Network& net) {
  int r = 0;
  for (const auto& l : net.unit_links()) r += l.tail == net.source ? 1 : 0;
  return std::max(r, 1);
}

int oracle_cut(const Network& net, const std::string& t) {
  std::map<std::string, int> idx;
  for (const auto& n : net.nodes) idx[n.id] = static_cast<int>(idx.size());
  std::vector<std::vector<int>> cap(idx.size(), std::vector<int>(idx.size(), 0));
  for (const auto& e : net.edges) cap[idx[e.tail]][idx[e.head]] += e.cap;
  return oracle::dfs_max_flow(cap, idx[net.source], idx[t]);
}

int oracle_virtual_cut(const VirtualGraph& vg, const std::string& t) {
  std::map<std::string, int> idx;
  for (const auto& [id, _] : vg.nodes) idx[id] = static_cast<int>(idx.size());
  const int super = static_cast<int>(idx.size());
  std::vector<std::vector<int>> cap(idx.size() + 1, std::vector<int>(idx.size() + 1, 0));
  for (const auto& [id, e] : vg.edges) cap[idx[e.tail]][idx[e.head]] += 1;
  for (const auto& c : vg.source_copies) cap[super][idx[c]] = 1;
  return oracle::dfs_max_flow(cap, super, idx[vg.sink_copy.at(t)]);
}

Outcome transform_invariants() {
  std::vector<Network> nets{gen_butterfly(), gen_lower_bound(2, LowerBoundMode::ManySinks), gen_combination(4, 2)};
  for (std::uint64_t s = 0; nets.size() < 100; ++s) {
    nets.push_back(fixture::random_net(3000 + s, 5 + static_cast<int>(s % 6), 1 + static_cast<int>(s % 3),
                                       1 + static_cast<int>(s % 3), 1 + static_cast<int>(s % 3), 0.3));
  }
  int violations = 0;
  std::size_t nodes = 0;
  std::string first;
  for (const auto& net : nets) {
    const VirtualGraph vg = transform(net, source_out_degree(net));
    nodes += vg.nodes.size();
    const auto bad = check_invariants(vg);
    violations += static_cast<int>(bad.size());
    if (!bad.empty() && first.empty()) first = bad.front();
    for (const auto& t : net.sinks) {
      const int want = oracle_cut(net, t);
      if (oracle_virtual_cut(vg, t) != want || virtual_min_cut(vg).at(t) != want) {
        ++violations;
        if (first.empty()) first = "min-cut changed at sink " + t;
      }
    }
  }
  std::ostringstream d;
  d << nets.size() << " networks, " << nodes << " virtual nodes, " << violations << " violations";
  if (!first.empty()) d << " (first: " << first << ")";
  return {violations == 0, d.str()};
}

Outcome robustness() {
  std::ostringstream d;
  bool pass = true;
  for (Design design : {Design::WUP, Design::SUP, Design::R2D2, Design::C3P0}) {
    int steps = 0;
    int diffs = 0;
    int broken = 0;
    int eligible = 0;
    int failed = 0;
    int undecoded = 0;
    for (std::uint64_t s = 0; s < 50; ++s) {
      const Network net = fixture::random_net(4000 + s, 6, 2, 2, 1, 0.35);
      const auto script = fixture::churn_script(net, 4100 + s, 10);
      CodeParams p{0.2, 2, static_cast<int>(net.sinks.size())};
      const auto result = robustness_scenario(net, design, p, script, 4200 + s, 64);
      for (const auto& st : result) {
        ++steps;
        diffs += st.coeff_diffs.empty() ? 0 : 1;
        broken += st.invariants_ok ? 0 : 1;
        bool any_fail = false;
        for (const auto& sk : st.report.sinks) {
          if (sk.min_cut < 2) continue;
          if (!sk.decodable) any_fail = true;
          if (sk.decodable && !sk.decode_ok) ++undecoded;
        }
        bool any_eligible = false;
        for (const auto& sk : st.report.sinks) any_eligible = any_eligible || sk.min_cut >= 2;
        if (any_eligible) {
          ++eligible;
          failed += any_fail ? 1 : 0;
        }
      }
    }
    bool ok = diffs == 0 && broken == 0 && undecoded == 0;
    double rate = eligible ? static_cast<double>(failed) / eligible : 0.0;
    if (is_deterministic(design)) {
      ok = ok && failed == 0;
    } else {
      const double ci = eligible ? 1.96 * std::sqrt(rate * (1 - rate) / eligible) : 0.0;
      ok = ok && rate <= 0.2 + 3 * ci;
    }
    pass = pass && ok;
    d << design_name(design) << ": " << steps << " steps, " << diffs << " coeff diffs, " << broken
      << " invariant breaks, " << failed << "/" << eligible << " failing steps, " << undecoded
      << " decode misses";
    if (design != Design::C3P0) d << "; ";
  }
  return {pass, d.str()};
}

Outcome id_protocol() {
  int violations = 0;
  double worst_slope = 0;
  for (std::uint64_t s = 0; s < 1000; ++s) {
    Rng rng(derive_seed(8000, s));
    IdRegistry reg = assign_ids(fixture::random_net(8000 + s % 50, 6, 1, 1, 1, 0.3));
    std::vector<NodeId> ids = reg.all_ids();
    const int len = 1 + static_cast<int>(rng.below(200));
    for (int k = 0; k < len; ++k) ids.push_back(reg.assign_new(ids[rng.below(ids.size())]));
    std::vector<std::string> bits;
    for (const auto& id : ids) bits.push_back(id.bits);
    const std::set<std::string> uniq(bits.begin(), bits.end());
    if (uniq.size() != bits.size() || !prefix_free(bits)) ++violations;
    // Worst case: a chain where each join hangs off the newest node.
    if (s % 50 == 0) {
      // The first join pays the parent's slot width once; after that growth is per hop.
      NodeId cur = reg.assign_new(ids.front());
      const double base = static_cast<double>(cur.bits.size());
      for (int k = 1; k <= len; ++k) {
        cur = reg.assign_new(cur);
        worst_slope = std::max(worst_slope, (static_cast<double>(cur.bits.size()) - base) / k);
      }
      std::vector<std::string> all;
      for (const auto& id : reg.all_ids()) all.push_back(id.bits);
      if (!prefix_free(all)) ++violations;
    }
  }
  std::ostringstream d;
  d << "1000 sequences, " << violations << " violations, worst chain growth " << worst_slope << " bits per join";
  return {violations == 0 && worst_slope <= 2.0, d.str()};
}

Outcome lower_bound_trend() {
  std::ostringstream d;
  bool pass = true;
  std::vector<std::string> degrees;
  Degree prev;
  for (int depth : {2, 3, 4, 5}) {
    const Network net = gen_lower_bound(depth, LowerBoundMode::ManySinks);
    const VirtualGraph vg = transform(net, 2);
    const IdRegistry reg = assign_ids(vg);
    const CodeAssignment ca = assign_r2d2(vg, reg);
    const EdgeStates st = percolate(vg, ca, 2);
    std::set<std::string> leaf_vectors;
    for (int k = 0; k < (1 << depth); ++k) {
      const auto& g = st.at(vg.provenance.at("l" + std::to_string(k) + "#0")).gcv;
      leaf_vectors.insert(g[0].to_text() + "," + g[1].to_text());
    }
    Degree top;
    for (const auto& [_, c] : ca.coeffs) top = std::max(top, c.max_degree());
    for (const auto& [node, k] : ca.labels) top = std::max(top, r2d2_beta(k).degree());
    if (depth == 4) {
      d << "depth 4: " << leaf_vectors.size() << " distinct leaf vectors (need 15); ";
      pass = pass && leaf_vectors.size() >= 15;
      int undecodable = 0;
      for (const auto& t : net.sinks) undecodable += det(transfer_matrix(vg, st, t)).is_zero() ? 1 : 0;
      pass = pass && undecodable == 0;
    }
    if (depth > 2) pass = pass && prev < top;
    prev = top;
    degrees.push_back(top.to_string());
  }
  d << "max coefficient degree by depth 2..5:";
  for (const auto& x : degrees) d << " " << x;
  return {pass, d.str()};
}

Rational random_entry(Rng& rng) {
  switch (rng.below(4)) {
    case 0: return Rational(BinaryPoly::from_words({rng.next() & 0xffff}));
    case 1: return Rational(BinaryPoly::from_words({rng.next() & 0xff}), BinaryPoly::from_words({1 + (rng.next() & 0x3f)}));
    case 2: return Rational(BinaryPoly::monomial(BigNat::pow2(BigInt(rng.below(200)))));
    default: return Rational::zero();
  }
}

Outcome header_framing() {
  Rng rng(derive_seed(10, "headers"));
  int roundtrip_bad = 0;
  long long flips = 0;
  int silent = 0;
  for (int h = 0; h < 10000; ++h) {
    std::vector<Rational> gcv;
    const auto len = rng.below(4);
    for (std::uint64_t k = 0; k < len; ++k) gcv.push_back(random_entry(rng));
    const std::string framed = header_frame(gcv);
    const auto [back, offset] = header_unframe(framed);
    if (!(back == gcv) || offset != framed.size()) ++roundtrip_bad;
    for (std::size_t i = 0; i < framed.size(); ++i) {
      std::string bad = framed;
      bad[i] = bad[i] == '0' ? '1' : '0';
      ++flips;
      try {
        const auto [got, off] = header_unframe(bad);
        if (got == gcv) ++silent;
      } catch (const Error& e) {
        if (e.code() != Errc::FramingError) ++silent;
      }
    }
  }
  std::ostringstream d;
  d << "10000 headers, " << roundtrip_bad << " round-trip errors, " << flips << " single-bit flips, " << silent
    << " silently accepted";
  return {roundtrip_bad == 0 && silent == 0, d.str()};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"zero-error R2-D2", zero_error_r2d2},
      {"zero-error C3-P0", zero_error_c3p0},
      {"WUP failure bound", [] { return mc_bound(Design::WUP); }},
      {"SUP failure bound and strong universality", sup_bound},
      {"generalized Schwartz-Zippel", sz_lemma},
      {"transformation invariants", transform_invariants},
      {"robustness under churn", robustness},
      {"ID protocol", id_protocol},
      {"lower-bound trend", lower_bound_trend},
      {"header framing", header_framing},
  };
  std::set<int> only;
  for (int i = 1; i < argc; ++i) only.insert(std::atoi(argv[i]));
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int n = static_cast<int>(i + 1);
    if (!only.empty() && !only.count(n)) continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("criterion %d %s: %s (%s; %.1fs)\n", n, o.pass ? "PASS" : "FAIL", criteria[i].first, o.detail.c_str(),
                secs);
    std::fflush(stdout);
    failed += o.pass ? 0 : 1;
  }
  return failed == 0 ? 0 : 1;
}
