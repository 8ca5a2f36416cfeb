#include "urnc/codes.hpp"

#include <algorithm>
#include <cmath>

#include "urnc/error.hpp"

namespace urnc {

const char* design_name(Design d) noexcept {
  switch (d) {
    case Design::WUP: return "wup";
    case Design::SUP: return "sup";
    case Design::R2D2: return "r2d2";
    case Design::C3P0: return "c3p0";
  }
  return "wup";
}

Design parse_design(std::string_view name) {
  for (Design d : {Design::WUP, Design::SUP, Design::R2D2, Design::C3P0}) {
    if (name == design_name(d)) return d;
  }
  throw Error(Errc::ParameterOutOfRange, "unknown design '" + std::string(name) + "'");
}

namespace {

void check_epsilon(double epsilon) {
  if (!(epsilon > 0.0 && epsilon <= 1.0)) throw Error(Errc::BadEpsilon, "epsilon must lie in (0, 1]");
}

// Smallest k with 2^k >= x, tolerant of rounding in x.
int ceil_log2(double x) {
  int k = 0;
  while (std::ldexp(1.0, k) < x * (1.0 - 1e-12)) ++k;
  return k;
}

int ceil_log2(int x) {
  int k = 0;
  while ((1LL << k) < x) ++k;
  return k;
}

}  // namespace

int wup_degree(int depth, int rate, int nsinks, double epsilon) {
  check_epsilon(epsilon);
  if (depth < 0 || rate < 1 || nsinks < 1) throw Error(Errc::ParameterOutOfRange, "bad WUP degree arguments");
  return 2 * depth + 1 + ceil_log2(static_cast<double>(rate) * nsinks / epsilon);
}

int sup_degree(int depth, int rate, double epsilon) {
  check_epsilon(epsilon);
  if (depth < 0 || rate < 1) throw Error(Errc::ParameterOutOfRange, "bad SUP degree arguments");
  return (rate + 1) * (depth + 1 + ceil_log2(rate)) + depth + ceil_log2(1.0 / epsilon) - 1;
}

BinaryPoly random_poly(Rng& rng, int budget) {
  if (budget < 0) return BinaryPoly::zero();
  const std::size_t bits = static_cast<std::size_t>(budget) + 1;
  std::vector<std::uint64_t> words((bits + 63) / 64);
  for (std::size_t w = 0; w < words.size(); ++w) {
    words[w] = rng.next();
    const std::size_t used = bits - 64 * w;
    if (used < 64) words[w] &= (std::uint64_t{1} << used) - 1;
  }
  return BinaryPoly::from_words(std::move(words));
}

namespace {

std::string out_edge_of(const VNode& n) {
  if (n.outs.size() != 1) throw Error(Errc::Internal, "coding node '" + n.id + "' lacks a single output");
  return n.outs.front();
}

int budget_for(const CodeAssignment& ca, int depth) {
  if (ca.design == Design::WUP) return wup_degree(depth, ca.params.rate, ca.params.nsinks, ca.params.epsilon);
  return sup_degree(depth, ca.params.rate, ca.params.epsilon);
}

void draw_node(CodeAssignment& ca, const VNode& n) {
  const std::string out = out_edge_of(n);
  bool missing = false;
  for (const auto& in : n.ins) missing = missing || !ca.coeffs.count({in, out});
  if (!missing) return;
  // Node-local stream: a node's draws never depend on anything but its own id.
  Rng rng(derive_seed(ca.seed, n.id));
  const int budget = budget_for(ca, n.depth);
  for (const auto& in : n.ins) {
    BinaryPoly c = random_poly(rng, budget);
    ca.coeffs.try_emplace({in, out}, Rational(std::move(c)));
  }
}

}  // namespace

CodeAssignment assign_probabilistic(const VirtualGraph& vg, Design design, const CodeParams& params,
                                    std::uint64_t seed) {
  if (design != Design::WUP && design != Design::SUP) {
    throw Error(Errc::ParameterOutOfRange, "probabilistic assignment needs wup or sup");
  }
  check_epsilon(params.epsilon);
  CodeAssignment ca;
  ca.design = design;
  ca.params = params;
  ca.seed = seed;
  extend_probabilistic(ca, vg);
  return ca;
}

void extend_probabilistic(CodeAssignment& ca, const VirtualGraph& vg) {
  for (const auto& [id, n] : vg.nodes) {
    if (n.kind == NodeKind::Coding && n.depth >= 0) draw_node(ca, n);
  }
}

BinaryPoly r2d2_beta(const BigInt& label) {
  if (label < 0) throw Error(Errc::ParameterOutOfRange, "labels are non-negative");
  BigInt v = label + 1;
  std::vector<bool> bits;
  while (v > 0) {
    bits.push_back(static_cast<bool>(v & 1));
    v >>= 1;
  }
  return BinaryPoly::from_coeffs(bits);
}

namespace {

using Vec = std::vector<Rational>;

bool is_zero_vec(const Vec& v) {
  for (const auto& x : v) {
    if (!x.is_zero()) return false;
  }
  return true;
}

}  // namespace

CodeAssignment assign_r2d2(const VirtualGraph& vg, const IdRegistry& reg) {
  if (vg.rate != 2) throw Error(Errc::ParameterOutOfRange, "R2-D2 is defined for rate 2");
  CodeAssignment ca;
  ca.design = Design::R2D2;
  ca.params.rate = 2;
  for (const auto& [id, n] : vg.nodes) {
    if (n.kind != NodeKind::Coding) continue;
    const std::string& w = vg.edge(out_edge_of(n)).head;
    ca.labels[id] = cantor_tuple({reg.id_of(id).as_int(), 0, reg.id_of(w).as_int()});
  }
  // Header sweep: each node acts on the global vectors it receives.
  std::map<std::string, Vec> gcv;
  const Vec zero(2);
  auto in_vec = [&](const std::string& e) -> const Vec& {
    auto it = gcv.find(e);
    return it == gcv.end() ? zero : it->second;
  };
  for (const auto& v : vg.topological_order()) {
    const VNode& n = vg.nodes.at(v);
    Vec out = zero;
    switch (n.kind) {
      case NodeKind::SourceCopy: {
        const auto pos = std::find(vg.source_copies.begin(), vg.source_copies.end(), v) - vg.source_copies.begin();
        out[static_cast<std::size_t>(pos)] = Rational::one();
        break;
      }
      case NodeKind::Broadcast:
      case NodeKind::Connection:
        if (!n.ins.empty()) out = in_vec(n.ins.front());
        break;
      case NodeKind::Coding: {
        const std::string oe = out_edge_of(n);
        const Vec& g1 = in_vec(n.ins.at(0));
        const Vec& g2 = in_vec(n.ins.at(1));
        const Rational d = g1[0] * g2[1] + g1[1] * g2[0];
        Rational c1;
        Rational c2;
        if (!d.is_zero()) {
          const Vec target{Rational::one(), Rational(r2d2_beta(ca.labels.at(v)))};
          // [c1 c2] = target * G^-1 with G = [g1; g2]; signs vanish in characteristic 2.
          c1 = (target[0] * g2[1] + target[1] * g2[0]) / d;
          c2 = (target[0] * g1[1] + target[1] * g1[0]) / d;
          out = target;
        } else if (!is_zero_vec(g1)) {
          c1 = Rational::one();
          out = g1;
        } else if (!is_zero_vec(g2)) {
          c2 = Rational::one();
          out = g2;
        } else {
          ca.flagged.push_back(v);
        }
        ca.coeffs[{n.ins[0], oe}] = c1;
        ca.coeffs[{n.ins[1], oe}] = c2;
        break;
      }
      case NodeKind::Virtual:
      case NodeKind::SinkCopy:
        break;
    }
    for (const auto& e : n.outs) gcv[e] = out;
  }
  return ca;
}

CodeAssignment assign_c3p0(const VirtualGraph& vg, const IdRegistry& reg) {
  CodeAssignment ca;
  ca.design = Design::C3P0;
  ca.params.rate = vg.rate;
  extend_c3p0(ca, vg, reg);
  return ca;
}

void extend_c3p0(CodeAssignment& ca, const VirtualGraph& vg, const IdRegistry& reg) {
  for (const auto& [id, n] : vg.nodes) {
    if (n.kind != NodeKind::Coding) continue;
    const std::string oe = out_edge_of(n);
    const BigInt v = reg.id_of(id).as_int();
    const BigInt w = reg.id_of(vg.edge(oe).head).as_int();
    for (const auto& in : n.ins) {
      if (ca.coeffs.count({in, oe})) continue;
      // No parallel edges exist in the virtual graph, so both link indices are 0.
      const BigInt k = cantor_tuple({reg.id_of(vg.edge(in).tail).as_int(), 0, v, 0, w});
      ca.labels[in] = k;
      ca.coeffs[{in, oe}] = Rational(BinaryPoly::monomial(BigNat::pow2(k)));
    }
  }
}

std::vector<std::string> coefficient_diff(const CodeAssignment& before, const CodeAssignment& after,
                                          const VirtualGraph& vg) {
  std::vector<std::string> diffs;
  auto live_coding = [&](const std::string& node) {
    auto it = vg.nodes.find(node);
    return it != vg.nodes.end() && it->second.kind == NodeKind::Coding;
  };
  if (before.design == Design::R2D2) {
    for (const auto& [node, k] : before.labels) {
      if (!live_coding(node)) continue;
      auto it = after.labels.find(node);
      if (it == after.labels.end() || it->second != k) diffs.push_back("label of " + node);
    }
    return diffs;
  }
  for (const auto& [key, c] : before.coeffs) {
    auto in = vg.edges.find(key.first);
    if (in == vg.edges.end() || !vg.edges.count(key.second) || !live_coding(in->second.head)) continue;
    if (vg.edge(key.second).tail != in->second.head) continue;
    auto it = after.coeffs.find(key);
    if (it == after.coeffs.end() || !(it->second == c)) diffs.push_back(key.first + " -> " + key.second);
  }
  return diffs;
}

nlohmann::json CodeAssignment::to_json() const {
  nlohmann::json j;
  j["design"] = design_name(design);
  j["params"] = {{"epsilon", params.epsilon}, {"rate", params.rate}, {"nsinks", params.nsinks}};
  j["seed"] = seed;
  j["coeffs"] = nlohmann::json::array();
  for (const auto& [key, c] : coeffs) {
    j["coeffs"].push_back({{"tail_edge", key.first}, {"head_edge", key.second}, {"coeff", c.to_text()}});
  }
  j["labels"] = nlohmann::json::object();
  for (const auto& [k, v] : labels) j["labels"][k] = v.str();
  j["flagged"] = flagged;
  return j;
}

}  // namespace urnc
