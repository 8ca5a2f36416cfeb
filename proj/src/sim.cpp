#include "urnc/sim.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

#include "urnc/error.hpp"
#include "urnc/rng.hpp"

namespace urnc {

namespace {

using Vec = std::vector<Rational>;

const Rational* find_coeff(const CodeAssignment& ca, const std::string& in, const std::string& out) {
  auto it = ca.coeffs.find({in, out});
  return it == ca.coeffs.end() ? nullptr : &it->second;
}

BinaryPoly as_poly(const Rational& r, const char* what) {
  if (!r.is_polynomial()) throw Error(Errc::Internal, std::string(what) + " is not a polynomial");
  return r.num();
}

bool exceeds(const BinaryPoly& p, const BigNat& guard) {
  const Degree d = p.degree();
  return !d.is_minus_infinity() && d.value() > guard;
}

EdgeStates sweep(const VirtualGraph& vg, const CodeAssignment& ca, int rate, const std::vector<BinaryPoly>* messages,
                 const BigNat* guard) {
  EdgeStates states;
  const std::size_t r = static_cast<std::size_t>(rate);
  const EdgeState blank{Vec(r), messages ? std::optional<BinaryPoly>(BinaryPoly::zero()) : std::nullopt};
  auto input = [&](const std::string& e) -> const EdgeState& {
    auto it = states.find(e);
    return it == states.end() ? blank : it->second;
  };
  for (const auto& v : vg.topological_order()) {
    const VNode& n = vg.nodes.at(v);
    EdgeState out = blank;
    switch (n.kind) {
      case NodeKind::SourceCopy: {
        const auto pos = static_cast<std::size_t>(
            std::find(vg.source_copies.begin(), vg.source_copies.end(), v) - vg.source_copies.begin());
        if (pos < r) {
          out.gcv[pos] = Rational::one();
          if (messages) out.payload = messages->at(pos);
        }
        break;
      }
      case NodeKind::Broadcast:
      case NodeKind::Connection:
        if (!n.ins.empty()) out = input(n.ins.front());
        break;
      case NodeKind::Coding: {
        const std::string& oe = n.outs.front();
        std::vector<const Rational*> cs;
        for (const auto& in : n.ins) cs.push_back(find_coeff(ca, in, oe));
        const bool covered = std::all_of(cs.begin(), cs.end(), [](const Rational* c) { return c != nullptr; });
        if (!covered) {
          if (n.active) throw Error(Errc::UncoveredCodingNode, "coding node '" + v + "' has no coefficients");
          break;
        }
        Rational payload;
        for (std::size_t i = 0; i < n.ins.size(); ++i) {
          const EdgeState& in = input(n.ins[i]);
          if (cs[i]->is_zero()) continue;
          for (std::size_t k = 0; k < r; ++k) {
            if (!in.gcv[k].is_zero()) out.gcv[k] += *cs[i] * in.gcv[k];
          }
          if (messages && !in.payload->is_zero()) payload += *cs[i] * Rational(*in.payload);
        }
        if (messages) {
          out.payload = as_poly(payload, "payload");
          if (guard && exceeds(*out.payload, *guard)) {
            throw Error(Errc::DegreeOverflow, "payload at '" + v + "' exceeds the degree guard");
          }
        }
        break;
      }
      case NodeKind::Virtual:
      case NodeKind::SinkCopy:
        break;
    }
    for (const auto& e : n.outs) states[e] = out;
  }
  if (messages) {
    for (const auto& [e, st] : states) {
      BinaryPoly expect;
      for (std::size_t k = 0; k < r; ++k) {
        if (!st.gcv[k].is_zero()) expect += as_poly(st.gcv[k] * Rational(messages->at(k)), "gcv term");
      }
      if (!(expect == *st.payload)) throw Error(Errc::Internal, "payload on '" + e + "' disagrees with its header");
    }
  }
  return states;
}

Degree max_coeff_degree(const CodeAssignment& ca) {
  Degree best;
  for (const auto& [_, c] : ca.coeffs) best = std::max(best, c.max_degree());
  return best;
}

BigNat times(const BigNat& x, std::size_t k) {
  BigNat acc;
  for (std::size_t i = 0; i < k; ++i) acc = acc + x;
  return acc;
}

}  // namespace

EdgeStates percolate(const VirtualGraph& vg, const CodeAssignment& ca, int rate) {
  return sweep(vg, ca, rate, nullptr, nullptr);
}

BigNat degree_guard(const VirtualGraph& vg, const CodeAssignment& ca, std::size_t n) {
  std::map<std::string, std::size_t> hops;
  std::size_t longest = 0;
  for (const auto& v : vg.topological_order()) {
    const VNode& node = vg.nodes.at(v);
    std::size_t h = 0;
    for (const auto& e : node.ins) h = std::max(h, hops[vg.edges.at(e).tail]);
    if (node.kind == NodeKind::Coding) ++h;
    hops[v] = h;
    longest = std::max(longest, h);
  }
  const Degree d = max_coeff_degree(ca);
  const BigNat coeff = d.is_minus_infinity() ? BigNat() : d.value();
  return BigNat(n) + times(coeff, longest) + BigNat(16);
}

EdgeStates encode_payloads(const VirtualGraph& vg, const CodeAssignment& ca, const std::vector<BinaryPoly>& messages) {
  if (messages.size() != static_cast<std::size_t>(vg.rate)) {
    throw Error(Errc::ParameterOutOfRange, "need exactly R messages");
  }
  std::size_t n = 0;
  for (const auto& m : messages) n = std::max<std::size_t>(n, static_cast<std::size_t>(m.dense_degree() + 1));
  const BigNat guard = degree_guard(vg, ca, n);
  return sweep(vg, ca, vg.rate, &messages, &guard);
}

PolyMatrix transfer_matrix(const VirtualGraph& vg, const EdgeStates& states, const std::string& sink,
                           std::vector<std::string>* chosen) {
  auto it = vg.sink_copy.find(sink);
  if (it == vg.sink_copy.end()) throw Error(Errc::UnknownNode, "no sink '" + sink + "'");
  std::vector<std::string> ins = vg.node(it->second).ins;
  std::sort(ins.begin(), ins.end());
  const std::size_t r = static_cast<std::size_t>(vg.rate);
  if (ins.size() < r) {
    throw Error(Errc::TooFewSinkInputs, "sink '" + sink + "' has " + std::to_string(ins.size()) + " inputs");
  }
  auto row_of = [&](const std::string& e) {
    auto st = states.find(e);
    return st == states.end() ? Vec(r) : st->second.gcv;
  };
  std::vector<std::string> pick;
  std::vector<Rational> entries;
  std::size_t current = 0;
  for (const auto& e : ins) {
    if (pick.size() == r) break;
    std::vector<Rational> trial = entries;
    const Vec row = row_of(e);
    trial.insert(trial.end(), row.begin(), row.end());
    const std::size_t rk = rank(PolyMatrix(pick.size() + 1, r, trial));
    if (rk > current) {
      current = rk;
      pick.push_back(e);
      entries = std::move(trial);
    }
  }
  // Short rank: pad with the first unused inputs so the matrix stays square.
  for (const auto& e : ins) {
    if (pick.size() == r) break;
    if (std::find(pick.begin(), pick.end(), e) != pick.end()) continue;
    pick.push_back(e);
    const Vec row = row_of(e);
    entries.insert(entries.end(), row.begin(), row.end());
  }
  if (chosen) *chosen = pick;
  return PolyMatrix(r, r, std::move(entries));
}

namespace {

BinaryPoly lcm(const BinaryPoly& a, const BinaryPoly& b) {
  const BinaryPoly g = gcd(a, b);
  return divmod(a, g).first * b;
}

PolyMatrix minor_of(const PolyMatrix& m, std::size_t skip_r, std::size_t skip_c) {
  std::vector<Rational> e;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    if (i == skip_r) continue;
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if (j != skip_c) e.push_back(m(i, j));
    }
  }
  return PolyMatrix(m.rows() - 1, m.cols() - 1, std::move(e));
}

// Adjugate of a polynomial matrix; signs vanish in characteristic 2.
PolyMatrix adjugate(const PolyMatrix& m) {
  const std::size_t n = m.rows();
  PolyMatrix adj(n, n);
  if (n == 1) {
    adj(0, 0) = Rational::one();
    return adj;
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) adj(j, i) = det(minor_of(m, i, j));
  }
  return adj;
}

std::vector<BinaryPoly> received(const EdgeStates& states, const std::vector<std::string>& chosen) {
  std::vector<BinaryPoly> y;
  for (const auto& e : chosen) {
    auto it = states.find(e);
    if (it == states.end() || !it->second.payload) throw Error(Errc::Internal, "no payload on '" + e + "'");
    y.push_back(*it->second.payload);
  }
  return y;
}

}  // namespace

std::vector<BinaryPoly> decode(const VirtualGraph& vg, const EdgeStates& states, const std::string& sink) {
  std::vector<std::string> chosen;
  const PolyMatrix t = transfer_matrix(vg, states, sink, &chosen);
  const std::vector<BinaryPoly> y = received(states, chosen);
  const Rational d = det(t);
  if (d.is_zero()) throw Error(Errc::SingularTransfer, "transfer matrix of '" + sink + "' is singular");
  const std::size_t r = t.rows();
  std::vector<BinaryPoly> out;
  if (!t.has_sparse_entries()) {
    const PolyMatrix inv = inverse(t);
    for (std::size_t k = 0; k < r; ++k) {
      BinaryPoly lcd = BinaryPoly::one();
      for (std::size_t j = 0; j < r; ++j) lcd = lcm(lcd, inv(k, j).den());
      BinaryPoly acc;
      for (std::size_t j = 0; j < r; ++j) {
        const Rational scaled = inv(k, j) * Rational(lcd);
        if (!scaled.is_polynomial()) throw Error(Errc::Internal, "common denominator failed to clear");
        acc += scaled.num() * y[j];
      }
      auto [q, rem] = divmod(acc, lcd);
      if (!rem.is_zero()) throw Error(Errc::DecodeMismatch, "inexact division while decoding");
      out.push_back(std::move(q));
    }
    return out;
  }
  // Sparse entries: T^-1 = adj(T) / det(T), with det(T) as the common denominator.
  if (!d.is_polynomial()) throw Error(Errc::Internal, "sparse determinant is not a polynomial");
  const PolyMatrix adj = adjugate(t);
  for (std::size_t k = 0; k < r; ++k) {
    BinaryPoly acc;
    for (std::size_t j = 0; j < r; ++j) {
      if (!adj(k, j).is_zero()) acc += as_poly(adj(k, j), "cofactor") * y[j];
    }
    auto [q, rem] = divmod(acc, d.num());
    if (!rem.is_zero()) throw Error(Errc::DecodeMismatch, "inexact division while decoding");
    out.push_back(std::move(q));
  }
  return out;
}

namespace {

Degree inverse_degree(const PolyMatrix& t) {
  Degree best;
  if (!t.has_sparse_entries()) {
    const PolyMatrix inv = inverse(t);
    for (std::size_t i = 0; i < inv.rows(); ++i) {
      for (std::size_t j = 0; j < inv.cols(); ++j) best = std::max(best, inv(i, j).max_degree());
    }
    return best;
  }
  const PolyMatrix adj = adjugate(t);
  best = det(t).max_degree();
  for (std::size_t i = 0; i < adj.rows(); ++i) {
    for (std::size_t j = 0; j < adj.cols(); ++j) best = std::max(best, adj(i, j).max_degree());
  }
  return best;
}

nlohmann::json degree_json(const Degree& d) {
  if (d.is_minus_infinity()) return -1;
  if (d.value().fits_u64()) return d.value().to_u64();
  return d.value().to_string();
}

}  // namespace

nlohmann::json RunReport::to_json() const {
  nlohmann::json j;
  j["sinks"] = nlohmann::json::array();
  for (const auto& s : sinks) {
    nlohmann::json e{{"id", s.id}, {"decodable", s.decodable}, {"det", s.det.to_text()}, {"decode_ok", s.decode_ok}};
    if (!s.note.empty()) e["note"] = s.note;
    j["sinks"].push_back(std::move(e));
  }
  j["metrics"] = {{"max_coeff_degree", degree_json(metrics.max_coeff_degree)},
                  {"total_delay", degree_json(metrics.total_delay)},
                  {"header_bits", metrics.header_bits}};
  return j;
}

RunReport run_report(const VirtualGraph& vg, const CodeAssignment& ca, const std::vector<std::string>& messages) {
  RunReport report;
  std::vector<BinaryPoly> xs;
  for (const auto& m : messages) xs.push_back(BinaryPoly::from_bitstring(m));
  const EdgeStates headers = percolate(vg, ca, vg.rate);
  std::optional<EdgeStates> full;
  std::string encode_note;
  try {
    full = encode_payloads(vg, ca, xs);
  } catch (const Error& e) {
    if (e.code() == Errc::Internal) throw;
    encode_note = e.what();
  }
  const auto cuts = virtual_min_cut(vg);
  report.metrics.max_coeff_degree = max_coeff_degree(ca);
  for (const auto& [e, st] : headers) {
    report.metrics.header_bits = std::max(report.metrics.header_bits, header_frame(st.gcv).size());
  }
  for (const auto& t : vg.original.sinks) {
    SinkReport s;
    s.id = t;
    s.min_cut = cuts.count(t) ? cuts.at(t) : 0;
    PolyMatrix tm;
    try {
      tm = transfer_matrix(vg, headers, t);
    } catch (const Error& e) {
      if (e.code() != Errc::TooFewSinkInputs) throw;
      s.note = e.what();
      report.sinks.push_back(std::move(s));
      continue;
    }
    s.det = det(tm);
    s.decodable = !s.det.is_zero();
    if (s.decodable != (rank(tm) == tm.rows())) throw Error(Errc::Internal, "rank and determinant disagree");
    if (s.decodable) {
      report.metrics.total_delay = std::max(report.metrics.total_delay, inverse_degree(tm));
      if (!full) {
        s.note = encode_note;
      } else {
        try {
          const auto got = decode(vg, *full, t);
          s.decode_ok = got.size() == xs.size();
          for (std::size_t k = 0; s.decode_ok && k < xs.size(); ++k) s.decode_ok = got[k] == xs[k];
          if (!s.decode_ok) s.note = "decoded streams differ from the messages";
        } catch (const Error& e) {
          if (e.code() == Errc::Internal) throw;
          s.note = e.what();
        }
      }
    }
    report.sinks.push_back(std::move(s));
  }
  return report;
}

std::vector<std::string> random_messages(std::uint64_t seed, int count, int n) {
  Rng rng(derive_seed(seed, "messages"));
  std::vector<std::string> out;
  for (int k = 0; k < count; ++k) {
    std::string bits(static_cast<std::size_t>(n), '0');
    for (auto& b : bits) b = rng.bit() ? '1' : '0';
    out.push_back(std::move(bits));
  }
  return out;
}

CodeAssignment make_assignment(const VirtualGraph& vg, const IdRegistry& reg, Design design,
                               const CodeParams& params, std::uint64_t seed) {
  switch (design) {
    case Design::WUP: {
      CodeParams p = params;
      p.rate = vg.rate;
      p.nsinks = static_cast<int>(vg.original.sinks.size());
      return assign_probabilistic(vg, design, p, seed);
    }
    case Design::SUP: {
      CodeParams p = params;
      p.rate = vg.rate;
      return assign_probabilistic(vg, design, p, seed);
    }
    case Design::R2D2: return assign_r2d2(vg, reg);
    case Design::C3P0: return assign_c3p0(vg, reg);
  }
  throw Error(Errc::Internal, "unknown design");
}

namespace {

int failed_sinks(const VirtualGraph& vg, const EdgeStates& headers) {
  int failed = 0;
  for (const auto& t : vg.original.sinks) {
    try {
      if (det(transfer_matrix(vg, headers, t)).is_zero()) ++failed;
    } catch (const Error& e) {
      if (e.code() != Errc::TooFewSinkInputs) throw;
      ++failed;
    }
  }
  return failed;
}

}  // namespace

MonteCarloResult monte_carlo(const Network& net, Design design, const CodeParams& params, int trials,
                             std::uint64_t seed, unsigned threads) {
  if (trials < 1) throw Error(Errc::ParameterOutOfRange, "trials must be at least 1");
  const VirtualGraph vg = transform(net, params.rate);
  const IdRegistry reg = assign_ids(vg);
  MonteCarloResult res;
  res.trials = trials;
  res.per_trial.resize(static_cast<std::size_t>(trials));
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, static_cast<unsigned>(trials));
  std::atomic<int> next{0};
  std::vector<std::exception_ptr> errors(threads);
  auto work = [&](unsigned w) {
    try {
      for (int t = next++; t < trials; t = next++) {
        const std::uint64_t s = derive_seed(seed, static_cast<std::uint64_t>(t));
        const CodeAssignment ca = make_assignment(vg, reg, design, params, s);
        res.per_trial[static_cast<std::size_t>(t)] = {s, failed_sinks(vg, percolate(vg, ca, vg.rate))};
      }
    } catch (...) {
      errors[w] = std::current_exception();
      next = trials;
    }
  };
  std::vector<std::thread> pool;
  for (unsigned w = 1; w < threads; ++w) pool.emplace_back(work, w);
  work(0);
  for (auto& th : pool) th.join();
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  for (const auto& [_, f] : res.per_trial) res.failures += f > 0 ? 1 : 0;
  res.rate = static_cast<double>(res.failures) / trials;
  res.ci95 = 1.96 * std::sqrt(res.rate * (1.0 - res.rate) / trials);
  return res;
}

namespace {

void put_gamma(std::string& out, std::uint64_t n) {
  int len = 0;
  while ((n >> len) > 1) ++len;
  out.append(static_cast<std::size_t>(len), '0');
  for (int i = len; i >= 0; --i) out.push_back((n >> i) & 1 ? '1' : '0');
}

std::uint64_t get_gamma(const std::string& bits, std::size_t& pos) {
  int zeros = 0;
  while (pos < bits.size() && bits[pos] == '0') {
    ++zeros;
    ++pos;
    if (zeros > 40) throw Error(Errc::FramingError, "length prefix too long");
  }
  std::uint64_t n = 0;
  for (int i = 0; i <= zeros; ++i) {
    if (pos >= bits.size()) throw Error(Errc::FramingError, "truncated length prefix");
    n = n << 1 | static_cast<std::uint64_t>(bits[pos++] == '1');
  }
  return n;
}

}  // namespace

std::string header_frame(const std::vector<Rational>& gcv) {
  std::string raw;
  put_gamma(raw, gcv.size() + 1);
  for (const auto& c : gcv) {
    const std::string text = c.to_text();
    put_gamma(raw, text.size() + 1);
    for (unsigned char ch : text) {
      for (int i = 7; i >= 0; --i) raw.push_back((ch >> i) & 1 ? '1' : '0');
    }
  }
  return double_bits(raw);
}

std::string double_bits(const std::string& raw) {
  std::string framed;
  framed.reserve(2 * raw.size() + 2);
  for (char b : raw) {
    if (b != '0' && b != '1') throw Error(Errc::FramingError, "header bits must be 0 or 1");
    framed.append(2, b);
  }
  framed += "01";
  return framed;
}

std::pair<std::string, std::size_t> undouble_bits(const std::string& bits) {
  std::string raw;
  std::size_t pos = 0;
  while (true) {
    if (pos + 2 > bits.size()) throw Error(Errc::FramingError, "header has no terminator");
    const char a = bits[pos];
    const char b = bits[pos + 1];
    pos += 2;
    if ((a != '0' && a != '1') || (b != '0' && b != '1')) throw Error(Errc::FramingError, "header bits must be 0 or 1");
    if (a == b) {
      raw.push_back(a);
    } else if (a == '0') {
      break;
    } else {
      throw Error(Errc::FramingError, "stray 10 pair at bit " + std::to_string(pos - 2));
    }
  }
  return {std::move(raw), pos};
}

std::pair<std::vector<Rational>, std::size_t> header_unframe(const std::string& bits) {
  const auto [raw, pos] = undouble_bits(bits);
  std::size_t at = 0;
  const std::uint64_t count = get_gamma(raw, at) - 1;
  if (count > 4096) throw Error(Errc::FramingError, "implausible vector length");
  std::vector<Rational> gcv;
  for (std::uint64_t k = 0; k < count; ++k) {
    const std::uint64_t len = get_gamma(raw, at) - 1;
    if (len > (raw.size() - at) / 8) throw Error(Errc::FramingError, "truncated entry");
    std::string text;
    for (std::uint64_t c = 0; c < len; ++c) {
      unsigned ch = 0;
      for (int i = 0; i < 8; ++i) ch = ch << 1 | static_cast<unsigned>(raw[at++] == '1');
      text.push_back(static_cast<char>(ch));
    }
    try {
      gcv.push_back(Rational::parse(text));
    } catch (const Error& e) {
      throw Error(Errc::FramingError, std::string("bad entry: ") + e.what());
    }
    if (gcv.back().to_text() != text) throw Error(Errc::FramingError, "non-canonical entry");
  }
  if (at != raw.size()) throw Error(Errc::FramingError, "trailing header bits");
  return {std::move(gcv), pos};
}

std::vector<ChurnEvent> churn_from_json(const nlohmann::json& j) {
  const nlohmann::json& events = j.is_object() ? j.at("events") : j;
  if (!events.is_array()) throw Error(Errc::MalformedNetwork, "churn script must be an array of events");
  std::vector<ChurnEvent> out;
  for (const auto& e : events) {
    ChurnEvent ev;
    const std::string op = e.at("op").get<std::string>();
    ev.edge.id = e.at("id").get<std::string>();
    if (op == "join") {
      ev.kind = ChurnEvent::Kind::Join;
      ev.edge.tail = e.at("tail").get<std::string>();
      ev.edge.head = e.at("head").get<std::string>();
      ev.edge.cap = e.value("cap", 1);
      const std::string role = e.value("role", std::string("internal"));
      if (role == "sink") ev.new_role = Role::Sink;
      else if (role != "internal") throw Error(Errc::MalformedNetwork, "joined nodes are internal or sink");
    } else if (op == "leave") {
      ev.kind = ChurnEvent::Kind::Leave;
    } else {
      throw Error(Errc::MalformedNetwork, "unknown churn op '" + op + "'");
    }
    out.push_back(std::move(ev));
  }
  return out;
}

std::vector<ScenarioStep> robustness_scenario(const Network& net, Design design, const CodeParams& params,
                                              const std::vector<ChurnEvent>& script, std::uint64_t seed,
                                              int message_bits) {
  VirtualGraph vg = transform(net, params.rate);
  IdRegistry reg = assign_ids(vg);
  CodeAssignment ca = make_assignment(vg, reg, design, params, seed);
  const auto messages = random_messages(seed, vg.rate, message_bits);
  std::vector<ScenarioStep> steps;
  for (const auto& ev : script) {
    const CodeAssignment before = ca;
    if (ev.kind == ChurnEvent::Kind::Join) {
      join_link(vg, ev.edge, ev.new_role);
    } else {
      leave_link(vg, ev.edge.id);
    }
    extend_ids(reg, vg);
    switch (design) {
      case Design::WUP:
      case Design::SUP: extend_probabilistic(ca, vg); break;
      case Design::R2D2: ca = assign_r2d2(vg, reg); break;
      case Design::C3P0: extend_c3p0(ca, vg, reg); break;
    }
    ScenarioStep step;
    step.event = ev;
    step.coeff_diffs = coefficient_diff(before, ca, vg);
    step.invariants_ok = check_invariants(vg).empty();
    step.report = run_report(vg, ca, messages);
    steps.push_back(std::move(step));
  }
  return steps;
}

}  // namespace urnc
