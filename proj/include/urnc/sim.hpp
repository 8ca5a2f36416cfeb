#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "urnc/codes.hpp"
#include "urnc/matrix.hpp"
#include "urnc/transform.hpp"

namespace urnc {

struct EdgeState {
  std::vector<Rational> gcv;
  std::optional<BinaryPoly> payload;
};

using EdgeStates = std::map<std::string, EdgeState>;

/// Header-only sweep in topological order. Source copy k emits the unit vector e_k.
EdgeStates percolate(const VirtualGraph& vg, const CodeAssignment& ca, int rate);

/// Sweep with payloads; asserts payload == gcv . messages on every edge.
EdgeStates encode_payloads(const VirtualGraph& vg, const CodeAssignment& ca,
                           const std::vector<BinaryPoly>& messages);

/// Rows are the gcvs of the lexicographically first maximal-rank set of the
/// sink terminal's incoming edges, padded to R rows when rank is short.
PolyMatrix transfer_matrix(const VirtualGraph& vg, const EdgeStates& states, const std::string& sink,
                           std::vector<std::string>* chosen = nullptr);

/// Largest degree any payload may reach: n + hops * max coefficient degree + 16,
/// where hops counts coding nodes on the longest path.
BigNat degree_guard(const VirtualGraph& vg, const CodeAssignment& ca, std::size_t n);

/// Recovers the R messages at `sink`; each is exact (remainder checked).
std::vector<BinaryPoly> decode(const VirtualGraph& vg, const EdgeStates& states, const std::string& sink);

struct SinkReport {
  std::string id;
  bool decodable = false;
  Rational det;
  bool decode_ok = false;
  int min_cut = 0;
  std::string note;
};

struct RunMetrics {
  Degree max_coeff_degree;
  Degree total_delay;
  std::size_t header_bits = 0;
};

struct RunReport {
  std::vector<SinkReport> sinks;
  RunMetrics metrics;

  nlohmann::json to_json() const;
};

/// Percolate, encode `messages` (n bits each) and decode at every sink.
RunReport run_report(const VirtualGraph& vg, const CodeAssignment& ca, const std::vector<std::string>& messages);

/// Random n-bit messages from a seed, as bitstrings (char i is the coefficient of z^i).
std::vector<std::string> random_messages(std::uint64_t seed, int count, int n);

/// Builds the assignment for any design; IDs are consulted by the deterministic ones.
CodeAssignment make_assignment(const VirtualGraph& vg, const IdRegistry& reg, Design design,
                               const CodeParams& params, std::uint64_t seed);

struct MonteCarloResult {
  int trials = 0;
  int failures = 0;
  double rate = 0.0;
  double ci95 = 0.0;
  std::vector<std::pair<std::uint64_t, int>> per_trial;  // derived seed, failed sinks
};

/// Failure iff some sink's transfer matrix is singular. Trials run on
/// `threads` workers; the reduction is in trial order.
MonteCarloResult monte_carlo(const Network& net, Design design, const CodeParams& params, int trials,
                             std::uint64_t seed, unsigned threads = 0);

/// Bit-doubling layer: every bit twice, then "01". Undoubling returns the raw
/// bits and the offset just past the terminator; a "10" pair is a FramingError.
std::string double_bits(const std::string& raw);
std::pair<std::string, std::size_t> undouble_bits(const std::string& bits);

std::string header_frame(const std::vector<Rational>& gcv);
std::pair<std::vector<Rational>, std::size_t> header_unframe(const std::string& bits);

struct ChurnEvent {
  enum class Kind { Join, Leave } kind = Kind::Join;
  EdgeRecord edge;  // Leave only reads edge.id
  Role new_role = Role::Internal;
};

struct ScenarioStep {
  ChurnEvent event;
  RunReport report;
  std::vector<std::string> coeff_diffs;
  bool invariants_ok = true;
};

std::vector<ChurnEvent> churn_from_json(const nlohmann::json& j);

/// Applies each event in turn, extends IDs and coefficients by the design's
/// local rule, and re-runs the full pipeline.
std::vector<ScenarioStep> robustness_scenario(const Network& net, Design design, const CodeParams& params,
                                              const std::vector<ChurnEvent>& script, std::uint64_t seed,
                                              int message_bits = 64);

}  // namespace urnc
