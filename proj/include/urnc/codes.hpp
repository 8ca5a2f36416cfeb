#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "urnc/identity.hpp"
#include "urnc/rng.hpp"
#include "urnc/rational.hpp"
#include "urnc/transform.hpp"

namespace urnc {

enum class Design { WUP, SUP, R2D2, C3P0 };

const char* design_name(Design d) noexcept;
Design parse_design(std::string_view name);
inline bool is_deterministic(Design d) { return d == Design::R2D2 || d == Design::C3P0; }

struct CodeParams {
  double epsilon = 0.5;
  int rate = 2;
  int nsinks = 1;  // read by WUP only
};

/// Key: (incoming edge, outgoing edge) at a coding node.
using CoeffKey = std::pair<std::string, std::string>;

struct CodeAssignment {
  Design design = Design::WUP;
  CodeParams params;
  std::uint64_t seed = 0;
  std::map<CoeffKey, Rational> coeffs;
  /// R2-D2: coding node -> label K of the vector (1, beta_K) it emits when it sees rank 2.
  /// C3-P0: incoming edge -> label K of its monomial z^(2^K).
  std::map<std::string, BigInt> labels;
  std::vector<std::string> flagged;  // R2-D2 coding nodes that saw rank 0

  nlohmann::json to_json() const;
};

int wup_degree(int depth, int rate, int nsinks, double epsilon);
int sup_degree(int depth, int rate, double epsilon);

/// Uniform polynomial of degree <= budget (budget+1 fair bits; zero allowed).
BinaryPoly random_poly(Rng& rng, int budget);

CodeAssignment assign_probabilistic(const VirtualGraph& vg, Design design, const CodeParams& params,
                                    std::uint64_t seed);
/// Fills coefficients for coding nodes that have none yet; existing entries are kept.
void extend_probabilistic(CodeAssignment& ca, const VirtualGraph& vg);

/// beta_K: the polynomial whose coefficient bits spell K+1 in binary (bit i -> z^i).
BinaryPoly r2d2_beta(const BigInt& label);
/// Labels every coding node, then back-solves local coefficients from the
/// headers each node receives. Labels depend only on IDs.
CodeAssignment assign_r2d2(const VirtualGraph& vg, const IdRegistry& reg);

CodeAssignment assign_c3p0(const VirtualGraph& vg, const IdRegistry& reg);
void extend_c3p0(CodeAssignment& ca, const VirtualGraph& vg, const IdRegistry& reg);

/// Entries of `before` that still index a live coding input in `vg` but differ in `after`.
std::vector<std::string> coefficient_diff(const CodeAssignment& before, const CodeAssignment& after,
                                          const VirtualGraph& vg);

}  // namespace urnc
