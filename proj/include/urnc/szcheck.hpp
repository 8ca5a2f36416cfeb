#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include <json.hpp>

#include "urnc/rational.hpp"
#include "urnc/rng.hpp"

namespace urnc {

struct SzTerm {
  std::vector<int> exps;  // one exponent per variable
  Rational coeff;
};

/// Multivariate polynomial over F2(z) with a finite sample set per variable.
class SZInstance {
 public:
  /// Combines like terms and drops zero ones; rejects the zero polynomial,
  /// empty sets and repeated set elements.
  SZInstance(std::vector<SzTerm> terms, std::vector<std::vector<Rational>> sets);

  std::size_t nvars() const noexcept { return sets_.size(); }
  const std::vector<SzTerm>& terms() const noexcept { return terms_; }
  const std::vector<std::vector<Rational>>& sets() const noexcept { return sets_; }
  /// Largest exponent of each variable over the (combined) terms.
  const std::vector<int>& degrees() const noexcept { return degrees_; }

  Rational evaluate(const std::vector<Rational>& point) const;

  nlohmann::json to_json() const;
  static SZInstance from_json(const nlohmann::json& j);

 private:
  std::vector<SzTerm> terms_;
  std::vector<std::vector<Rational>> sets_;
  std::vector<int> degrees_;
};

double sz_bound(const SZInstance& inst);
double sz_empirical(const SZInstance& inst, int trials, std::uint64_t seed);
/// Exact zero probability by enumerating the product of the sets (at most 10^6 points).
double sz_exhaustive(const SZInstance& inst);
/// Zero count and point count behind sz_exhaustive.
std::pair<std::uint64_t, std::uint64_t> sz_exhaustive_counts(const SZInstance& inst);
/// Exact integer comparison of the enumerated probability against the bound.
bool sz_within_bound(const SZInstance& inst);

struct SzGenParams {
  int max_vars = 4;
  int max_degree = 3;
  std::vector<int> set_sizes{2, 4, 8};
  int max_terms = 4;
};

SZInstance random_sz_instance(Rng& rng, const SzGenParams& params = {});

struct SzCorpusEntry {
  nlohmann::json instance;
  double bound = 0;
  double exact = 0;
  double empirical = 0;
};

struct SzCorpusReport {
  std::vector<SzCorpusEntry> entries;
  int violations = 0;  // instances with exact > bound
  nlohmann::json to_json() const;
};

SzCorpusReport sz_corpus(int instances, int trials, std::uint64_t seed, const SzGenParams& params = {});

}  // namespace urnc
