#include "urnc/szcheck.hpp"

#include <map>
#include <set>

#include "urnc/error.hpp"

namespace urnc {

SZInstance::SZInstance(std::vector<SzTerm> terms, std::vector<std::vector<Rational>> sets)
    : sets_(std::move(sets)) {
  const std::size_t n = sets_.size();
  if (n == 0) throw Error(Errc::InvalidInstance, "instance needs at least one variable");
  for (const auto& s : sets_) {
    if (s.empty()) throw Error(Errc::InvalidInstance, "sample sets must be non-empty");
    std::set<std::string> seen;
    for (const auto& x : s) {
      if (!seen.insert(x.to_text()).second) throw Error(Errc::InvalidInstance, "sample set repeats an element");
    }
  }
  std::map<std::vector<int>, Rational> combined;
  for (auto& t : terms) {
    if (t.exps.size() != n) throw Error(Errc::InvalidInstance, "term arity differs from variable count");
    for (int e : t.exps) {
      if (e < 0) throw Error(Errc::InvalidInstance, "negative exponent");
    }
    combined[t.exps] += t.coeff;
  }
  degrees_.assign(n, 0);
  for (auto& [exps, c] : combined) {
    if (c.is_zero()) continue;
    for (std::size_t i = 0; i < n; ++i) degrees_[i] = std::max(degrees_[i], exps[i]);
    terms_.push_back({exps, c});
  }
  if (terms_.empty()) throw Error(Errc::InvalidInstance, "polynomial is identically zero");
}

Rational SZInstance::evaluate(const std::vector<Rational>& point) const {
  if (point.size() != nvars()) throw Error(Errc::InvalidInstance, "point arity differs from variable count");
  Rational acc;
  for (const auto& t : terms_) {
    Rational term = t.coeff;
    for (std::size_t i = 0; i < point.size(); ++i) {
      for (int k = 0; k < t.exps[i]; ++k) term *= point[i];
    }
    acc += term;
  }
  return acc;
}

nlohmann::json SZInstance::to_json() const {
  nlohmann::json j;
  j["terms"] = nlohmann::json::array();
  for (const auto& t : terms_) j["terms"].push_back({{"exps", t.exps}, {"coeff", t.coeff.to_text()}});
  j["sets"] = nlohmann::json::array();
  for (const auto& s : sets_) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& x : s) arr.push_back(x.to_text());
    j["sets"].push_back(std::move(arr));
  }
  j["degrees"] = degrees_;
  return j;
}

SZInstance SZInstance::from_json(const nlohmann::json& j) {
  try {
    std::vector<SzTerm> terms;
    for (const auto& t : j.at("terms")) {
      terms.push_back({t.at("exps").get<std::vector<int>>(), Rational::parse(t.at("coeff").get<std::string>())});
    }
    std::vector<std::vector<Rational>> sets;
    for (const auto& s : j.at("sets")) {
      std::vector<Rational> set;
      for (const auto& x : s) set.push_back(Rational::parse(x.get<std::string>()));
      sets.push_back(std::move(set));
    }
    return SZInstance(std::move(terms), std::move(sets));
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::InvalidInstance, e.what());
  }
}

double sz_bound(const SZInstance& inst) {
  double b = 0;
  for (std::size_t i = 0; i < inst.nvars(); ++i) {
    b += static_cast<double>(inst.degrees()[i]) / static_cast<double>(inst.sets()[i].size());
  }
  return b;
}

double sz_empirical(const SZInstance& inst, int trials, std::uint64_t seed) {
  if (trials < 1) throw Error(Errc::ParameterOutOfRange, "trials must be at least 1");
  Rng rng(derive_seed(seed, "sz-empirical"));
  int zeros = 0;
  std::vector<Rational> point(inst.nvars());
  for (int t = 0; t < trials; ++t) {
    for (std::size_t i = 0; i < inst.nvars(); ++i) point[i] = inst.sets()[i][rng.below(inst.sets()[i].size())];
    if (inst.evaluate(point).is_zero()) ++zeros;
  }
  return static_cast<double>(zeros) / trials;
}

double sz_exhaustive(const SZInstance& inst) {
  const auto [zeros, total] = sz_exhaustive_counts(inst);
  return static_cast<double>(zeros) / static_cast<double>(total);
}

bool sz_within_bound(const SZInstance& inst) {
  // zeros/total <= sum d_i/|S_i|  <=>  zeros * prod|S| <= total * sum d_i * prod_{j != i}|S_j|
  const auto [zeros, total] = sz_exhaustive_counts(inst);
  std::uint64_t prod = 1;
  for (const auto& s : inst.sets()) prod *= s.size();
  std::uint64_t rhs = 0;
  for (std::size_t i = 0; i < inst.nvars(); ++i) {
    rhs += static_cast<std::uint64_t>(inst.degrees()[i]) * (prod / inst.sets()[i].size());
  }
  return static_cast<unsigned __int128>(zeros) * prod <= static_cast<unsigned __int128>(total) * rhs;
}

std::pair<std::uint64_t, std::uint64_t> sz_exhaustive_counts(const SZInstance& inst) {
  std::uint64_t total = 1;
  for (const auto& s : inst.sets()) {
    total *= s.size();
    if (total > 1000000) throw Error(Errc::InstanceTooLarge, "more than 10^6 sample points");
  }
  const std::size_t n = inst.nvars();
  // powers[i][k][e] = (S_i[k])^e
  std::vector<std::vector<std::vector<Rational>>> powers(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (const auto& x : inst.sets()[i]) {
      std::vector<Rational> p{Rational::one()};
      for (int e = 1; e <= inst.degrees()[i]; ++e) p.push_back(p.back() * x);
      powers[i].push_back(std::move(p));
    }
  }
  std::vector<std::size_t> idx(n, 0);
  std::uint64_t zeros = 0;
  for (std::uint64_t c = 0; c < total; ++c) {
    Rational acc;
    for (const auto& t : inst.terms()) {
      Rational term = t.coeff;
      for (std::size_t i = 0; i < n; ++i) {
        if (t.exps[i] > 0) term *= powers[i][idx[i]][static_cast<std::size_t>(t.exps[i])];
      }
      acc += term;
    }
    if (acc.is_zero()) ++zeros;
    for (std::size_t i = 0; i < n; ++i) {
      if (++idx[i] < inst.sets()[i].size()) break;
      idx[i] = 0;
    }
  }
  return {zeros, total};
}

namespace {

BinaryPoly small_poly(Rng& rng, std::uint64_t below) { return BinaryPoly::from_words({rng.below(below)}); }

Rational random_element(Rng& rng) {
  // Mostly polynomials of degree <= 3, sometimes a ratio to exercise the field.
  BinaryPoly num = small_poly(rng, 16);
  if (rng.below(4) != 0) return Rational(num);
  BinaryPoly den = BinaryPoly::from_words({1 + rng.below(7)});
  return Rational(std::move(num), std::move(den));
}

}  // namespace

SZInstance random_sz_instance(Rng& rng, const SzGenParams& params) {
  while (true) {
    const std::size_t n = 1 + rng.below(static_cast<std::uint64_t>(params.max_vars));
    std::vector<std::vector<Rational>> sets(n);
    for (auto& s : sets) {
      const int size = params.set_sizes[rng.below(params.set_sizes.size())];
      std::set<std::string> seen;
      while (static_cast<int>(s.size()) < size) {
        Rational x = random_element(rng);
        if (seen.insert(x.to_text()).second) s.push_back(std::move(x));
      }
    }
    std::vector<SzTerm> terms;
    const int count = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(params.max_terms)));
    for (int t = 0; t < count; ++t) {
      SzTerm term;
      for (std::size_t i = 0; i < n; ++i) {
        term.exps.push_back(static_cast<int>(rng.below(static_cast<std::uint64_t>(params.max_degree) + 1)));
      }
      term.coeff = Rational(BinaryPoly::from_words({1 + rng.below(7)}));
      terms.push_back(std::move(term));
    }
    try {
      return SZInstance(std::move(terms), std::move(sets));
    } catch (const Error& e) {
      if (e.code() != Errc::InvalidInstance) throw;
    }
  }
}

nlohmann::json SzCorpusReport::to_json() const {
  nlohmann::json j;
  j["instances"] = entries.size();
  j["violations"] = violations;
  j["results"] = nlohmann::json::array();
  for (const auto& e : entries) {
    j["results"].push_back({{"instance", e.instance}, {"bound", e.bound}, {"exact", e.exact}, {"empirical", e.empirical}});
  }
  return j;
}

SzCorpusReport sz_corpus(int instances, int trials, std::uint64_t seed, const SzGenParams& params) {
  if (instances < 1 || trials < 1) throw Error(Errc::ParameterOutOfRange, "instances and trials must be positive");
  SzCorpusReport report;
  for (int k = 0; k < instances; ++k) {
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(k)));
    const SZInstance inst = random_sz_instance(rng, params);
    SzCorpusEntry e;
    e.instance = inst.to_json();
    e.bound = sz_bound(inst);
    e.exact = sz_exhaustive(inst);
    e.empirical = sz_empirical(inst, trials, derive_seed(seed, "trial-" + std::to_string(k)));
    if (!sz_within_bound(inst)) ++report.violations;
    report.entries.push_back(std::move(e));
  }
  return report;
}

}  // namespace urnc
