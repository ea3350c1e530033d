#pragma once

// Semigroup families shared by the unit tests and the acceptance harness.

#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "kr/catalog.hpp"
#include "kr/core.hpp"
#include "kr/eval.hpp"
#include "kr/flows.hpp"
#include "kr/structure.hpp"

namespace corpus {

using kr::FiniteSemigroup;
using kr::PartialTransformation;
using kr::u32;
using kr::UNDEF;

struct Named {
  std::string name;
  FiniteSemigroup s;
};

inline FiniteSemigroup named(const std::string& n) { return FiniteSemigroup::from_generators(kr::catalog::builtin(n)); }

/// Every element lies in a subgroup: x^(w+1) = x.
inline bool completely_regular(const FiniteSemigroup& s) {
  for (u32 x = 0; x < s.size(); ++x)
    if (s.mul(s.omega(x), x) != x) return false;
  return true;
}

/// Regular with commuting idempotents.
inline bool is_inverse(const FiniteSemigroup& s) {
  std::vector<u32> idem;
  for (u32 x = 0; x < s.size(); ++x)
    if (s.is_idempotent(x)) idem.push_back(x);
  for (u32 e : idem)
    for (u32 f : idem)
      if (s.mul(e, f) != s.mul(f, e)) return false;
  for (u32 x = 0; x < s.size(); ++x) {
    bool reg = false;
    for (u32 y = 0; y < s.size() && !reg; ++y) reg = s.mul(s.mul(x, y), x) == x;
    if (!reg) return false;
  }
  return true;
}

/// Keeps one representative per isomorphism class.
class Dedup {
 public:
  bool insert(const FiniteSemigroup& s) {
    auto& bucket = seen_[kr::signature(s)];
    for (auto& t : bucket)
      if (kr::isomorphism(s, t)) return false;
    bucket.push_back(s);
    return true;
  }

 private:
  std::map<std::vector<std::size_t>, std::vector<FiniteSemigroup>> seen_;
};

inline std::vector<PartialTransformation> all_maps(u32 n, bool partial) {
  u32 base = partial ? n + 1 : n, total = 1;
  for (u32 i = 0; i < n; ++i) total *= base;
  std::vector<PartialTransformation> out;
  for (u32 code = 0; code < total; ++code) {
    std::vector<u32> img(n);
    u32 c = code;
    for (u32 i = 0; i < n; ++i, c /= base) img[i] = c % base == n ? UNDEF : c % base;
    out.emplace_back(std::move(img));
  }
  return out;
}

inline std::optional<FiniteSemigroup> bounded(const std::vector<PartialTransformation>& gens, std::size_t max_order) {
  kr::Limits lim;
  lim.max_elements = max_order;
  try {
    auto s = FiniteSemigroup::from_generators(gens, lim);
    if (s.size() > max_order) return std::nullopt;
    return s;
  } catch (const kr::Error&) {
    return std::nullopt;
  }
}

inline std::vector<std::vector<u32>> homomorphisms(const kr::GroupTable& a, const kr::GroupTable& b) {
  std::vector<std::vector<u32>> out;
  std::vector<u32> f(a.order(), 0);
  while (true) {
    bool hom = true;
    for (u32 x = 0; x < a.order() && hom; ++x)
      for (u32 y = 0; y < a.order() && hom; ++y) hom = f[a.mul(x, y)] == b.mul(f[x], f[y]);
    if (hom) out.push_back(f);
    std::size_t i = 0;
    while (i < f.size() && ++f[i] == b.order()) f[i++] = 0;
    if (i == f.size()) break;
  }
  return out;
}

/// Completely regular semigroups of order <= max_order, up to isomorphism:
/// those generated by one or two partial maps of 3 points or total maps of
/// 4 points, rectangular groups and two-level Clifford semigroups.
inline std::vector<FiniteSemigroup> completely_regular_family(std::size_t max_order = 8) {
  Dedup dd;
  std::vector<FiniteSemigroup> out;
  auto offer = [&](const FiniteSemigroup& s) {
    if (s.size() <= max_order && completely_regular(s) && dd.insert(s)) out.push_back(s);
  };
  for (auto [n, partial] : {std::pair{3u, true}, std::pair{4u, false}}) {
    auto maps = all_maps(n, partial);
    for (std::size_t i = 0; i < maps.size(); ++i)
      for (std::size_t j = i; j < maps.size(); ++j) {
        std::vector<PartialTransformation> gens{maps[i]};
        if (j != i) gens.push_back(maps[j]);
        if (auto s = bounded(gens, max_order)) offer(*s);
      }
  }
  std::vector<kr::GroupTable> groups{kr::GroupTable::cyclic(1), kr::GroupTable::cyclic(2), kr::GroupTable::cyclic(3),
                                     kr::GroupTable::cyclic(4), kr::GroupTable::symmetric(3)};
  for (auto& g : groups)
    for (u32 a = 1; a <= max_order; ++a)
      for (u32 b = 1; a * b * g.order() <= max_order; ++b) offer(kr::catalog::rectangular_group(a, g, b));
  for (auto& g1 : groups)
    for (auto& g0 : groups) {
      if (g1.order() + g0.order() > max_order) continue;
      for (auto& phi : homomorphisms(g1, g0)) offer(kr::catalog::clifford(g1, g0, phi));
    }
  return out;
}

/// Inverse semigroups of order <= max_order: the named ones plus those
/// generated by one or two partial bijections of at most 4 points and their
/// inverses, up to isomorphism.
inline std::vector<Named> inverse_family(std::size_t max_order = 34, std::uint64_t seed = 7, int random_tries = 400) {
  Dedup dd;
  std::vector<Named> out;
  auto offer = [&](const std::string& name, const FiniteSemigroup& s) {
    if (s.size() <= max_order && is_inverse(s) && dd.insert(s)) out.push_back({name, s});
  };
  for (const char* n : {"Z2", "Z3", "S3", "Z2^0", "Z3^0", "S3^0", "SIS1", "SIS2", "SIS3", "B2", "B3"}) offer(n, named(n));
  auto inverse = [](const PartialTransformation& p) {
    std::vector<u32> v(p.degree(), UNDEF);
    for (u32 i = 0; i < p.degree(); ++i)
      if (p[i] != UNDEF) v[p[i]] = i;
    return PartialTransformation(std::move(v));
  };
  std::mt19937_64 rng(seed);
  for (int t = 0; t < random_tries; ++t) {
    u32 n = 2 + static_cast<u32>(rng() % 3);
    std::vector<PartialTransformation> gens;
    u32 ng = 1 + static_cast<u32>(rng() % 2);
    for (u32 k = 0; k < ng; ++k) {
      std::vector<u32> perm(n);
      for (u32 i = 0; i < n; ++i) perm[i] = i;
      std::shuffle(perm.begin(), perm.end(), rng);
      for (auto& v : perm)
        if (rng() % 3 == 0) v = UNDEF;
      PartialTransformation p(perm);
      gens.push_back(p);
      gens.push_back(inverse(p));
    }
    if (auto s = bounded(gens, max_order)) offer("inv" + std::to_string(t), *s);
  }
  return out;
}

/// Named semigroups used across the checks.
inline std::vector<Named> named_family() {
  std::vector<Named> out;
  for (const char* n : {"U", "flipflop", "Z2", "Z3", "Z4", "S3", "Z2^0", "S3^0", "T2", "T3", "SIS1", "SIS2", "SIS3", "B2",
                        "B3"})
    out.push_back({n, named(n)});
  return out;
}

/// Random transformation semigroups on at most 4 points, order <= max_order.
inline std::vector<Named> random_family(std::uint64_t seed, int count, std::size_t max_order = 60) {
  std::mt19937_64 rng(seed);
  std::vector<Named> out;
  std::uniform_real_distribution<double> u(0, 1);
  while (static_cast<int>(out.size()) < count) {
    u32 n = 2 + static_cast<u32>(rng() % 3);
    std::vector<PartialTransformation> gens;
    for (int k = 0; k < 2; ++k) {
      std::vector<u32> img(n);
      for (auto& v : img) v = u(rng) < 0.15 ? UNDEF : static_cast<u32>(rng() % n);
      gens.emplace_back(std::move(img));
    }
    if (auto s = bounded(gens, max_order)) out.push_back({"rnd" + std::to_string(out.size()), *s});
  }
  return out;
}

/// (P,S) divides D(phi) wr (Q,T): lifts each generator s to (f, s̄) with
/// f(q) the triple (q, s, q s̄), checks the lift covers s on the graph and
/// confirms the division with the brute-force oracle. Empty when it holds.
inline std::optional<std::string> derived_semigroup_division(const kr::RelationalMorphism& phi) {
  const auto& src = phi.source;
  auto d = kr::derived_ts(phi);
  u32 nd = static_cast<u32>(d.states.size()), nq = phi.nq;
  std::map<std::pair<u32, u32>, u32> idx;
  for (u32 k = 0; k < nd; ++k) idx[d.states[k]] = k;
  std::vector<PartialTransformation> lifted;
  for (std::size_t i = 0; i < src.size(); ++i) {
    std::vector<u32> img(nd * nq, UNDEF);
    for (u32 q = 0; q < nq; ++q) {
      u32 qt = phi.cover[i][q];
      if (qt == UNDEF) continue;
      std::vector<u32> triple(nd, UNDEF);
      bool any = false;
      for (u32 k = 0; k < nd; ++k) {
        auto [p, q0] = d.states[k];
        if (q0 == q && src[i][p] != UNDEF) {
          triple[k] = idx.at({src[i][p], qt});
          any = true;
        }
      }
      if (any && std::find(d.ts.act.begin(), d.ts.act.end(), PartialTransformation(triple)) == d.ts.act.end())
        return "triple of generator " + std::to_string(i) + " at state " + std::to_string(q) + " is not in D(phi)";
      for (u32 k = 0; k < nd; ++k)
        if (triple[k] != UNDEF) img[k + nd * q] = triple[k] + nd * qt;
    }
    lifted.emplace_back(std::move(img));
  }
  for (std::size_t i = 0; i < src.size(); ++i)
    for (auto [p, q] : phi.graph) {
      if (src[i][p] == UNDEF) continue;
      u32 qt = phi.cover[i][q];
      if (lifted[i][idx.at({p, q}) + nd * q] != idx.at({src[i][p], qt}) + nd * qt)
        return "lift of generator " + std::to_string(i) + " misses point " + std::to_string(p);
    }
  auto s = kr::enumerate(src).s;
  auto w = kr::enumerate(lifted).s;
  if (kr::divides(s, w).outcome != kr::Outcome::Yes) return "division oracle rejects";
  return std::nullopt;
}

/// Random relational morphisms between partial transformation semigroups
/// with |P|, |Q| <= 4; skips draws whose target cannot cover a generator.
inline std::vector<kr::RelationalMorphism> random_morphisms(std::uint64_t seed, int count) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0, 1);
  auto rpt = [&](u32 n, double undef) {
    std::vector<u32> img(n);
    for (auto& v : img) v = u(rng) < undef ? UNDEF : static_cast<u32>(rng() % n);
    return PartialTransformation(std::move(img));
  };
  std::vector<kr::RelationalMorphism> out;
  while (static_cast<int>(out.size()) < count) {
    u32 np = 2 + static_cast<u32>(rng() % 3), nq = 1 + static_cast<u32>(rng() % 4);
    std::vector<PartialTransformation> src{rpt(np, 0.15), rpt(np, 0.15)};
    std::vector<PartialTransformation> tgt{rpt(nq, 0.1), rpt(nq, 0.1)};
    std::vector<std::pair<u32, u32>> graph;
    for (u32 p = 0; p < np; ++p) {
      graph.emplace_back(p, static_cast<u32>(rng() % nq));
      if (rng() % 2) graph.emplace_back(p, static_cast<u32>(rng() % nq));
    }
    try {
      out.push_back(kr::make_relational_morphism(src, tgt, graph));
    } catch (const kr::Error&) {
    }
  }
  return out;
}

}  // namespace corpus
