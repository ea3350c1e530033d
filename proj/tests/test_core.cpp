#include <doctest.h>

#include <numeric>

#include "oracles.hpp"

using namespace kr;

namespace {

FiniteSemigroup named(const char* n) { return FiniteSemigroup::from_generators(catalog::builtin(n)); }

const char* kCatalog[] = {"U", "Z2", "Z3", "Z2^0", "S3", "S3^0", "T2", "T3", "SIS2", "SIS3", "B2", "flipflop"};

}  // namespace

TEST_SUITE("core") {

TEST_CASE("catalog orders") {
  CHECK(named("U").size() == 3);
  CHECK(named("Z2").size() == 2);
  CHECK(named("Z2^0").size() == 3);
  CHECK(named("S3").size() == 6);
  CHECK(named("T2").size() == 4);
  CHECK(named("T3").size() == 27);
  CHECK(named("SIS2").size() == 7);
  CHECK(named("SIS3").size() == 34);
  CHECK(named("B2").size() == 9);
}

TEST_CASE("multiplication agrees with composition of actions") {
  for (auto n : kCatalog) {
    auto s = named(n);
    const auto& act = s.action().act;
    for (u32 a = 0; a < s.size(); ++a)
      for (u32 b = 0; b < s.size(); ++b) REQUIRE(act[s.mul(a, b)] == act[a].then(act[b]));
    CHECK(s.associative());
  }
}

TEST_CASE("factorizations evaluate to their element") {
  auto s = named("T3");
  for (u32 x = 0; x < s.size(); ++x) CHECK(s.eval_word(s.word(x)) == x);
}

TEST_CASE("Green relations match the ideal oracle") {
  std::mt19937_64 rng(7);
  std::vector<FiniteSemigroup> all;
  for (auto n : kCatalog) all.push_back(named(n));
  for (int i = 0; i < 30; ++i) {
    u32 d = 2 + static_cast<u32>(rng() % 3);
    all.push_back(FiniteSemigroup::from_generators({oracle::random_pt(rng, d), oracle::random_pt(rng, d)}));
  }
  for (auto& s : all) {
    auto g = green_structure(s);
    auto o = oracle::green(s);
    std::size_t n = s.size();
    for (u32 x = 0; x < n; ++x)
      for (u32 y = 0; y < n; ++y) {
        REQUIRE((g.r[x] == g.r[y]) == static_cast<bool>(o.r[x * n + y]));
        REQUIRE((g.l[x] == g.l[y]) == static_cast<bool>(o.l[x * n + y]));
        REQUIRE((g.j[x] == g.j[y]) == static_cast<bool>(o.j[x * n + y]));
        REQUIRE((g.h[x] == g.h[y]) == static_cast<bool>(o.h[x * n + y]));
      }
    for (u32 x = 0; x < n; ++x) CHECK(static_cast<bool>(g.idem[x]) == (s.mul(x, x) == x));
  }
}

TEST_CASE("each monogenic subsemigroup has exactly one idempotent") {
  for (auto n : kCatalog) {
    auto s = named(n);
    for (u32 x = 0; x < s.size(); ++x) {
      std::vector<u32> pw{x};
      while (true) {
        u32 nx = s.mul(pw.back(), x);
        if (std::find(pw.begin(), pw.end(), nx) != pw.end()) break;
        pw.push_back(nx);
      }
      int idem = 0;
      for (u32 p : pw) idem += s.mul(p, p) == p;
      CHECK(idem == 1);
      CHECK(s.is_idempotent(s.omega(x)));
      CHECK(std::find(pw.begin(), pw.end(), s.omega(x)) != pw.end());
    }
  }
}

TEST_CASE("Cayley table input") {
  auto t = FiniteSemigroup::from_table({0}, 1);
  CHECK(t.size() == 1);
  CHECK_THROWS_AS(FiniteSemigroup::from_table({1, 1, 0, 0}, 2), Error);
  auto s = named("T2");
  auto copy = FiniteSemigroup::from_table(oracle::full_table(s), s.size());
  CHECK(copy.size() == 4);
  CHECK(isomorphism(s, copy).has_value());
}

TEST_CASE("isomorphism of a relabelled table") {
  auto s = named("SIS2");
  std::size_t n = s.size();
  std::vector<u32> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::mt19937_64 rng(3);
  std::shuffle(perm.begin(), perm.end(), rng);
  std::vector<u32> t(n * n);
  for (u32 a = 0; a < n; ++a)
    for (u32 b = 0; b < n; ++b) t[perm[a] * n + perm[b]] = perm[s.mul(a, b)];
  auto r = FiniteSemigroup::from_table(t, n);
  auto iso = isomorphism(s, r);
  REQUIRE(iso.has_value());
  for (u32 a = 0; a < n; ++a)
    for (u32 b = 0; b < n; ++b) CHECK((*iso)[s.mul(a, b)] == r.mul((*iso)[a], (*iso)[b]));
  CHECK_FALSE(isomorphism(named("T2"), named("SIS2")).has_value());
}

TEST_CASE("groups") {
  auto s3 = GroupTable::symmetric(3);
  CHECK(s3.order() == 6);
  CHECK(s3.subgroups().size() == 6);
  CHECK(s3.normal_subgroups().size() == 3);
  auto z4 = GroupTable::cyclic(4);
  CHECK(z4.normal_subgroups().size() == 3);
  for (auto& h : s3.subgroups()) CHECK(s3.is_subgroup(h));
}

TEST_CASE("division") {
  CHECK(divides(named("Z2"), named("S3")).outcome == Outcome::Yes);
  CHECK(divides(named("Z3"), named("S3")).outcome == Outcome::Yes);
  CHECK(divides(named("U"), named("T2")).outcome == Outcome::Yes);
  CHECK(divides(named("Z2"), named("U")).outcome == Outcome::No);
  CHECK(divides(named("S3"), named("Z2^0")).outcome == Outcome::No);
  CHECK(divides(named("T3"), named("T3")).outcome == Outcome::Yes);
  // witness generators really generate a subsemigroup mapping onto S
  auto r = divides(named("Z2"), named("S3"));
  REQUIRE(r.witness.size() == 1);
  auto s3 = named("S3");
  CHECK(s3.mul(r.witness[0], r.witness[0]) != r.witness[0]);
}

TEST_CASE("wreath product") {
  auto z2 = enumerate(catalog::cyclic(2));
  auto w = wreath_product(z2.ts, z2.ts);
  CHECK(w.degree == 4);
  CHECK(w.act.size() == 8);
  auto ws = semigroup_of_closed_set(w);
  CHECK(ws.size() == 8);
  CHECK(divides(named("Z2"), ws).outcome == Outcome::Yes);
}

TEST_CASE("generated congruence is the least one") {
  auto s = named("SIS2");
  std::size_t n = s.size();
  auto all = oracle::set_partitions(static_cast<u32>(n));
  auto is_cong = [&](const std::vector<u32>& c) {
    for (u32 a = 0; a < n; ++a)
      for (u32 b = 0; b < n; ++b)
        if (c[a] == c[b])
          for (u32 x = 0; x < n; ++x)
            if (c[s.mul(a, x)] != c[s.mul(b, x)] || c[s.mul(x, a)] != c[s.mul(x, b)]) return false;
    return true;
  };
  for (u32 a = 0; a < n; ++a)
    for (u32 b = a + 1; b < n; ++b) {
      auto c = generated_congruence(s, {{a, b}});
      REQUIRE(is_cong(c));
      REQUIRE(c[a] == c[b]);
      for (auto& p : all)
        if (p[a] == p[b] && is_cong(p)) REQUIRE(oracle::refines(c, p));
      std::set<u32> cls(c.begin(), c.end());
      CHECK(quotient(s, c).size() == cls.size());
    }
}

TEST_CASE("subsemigroup closure") {
  auto s = named("T3");
  for (u32 x = 0; x < s.size(); ++x) {
    Bits b = subsemigroup(s, std::vector<u32>{x});
    std::vector<u32> mem;
    b.for_each([&](std::size_t i) { mem.push_back(static_cast<u32>(i)); });
    for (u32 a : mem)
      for (u32 c : mem) CHECK(b.test(s.mul(a, c)));
  }
}

TEST_CASE("union find") {
  UnionFind uf(5);
  uf.unite(3, 1);
  uf.unite(4, 3);
  auto c = uf.classes();
  CHECK(c == std::vector<u32>{0, 1, 2, 1, 1});
}

}  // TEST_SUITE
