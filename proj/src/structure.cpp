#include "kr/structure.hpp"

#include <algorithm>
#include <functional>
#include <unordered_map>
#include <unordered_set>

namespace kr {

namespace {

u32 least_idempotent(const GreenStructure& g, u32 j) {
  for (u32 x : g.j_members[j])
    if (g.idem[x]) return x;
  throw Error("J-class is not regular");
}

/// Classes of `which` inside J, with the class of e first and the rest by least member.
std::vector<u32> ordered_classes(const GreenStructure& g, u32 j, const std::vector<u32>& which,
                                 u32 e) {
  std::vector<u32> out{which[e]};
  for (u32 x : g.j_members[j])
    if (std::find(out.begin(), out.end(), which[x]) == out.end()) out.push_back(which[x]);
  return out;
}

u32 least_in(const GreenStructure& g, u32 j, u32 rcls, u32 lcls) {
  for (u32 x : g.j_members[j])
    if (g.r[x] == rcls && g.l[x] == lcls) return x;
  throw Error("empty H-class in regular J-class");
}

}  // namespace

u32 ReesCoordinates::encode(u32 a, u32 gl, u32 b) const {
  std::array<u32, 3> want{a, gl, b};
  for (u32 x = 0; x < coord.size(); ++x)
    if (coord[x] == want) return x;
  return UNDEF;
}

u32 ReesCoordinates::to_structure_group(u32 x) const {
  auto [a, gl, b] = coord[x];
  if (a == UNDEF) throw Error("element outside the J-class");
  u32 cba = cmat(b, a);
  if (cba == UNDEF) throw Error("element does not lie in a group H-class");
  return g.group.mul(gl, cba);
}

ReesCoordinates rees_coordinatize(const FiniteSemigroup& s, const GreenStructure& g, u32 j) {
  if (!g.j_regular[j]) throw Error("rees_coordinatize: J-class is not regular");
  ReesCoordinates rc;
  rc.j = j;
  u32 e = least_idempotent(g, j);
  rc.g = maximal_subgroup(s, g, e);
  const GroupTable& G = rc.g.group;
  rc.a_class = ordered_classes(g, j, g.r, e);
  rc.b_class = ordered_classes(g, j, g.l, e);
  std::size_t na = rc.na(), nb = rc.nb();
  rc.rrep.resize(nb);
  rc.lrep.resize(na);
  for (std::size_t b = 0; b < nb; ++b) rc.rrep[b] = least_in(g, j, g.r[e], rc.b_class[b]);
  for (std::size_t a = 0; a < na; ++a) rc.lrep[a] = least_in(g, j, rc.a_class[a], g.l[e]);
  rc.rrep[0] = rc.lrep[0] = e;
  // Normalize column a0 and row b0 where the sandwich entry is nonzero.
  for (std::size_t b = 1; b < nb; ++b) {
    u32 x = rc.g.local(s.mul(rc.rrep[b], e));
    if (x != UNDEF) rc.rrep[b] = s.mul(rc.g.members[G.inv(x)], rc.rrep[b]);
  }
  for (std::size_t a = 1; a < na; ++a) {
    u32 y = rc.g.local(s.mul(e, rc.lrep[a]));
    if (y != UNDEF) rc.lrep[a] = s.mul(rc.lrep[a], rc.g.members[G.inv(y)]);
  }
  rc.c.assign(nb * na, UNDEF);
  for (std::size_t b = 0; b < nb; ++b)
    for (std::size_t a = 0; a < na; ++a) rc.c[b * na + a] = rc.g.local(s.mul(rc.rrep[b], rc.lrep[a]));

  rc.coord.assign(s.size(), {UNDEF, UNDEF, UNDEF});
  std::size_t filled = 0;
  for (u32 a = 0; a < na; ++a)
    for (u32 gl = 0; gl < G.order(); ++gl)
      for (u32 b = 0; b < nb; ++b) {
        u32 x = s.mul(s.mul(rc.lrep[a], rc.g.members[gl]), rc.rrep[b]);
        if (g.j[x] != j || rc.coord[x][0] != UNDEF) throw Error("Rees coordinates are not a bijection");
        rc.coord[x] = {a, gl, b};
        ++filled;
      }
  if (filled != g.j_members[j].size()) throw Error("Rees coordinates do not cover the J-class");

  for (u32 x : g.j_members[j])
    for (u32 y : g.j_members[j]) {
      auto [a, g1, b] = rc.coord[x];
      auto [a2, g2, b2] = rc.coord[y];
      u32 xy = s.mul(x, y);
      u32 cba = rc.cmat(b, a2);
      if (cba == UNDEF) {
        if (g.j[xy] == j) throw Error("Rees multiplication mismatch (expected zero)");
      } else {
        auto want = std::array<u32, 3>{a, G.mul(G.mul(g1, cba), g2), b2};
        if (g.j[xy] != j || rc.coord[xy] != want) throw Error("Rees multiplication mismatch");
      }
    }
  for (std::size_t b = 0; b < nb; ++b) {
    bool any = false;
    for (std::size_t a = 0; a < na; ++a) any |= rc.cmat(b, a) != UNDEF;
    if (!any) throw Error("sandwich matrix is not regular");
  }
  return rc;
}

// ---------------------------------------------------------------------------

std::vector<PartialTransformation> GMSemigroup::generator_actions() const {
  std::vector<PartialTransformation> out;
  for (u32 x : s.generators()) out.push_back(act(x));
  return out;
}

std::vector<u32> group_j_classes(const FiniteSemigroup& s, const GreenStructure& g) {
  (void)s;
  std::vector<u32> out;
  for (u32 j = 0; j < g.nj; ++j) {
    if (!g.j_regular[j]) continue;
    u32 e = least_idempotent(g, j);
    if (g.h_members[g.h[e]].size() > 1) out.push_back(j);
  }
  return out;
}

namespace {

/// Maps every element of `src` into `img`, given the image of each generator.
std::vector<u32> extend_by_words(const FiniteSemigroup& src, const FiniteSemigroup& img,
                                 const std::vector<u32>& gen_image) {
  std::vector<u32> out(src.size());
  for (u32 x = 0; x < src.size(); ++x) {
    const auto& w = src.word(x);
    u32 y = gen_image[w[0]];
    for (std::size_t i = 1; i < w.size(); ++i) y = img.mul(y, gen_image[w[i]]);
    out[x] = y;
  }
  return out;
}

/// Enumerates the semigroup generated by `acts` (one per source generator) and
/// returns it with the generator-position map.
FiniteSemigroup image_semigroup(const std::vector<PartialTransformation>& acts,
                                std::vector<u32>& gen_image) {
  Enumerated en = enumerate(acts);
  std::unordered_map<PartialTransformation, u32, PTHash> idx;
  for (u32 i = 0; i < en.ts.act.size(); ++i) idx.emplace(en.ts.act[i], i);
  gen_image.clear();
  for (auto& a : acts) gen_image.push_back(idx.at(a));
  return std::move(en.s);
}

}  // namespace

GMSemigroup gm_at(const FiniteSemigroup& s, const GreenStructure& g, u32 j) {
  u32 e = least_idempotent(g, j);
  SubgroupHandle h = maximal_subgroup(s, g, e);
  std::vector<u32> bcls = ordered_classes(g, j, g.l, e);
  u32 ng = static_cast<u32>(h.members.size());
  u32 nb = static_cast<u32>(bcls.size());
  std::vector<u32> pt_of(s.size(), UNDEF);
  std::vector<u32> elem(ng * nb);
  for (u32 b = 0; b < nb; ++b) {
    u32 rb = b == 0 ? e : least_in(g, j, g.r[e], bcls[b]);
    for (u32 gl = 0; gl < ng; ++gl) {
      u32 x = s.mul(h.members[gl], rb);
      if (pt_of[x] != UNDEF || g.r[x] != g.r[e] || g.l[x] != bcls[b])
        throw Error("R-class coordinates are not a bijection");
      pt_of[x] = b * ng + gl;
      elem[b * ng + gl] = x;
    }
  }
  std::vector<PartialTransformation> acts;
  for (u32 x : s.generators()) {
    std::vector<u32> img(ng * nb, UNDEF);
    for (u32 p = 0; p < ng * nb; ++p) img[p] = pt_of[s.mul(elem[p], x)];
    acts.emplace_back(std::move(img));
  }
  GMSemigroup gm;
  std::vector<u32> gen_image;
  gm.s = image_semigroup(acts, gen_image);
  gm.g = h.group;
  gm.nb = nb;
  gm.source_j = j;
  gm.left.resize(static_cast<std::size_t>(ng) * ng * nb);
  for (u32 hh = 0; hh < ng; ++hh)
    for (u32 b = 0; b < nb; ++b)
      for (u32 gl = 0; gl < ng; ++gl)
        gm.left[hh * ng * nb + b * ng + gl] = b * ng + gm.g.mul(hh, gl);
  gm.from_source = extend_by_words(s, gm.s, gen_image);
  return gm;
}

std::vector<GMSemigroup> gm_images(const FiniteSemigroup& s, const GreenStructure& g) {
  std::vector<GMSemigroup> out;
  for (u32 j : group_j_classes(s, g)) out.push_back(gm_at(s, g, j));
  return out;
}

std::vector<GMSemigroup> gm_images(const FiniteSemigroup& s) { return gm_images(s, green_structure(s)); }

FiniteSemigroup rlm_image(const GMSemigroup& gm) {
  std::vector<PartialTransformation> acts;
  for (u32 x : gm.s.generators()) {
    const auto& a = gm.act(x);
    std::vector<u32> img(gm.nb, UNDEF);
    for (u32 b = 0; b < gm.nb; ++b) {
      u32 q = a[gm.point(gm.g.identity(), b)];
      img[b] = q == UNDEF ? UNDEF : gm.col(q);
    }
    acts.emplace_back(std::move(img));
  }
  return enumerate(acts).s;
}

std::optional<GMSemigroup> gm_mod_n(const FiniteSemigroup& s, const GreenStructure& g, u32 j,
                                    const Bits& n) {
  u32 e = least_idempotent(g, j);
  SubgroupHandle h = maximal_subgroup(s, g, e);
  if (n.size() != h.group.order() || !h.group.is_normal(n)) throw Error("gm_mod_n: N is not a normal subgroup");
  if (n.count() == h.group.order()) return std::nullopt;
  std::vector<std::pair<u32, u32>> pairs;
  u32 zero = UNDEF;
  for (u32 x = 0; x < s.size(); ++x) {
    if (g.j_leq(j, g.j[x])) continue;  // x lies above or in J
    if (zero == UNDEF) zero = x; else pairs.push_back({zero, x});
  }
  n.for_each([&](std::size_t k) { pairs.push_back({e, h.members[k]}); });
  std::vector<u32> cls = generated_congruence(s, pairs);
  if (zero != UNDEF && cls[zero] == cls[e]) return std::nullopt;
  FiniteSemigroup q = quotient(s, cls);
  GreenStructure gq = green_structure(q);
  u32 jq = gq.j[cls[e]];
  if (gq.h_members[gq.h[cls[e]]].size() <= 1) return std::nullopt;
  GMSemigroup gm = gm_at(q, gq, jq);
  std::vector<u32> through(s.size());
  for (u32 x = 0; x < s.size(); ++x) through[x] = gm.from_source[cls[x]];
  gm.from_source = std::move(through);
  gm.source_j = j;
  return gm;
}

// ---------------------------------------------------------------------------

bool subset_aperiodic(const FiniteSemigroup& s, const Bits& v) {
  bool ok = true;
  v.for_each([&](std::size_t x) {
    if (!ok) return;
    u32 w = s.omega(static_cast<u32>(x));
    if (s.mul(w, static_cast<u32>(x)) != w) ok = false;
  });
  return ok;
}

Bits type_ii(const FiniteSemigroup& s, const Bits& v) {
  std::vector<u32> mem;
  v.for_each([&](std::size_t x) { mem.push_back(static_cast<u32>(x)); });
  Bits x(s.size());
  for (u32 a : mem)
    if (s.is_idempotent(a)) x.set(a);
  std::vector<std::pair<u32, u32>> wc;
  for (u32 a : mem)
    for (u32 b : mem)
      if (s.mul(s.mul(a, b), a) == a) wc.push_back({a, b});
  while (true) {
    x = subsemigroup(s, x);
    std::vector<u32> xs;
    x.for_each([&](std::size_t y) { xs.push_back(static_cast<u32>(y)); });
    bool grown = false;
    for (auto [a, b] : wc)
      for (u32 y : xs) {
        u32 p = s.mul(s.mul(a, y), b), q = s.mul(s.mul(b, y), a);
        if (!x.test(p)) x.set(p), grown = true;
        if (!x.test(q)) x.set(q), grown = true;
      }
    if (!grown) return x;
  }
}

Bits type_ii(const FiniteSemigroup& s) {
  Bits all(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) all.set(i);
  return type_ii(s, all);
}

namespace {

struct SlSearch {
  const FiniteSemigroup& s;
  std::size_t cap;
  bool exact = true;
  std::unordered_map<Bits, u32, BitsHash> memo;
  std::unordered_set<Bits, BitsHash> active;

  u32 run(const Bits& v) {
    if (subset_aperiodic(s, v)) return 0;
    if (auto it = memo.find(v); it != memo.end()) return it->second;
    if (!active.insert(v).second) {
      exact = false;
      return 0;
    }
    std::vector<u32> mem;
    v.for_each([&](std::size_t x) { mem.push_back(static_cast<u32>(x)); });
    std::size_t m = mem.size();
    // Left ideals V^1 x inside V.
    std::vector<Bits> li(m, Bits(s.size()));
    for (std::size_t i = 0; i < m; ++i) {
      li[i].set(mem[i]);
      for (u32 y : mem) li[i].set(s.mul(y, mem[i]));
    }
    std::vector<std::size_t> cls_rep;
    std::vector<Bits> cls_bits;
    std::unordered_map<Bits, std::size_t, BitsHash> by_ideal;
    for (std::size_t i = 0; i < m; ++i) {
      auto [it, fresh] = by_ideal.emplace(li[i], cls_rep.size());
      if (fresh) {
        cls_rep.push_back(i);
        cls_bits.emplace_back(s.size());
      }
      cls_bits[it->second].set(mem[i]);
    }
    std::size_t nc = cls_rep.size();
    std::vector<std::size_t> order(nc);
    for (std::size_t c = 0; c < nc; ++c) order[c] = c;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return li[cls_rep[a]].count() > li[cls_rep[b]].count();
    });
    auto below = [&](std::size_t c, std::size_t d) {  // L_d < L_c
      return c != d && li[cls_rep[c]].test(mem[cls_rep[d]]);
    };
    std::unordered_set<Bits, BitsHash> ts;
    std::size_t chains = 0;
    bool overflow = false;
    std::vector<std::size_t> chain;
    std::function<void(std::size_t, const Bits&)> dfs = [&](std::size_t pos, const Bits& acc) {
      if (overflow) return;
      if (++chains > cap) {
        overflow = true;
        return;
      }
      ts.insert(subsemigroup(s, acc));
      for (std::size_t k = pos; k < nc; ++k) {
        std::size_t d = order[k];
        if (!chain.empty() && !below(chain.back(), d)) continue;
        Bits nxt = acc;
        nxt |= cls_bits[d];
        chain.push_back(d);
        dfs(k + 1, nxt);
        chain.pop_back();
      }
    };
    for (std::size_t k = 0; k < nc && !overflow; ++k) {
      chain = {order[k]};
      dfs(k + 1, cls_bits[order[k]]);
    }
    if (overflow) {
      exact = false;
      ts.clear();
      // Maximal chains only: follow covers from maximal to minimal classes.
      std::function<void(std::size_t, const Bits&)> walk = [&](std::size_t c, const Bits& acc) {
        bool leaf = true;
        for (std::size_t d = 0; d < nc; ++d) {
          if (!below(c, d)) continue;
          bool cover = true;
          for (std::size_t x = 0; x < nc && cover; ++x) cover = !(below(c, x) && below(x, d));
          if (!cover) continue;
          leaf = false;
          Bits nxt = acc;
          nxt |= cls_bits[d];
          walk(d, nxt);
          if (ts.size() > cap) return;
        }
        if (leaf) ts.insert(subsemigroup(s, acc));
      };
      for (std::size_t c = 0; c < nc; ++c) {
        bool top = true;
        for (std::size_t x = 0; x < nc && top; ++x) top = !below(x, c);
        if (top) walk(c, cls_bits[c]);
      }
    }
    u32 best = 0;
    for (const Bits& t : ts) {
      if (subset_aperiodic(s, t)) continue;
      best = std::max(best, 1 + run(type_ii(s, t)));
    }
    active.erase(v);
    memo.emplace(v, best);
    return best;
  }
};

}  // namespace

Bound sl_bound(const FiniteSemigroup& s, std::size_t chain_cap) {
  SlSearch search{s, chain_cap, true, {}, {}};
  Bits all(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) all.set(i);
  Bound b;
  b.value = search.run(all);
  b.exact = search.exact;
  return b;
}

u32 depth(const FiniteSemigroup& s, const GreenStructure& g) {
  std::vector<u32> js = group_j_classes(s, g);
  std::sort(js.begin(), js.end(), [&](u32 a, u32 b) { return g.j_below[a].count() < g.j_below[b].count(); });
  std::vector<u32> len(js.size(), 1);
  u32 best = 0;
  for (std::size_t i = 0; i < js.size(); ++i) {
    for (std::size_t k = 0; k < i; ++k)
      if (js[k] != js[i] && g.j_leq(js[k], js[i])) len[i] = std::max(len[i], len[k] + 1);
    best = std::max(best, len[i]);
  }
  return best;
}

u32 depth(const FiniteSemigroup& s) { return depth(s, green_structure(s)); }

std::vector<u32> max_aperiodic_congruence(const FiniteSemigroup& s) {
  GreenStructure g = green_structure(s);
  std::vector<const std::vector<u32>*> groups;
  std::vector<char> group_h(g.nh, 0);
  for (u32 e : g.idempotents) {
    group_h[g.h[e]] = 1;
    if (g.h_members[g.h[e]].size() > 1) groups.push_back(&g.h_members[g.h[e]]);
  }
  auto injective = [&](UnionFind& uf) {
    for (auto* grp : groups) {
      std::unordered_set<u32> seen;
      for (u32 x : *grp)
        if (!seen.insert(uf.find(x)).second) return false;
    }
    return true;
  };
  UnionFind uf(s.size());
  for (u32 x = 0; x < s.size(); ++x)
    for (u32 y = x + 1; y < s.size(); ++y) {
      if (uf.find(x) == uf.find(y)) continue;
      if (g.h[x] == g.h[y] && group_h[g.h[x]]) continue;
      UnionFind trial = uf;
      congruence_close(s, trial, {{x, y}});
      if (injective(trial)) uf = std::move(trial);
    }
  return uf.classes();
}

FiniteSemigroup lprime_image(const FiniteSemigroup& s, std::vector<u32>* map_out) {
  GreenStructure g = green_structure(s);
  std::vector<u32> lid(g.nl, UNDEF), rep;
  for (u32 x = 0; x < s.size(); ++x)
    if (g.regular(x) && lid[g.l[x]] == UNDEF) {
      lid[g.l[x]] = static_cast<u32>(rep.size());
      rep.push_back(x);
    }
  u32 np = static_cast<u32>(rep.size());
  std::vector<PartialTransformation> acts;
  for (u32 gen : s.generators()) {
    std::vector<u32> img(np, UNDEF);
    for (u32 p = 0; p < np; ++p) {
      u32 y = s.mul(rep[p], gen);
      if (g.j[y] == g.j[rep[p]]) img[p] = lid[g.l[y]];
    }
    acts.emplace_back(std::move(img));
  }
  std::vector<u32> gen_image;
  FiniteSemigroup out = image_semigroup(acts, gen_image);
  if (map_out) *map_out = extend_by_words(s, out, gen_image);
  return out;
}

Bound theta(const FiniteSemigroup& s) {
  Bound b;
  FiniteSemigroup t = s;
  for (u32 step = 0; step < 64; ++step) {
    if (is_aperiodic(t)) {
      b.value = step;
      return b;
    }
    FiniteSemigroup a = quotient(t, max_aperiodic_congruence(t));
    t = lprime_image(a);
  }
  throw Error("theta: no progress after 64 steps");
}

}  // namespace kr
