#include "kr/lattices.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

namespace kr {

namespace {

// Relabel in first-occurrence order.
void canonical_labels(std::vector<u32>& lab) {
  std::vector<u32> remap;
  u32 next = 0;
  for (auto& v : lab) {
    if (v == UNDEF) continue;
    if (v >= remap.size()) remap.resize(v + 1, UNDEF);
    if (remap[v] == UNDEF) remap[v] = next++;
    v = remap[v];
  }
}

u32 max_label(const std::vector<u32>& lab) {
  u32 m = 0;
  for (u32 v : lab)
    if (v != UNDEF) m = std::max(m, v + 1);
  return m;
}

}  // namespace

SetPartitionElement SetPartitionElement::from_labels(std::vector<u32> raw) {
  SetPartitionElement x;
  x.label = std::move(raw);
  x.canonicalize();
  return x;
}

SetPartitionElement SetPartitionElement::from_blocks(std::size_t n,
                                                     const std::vector<std::vector<u32>>& blocks) {
  SetPartitionElement x(n);
  for (u32 i = 0; i < blocks.size(); ++i)
    for (u32 p : blocks[i]) {
      if (p >= n) throw Error("set partition: point out of range");
      if (x.label[p] != UNDEF) throw Error("set partition: blocks overlap");
      x.label[p] = i;
    }
  x.canonicalize();
  return x;
}

SetPartitionElement SetPartitionElement::top(std::size_t n) {
  SetPartitionElement x;
  x.label.assign(n, 0);
  return x;
}

u32 SetPartitionElement::num_blocks() const { return max_label(label); }

Bits SetPartitionElement::support() const {
  Bits b(label.size());
  for (u32 p = 0; p < label.size(); ++p)
    if (label[p] != UNDEF) b.set(p);
  return b;
}

std::vector<std::vector<u32>> SetPartitionElement::blocks() const {
  std::vector<std::vector<u32>> out(num_blocks());
  for (u32 p = 0; p < label.size(); ++p)
    if (label[p] != UNDEF) out[label[p]].push_back(p);
  return out;
}

void SetPartitionElement::canonicalize() { canonical_labels(label); }

std::size_t SPHash::operator()(const SetPartitionElement& x) const {
  std::size_t h = x.label.size();
  for (u32 v : x.label) h = hash_mix(h, v);
  return h;
}

bool sp_leq(const SetPartitionElement& x, const SetPartitionElement& y) {
  if (x.size() != y.size()) throw Error("sp_leq: different universes");
  std::vector<u32> to(x.num_blocks(), UNDEF);
  for (u32 p = 0; p < x.size(); ++p) {
    u32 a = x.label[p];
    if (a == UNDEF) continue;
    u32 b = y.label[p];
    if (b == UNDEF) return false;
    if (to[a] == UNDEF)
      to[a] = b;
    else if (to[a] != b)
      return false;
  }
  return true;
}

SetPartitionElement sp_meet(const SetPartitionElement& x, const SetPartitionElement& y) {
  if (x.size() != y.size()) throw Error("sp_meet: different universes");
  u32 ny = y.num_blocks();
  SetPartitionElement r(x.size());
  for (u32 p = 0; p < x.size(); ++p)
    if (x.label[p] != UNDEF && y.label[p] != UNDEF) r.label[p] = x.label[p] * ny + y.label[p];
  r.canonicalize();
  return r;
}

SetPartitionElement sp_join(const SetPartitionElement& x, const SetPartitionElement& y) {
  if (x.size() != y.size()) throw Error("sp_join: different universes");
  std::size_t n = x.size();
  UnionFind uf(n);
  std::vector<u32> fx(x.num_blocks(), UNDEF), fy(y.num_blocks(), UNDEF);
  for (u32 p = 0; p < n; ++p) {
    if (x.label[p] != UNDEF) {
      u32& f = fx[x.label[p]];
      if (f == UNDEF) f = p; else uf.unite(f, p);
    }
    if (y.label[p] != UNDEF) {
      u32& f = fy[y.label[p]];
      if (f == UNDEF) f = p; else uf.unite(f, p);
    }
  }
  SetPartitionElement r(n);
  for (u32 p = 0; p < n; ++p)
    if (x.label[p] != UNDEF || y.label[p] != UNDEF) r.label[p] = uf.find(p);
  r.canonicalize();
  return r;
}

bool is_cross_section(const GBUniverse& u, const SetPartitionElement& x) {
  std::vector<char> seen(static_cast<std::size_t>(x.num_blocks()) * u.nb, 0);
  for (u32 p = 0; p < x.size(); ++p) {
    if (x.label[p] == UNDEF) continue;
    char& s = seen[static_cast<std::size_t>(x.label[p]) * u.nb + u.col(p)];
    if (s) return false;
    s = 1;
  }
  return true;
}

SetPartitionElement g_action(const GBUniverse& u, u32 g, const SetPartitionElement& x) {
  SetPartitionElement r(x.size());
  for (u32 p = 0; p < x.size(); ++p)
    if (x.label[p] != UNDEF) r.label[u.point(u.g.mul(g, u.grp(p)), u.col(p))] = x.label[p];
  r.canonicalize();
  return r;
}

bool is_invariant(const GBUniverse& u, const SetPartitionElement& x) {
  for (u32 g = 0; g < u.ng(); ++g)
    if (g != u.g.identity() && g_action(u, g, x) != x) return false;
  return true;
}

RhodesElement RhodesElement::make_contradiction(u32 nb) {
  RhodesElement r;
  r.contradiction = true;
  r.block.assign(nb, UNDEF);
  r.f.assign(nb, UNDEF);
  return r;
}

RhodesElement RhodesElement::empty(u32 nb) {
  RhodesElement r;
  r.block.assign(nb, UNDEF);
  r.f.assign(nb, UNDEF);
  return r;
}

void RhodesElement::canonicalize(const GroupTable& g) {
  if (contradiction) {
    std::fill(block.begin(), block.end(), UNDEF);
    std::fill(f.begin(), f.end(), UNDEF);
    return;
  }
  canonical_labels(block);
  std::vector<u32> shift(max_label(block), UNDEF);
  for (u32 b = 0; b < block.size(); ++b) {
    if (block[b] == UNDEF) {
      f[b] = UNDEF;
      continue;
    }
    u32& s = shift[block[b]];
    if (s == UNDEF) s = g.inv(f[b]);
    f[b] = g.mul(s, f[b]);
  }
}

bool rh_leq(const GBUniverse& u, const RhodesElement& x, const RhodesElement& y) {
  if (y.contradiction) return true;
  if (x.contradiction) return false;
  u32 nx = max_label(x.block);
  std::vector<u32> to(nx, UNDEF), shift(nx, UNDEF);
  for (u32 b = 0; b < u.nb; ++b) {
    u32 a = x.block[b];
    if (a == UNDEF) continue;
    if (y.block[b] == UNDEF) return false;
    u32 t = u.g.mul(y.f[b], u.g.inv(x.f[b]));
    if (to[a] == UNDEF) {
      to[a] = y.block[b];
      shift[a] = t;
    } else if (to[a] != y.block[b] || shift[a] != t) {
      return false;
    }
  }
  return true;
}

SetPartitionElement rh_to_cs(const GBUniverse& u, const RhodesElement& x) {
  if (x.contradiction) throw Error("rh_to_cs: contradiction has no cross-section");
  SetPartitionElement r(u.npts());
  for (u32 b = 0; b < u.nb; ++b) {
    if (x.block[b] == UNDEF) continue;
    u32 finv = u.g.inv(x.f[b]);
    for (u32 h = 0; h < u.ng(); ++h) r.label[u.point(h, b)] = x.block[b] * u.ng() + u.g.mul(h, finv);
  }
  r.canonicalize();
  return r;
}

RhodesElement cs_to_rh(const GBUniverse& u, const SetPartitionElement& x) {
  if (x.size() != u.npts()) throw Error("cs_to_rh: wrong universe");
  if (!is_cross_section(u, x)) throw Error("cs_to_rh: not a cross-section");
  if (!is_invariant(u, x)) throw Error("cs_to_rh: not G-invariant");
  RhodesElement r = RhodesElement::empty(u.nb);
  auto blocks = x.blocks();
  u32 next = 0;
  for (u32 b = 0; b < u.nb; ++b) {
    if (r.block[b] != UNDEF) continue;
    u32 l = x.label[u.point(u.g.identity(), b)];
    if (l == UNDEF) continue;
    for (u32 p : blocks[l]) {
      r.block[u.col(p)] = next;
      r.f[u.col(p)] = u.grp(p);
    }
    ++next;
  }
  r.canonicalize(u.g);
  return r;
}

RhodesElement rh_meet(const GBUniverse& u, const RhodesElement& x, const RhodesElement& y) {
  if (x.contradiction) return y;
  if (y.contradiction) return x;
  return cs_to_rh(u, sp_meet(rh_to_cs(u, x), rh_to_cs(u, y)));
}

RhodesElement rh_join(const GBUniverse& u, const RhodesElement& x, const RhodesElement& y) {
  if (x.contradiction || y.contradiction) return RhodesElement::make_contradiction(u.nb);
  auto j = sp_join(rh_to_cs(u, x), rh_to_cs(u, y));
  if (!is_cross_section(u, j)) return RhodesElement::make_contradiction(u.nb);
  return cs_to_rh(u, j);
}

namespace {

// Restricted-growth labelings of n points where each point may also be absent.
void labelings(u32 n, const std::function<void(const std::vector<u32>&)>& visit) {
  std::vector<u32> lab(n, UNDEF);
  std::function<void(u32, u32)> rec = [&](u32 i, u32 used) {
    if (i == n) {
      visit(lab);
      return;
    }
    lab[i] = UNDEF;
    rec(i + 1, used);
    for (u32 c = 0; c <= used; ++c) {
      lab[i] = c;
      rec(i + 1, c == used ? used + 1 : used);
    }
    lab[i] = UNDEF;
  };
  rec(0, 0);
}

}  // namespace

std::vector<SetPartitionElement> enumerate_sp(u32 n) {
  std::vector<SetPartitionElement> out;
  labelings(n, [&](const std::vector<u32>& lab) {
    SetPartitionElement x;
    x.label = lab;
    out.push_back(std::move(x));
  });
  return out;
}

std::vector<RhodesElement> enumerate_rh(const GBUniverse& u) {
  std::vector<RhodesElement> out;
  labelings(u.nb, [&](const std::vector<u32>& lab) {
    // Columns other than the least of their block carry a free group value.
    std::vector<u32> free;
    std::vector<char> seen(u.nb, 0);
    for (u32 b = 0; b < u.nb; ++b) {
      if (lab[b] == UNDEF) continue;
      if (seen[lab[b]]) free.push_back(b);
      seen[lab[b]] = 1;
    }
    RhodesElement r = RhodesElement::empty(u.nb);
    r.block = lab;
    for (u32 b = 0; b < u.nb; ++b)
      if (lab[b] != UNDEF) r.f[b] = u.g.identity();
    std::function<void(std::size_t)> rec = [&](std::size_t i) {
      if (i == free.size()) {
        out.push_back(r);
        return;
      }
      for (u32 g = 0; g < u.ng(); ++g) {
        r.f[free[i]] = g;
        rec(i + 1);
      }
      r.f[free[i]] = u.g.identity();
    };
    rec(0);
  });
  out.push_back(RhodesElement::make_contradiction(u.nb));
  return out;
}

std::string to_string(const GBUniverse& u, const SetPartitionElement& x) {
  auto bl = x.blocks();
  if (bl.empty()) return "{}";
  std::ostringstream os;
  for (std::size_t i = 0; i < bl.size(); ++i) {
    if (i) os << ' ';
    os << '{';
    for (std::size_t k = 0; k < bl[i].size(); ++k) {
      if (k) os << ',';
      os << '(' << u.grp(bl[i][k]) << ',' << u.col(bl[i][k]) << ')';
    }
    os << '}';
  }
  return os.str();
}

std::string to_string(const RhodesElement& x) {
  if (x.contradiction) return "CONTRADICTION";
  u32 nb = max_label(x.block);
  if (nb == 0) return "{}";
  std::ostringstream os;
  for (u32 i = 0; i < nb; ++i) {
    if (i) os << ' ';
    os << '{';
    bool first = true;
    for (u32 b = 0; b < x.block.size(); ++b) {
      if (x.block[b] != i) continue;
      if (!first) os << ',';
      first = false;
      os << b << ':' << x.f[b];
    }
    os << '}';
  }
  return os.str();
}

}  // namespace kr
