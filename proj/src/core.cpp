#include "kr/core.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <numeric>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

namespace kr {

PartialTransformation PartialTransformation::then(const PartialTransformation& q) const {
  if (q.degree() != degree()) throw Error("degree mismatch in composition");
  std::vector<u32> out(img.size());
  for (std::size_t i = 0; i < img.size(); ++i) out[i] = img[i] == UNDEF ? UNDEF : q.img[img[i]];
  return PartialTransformation(std::move(out));
}

bool PartialTransformation::is_identity() const {
  for (std::size_t i = 0; i < img.size(); ++i)
    if (img[i] != i) return false;
  return true;
}

std::size_t PartialTransformation::rank() const {
  std::vector<char> seen(img.size(), 0);
  std::size_t r = 0;
  for (auto v : img)
    if (v != UNDEF && !seen[v]) {
      seen[v] = 1;
      ++r;
    }
  return r;
}

std::string PartialTransformation::str() const {
  std::ostringstream os;
  for (std::size_t i = 0; i < img.size(); ++i) {
    if (i) os << ' ';
    if (img[i] == UNDEF)
      os << '-';
    else
      os << img[i];
  }
  return os.str();
}

std::size_t PTHash::operator()(const PartialTransformation& p) const {
  std::size_t h = p.img.size();
  for (auto v : p.img) h = hash_mix(h, v);
  return h;
}

// ---------------------------------------------------------------------------

u32 FiniteSemigroup::mul(u32 a, u32 b) const {
  if (!table_.empty()) return table_[static_cast<std::size_t>(a) * n_ + b];
  for (u32 g : words_[b]) a = right(a, g);
  return a;
}

u32 FiniteSemigroup::eval_word(const std::vector<u32>& w) const {
  if (w.empty()) throw Error("empty word");
  u32 x = gens_[w[0]];
  for (std::size_t i = 1; i < w.size(); ++i) x = right(x, w[i]);
  return x;
}

std::optional<u32> FiniteSemigroup::find(const PartialTransformation& p) const {
  if (!ts_) return std::nullopt;
  for (std::size_t i = 0; i < ts_->act.size(); ++i)
    if (ts_->act[i] == p) return static_cast<u32>(i);
  return std::nullopt;
}

u32 FiniteSemigroup::power(u32 x, std::size_t k) const {
  u32 p = x;
  for (std::size_t i = 1; i < k; ++i) p = mul(p, x);
  return p;
}

std::pair<u32, u32> FiniteSemigroup::index_period(u32 x) const {
  std::unordered_map<u32, u32> seen;
  u32 p = x;
  for (u32 k = 1;; ++k) {
    auto it = seen.find(p);
    if (it != seen.end()) return {it->second, k - it->second};
    seen.emplace(p, k);
    p = mul(p, x);
  }
}

u32 FiniteSemigroup::omega(u32 x) const {
  u32 p = x;
  while (mul(p, p) != p) p = mul(p, x);
  return p;
}

std::optional<u32> FiniteSemigroup::identity() const {
  for (u32 e = 0; e < n_; ++e) {
    bool ok = true;
    for (std::size_t g = 0; g < gens_.size() && ok; ++g) {
      u32 x = gens_[g];
      ok = mul(e, x) == x && mul(x, e) == x;
    }
    if (ok) return e;
  }
  return std::nullopt;
}

bool FiniteSemigroup::associative() const {
  for (u32 a = 0; a < n_; ++a)
    for (u32 b = 0; b < n_; ++b) {
      u32 ab = mul(a, b);
      for (u32 c = 0; c < n_; ++c)
        if (mul(ab, c) != mul(a, mul(b, c))) return false;
    }
  return true;
}

std::vector<u32> FiniteSemigroup::table() const {
  if (!table_.empty()) return table_;
  std::vector<u32> t(n_ * n_);
  for (u32 a = 0; a < n_; ++a)
    for (u32 b = 0; b < n_; ++b) t[static_cast<std::size_t>(a) * n_ + b] = mul(a, b);
  return t;
}

void FiniteSemigroup::build_graphs_from_table() {
  std::size_t k = gens_.size();
  right_.assign(n_ * k, 0);
  left_.assign(n_ * k, 0);
  for (u32 x = 0; x < n_; ++x)
    for (std::size_t g = 0; g < k; ++g) {
      right_[x * k + g] = table_[static_cast<std::size_t>(x) * n_ + gens_[g]];
      left_[x * k + g] = table_[static_cast<std::size_t>(gens_[g]) * n_ + x];
    }
}

void FiniteSemigroup::build_words() {
  words_.assign(n_, {});
  std::vector<char> seen(n_, 0);
  std::deque<u32> q;
  for (std::size_t g = 0; g < gens_.size(); ++g) {
    if (seen[gens_[g]]) continue;
    seen[gens_[g]] = 1;
    words_[gens_[g]] = {static_cast<u32>(g)};
    q.push_back(gens_[g]);
  }
  while (!q.empty()) {
    u32 x = q.front();
    q.pop_front();
    for (std::size_t g = 0; g < gens_.size(); ++g) {
      u32 y = right(x, g);
      if (seen[y]) continue;
      seen[y] = 1;
      words_[y] = words_[x];
      words_[y].push_back(static_cast<u32>(g));
      q.push_back(y);
    }
  }
  for (u32 x = 0; x < n_; ++x)
    if (!seen[x]) throw Error("generators do not generate the semigroup");
}

namespace {

std::vector<u32> greedy_generators(const std::vector<u32>& table, std::size_t n) {
  std::vector<char> in(n, 0);
  std::vector<u32> members, gens;
  for (u32 x = 0; x < n; ++x) {
    if (in[x]) continue;
    gens.push_back(x);
    in[x] = 1;
    members.push_back(x);
    std::deque<u32> q{x};
    while (!q.empty()) {
      u32 y = q.front();
      q.pop_front();
      for (std::size_t i = 0; i < members.size(); ++i) {
        u32 z = members[i];
        for (u32 p : {table[y * n + z], table[z * n + y]})
          if (!in[p]) {
            in[p] = 1;
            members.push_back(p);
            q.push_back(p);
          }
      }
    }
  }
  return gens;
}

}  // namespace

FiniteSemigroup FiniteSemigroup::from_table(const std::vector<u32>& table, std::size_t n,
                                            bool check_assoc) {
  if (n == 0) throw Error("empty Cayley table");
  if (table.size() != n * n) throw Error("Cayley table has wrong size");
  for (auto v : table)
    if (v >= n) throw Error("Cayley table entry out of range");
  FiniteSemigroup s = from_table_gens(table, n, greedy_generators(table, n));
  if (check_assoc && !s.associative()) throw Error("Cayley table is not associative");
  return s;
}

FiniteSemigroup FiniteSemigroup::from_table_gens(const std::vector<u32>& table, std::size_t n,
                                                 const std::vector<u32>& gens) {
  FiniteSemigroup s;
  s.n_ = n;
  s.table_ = table;
  for (u32 g : gens)
    if (std::find(s.gens_.begin(), s.gens_.end(), g) == s.gens_.end()) s.gens_.push_back(g);
  s.build_graphs_from_table();
  s.build_words();
  return s;
}

FiniteSemigroup FiniteSemigroup::from_cayley(std::size_t n, std::vector<u32> gens, std::vector<u32> right,
                                             std::vector<u32> left) {
  if (right.size() != n * gens.size() || left.size() != n * gens.size())
    throw Error("from_cayley: graph size mismatch");
  FiniteSemigroup s;
  s.n_ = n;
  s.gens_ = std::move(gens);
  s.right_ = std::move(right);
  s.left_ = std::move(left);
  s.build_words();
  return s;
}

FiniteSemigroup FiniteSemigroup::from_generators(const std::vector<PartialTransformation>& gens,
                                                 const Limits& lim) {
  return enumerate(gens, lim).s;
}

Enumerated enumerate(const std::vector<PartialTransformation>& gens, const Limits& lim) {
  if (gens.empty()) throw Error("empty generator list");
  std::size_t d = gens[0].degree();
  for (auto& g : gens) {
    if (g.degree() != d) throw Error("generators have mismatched degrees");
    for (auto v : g.img)
      if (v != UNDEF && v >= d) throw Error("image out of range");
  }
  std::vector<PartialTransformation> elems;
  std::unordered_map<PartialTransformation, u32, PTHash> index;
  std::vector<u32> gen_ids;
  std::vector<PartialTransformation> ugens;
  for (auto& g : gens) {
    if (index.count(g)) continue;
    u32 id = static_cast<u32>(elems.size());
    index.emplace(g, id);
    elems.push_back(g);
    gen_ids.push_back(id);
    ugens.push_back(g);
  }
  std::size_t k = ugens.size();
  std::vector<u32> right;
  for (std::size_t x = 0; x < elems.size(); ++x) {
    for (std::size_t g = 0; g < k; ++g) {
      PartialTransformation y = elems[x].then(ugens[g]);
      auto it = index.find(y);
      u32 id;
      if (it == index.end()) {
        if (elems.size() >= lim.max_elements) throw BudgetExceeded("element cap exceeded during enumeration");
        id = static_cast<u32>(elems.size());
        index.emplace(y, id);
        elems.push_back(std::move(y));
      } else {
        id = it->second;
      }
      right.push_back(id);
    }
  }
  std::size_t n = elems.size();
  std::vector<u32> left(n * k);
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t g = 0; g < k; ++g) left[x * k + g] = index.at(ugens[g].then(elems[x]));

  FiniteSemigroup s;
  s.n_ = n;
  s.gens_ = gen_ids;
  s.right_ = std::move(right);
  s.left_ = std::move(left);
  s.build_words();
  if (n <= lim.table_cap) {
    std::vector<u32> t(n * n);
    for (u32 a = 0; a < n; ++a)
      for (u32 b = 0; b < n; ++b) t[static_cast<std::size_t>(a) * n + b] = s.mul(a, b);
    s.table_ = std::move(t);
  }
  TransformationSemigroup ts{static_cast<u32>(d), std::move(elems)};
  s.ts_ = ts;
  return {std::move(s), std::move(ts)};
}

FiniteSemigroup semigroup_of_closed_set(const TransformationSemigroup& ts) {
  std::vector<PartialTransformation> elems;
  std::unordered_map<PartialTransformation, u32, PTHash> index;
  for (auto& p : ts.act)
    if (!index.count(p)) {
      index.emplace(p, static_cast<u32>(elems.size()));
      elems.push_back(p);
    }
  std::size_t n = elems.size();
  if (n == 0) throw Error("empty transformation set");
  std::vector<u32> table(n * n);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) {
      auto it = index.find(elems[a].then(elems[b]));
      if (it == index.end()) throw Error("transformation set is not closed");
      table[a * n + b] = it->second;
    }
  FiniteSemigroup s = FiniteSemigroup::from_table_gens(table, n, greedy_generators(table, n));
  s.attach_action({ts.degree, std::move(elems)});
  return s;
}

// ---------------------------------------------------------------------------

namespace {

/// Iterative Tarjan; returns component id per node, components numbered by least member.
template <class Succ>
std::vector<u32> scc(std::size_t n, std::size_t k, Succ succ, u32& count) {
  std::vector<u32> idx(n, UNDEF), low(n, 0), comp(n, UNDEF);
  std::vector<char> on(n, 0);
  std::vector<u32> stack;
  std::vector<std::pair<u32, u32>> call;
  u32 counter = 0, ncomp = 0;
  for (u32 root = 0; root < n; ++root) {
    if (idx[root] != UNDEF) continue;
    call.push_back({root, 0});
    idx[root] = low[root] = counter++;
    stack.push_back(root);
    on[root] = 1;
    while (!call.empty()) {
      auto& [v, i] = call.back();
      if (i < k) {
        u32 w = succ(v, i++);
        if (idx[w] == UNDEF) {
          idx[w] = low[w] = counter++;
          stack.push_back(w);
          on[w] = 1;
          call.push_back({w, 0});
        } else if (on[w]) {
          low[v] = std::min(low[v], idx[w]);
        }
      } else {
        u32 vv = v;
        if (low[vv] == idx[vv]) {
          while (true) {
            u32 w = stack.back();
            stack.pop_back();
            on[w] = 0;
            comp[w] = ncomp;
            if (w == vv) break;
          }
          ++ncomp;
        }
        call.pop_back();
        if (!call.empty()) {
          u32 parent = call.back().first;
          low[parent] = std::min(low[parent], low[vv]);
        }
      }
    }
  }
  std::vector<u32> rename(ncomp, UNDEF);
  u32 next = 0;
  for (u32 x = 0; x < n; ++x)
    if (rename[comp[x]] == UNDEF) rename[comp[x]] = next++;
  for (auto& c : comp) c = rename[c];
  count = ncomp;
  return comp;
}

std::vector<std::vector<u32>> members_of(const std::vector<u32>& cls, u32 count) {
  std::vector<std::vector<u32>> m(count);
  for (u32 x = 0; x < cls.size(); ++x) m[cls[x]].push_back(x);
  return m;
}

}  // namespace

GreenStructure green_structure(const FiniteSemigroup& s) {
  GreenStructure g;
  std::size_t n = s.size(), k = s.generators().size();
  g.r = scc(n, k, [&](u32 x, u32 i) { return s.right(x, i); }, g.nr);
  g.l = scc(n, k, [&](u32 x, u32 i) { return s.left(x, i); }, g.nl);

  UnionFind uf(n);
  std::vector<u32> first_r(g.nr, UNDEF), first_l(g.nl, UNDEF);
  for (u32 x = 0; x < n; ++x) {
    if (first_r[g.r[x]] == UNDEF) first_r[g.r[x]] = x; else uf.unite(first_r[g.r[x]], x);
    if (first_l[g.l[x]] == UNDEF) first_l[g.l[x]] = x; else uf.unite(first_l[g.l[x]], x);
  }
  g.j = uf.classes();
  g.nj = g.j.empty() ? 0 : *std::max_element(g.j.begin(), g.j.end()) + 1;

  std::unordered_map<std::uint64_t, u32> hid;
  g.h.resize(n);
  for (u32 x = 0; x < n; ++x) {
    std::uint64_t key = (static_cast<std::uint64_t>(g.r[x]) << 32) | g.l[x];
    auto it = hid.find(key);
    if (it == hid.end()) it = hid.emplace(key, static_cast<u32>(hid.size())).first;
    g.h[x] = it->second;
  }
  g.nh = static_cast<u32>(hid.size());

  g.r_members = members_of(g.r, g.nr);
  g.l_members = members_of(g.l, g.nl);
  g.j_members = members_of(g.j, g.nj);
  g.h_members = members_of(g.h, g.nh);

  g.idem.assign(n, 0);
  g.j_regular.assign(g.nj, 0);
  for (u32 x = 0; x < n; ++x)
    if (s.is_idempotent(x)) {
      g.idem[x] = 1;
      g.idempotents.push_back(x);
      g.j_regular[g.j[x]] = 1;
    }

  // J-order: reachability over class-level edges x -> xg, gx.
  std::vector<Bits> succ(g.nj, Bits(g.nj));
  for (u32 x = 0; x < n; ++x)
    for (std::size_t i = 0; i < k; ++i) {
      succ[g.j[x]].set(g.j[s.right(x, i)]);
      succ[g.j[x]].set(g.j[s.left(x, i)]);
    }
  g.j_below.assign(g.nj, Bits(g.nj));
  for (u32 a = 0; a < g.nj; ++a) {
    Bits& seen = g.j_below[a];
    std::vector<u32> st{a};
    seen.set(a);
    while (!st.empty()) {
      u32 c = st.back();
      st.pop_back();
      succ[c].for_each([&](std::size_t d) {
        if (!seen.test(d)) {
          seen.set(d);
          st.push_back(static_cast<u32>(d));
        }
      });
    }
  }
  return g;
}

bool is_aperiodic(const FiniteSemigroup&, const GreenStructure& g) {
  for (u32 e : g.idempotents)
    if (g.h_members[g.h[e]].size() > 1) return false;
  return true;
}

bool is_aperiodic(const FiniteSemigroup& s) {
  for (u32 x = 0; x < s.size(); ++x) {
    u32 w = s.omega(x);
    if (s.mul(w, x) != w) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------

GroupTable::GroupTable(std::vector<u32> mul, std::size_t n) : n_(n), mul_(std::move(mul)) {
  if (mul_.size() != n * n) throw Error("group table has wrong size");
  id_ = UNDEF;
  for (u32 e = 0; e < n && id_ == UNDEF; ++e) {
    bool ok = true;
    for (u32 a = 0; a < n && ok; ++a) ok = this->mul(e, a) == a && this->mul(a, e) == a;
    if (ok) id_ = e;
  }
  if (id_ == UNDEF) throw Error("group table has no identity");
  inv_.assign(n, UNDEF);
  for (u32 a = 0; a < n; ++a)
    for (u32 b = 0; b < n; ++b)
      if (this->mul(a, b) == id_) inv_[a] = b;
  for (auto v : inv_)
    if (v == UNDEF) throw Error("group table has a non-invertible element");
}

Bits GroupTable::generate(const Bits& seed) const {
  Bits h(n_);
  h.set(id_);
  std::vector<u32> mem{id_};
  std::vector<u32> q;
  seed.for_each([&](std::size_t x) {
    if (!h.test(x)) {
      h.set(x);
      mem.push_back(static_cast<u32>(x));
      q.push_back(static_cast<u32>(x));
    }
  });
  while (!q.empty()) {
    u32 y = q.back();
    q.pop_back();
    for (std::size_t i = 0; i < mem.size(); ++i)
      for (u32 p : {mul(y, mem[i]), mul(mem[i], y)})
        if (!h.test(p)) {
          h.set(p);
          mem.push_back(p);
          q.push_back(p);
        }
  }
  return h;
}

bool GroupTable::is_subgroup(const Bits& h) const {
  if (!h.test(id_)) return false;
  bool ok = true;
  h.for_each([&](std::size_t a) {
    h.for_each([&](std::size_t b) {
      if (!h.test(mul(static_cast<u32>(a), inv_[b]))) ok = false;
    });
  });
  return ok;
}

bool GroupTable::is_normal(const Bits& h) const {
  if (!is_subgroup(h)) return false;
  for (u32 g = 0; g < n_; ++g) {
    bool ok = true;
    h.for_each([&](std::size_t x) {
      if (!h.test(mul(mul(g, static_cast<u32>(x)), inv_[g]))) ok = false;
    });
    if (!ok) return false;
  }
  return true;
}

std::vector<Bits> GroupTable::subgroups() const {
  std::vector<Bits> out{trivial()};
  std::unordered_set<Bits, BitsHash> seen{out[0]};
  for (std::size_t i = 0; i < out.size(); ++i)
    for (u32 g = 0; g < n_; ++g) {
      if (out[i].test(g)) continue;
      Bits seed = out[i];
      seed.set(g);
      Bits h = generate(seed);
      if (seen.insert(h).second) out.push_back(h);
    }
  std::sort(out.begin(), out.end(), [](const Bits& a, const Bits& b) {
    if (a.count() != b.count()) return a.count() < b.count();
    return a < b;
  });
  return out;
}

std::vector<Bits> GroupTable::normal_subgroups() const {
  std::vector<Bits> out;
  for (auto& h : subgroups())
    if (is_normal(h)) out.push_back(h);
  return out;
}

Bits GroupTable::trivial() const {
  Bits b(n_);
  b.set(id_);
  return b;
}

Bits GroupTable::whole() const {
  Bits b(n_);
  for (std::size_t i = 0; i < n_; ++i) b.set(i);
  return b;
}

GroupTable GroupTable::cyclic(std::size_t n) {
  std::vector<u32> t(n * n);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) t[a * n + b] = static_cast<u32>((a + b) % n);
  return GroupTable(std::move(t), n);
}

GroupTable GroupTable::symmetric(std::size_t k) {
  std::vector<std::vector<u32>> perms;
  std::vector<u32> p(k);
  std::iota(p.begin(), p.end(), 0);
  do perms.push_back(p);
  while (std::next_permutation(p.begin(), p.end()));
  std::size_t n = perms.size();
  std::vector<u32> t(n * n);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) {
      std::vector<u32> c(k);
      for (std::size_t i = 0; i < k; ++i) c[i] = perms[b][perms[a][i]];
      t[a * n + b] = static_cast<u32>(std::find(perms.begin(), perms.end(), c) - perms.begin());
    }
  return GroupTable(std::move(t), n);
}

u32 SubgroupHandle::local(u32 global) const {
  for (std::size_t i = 0; i < members.size(); ++i)
    if (members[i] == global) return static_cast<u32>(i);
  return UNDEF;
}

SubgroupHandle maximal_subgroup(const FiniteSemigroup& s, const GreenStructure& g, u32 e) {
  if (!s.is_idempotent(e)) throw Error("maximal_subgroup: element is not idempotent");
  SubgroupHandle h;
  h.e = e;
  h.members.push_back(e);
  for (u32 x : g.h_members[g.h[e]])
    if (x != e) h.members.push_back(x);
  std::size_t n = h.members.size();
  std::vector<u32> t(n * n);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) {
      u32 p = h.local(s.mul(h.members[a], h.members[b]));
      if (p == UNDEF) throw Error("H-class of an idempotent is not closed");
      t[a * n + b] = p;
    }
  h.group = GroupTable(std::move(t), n);
  return h;
}

SubgroupHandle maximal_subgroup(const FiniteSemigroup& s, u32 e) {
  return maximal_subgroup(s, green_structure(s), e);
}

// ---------------------------------------------------------------------------

std::size_t wreath_raw_size(const TransformationSemigroup& inner,
                            const TransformationSemigroup& outer) {
  std::size_t r = outer.act.size();
  for (u32 q = 0; q < outer.degree; ++q) {
    if (r > (std::size_t{1} << 40) / std::max<std::size_t>(1, inner.act.size())) return SIZE_MAX;
    r *= inner.act.size();
  }
  return r;
}

TransformationSemigroup wreath_product(const TransformationSemigroup& inner,
                                       const TransformationSemigroup& outer, std::size_t cap) {
  std::size_t raw = wreath_raw_size(inner, outer);
  if (raw > cap) throw BudgetExceeded("wreath product exceeds size guard");
  u32 np = inner.degree, nq = outer.degree;
  TransformationSemigroup out{np * nq, {}};
  std::unordered_set<PartialTransformation, PTHash> seen;
  std::vector<u32> f(nq, 0);
  std::size_t nt = inner.act.size();
  while (true) {
    for (auto& s : outer.act) {
      std::vector<u32> img(np * nq, UNDEF);
      for (u32 q = 0; q < nq; ++q) {
        u32 qs = s.img[q];
        if (qs == UNDEF) continue;
        const auto& t = inner.act[f[q]];
        for (u32 p = 0; p < np; ++p)
          if (t.img[p] != UNDEF) img[p + q * np] = t.img[p] + qs * np;
      }
      PartialTransformation pt(std::move(img));
      if (seen.insert(pt).second) out.act.push_back(std::move(pt));
    }
    std::size_t i = 0;
    while (i < nq && ++f[i] == nt) f[i++] = 0;
    if (i == nq) break;
  }
  return out;
}

// ---------------------------------------------------------------------------

namespace {

struct PairClosure {
  const FiniteSemigroup& t;
  const FiniteSemigroup& s;
  bool bijective;
  std::uint64_t max_nodes;
  std::uint64_t nodes = 0;
  std::vector<u32> phi, psi;  // t -> s, s -> t (psi only when bijective)
  std::vector<u32> members;   // t elements in domain, in insertion order
  std::vector<u32> trail;

  PairClosure(const FiniteSemigroup& t_, const FiniteSemigroup& s_, bool bij, std::uint64_t cap)
      : t(t_), s(s_), bijective(bij), max_nodes(cap), phi(t_.size(), UNDEF),
        psi(bij ? s_.size() : 0, UNDEF) {}

  bool put(u32 a, u32 b, std::vector<u32>& q) {
    if (phi[a] != UNDEF) return phi[a] == b;
    if (bijective && psi[b] != UNDEF) return false;
    phi[a] = b;
    if (bijective) psi[b] = a;
    members.push_back(a);
    trail.push_back(a);
    q.push_back(a);
    return true;
  }

  bool add(u32 w, u32 x) {
    std::vector<u32> q;
    if (!put(w, x, q)) return false;
    while (!q.empty()) {
      u32 a = q.back();
      q.pop_back();
      u32 b = phi[a];
      for (std::size_t i = 0; i < members.size(); ++i) {
        if (++nodes > max_nodes) throw BudgetExceeded("division search node cap");
        u32 c = members[i], d = phi[c];
        if (!put(t.mul(a, c), s.mul(b, d), q)) return false;
        if (!put(t.mul(c, a), s.mul(d, b), q)) return false;
      }
    }
    return true;
  }

  void undo(std::size_t mark) {
    while (trail.size() > mark) {
      u32 a = trail.back();
      trail.pop_back();
      if (bijective) psi[phi[a]] = UNDEF;
      phi[a] = UNDEF;
      members.pop_back();
    }
  }
};

bool type_fits(std::pair<u32, u32> w, std::pair<u32, u32> x, bool exact) {
  if (exact) return w == x;
  return x.first <= w.first && w.second % x.second == 0;
}

bool search(PairClosure& pc, const std::vector<u32>& gens,
            const std::vector<std::vector<u32>>& cand, std::size_t i, std::vector<u32>& wit) {
  if (i == gens.size()) return true;
  for (u32 w : cand[i]) {
    std::size_t mark = pc.trail.size();
    if (pc.add(w, gens[i])) {
      wit[i] = w;
      if (search(pc, gens, cand, i + 1, wit)) return true;
    }
    pc.undo(mark);
  }
  return false;
}

std::vector<std::vector<u32>> candidates(const FiniteSemigroup& s, const FiniteSemigroup& t,
                                         bool exact) {
  std::vector<std::pair<u32, u32>> tt(t.size());
  for (u32 w = 0; w < t.size(); ++w) tt[w] = t.index_period(w);
  std::vector<std::vector<u32>> cand;
  for (u32 x : s.generators()) {
    auto xt = s.index_period(x);
    std::vector<u32> c;
    for (u32 w = 0; w < t.size(); ++w)
      if (type_fits(tt[w], xt, exact)) c.push_back(w);
    cand.push_back(std::move(c));
  }
  return cand;
}

}  // namespace

DivisionResult divides(const FiniteSemigroup& s, const FiniteSemigroup& t, std::uint64_t max_nodes) {
  DivisionResult r;
  if (s.size() > t.size()) {
    r.outcome = Outcome::No;
    return r;
  }
  auto cand = candidates(s, t, false);
  PairClosure pc(t, s, false, max_nodes);
  std::vector<u32> wit(s.generators().size(), UNDEF);
  try {
    bool ok = search(pc, s.generators(), cand, 0, wit);
    r.outcome = ok ? Outcome::Yes : Outcome::No;
    if (ok) r.witness = wit;
  } catch (const BudgetExceeded&) {
    r.outcome = Outcome::Unknown;
  }
  r.nodes = pc.nodes;
  return r;
}

std::optional<std::vector<u32>> isomorphism(const FiniteSemigroup& a, const FiniteSemigroup& b,
                                            std::uint64_t max_nodes) {
  if (a.size() != b.size()) return std::nullopt;
  std::size_t ia = 0, ib = 0;
  for (u32 x = 0; x < a.size(); ++x) ia += a.is_idempotent(x);
  for (u32 x = 0; x < b.size(); ++x) ib += b.is_idempotent(x);
  if (ia != ib) return std::nullopt;
  // Map generators of a into b; pc stores b -> a as phi, so search from b's side.
  auto cand = candidates(a, b, true);
  PairClosure pc(b, a, true, max_nodes);
  std::vector<u32> wit(a.generators().size(), UNDEF);
  if (!search(pc, a.generators(), cand, 0, wit)) return std::nullopt;
  std::vector<u32> f(a.size(), UNDEF);
  for (u32 y = 0; y < b.size(); ++y)
    if (pc.phi[y] != UNDEF) f[pc.phi[y]] = y;
  for (auto v : f)
    if (v == UNDEF) return std::nullopt;
  return f;
}

MorphismKind morphism_kind(const FiniteSemigroup& s, const FiniteSemigroup& t,
                           const std::vector<u32>& f) {
  if (f.size() != s.size()) throw Error("morphism_kind: map has wrong length");
  for (u32 a = 0; a < s.size(); ++a)
    for (u32 b = 0; b < s.size(); ++b)
      if (f[s.mul(a, b)] != t.mul(f[a], f[b])) throw Error("morphism_kind: not a morphism");
  std::vector<char> hit(t.size(), 0);
  for (auto v : f) hit[v] = 1;
  for (auto h : hit)
    if (!h) throw Error("morphism_kind: not surjective");
  GreenStructure g = green_structure(s);
  MorphismKind k{true, true};
  for (u32 e : g.idempotents) {
    std::unordered_set<u32> img;
    for (u32 x : g.h_members[g.h[e]])
      if (!img.insert(f[x]).second) k.aperiodic = false;
  }
  std::unordered_map<u32, u32> lclass;
  for (u32 x = 0; x < s.size(); ++x) {
    if (!g.regular(x)) continue;
    auto [it, fresh] = lclass.emplace(f[x], g.l[x]);
    if (!fresh && it->second != g.l[x]) k.lprime = false;
  }
  return k;
}

// ---------------------------------------------------------------------------

UnionFind::UnionFind(std::size_t n) : p(n) { std::iota(p.begin(), p.end(), 0); }

u32 UnionFind::find(u32 x) {
  while (p[x] != x) {
    p[x] = p[p[x]];
    x = p[x];
  }
  return x;
}

bool UnionFind::unite(u32 a, u32 b) {
  a = find(a);
  b = find(b);
  if (a == b) return false;
  if (a < b) std::swap(a, b);
  p[a] = b;
  return true;
}

std::vector<u32> UnionFind::classes() {
  std::vector<u32> out(p.size());
  std::vector<u32> id(p.size(), UNDEF);
  u32 next = 0;
  for (u32 x = 0; x < p.size(); ++x) {
    u32 r = find(x);
    if (id[r] == UNDEF) id[r] = next++;
    out[x] = id[r];
  }
  return out;
}

void congruence_close(const FiniteSemigroup& s, UnionFind& uf,
                      std::vector<std::pair<u32, u32>> work) {
  std::size_t k = s.generators().size();
  while (!work.empty()) {
    auto [a, b] = work.back();
    work.pop_back();
    if (!uf.unite(a, b)) continue;
    for (std::size_t g = 0; g < k; ++g) {
      work.push_back({s.right(a, g), s.right(b, g)});
      work.push_back({s.left(a, g), s.left(b, g)});
    }
  }
}

std::vector<u32> generated_congruence(const FiniteSemigroup& s,
                                      const std::vector<std::pair<u32, u32>>& pairs) {
  UnionFind uf(s.size());
  congruence_close(s, uf, pairs);
  return uf.classes();
}

FiniteSemigroup quotient(const FiniteSemigroup& s, const std::vector<u32>& cls) {
  u32 m = 0;
  for (auto c : cls) m = std::max(m, c + 1);
  std::vector<u32> rep(m, UNDEF);
  for (u32 x = 0; x < s.size(); ++x)
    if (rep[cls[x]] == UNDEF) rep[cls[x]] = x;
  std::vector<u32> t(static_cast<std::size_t>(m) * m);
  for (u32 a = 0; a < m; ++a)
    for (u32 b = 0; b < m; ++b) t[static_cast<std::size_t>(a) * m + b] = cls[s.mul(rep[a], rep[b])];
  std::vector<u32> gens;
  for (u32 g : s.generators()) gens.push_back(cls[g]);
  return FiniteSemigroup::from_table_gens(t, m, gens);
}

Bits subsemigroup(const FiniteSemigroup& s, const Bits& seed) {
  Bits in(s.size());
  std::vector<u32> mem, q;
  seed.for_each([&](std::size_t x) {
    in.set(x);
    mem.push_back(static_cast<u32>(x));
    q.push_back(static_cast<u32>(x));
  });
  while (!q.empty()) {
    u32 y = q.back();
    q.pop_back();
    for (std::size_t i = 0; i < mem.size(); ++i)
      for (u32 p : {s.mul(y, mem[i]), s.mul(mem[i], y)})
        if (!in.test(p)) {
          in.set(p);
          mem.push_back(p);
          q.push_back(p);
        }
  }
  return in;
}

Bits subsemigroup(const FiniteSemigroup& s, const std::vector<u32>& gens) {
  Bits seed(s.size());
  for (auto g : gens) seed.set(g);
  return subsemigroup(s, seed);
}

FiniteSemigroup restrict_to(const FiniteSemigroup& s, const Bits& sub, std::vector<u32>* map_out) {
  std::vector<u32> ids;
  sub.for_each([&](std::size_t x) { ids.push_back(static_cast<u32>(x)); });
  if (ids.empty()) throw Error("restrict_to: empty subset");
  std::vector<u32> local(s.size(), UNDEF);
  for (u32 i = 0; i < ids.size(); ++i) local[ids[i]] = i;
  std::size_t n = ids.size();
  std::vector<u32> t(n * n);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) {
      u32 p = local[s.mul(ids[a], ids[b])];
      if (p == UNDEF) throw Error("restrict_to: subset not closed");
      t[a * n + b] = p;
    }
  if (map_out) *map_out = ids;
  return FiniteSemigroup::from_table(t, n, false);
}

}  // namespace kr
