#include "kr/closure.hpp"

#include <algorithm>
#include <bit>

#include <omp.h>

namespace kr {

BoolMatrix BoolMatrix::identity(std::size_t n) {
  BoolMatrix m(n);
  for (std::size_t i = 0; i < n; ++i) m.set(i, i);
  return m;
}

bool BoolMatrix::row_any(std::size_t i) const {
  const auto* r = row(i);
  for (std::size_t k = 0; k < w_; ++k)
    if (r[k]) return true;
  return false;
}

std::size_t BoolMatrix::count() const {
  std::size_t c = 0;
  for (auto w : bits_) c += std::popcount(w);
  return c;
}

std::size_t BoolMatrix::hash() const {
  std::size_t h = n_;
  for (auto w : bits_) h = hash_mix(h, static_cast<std::size_t>(w ^ (w >> 29)));
  return h;
}

bool BoolMatrix::subset_of(const BoolMatrix& o) const {
  for (std::size_t k = 0; k < bits_.size(); ++k)
    if (bits_[k] & ~o.bits_[k]) return false;
  return true;
}

namespace {

inline void product_row(const BoolMatrix& a, const BoolMatrix& b, BoolMatrix& c, std::size_t i) {
  std::size_t w = a.words();
  const auto* ar = a.row(i);
  auto* cr = c.row(i);
  for (std::size_t k = 0; k < w; ++k) {
    std::uint64_t bits = ar[k];
    while (bits) {
      std::size_t j = (k << 6) + std::countr_zero(bits);
      bits &= bits - 1;
      const auto* br = b.row(j);
      for (std::size_t t = 0; t < w; ++t) cr[t] |= br[t];
    }
  }
}

}  // namespace

BoolMatrix multiply_serial(const BoolMatrix& a, const BoolMatrix& b) {
  if (a.size() != b.size()) throw Error("matrix product: size mismatch");
  BoolMatrix c(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) product_row(a, b, c, i);
  return c;
}

BoolMatrix multiply_parallel(const BoolMatrix& a, const BoolMatrix& b) {
  if (a.size() != b.size()) throw Error("matrix product: size mismatch");
  BoolMatrix c(a.size());
  const long n = static_cast<long>(a.size());
#pragma omp parallel for schedule(static)
  for (long i = 0; i < n; ++i) product_row(a, b, c, static_cast<std::size_t>(i));
  return c;
}

BoolMatrix multiply(const BoolMatrix& a, const BoolMatrix& b) {
  if (a.size() >= 512 && omp_get_max_threads() > 1) return multiply_parallel(a, b);
  return multiply_serial(a, b);
}

LatticeIndex LatticeIndex::sp(const GBUniverse& u) {
  if (u.npts() > 9) throw Error("SP lattice over more than 9 points is not enumerated");
  LatticeIndex l;
  l.kind_ = LatticeKind::SP;
  l.u_ = u;
  l.elems_ = enumerate_sp(u.npts());
  l.finish();
  return l;
}

LatticeIndex LatticeIndex::rh(const GBUniverse& u) {
  LatticeIndex l;
  l.kind_ = LatticeKind::Rh;
  l.u_ = u;
  auto all = enumerate_rh(u);
  all.pop_back();
  l.elems_.reserve(all.size());
  for (auto& r : all) l.elems_.push_back(rh_to_cs(u, r));
  l.finish();
  return l;
}

void LatticeIndex::finish() {
  std::size_t m = elems_.size();
  for (u32 i = 0; i < m; ++i) index_.emplace(elems_[i], i);
  n_ = kind_ == LatticeKind::Rh ? m + 1 : m;
  bottom_ = index_.at(SetPartitionElement(u_.npts()));
  top_ = kind_ == LatticeKind::Rh ? static_cast<u32>(m) : index_.at(SetPartitionElement::top(u_.npts()));
  order_ = BoolMatrix(n_);
  for (u32 i = 0; i < m; ++i)
    for (u32 j = 0; j < m; ++j)
      if (sp_leq(elems_[i], elems_[j])) order_.set(i, j);
  if (kind_ == LatticeKind::Rh)
    for (u32 i = 0; i < n_; ++i) order_.set(i, top_);
}

RhodesElement LatticeIndex::rhodes(u32 i) const {
  if (kind_ != LatticeKind::Rh) throw Error("rhodes(): not a Rhodes lattice");
  if (i == top_) return RhodesElement::make_contradiction(u_.nb);
  return cs_to_rh(u_, elems_[i]);
}

bool LatticeIndex::is_contradiction(u32 i) const {
  if (kind_ == LatticeKind::Rh) return i == top_;
  return !is_cross_section(u_, elems_[i]);
}

u32 LatticeIndex::find(const SetPartitionElement& x) const {
  auto it = index_.find(x);
  return it == index_.end() ? UNDEF : it->second;
}

u32 LatticeIndex::meet(u32 i, u32 j) const {
  if (kind_ == LatticeKind::Rh) {
    if (i == top_) return j;
    if (j == top_) return i;
  }
  return index_.at(sp_meet(elems_[i], elems_[j]));
}

u32 LatticeIndex::join(u32 i, u32 j) const {
  if (kind_ == LatticeKind::Rh) {
    if (i == top_ || j == top_) return top_;
    auto x = sp_join(elems_[i], elems_[j]);
    if (!is_cross_section(u_, x)) return top_;
    return index_.at(x);
  }
  return index_.at(sp_join(elems_[i], elems_[j]));
}

std::string LatticeIndex::name(u32 i) const {
  if (kind_ == LatticeKind::Rh) return to_string(rhodes(i));
  return to_string(u_, elems_[i]);
}

namespace {

// Flow condition for one pair of set-partition elements.
bool flow_pair(const std::vector<u32>& a, const std::vector<u32>& b, const PartialTransformation& z,
               std::vector<u32>& fwd, std::vector<u32>& bwd, std::vector<u32>& touched) {
  bool ok = true;
  for (u32 p = 0; p < a.size() && ok; ++p) {
    u32 la = a[p];
    if (la == UNDEF) continue;
    u32 q = z[p];
    if (q == UNDEF) continue;
    u32 lb = b[q];
    if (lb == UNDEF) {
      ok = false;
      break;
    }
    if (fwd[la] == UNDEF && bwd[lb] == UNDEF) {
      fwd[la] = lb;
      bwd[lb] = la;
      touched.push_back(la);
      touched.push_back(lb);
    } else if (fwd[la] != lb || bwd[lb] != la) {
      ok = false;
    }
  }
  for (std::size_t k = 0; k < touched.size(); k += 2) {
    fwd[touched[k]] = UNDEF;
    bwd[touched[k + 1]] = UNDEF;
  }
  touched.clear();
  return ok;
}

}  // namespace

namespace {

// Does some SP element that is not a cross-section pair with the invariant
// cross-section a under z? Needs the block images to be disjoint; then either
// the pushforward is already not a cross-section, or a point missed by the
// image can join a block holding another point of its column.
bool reaches_non_cross_section(const GBUniverse& u, const std::vector<u32>& a, const PartialTransformation& z) {
  if (u.ng() < 2) return false;
  const u32 npts = u.npts();
  std::vector<u32> owner(npts, UNDEF), col_block(static_cast<std::size_t>(npts) * u.nb, UNDEF);
  bool non_cs = false;
  for (u32 p = 0; p < npts; ++p) {
    if (a[p] == UNDEF || z[p] == UNDEF) continue;
    u32 q = z[p];
    if (owner[q] != UNDEF && owner[q] != a[p]) return false;
    owner[q] = a[p];
    u32& cb = col_block[static_cast<std::size_t>(a[p]) * u.nb + u.col(q)];
    if (cb != UNDEF && cb != q) non_cs = true;
    cb = q;
  }
  if (non_cs) return true;
  for (u32 q = 0; q < npts; ++q)
    if (owner[q] == UNDEF) return true;
  return false;
}

}  // namespace

ClosureOperator operator_of_generator(const PartialTransformation& z, const LatticeIndex& l) {
  const u32 npts = l.universe().npts();
  if (z.degree() != npts) throw Error("operator_of_generator: degree does not match the lattice");
  const bool rh = l.kind() == LatticeKind::Rh;
  const u32 m = static_cast<u32>(rh ? l.size() - 1 : l.size());
  ClosureOperator f(l.size());
  std::vector<u32> fwd(npts, UNDEF), bwd(npts, UNDEF), touched;
  for (u32 i = 0; i < m; ++i) {
    const auto& a = l.element(i).label;
    for (u32 j = 0; j < m; ++j)
      if (flow_pair(a, l.element(j).label, z, fwd, bwd, touched)) f.set(i, j);
  }
  if (rh) {
    for (u32 i = 0; i < m; ++i)
      if (reaches_non_cross_section(l.universe(), l.element(i).label, z)) f.set(i, l.top());
    f.set(l.top(), l.top());
  }
  return f;
}

ClosureOperator identity_operator(const LatticeIndex& l) {
  ClosureOperator d(l.size());
  for (u32 i = 0; i < l.size(); ++i) d.set(i, i);
  return d;
}

ClosureOperator compose(const ClosureOperator& f, const ClosureOperator& g) { return multiply(f, g); }

Bits domain(const ClosureOperator& f) {
  Bits d(f.size());
  for (std::size_t i = 0; i < f.size(); ++i)
    if (f.row_any(i)) d.set(i);
  return d;
}

ClosureOperator backflow(const ClosureOperator& f) {
  ClosureOperator b(f.size());
  for (std::size_t i = 0; i < f.size(); ++i)
    if (f.row_any(i)) b.set(i, i);
  return b;
}

ClosureOperator star(const ClosureOperator& f) {
  ClosureOperator s(f.size());
  for (std::size_t i = 0; i < f.size(); ++i)
    if (f.get(i, i)) s.set(i, i);
  return s;
}

ClosureOperator omega(const ClosureOperator& f) {
  // First power that is idempotent; the powers of f are eventually periodic
  // and the idempotent appears within index + period steps.
  ClosureOperator p = f;
  for (std::size_t step = 0;; ++step) {
    ClosureOperator sq = compose(p, p);
    if (sq == p) return p;
    p = compose(p, f);
    if (step > (std::size_t{1} << 20)) throw Error("omega: no idempotent power found");
  }
}

ClosureOperator omega_plus_star(const ClosureOperator& f) {
  ClosureOperator w = omega(f);
  for (std::size_t i = 0; i < w.size(); ++i)
    for (std::size_t j = 0; j < w.size(); ++j)
      if (w.get(i, j) && !f.get(j, j)) w.set(i, j, false);
  return w;
}

ClosureOperator vacuum(const std::vector<ClosureOperator>& monoid) {
  if (monoid.empty()) throw Error("vacuum: empty monoid");
  Bits d(monoid[0].size());
  for (std::size_t i = 0; i < d.size(); ++i) d.set(i);
  for (auto& f : monoid) d &= domain(f);
  ClosureOperator v(d.size());
  d.for_each([&](std::size_t i) { v.set(i, i); });
  return v;
}

u32 act(const ClosureOperator& f, u32 l, const LatticeIndex& lat, const Bits& dom) {
  const std::size_t w = f.words();
  const auto* r = f.row(l);
  const auto* d = dom.data();
  u32 best = UNDEF;
  for (std::size_t k = 0; k < w && best == UNDEF; ++k)
    if (r[k] & d[k]) best = static_cast<u32>((k << 6) + std::countr_zero(r[k] & d[k]));
  if (best == UNDEF) return UNDEF;
  // Candidates come in index order; walk down to a lower bound of all of them.
  for (std::size_t k = 0; k < w; ++k) {
    std::uint64_t c = r[k] & d[k];
    while (c) {
      u32 j = static_cast<u32>((k << 6) + std::countr_zero(c));
      c &= c - 1;
      if (lat.leq(j, best)) best = j;
    }
  }
  for (std::size_t k = 0; k < w; ++k) {
    std::uint64_t c = r[k] & d[k];
    while (c) {
      u32 j = static_cast<u32>((k << 6) + std::countr_zero(c));
      c &= c - 1;
      if (!lat.leq(best, j)) throw Error("act: candidate set has no least element");
    }
  }
  return best;
}

std::pair<u32, u32> closure_map(const ClosureOperator& f, const LatticeIndex& lat, u32 l1, u32 l2) {
  u32 a = lat.top(), b = lat.top();
  bool any = false;
  for (u32 i = 0; i < f.size(); ++i) {
    if (!lat.leq(l1, i)) continue;
    for (u32 j = 0; j < f.size(); ++j)
      if (f.get(i, j) && lat.leq(l2, j)) {
        a = lat.meet(a, i);
        b = lat.meet(b, j);
        any = true;
      }
  }
  if (!any) throw Error("closure_map: no stable pair above the argument");
  return {a, b};
}

bool is_meet_closed(const ClosureOperator& f, const LatticeIndex& lat) {
  // For rows a, a2 with meet m, every j in row a needs row a2 inside
  // pre_j = {j2 : (m, j ^ j2) stable}; pre is built once per m.
  u32 n = static_cast<u32>(f.size());
  std::size_t w = f.words();
  std::vector<std::vector<std::pair<u32, u32>>> by_meet(n);
  for (u32 a = 0; a < n; ++a)
    for (u32 a2 = a; a2 < n; ++a2) by_meet[lat.meet(a, a2)].emplace_back(a, a2);
  std::vector<std::uint64_t> pre(static_cast<std::size_t>(n) * w);
  for (u32 m = 0; m < n; ++m) {
    if (by_meet[m].empty()) continue;
    std::fill(pre.begin(), pre.end(), 0);
    for (u32 j = 0; j < n; ++j)
      for (u32 j2 = 0; j2 < n; ++j2)
        if (f.get(m, lat.meet(j, j2))) pre[j * w + (j2 >> 6)] |= std::uint64_t{1} << (j2 & 63);
    for (auto [a, a2] : by_meet[m])
      for (u32 j = 0; j < n; ++j) {
        if (!f.get(a, j)) continue;
        const std::uint64_t* r = f.row(a2);
        for (std::size_t k = 0; k < w; ++k)
          if (r[k] & ~pre[j * w + k]) return false;
      }
  }
  return true;
}

}  // namespace kr
