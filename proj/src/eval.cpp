#include "kr/eval.hpp"

#include <algorithm>
#include <deque>
#include <sstream>
#include <unordered_map>

namespace kr {

std::string Wff::str() const {
  switch (kind) {
    case Kind::Identity:
      return "1";
    case Kind::Generator:
      return "z" + std::to_string(gen);
    case Kind::Product:
      return a->str() + " " + b->str();
    case Kind::OmegaStar:
      return "(" + a->str() + ")^{w+*}";
  }
  return "?";
}

WffPtr wff_identity() { return std::make_shared<const Wff>(); }

WffPtr wff_generator(u32 i) {
  Wff w;
  w.kind = Wff::Kind::Generator;
  w.gen = i;
  return std::make_shared<const Wff>(std::move(w));
}

WffPtr wff_product(WffPtr a, WffPtr b) {
  if (a->kind == Wff::Kind::Identity) return b;
  if (b->kind == Wff::Kind::Identity) return a;
  Wff w;
  w.kind = Wff::Kind::Product;
  w.a = std::move(a);
  w.b = std::move(b);
  return std::make_shared<const Wff>(std::move(w));
}

WffPtr wff_omega_star(WffPtr a) {
  Wff w;
  w.kind = Wff::Kind::OmegaStar;
  w.a = std::move(a);
  return std::make_shared<const Wff>(std::move(w));
}

ClosureOperator evaluate(const Wff& t, const std::vector<ClosureOperator>& gens, const LatticeIndex& lat) {
  switch (t.kind) {
    case Wff::Kind::Identity:
      return identity_operator(lat);
    case Wff::Kind::Generator:
      return gens.at(t.gen);
    case Wff::Kind::Product:
      return compose(evaluate(*t.a, gens, lat), evaluate(*t.b, gens, lat));
    case Wff::Kind::OmegaStar:
      return omega_plus_star(evaluate(*t.a, gens, lat));
  }
  throw Error("evaluate: bad term");
}

std::vector<WffPtr> EvalTS::path(u32 i) const {
  std::vector<WffPtr> out;
  while (i != 0) {
    out.push_back(terms[via[i]]);
    i = parent_state[i];
  }
  std::reverse(out.begin(), out.end());
  return out;
}

std::string EvalTS::witness(u32 i) const {
  std::string s = "start";
  for (auto& t : path(i)) s += " . [" + t->str() + "]";
  return s;
}

u32 start_state(const LatticeIndex& lat) {
  const GBUniverse& u = lat.universe();
  SetPartitionElement x(u.npts());
  if (lat.kind() == LatticeKind::SP) {
    x.label[u.point(u.g.identity(), 0)] = 0;
  } else {
    for (u32 g = 0; g < u.ng(); ++g) x.label[u.point(g, 0)] = g;
    x.canonicalize();
  }
  u32 i = lat.find(x);
  if (i == UNDEF) throw Error("start state missing from the lattice");
  return i;
}

u32 replay(const EvalTS& e, const std::vector<WffPtr>& path) {
  u32 l = e.start;
  for (auto& t : path) {
    l = act(evaluate(*t, e.generators, *e.lattice), l, *e.lattice, e.dom);
    if (l == UNDEF) return UNDEF;
  }
  return l;
}

// ---------------------------------------------------------------------------

namespace {

struct OperatorSet {
  std::vector<ClosureOperator>* items;
  std::unordered_map<ClosureOperator, u32, BoolMatrixHash> index;

  explicit OperatorSet(std::vector<ClosureOperator>* v) : items(v) {
    for (u32 i = 0; i < v->size(); ++i) index.emplace((*v)[i], i);
  }
  // Returns the id and whether the element was new.
  std::pair<u32, bool> insert(ClosureOperator m) {
    auto it = index.find(m);
    if (it != index.end()) return {it->second, false};
    u32 id = static_cast<u32>(items->size());
    index.emplace(m, id);
    items->push_back(std::move(m));
    return {id, true};
  }
  u32 find(const ClosureOperator& m) const {
    auto it = index.find(m);
    return it == index.end() ? UNDEF : it->second;
  }
};

std::string action_key(const GMSemigroup& gm, u32 k, LatticeKind kind) {
  std::ostringstream os;
  os << k << '/' << (kind == LatticeKind::Rh ? 'R' : 'S') << '/' << gm.nb << '/' << gm.ng() << ':';
  for (u32 a = 0; a < gm.ng(); ++a)
    for (u32 b = 0; b < gm.ng(); ++b) os << gm.g.mul(a, b) << ',';
  for (auto& z : gm.generator_actions()) os << '|' << z.str();
  return os.str();
}

}  // namespace

void Evaluator::build_monoid(EvalTS& e, u32 k) {
  const LatticeIndex& lat = *e.lattice;
  std::vector<ClosureOperator> gamma = e.generators;
  std::vector<WffPtr> gamma_terms;
  for (u32 i = 0; i < gamma.size(); ++i) gamma_terms.push_back(wff_generator(i));
  OperatorSet gset(&gamma);

  e.monoid = {identity_operator(lat)};
  e.terms = {wff_identity()};
  OperatorSet mset(&e.monoid);
  std::vector<std::size_t> done(1, 0);
  std::vector<char> starred(1, 0);

  // Operators already in the monoid add nothing new.
  auto add_gamma = [&](ClosureOperator w, WffPtr t) {
    if (mset.find(w) != UNDEF) return false;
    if (gset.insert(std::move(w)).second) {
      gamma_terms.push_back(std::move(t));
      ++e.omega_star_count;
      return true;
    }
    return false;
  };

  auto close = [&]() {
    bool again = true;
    while (again) {
      again = false;
      for (std::size_t i = 0; i < e.monoid.size(); ++i) {
        for (std::size_t gi = done[i]; gi < gamma.size(); ++gi) {
          auto [id, fresh] = mset.insert(compose(e.monoid[i], gamma[gi]));
          if (fresh) {
            e.terms.push_back(wff_product(e.terms[i], gamma_terms[gi]));
            done.push_back(0);
            starred.push_back(0);
            if (e.monoid.size() > cfg_.max_monoid)
              throw BudgetExceeded("F_" + std::to_string(k) + " exceeds " + std::to_string(cfg_.max_monoid) +
                                   " operators");
          }
        }
        done[i] = gamma.size();
        if (k == 0 && !starred[i]) {
          starred[i] = 1;
          if (add_gamma(omega_plus_star(e.monoid[i]), wff_omega_star(e.terms[i]))) again = true;
        }
      }
      for (std::size_t i = 0; i < e.monoid.size() && !again; ++i)
        if (done[i] < gamma.size() || (k == 0 && !starred[i])) again = true;
    }
  };

  close();
  if (k == 0) return;

  // Rule 5F: close group elements whose image in G_J lies in N_J^{(k)}.
  while (true) {
    std::size_t n = e.monoid.size();
    std::vector<u32> gens{0};
    for (auto& gm : gamma) gens.push_back(mset.find(gm));
    std::size_t ng = gens.size();
    std::vector<u32> right(n * ng), left(n * ng);
    for (std::size_t x = 0; x < n; ++x)
      for (std::size_t i = 0; i < ng; ++i) {
        const ClosureOperator& gi = e.monoid[gens[i]];
        u32 r = mset.find(compose(e.monoid[x], gi));
        u32 l = mset.find(compose(gi, e.monoid[x]));
        if (r == UNDEF || l == UNDEF) throw Error("operator monoid is not closed under composition");
        right[x * ng + i] = r;
        left[x * ng + i] = l;
      }
    FiniteSemigroup f = FiniteSemigroup::from_cayley(n, std::move(gens), std::move(right), std::move(left));
    GreenStructure g = green_structure(f);
    std::vector<std::optional<ReesCoordinates>> rc(g.nj);
    std::vector<Bits> spread(g.nj);
    bool added = false;
    for (u32 x = 0; x < n; ++x) {
      u32 y = f.mul(x, f.omega(x));  // x^{w+1}
      u32 j = g.j[y];
      bool allowed = true;
      if (g.h_members[g.h[y]].size() > 1) {
        if (!rc[j]) {
          rc[j] = rees_coordinatize(f, g, j);
          spread[j] = n_j_k(f, g, j, k);
        }
        allowed = spread[j].test(rc[j]->to_structure_group(y));
      }
      if (allowed && add_gamma(omega_plus_star(e.monoid[x]), wff_omega_star(e.terms[x]))) added = true;
    }
    if (!added) break;
    close();
  }
}

void Evaluator::build_states(EvalTS& e) {
  const LatticeIndex& lat = *e.lattice;
  e.start = start_state(lat);
  if (!e.dom.test(e.start)) throw Error("start state lies outside the common domain");
  std::unordered_map<u32, u32> pos;
  e.states = {e.start};
  e.parent_state = {0};
  e.via = {0};
  pos[e.start] = 0;
  for (std::size_t i = 0; i < e.states.size(); ++i) {
    u32 l = e.states[i];
    for (u32 m = 0; m < e.monoid.size(); ++m) {
      u32 t = act(e.monoid[m], l, lat, e.dom);
      if (t == UNDEF || pos.count(t)) continue;
      pos[t] = static_cast<u32>(e.states.size());
      e.states.push_back(t);
      e.parent_state.push_back(static_cast<u32>(i));
      e.via.push_back(m);
      if (e.states.size() > cfg_.max_states)
        throw BudgetExceeded("Eval_" + std::to_string(e.k) + " exceeds " + std::to_string(cfg_.max_states) +
                             " states");
    }
  }
  for (u32 i = 0; i < e.states.size(); ++i)
    if (lat.is_contradiction(e.states[i])) {
      e.contradiction = i;
      break;
    }
}

EvalTS Evaluator::build(const GMSemigroup& gm, u32 k, LatticeKind kind) {
  if (k > cfg_.max_k) throw BudgetExceeded("level " + std::to_string(k) + " above the recursion cap");
  GBUniverse u{gm.g, gm.nb};
  EvalTS e;
  e.kind = kind;
  e.k = k;
  e.lattice = std::make_shared<const LatticeIndex>(kind == LatticeKind::SP ? LatticeIndex::sp(u) : LatticeIndex::rh(u));
  for (auto& z : gm.generator_actions()) e.generators.push_back(operator_of_generator(z, *e.lattice));
  build_monoid(e, k);
  e.dom = domain(e.monoid[0]);
  for (auto& m : e.monoid) e.dom &= domain(m);
  build_states(e);
  ++stats_.builds;
  return e;
}

bool Evaluator::has_contradiction(const GMSemigroup& gm, u32 k, EvalTS* out) {
  std::string key = action_key(gm, k, LatticeKind::Rh);
  if (!out) {
    auto it = contra_memo_.find(key);
    if (it != contra_memo_.end()) return it->second;
  }
  EvalTS rh = build(gm, k, LatticeKind::Rh);
  bool c = rh.contradiction.has_value();
  if (gm.npts() <= cfg_.sp_cap) {
    EvalTS sp = build(gm, k, LatticeKind::SP);
    ++stats_.sp_checks;
    if (sp.contradiction.has_value() != c) {
      ++stats_.sp_disagreements;
      throw Error("Eval_" + std::to_string(k) + ": SP and Rh lattices disagree on contradiction");
    }
  } else {
    ++stats_.sp_skipped;
  }
  contra_memo_[key] = c;
  if (out) *out = std::move(rh);
  return c;
}

Bits Evaluator::n_j_k(const FiniteSemigroup& s, const GreenStructure& g, u32 j, u32 k) {
  u32 e = UNDEF;
  for (u32 x : g.j_members[j])
    if (g.idem[x]) {
      e = x;
      break;
    }
  if (e == UNDEF) throw Error("n_j_k: J-class is not regular");
  GroupTable grp = maximal_subgroup(s, g, e).group;
  if (k == 0) return grp.whole();
  std::vector<Bits> normals = grp.normal_subgroups();
  std::vector<char> ok(normals.size(), 0);
  Bits inter = grp.whole();
  for (std::size_t i = 0; i < normals.size(); ++i) {
    auto gm = gm_mod_n(s, g, j, normals[i]);
    ok[i] = !gm || !has_contradiction(*gm, k - 1);
    if (ok[i]) inter &= normals[i];
  }
  for (std::size_t i = 0; i < normals.size(); ++i)
    if (normals[i] == inter) {
      if (!ok[i]) throw Error("n_j_k: intersection of flow subgroups admits no flow");
      return inter;
    }
  throw Error("n_j_k: intersection of normal subgroups is not normal");
}

// ---------------------------------------------------------------------------

std::vector<std::size_t> signature(const FiniteSemigroup& s) {
  GreenStructure g = green_structure(s);
  std::vector<std::size_t> sig{s.size(), g.nj, g.nr, g.nl, g.nh, g.idempotents.size()};
  std::vector<std::size_t> prof;
  for (u32 j = 0; j < g.nj; ++j) {
    std::size_t hsz = g.h_members[g.h[g.j_members[j][0]]].size();
    prof.push_back(g.j_members[j].size() * 1000003 + hsz * 2 + (g.j_regular[j] ? 1 : 0));
  }
  std::sort(prof.begin(), prof.end());
  sig.insert(sig.end(), prof.begin(), prof.end());
  return sig;
}

u32 Evaluator::gm_complexity(const GMSemigroup& gm) {
  u32 r = complexity(rlm_image(gm));
  if (r == 0) {
    if (has_contradiction(gm, 0))
      throw Error("Eval_0 has a contradiction although the RLM image is aperiodic");
    return 1;
  }
  return has_contradiction(gm, r - 1) ? r + 1 : r;
}

u32 Evaluator::complexity(const FiniteSemigroup& s) {
  GreenStructure g = green_structure(s);
  if (is_aperiodic(s, g)) return 0;
  auto sig = signature(s);
  auto& bucket = memo_[sig];
  for (auto& m : bucket)
    if (isomorphism(s, m.s, cfg_.max_nodes)) return m.value;
  if (++depth_ > 64) {
    depth_ = 0;
    throw Error("complexity: recursion does not terminate");
  }
  u32 c = 0;
  try {
    for (auto& gm : gm_images(s, g)) c = std::max(c, gm_complexity(gm));
  } catch (...) {
    --depth_;
    throw;
  }
  --depth_;
  memo_[sig].push_back({s, c});
  return c;
}

Bounds complexity_bounds(const FiniteSemigroup& s) {
  Bounds b;
  b.sl = sl_bound(s);
  b.theta = theta(s);
  b.depth = depth(s);
  b.lower = b.sl.value;
  b.upper = b.depth;
  if (b.theta.exact) b.upper = std::min(b.upper, b.theta.value);
  return b;
}

Verdict Evaluator::decide(const FiniteSemigroup& s, bool use_bounds) {
  Verdict v;
  Bounds b = complexity_bounds(s);
  v.lower = b.lower;
  v.lower_source = "Sl";
  v.upper = b.upper;
  v.upper_source = b.theta.exact && b.theta.value < b.depth ? "theta" : "depth";
  if (!b.sl.exact) v.notes.push_back("Sl chain cap reached; lower bound uses maximal chains only");
  if (!b.theta.exact) v.notes.push_back("theta step guard reached; theta not used");
  if (v.lower > v.upper)
    throw Error("inconsistent bounds: Sl = " + std::to_string(v.lower) + " exceeds " + v.upper_source + " = " +
                std::to_string(v.upper));
  if (use_bounds && v.lower == v.upper) {
    v.value = v.lower;
    return v;
  }
  try {
    u32 c = complexity(s);
    if (c < v.lower)
      throw Error("inconsistent verdict: eval decided " + std::to_string(c) + " below Sl = " + std::to_string(v.lower));
    if (c > v.upper)
      throw Error("inconsistent verdict: eval decided " + std::to_string(c) + " above " + v.upper_source + " = " +
                  std::to_string(v.upper));
    v.value = c;
    if (c > v.lower) v.lower_source = "eval contradiction";
    if (c < v.upper) v.upper_source = "eval without contradiction";
    v.lower = v.upper = c;
  } catch (const BudgetExceeded& ex) {
    v.budget_exceeded = true;
    v.notes.push_back(std::string("budget exceeded: ") + ex.what());
  }
  return v;
}

}  // namespace kr
