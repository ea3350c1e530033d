#include "kr/flows.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <sstream>

namespace kr {

namespace {

std::vector<u32> bfs_order(const Automaton& a) {
  std::vector<u32> order;
  std::vector<char> seen(a.nstates, 0);
  auto run = [&](u32 s) {
    std::deque<u32> q{s};
    seen[s] = 1;
    while (!q.empty()) {
      u32 x = q.front();
      q.pop_front();
      order.push_back(x);
      for (std::size_t i = 0; i < a.letters.size(); ++i) {
        u32 y = a.next(x, i);
        if (y != UNDEF && !seen[y]) {
          seen[y] = 1;
          q.push_back(y);
        }
      }
    }
  };
  for (u32 s = 0; s < a.nstates; ++s)
    if (!seen[s]) run(s);
  return order;
}

// 0 when (Y,Pi) x fits in (Z,Theta); otherwise the failing condition.
int transition_check(const SetPartitionElement& y, const SetPartitionElement& z, const PartialTransformation& x,
                     std::string& why) {
  for (u32 p = 0; p < y.size(); ++p)
    if (y.in(p) && x[p] != UNDEF && !z.in(x[p])) {
      why = "point " + std::to_string(p) + " is sent to " + std::to_string(x[p]) + " outside the target set";
      return 1;
    }
  std::vector<u32> fwd(y.num_blocks(), UNDEF), bwd(z.num_blocks(), UNDEF);
  for (u32 p = 0; p < y.size(); ++p) {
    if (!y.in(p) || x[p] == UNDEF) continue;
    u32 a = y.label[p], b = z.label[x[p]];
    if (fwd[a] == UNDEF && bwd[b] == UNDEF) {
      fwd[a] = b;
      bwd[b] = a;
    } else if (fwd[a] != b || bwd[b] != a) {
      why = "blocks are not mapped by a partial 1-1 map (at point " + std::to_string(p) + ")";
      return 2;
    }
  }
  return 0;
}

void check_alphabet(const Automaton& a, const GMSemigroup& gm) {
  for (u32 l : a.letters)
    if (l >= gm.s.generators().size()) throw Error("alphabet mismatch: letter " + std::to_string(l) + " is not a generator");
  if (a.delta.size() != static_cast<std::size_t>(a.nstates) * a.letters.size())
    throw Error("automaton transition table has the wrong size");
}

FlowReport fail(int cond, u32 q, u32 letter, std::string msg) {
  FlowReport r;
  r.ok = false;
  r.condition = cond;
  r.state = q;
  r.letter = letter;
  r.message = std::move(msg);
  return r;
}

std::vector<SetPartitionElement> to_cs(const std::vector<RhodesElement>& f, const GMSemigroup& gm, FlowReport& bad) {
  GBUniverse u{gm.g, gm.nb};
  std::vector<SetPartitionElement> out;
  for (u32 q = 0; q < f.size(); ++q) {
    if (f[q].contradiction) {
      bad = fail(3, q, UNDEF, "state " + std::to_string(q) + " is assigned the contradiction");
      return {};
    }
    out.push_back(rh_to_cs(u, f[q]));
  }
  return out;
}

}  // namespace

FlowReport verify_flow(const Automaton& a, const std::vector<SetPartitionElement>& f, const GMSemigroup& gm,
                       bool invariant) {
  check_alphabet(a, gm);
  if (f.size() != a.nstates) throw Error("flow assignment does not cover every state");
  GBUniverse u{gm.g, gm.nb};
  auto acts = gm.generator_actions();
  for (u32 q : bfs_order(a)) {
    if (f[q].size() != u.npts()) throw Error("flow assignment over the wrong point set");
    if (!is_cross_section(u, f[q]))
      return fail(3, q, UNDEF, "state " + std::to_string(q) + " is not a cross-section");
    if (invariant && !is_invariant(u, f[q]))
      return fail(3, q, UNDEF, "state " + std::to_string(q) + " is not G-invariant");
    for (u32 i = 0; i < a.letters.size(); ++i) {
      u32 r = a.next(q, i);
      if (r == UNDEF) continue;
      std::string why;
      int c = transition_check(f[q], f[r], acts[a.letters[i]], why);
      if (c) return fail(c, q, i, "transition " + std::to_string(q) + " -z" + std::to_string(a.letters[i]) + "-> " +
                                      std::to_string(r) + ": " + why);
    }
  }
  return {};
}

FlowReport verify_flow(const Automaton& a, const std::vector<RhodesElement>& f, const GMSemigroup& gm) {
  FlowReport bad;
  auto cs = to_cs(f, gm, bad);
  if (!bad.ok) return bad;
  return verify_flow(a, cs, gm, true);
}

FlowReport verify_complete_flow(const Automaton& a, const std::vector<SetPartitionElement>& f, const GMSemigroup& gm,
                                bool invariant) {
  FlowReport r = verify_flow(a, f, gm, invariant);
  if (!r.ok) return r;
  auto acts = gm.generator_actions();
  Bits covered(gm.npts());
  for (u32 q : bfs_order(a)) {
    covered |= f[q].support();
    for (u32 i = 0; i < a.letters.size(); ++i) {
      if (a.next(q, i) != UNDEF) continue;
      const auto& x = acts[a.letters[i]];
      for (u32 p = 0; p < f[q].size(); ++p)
        if (f[q].in(p) && x[p] != UNDEF)
          return fail(1, q, i, "transition " + std::to_string(q) + " -z" + std::to_string(a.letters[i]) +
                                   "-> sink: point " + std::to_string(p) + " has a defined image");
    }
  }
  if (covered.count() != gm.npts()) {
    u32 p = 0;
    while (covered.test(p)) ++p;
    return fail(4, UNDEF, UNDEF,
                "point (" + std::to_string(gm.grp(p)) + "," + std::to_string(gm.col(p)) + ") lies in no state");
  }
  return {};
}

FlowReport verify_complete_flow(const Automaton& a, const std::vector<RhodesElement>& f, const GMSemigroup& gm) {
  FlowReport bad;
  auto cs = to_cs(f, gm, bad);
  if (!bad.ok) return bad;
  return verify_complete_flow(a, cs, gm, true);
}

// ---------------------------------------------------------------------------

bool RelationalMorphism::related(u32 p, u32 q) const {
  return std::binary_search(graph.begin(), graph.end(), std::make_pair(p, q));
}

bool covers(const RelationalMorphism& phi, const PartialTransformation& s, const PartialTransformation& t,
            std::pair<u32, u32>* witness) {
  for (auto [p, q] : phi.graph) {
    u32 ps = s[p];
    if (ps == UNDEF) continue;
    u32 qt = t[q];
    if (qt == UNDEF || !phi.related(ps, qt)) {
      if (witness) *witness = {p, q};
      return false;
    }
  }
  return true;
}

namespace {

void check_graph(RelationalMorphism& phi) {
  std::sort(phi.graph.begin(), phi.graph.end());
  phi.graph.erase(std::unique(phi.graph.begin(), phi.graph.end()), phi.graph.end());
  std::vector<char> hit(phi.np, 0);
  for (auto [p, q] : phi.graph) {
    if (p >= phi.np || q >= phi.nq) throw Error("relational morphism: pair out of range");
    hit[p] = 1;
  }
  for (u32 p = 0; p < phi.np; ++p)
    if (!hit[p]) throw Error("relational morphism: state " + std::to_string(p) + " is related to nothing");
}

}  // namespace

RelationalMorphism make_relational_morphism(std::vector<PartialTransformation> source,
                                            std::vector<PartialTransformation> target,
                                            std::vector<std::pair<u32, u32>> graph) {
  if (source.empty() || target.empty()) throw Error("relational morphism: empty generator list");
  RelationalMorphism phi;
  phi.np = static_cast<u32>(source[0].degree());
  phi.nq = static_cast<u32>(target[0].degree());
  phi.source = std::move(source);
  phi.target = std::move(target);
  phi.graph = std::move(graph);
  check_graph(phi);
  Enumerated t = enumerate(phi.target);
  for (std::size_t i = 0; i < phi.source.size(); ++i) {
    bool found = false;
    for (auto& cand : t.ts.act)
      if (covers(phi, phi.source[i], cand)) {
        phi.cover.push_back(cand);
        found = true;
        break;
      }
    if (!found) throw Error("relational morphism: no element of T covers source generator " + std::to_string(i));
  }
  return phi;
}

void check_relational_morphism(const RelationalMorphism& phi) {
  RelationalMorphism copy = phi;
  check_graph(copy);
  if (phi.cover.size() != phi.source.size()) throw Error("relational morphism: parameterization is incomplete");
  for (std::size_t i = 0; i < phi.source.size(); ++i) {
    std::pair<u32, u32> w;
    if (!covers(copy, phi.source[i], phi.cover[i], &w))
      throw Error("relational morphism: generator " + std::to_string(i) + " is not covered at pair (" +
                  std::to_string(w.first) + "," + std::to_string(w.second) + ")");
  }
}

DerivedTS derived_ts(const RelationalMorphism& phi) {
  check_relational_morphism(phi);
  DerivedTS d;
  d.states = phi.graph;
  std::map<std::pair<u32, u32>, u32> idx;
  for (u32 i = 0; i < d.states.size(); ++i) idx[d.states[i]] = i;
  u32 n = static_cast<u32>(d.states.size());
  for (std::size_t i = 0; i < phi.source.size(); ++i)
    for (u32 q = 0; q < phi.nq; ++q) {
      u32 qt = phi.cover[i][q];
      if (qt == UNDEF) continue;
      std::vector<u32> img(n, UNDEF);
      for (u32 k = 0; k < n; ++k) {
        auto [p, q0] = d.states[k];
        if (q0 != q) continue;
        u32 ps = phi.source[i][p];
        if (ps != UNDEF) img[k] = idx.at({ps, qt});
      }
      d.generators.emplace_back(std::move(img));
    }
  if (d.generators.empty()) d.generators.emplace_back(std::vector<u32>(n, UNDEF));
  Enumerated en = enumerate(d.generators);
  d.s = std::move(en.s);
  d.ts = std::move(en.ts);
  return d;
}

// ---------------------------------------------------------------------------

std::vector<u32> min_injective_congruence(const std::vector<PartialTransformation>& gens, u32 nstates) {
  UnionFind uf(nstates);
  bool changed = true;
  while (changed) {
    changed = false;
    for (auto& s : gens)
      for (u32 p = 0; p < nstates; ++p) {
        if (s[p] == UNDEF) continue;
        for (u32 q = p + 1; q < nstates; ++q) {
          if (s[q] == UNDEF) continue;
          bool same = uf.find(p) == uf.find(q);
          bool same_img = uf.find(s[p]) == uf.find(s[q]);
          if (same && !same_img) changed |= uf.unite(s[p], s[q]);
          else if (!same && same_img) changed |= uf.unite(p, q);
        }
      }
  }
  return uf.classes();
}

bool is_congruence(const std::vector<PartialTransformation>& gens, const std::vector<u32>& cls) {
  for (auto& s : gens)
    for (u32 p = 0; p < cls.size(); ++p)
      for (u32 q = p + 1; q < cls.size(); ++q)
        if (cls[p] == cls[q] && s[p] != UNDEF && s[q] != UNDEF && cls[s[p]] != cls[s[q]]) return false;
  return true;
}

bool is_injective_congruence(const std::vector<PartialTransformation>& gens, const std::vector<u32>& cls) {
  if (!is_congruence(gens, cls)) return false;
  for (auto& s : gens)
    for (u32 p = 0; p < cls.size(); ++p)
      for (u32 q = p + 1; q < cls.size(); ++q)
        if (cls[p] != cls[q] && s[p] != UNDEF && s[q] != UNDEF && cls[s[p]] == cls[s[q]]) return false;
  return true;
}

NPhiReport n_phi(const RelationalMorphism& phi, const GMSemigroup& gm) {
  if (phi.np != gm.npts()) throw Error("n_phi: source is not the GM point set");
  DerivedTS d = derived_ts(phi);
  auto cls = min_injective_congruence(d.generators, static_cast<u32>(d.states.size()));
  NPhiReport r;
  Bits seed(gm.ng());
  std::map<u32, std::pair<u32, u32>> first;  // class -> a state in it
  for (u32 k = 0; k < d.states.size(); ++k) {
    auto [p, q] = d.states[k];
    auto it = first.find(cls[k]);
    if (it == first.end()) {
      first[cls[k]] = d.states[k];
      continue;
    }
    auto [p0, q0] = it->second;
    if (q0 != q) {
      if (r.admissible) r.message = "congruence identifies states over different target states";
      r.admissible = false;
    }
  }
  for (u32 a = 0; a < d.states.size(); ++a)
    for (u32 b = 0; b < d.states.size(); ++b) {
      if (cls[a] != cls[b]) continue;
      auto [pa, qa] = d.states[a];
      auto [pb, qb] = d.states[b];
      if (qa != qb || gm.col(pa) != gm.col(pb)) continue;
      u32 g = gm.grp(pa), h = gm.grp(pb);
      if (g != h) r.cross_section = false;
      seed.set(gm.g.mul(gm.g.inv(h), g));
    }
  r.n = gm.g.generate(seed);
  if (!r.admissible) throw Error("n_phi: " + r.message);
  return r;
}

// ---------------------------------------------------------------------------

namespace {

[[noreturn]] void flow_error(std::size_t line, const std::string& msg) {
  throw Error("flow file line " + std::to_string(line) + ": " + msg);
}

RhodesElement parse_spc(const std::string& text, const GMSemigroup& gm, std::size_t line) {
  RhodesElement r = RhodesElement::empty(gm.nb);
  std::size_t i = 0, blk = 0;
  auto skip = [&] {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
  };
  auto number = [&]() -> u32 {
    skip();
    std::size_t s = i;
    while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) ++i;
    if (s == i) flow_error(line, "expected a number at column " + std::to_string(s + 1));
    return static_cast<u32>(std::stoul(text.substr(s, i - s)));
  };
  skip();
  while (i < text.size()) {
    if (text[i] != '{') flow_error(line, "expected '{' at column " + std::to_string(i + 1));
    ++i;
    skip();
    if (i < text.size() && text[i] == '}') {
      ++i;
      skip();
      continue;
    }
    while (true) {
      u32 b = number();
      skip();
      if (i >= text.size() || text[i] != ':') flow_error(line, "expected ':' at column " + std::to_string(i + 1));
      ++i;
      u32 g = number();
      if (b >= gm.nb) flow_error(line, "column " + std::to_string(b) + " out of range");
      if (g >= gm.ng()) flow_error(line, "group element " + std::to_string(g) + " out of range");
      if (r.block[b] != UNDEF) flow_error(line, "column " + std::to_string(b) + " listed twice");
      r.block[b] = static_cast<u32>(blk);
      r.f[b] = g;
      skip();
      if (i < text.size() && text[i] == ',') {
        ++i;
        continue;
      }
      if (i < text.size() && text[i] == '}') {
        ++i;
        break;
      }
      flow_error(line, "expected ',' or '}' at column " + std::to_string(i + 1));
    }
    ++blk;
    skip();
  }
  r.canonicalize(gm.g);
  return r;
}

}  // namespace

FlowFile parse_flow(const std::string& text, const GMSemigroup& gm) {
  FlowFile ff;
  std::istringstream in(text);
  std::string raw;
  std::size_t line = 0;
  bool header = false;
  std::vector<char> assigned;
  while (std::getline(in, raw)) {
    ++line;
    auto hash = raw.find('#');
    if (hash != std::string::npos) raw = raw.substr(0, hash);
    std::istringstream ls(raw);
    std::string kw;
    if (!(ls >> kw)) continue;
    if (kw == "flow") {
      std::string tok;
      while (ls >> tok) {
        if (tok.rfind("states=", 0) == 0) {
          ff.automaton.nstates = static_cast<u32>(std::stoul(tok.substr(7)));
        } else if (tok.rfind("letters=", 0) == 0) {
          std::string rest = tok.substr(8);
          if (!rest.empty()) ff.automaton.letters.push_back(static_cast<u32>(std::stoul(rest)));
          u32 v;
          while (ls >> v) ff.automaton.letters.push_back(v);
        } else {
          flow_error(line, "unknown header field '" + tok + "'");
        }
      }
      ff.automaton.delta.assign(static_cast<std::size_t>(ff.automaton.nstates) * ff.automaton.letters.size(), UNDEF);
      ff.assignment.assign(ff.automaton.nstates, RhodesElement::empty(gm.nb));
      assigned.assign(ff.automaton.nstates, 0);
      header = true;
    } else if (!header) {
      flow_error(line, "missing 'flow' header");
    } else if (kw == "delta") {
      u32 q, i, r;
      if (!(ls >> q >> i >> r)) flow_error(line, "expected 'delta <q> <letter> <q'>'");
      if (q >= ff.automaton.nstates || r >= ff.automaton.nstates || i >= ff.automaton.letters.size())
        flow_error(line, "transition out of range");
      ff.automaton.delta[q * ff.automaton.letters.size() + i] = r;
    } else if (kw == "state") {
      u32 q;
      if (!(ls >> q) || q >= ff.automaton.nstates) flow_error(line, "expected a state number");
      std::string rest;
      std::getline(ls, rest);
      ff.assignment[q] = parse_spc(rest, gm, line);
      assigned[q] = 1;
    } else {
      flow_error(line, "unknown keyword '" + kw + "'");
    }
  }
  if (!header) throw Error("flow file: missing 'flow' header");
  for (u32 q = 0; q < assigned.size(); ++q)
    if (!assigned[q]) throw Error("flow file: state " + std::to_string(q) + " has no assignment");
  return ff;
}

std::string write_flow(const FlowFile& f) {
  std::ostringstream os;
  os << "flow states=" << f.automaton.nstates << " letters=";
  for (std::size_t i = 0; i < f.automaton.letters.size(); ++i) os << (i ? " " : "") << f.automaton.letters[i];
  os << '\n';
  for (u32 q = 0; q < f.automaton.nstates; ++q)
    for (u32 i = 0; i < f.automaton.letters.size(); ++i)
      if (f.automaton.next(q, i) != UNDEF) os << "delta " << q << ' ' << i << ' ' << f.automaton.next(q, i) << '\n';
  for (u32 q = 0; q < f.assignment.size(); ++q) os << "state " << q << ' ' << to_string(f.assignment[q]) << '\n';
  return os.str();
}

}  // namespace kr
