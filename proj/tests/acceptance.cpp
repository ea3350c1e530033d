// Acceptance harness: one PASS/FAIL line per criterion, exit status 0 only
// when every criterion passes.

#include <chrono>
#include <cstdio>
#include <functional>
#include <set>
#include <sstream>

#include "corpus.hpp"
#include "kr/closure.hpp"
#include "kr/eval.hpp"
#include "oracles.hpp"

using namespace kr;

namespace {

struct Check {
  bool pass = true;
  std::string detail;
};

std::string fmt(const char* f, auto... a) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, a...);
  return buf;
}

std::optional<u32> decided(Evaluator& ev, const FiniteSemigroup& s) { return ev.decide(s, false).value; }

std::vector<GMSemigroup> images_of(const std::vector<corpus::Named>& fam) {
  std::vector<GMSemigroup> out;
  for (auto& n : fam)
    for (auto& gm : gm_images(n.s)) out.push_back(gm);
  return out;
}

// ---------------------------------------------------------------------------

Check c1_anchors() {
  Evaluator ev;
  Check o;
  std::ostringstream d;
  for (auto [n, want] : {std::pair{"U", 0u}, {"Z2", 1u}, {"T2", 1u}, {"T3", 2u}}) {
    auto s = corpus::named(n);
    auto v = decided(ev, s);
    d << "c(" << n << ")=" << (v ? std::to_string(*v) : "?") << ' ';
    o.pass &= v == want;
  }
  auto t3 = corpus::named("T3");
  auto sl = sl_bound(t3);
  u32 dp = depth(t3);
  o.pass &= sl.exact && sl.value == 2 && dp == 2;
  bool contra = false;
  for (auto& gm : gm_images(t3))
    if (gm.ng() == 2 && gm.nb == 3) contra = ev.has_contradiction(gm, 0);
  o.pass &= contra;
  d << "| T3 Sl=" << sl.value << " depth=" << dp << " rank-2 GM Eval_0 contradiction=" << (contra ? "yes" : "no");
  o.detail = d.str();
  return o;
}

Check c2_inverse_anchors() {
  Evaluator ev;
  auto s2 = corpus::named("SIS2"), s3 = corpus::named("SIS3");
  auto v2 = decided(ev, s2), v3 = decided(ev, s3);
  u32 dp = depth(s3);
  auto th = theta(s3);
  auto sl = sl_bound(s3);
  Bits t2 = type_ii(s3);
  std::size_t idem = 0;
  bool same = true;
  for (u32 x = 0; x < s3.size(); ++x) {
    idem += s3.is_idempotent(x);
    same &= t2.test(x) == s3.is_idempotent(x);
  }
  Check o;
  o.pass = v2 == 1u && v3 == 1u && dp == 2 && th.exact && th.value == 2 && sl.exact && sl.value == 1 && same &&
           idem == 8 && s3.size() == 34;
  o.detail = fmt("c(SIS2)=%d c(SIS3)=%d depth=%u theta=%u Sl=%u |S_II|=%zu (idempotents %zu, equal=%s)",
                 v2 ? int(*v2) : -1, v3 ? int(*v3) : -1, dp, th.value, sl.value, t2.count(), idem,
                 same ? "yes" : "no");
  return o;
}

Check c3_completely_regular() {
  Evaluator ev;
  auto fam = corpus::completely_regular_family(8);
  std::size_t bad = 0, undecided = 0;
  std::string first;
  for (auto& s : fam) {
    auto v = decided(ev, s);
    auto sl = sl_bound(s), th = theta(s);
    if (!v) {
      ++undecided;
      continue;
    }
    if (!(sl.exact && th.exact && *v == sl.value && *v == th.value)) {
      if (first.empty()) first = fmt(" first: order %zu c=%u Sl=%u theta=%u", s.size(), *v, sl.value, th.value);
      ++bad;
    }
  }
  Check o;
  o.pass = bad == 0 && undecided == 0 && !fam.empty();
  o.detail = fmt("%zu completely regular semigroups of order <= 8, %zu mismatches, %zu undecided", fam.size(), bad,
                 undecided) +
             first;
  return o;
}

Check c4_inverse_eval() {
  Evaluator ev;
  auto fam = corpus::inverse_family(34);
  std::size_t images = 0, contra = 0, nonaperiodic = 0, wrong_c = 0;
  std::string which;
  for (auto& n : fam) {
    auto gms = gm_images(n.s);
    for (auto& gm : gms) {
      ++images;
      if (ev.has_contradiction(gm, 0)) ++contra;
      auto r = rlm_image(gm);
      if (!is_aperiodic(r)) {
        ++nonaperiodic;
        auto c = decided(ev, r);
        which += fmt(" %s(|B|=%u, RLM order %zu, c(RLM)=%d)", n.name.c_str(), gm.nb, r.size(), c ? int(*c) : -1);
      }
    }
    if (!gms.empty() && decided(ev, n.s) != 1u) ++wrong_c;
  }
  Check o;
  o.pass = contra == 0 && nonaperiodic == 0 && wrong_c == 0 && images > 0;
  o.detail = fmt("%zu inverse semigroups, %zu GM images: %zu contradictions, %zu non-aperiodic RLM, %zu with c != 1",
                 fam.size(), images, contra, nonaperiodic, wrong_c);
  if (!which.empty()) o.detail += "; non-aperiodic:" + which;
  return o;
}

Check c5_lattice_iso() {
  std::size_t checks = 0, bad = 0;
  auto pair_check = [&](const GBUniverse& u, const RhodesElement& x, const RhodesElement& y) {
    auto cx = rh_to_cs(u, x), cy = rh_to_cs(u, y);
    ++checks;
    if (cs_to_rh(u, cx) != x) ++bad;
    if (rh_to_cs(u, rh_meet(u, x, y)) != sp_meet(cx, cy)) ++bad;
    if (rh_leq(u, x, y) != sp_leq(cx, cy)) ++bad;
  };
  std::vector<GBUniverse> small;
  for (u32 n = 1; n <= 6; ++n)
    for (u32 b = 1; n * b <= 6; ++b) small.push_back({GroupTable::cyclic(n), b});
  small.push_back({GroupTable::symmetric(3), 1});
  for (auto& u : small) {
    auto rh = enumerate_rh(u);
    rh.pop_back();
    std::set<std::vector<u32>> images;
    for (auto& x : rh) images.insert(rh_to_cs(u, x).label);
    // every invariant cross-section of SP is hit, and maps back to itself
    for (auto& e : enumerate_sp(u.npts()))
      if (is_cross_section(u, e) && is_invariant(u, e)) {
        ++checks;
        if (!images.count(e.label) || rh_to_cs(u, cs_to_rh(u, e)) != e) ++bad;
      }
    for (auto& x : rh)
      for (auto& y : rh) pair_check(u, x, y);
  }
  std::mt19937_64 rng(2025);
  std::vector<GBUniverse> big{{GroupTable::cyclic(2), 5},
                              {GroupTable::cyclic(3), 4},
                              {GroupTable::symmetric(3), 3},
                              {GroupTable::cyclic(4), 3},
                              {GroupTable::cyclic(2), 8}};
  for (int i = 0; i < 10000; ++i) {
    const auto& u = big[i % big.size()];
    pair_check(u, oracle::random_rhodes(rng, u), oracle::random_rhodes(rng, u));
  }
  return {bad == 0, fmt("%zu checks (exhaustive |G||B| <= 6 plus 10000 random), %zu failures", checks, bad)};
}

struct OpStats {
  std::size_t lattices = 0, ops = 0, not_meet_closed = 0, axiom = 0, composition = 0, omega = 0, omega_star = 0;
};

// Closure map axioms, exhaustive over L x L.
std::size_t closure_axiom_failures(const ClosureOperator& f, const LatticeIndex& lat) {
  u32 n = static_cast<u32>(lat.size());
  std::vector<std::pair<u32, u32>> img(n * n);
  std::size_t bad = 0;
  for (u32 a = 0; a < n; ++a)
    for (u32 b = 0; b < n; ++b) {
      auto xy = closure_map(f, lat, a, b);
      img[a * n + b] = xy;
      if (!lat.leq(a, xy.first) || !lat.leq(b, xy.second)) ++bad;
      if (closure_map(f, lat, xy.first, xy.second) != xy) ++bad;
    }
  for (u32 a = 0; a < n; ++a)
    for (u32 b = 0; b < n; ++b)
      for (u32 a2 = 0; a2 < n; ++a2) {
        if (!lat.leq(a, a2)) continue;
        for (u32 b2 = 0; b2 < n; ++b2)
          if (lat.leq(b, b2)) {
            auto p = img[a * n + b], q = img[a2 * n + b2];
            if (!lat.leq(p.first, q.first) || !lat.leq(p.second, q.second)) ++bad;
          }
      }
  return bad;
}

void check_operators(const EvalTS& e, OpStats& st, std::mt19937_64& rng) {
  const auto& lat = *e.lattice;
  ++st.lattices;
  std::set<std::vector<std::uint64_t>> members;
  auto key = [](const ClosureOperator& f) {
    std::vector<std::uint64_t> k;
    for (std::size_t i = 0; i < f.size(); ++i) k.insert(k.end(), f.row(i), f.row(i) + f.words());
    return k;
  };
  for (auto& f : e.monoid) members.insert(key(f));
  for (std::size_t i = 0; i < e.monoid.size(); ++i) {
    const auto& f = e.monoid[i];
    ++st.ops;
    if (!is_meet_closed(f, lat)) ++st.not_meet_closed;
    auto w = omega(f);
    if (compose(w, w) != w) ++st.omega;
    auto ws = omega_plus_star(f);
    for (u32 l = 0; l < lat.size(); ++l)
      for (u32 m = 0; m < lat.size(); ++m)
        if (ws.get(l, m) != (w.get(l, m) && f.get(m, m))) ++st.omega_star;
    const auto& g = e.monoid[rng() % e.monoid.size()];
    if (!members.count(key(compose(f, g)))) ++st.composition;
  }
  for (auto& f : e.generators) {
    st.axiom += closure_axiom_failures(f, lat);
    st.axiom += closure_axiom_failures(omega_plus_star(f), lat);
  }
}

// Partial maps of G x B commuting with the left action of G: each column is
// dropped or sent to (g c, b') for a column b' and multiplier c.
std::vector<PartialTransformation> equivariant_maps(const GBUniverse& u) {
  u32 choices = u.nb * u.ng() + 1, total = 1;
  for (u32 b = 0; b < u.nb; ++b) total *= choices;
  std::vector<PartialTransformation> out;
  for (u32 code = 0; code < total; ++code) {
    std::vector<u32> img(u.npts(), UNDEF);
    u32 c = code;
    for (u32 b = 0; b < u.nb; ++b, c /= choices) {
      u32 t = c % choices;
      if (t == u.nb * u.ng()) continue;
      for (u32 g = 0; g < u.ng(); ++g) img[u.point(g, b)] = u.point(u.g.mul(g, t % u.ng()), t / u.ng());
    }
    out.emplace_back(std::move(img));
  }
  return out;
}

Check c6_closure_suite() {
  Evaluator ev;
  std::mt19937_64 rng(6);
  OpStats sp, rh;
  // every equivariant generator on every universe whose lattice fits
  std::vector<GBUniverse> us;
  for (u32 n = 2; n <= 6; ++n)
    for (u32 b = 1; b <= 4; ++b) us.push_back({GroupTable::cyclic(n), b});
  us.push_back({GroupTable::symmetric(3), 1});
  for (auto& u : us)
    for (auto kind : {LatticeKind::SP, LatticeKind::Rh}) {
      if (kind == LatticeKind::SP && u.npts() > 4) continue;
      auto lat = kind == LatticeKind::SP ? LatticeIndex::sp(u) : LatticeIndex::rh(u);
      if (lat.size() > 64) continue;
      auto& st = kind == LatticeKind::SP ? sp : rh;
      ++st.lattices;
      for (auto& z : equivariant_maps(u)) {
        auto f = operator_of_generator(z, lat);
        ++st.ops;
        if (!is_meet_closed(f, lat)) ++st.not_meet_closed;
        if (lat.size() <= 25) st.axiom += closure_axiom_failures(f, lat);
      }
    }
  std::set<std::string> seen;
  std::size_t skipped = 0;
  auto fam = corpus::named_family();
  for (auto& r : corpus::random_family(61, 20)) fam.push_back(r);
  for (auto& r : corpus::inverse_family(34)) fam.push_back(r);
  for (auto& gm : images_of(fam)) {
    std::string k;
    for (auto& a : gm.generator_actions()) k += a.str() + "|";
    if (!seen.insert(k + std::to_string(gm.nb)).second) continue;
    for (auto kind : {LatticeKind::SP, LatticeKind::Rh}) {
      GBUniverse u{gm.g, gm.nb};
      if (u.npts() > (kind == LatticeKind::SP ? 4u : 8u)) continue;
      auto size = kind == LatticeKind::SP ? LatticeIndex::sp(u).size() : LatticeIndex::rh(u).size();
      if (size > 64) continue;
      try {
        auto e = ev.build(gm, 0, kind);
        check_operators(e, kind == LatticeKind::SP ? sp : rh, rng);
      } catch (const BudgetExceeded&) {
        ++skipped;
      }
    }
  }
  auto line = [](const char* name, const OpStats& s) {
    return fmt("%s: %zu lattices, %zu operators, %zu not meet-closed, %zu axiom, %zu composition, %zu omega, %zu w+* "
               "failures",
               name, s.lattices, s.ops, s.not_meet_closed, s.axiom, s.composition, s.omega, s.omega_star);
  };
  auto clean = [](const OpStats& s) {
    return s.not_meet_closed + s.axiom + s.composition + s.omega + s.omega_star == 0 && s.ops > 0;
  };
  return {clean(sp) && clean(rh) && skipped == 0,
          line("SP", sp) + "; " + line("Rh", rh) + fmt("; %zu builds over budget", skipped)};
}

Check c7_dst() {
  auto phis = corpus::random_morphisms(7, 20);
  std::size_t bad = 0, max_p = 0, max_q = 0;
  std::string first;
  for (auto& phi : phis) {
    max_p = std::max<std::size_t>(max_p, phi.np);
    max_q = std::max<std::size_t>(max_q, phi.nq);
    if (auto why = corpus::derived_semigroup_division(phi)) {
      if (first.empty()) first = " first: " + *why;
      ++bad;
    }
  }
  return {bad == 0 && phis.size() == 20 && max_p <= 4 && max_q <= 4,
          fmt("%zu relational morphisms (|P| <= %zu, |Q| <= %zu), %zu divisions refuted", phis.size(), max_p, max_q,
              bad) +
              first};
}

Check c8_saturation() {
  Evaluator ev;
  std::ostringstream d;
  bool pass = true;
  for (auto [name, order] : {std::pair{"Z2", 2u}, {"Z3", 3u}, {"S3", 6u}}) {
    std::optional<GMSemigroup> gm;
    for (auto& g : gm_images(corpus::named(name)))
      if (g.ng() == order && g.nb == 1) gm = g;
    if (!gm) {
      pass = false;
      d << name << ": no GM image; ";
      continue;
    }
    GBUniverse u{gm->g, gm->nb};
    SetPartitionElement gsigma(u.npts());
    for (u32 g = 0; g < u.ng(); ++g) gsigma.label[u.point(g, 0)] = g;
    gsigma.canonicalize();
    auto lat = LatticeIndex::sp(u);
    Bits all(lat.size());
    for (u32 i = 0; i < lat.size(); ++i) all.set(i);
    // product of the cyclic pieces g^{w+*}, then starred
    ClosureOperator prod = identity_operator(lat);
    for (u32 x = 0; x < gm->s.size(); ++x) prod = compose(prod, omega_plus_star(operator_of_generator(gm->act(x), lat)));
    bool via_products = act(omega_plus_star(prod), start_state(lat), lat, all) == lat.find(gsigma);
    auto rh = ev.build(*gm, 0, LatticeKind::Rh);
    bool in_rh = std::find(rh.states.begin(), rh.states.end(), rh.lattice->find(gsigma)) != rh.states.end();
    bool in_sp = true;
    if (u.npts() <= 4) {
      auto sp = ev.build(*gm, 0, LatticeKind::SP);
      in_sp = std::find(sp.states.begin(), sp.states.end(), sp.lattice->find(gsigma)) != sp.states.end();
    }
    pass &= via_products && in_rh && in_sp;
    d << name << ": " << (via_products ? "reached" : "missed") << " by w+* products"
      << (in_rh ? ", Rh state" : ", not an Rh state") << (u.npts() <= 4 ? (in_sp ? ", SP state" : ", not an SP state") : "")
      << "; ";
  }
  return {pass, d.str()};
}

struct CorpusRun {
  std::size_t semigroups = 0, undecided = 0, violations = 0, errors = 0;
  std::string first;
  EvalStats stats;
  std::size_t extra_checks = 0, extra_disagreements = 0;
};

CorpusRun run_corpus() {
  CorpusRun r;
  EvalConfig cfg;
  cfg.sp_cap = 5;
  Evaluator ev(cfg);
  auto fam = corpus::named_family();
  for (auto& s : corpus::completely_regular_family(8)) fam.push_back({"cr", s});
  for (auto& s : corpus::inverse_family(34)) fam.push_back(s);
  for (auto& s : corpus::random_family(10, 40)) fam.push_back(s);
  for (auto& n : fam) {
    ++r.semigroups;
    try {
      auto v = ev.decide(n.s, false);
      auto b = complexity_bounds(n.s);
      if (!v.value) {
        ++r.undecided;
        continue;
      }
      u32 upper = std::min(b.depth, b.theta.value);
      if (b.sl.value > *v.value || *v.value > upper) {
        ++r.violations;
        if (r.first.empty())
          r.first = fmt(" first: %s Sl=%u c=%u depth=%u theta=%u", n.name.c_str(), b.sl.value, *v.value, b.depth,
                        b.theta.value);
      }
    } catch (const Error& e) {
      ++r.errors;
      if (r.first.empty()) r.first = " first error: " + n.name + ": " + e.what();
    }
  }
  r.stats = ev.stats();
  // every GM image small enough for the SP lattice, built both ways
  Evaluator plain;
  for (auto& gm : images_of(fam)) {
    if (gm.npts() > 5) continue;
    try {
      auto sp = plain.build(gm, 0, LatticeKind::SP);
      auto rh = plain.build(gm, 0, LatticeKind::Rh);
      ++r.extra_checks;
      if (sp.contradiction.has_value() != rh.contradiction.has_value()) ++r.extra_disagreements;
    } catch (const BudgetExceeded&) {
    }
  }
  return r;
}

Check c9_agreement(const CorpusRun& r) {
  return {r.stats.sp_disagreements == 0 && r.extra_disagreements == 0 && r.errors == 0,
          fmt("%zu Rh builds cross-checked in SP during decisions, %zu disagreements; %zu builds above the SP size cap "
              "(|G x B| > 5) not cross-checked; direct SP/Rh builds of %zu GM images, %zu disagreements",
              r.stats.sp_checks, r.stats.sp_disagreements, r.stats.sp_skipped, r.extra_checks, r.extra_disagreements)};
}

Check c10_consistency(const CorpusRun& r) {
  return {r.violations == 0 && r.errors == 0,
          fmt("%zu semigroups: %zu violations of Sl <= c <= min(depth, theta), %zu undecided within budget, %zu errors",
              r.semigroups, r.violations, r.undecided, r.errors) +
              r.first};
}

}  // namespace

int main() {
  int failed = 0;
  auto report = [&](int id, const char* title, const std::function<Check()>& f) {
    auto t0 = std::chrono::steady_clock::now();
    Check o;
    try {
      o = f();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    failed += !o.pass;
    std::printf("%s %2d %s: %s (%.1fs)\n", o.pass ? "PASS" : "FAIL", id, title, o.detail.c_str(), secs);
    std::fflush(stdout);
  };
  report(1, "complexity anchors", c1_anchors);
  report(2, "inverse-semigroup anchors", c2_inverse_anchors);
  report(3, "completely regular: c = Sl = theta", c3_completely_regular);
  report(4, "inverse semigroups: Eval_0 clean, RLM aperiodic", c4_inverse_eval);
  report(5, "Rh / cross-section isomorphism", c5_lattice_iso);
  report(6, "closure-operator suite", c6_closure_suite);
  report(7, "derived semigroup theorem", c7_dst);
  report(8, "group saturation", c8_saturation);
  CorpusRun corpus_run;
  bool ran = false;
  auto once = [&]() -> const CorpusRun& {
    if (!ran) corpus_run = run_corpus(), ran = true;
    return corpus_run;
  };
  report(9, "SP/Rh contradiction agreement", [&] { return c9_agreement(once()); });
  report(10, "self-consistency Sl <= c <= min(depth, theta)", [&] { return c10_consistency(once()); });
  std::printf("%d of 10 criteria failed\n", failed);
  return failed == 0 ? 0 : 1;
}
