#pragma once

#include <string>
#include <utility>
#include <vector>

#include "kr/lattices.hpp"
#include "kr/structure.hpp"

namespace kr {

/// Partial deterministic automaton; letters name generators of a GM semigroup.
struct Automaton {
  u32 nstates = 0;
  std::vector<u32> letters;  // generator positions in gm.s.generators()
  std::vector<u32> delta;    // delta[q * letters.size() + i], UNDEF when undefined

  u32 next(u32 q, std::size_t i) const { return delta[q * letters.size() + i]; }
};

struct FlowReport {
  bool ok = true;
  int condition = 0;  // 1: Yx in Z, 2: partial 1-1 on blocks, 3: cross-section, 4: covering
  u32 state = UNDEF;
  u32 letter = UNDEF;
  std::string message;
};

/// Flow conditions (1)-(3) at every defined transition, visited in BFS order
/// from state 0. invariant additionally requires G-invariant cross-sections.
FlowReport verify_flow(const Automaton& a, const std::vector<SetPartitionElement>& f, const GMSemigroup& gm,
                       bool invariant = false);
FlowReport verify_flow(const Automaton& a, const std::vector<RhodesElement>& f, const GMSemigroup& gm);
/// Adds the sink transitions (undefined letters must send Y to nothing) and
/// the covering condition.
FlowReport verify_complete_flow(const Automaton& a, const std::vector<SetPartitionElement>& f,
                                const GMSemigroup& gm, bool invariant = false);
FlowReport verify_complete_flow(const Automaton& a, const std::vector<RhodesElement>& f, const GMSemigroup& gm);

/// Relational morphism (P,S) -> (Q,T) with a parameterization of the source
/// generators.
struct RelationalMorphism {
  u32 np = 0, nq = 0;
  std::vector<PartialTransformation> source;  // generators of S on P
  std::vector<PartialTransformation> target;  // generators of T on Q
  std::vector<std::pair<u32, u32>> graph;     // sorted pairs (p, q)
  std::vector<PartialTransformation> cover;   // chosen element of T for each source generator

  bool related(u32 p, u32 q) const;
};

/// Does t cover s: (p,q) related and ps defined imply qt defined and (ps, qt) related.
bool covers(const RelationalMorphism& phi, const PartialTransformation& s, const PartialTransformation& t,
            std::pair<u32, u32>* witness = nullptr);

/// Builds the morphism choosing, per source generator, the first covering
/// element of T in length-lex order. Throws if P is not fully related or a
/// generator has no cover.
RelationalMorphism make_relational_morphism(std::vector<PartialTransformation> source,
                                            std::vector<PartialTransformation> target,
                                            std::vector<std::pair<u32, u32>> graph);
/// Checks a supplied parameterization; throws naming the failing pair.
void check_relational_morphism(const RelationalMorphism& phi);

struct DerivedTS {
  std::vector<std::pair<u32, u32>> states;  // the graph
  std::vector<PartialTransformation> generators;
  FiniteSemigroup s;
  TransformationSemigroup ts;  // all elements
};

DerivedTS derived_ts(const RelationalMorphism& phi);

/// Least congruence (class id per state) whose quotient acts by partial 1-1 maps.
std::vector<u32> min_injective_congruence(const std::vector<PartialTransformation>& gens, u32 nstates);
bool is_congruence(const std::vector<PartialTransformation>& gens, const std::vector<u32>& cls);
bool is_injective_congruence(const std::vector<PartialTransformation>& gens, const std::vector<u32>& cls);

struct NPhiReport {
  Bits n;                 // subgroup of G (local numbering)
  bool admissible = true;
  bool cross_section = true;
  std::string message;
};

/// N(phi) for phi from the GM transformation semigroup (G x B, S): the
/// subgroup generated by h^{-1}g over pairs ((g,b),q) == ((h,b),q) of the
/// minimal injective congruence on D(phi).
NPhiReport n_phi(const RelationalMorphism& phi, const GMSemigroup& gm);

/// Text format for flows over Rh_B(G):
///   flow states=<n> letters=<i> <j> ...
///   delta <q> <letter position> <q'>
///   state <q> <blocks>     e.g. state 0 {0:0,1:1} {2:0}   ("{}" for the empty SPC)
struct FlowFile {
  Automaton automaton;
  std::vector<RhodesElement> assignment;
};
FlowFile parse_flow(const std::string& text, const GMSemigroup& gm);
std::string write_flow(const FlowFile& f);

}  // namespace kr
