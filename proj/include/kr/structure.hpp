#pragma once

#include <array>
#include <map>
#include <optional>
#include <vector>

#include "kr/core.hpp"

namespace kr {

/// M^0(A,G,B,C) coordinates of a regular J-class. Element (a,g,b) is
/// lrep[a] * members[g] * rrep[b]; C(b,a) = rrep[b]*lrep[a] read in G, or UNDEF.
struct ReesCoordinates {
  u32 j = 0;
  SubgroupHandle g;
  std::vector<u32> a_class;  // R-class id of row a
  std::vector<u32> b_class;  // L-class id of column b
  std::vector<u32> lrep, rrep;
  std::vector<u32> c;  // index b * |A| + a
  std::vector<std::array<u32, 3>> coord;  // per element of S; UNDEF outside J

  std::size_t na() const { return a_class.size(); }
  std::size_t nb() const { return b_class.size(); }
  u32 cmat(u32 b, u32 a) const { return c[b * na() + a]; }
  u32 encode(u32 a, u32 gl, u32 b) const;
  bool in_j(u32 x) const { return coord[x][0] != UNDEF; }
  /// Isomorphism from the group H-class containing x onto G (x must lie in one).
  u32 to_structure_group(u32 x) const;
};

ReesCoordinates rees_coordinatize(const FiniteSemigroup& s, const GreenStructure& g, u32 j);

/// GM semigroup with its faithful action on G x B. Point p encodes
/// (grp(p), col(p)) = (p % |G|, p / |G|); the start point (1, b0) is 0.
struct GMSemigroup {
  FiniteSemigroup s;
  GroupTable g;
  u32 nb = 0;
  std::vector<u32> left;        // left[h * npts + p] = h.p
  std::vector<u32> from_source; // surjection source element -> element of s
  u32 source_j = UNDEF;         // J-class of the source semigroup

  u32 ng() const { return static_cast<u32>(g.order()); }
  u32 npts() const { return ng() * nb; }
  u32 col(u32 p) const { return p / ng(); }
  u32 grp(u32 p) const { return p % ng(); }
  u32 point(u32 gl, u32 b) const { return b * ng() + gl; }
  const PartialTransformation& act(u32 x) const { return s.action().act[x]; }
  /// Actions of the generators of s on the points.
  std::vector<PartialTransformation> generator_actions() const;
};

/// GM quotient of S at a regular J-class (faithful image of the action on an R-class).
GMSemigroup gm_at(const FiniteSemigroup& s, const GreenStructure& g, u32 j);
/// One GM image per regular J-class with nontrivial maximal subgroup.
std::vector<GMSemigroup> gm_images(const FiniteSemigroup& s);
std::vector<GMSemigroup> gm_images(const FiniteSemigroup& s, const GreenStructure& g);
/// J-classes that carry nontrivial groups (the ones gm_images visits).
std::vector<u32> group_j_classes(const FiniteSemigroup& s, const GreenStructure& g);

/// Faithful image of the action of the GM semigroup on B.
FiniteSemigroup rlm_image(const GMSemigroup& gm);

/// GM_J(G/N); nullopt when the quotient group is trivial. N is over the local
/// numbering of the maximal subgroup of the least idempotent of J.
std::optional<GMSemigroup> gm_mod_n(const FiniteSemigroup& s, const GreenStructure& g, u32 j,
                                    const Bits& n);

Bits type_ii(const FiniteSemigroup& s);
Bits type_ii(const FiniteSemigroup& s, const Bits& v);

struct Bound {
  u32 value = 0;
  bool exact = true;  // false: cap hit, value is an estimate in the safe direction
};

Bound sl_bound(const FiniteSemigroup& s, std::size_t chain_cap = 20000);
u32 depth(const FiniteSemigroup& s);
u32 depth(const FiniteSemigroup& s, const GreenStructure& g);
Bound theta(const FiniteSemigroup& s);

/// Largest congruence (greedy maximal) injective on every maximal subgroup.
std::vector<u32> max_aperiodic_congruence(const FiniteSemigroup& s);
/// Faithful image of S acting on its regular L-classes; map_out gets the quotient map.
FiniteSemigroup lprime_image(const FiniteSemigroup& s, std::vector<u32>* map_out = nullptr);

bool subset_aperiodic(const FiniteSemigroup& s, const Bits& v);

}  // namespace kr
