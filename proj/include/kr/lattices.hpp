#pragma once

#include <string>
#include <vector>

#include "kr/core.hpp"

namespace kr {

/// The set G x B with point (g,b) numbered b*|G| + g.
struct GBUniverse {
  GroupTable g;
  u32 nb = 0;

  u32 ng() const { return static_cast<u32>(g.order()); }
  u32 npts() const { return ng() * nb; }
  u32 point(u32 gl, u32 b) const { return b * ng() + gl; }
  u32 grp(u32 p) const { return p % ng(); }
  u32 col(u32 p) const { return p / ng(); }
};

/// (Y, Pi): a subset Y of the points with a partition of Y. Stored as a label
/// per point (UNDEF outside Y), labels in first-occurrence order.
struct SetPartitionElement {
  std::vector<u32> label;

  SetPartitionElement() = default;
  explicit SetPartitionElement(std::size_t n) : label(n, UNDEF) {}
  static SetPartitionElement from_labels(std::vector<u32> raw);
  static SetPartitionElement from_blocks(std::size_t n, const std::vector<std::vector<u32>>& blocks);
  static SetPartitionElement top(std::size_t n);

  std::size_t size() const { return label.size(); }
  bool in(u32 p) const { return label[p] != UNDEF; }
  u32 num_blocks() const;
  Bits support() const;
  std::vector<std::vector<u32>> blocks() const;
  void canonicalize();

  friend bool operator==(const SetPartitionElement&, const SetPartitionElement&) = default;
  friend auto operator<=>(const SetPartitionElement&, const SetPartitionElement&) = default;
};

struct SPHash {
  std::size_t operator()(const SetPartitionElement& x) const;
};

bool sp_leq(const SetPartitionElement& x, const SetPartitionElement& y);
SetPartitionElement sp_meet(const SetPartitionElement& x, const SetPartitionElement& y);
SetPartitionElement sp_join(const SetPartitionElement& x, const SetPartitionElement& y);

bool is_cross_section(const GBUniverse& u, const SetPartitionElement& x);
bool is_invariant(const GBUniverse& u, const SetPartitionElement& x);
SetPartitionElement g_action(const GBUniverse& u, u32 g, const SetPartitionElement& x);

/// Element of Rh_B(G): either the contradiction or an SPC (I, Pi, [f]).
/// block[b] is UNDEF for b outside I; f[b] is the coset representative with
/// the least b of each block sent to the identity.
struct RhodesElement {
  bool contradiction = false;
  std::vector<u32> block;
  std::vector<u32> f;

  static RhodesElement make_contradiction(u32 nb);
  static RhodesElement empty(u32 nb);
  void canonicalize(const GroupTable& g);

  friend bool operator==(const RhodesElement&, const RhodesElement&) = default;
  friend auto operator<=>(const RhodesElement&, const RhodesElement&) = default;
};

bool rh_leq(const GBUniverse& u, const RhodesElement& x, const RhodesElement& y);
RhodesElement rh_meet(const GBUniverse& u, const RhodesElement& x, const RhodesElement& y);
RhodesElement rh_join(const GBUniverse& u, const RhodesElement& x, const RhodesElement& y);

RhodesElement cs_to_rh(const GBUniverse& u, const SetPartitionElement& x);
SetPartitionElement rh_to_cs(const GBUniverse& u, const RhodesElement& x);

/// Every element of SP on n points (Bell(n+1) of them).
std::vector<SetPartitionElement> enumerate_sp(u32 n);
/// Every SPC of Rh_B(G), followed by the contradiction.
std::vector<RhodesElement> enumerate_rh(const GBUniverse& u);

std::string to_string(const GBUniverse& u, const SetPartitionElement& x);
std::string to_string(const RhodesElement& x);

}  // namespace kr
