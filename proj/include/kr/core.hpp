#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "kr/bits.hpp"

namespace kr {

using u32 = std::uint32_t;
inline constexpr u32 UNDEF = 0xFFFFFFFFu;

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct BudgetExceeded : Error {
  using Error::Error;
};

/// Caps shared by the enumeration and search routines.
struct Limits {
  std::size_t max_elements = 1000000;
  std::size_t table_cap = 4096;  // full Cayley table stored up to this order
  std::uint64_t max_nodes = 10000000;
};

/// Partial map on {0..n-1}; composition is left to right (p then q).
struct PartialTransformation {
  std::vector<u32> img;

  PartialTransformation() = default;
  explicit PartialTransformation(std::vector<u32> v) : img(std::move(v)) {}

  std::size_t degree() const { return img.size(); }
  u32 operator[](std::size_t i) const { return img[i]; }
  PartialTransformation then(const PartialTransformation& q) const;
  bool is_identity() const;
  std::size_t rank() const;
  std::string str() const;

  friend bool operator==(const PartialTransformation&, const PartialTransformation&) = default;
  friend auto operator<=>(const PartialTransformation&, const PartialTransformation&) = default;
};

struct PTHash {
  std::size_t operator()(const PartialTransformation& p) const;
};

/// Element i acts on {0..degree-1} as act[i].
struct TransformationSemigroup {
  u32 degree = 0;
  std::vector<PartialTransformation> act;
};

/// A finite semigroup with a fixed element numbering, a generating set and a
/// factorization of every element over that set.
class FiniteSemigroup {
 public:
  FiniteSemigroup() = default;

  /// Breadth-first closure of the generators under right multiplication;
  /// elements come out in length-lex order of their factorizations.
  static FiniteSemigroup from_generators(const std::vector<PartialTransformation>& gens,
                                         const Limits& lim = {});
  /// Cayley table in row-major order; throws on non-associative input.
  static FiniteSemigroup from_table(const std::vector<u32>& table, std::size_t n,
                                    bool check_assoc = true);
  /// Table semigroup with prescribed generators (element ids of the table).
  static FiniteSemigroup from_table_gens(const std::vector<u32>& table, std::size_t n,
                                         const std::vector<u32>& gens);
  /// Semigroup given by its Cayley graphs over the generator ids `gens`:
  /// right[x*k+i] = x*gens[i], left[x*k+i] = gens[i]*x. No table is stored.
  static FiniteSemigroup from_cayley(std::size_t n, std::vector<u32> gens, std::vector<u32> right,
                                     std::vector<u32> left);

  std::size_t size() const { return n_; }
  u32 mul(u32 a, u32 b) const;
  u32 right(u32 x, std::size_t g) const { return right_[x * gens_.size() + g]; }
  u32 left(u32 x, std::size_t g) const { return left_[x * gens_.size() + g]; }
  const std::vector<u32>& generators() const { return gens_; }
  const std::vector<u32>& word(u32 x) const { return words_[x]; }
  u32 eval_word(const std::vector<u32>& w) const;
  bool has_table() const { return !table_.empty(); }

  bool has_action() const { return ts_.has_value(); }
  const TransformationSemigroup& action() const { return *ts_; }
  std::optional<u32> find(const PartialTransformation& p) const;
  void attach_action(TransformationSemigroup ts) { ts_ = std::move(ts); }

  bool is_idempotent(u32 x) const { return mul(x, x) == x; }
  u32 power(u32 x, std::size_t k) const;
  /// Index m and period r of the monogenic subsemigroup of x.
  std::pair<u32, u32> index_period(u32 x) const;
  /// The unique idempotent power of x.
  u32 omega(u32 x) const;
  std::optional<u32> identity() const;

  /// Exhaustive associativity check.
  bool associative() const;
  /// Full table, materialized on demand.
  std::vector<u32> table() const;

 private:
  friend struct Enumerated enumerate(const std::vector<PartialTransformation>&, const Limits&);
  void build_graphs_from_table();
  void build_words();

  std::size_t n_ = 0;
  std::vector<u32> gens_;
  std::vector<std::vector<u32>> words_;
  std::vector<u32> right_, left_;
  std::vector<u32> table_;
  std::optional<TransformationSemigroup> ts_;
};

/// Result of enumerating a transformation semigroup.
struct Enumerated {
  FiniteSemigroup s;
  TransformationSemigroup ts;
};

Enumerated enumerate(const std::vector<PartialTransformation>& gens, const Limits& lim = {});

struct GreenStructure {
  std::vector<u32> r, l, j, h;  // class of each element
  u32 nr = 0, nl = 0, nj = 0, nh = 0;
  std::vector<std::vector<u32>> r_members, l_members, j_members, h_members;
  std::vector<Bits> j_below;  // j_below[a].test(b) iff J_b <= J_a
  std::vector<char> idem;
  std::vector<u32> idempotents;
  std::vector<char> j_regular;

  bool j_leq(u32 a, u32 b) const { return j_below[b].test(a); }
  bool regular(u32 x) const { return j_regular[j[x]]; }
};

GreenStructure green_structure(const FiniteSemigroup& s);

bool is_aperiodic(const FiniteSemigroup& s);
bool is_aperiodic(const FiniteSemigroup& s, const GreenStructure& g);

/// Finite group given by a multiplication table on local indices 0..n-1.
class GroupTable {
 public:
  GroupTable() = default;
  explicit GroupTable(std::vector<u32> mul, std::size_t n);

  std::size_t order() const { return n_; }
  u32 mul(u32 a, u32 b) const { return mul_[a * n_ + b]; }
  u32 identity() const { return id_; }
  u32 inv(u32 a) const { return inv_[a]; }

  Bits generate(const Bits& seed) const;
  std::vector<Bits> subgroups() const;
  std::vector<Bits> normal_subgroups() const;
  bool is_subgroup(const Bits& h) const;
  bool is_normal(const Bits& h) const;
  Bits trivial() const;
  Bits whole() const;

  static GroupTable cyclic(std::size_t n);
  static GroupTable symmetric(std::size_t n);

 private:
  std::size_t n_ = 0;
  std::vector<u32> mul_;
  std::vector<u32> inv_;
  u32 id_ = 0;
};

/// Maximal subgroup: the H-class of an idempotent, with local numbering.
struct SubgroupHandle {
  u32 e = 0;
  std::vector<u32> members;  // global ids; members[0] == e
  GroupTable group;
  u32 local(u32 global) const;  // UNDEF if not a member
};

SubgroupHandle maximal_subgroup(const FiniteSemigroup& s, const GreenStructure& g, u32 e);
SubgroupHandle maximal_subgroup(const FiniteSemigroup& s, u32 e);

/// Faithful image of the wreath product (P,T) wr (Q,S); states (p,q) -> p + q*|P|.
TransformationSemigroup wreath_product(const TransformationSemigroup& inner,
                                       const TransformationSemigroup& outer,
                                       std::size_t cap = 200000);
/// Same, before faithfulness reduction: number of pairs (f,s).
std::size_t wreath_raw_size(const TransformationSemigroup& inner,
                            const TransformationSemigroup& outer);

/// Semigroup of a closed set of transformations (all elements supplied).
FiniteSemigroup semigroup_of_closed_set(const TransformationSemigroup& ts);

enum class Outcome { Yes, No, Unknown };

struct DivisionResult {
  Outcome outcome = Outcome::Unknown;
  /// Image in T of each generator of S (when Yes).
  std::vector<u32> witness;
  std::uint64_t nodes = 0;
};

/// S divides T: S is a quotient of a subsemigroup of T.
DivisionResult divides(const FiniteSemigroup& s, const FiniteSemigroup& t,
                       std::uint64_t max_nodes = 10000000);

/// Isomorphism search; returns the element map A -> B when one exists.
std::optional<std::vector<u32>> isomorphism(const FiniteSemigroup& a, const FiniteSemigroup& b,
                                            std::uint64_t max_nodes = 10000000);

struct MorphismKind {
  bool aperiodic = false;
  bool lprime = false;
};

/// f maps elements of S to elements of T; must be a surjective morphism.
MorphismKind morphism_kind(const FiniteSemigroup& s, const FiniteSemigroup& t,
                           const std::vector<u32>& f);

/// Union-find partition used for congruences.
struct UnionFind {
  std::vector<u32> p;
  explicit UnionFind(std::size_t n = 0);
  u32 find(u32 x);
  bool unite(u32 a, u32 b);
  std::vector<u32> classes();  // canonical class ids ordered by least member
};

/// Least congruence containing the given pairs, as class ids per element.
std::vector<u32> generated_congruence(const FiniteSemigroup& s,
                                      const std::vector<std::pair<u32, u32>>& pairs);
/// Extends uf in place to the least congruence containing it plus (a,b).
void congruence_close(const FiniteSemigroup& s, UnionFind& uf,
                      std::vector<std::pair<u32, u32>> work);

/// Quotient by a congruence given as class ids; elements ordered by class id.
FiniteSemigroup quotient(const FiniteSemigroup& s, const std::vector<u32>& cls);

/// Subsemigroup generated by a set of elements, returned as a bitset over S.
Bits subsemigroup(const FiniteSemigroup& s, const std::vector<u32>& gens);
Bits subsemigroup(const FiniteSemigroup& s, const Bits& gens);

/// Table semigroup on the members of a subsemigroup, numbered in increasing
/// order of their ids in S. map_out[i] is the id in S of element i.
FiniteSemigroup restrict_to(const FiniteSemigroup& s, const Bits& sub, std::vector<u32>* map_out = nullptr);

}  // namespace kr
