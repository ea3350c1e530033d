#pragma once

#include <cstdint>
#include <unordered_map>
#include <vector>

#include "kr/lattices.hpp"

namespace kr {

/// Square Boolean matrix with bitset rows.
class BoolMatrix {
 public:
  BoolMatrix() = default;
  explicit BoolMatrix(std::size_t n) : n_(n), w_((n + 63) / 64), bits_(n * w_, 0) {}
  static BoolMatrix identity(std::size_t n);

  std::size_t size() const { return n_; }
  std::size_t words() const { return w_; }
  bool get(std::size_t i, std::size_t j) const { return (row(i)[j >> 6] >> (j & 63)) & 1u; }
  void set(std::size_t i, std::size_t j, bool v = true) {
    auto m = std::uint64_t{1} << (j & 63);
    if (v) row(i)[j >> 6] |= m; else row(i)[j >> 6] &= ~m;
  }
  const std::uint64_t* row(std::size_t i) const { return bits_.data() + i * w_; }
  std::uint64_t* row(std::size_t i) { return bits_.data() + i * w_; }
  bool row_any(std::size_t i) const;
  std::size_t count() const;
  std::size_t hash() const;

  friend bool operator==(const BoolMatrix& a, const BoolMatrix& b) { return a.n_ == b.n_ && a.bits_ == b.bits_; }
  /// Entrywise order.
  bool subset_of(const BoolMatrix& o) const;

 private:
  std::size_t n_ = 0, w_ = 0;
  std::vector<std::uint64_t> bits_;
};

struct BoolMatrixHash {
  std::size_t operator()(const BoolMatrix& m) const { return m.hash(); }
};

/// Relational product a;b (a first). Serial reference kernel.
BoolMatrix multiply_serial(const BoolMatrix& a, const BoolMatrix& b);
/// Same product, rows distributed over OpenMP threads.
BoolMatrix multiply_parallel(const BoolMatrix& a, const BoolMatrix& b);
/// Picks a kernel by size.
BoolMatrix multiply(const BoolMatrix& a, const BoolMatrix& b);

enum class LatticeKind { SP, Rh };

/// An enumerated finite lattice: SP(G x B) or Rh_B(G). Rh elements are held
/// through their cross-section images; the contradiction is the last index.
class LatticeIndex {
 public:
  static LatticeIndex sp(const GBUniverse& u);
  static LatticeIndex rh(const GBUniverse& u);

  LatticeKind kind() const { return kind_; }
  const GBUniverse& universe() const { return u_; }
  std::size_t size() const { return n_; }
  u32 top() const { return top_; }
  u32 bottom() const { return bottom_; }
  /// SP element, or cross-section image for Rh (not valid for the contradiction).
  const SetPartitionElement& element(u32 i) const { return elems_[i]; }
  RhodesElement rhodes(u32 i) const;
  bool is_contradiction(u32 i) const;
  bool leq(u32 i, u32 j) const { return order_.get(i, j); }
  const BoolMatrix& order() const { return order_; }
  u32 meet(u32 i, u32 j) const;
  u32 join(u32 i, u32 j) const;
  /// Index of an SP element (for Rh: an invariant cross-section); UNDEF if absent.
  u32 find(const SetPartitionElement& x) const;
  std::string name(u32 i) const;

 private:
  LatticeKind kind_ = LatticeKind::SP;
  GBUniverse u_;
  std::size_t n_ = 0;
  u32 top_ = 0, bottom_ = 0;
  std::vector<SetPartitionElement> elems_;
  std::unordered_map<SetPartitionElement, u32, SPHash> index_;
  BoolMatrix order_;
  void finish();
};

/// A closure operator on L x L, identified with its stable-pair relation.
using ClosureOperator = BoolMatrix;

/// Stable pairs (l1,l2) of a generator z: every point of Y1 defined under z
/// lands in Y2, and for defined points y ~1 y' iff yz ~2 y'z. In Rh a row
/// reaches the contradiction when some stable SP target is not a
/// cross-section; the contradiction itself only reaches itself.
ClosureOperator operator_of_generator(const PartialTransformation& z, const LatticeIndex& l);
/// The diagonal, unit of the operator monoid. The operator of the identity
/// map is the larger restriction relation (l2 restricted to Y1 is l1).
ClosureOperator identity_operator(const LatticeIndex& l);

ClosureOperator compose(const ClosureOperator& f, const ClosureOperator& g);
Bits domain(const ClosureOperator& f);
ClosureOperator backflow(const ClosureOperator& f);
ClosureOperator star(const ClosureOperator& f);
ClosureOperator omega(const ClosureOperator& f);
ClosureOperator omega_plus_star(const ClosureOperator& f);
/// Join of the back-flows: the diagonal on the common domain of all operators.
ClosureOperator vacuum(const std::vector<ClosureOperator>& monoid);

/// Least l'' in dom with (l, l'') stable; UNDEF when there is none. Throws if
/// the candidates have no least element.
u32 act(const ClosureOperator& f, u32 l, const LatticeIndex& lat, const Bits& dom);

/// Closure of (l1,l2): meet of the stable pairs above it.
std::pair<u32, u32> closure_map(const ClosureOperator& f, const LatticeIndex& lat, u32 l1, u32 l2);
bool is_meet_closed(const ClosureOperator& f, const LatticeIndex& lat);

}  // namespace kr
