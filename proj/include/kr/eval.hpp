#pragma once

#include <map>
#include <memory>
#include <tuple>
#include <optional>
#include <string>
#include <vector>

#include "kr/closure.hpp"
#include "kr/structure.hpp"

namespace kr {

/// Term over the generator symbols z0, z1, ...: identity, a generator, a
/// product, or (t)^{w+*}.
struct Wff {
  enum class Kind { Identity, Generator, Product, OmegaStar };
  Kind kind = Kind::Identity;
  u32 gen = 0;
  std::shared_ptr<const Wff> a, b;

  std::string str() const;
};
using WffPtr = std::shared_ptr<const Wff>;

WffPtr wff_identity();
WffPtr wff_generator(u32 i);
WffPtr wff_product(WffPtr a, WffPtr b);
WffPtr wff_omega_star(WffPtr a);

/// Value of a term given the generator operators.
ClosureOperator evaluate(const Wff& t, const std::vector<ClosureOperator>& gens, const LatticeIndex& lat);

struct EvalConfig {
  std::size_t max_monoid = 20000;   // operators in one F_k
  std::size_t max_states = 100000;  // states in one Eval_k
  u32 sp_cap = 4;                   // SP cross-check only when |G x B| <= sp_cap
  u32 max_k = 3;
  std::uint64_t max_nodes = 2000000;  // isomorphism checks in the memo
};

/// Running totals, used by the acceptance suite.
struct EvalStats {
  std::size_t builds = 0;
  std::size_t sp_checks = 0;
  std::size_t sp_disagreements = 0;
  std::size_t sp_skipped = 0;
};

struct EvalTS {
  LatticeKind kind = LatticeKind::Rh;
  u32 k = 0;
  std::shared_ptr<const LatticeIndex> lattice;
  std::vector<ClosureOperator> generators;  // one per generator of the GM semigroup
  std::vector<ClosureOperator> monoid;      // F_k, identity first
  std::vector<WffPtr> terms;                // term of each monoid element
  std::size_t omega_star_count = 0;         // operators added by the w+* rule
  Bits dom;                                 // common domain (the vacuum's diagonal)
  u32 start = 0;
  std::vector<u32> states;                  // lattice indices, start first
  std::vector<u32> parent_state;            // BFS tree over states
  std::vector<u32> via;                     // monoid element reaching the state
  std::optional<u32> contradiction;         // position in states

  /// Terms applied from the start state to reach states[i].
  std::vector<WffPtr> path(u32 i) const;
  std::string witness(u32 i) const;
};

/// Start state: ({(1,b0)}, singleton) in SP, G x {b0} with singletons in Rh.
u32 start_state(const LatticeIndex& lat);

/// Replays a path of terms from the start state.
u32 replay(const EvalTS& e, const std::vector<WffPtr>& path);

struct Verdict {
  u32 lower = 0, upper = 0;
  std::string lower_source, upper_source;
  std::optional<u32> value;
  bool budget_exceeded = false;
  std::vector<std::string> notes;
};

struct Bounds {
  Bound sl, theta;
  u32 depth = 0;
  u32 lower = 0, upper = 0;
};

Bounds complexity_bounds(const FiniteSemigroup& s);

class Evaluator {
 public:
  explicit Evaluator(EvalConfig cfg = {}) : cfg_(cfg) {}

  const EvalConfig& config() const { return cfg_; }
  const EvalStats& stats() const { return stats_; }

  /// Eval_k over the given lattice kind. Throws BudgetExceeded on caps.
  EvalTS build(const GMSemigroup& gm, u32 k, LatticeKind kind);
  /// Rh build plus the SP cross-check when small enough; throws on disagreement.
  bool has_contradiction(const GMSemigroup& gm, u32 k, EvalTS* out = nullptr);

  /// N_J^{(k)} as a subset of the local numbering of G_J.
  Bits n_j_k(const FiniteSemigroup& s, const GreenStructure& g, u32 j, u32 k);

  /// Exact complexity (throws BudgetExceeded when a cap is hit).
  u32 complexity(const FiniteSemigroup& s);
  u32 gm_complexity(const GMSemigroup& gm);

  /// Complexity with bounds; degrades to bounds on budget exhaustion.
  /// use_bounds: accept the answer when the bounds already meet.
  Verdict decide(const FiniteSemigroup& s, bool use_bounds = true);

 private:
  EvalConfig cfg_;
  EvalStats stats_;
  struct MemoEntry {
    FiniteSemigroup s;
    u32 value;
  };
  std::map<std::vector<std::size_t>, std::vector<MemoEntry>> memo_;
  std::map<std::string, bool> contra_memo_;  // keyed by action text and level
  u32 depth_ = 0;

  void build_monoid(EvalTS& e, u32 k);
  void build_states(EvalTS& e);
};

/// Isomorphism-invariant fingerprint used to key memo tables.
std::vector<std::size_t> signature(const FiniteSemigroup& s);

}  // namespace kr
