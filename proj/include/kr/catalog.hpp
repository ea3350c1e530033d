#pragma once

#include <string>
#include <vector>

#include "kr/core.hpp"

namespace kr::catalog {

using Gens = std::vector<PartialTransformation>;

PartialTransformation pt(std::initializer_list<int> img);  // -1 = undefined

Gens u();                        // two right zeros and an identity
Gens cyclic(u32 n);              // Z_n acting regularly
Gens cyclic_zero(u32 n);         // Z_n with an adjoined zero
Gens symmetric(u32 n);           // S_n
Gens symmetric_zero(u32 n);      // S_n with an adjoined zero
Gens full_transformation(u32 n); // T_n
Gens symmetric_inverse(u32 n);   // SIS(n)
/// Brandt semigroup B(G, n) for G given by permutation generators on m points.
Gens brandt(const Gens& group, u32 n);
/// Flip-flop monoid: identity plus two right zeros (same as U).
Gens flip_flop();

/// Rectangular group A x G x B as a Cayley table semigroup.
FiniteSemigroup rectangular_group(u32 a, const GroupTable& g, u32 b);
/// Two-level Clifford semigroup G1 > G0 with connecting morphism phi: G1 -> G0.
FiniteSemigroup clifford(const GroupTable& g1, const GroupTable& g0, const std::vector<u32>& phi);
/// Group as a table semigroup.
FiniteSemigroup group_semigroup(const GroupTable& g);

/// Named builtin: U, Z<n>, Z<n>^0, S<n>, S<n>^0, T<n>, SIS<n>, B<n>, flipflop.
Gens builtin(const std::string& name);

}  // namespace kr::catalog
