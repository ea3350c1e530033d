#include "kr/catalog.hpp"

#include <cctype>
#include <numeric>

namespace kr::catalog {

PartialTransformation pt(std::initializer_list<int> img) {
  std::vector<u32> v;
  for (int x : img) v.push_back(x < 0 ? UNDEF : static_cast<u32>(x));
  return PartialTransformation(std::move(v));
}

namespace {

PartialTransformation identity(u32 n) {
  std::vector<u32> v(n);
  std::iota(v.begin(), v.end(), 0);
  return PartialTransformation(std::move(v));
}

PartialTransformation cycle(u32 n) {
  std::vector<u32> v(n);
  for (u32 i = 0; i < n; ++i) v[i] = (i + 1) % n;
  return PartialTransformation(std::move(v));
}

PartialTransformation transposition(u32 n) {
  auto p = identity(n);
  std::swap(p.img[0], p.img[1]);
  return p;
}

PartialTransformation empty_map(u32 n) { return PartialTransformation(std::vector<u32>(n, UNDEF)); }

}  // namespace

Gens u() { return {identity(2), pt({0, 0}), pt({1, 1})}; }
Gens flip_flop() { return u(); }

Gens cyclic(u32 n) { return {n == 1 ? identity(1) : cycle(n)}; }

Gens cyclic_zero(u32 n) {
  Gens g = cyclic(n);
  g.push_back(empty_map(n));
  return g;
}

Gens symmetric(u32 n) {
  if (n <= 1) return {identity(1)};
  if (n == 2) return {transposition(2)};
  return {transposition(n), cycle(n)};
}

Gens symmetric_zero(u32 n) {
  Gens g = symmetric(n);
  g.push_back(empty_map(std::max<u32>(n, 1)));
  return g;
}

Gens full_transformation(u32 n) {
  if (n <= 1) return {identity(1)};
  Gens g = symmetric(n);
  auto m = identity(n);
  m.img[1] = 0;
  g.push_back(m);
  return g;
}

Gens symmetric_inverse(u32 n) {
  if (n == 0) throw Error("SIS(0) is not supported");
  Gens g = n == 1 ? Gens{identity(1)} : symmetric(n);
  auto m = identity(n);
  m.img[n - 1] = UNDEF;
  g.push_back(m);
  return g;
}

Gens brandt(const Gens& group, u32 n) {
  if (group.empty()) throw Error("brandt: empty group generator list");
  u32 m = static_cast<u32>(group[0].degree());
  u32 d = m * n;
  Gens out;
  for (auto& g : group) {
    std::vector<u32> v(d, UNDEF);
    for (u32 p = 0; p < m; ++p) v[p] = g[p];
    out.emplace_back(std::move(v));
  }
  for (u32 i = 0; i + 1 < n; ++i) {
    std::vector<u32> up(d, UNDEF), down(d, UNDEF);
    for (u32 p = 0; p < m; ++p) {
      up[i * m + p] = (i + 1) * m + p;
      down[(i + 1) * m + p] = i * m + p;
    }
    out.emplace_back(std::move(up));
    out.emplace_back(std::move(down));
  }
  return out;
}

FiniteSemigroup rectangular_group(u32 a, const GroupTable& g, u32 b) {
  u32 ng = static_cast<u32>(g.order());
  std::size_t n = static_cast<std::size_t>(a) * ng * b;
  auto id = [&](u32 i, u32 x, u32 k) { return (i * ng + x) * b + k; };
  std::vector<u32> t(n * n);
  for (u32 i = 0; i < a; ++i)
    for (u32 x = 0; x < ng; ++x)
      for (u32 k = 0; k < b; ++k)
        for (u32 i2 = 0; i2 < a; ++i2)
          for (u32 y = 0; y < ng; ++y)
            for (u32 k2 = 0; k2 < b; ++k2)
              t[static_cast<std::size_t>(id(i, x, k)) * n + id(i2, y, k2)] = id(i, g.mul(x, y), k2);
  return FiniteSemigroup::from_table(t, n);
}

FiniteSemigroup clifford(const GroupTable& g1, const GroupTable& g0, const std::vector<u32>& phi) {
  u32 n1 = static_cast<u32>(g1.order()), n0 = static_cast<u32>(g0.order());
  std::size_t n = n1 + n0;
  std::vector<u32> t(n * n);
  for (u32 x = 0; x < n; ++x)
    for (u32 y = 0; y < n; ++y) {
      u32 r;
      if (x < n1 && y < n1)
        r = g1.mul(x, y);
      else if (x < n1)
        r = n1 + g0.mul(phi[x], y - n1);
      else if (y < n1)
        r = n1 + g0.mul(x - n1, phi[y]);
      else
        r = n1 + g0.mul(x - n1, y - n1);
      t[static_cast<std::size_t>(x) * n + y] = r;
    }
  return FiniteSemigroup::from_table(t, n);
}

FiniteSemigroup group_semigroup(const GroupTable& g) {
  std::size_t n = g.order();
  std::vector<u32> t(n * n);
  for (u32 a = 0; a < n; ++a)
    for (u32 b = 0; b < n; ++b) t[a * n + b] = g.mul(a, b);
  return FiniteSemigroup::from_table(t, n);
}

Gens builtin(const std::string& name) {
  // Grammar: U | flipflop | Z<n>[^0] | S<n>[^0] | T<n> | SIS<n> | B<n>
  std::string head, digits, tail;
  std::size_t k = 0;
  while (k < name.size() && std::isalpha(static_cast<unsigned char>(name[k]))) head += name[k++];
  while (k < name.size() && std::isdigit(static_cast<unsigned char>(name[k]))) digits += name[k++];
  tail = name.substr(k);
  if (name == "U") return u();
  if (name == "flipflop") return flip_flop();
  if (digits.empty() || (tail != "" && tail != "^0")) throw Error("unknown builtin '" + name + "'");
  u32 n = static_cast<u32>(std::stoul(digits));
  bool zero = tail == "^0";
  if (head == "Z") return zero ? cyclic_zero(n) : cyclic(n);
  if (head == "S") return zero ? symmetric_zero(n) : symmetric(n);
  if (!zero && head == "T") return full_transformation(n);
  if (!zero && head == "SIS") return symmetric_inverse(n);
  if (!zero && head == "B") return brandt(cyclic(2), n);
  throw Error("unknown builtin '" + name + "'");
}

}  // namespace kr::catalog
