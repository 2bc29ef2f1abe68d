#pragma once

// Root combinatorics of the unitriangular group UT(n, F_q).
//
// A root is a matrix position (i, j), 1 <= i < j <= n, carrying the matrix
// unit E_ij.  Partial addition (i,j) + (j,s) = (i,s) mirrors E_ij E_js =
// E_is.  The anti-diagonal i + j = n + 1 splits the roots into three zones:
//
//   R+ : i + j < n + 1        ("over" the anti-diagonal)
//   R0 : i + j = n + 1
//   R- : i + j > n + 1
//
// Two families of simple roots of R+ drive everything downstream: the
// adjacent simple roots Pi0 = {(i, i+1) : 1 <= i <= k} and the mirror simple
// roots Pi = {(i, n-i) : 1 <= i <= k}, where k = floor((n-1)/2).  For each
// subset S of Pi we build the ladder sets L_S (zero/zerozero/plus/minus)
// that determine the canonical linear forms and their polarization
// subalgebra.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "utgg/exactnum.hpp"

namespace utgg {

struct Root {
  int i = 0;
  int j = 0;
  friend bool operator==(const Root&, const Root&) = default;
};

// Global total order on roots: later row first loses — a root is larger when
// it lies in a later row, or in the same row further left (smaller column).
// Ascending order therefore runs row 1 right-to-left, then row 2, ...
inline bool root_less(const Root& a, const Root& b) {
  if (a.i != b.i) return a.i < b.i;
  return a.j > b.j;
}
inline bool operator<(const Root& a, const Root& b) { return root_less(a, b); }

inline std::string root_str(const Root& r) {
  return "(" + std::to_string(r.i) + "," + std::to_string(r.j) + ")";
}

// Partial addition: defined exactly when the first root's column equals the
// second root's row.
inline std::optional<Root> root_sum(const Root& a, const Root& b) {
  if (a.j != b.i) return std::nullopt;
  return Root{a.i, b.j};
}

// ---------------------------------------------------------------------------
// RootTables — all root data for a fixed n, with deterministic (ascending)
// orderings everywhere.
// ---------------------------------------------------------------------------
struct RootTables {
  int n = 0;
  int k = 0;      // floor((n-1)/2)
  int eps = 0;    // 1 for even n, 0 for odd n
  int N = 0;      // n(n-1)/2, total number of roots
  int r_plus = 0; // |R+|
  int r_zero = 0; // |R0| = k + eps

  std::vector<Root> roots;   // ascending global order; position = root id
  std::vector<Root> r_pos;   // R+, ascending
  std::vector<Root> r_mid;   // R0, ascending
  std::vector<Root> r_neg;   // R-, ascending
  std::vector<Root> pi0;     // adjacent simple roots, ascending
  std::vector<Root> pi;      // mirror simple roots, ascending

  int index_of(const Root& r) const {
    UTGG_REQUIRE(r.i >= 1 && r.i < r.j && r.j <= n, "index_of: not a root");
    return idx_[static_cast<size_t>(r.i * (n + 1) + r.j)];
  }

  // +1 / 0 / -1 for R+ / R0 / R-.
  int zone(const Root& r) const {
    int s = r.i + r.j;
    if (s < n + 1) return +1;
    if (s == n + 1) return 0;
    return -1;
  }

  bool in_pi(const Root& r) const {
    return r.i >= 1 && r.i <= k && r.j == n - r.i;
  }
  bool in_pi0(const Root& r) const {
    return r.i >= 1 && r.i <= k && r.j == r.i + 1;
  }

  std::vector<int> idx_;  // (i*(n+1)+j) -> root id
};

inline RootTables build_tables(int n) {
  UTGG_REQUIRE(n > 2, "build_tables: n must be at least 3");
  UTGG_REQUIRE(n <= 16, "build_tables: n out of supported range");
  RootTables t;
  t.n = n;
  t.k = (n - 1) / 2;
  t.eps = (n % 2 == 0) ? 1 : 0;
  t.N = n * (n - 1) / 2;
  t.idx_.assign(static_cast<size_t>((n + 1) * (n + 1)), -1);
  for (int i = 1; i <= n; ++i)
    for (int j = n; j > i; --j) {  // ascending global order
      Root r{i, j};
      t.idx_[static_cast<size_t>(i * (n + 1) + j)] =
          static_cast<int>(t.roots.size());
      t.roots.push_back(r);
      switch (t.zone(r)) {
        case +1: t.r_pos.push_back(r); break;
        case 0: t.r_mid.push_back(r); break;
        default: t.r_neg.push_back(r); break;
      }
    }
  t.r_plus = static_cast<int>(t.r_pos.size());
  t.r_zero = static_cast<int>(t.r_mid.size());
  for (int i = 1; i <= t.k; ++i) t.pi0.push_back(Root{i, i + 1});
  for (int i = t.k; i >= 1; --i) t.pi.push_back(Root{i, n - i});
  std::sort(t.pi.begin(), t.pi.end(), root_less);
  std::sort(t.pi0.begin(), t.pi0.end(), root_less);
  UTGG_REQUIRE(t.r_zero == t.k + t.eps, "build_tables: |R0| != k + eps");
  UTGG_REQUIRE(static_cast<int>(t.r_neg.size()) == t.r_plus,
               "build_tables: |R-| != |R+|");
  return t;
}

// ---------------------------------------------------------------------------
// SubsetS — a subset of the mirror simple roots Pi, kept ascending.
// ---------------------------------------------------------------------------
struct SubsetS {
  std::vector<Root> roots;  // ascending, subset of Pi

  bool contains(const Root& r) const {
    return std::find(roots.begin(), roots.end(), r) != roots.end();
  }
  int size() const { return static_cast<int>(roots.size()); }

  std::string str() const {
    std::string s = "{";
    for (size_t u = 0; u < roots.size(); ++u)
      s += (u ? "," : "") + root_str(roots[u]);
    return s + "}";
  }
};

inline SubsetS subset_from_mask(const RootTables& t, unsigned mask) {
  SubsetS s;
  for (size_t b = 0; b < t.pi.size(); ++b)
    if (mask & (1u << b)) s.roots.push_back(t.pi[b]);
  return s;
}

// All subsets of Pi in deterministic (mask-ascending) order.
inline std::vector<SubsetS> all_subsets(const RootTables& t) {
  std::vector<SubsetS> out;
  for (unsigned m = 0; m < (1u << t.pi.size()); ++m)
    out.push_back(subset_from_mask(t, m));
  return out;
}

// ---------------------------------------------------------------------------
// LSets — the ladder sets attached to S.
//
// Every row i = 1..k+eps receives exactly one "far" root (i, j): the minimal
// column j >= n+1-i whose column contains no root of S and such that every
// mirror root strongly over and strongly left of (i, j) (rows m with
// n-j < m < i) belongs to S.  The far root lands in
//   Lzero      if row i has no S-root (i <= k),
//   Lplus      if row i has an S-root (then (n-i, j) joins Lminus),
//   Lzerozero  if i = k+1 (even n only).
// Cardinalities: |Lzero| = k - |S|, |Lplus| = |Lminus| = |S|,
// |Lzerozero| = eps.
// ---------------------------------------------------------------------------
struct LSets {
  std::vector<Root> zero;      // L^0
  std::vector<Root> zerozero;  // L^00
  std::vector<Root> plus;      // L^+
  std::vector<Root> minus;     // L^-

  // L^0 | L^00 | L^-, ascending: the value domain of an AVector.
  std::vector<Root> a_domain;
  // All four sets merged, ascending.
  std::vector<Root> all;

  bool in_zero(const Root& r) const {
    return std::find(zero.begin(), zero.end(), r) != zero.end();
  }
  bool in_plus(const Root& r) const {
    return std::find(plus.begin(), plus.end(), r) != plus.end();
  }
  bool in_minus(const Root& r) const {
    return std::find(minus.begin(), minus.end(), r) != minus.end();
  }
  bool in_zerozero(const Root& r) const {
    return std::find(zerozero.begin(), zerozero.end(), r) != zerozero.end();
  }
};

inline LSets compute_lsets(const RootTables& t, const SubsetS& S) {
  LSets ls;
  auto s_in_column = [&](int j) {
    for (const Root& s : S.roots)
      if (s.j == j) return true;
    return false;
  };
  auto pi_interval_in_s = [&](int i, int j) {
    // every mirror root strongly over and strongly left: n-j < m < i
    for (int m = t.n - j + 1; m < i; ++m) {
      if (m < 1) continue;
      if (!S.contains(Root{m, t.n - m})) return false;
    }
    return true;
  };
  for (int i = 1; i <= t.k + t.eps; ++i) {
    int found = -1;
    for (int j = t.n + 1 - i; j <= t.n; ++j) {
      if (j <= i) continue;
      if (s_in_column(j)) continue;
      if (!pi_interval_in_s(i, j)) continue;
      found = j;
      break;
    }
    UTGG_REQUIRE(found > 0, "compute_lsets: no far root for row " +
                                std::to_string(i));
    Root far{i, found};
    if (i == t.k + 1) {
      ls.zerozero.push_back(far);
    } else if (S.contains(Root{i, t.n - i})) {
      ls.plus.push_back(far);
      ls.minus.push_back(Root{t.n - i, found});
    } else {
      ls.zero.push_back(far);
    }
  }
  for (auto* v : {&ls.zero, &ls.zerozero, &ls.plus, &ls.minus})
    std::sort(v->begin(), v->end(), root_less);

  const int s = S.size();
  UTGG_REQUIRE(static_cast<int>(ls.zero.size()) == t.k - s,
               "compute_lsets: |L0| != k - s");
  UTGG_REQUIRE(static_cast<int>(ls.plus.size()) == s &&
                   static_cast<int>(ls.minus.size()) == s,
               "compute_lsets: |L+-| != s");
  UTGG_REQUIRE(static_cast<int>(ls.zerozero.size()) == t.eps,
               "compute_lsets: |L00| != eps");

  for (auto* v : {&ls.zero, &ls.zerozero, &ls.minus})
    ls.a_domain.insert(ls.a_domain.end(), v->begin(), v->end());
  std::sort(ls.a_domain.begin(), ls.a_domain.end(), root_less);
  for (auto* v : {&ls.zero, &ls.zerozero, &ls.plus, &ls.minus})
    ls.all.insert(ls.all.end(), v->begin(), v->end());
  std::sort(ls.all.begin(), ls.all.end(), root_less);
  return ls;
}

// The polarization subalgebra support R_S = R+ | L_S, ascending.
inline std::vector<Root> support_R_S(const RootTables& t, const LSets& ls) {
  std::vector<Root> out = t.r_pos;
  out.insert(out.end(), ls.all.begin(), ls.all.end());
  std::sort(out.begin(), out.end(), root_less);
  return out;
}

// ---------------------------------------------------------------------------
// Companions.
// ---------------------------------------------------------------------------

// For alpha in R+ \ S: the unique beta outside R_S with alpha + beta (in
// either composition order) landing in S | L^0.  Uniqueness is established
// by exhaustive scan.
inline Root companion_beta(const RootTables& t, const SubsetS& S,
                           const LSets& ls, const Root& alpha) {
  UTGG_REQUIRE(t.zone(alpha) == +1 && !S.contains(alpha),
               "companion_beta: alpha must lie in R+ \\ S");
  std::vector<Root> rs = support_R_S(t, ls);
  auto in_rs = [&](const Root& r) {
    return std::binary_search(rs.begin(), rs.end(), r, root_less);
  };
  auto in_target = [&](const Root& r) {
    return S.contains(r) || ls.in_zero(r);
  };
  std::optional<Root> found;
  for (const Root& beta : t.roots) {
    if (in_rs(beta)) continue;
    auto s1 = root_sum(alpha, beta);
    auto s2 = root_sum(beta, alpha);
    bool hit = (s1 && in_target(*s1)) || (s2 && in_target(*s2));
    if (!hit) continue;
    UTGG_REQUIRE(!found, "companion_beta: companion not unique for " +
                             root_str(alpha));
    found = beta;
  }
  UTGG_REQUIRE(found.has_value(),
               "companion_beta: no companion for " + root_str(alpha));
  return *found;
}

// For alpha = (i, i+1) in Pi0 \ Pi: beta = (i+1, n-i) in R0 and gamma =
// (i, n-i) in Pi \ Pi0 with alpha + beta = gamma.  These drive the
// commutation identity x_a(s) x_b(t) = x_b(t) x_a(s) x_g(st) used to show
// the induced module depends on the mirror values only.
struct AdjacentCompanions {
  Root beta;
  Root gamma;
};
inline AdjacentCompanions adjacent_companions(const RootTables& t,
                                              const Root& alpha) {
  UTGG_REQUIRE(t.in_pi0(alpha) && !t.in_pi(alpha),
               "adjacent_companions: alpha must lie in Pi0 \\ Pi");
  AdjacentCompanions c{Root{alpha.i + 1, t.n - alpha.i},
                       Root{alpha.i, t.n - alpha.i}};
  UTGG_REQUIRE(t.zone(c.beta) == 0, "adjacent_companions: beta not in R0");
  auto s = root_sum(alpha, c.beta);
  UTGG_REQUIRE(s && *s == c.gamma, "adjacent_companions: sum mismatch");
  return c;
}

// For alpha = (i, n-i) in Pi \ S: gamma(alpha) = the L^0 root (i, j*) in the
// same row (strongly right of alpha) and beta(alpha) = (n-i, j*) in R- with
// alpha + beta = gamma.  These produce the weight vectors that embed each
// component into the induced module.
struct WeightCompanions {
  Root gamma;
  Root beta;
};
inline WeightCompanions weight_companions(const RootTables& t,
                                          const SubsetS& S, const LSets& ls,
                                          const Root& alpha) {
  UTGG_REQUIRE(t.in_pi(alpha) && !S.contains(alpha),
               "weight_companions: alpha must lie in Pi \\ S");
  std::optional<Root> gamma;
  for (const Root& g : ls.zero)
    if (g.i == alpha.i) {
      UTGG_REQUIRE(!gamma, "weight_companions: L^0 row not unique");
      gamma = g;
    }
  UTGG_REQUIRE(gamma.has_value(), "weight_companions: no L^0 root in row " +
                                      std::to_string(alpha.i));
  UTGG_REQUIRE(gamma->j > alpha.j, "weight_companions: gamma not right of alpha");
  WeightCompanions w{*gamma, Root{t.n - alpha.i, gamma->j}};
  UTGG_REQUIRE(t.zone(w.beta) == -1, "weight_companions: beta not in R-");
  auto s = root_sum(alpha, w.beta);
  UTGG_REQUIRE(s && *s == w.gamma, "weight_companions: sum mismatch");
  return w;
}

// ---------------------------------------------------------------------------
// AVector — the free parameters of a canonical form: values on
// L^0 | L^00 | L^-, nonzero on L^0.
// ---------------------------------------------------------------------------
struct AVector {
  std::vector<Root> domain;  // ascending (LSets::a_domain)
  std::vector<int> vals;     // aligned with domain, in [0, q)

  int value_at(const Root& r) const {
    for (size_t u = 0; u < domain.size(); ++u)
      if (domain[u] == r) return vals[u];
    fail("AVector: root outside domain");
  }

  std::string str() const {
    std::string s = "[";
    for (size_t u = 0; u < domain.size(); ++u)
      s += (u ? ";" : "") + root_str(domain[u]) + "=" + std::to_string(vals[u]);
    return s + "]";
  }
};

inline void validate_a_vector(const LSets& ls, const AVector& a, int q) {
  UTGG_REQUIRE(a.domain == ls.a_domain, "AVector: wrong domain");
  for (size_t u = 0; u < a.domain.size(); ++u) {
    UTGG_REQUIRE(a.vals[u] >= 0 && a.vals[u] < q, "AVector: value out of range");
    if (ls.in_zero(a.domain[u]))
      UTGG_REQUIRE(a.vals[u] != 0, "AVector: zero value on an L^0 root");
  }
}

// All a-vectors for (S, q) in lexicographic order over the ascending domain
// (first root most significant; values ascending, L^0 roots starting at 1).
inline std::vector<AVector> enumerate_a_vectors(const LSets& ls, int q) {
  std::vector<AVector> out;
  const auto& dom = ls.a_domain;
  std::vector<int> lo(dom.size()), cur(dom.size());
  for (size_t u = 0; u < dom.size(); ++u) {
    lo[u] = ls.in_zero(dom[u]) ? 1 : 0;
    cur[u] = lo[u];
  }
  if (dom.empty()) {
    out.push_back(AVector{dom, {}});
    return out;
  }
  while (true) {
    out.push_back(AVector{dom, cur});
    int u = static_cast<int>(dom.size()) - 1;
    while (u >= 0) {
      if (++cur[static_cast<size_t>(u)] < q) break;
      cur[static_cast<size_t>(u)] = lo[static_cast<size_t>(u)];
      --u;
    }
    if (u < 0) break;
  }
  return out;
}

// ---------------------------------------------------------------------------
// BVector — parameters of a Hecke double-coset representative: b_1..b_{k+eps}
// with b_i nonzero whenever (i, n-i) in S.
// ---------------------------------------------------------------------------
struct BVector {
  std::vector<int> b;  // length k + eps, entries in [0, q)

  std::string str() const {
    std::string s = "(";
    for (size_t u = 0; u < b.size(); ++u)
      s += (u ? "," : "") + std::to_string(b[u]);
    return s + ")";
  }
};

inline std::vector<BVector> enumerate_b_vectors(const RootTables& t,
                                                const SubsetS& S, int q) {
  std::vector<int> lo(static_cast<size_t>(t.k + t.eps), 0);
  for (int i = 1; i <= t.k; ++i)
    if (S.contains(Root{i, t.n - i})) lo[static_cast<size_t>(i - 1)] = 1;
  std::vector<BVector> out;
  std::vector<int> cur = lo;
  if (cur.empty()) {
    out.push_back(BVector{cur});
    return out;
  }
  while (true) {
    out.push_back(BVector{cur});
    int u = static_cast<int>(cur.size()) - 1;
    while (u >= 0) {
      if (++cur[static_cast<size_t>(u)] < q) break;
      cur[static_cast<size_t>(u)] = lo[static_cast<size_t>(u)];
      --u;
    }
    if (u < 0) break;
  }
  return out;
}

}  // namespace utgg
