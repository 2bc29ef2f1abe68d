#pragma once

// Endomorphism (Hecke) algebra machinery for the induced module: sparse
// group-algebra elements over Z[zeta_p], the projector-like sums P_xi, the
// double-coset compatibility criterion, the explicit X_{S,b} coset
// representatives, basis construction with independent verification, exact
// commutativity checks, and structure-constant extraction.

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "utgg/chars.hpp"
#include "utgg/exactnum.hpp"
#include "utgg/roots.hpp"
#include "utgg/unitri.hpp"

namespace utgg {

// ---------------------------------------------------------------------------
// Sparse group-algebra elements, indexed by packed group element.
// ---------------------------------------------------------------------------
struct GroupAlgebraElem {
  int p = 0;                            // cyclotomic order
  std::map<uint64_t, CycInt> support;   // no zero coefficients stored

  bool is_zero() const { return support.empty(); }

  void add_term(uint64_t g, const CycInt& c) {
    if (c.is_zero()) return;
    auto it = support.find(g);
    if (it == support.end()) {
      support.emplace(g, c);
    } else {
      it->second += c;
      if (it->second.is_zero()) support.erase(it);
    }
  }

  friend bool operator==(const GroupAlgebraElem& a, const GroupAlgebraElem& b) {
    return a.p == b.p && a.support == b.support;
  }
};

inline GroupAlgebraElem delta_elem(int p, uint64_t g) {
  GroupAlgebraElem e;
  e.p = p;
  e.support.emplace(g, CycInt::from_int(p, 1));
  return e;
}

inline GroupAlgebraElem scale_elem(const GroupAlgebraElem& a, const CycInt& c) {
  GroupAlgebraElem r;
  r.p = a.p;
  if (c.is_zero()) return r;
  for (const auto& [g, x] : a.support) r.add_term(g, x * c);
  return r;
}

// P_xi = sum over the domain subgroup of xi(h^{-1}) h.
inline GroupAlgebraElem p_xi(const GroupContext& c, const GroupFunction& xi) {
  UTGG_REQUIRE(!xi.full(), "p_xi: xi must live on a proper subgroup mask");
  GroupAlgebraElem r;
  r.p = xi.p;
  for (uint64_t h : xi.mask) {
    uint64_t hinv = elem_index(c, elem_at(c, h).inv());
    r.add_term(h, xi.at(hinv));
  }
  UTGG_REQUIRE(r.support.size() == xi.mask.size(),
               "p_xi: support must be all of the subgroup");
  return r;
}

// Group-algebra convolution: (u*v)(g) = sum over xy=g of u(x) v(y).
inline GroupAlgebraElem convolve(const GroupContext& c,
                                 const GroupAlgebraElem& u,
                                 const GroupAlgebraElem& v) {
  UTGG_REQUIRE(u.p == v.p, "convolve: mixed cyclotomic orders");
  GroupAlgebraElem r;
  r.p = u.p;
  for (const auto& [gu, cu] : u.support) {
    GrpElem eu = elem_at(c, gu);
    for (const auto& [gv, cv] : v.support)
      r.add_term(elem_index(c, eu * elem_at(c, gv)), cu * cv);
  }
  return r;
}

// P_xi * delta_x * P_xi as one |H|^2 double sum.
inline GroupAlgebraElem sandwich(const GroupContext& c, const GroupFunction& xi,
                                 uint64_t x) {
  GroupAlgebraElem r;
  r.p = xi.p;
  GrpElem ex = elem_at(c, x);
  std::vector<CycInt> inv_vals;
  std::vector<GrpElem> elems;
  inv_vals.reserve(xi.mask.size());
  for (uint64_t h : xi.mask) {
    elems.push_back(elem_at(c, h));
    inv_vals.push_back(xi.at(elem_index(c, elems.back().inv())));
  }
  for (size_t a = 0; a < elems.size(); ++a) {
    GrpElem left = elems[a] * ex;
    for (size_t b = 0; b < elems.size(); ++b)
      r.add_term(elem_index(c, left * elems[b]), inv_vals[a] * inv_vals[b]);
  }
  return r;
}

// ---------------------------------------------------------------------------
// Compatibility criterion: xi and its x-translate agree on xHx^{-1} & H.
// ---------------------------------------------------------------------------
inline bool xi_compatible(const GroupContext& c, const GroupFunction& xi,
                          uint64_t x) {
  GrpElem ex = elem_at(c, x);
  GrpElem exi = ex.inv();
  for (uint64_t h : xi.mask) {
    GrpElem y = ex * elem_at(c, h) * exi;
    uint64_t yi = elem_index(c, y);
    if (std::binary_search(xi.mask.begin(), xi.mask.end(), yi)) {
      if (!(xi.at(yi) == xi.at(h))) return false;
    }
  }
  return true;
}

// Canonical double-coset label: the least packed index in H x H.
inline uint64_t double_coset_id(const GroupContext& c,
                                const std::vector<uint64_t>& H, uint64_t x) {
  uint64_t best = UINT64_MAX;
  GrpElem ex = elem_at(c, x);
  for (uint64_t h1 : H) {
    GrpElem left = elem_at(c, h1) * ex;
    for (uint64_t h2 : H)
      best = std::min(best, elem_index(c, left * elem_at(c, h2)));
  }
  return best;
}

// ---------------------------------------------------------------------------
// The explicit coset representatives X_{S,b}.
// ---------------------------------------------------------------------------
inline void validate_b_vector(const RootTables& t, const SubsetS& S,
                              const BVector& b, int q) {
  UTGG_REQUIRE(static_cast<int>(b.b.size()) == t.k + t.eps,
               "BVector: wrong length");
  for (size_t u = 0; u < b.b.size(); ++u) {
    UTGG_REQUIRE(b.b[u] >= 0 && b.b[u] < q, "BVector: value out of range");
    int i = static_cast<int>(u) + 1;
    if (i <= t.k && S.contains(Root{i, t.n - i}))
      UTGG_REQUIRE(b.b[u] != 0, "BVector: zero value on a mirror root of S");
  }
}

// Fill rule, two passes.  Pass 1 completes the last column: rows 1..k+eps
// take b directly, and each mirror row n-i copies b_i when (i,n-i) is in S
// and stays zero otherwise.  Pass 2 fills the mirror column n-i of every
// row i outside S with the products x_{j,n-i} = b_i * x_{j,n} read off the
// finished last column (columns of rows inside S stay zero).  Reading the
// finished column is what makes the nested case work: when row j itself is
// the mirror row of a deeper S-row, its last-column entry is nonzero and
// must propagate into the product.
inline GrpElem build_X_Sb(const RootTables& t, int q, const SubsetS& S,
                          const BVector& b) {
  validate_b_vector(t, S, b, q);
  auto bval = [&](int i) { return b.b[static_cast<size_t>(i - 1)]; };
  GrpElem x = GrpElem::identity(t.n, q);
  for (int i = 1; i <= t.k + t.eps; ++i) x.x.set(i, t.n, bval(i));
  for (int i = 1; i <= t.k; ++i)
    x.x.set(t.n - i, t.n, S.contains(Root{i, t.n - i}) ? bval(i) : 0);
  for (int i = 1; i <= t.k; ++i) {
    if (S.contains(Root{i, t.n - i})) continue;
    for (int j = i + 1; j <= t.n - i - 1; ++j)
      x.x.set(j, t.n - i, bval(i) * x.x.at(j, t.n));
  }
  // Sanity: representative lies in E + g_0 + g_-.
  for (const Root& r : t.roots)
    if (t.zone(r) > 0)
      UTGG_REQUIRE(x.x.at(r.i, r.j) == 0, "build_X_Sb: entry in g_+");
  return x;
}

// ---------------------------------------------------------------------------
// Basis of the endomorphism algebra.
// ---------------------------------------------------------------------------
struct HeckeBasisElem {
  SubsetS S;
  BVector b;
  uint64_t x = 0;           // packed index of the representative
  GroupAlgebraElem element; // P_xi * x * P_xi
  uint64_t coset_id = 0;
};

struct HeckeBasisReport {
  std::vector<HeckeBasisElem> elems;
  bool all_compatible = true;
  bool all_nonzero = true;
  bool cosets_distinct = true;
  bool fallback_used = false;
  std::vector<std::string> failures;  // offending (S,b) labels
  mpz_class expected_count{0};
};

inline GroupFunction hecke_xi(const GroupContext& c, const LinForm& lamchar) {
  validate_character_form(c.rt, lamchar);
  return xi_from_form(c, c.rt.r_pos, lamchar);
}

inline HeckeBasisReport hecke_basis(const GroupContext& c,
                                    const LinForm& lamchar) {
  GroupFunction xi = hecke_xi(c, lamchar);
  HeckeBasisReport rep;
  rep.expected_count = expected_component_count(c.rt, c.q);

  std::vector<uint64_t> claimed;
  for (const SubsetS& S : all_subsets(c.rt))
    for (const BVector& b : enumerate_b_vectors(c.rt, S, c.q)) {
      HeckeBasisElem el;
      el.S = S;
      el.b = b;
      el.x = elem_index(c, build_X_Sb(c.rt, c.q, S, b));
      bool compat = xi_compatible(c, xi, el.x);
      el.element = sandwich(c, xi, el.x);
      el.coset_id = double_coset_id(c, xi.mask, el.x);
      bool nonzero = !el.element.is_zero();
      bool fresh =
          std::find(claimed.begin(), claimed.end(), el.coset_id) == claimed.end();
      if (!(compat && nonzero && fresh)) {
        rep.failures.push_back("S=" + S.str() + " b=" + b.str());
        rep.all_compatible = rep.all_compatible && compat;
        rep.all_nonzero = rep.all_nonzero && nonzero;
        rep.cosets_distinct = rep.cosets_distinct && fresh;
        // Independent fallback: scan E + g_0 + g_- for a compatible
        // representative in a coset not yet claimed.
        std::vector<Root> lower;
        for (const Root& r : c.rt.roots)
          if (c.rt.zone(r) <= 0) lower.push_back(r);
        bool replaced = false;
        for (uint64_t cand : subgroup_indices(c, lower)) {
          if (!xi_compatible(c, xi, cand)) continue;
          uint64_t cid = double_coset_id(c, xi.mask, cand);
          if (std::find(claimed.begin(), claimed.end(), cid) != claimed.end())
            continue;
          GroupAlgebraElem elem = sandwich(c, xi, cand);
          if (elem.is_zero()) continue;
          el.x = cand;
          el.element = std::move(elem);
          el.coset_id = cid;
          replaced = true;
          break;
        }
        UTGG_REQUIRE(replaced, "hecke_basis: no replacement representative");
        rep.fallback_used = true;
      }
      claimed.push_back(el.coset_id);
      rep.elems.push_back(std::move(el));
    }
  UTGG_REQUIRE(mpz_class(static_cast<unsigned long>(rep.elems.size())) ==
                   rep.expected_count,
               "hecke_basis: wrong element count");
  return rep;
}

// Number of (H, H) double cosets whose points pass the compatibility
// criterion; every point of a coset gives the same verdict, which the scan
// cross-checks by testing the least representative only after marking.
inline int hecke_dim_by_cosets(const GroupContext& c, const LinForm& lamchar) {
  GroupFunction xi = hecke_xi(c, lamchar);
  UTGG_REQUIRE(c.enumerable(), "hecke_dim_by_cosets: group too large");
  const uint64_t sz = c.size();
  std::vector<uint8_t> seen(sz, 0);
  std::vector<GrpElem> hs;
  for (uint64_t h : xi.mask) hs.push_back(elem_at(c, h));
  int count = 0;
  for (uint64_t g = 0; g < sz; ++g) {
    if (seen[g]) continue;
    GrpElem eg = elem_at(c, g);
    for (const GrpElem& h1 : hs) {
      GrpElem left = h1 * eg;
      for (const GrpElem& h2 : hs)
        seen[elem_index(c, left * h2)] = 1;
    }
    if (xi_compatible(c, xi, g)) ++count;
  }
  return count;
}

// ---------------------------------------------------------------------------
// Commutativity, closure, and structure constants.
// ---------------------------------------------------------------------------
struct StructureEntry {
  size_t i = 0, j = 0;
  std::vector<CycRat> coeffs;  // aligned with the basis
};

struct CommutativityReport {
  bool all_commute = true;
  bool closure_ok = true;
  bool partial = false;
  size_t pairs_checked = 0;
  std::vector<StructureEntry> table;  // ordered pairs (i, j)
};

// Express w in the basis: supports live in pairwise disjoint double cosets,
// so each coefficient is fixed by one exact cyclotomic division and then
// verified pointwise.
inline std::optional<std::vector<CycRat>> reduce_against_basis(
    const std::vector<HeckeBasisElem>& basis, const GroupAlgebraElem& w) {
  const int p = w.p;
  std::vector<CycRat> coeffs;
  GroupAlgebraElem residual = w;
  for (const HeckeBasisElem& m : basis) {
    const auto& sup = m.element.support;
    // Find the first basis support point where w is nonzero alignment-wise.
    CycRat coef = CycRat(CycInt::from_int(p, 0), 1);
    for (const auto& [g, mc] : sup) {
      auto it = w.support.find(g);
      if (it != w.support.end()) {
        coef = CycRat::of(it->second) / CycRat::of(mc);
        break;
      }
    }
    coeffs.push_back(coef);
  }
  // Verification: w(g) == sum_m coeffs[m] * m(g) for every g involved.
  std::map<uint64_t, CycRat> acc;
  for (size_t u = 0; u < basis.size(); ++u)
    for (const auto& [g, mc] : basis[u].element.support) {
      CycRat term = coeffs[u] * CycRat::of(mc);
      auto it = acc.find(g);
      if (it == acc.end())
        acc.emplace(g, term);
      else
        it->second = it->second + term;
    }
  auto zero = CycRat(CycInt::from_int(p, 0), 1);
  for (const auto& [g, wc] : w.support) {
    auto it = acc.find(g);
    if (it == acc.end()) return std::nullopt;
    if (!(it->second == CycRat::of(wc))) return std::nullopt;
  }
  for (const auto& [g, ac] : acc) {
    if (ac == zero) continue;
    auto it = w.support.find(g);
    if (it == w.support.end()) return std::nullopt;
  }
  return coeffs;
}

inline CommutativityReport verify_commutativity(
    const GroupContext& c, const std::vector<HeckeBasisElem>& basis,
    size_t pair_cap = SIZE_MAX) {
  CommutativityReport rep;
  size_t budget = pair_cap;
  for (size_t i = 0; i < basis.size() && budget; ++i)
    for (size_t j = 0; j < basis.size() && budget; ++j) {
      GroupAlgebraElem uv = convolve(c, basis[i].element, basis[j].element);
      if (j > i) {
        GroupAlgebraElem vu = convolve(c, basis[j].element, basis[i].element);
        rep.all_commute = rep.all_commute && (uv == vu);
      }
      auto coeffs = reduce_against_basis(basis, uv);
      if (!coeffs.has_value())
        rep.closure_ok = false;
      else
        rep.table.push_back(StructureEntry{i, j, std::move(*coeffs)});
      ++rep.pairs_checked;
      --budget;
    }
  rep.partial = (rep.pairs_checked < basis.size() * basis.size());
  return rep;
}

}  // namespace utgg
