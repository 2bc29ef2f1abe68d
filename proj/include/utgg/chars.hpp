#pragma once

// Complex characters of UT(n, F_q) over the cyclotomic integers Z[zeta_q]:
// one-dimensional characters xi of polarization subgroups, induced
// characters, the orbit character formula, inner products, Frobenius
// multiplicities and the full multiplicity-free decomposition of the big
// induced module V(lambda).

#include <algorithm>
#include <cstdint>
#include <optional>
#include <vector>

#include "utgg/exactnum.hpp"
#include "utgg/roots.hpp"
#include "utgg/unitri.hpp"

namespace utgg {

// ---------------------------------------------------------------------------
// GroupFunction — a function with values in Z[zeta_q], either on the whole
// group (empty mask, dense over the global enumeration) or on a subgroup
// (mask = sorted element indices, values aligned with the mask).
// ---------------------------------------------------------------------------
struct GroupFunction {
  int p = 0;                   // cyclotomic order (= q)
  std::vector<uint64_t> mask;  // sorted support subgroup; empty = full group
  std::vector<CycInt> values;

  bool full() const { return mask.empty(); }
  size_t domain_size() const { return full() ? values.size() : mask.size(); }

  const CycInt& at(uint64_t gidx) const {
    if (full()) {
      UTGG_REQUIRE(gidx < values.size(), "GroupFunction: index out of range");
      return values[static_cast<size_t>(gidx)];
    }
    auto it = std::lower_bound(mask.begin(), mask.end(), gidx);
    UTGG_REQUIRE(it != mask.end() && *it == gidx,
                 "GroupFunction: element outside the support subgroup");
    return values[static_cast<size_t>(it - mask.begin())];
  }

  friend bool operator==(const GroupFunction&, const GroupFunction&) = default;
};

// ---------------------------------------------------------------------------
// xi_from_form — the one-dimensional character xi(1 + x) = e(lambda(x)) of
// the subgroup 1 + p for a multiplicatively closed subspace p with
// lambda(p^2) = 0.
// ---------------------------------------------------------------------------
inline GroupFunction xi_from_form(const GroupContext& c, const Subspace& pol,
                                  const LinForm& lam) {
  UTGG_REQUIRE(pol.ambient() == c.rt.N, "xi_from_form: ambient mismatch");
  // Multiplicativity precondition: lambda kills all products of basis
  // vectors.  (1+x)(1+y) = 1 + x + y + xy, so xi(gh) = xi(g)xi(h) exactly
  // when lambda(xy) = 0 throughout.
  const auto& rows = pol.basis();
  for (const auto& x : rows)
    for (const auto& y : rows) {
      NilMat xm = mat_from_coords(c, x), ym = mat_from_coords(c, y);
      UTGG_REQUIRE(pol.contains(mat_coords(c, xm * ym)),
                   "xi_from_form: subspace not closed under products");
      Fp val = lam.eval(c, xm * ym);
      if (!val.is_zero()) {
        // Name a violating product in root coordinates for the diagnostic.
        std::string what = "xi_from_form: lambda does not kill products";
        for (const Root& r1 : c.rt.roots)
          for (const Root& r2 : c.rt.roots) {
            auto s = root_sum(r1, r2);
            if (!s) continue;
            if (xm.at(r1.i, r1.j) && ym.at(r2.i, r2.j) && lam.at(c.rt, *s))
              what += "; e.g. E_" + root_str(r1) + " * E_" + root_str(r2);
          }
        fail(what);
      }
    }
  GroupFunction xi;
  xi.p = c.q;
  std::vector<std::pair<uint64_t, CycInt>> entries;
  for (const auto& v : pol.elements()) {
    NilMat x = mat_from_coords(c, v);
    entries.push_back({pack_coords(c, v),
                       additive_character(lam.eval(c, x))});
  }
  std::sort(entries.begin(), entries.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  for (auto& e : entries) {
    xi.mask.push_back(e.first);
    xi.values.push_back(std::move(e.second));
  }
  return xi;
}

inline GroupFunction xi_from_form(const GroupContext& c,
                                  const std::vector<Root>& proots,
                                  const LinForm& lam) {
  return xi_from_form(c, root_span(c, proots), lam);
}

// ---------------------------------------------------------------------------
// induce_character — chi(g) = (1/|H|) sum_{x in G, x^{-1} g x in H}
// xi(x^{-1} g x), computed by accumulating xi(h) at x h x^{-1} over all
// pairs.  Division is exact in Z[zeta_q].
// ---------------------------------------------------------------------------
inline GroupFunction induce_character(const GroupContext& c,
                                      const GroupFunction& xi) {
  UTGG_REQUIRE(!xi.mask.empty() || !xi.values.empty(),
               "induce_character: empty character");
  const uint64_t gsize = c.size();  // asserts enumerability
  const std::vector<uint64_t>& helems = xi.mask;
  UTGG_REQUIRE(!helems.empty(), "induce_character: subgroup mask required");
  std::vector<CycInt> acc(static_cast<size_t>(gsize), CycInt(c.q));
  std::vector<GrpElem> hmat;
  hmat.reserve(helems.size());
  for (uint64_t h : helems) hmat.push_back(elem_at(c, h));
  for (uint64_t xi_idx = 0; xi_idx < gsize; ++xi_idx) {
    GrpElem x = elem_at(c, xi_idx);
    GrpElem xinv = x.inv();
    for (size_t u = 0; u < hmat.size(); ++u) {
      uint64_t target = elem_index(c, x * hmat[u] * xinv);
      acc[static_cast<size_t>(target)] += xi.values[u];
    }
  }
  mpz_class hsize(static_cast<unsigned long>(helems.size()));
  GroupFunction out;
  out.p = c.q;
  out.values.reserve(acc.size());
  for (auto& v : acc) out.values.push_back(v.divide_exact(hsize));
  // chi(e) = [G : H].
  mpz_class index = c.order / hsize;
  UTGG_REQUIRE(out.values[0].as_integer() == index,
               "induce_character: wrong value at the identity");
  return out;
}

// ---------------------------------------------------------------------------
// Orbit characters: chi(1 + x) = q^{-d} sum_{mu in orbit} e(mu(x)) with
// |orbit| = q^{2d}.
// ---------------------------------------------------------------------------

// d with |orbit| = q^{2d}; rejects non-even-power sizes.
inline int orbit_half_log(const GroupContext& c, size_t orbit_size) {
  uint64_t s = orbit_size;
  int log = 0;
  while (s > 1) {
    UTGG_REQUIRE(s % static_cast<uint64_t>(c.q) == 0,
                 "orbit size is not a power of q");
    s /= static_cast<uint64_t>(c.q);
    ++log;
  }
  UTGG_REQUIRE(log % 2 == 0, "orbit size is not an even power of q");
  return log / 2;
}

// Values of the orbit character at the given group elements only (direct
// exponential sums; independent of the transform-based full table).
inline std::vector<CycInt> orbit_character_values(
    const GroupContext& c, const std::vector<uint64_t>& orbit,
    const std::vector<uint64_t>& at) {
  int d = orbit_half_log(c, orbit.size());
  mpz_class qd;
  mpz_ui_pow_ui(qd.get_mpz_t(), static_cast<unsigned>(c.q),
                static_cast<unsigned>(d));
  std::vector<LinForm> mus;
  mus.reserve(orbit.size());
  for (uint64_t m : orbit) mus.push_back(unpack_form(c, m));
  std::vector<CycInt> out;
  out.reserve(at.size());
  for (uint64_t gidx : at) {
    NilMat x = elem_at(c, gidx).x;
    CycInt sum(c.q);
    for (const LinForm& mu : mus) sum += additive_character(mu.eval(c, x));
    out.push_back(sum.divide_exact(qd));
  }
  return out;
}

// Exact character-table transform: out[x] = sum_y f[y] zeta^{<x,y>} over
// F_q^N with the coordinate dot pairing, done dimension by dimension.
inline std::vector<CycInt> zeta_transform(const GroupContext& c,
                                          std::vector<CycInt> f) {
  const uint64_t size = c.size();
  UTGG_REQUIRE(f.size() == size, "zeta_transform: wrong input length");
  std::vector<CycInt> zp;
  for (int m = 0; m < c.q; ++m) zp.push_back(CycInt::zeta_pow(c.q, m));
  std::vector<CycInt> buf(static_cast<size_t>(c.q), CycInt(c.q));
  for (int t = 0; t < c.rt.N; ++t) {
    const uint64_t stride = c.powq[static_cast<size_t>(t)];
    const uint64_t block = stride * static_cast<uint64_t>(c.q);
    for (uint64_t base = 0; base < size; base += block)
      for (uint64_t off = 0; off < stride; ++off) {
        for (int s = 0; s < c.q; ++s)
          buf[static_cast<size_t>(s)] = f[base + off + static_cast<uint64_t>(s) * stride];
        for (int x = 0; x < c.q; ++x) {
          CycInt acc(c.q);
          for (int s = 0; s < c.q; ++s)
            acc += zp[static_cast<size_t>((s * x) % c.q)] * buf[static_cast<size_t>(s)];
          f[base + off + static_cast<uint64_t>(x) * stride] = std::move(acc);
        }
      }
  }
  return f;
}

// Full table of the orbit character on G.
inline GroupFunction orbit_character(const GroupContext& c,
                                     const std::vector<uint64_t>& orbit) {
  int d = orbit_half_log(c, orbit.size());
  mpz_class qd;
  mpz_ui_pow_ui(qd.get_mpz_t(), static_cast<unsigned>(c.q),
                static_cast<unsigned>(d));
  std::vector<CycInt> ind(static_cast<size_t>(c.size()), CycInt(c.q));
  for (uint64_t m : orbit) ind[static_cast<size_t>(m)] = CycInt::from_int(c.q, 1);
  std::vector<CycInt> table = zeta_transform(c, std::move(ind));
  GroupFunction out;
  out.p = c.q;
  out.values.reserve(table.size());
  for (auto& v : table) out.values.push_back(v.divide_exact(qd));
  UTGG_REQUIRE(out.values[0].as_integer() == qd,
               "orbit_character: wrong degree at the identity");
  return out;
}

// ---------------------------------------------------------------------------
// Inner products and multiplicities.
// ---------------------------------------------------------------------------

// (1/|domain|) sum f conj(g) over the common domain, as an element of
// Q(zeta_q).
inline CycRat inner_product_cyc(const GroupContext& c, const GroupFunction& f,
                                const GroupFunction& g) {
  UTGG_REQUIRE(f.mask == g.mask && f.values.size() == g.values.size(),
               "inner_product: domains differ");
  CycInt sum(c.q);
  for (size_t u = 0; u < f.values.size(); ++u)
    sum += f.values[u] * g.values[u].conj();
  return CycRat(std::move(sum),
                mpz_class(static_cast<unsigned long>(f.values.size())));
}

// Exact rational inner product; errors when the value is irrational.
inline std::pair<mpz_class, mpz_class> inner_product(const GroupContext& c,
                                                     const GroupFunction& f,
                                                     const GroupFunction& g) {
  auto r = as_rational(inner_product_cyc(c, f, g));
  UTGG_REQUIRE(r.has_value(), "inner_product: non-rational value");
  return *r;
}

// <Res_H chi, xi>_H for a full-group chi and a subgroup character xi.
inline mpz_class multiplicity_frobenius(const GroupContext& c,
                                        const GroupFunction& chi,
                                        const GroupFunction& xi) {
  UTGG_REQUIRE(chi.full() && !xi.mask.empty(),
               "multiplicity_frobenius: need full chi and subgroup xi");
  CycInt sum(c.q);
  for (size_t u = 0; u < xi.mask.size(); ++u)
    sum += chi.at(xi.mask[u]) * xi.values[u].conj();
  CycRat val(std::move(sum), mpz_class(static_cast<unsigned long>(xi.mask.size())));
  auto r = as_rational(val);
  UTGG_REQUIRE(r.has_value() && r->second == 1,
               "multiplicity_frobenius: non-integer multiplicity");
  UTGG_REQUIRE(r->first >= 0, "multiplicity_frobenius: negative multiplicity");
  return r->first;
}

// Fast path: same number without materializing the component table — the
// exponential sums are evaluated on the subgroup elements only, and the
// q^d division is deferred to the final exact rational.
inline mpz_class multiplicity_frobenius_orbit(const GroupContext& c,
                                              const std::vector<uint64_t>& orbit,
                                              const GroupFunction& xi) {
  int d = orbit_half_log(c, orbit.size());
  std::vector<LinForm> mus;
  mus.reserve(orbit.size());
  for (uint64_t m : orbit) mus.push_back(unpack_form(c, m));
  CycInt sum(c.q);
  for (size_t u = 0; u < xi.mask.size(); ++u) {
    NilMat x = elem_at(c, xi.mask[u]).x;
    CycInt per(c.q);
    for (const LinForm& mu : mus) per += additive_character(mu.eval(c, x));
    sum += per * xi.values[u].conj();
  }
  mpz_class qd;
  mpz_ui_pow_ui(qd.get_mpz_t(), static_cast<unsigned>(c.q),
                static_cast<unsigned>(d));
  CycRat val(std::move(sum),
             qd * mpz_class(static_cast<unsigned long>(xi.mask.size())));
  auto r = as_rational(val);
  UTGG_REQUIRE(r.has_value() && r->second == 1,
               "multiplicity: non-integer value");
  UTGG_REQUIRE(r->first >= 0, "multiplicity: negative value");
  return r->first;
}

// ---------------------------------------------------------------------------
// Decomposition of the big induced module V(lambda) = Ind(xi_lambda, G+, G).
// ---------------------------------------------------------------------------
struct ComponentEntry {
  SubsetS S;
  AVector a;
  mpz_class dim;         // q^{r+ - s}
  uint64_t orbit_size = 0;
  mpz_class multiplicity;
};

struct DecompositionReport {
  std::vector<ComponentEntry> entries;
  mpz_class total_dim;        // sum multiplicity * dim
  mpz_class expected_dim;     // q^{r+ + r0}
  mpz_class component_count;  // number of entries
  mpz_class expected_count;   // q^eps (2q-1)^k
  bool multiplicity_free = false;
  std::optional<mpz_class> vnorm;  // <chi_V, chi_V> when cross-checked
};

inline mpz_class expected_component_count(const RootTables& t, int q) {
  mpz_class r = 1;
  for (int u = 0; u < t.eps; ++u) r *= q;
  for (int u = 0; u < t.k; ++u) r *= (2 * q - 1);
  return r;
}

// Iterate all (S, a), compute each component's coadjoint orbit and its
// Frobenius multiplicity inside V(lambda).  When `with_induction_crosscheck`
// is set, V's character is induced outright and <chi_V, chi_V> is recorded
// (equal to the component count exactly when the decomposition is
// multiplicity-free).
inline DecompositionReport decompose(const GroupContext& c,
                                     const LinForm& lamchar,
                                     bool with_induction_crosscheck = false) {
  validate_character_form(c.rt, lamchar);
  GroupFunction xi = xi_from_form(c, c.rt.r_pos, lamchar);
  DecompositionReport rep;
  rep.expected_dim = 1;
  for (int u = 0; u < c.rt.r_plus + c.rt.r_zero; ++u) rep.expected_dim *= c.q;
  rep.expected_count = expected_component_count(c.rt, c.q);
  rep.total_dim = 0;
  rep.multiplicity_free = true;
  for (const SubsetS& S : all_subsets(c.rt)) {
    LSets ls = compute_lsets(c.rt, S);
    for (const AVector& a : enumerate_a_vectors(ls, c.q)) {
      LinForm lam = build_canonical_form(c.rt, S, ls, lamchar, a, c.q);
      auto orbit = orbit_of(c, lam);
      ComponentEntry e;
      e.S = S;
      e.a = a;
      e.orbit_size = orbit.size();
      mpz_ui_pow_ui(e.dim.get_mpz_t(), static_cast<unsigned>(c.q),
                    static_cast<unsigned>(c.rt.r_plus - S.size()));
      UTGG_REQUIRE(e.dim * e.dim ==
                       mpz_class(static_cast<unsigned long>(orbit.size())),
                   "decompose: orbit size differs from dim^2");
      e.multiplicity = multiplicity_frobenius_orbit(c, orbit, xi);
      if (e.multiplicity != 1) rep.multiplicity_free = false;
      rep.total_dim += e.multiplicity * e.dim;
      rep.entries.push_back(std::move(e));
    }
  }
  rep.component_count = mpz_class(static_cast<unsigned long>(rep.entries.size()));
  if (with_induction_crosscheck) {
    GroupFunction big = induce_character(c, xi);
    auto norm = inner_product(c, big, big);
    UTGG_REQUIRE(norm.second == 1, "decompose: non-integer norm of V");
    rep.vnorm = norm.first;
  }
  return rep;
}

// Exact set disjointness of two sorted orbits.
inline bool orbits_disjoint(const std::vector<uint64_t>& a,
                            const std::vector<uint64_t>& b) {
  size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i] == b[j]) return false;
    if (a[i] < b[j]) ++i;
    else ++j;
  }
  return true;
}

// ---------------------------------------------------------------------------
// V(lambda) does not depend on the character values off the mirror roots:
// characters induced from two nondegenerate forms agreeing on Pi coincide.
// ---------------------------------------------------------------------------
inline bool check_induced_isomorphism(const GroupContext& c,
                                      const LinForm& lam1,
                                      const LinForm& lam2) {
  validate_character_form(c.rt, lam1);
  validate_character_form(c.rt, lam2);
  for (const Root& r : c.rt.pi)
    UTGG_REQUIRE(lam1.at(c.rt, r) == lam2.at(c.rt, r),
                 "check_induced_isomorphism: forms differ on a mirror root");
  GroupFunction a = induce_character(c, xi_from_form(c, c.rt.r_pos, lam1));
  GroupFunction b = induce_character(c, xi_from_form(c, c.rt.r_pos, lam2));
  return a == b;
}

// Character equality of two induced characters without any precondition
// (used for the observed converse: disagreeing on Pi separates them).
inline bool induced_characters_equal(const GroupContext& c,
                                     const LinForm& lam1,
                                     const LinForm& lam2) {
  GroupFunction a = induce_character(c, xi_from_form(c, c.rt.r_pos, lam1));
  GroupFunction b = induce_character(c, xi_from_form(c, c.rt.r_pos, lam2));
  return a == b;
}

// ---------------------------------------------------------------------------
// Weight vector device: the component for (S, a) is realized inside
// V(lambda) by an explicit vector of over-diagonal weight lambda.
//
// Model: V_{S,a} = {f : G -> Q(zeta) | f(hg) = xi(h) f(g), h in P_S} with
// (x . f)(g) = f(gx).  f0 is xi on P_S and 0 elsewhere; g0 is the product
// of the corrections x_{beta(alpha)}(t_alpha) over alpha in Pi \ S with
// lambda_{S,a}(E_{gamma(alpha)}) t_alpha = lambda(E_alpha); the translate
// v = g0 . f0 then satisfies (1+u) . v = e(lambda(u)) v for every
// 1 + u in G+.
// ---------------------------------------------------------------------------
inline GrpElem weight_correction_g0(const GroupContext& c, const SubsetS& S,
                                    const LSets& ls, const LinForm& lam_sa,
                                    const LinForm& lamchar) {
  GrpElem g0 = GrpElem::identity(c.n, c.q);
  for (const Root& alpha : c.rt.pi) {
    if (S.contains(alpha)) continue;
    WeightCompanions w = weight_companions(c.rt, S, ls, alpha);
    Fp coef(lam_sa.at(c.rt, w.gamma), c.q);
    Fp target(lamchar.at(c.rt, alpha), c.q);
    Fp t = target * coef.inv();  // coef != 0 by the L^0 constraint
    g0 = g0 * GrpElem::root_elem(c.n, c.q, w.beta, t.v);
  }
  return g0;
}

// Core of the check for a given correction element g0; exposed so that the
// necessity of the correction can be demonstrated (g0 = identity fails
// whenever lambda is nonzero somewhere on Pi \ S).
inline bool weight_vector_holds(const GroupContext& c, const LinForm& lam,
                                const std::vector<Root>& proots,
                                const GrpElem& g0, const LinForm& lamchar) {
  std::vector<bool> in_rs(static_cast<size_t>(c.rt.N), false);
  for (const Root& r : proots) in_rs[static_cast<size_t>(c.rt.index_of(r))] = true;
  auto f0 = [&](const GrpElem& y) -> CycInt {
    std::vector<int32_t> coords = mat_coords(c, y.x);
    for (int t = 0; t < c.rt.N; ++t)
      if (coords[static_cast<size_t>(t)] && !in_rs[static_cast<size_t>(t)])
        return CycInt(c.q);
    return additive_character(lam.eval(c, y.x));
  };
  const uint64_t gsize = c.size();
  std::vector<CycInt> v;
  v.reserve(gsize);
  std::vector<GrpElem> elems;
  elems.reserve(gsize);
  for (uint64_t idx = 0; idx < gsize; ++idx) {
    elems.push_back(elem_at(c, idx));
    v.push_back(f0(elems.back() * g0));
  }
  // v != 0 (it is xi(1) = 1 at g = g0^{-1}).
  UTGG_REQUIRE(!f0(g0.inv() * g0).is_zero(), "weight vector vanishes");
  for (uint64_t h : subgroup_indices(c, c.rt.r_pos)) {
    GrpElem he = elem_at(c, h);
    CycInt scale = additive_character(lamchar.eval(c, he.x));
    for (uint64_t g = 0; g < gsize; ++g) {
      uint64_t gh = elem_index(c, elems[static_cast<size_t>(g)] * he);
      if (!(v[static_cast<size_t>(gh)] == scale * v[static_cast<size_t>(g)]))
        return false;
    }
  }
  return true;
}

inline bool weight_vector_check(const GroupContext& c, const SubsetS& S,
                                const LSets& ls, const AVector& a,
                                const LinForm& lamchar) {
  LinForm lam = build_canonical_form(c.rt, S, ls, lamchar, a, c.q);
  std::vector<Root> proots = build_p_S(c.rt, ls);
  GrpElem g0 = weight_correction_g0(c, S, ls, lam, lamchar);
  return weight_vector_holds(c, lam, proots, g0, lamchar);
}

// ---------------------------------------------------------------------------
// Translated polarizations: for mu = g . lambda the subspace g p g^{-1} is
// an associative polarization of mu and induces the same character.
// ---------------------------------------------------------------------------
inline Subspace translate_subspace(const GroupContext& c,
                                   const std::vector<Root>& proots,
                                   const GrpElem& g) {
  Subspace out(c.rt.N, c.q);
  GrpElem gi = g.inv();
  for (const Root& r : proots) {
    NilMat er = NilMat::unit(c.n, c.q, r);
    NilMat y = er + g.x * er;  // (1+u) E_r
    y = y + y * gi.x;          // ... (1+u)^{-1}
    out.insert(mat_coords(c, y));
  }
  return out;
}

inline bool check_translated_polarization(const GroupContext& c,
                                          const std::vector<Root>& proots,
                                          const LinForm& lam, const GrpElem& g,
                                          const GroupFunction& chi_ref) {
  LinForm mu = coadjoint(c, g, lam);
  Subspace pol = translate_subspace(c, proots, g);
  FiniteAlgebra alg = FiniteAlgebra::strictly_upper(c.n, c.q);
  std::vector<int32_t> muv(mu.v.begin(), mu.v.end());
  if (!is_associative_polarization(alg, pol, muv)) return false;
  GroupFunction chi = induce_character(c, xi_from_form(c, pol, mu));
  return chi == chi_ref;
}

}  // namespace utgg
