#pragma once

// Symbolic generators of the defining ideal of a coadjoint orbit closure:
// minors M_gamma of the generic strictly upper matrix X, coefficients
// P_{gamma,j} of the cut characteristic minors |X - tau E|_i, the combined
// generator system {F_gamma - F_gamma^0}, brute-force variety verification
// against the actual orbit, and the explicit separation witnesses telling
// distinct canonical orbits apart.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "utgg/exactnum.hpp"
#include "utgg/roots.hpp"
#include "utgg/unitri.hpp"

namespace utgg {

// ---------------------------------------------------------------------------
// MultiPoly — sparse polynomial over Z in the matrix variables x_r, one per
// root r, keyed by exponent vectors in the global root order.  The map
// order (lexicographic over exponent vectors) doubles as the canonical term
// order for rendering.
// ---------------------------------------------------------------------------
class MultiPoly {
 public:
  using Key = std::vector<int32_t>;

  MultiPoly() = default;
  explicit MultiPoly(int nvars) : nvars_(nvars) {}

  static MultiPoly constant(int nvars, const mpz_class& c) {
    MultiPoly p(nvars);
    if (c != 0) p.terms_[Key(static_cast<size_t>(nvars), 0)] = c;
    return p;
  }
  static MultiPoly variable(int nvars, int idx) {
    MultiPoly p(nvars);
    Key k(static_cast<size_t>(nvars), 0);
    k[static_cast<size_t>(idx)] = 1;
    p.terms_[std::move(k)] = 1;
    return p;
  }

  int nvars() const { return nvars_; }
  const std::map<Key, mpz_class>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  int degree() const {
    int d = 0;
    for (const auto& [k, c] : terms_) {
      int t = 0;
      for (int32_t e : k) t += e;
      d = std::max(d, t);
    }
    return d;
  }

  friend MultiPoly operator+(const MultiPoly& a, const MultiPoly& b) {
    UTGG_REQUIRE(a.nvars_ == b.nvars_, "MultiPoly: mixed variable counts");
    MultiPoly r = a;
    for (const auto& [k, c] : b.terms_) {
      auto it = r.terms_.find(k);
      if (it == r.terms_.end()) {
        r.terms_[k] = c;
      } else {
        it->second += c;
        if (it->second == 0) r.terms_.erase(it);
      }
    }
    return r;
  }
  friend MultiPoly operator-(const MultiPoly& a, const MultiPoly& b) {
    return a + (-b);
  }
  MultiPoly operator-() const {
    MultiPoly r(nvars_);
    for (const auto& [k, c] : terms_) r.terms_[k] = -c;
    return r;
  }
  friend MultiPoly operator*(const MultiPoly& a, const MultiPoly& b) {
    UTGG_REQUIRE(a.nvars_ == b.nvars_, "MultiPoly: mixed variable counts");
    MultiPoly r(a.nvars_);
    for (const auto& [ka, ca] : a.terms_)
      for (const auto& [kb, cb] : b.terms_) {
        Key k(static_cast<size_t>(a.nvars_));
        for (size_t u = 0; u < k.size(); ++u) k[u] = ka[u] + kb[u];
        auto it = r.terms_.find(k);
        if (it == r.terms_.end()) {
          mpz_class c = ca * cb;
          if (c != 0) r.terms_[std::move(k)] = std::move(c);
        } else {
          it->second += ca * cb;
          if (it->second == 0) r.terms_.erase(it);
        }
      }
    return r;
  }

  friend bool operator==(const MultiPoly&, const MultiPoly&) = default;

  // Exact evaluation at a linear form: x_r substituted by lambda's r-th
  // coordinate, coefficients reduced mod p.
  Fp eval(const LinForm& lam) const {
    UTGG_REQUIRE(static_cast<int>(lam.v.size()) == nvars_,
                 "MultiPoly: evaluation point has wrong length");
    const int p = lam.q;
    long long acc = 0;
    for (const auto& [k, c] : terms_) {
      long long t = static_cast<long long>(mpz_fdiv_ui(c.get_mpz_t(),
                                                       static_cast<unsigned long>(p)));
      for (size_t u = 0; u < k.size() && t; ++u)
        for (int32_t e = 0; e < k[u]; ++e)
          t = (t * lam.v[u]) % p;
      acc += t;
    }
    return Fp(acc, p);
  }

 private:
  int nvars_ = 0;
  std::map<Key, mpz_class> terms_;
};

// Flat compiled form for bulk evaluation over many points.
struct CompiledPoly {
  struct Term {
    int32_t coeff;              // reduced mod p
    std::vector<int32_t> vars;  // variable indices with multiplicity
  };
  std::vector<Term> terms;
  int p = 0;

  int32_t eval(const std::vector<int32_t>& coords) const {
    long long acc = 0;
    for (const Term& t : terms) {
      long long v = t.coeff;
      for (int32_t idx : t.vars) {
        v = (v * coords[static_cast<size_t>(idx)]) % p;
        if (!v) break;
      }
      acc += v;
    }
    return static_cast<int32_t>(((acc % p) + p) % p);
  }
};

inline CompiledPoly compile_poly(const MultiPoly& poly, int p) {
  CompiledPoly out;
  out.p = p;
  for (const auto& [k, c] : poly.terms()) {
    CompiledPoly::Term t;
    t.coeff = static_cast<int32_t>(
        mpz_fdiv_ui(c.get_mpz_t(), static_cast<unsigned long>(p)));
    if (t.coeff == 0) continue;
    for (size_t u = 0; u < k.size(); ++u)
      for (int32_t e = 0; e < k[u]; ++e)
        t.vars.push_back(static_cast<int32_t>(u));
    out.terms.push_back(std::move(t));
  }
  return out;
}

// ---------------------------------------------------------------------------
// TauPoly — polynomial in tau with MultiPoly coefficients; index = power.
// ---------------------------------------------------------------------------
struct TauPoly {
  int nvars = 0;
  std::vector<MultiPoly> c;  // c[j] multiplies tau^j; trailing zeros trimmed

  explicit TauPoly(int nv) : nvars(nv) {}
  static TauPoly constant(int nv, MultiPoly m) {
    TauPoly t(nv);
    if (!m.is_zero()) t.c.push_back(std::move(m));
    return t;
  }
  static TauPoly tau_term(int nv, MultiPoly m, int power) {
    TauPoly t(nv);
    if (!m.is_zero()) {
      t.c.assign(static_cast<size_t>(power), MultiPoly(nv));
      t.c.push_back(std::move(m));
    }
    return t;
  }

  int degree() const { return static_cast<int>(c.size()) - 1; }
  const MultiPoly& coeff(int j) const {
    static const MultiPoly kZero;
    if (j < 0 || j >= static_cast<int>(c.size()))
      UTGG_REQUIRE(false, "TauPoly: coefficient index out of range");
    return c[static_cast<size_t>(j)];
  }

  void trim() {
    while (!c.empty() && c.back().is_zero()) c.pop_back();
  }

  friend TauPoly operator+(const TauPoly& a, const TauPoly& b) {
    TauPoly r(a.nvars);
    r.c.resize(std::max(a.c.size(), b.c.size()), MultiPoly(a.nvars));
    for (size_t u = 0; u < r.c.size(); ++u) {
      MultiPoly s(a.nvars);
      if (u < a.c.size()) s = s + a.c[u];
      if (u < b.c.size()) s = s + b.c[u];
      r.c[u] = std::move(s);
    }
    r.trim();
    return r;
  }
  TauPoly operator-() const {
    TauPoly r(nvars);
    for (const auto& m : c) r.c.push_back(-m);
    return r;
  }
  friend TauPoly operator-(const TauPoly& a, const TauPoly& b) { return a + (-b); }
  friend TauPoly operator*(const TauPoly& a, const TauPoly& b) {
    TauPoly r(a.nvars);
    if (a.c.empty() || b.c.empty()) return r;
    r.c.assign(a.c.size() + b.c.size() - 1, MultiPoly(a.nvars));
    for (size_t i = 0; i < a.c.size(); ++i)
      for (size_t j = 0; j < b.c.size(); ++j)
        r.c[i + j] = r.c[i + j] + a.c[i] * b.c[j];
    r.trim();
    return r;
  }
};

// Cofactor-expansion determinant with standard signs (shared by the plain
// and the tau-extended minors).
template <class PolyT>
PolyT det_expand(const std::vector<std::vector<PolyT>>& m, const PolyT& zero) {
  const size_t sz = m.size();
  if (sz == 0) return zero;
  std::vector<size_t> cols(sz);
  for (size_t u = 0; u < sz; ++u) cols[u] = u;
  // Recursive expansion along the first remaining row.
  std::function<PolyT(size_t, std::vector<size_t>&)> rec =
      [&](size_t row, std::vector<size_t>& cc) -> PolyT {
    if (cc.size() == 1) return m[row][cc[0]];
    PolyT acc = zero;
    for (size_t u = 0; u < cc.size(); ++u) {
      std::vector<size_t> rest;
      rest.reserve(cc.size() - 1);
      for (size_t v = 0; v < cc.size(); ++v)
        if (v != u) rest.push_back(cc[v]);
      PolyT sub = m[row][cc[u]] * rec(row + 1, rest);
      acc = (u % 2 == 0) ? acc + sub : acc - sub;
    }
    return acc;
  };
  return rec(0, cols);
}

// ---------------------------------------------------------------------------
// Minor builders.
// ---------------------------------------------------------------------------

// Determinant of the submatrix of the generic strict-upper X on the given
// (ascending) row and column index sets; entries below or on the diagonal
// are zero.
inline MultiPoly x_minor(const RootTables& t, const std::vector<int>& rows,
                         const std::vector<int>& cols) {
  UTGG_REQUIRE(rows.size() == cols.size() && !rows.empty(),
               "x_minor: need a square nonempty submatrix");
  std::vector<std::vector<MultiPoly>> m(
      rows.size(), std::vector<MultiPoly>(cols.size(), MultiPoly(t.N)));
  for (size_t r = 0; r < rows.size(); ++r)
    for (size_t c = 0; c < cols.size(); ++c)
      if (rows[r] < cols[c])
        m[r][c] = MultiPoly::variable(t.N, t.index_of(Root{rows[r], cols[c]}));
  return det_expand(m, MultiPoly(t.N));
}

// The root set S_gamma = {gamma} | {delta in S | L^0 strictly above and
// strictly to the right of gamma}, with its sorted row/column projections.
struct MinorShape {
  std::vector<int> rows, cols;
};

inline MinorShape minor_shape(const SubsetS& S, const LSets& ls,
                              const Root& gamma) {
  std::vector<Root> sg{gamma};
  for (const Root& d : S.roots)
    if (d.i < gamma.i && d.j > gamma.j) sg.push_back(d);
  for (const Root& d : ls.zero)
    if (d.i < gamma.i && d.j > gamma.j) sg.push_back(d);
  MinorShape shape;
  for (const Root& r : sg) {
    shape.rows.push_back(r.i);
    shape.cols.push_back(r.j);
  }
  std::sort(shape.rows.begin(), shape.rows.end());
  std::sort(shape.cols.begin(), shape.cols.end());
  for (size_t u = 0; u + 1 < shape.rows.size(); ++u) {
    UTGG_REQUIRE(shape.rows[u] != shape.rows[u + 1], "minor_shape: repeated row");
    UTGG_REQUIRE(shape.cols[u] != shape.cols[u + 1], "minor_shape: repeated column");
  }
  return shape;
}

// M_gamma for gamma in S | L^+ | L^0 | L^00.
inline MultiPoly root_minor(const RootTables& t, const SubsetS& S,
                            const LSets& ls, const Root& gamma) {
  UTGG_REQUIRE(S.contains(gamma) || ls.in_plus(gamma) || ls.in_zero(gamma) ||
                   ls.in_zerozero(gamma),
               "root_minor: gamma not in S | L^+ | L^0 | L^00");
  MinorShape shape = minor_shape(S, ls, gamma);
  MultiPoly m = x_minor(t, shape.rows, shape.cols);
  UTGG_REQUIRE(m.degree() == static_cast<int>(shape.rows.size()),
               "root_minor: degree differs from |S_gamma|");
  return m;
}

// |X - tau E|_i: the minor of X - tau E obtained by cutting the first i
// columns and the last i rows (rows 1..n-i, columns i+1..n), as a
// polynomial in tau of degree n - 2i.
inline TauPoly char_minor(const RootTables& t, int i) {
  UTGG_REQUIRE(i >= 1 && t.n - 2 * i >= 1, "char_minor: index out of range");
  const int sz = t.n - i;
  std::vector<std::vector<TauPoly>> m(
      static_cast<size_t>(sz),
      std::vector<TauPoly>(static_cast<size_t>(sz), TauPoly(t.N)));
  for (int r = 1; r <= sz; ++r)
    for (int c = 1; c <= sz; ++c) {
      int row = r, col = c + i;
      TauPoly& e = m[static_cast<size_t>(r - 1)][static_cast<size_t>(c - 1)];
      if (row < col)
        e = TauPoly::constant(
            t.N, MultiPoly::variable(t.N, t.index_of(Root{row, col})));
      else if (row == col)
        e = TauPoly::tau_term(t.N, MultiPoly::constant(t.N, -1), 1);
    }
  TauPoly det = det_expand(m, TauPoly(t.N));
  UTGG_REQUIRE(det.degree() == t.n - 2 * i,
               "char_minor: unexpected tau degree");
  return det;
}

// P_{gamma,j}: the coefficient of tau^{(n-2i)-j}.
inline MultiPoly char_minor_coeff(const TauPoly& tp, int deg, int j) {
  return tp.coeff(deg - j);
}

// ---------------------------------------------------------------------------
// Generator systems.
// ---------------------------------------------------------------------------
enum class GenKind {
  minor,       // F = M_gamma
  char_coeff,  // F = P_{gamma,1} from |X - tau E|_{n - gamma.i}
};

struct OrbitGenerator {
  Root gamma;
  GenKind kind = GenKind::minor;
  MinorShape shape;  // minor only
  int cut = 0;       // char_coeff only: the i in |X - tau E|_i
  MultiPoly poly;
  Fp value;          // F^0 = poly(lambda_{S,a})
};

struct GeneratorSet {
  SubsetS S;
  AVector a;
  LinForm lambda;  // the canonical form the values were taken at
  std::vector<OrbitGenerator> gens;  // gamma ascending
};

inline GeneratorSet build_generators(const RootTables& t, const SubsetS& S,
                                     const LSets& ls, const AVector& a,
                                     const LinForm& lamchar, int q) {
  GeneratorSet gs;
  gs.S = S;
  gs.a = a;
  gs.lambda = build_canonical_form(t, S, ls, lamchar, a, q);
  std::vector<Root> all = S.roots;
  all.insert(all.end(), ls.all.begin(), ls.all.end());
  std::sort(all.begin(), all.end(), root_less);
  for (const Root& gamma : all) {
    OrbitGenerator g;
    g.gamma = gamma;
    if (ls.in_minus(gamma)) {
      g.kind = GenKind::char_coeff;
      g.cut = t.n - gamma.i;
      TauPoly tp = char_minor(t, g.cut);
      g.poly = char_minor_coeff(tp, t.n - 2 * g.cut, 1);
    } else {
      g.kind = GenKind::minor;
      g.shape = minor_shape(S, ls, gamma);
      g.poly = root_minor(t, S, ls, gamma);
    }
    g.value = g.poly.eval(gs.lambda);
    gs.gens.push_back(std::move(g));
  }
  UTGG_REQUIRE(static_cast<int>(gs.gens.size()) == t.r_zero + 2 * S.size(),
               "build_generators: wrong generator count");
  // The two vanishing facts that drive orbit separation.
  for (const OrbitGenerator& g : gs.gens) {
    if (ls.in_plus(g.gamma))
      UTGG_REQUIRE(g.value.is_zero(), "build_generators: nonzero value on L^+");
    if (ls.in_zero(g.gamma))
      UTGG_REQUIRE(!g.value.is_zero(), "build_generators: zero value on L^0");
  }
  return gs;
}

// Informational: the roots where the vanishing pattern "F^0 = 0 iff
// lambda_{S,a}(E_gamma) = 0" breaks.  Empty whenever the character form
// vanishes off Pi and its mirror values on S are nonzero; kept as a report
// rather than an assertion because other character forms are legal inputs.
inline std::vector<Root> remark_pattern_violations(const RootTables& t,
                                                   const GeneratorSet& gs) {
  std::vector<Root> out;
  for (const OrbitGenerator& g : gs.gens) {
    bool lam_zero = gs.lambda.at(t, g.gamma) == 0;
    if (g.value.is_zero() != lam_zero) out.push_back(g.gamma);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Brute-force verification that the generator equations cut out exactly the
// coadjoint orbit.
// ---------------------------------------------------------------------------
struct OrbitIdealReport {
  bool partial = false;          // cap exceeded: checks restricted to the orbit
  bool orbit_satisfies = false;  // every orbit point solves all equations
  bool counts_match = false;     // #variety == q^{2(r+ - s)}  (full scan only)
  bool variety_equals_orbit = false;  // set equality           (full scan only)
  bool variety_stable = false;   // point set closed under coadjoint generators
  mpz_class variety_count{0};
  mpz_class expected_count{0};
  uint64_t orbit_size = 0;
};

inline OrbitIdealReport verify_orbit_ideal(const GroupContext& c,
                                           const SubsetS& S, const LSets& ls,
                                           const AVector& a,
                                           const LinForm& lamchar) {
  GeneratorSet gs = build_generators(c.rt, S, ls, a, lamchar, c.q);
  std::vector<CompiledPoly> polys;
  std::vector<int32_t> values;
  for (const OrbitGenerator& g : gs.gens) {
    polys.push_back(compile_poly(g.poly, c.q));
    values.push_back(g.value.v);
  }
  auto satisfies = [&](const std::vector<int32_t>& coords) {
    for (size_t u = 0; u < polys.size(); ++u)
      if (polys[u].eval(coords) != values[u]) return false;
    return true;
  };

  OrbitIdealReport rep;
  auto orbit = orbit_of(c, gs.lambda);
  rep.orbit_size = orbit.size();
  mpz_ui_pow_ui(rep.expected_count.get_mpz_t(), static_cast<unsigned>(c.q),
                static_cast<unsigned>(2 * (c.rt.r_plus - S.size())));

  rep.orbit_satisfies = true;
  for (uint64_t m : orbit)
    if (!satisfies(unpack_coords(c, m))) {
      rep.orbit_satisfies = false;
      break;
    }

  std::vector<std::vector<int32_t>> gens;
  for (const Root& r : c.rt.roots)
    for (int tval = 1; tval < c.q; ++tval)
      gens.push_back(coadjoint_matrix(c, GrpElem::root_elem(c.n, c.q, r, tval)));

  if (!c.enumerable()) {
    // Downgraded mode: equations and stability on the orbit itself.
    rep.partial = true;
    rep.variety_stable = true;
    for (uint64_t m : orbit) {
      LinForm cur = unpack_form(c, m);
      for (const auto& M : gens)
        if (!std::binary_search(orbit.begin(), orbit.end(),
                                pack_form(c, apply_coadjoint_matrix(c, M, cur)))) {
          rep.variety_stable = false;
          break;
        }
      if (!rep.variety_stable) break;
    }
    return rep;
  }

  std::vector<uint64_t> variety;
  for (uint64_t idx = 0; idx < c.size(); ++idx) {
    if (satisfies(unpack_coords(c, idx))) {
      variety.push_back(idx);
      UTGG_REQUIRE(variety.size() <= c.caps.orbit,
                   "verify_orbit_ideal: variety exceeds the orbit cap");
    }
  }
  rep.variety_count = mpz_class(static_cast<unsigned long>(variety.size()));
  rep.counts_match = (rep.variety_count == rep.expected_count);
  rep.variety_equals_orbit = (variety == orbit);
  rep.variety_stable = true;
  for (uint64_t m : variety) {
    LinForm cur = unpack_form(c, m);
    for (const auto& M : gens)
      if (!std::binary_search(variety.begin(), variety.end(),
                              pack_form(c, apply_coadjoint_matrix(c, M, cur)))) {
        rep.variety_stable = false;
        break;
      }
    if (!rep.variety_stable) break;
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Orbit separation (distinct parameters -> distinct orbits) with explicit
// witnesses mirroring the minimal-differing-row argument.
// ---------------------------------------------------------------------------
struct SeparationPair {
  std::string left, right;
  bool disjoint = false;
  bool witnessed = false;
  std::string witness;
};

struct SeparationReport {
  bool all_disjoint = true;
  bool all_witnessed = true;
  std::vector<SeparationPair> pairs;
};

inline bool sorted_disjoint(const std::vector<uint64_t>& a,
                            const std::vector<uint64_t>& b) {
  size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i] == b[j]) return false;
    if (a[i] < b[j])
      ++i;
    else
      ++j;
  }
  return true;
}

inline SeparationReport verify_orbit_separation(const GroupContext& c,
                                                const LinForm& lamchar) {
  struct CaseData {
    SubsetS S;
    AVector a;
    GeneratorSet gs;
    std::vector<uint64_t> orbit;
    std::string label;
  };
  std::vector<CaseData> cases;
  for (const SubsetS& S : all_subsets(c.rt)) {
    LSets ls = compute_lsets(c.rt, S);
    for (const AVector& a : enumerate_a_vectors(ls, c.q)) {
      CaseData cd{S, a, build_generators(c.rt, S, ls, a, lamchar, c.q), {}, {}};
      cd.orbit = orbit_of(c, cd.gs.lambda);
      cd.label = "S=" + S.str() + " a=" + a.str();
      cases.push_back(std::move(cd));
    }
  }
  auto value_at = [](const GeneratorSet& gs, const Root& gamma) -> const Fp* {
    for (const OrbitGenerator& g : gs.gens)
      if (g.gamma == gamma) return &g.value;
    return nullptr;
  };
  SeparationReport rep;
  for (size_t i = 0; i < cases.size(); ++i)
    for (size_t j = i + 1; j < cases.size(); ++j) {
      const CaseData &L = cases[i], &R = cases[j];
      SeparationPair pr;
      pr.left = L.label;
      pr.right = R.label;
      pr.disjoint = sorted_disjoint(L.orbit, R.orbit);
      if (!(L.S.roots == R.S.roots)) {
        // Minimal row where the subsets differ carries a shared generator
        // root lying in L^+ on one side and L^0 on the other: its value is
        // zero exactly on the L^+ side.
        int row = 0;
        for (int rr = 1; rr <= c.rt.k && !row; ++rr) {
          Root mirror{rr, c.rt.n - rr};
          if (L.S.contains(mirror) != R.S.contains(mirror)) row = rr;
        }
        UTGG_REQUIRE(row > 0, "separation: subsets differ but no mirror row");
        const CaseData& in_side = L.S.contains(Root{row, c.rt.n - row}) ? L : R;
        const CaseData& out_side = (&in_side == &L) ? R : L;
        Root gamma{0, 0};
        LSets in_ls = compute_lsets(c.rt, in_side.S);
        for (const Root& r : in_ls.plus)
          if (r.i == row) gamma = r;
        UTGG_REQUIRE(gamma.i == row, "separation: missing L^+ witness root");
        const Fp* v_in = value_at(in_side.gs, gamma);
        const Fp* v_out = value_at(out_side.gs, gamma);
        pr.witnessed = v_in && v_out && v_in->is_zero() && !v_out->is_zero();
        pr.witness = "gamma=" + root_str(gamma) + " zero on " +
                     (&in_side == &L ? "left" : "right") + " only";
      } else {
        // Same subset: the generator systems coincide and some value must
        // differ.
        for (size_t u = 0; u < L.gs.gens.size(); ++u) {
          UTGG_REQUIRE(L.gs.gens[u].poly == R.gs.gens[u].poly,
                       "separation: generator polynomials differ for equal S");
          if (!(L.gs.gens[u].value == R.gs.gens[u].value)) {
            pr.witnessed = true;
            pr.witness = "value mismatch at gamma=" +
                         root_str(L.gs.gens[u].gamma);
            break;
          }
        }
      }
      rep.all_disjoint = rep.all_disjoint && pr.disjoint;
      rep.all_witnessed = rep.all_witnessed && pr.witnessed;
      rep.pairs.push_back(std::move(pr));
    }
  return rep;
}

// ---------------------------------------------------------------------------
// Rendering in the y-notation: y_{ji} stands for the matrix coordinate
// x_{ij} evaluated on forms.  Minors print as determinant tables |...|
// (transposed to y-orientation, which preserves the determinant); expanded
// polynomials print as monomial sums with '*' and ascending factors.
// ---------------------------------------------------------------------------
inline std::string y_name(const Root& r) {
  UTGG_REQUIRE(r.j <= 9, "y_name: single-digit indices only");
  return "y" + std::to_string(r.j) + std::to_string(r.i);
}

inline std::string render_monomial(const RootTables& t,
                                   const MultiPoly::Key& key,
                                   const mpz_class& coeff, bool leading) {
  mpz_class mag = abs(coeff);
  std::string s;
  if (leading)
    s = (coeff < 0) ? "-" : "";
  else
    s = (coeff < 0) ? " - " : " + ";
  std::string body;
  for (size_t u = 0; u < key.size(); ++u)
    for (int32_t e = 0; e < key[u]; ++e) {
      if (!body.empty()) body += "*";
      body += y_name(t.roots[u]);
    }
  if (body.empty()) return s + mag.get_str();
  if (mag != 1) return s + mag.get_str() + "*" + body;
  return s + body;
}

inline std::string render_poly(const RootTables& t, const MultiPoly& poly) {
  if (poly.is_zero()) return "0";
  std::string s;
  bool leading = true;
  for (const auto& [k, c] : poly.terms()) {
    s += render_monomial(t, k, c, leading);
    leading = false;
  }
  return s;
}

inline std::string render_generator(const RootTables& t,
                                    const OrbitGenerator& g) {
  if (g.kind == GenKind::minor) {
    if (g.shape.rows.size() == 1)
      return y_name(g.gamma) + " = " + std::to_string(g.value.v);
    // Transposed table: one row per x-column (ascending), entries run over
    // x-rows (ascending).
    std::string s = "|";
    for (size_t cc = 0; cc < g.shape.cols.size(); ++cc) {
      if (cc) s += "; ";
      for (size_t rr = 0; rr < g.shape.rows.size(); ++rr) {
        if (rr) s += " ";
        s += y_name(Root{g.shape.rows[rr], g.shape.cols[cc]});
      }
    }
    return s + "| = " + std::to_string(g.value.v);
  }
  // Expanded rendering, sign-normalized so the leading (first) term is
  // positive; the right-hand side flips along.
  MultiPoly p = g.poly;
  Fp v = g.value;
  if (!p.terms().empty() && p.terms().begin()->second < 0) {
    p = -p;
    v = -v;
  }
  return render_poly(t, p) + " = " + std::to_string(v.v);
}

inline std::vector<std::string> render_equations(const RootTables& t,
                                                 const GeneratorSet& gs) {
  std::vector<std::string> out;
  for (const OrbitGenerator& g : gs.gens) out.push_back(render_generator(t, g));
  return out;
}

}  // namespace utgg
