#pragma once

// The unitriangular group UT(n, F_q) and its nilpotent algebra.
//
// Elements are handled without exponentials: the algebra element x (strictly
// upper triangular) and the group element 1 + x share coordinates, and all
// group operations reduce to truncated polynomial identities such as
// (1+x)^{-1} = 1 - x + x^2 - ...  Linear forms on the algebra are coordinate
// vectors in the global root order; the coadjoint action, orbits, stabilizer
// ranks and (associative) polarizations are all computed exactly over F_q.

#include <cstdint>
#include <functional>
#include <optional>
#include <unordered_set>
#include <vector>

#include "utgg/exactnum.hpp"
#include "utgg/roots.hpp"

namespace utgg {

// ---------------------------------------------------------------------------
// NilMat — strictly upper-triangular n x n matrix over F_q.
// ---------------------------------------------------------------------------
struct NilMat {
  int n = 0;
  int q = 0;
  std::vector<int32_t> e;  // row-major n*n, entries in [0, q); only i<j used

  NilMat() = default;
  NilMat(int n_, int q_) : n(n_), q(q_), e(static_cast<size_t>(n_ * n_), 0) {
    UTGG_REQUIRE(is_small_prime(q_), "NilMat: q must be prime");
  }

  int at(int i, int j) const {
    return e[static_cast<size_t>((i - 1) * n + (j - 1))];
  }
  void set(int i, int j, long long v) {
    UTGG_REQUIRE(i >= 1 && i < j && j <= n, "NilMat: position not above diagonal");
    long long r = v % q;
    if (r < 0) r += q;
    e[static_cast<size_t>((i - 1) * n + (j - 1))] = static_cast<int32_t>(r);
  }

  static NilMat unit(int n, int q, const Root& r, long long c = 1) {
    NilMat m(n, q);
    m.set(r.i, r.j, c);
    return m;
  }

  bool is_zero() const {
    for (int32_t v : e)
      if (v) return false;
    return true;
  }

  friend NilMat operator+(const NilMat& a, const NilMat& b) {
    UTGG_REQUIRE(a.n == b.n && a.q == b.q, "NilMat: mixed shapes");
    NilMat r(a.n, a.q);
    for (size_t u = 0; u < r.e.size(); ++u)
      r.e[u] = static_cast<int32_t>((a.e[u] + b.e[u]) % a.q);
    return r;
  }
  friend NilMat operator-(const NilMat& a, const NilMat& b) {
    UTGG_REQUIRE(a.n == b.n && a.q == b.q, "NilMat: mixed shapes");
    NilMat r(a.n, a.q);
    for (size_t u = 0; u < r.e.size(); ++u)
      r.e[u] = static_cast<int32_t>(((a.e[u] - b.e[u]) % a.q + a.q) % a.q);
    return r;
  }
  NilMat operator-() const {
    NilMat r(n, q);
    for (size_t u = 0; u < e.size(); ++u)
      r.e[u] = static_cast<int32_t>((q - e[u]) % q);
    return r;
  }
  friend NilMat operator*(const NilMat& a, const NilMat& b) {
    UTGG_REQUIRE(a.n == b.n && a.q == b.q, "NilMat: mixed shapes");
    NilMat r(a.n, a.q);
    for (int i = 1; i <= a.n; ++i)
      for (int j = i + 2; j <= a.n; ++j) {
        long long acc = 0;
        for (int m = i + 1; m < j; ++m)
          acc += static_cast<long long>(a.at(i, m)) * b.at(m, j);
        r.set(i, j, acc);
      }
    return r;
  }
  NilMat scale(long long c) const {
    NilMat r(n, q);
    for (int i = 1; i <= n; ++i)
      for (int j = i + 1; j <= n; ++j)
        r.set(i, j, static_cast<long long>(at(i, j)) * ((c % q + q) % q));
    return r;
  }

  friend NilMat bracket(const NilMat& a, const NilMat& b) {
    return a * b - b * a;
  }

  friend bool operator==(const NilMat&, const NilMat&) = default;
};

// ---------------------------------------------------------------------------
// GrpElem — the group element 1 + x.
// ---------------------------------------------------------------------------
struct GrpElem {
  NilMat x;  // strict upper part

  GrpElem() = default;
  explicit GrpElem(NilMat m) : x(std::move(m)) {}
  static GrpElem identity(int n, int q) { return GrpElem(NilMat(n, q)); }

  // One-parameter root element 1 + t*E_r.
  static GrpElem root_elem(int n, int q, const Root& r, long long t) {
    return GrpElem(NilMat::unit(n, q, r, t));
  }

  friend GrpElem operator*(const GrpElem& a, const GrpElem& b) {
    return GrpElem(a.x + b.x + a.x * b.x);
  }

  GrpElem inv() const {
    // (1+x)^{-1} = 1 + sum_{m>=1} (-x)^m; the sum truncates at n-1.
    NilMat acc = -x, pw = -x;
    for (int m = 2; m < x.n; ++m) {
      pw = pw * (-x);
      if (pw.is_zero()) break;
      acc = acc + pw;
    }
    return GrpElem(acc);
  }

  friend bool operator==(const GrpElem&, const GrpElem&) = default;
};

inline GrpElem conjugate(const GrpElem& g, const GrpElem& h) {
  return g * h * g.inv();
}

// ---------------------------------------------------------------------------
// GroupContext — fixed (n, q) with enumeration data.  Group and dual-space
// elements are packed into uint64 indices via base-q digits in the global
// root order (root 0 least significant).
// ---------------------------------------------------------------------------
struct ResourceCaps {
  uint64_t group_enum = 1000000;  // max q^N for full-group enumeration
  uint64_t orbit = 100000;        // max coadjoint orbit size
};

struct GroupContext {
  int n = 0;
  int q = 0;
  RootTables rt;
  mpz_class order;            // q^N exactly
  std::vector<uint64_t> powq; // q^t for t = 0..N, saturating at uint64 max
  ResourceCaps caps;

  bool enumerable() const {
    return order <= mpz_class(static_cast<unsigned long>(caps.group_enum));
  }
  uint64_t size() const {
    UTGG_REQUIRE(enumerable(),
                 "GroupContext: group order exceeds enumeration cap");
    return powq[static_cast<size_t>(rt.N)];
  }
};

inline GroupContext make_context(int n, int q,
                                 const ResourceCaps& caps = ResourceCaps{}) {
  UTGG_REQUIRE(is_small_prime(q), "make_context: q must be prime");
  GroupContext c;
  c.n = n;
  c.q = q;
  c.rt = build_tables(n);
  c.caps = caps;
  mpz_ui_pow_ui(c.order.get_mpz_t(), static_cast<unsigned>(q),
                static_cast<unsigned>(c.rt.N));
  c.powq.assign(static_cast<size_t>(c.rt.N + 1), 0);
  c.powq[0] = 1;
  for (int t = 1; t <= c.rt.N; ++t) {
    uint64_t prev = c.powq[static_cast<size_t>(t - 1)];
    UTGG_REQUIRE(prev <= UINT64_MAX / static_cast<uint64_t>(q),
                 "make_context: q^N overflows packing range");
    c.powq[static_cast<size_t>(t)] = prev * static_cast<uint64_t>(q);
  }
  return c;
}

// Coordinates (values at roots, global order) <-> packed index.
inline uint64_t pack_coords(const GroupContext& c,
                            const std::vector<int32_t>& v) {
  UTGG_REQUIRE(static_cast<int>(v.size()) == c.rt.N, "pack_coords: wrong size");
  uint64_t idx = 0;
  for (int t = 0; t < c.rt.N; ++t)
    idx += static_cast<uint64_t>(v[static_cast<size_t>(t)]) *
           c.powq[static_cast<size_t>(t)];
  return idx;
}
inline std::vector<int32_t> unpack_coords(const GroupContext& c, uint64_t idx) {
  std::vector<int32_t> v(static_cast<size_t>(c.rt.N));
  for (int t = 0; t < c.rt.N; ++t) {
    v[static_cast<size_t>(t)] = static_cast<int32_t>(idx % c.q);
    idx /= static_cast<uint64_t>(c.q);
  }
  UTGG_REQUIRE(idx == 0, "unpack_coords: index out of range");
  return v;
}

inline std::vector<int32_t> mat_coords(const GroupContext& c, const NilMat& m) {
  std::vector<int32_t> v(static_cast<size_t>(c.rt.N));
  for (int t = 0; t < c.rt.N; ++t) {
    const Root& r = c.rt.roots[static_cast<size_t>(t)];
    v[static_cast<size_t>(t)] = static_cast<int32_t>(m.at(r.i, r.j));
  }
  return v;
}
inline NilMat mat_from_coords(const GroupContext& c,
                              const std::vector<int32_t>& v) {
  NilMat m(c.n, c.q);
  for (int t = 0; t < c.rt.N; ++t) {
    const Root& r = c.rt.roots[static_cast<size_t>(t)];
    m.set(r.i, r.j, v[static_cast<size_t>(t)]);
  }
  return m;
}

inline uint64_t elem_index(const GroupContext& c, const GrpElem& g) {
  return pack_coords(c, mat_coords(c, g.x));
}
inline GrpElem elem_at(const GroupContext& c, uint64_t idx) {
  return GrpElem(mat_from_coords(c, unpack_coords(c, idx)));
}

// Indices of the subgroup {1 + x : supp(x) within the given root set}.  The
// root set must be closed under partial sums for this to be a subgroup; the
// caller guarantees that (R+, R_S and friends all are).
inline std::vector<uint64_t> subgroup_indices(const GroupContext& c,
                                              const std::vector<Root>& roots) {
  uint64_t count = 1;
  std::vector<int> pos;
  for (const Root& r : roots) {
    pos.push_back(c.rt.index_of(r));
    count *= static_cast<uint64_t>(c.q);
    UTGG_REQUIRE(count <= c.caps.group_enum,
                 "subgroup_indices: subgroup exceeds enumeration cap");
  }
  std::vector<uint64_t> out;
  out.reserve(count);
  std::vector<int32_t> digits(pos.size(), 0);
  for (uint64_t u = 0;; ++u) {
    uint64_t idx = 0;
    for (size_t t = 0; t < pos.size(); ++t)
      idx += static_cast<uint64_t>(digits[t]) *
             c.powq[static_cast<size_t>(pos[t])];
    out.push_back(idx);
    size_t t = 0;
    while (t < digits.size() && ++digits[t] == c.q) digits[t++] = 0;
    if (t == digits.size()) break;
  }
  std::sort(out.begin(), out.end());
  return out;
}

// ---------------------------------------------------------------------------
// LinForm — element of the dual space g*, coordinates in the global root
// order: v[t] = lambda(E_{root t}).
// ---------------------------------------------------------------------------
struct LinForm {
  int q = 0;
  std::vector<int32_t> v;

  LinForm() = default;
  LinForm(int q_, int N) : q(q_), v(static_cast<size_t>(N), 0) {}

  int32_t at(const RootTables& rt, const Root& r) const {
    return v[static_cast<size_t>(rt.index_of(r))];
  }
  void set(const RootTables& rt, const Root& r, long long c) {
    long long m = c % q;
    if (m < 0) m += q;
    v[static_cast<size_t>(rt.index_of(r))] = static_cast<int32_t>(m);
  }

  // lambda(x) for an algebra element.
  Fp eval(const GroupContext& c, const NilMat& x) const {
    long long acc = 0;
    for (int t = 0; t < c.rt.N; ++t) {
      const Root& r = c.rt.roots[static_cast<size_t>(t)];
      acc += static_cast<long long>(v[static_cast<size_t>(t)]) * x.at(r.i, r.j);
    }
    return Fp(acc, q);
  }

  bool is_zero() const {
    for (int32_t x : v)
      if (x) return false;
    return true;
  }

  friend bool operator==(const LinForm&, const LinForm&) = default;
};

inline uint64_t pack_form(const GroupContext& c, const LinForm& l) {
  return pack_coords(c, l.v);
}
inline LinForm unpack_form(const GroupContext& c, uint64_t idx) {
  LinForm l;
  l.q = c.q;
  l.v = unpack_coords(c, idx);
  return l;
}

// ---------------------------------------------------------------------------
// Coadjoint action (g . lambda)(x) = lambda(g^{-1} x g).
// ---------------------------------------------------------------------------

// Row-major N x N matrix M with (g . lambda)[r] = sum_s M[r*N+s] * lambda[s];
// row r holds the coordinates of g^{-1} E_r g.
inline std::vector<int32_t> coadjoint_matrix(const GroupContext& c,
                                             const GrpElem& g) {
  const int N = c.rt.N;
  std::vector<int32_t> M(static_cast<size_t>(N) * static_cast<size_t>(N), 0);
  GrpElem gi = g.inv();
  for (int r = 0; r < N; ++r) {
    const Root& rt = c.rt.roots[static_cast<size_t>(r)];
    // g^{-1} E_r g = (1+u)^{-1} E_r (1+u) with u = g.x; expand directly.
    NilMat er = NilMat::unit(c.n, c.q, rt);
    NilMat left = er + gi.x * er;          // (1+u)^{-1} E_r
    NilMat full = left + left * g.x;       // ... (1+u)
    std::vector<int32_t> row = mat_coords(c, full);
    for (int s = 0; s < N; ++s)
      M[static_cast<size_t>(r) * static_cast<size_t>(N) +
        static_cast<size_t>(s)] = row[static_cast<size_t>(s)];
  }
  return M;
}

inline LinForm apply_coadjoint_matrix(const GroupContext& c,
                                      const std::vector<int32_t>& M,
                                      const LinForm& l) {
  const int N = c.rt.N;
  LinForm out(c.q, N);
  for (int r = 0; r < N; ++r) {
    long long acc = 0;
    const int32_t* row = &M[static_cast<size_t>(r) * static_cast<size_t>(N)];
    for (int s = 0; s < N; ++s)
      acc += static_cast<long long>(row[s]) * l.v[static_cast<size_t>(s)];
    out.v[static_cast<size_t>(r)] = static_cast<int32_t>(acc % c.q);
  }
  return out;
}

inline LinForm coadjoint(const GroupContext& c, const GrpElem& g,
                         const LinForm& l) {
  return apply_coadjoint_matrix(c, coadjoint_matrix(c, g), l);
}

// Coadjoint orbit of lambda as a sorted vector of packed forms.  BFS over
// the one-parameter generators 1 + t E_r; aborts past the orbit cap.
inline std::vector<uint64_t> orbit_of(const GroupContext& c, const LinForm& l) {
  std::vector<std::vector<int32_t>> gens;
  for (const Root& r : c.rt.roots)
    for (int t = 1; t < c.q; ++t)
      gens.push_back(coadjoint_matrix(c, GrpElem::root_elem(c.n, c.q, r, t)));
  std::unordered_set<uint64_t> seen;
  std::vector<uint64_t> frontier{pack_form(c, l)};
  seen.insert(frontier[0]);
  while (!frontier.empty()) {
    std::vector<uint64_t> next;
    for (uint64_t idx : frontier) {
      LinForm cur = unpack_form(c, idx);
      for (const auto& M : gens) {
        uint64_t nb = pack_form(c, apply_coadjoint_matrix(c, M, cur));
        if (seen.insert(nb).second) {
          UTGG_REQUIRE(seen.size() <= c.caps.orbit,
                       "orbit_of: orbit exceeds cap");
          next.push_back(nb);
        }
      }
    }
    frontier = std::move(next);
  }
  std::vector<uint64_t> out(seen.begin(), seen.end());
  std::sort(out.begin(), out.end());
  return out;
}

// ---------------------------------------------------------------------------
// Rank of the skew form B_lambda(E_a, E_b) = lambda([E_a, E_b]) and the
// stabilizer dimension dim g^lambda = N - rank.
// ---------------------------------------------------------------------------
inline int rank_fp(std::vector<std::vector<int32_t>> m, int p) {
  int rows = static_cast<int>(m.size());
  if (rows == 0) return 0;
  int cols = static_cast<int>(m[0].size());
  int rank = 0;
  for (int col = 0; col < cols && rank < rows; ++col) {
    int pivot = -1;
    for (int r = rank; r < rows; ++r)
      if (m[static_cast<size_t>(r)][static_cast<size_t>(col)] % p != 0) {
        pivot = r;
        break;
      }
    if (pivot < 0) continue;
    std::swap(m[static_cast<size_t>(pivot)], m[static_cast<size_t>(rank)]);
    Fp inv = Fp(m[static_cast<size_t>(rank)][static_cast<size_t>(col)], p).inv();
    for (int cc = col; cc < cols; ++cc) {
      auto& x = m[static_cast<size_t>(rank)][static_cast<size_t>(cc)];
      x = (Fp(x, p) * inv).v;
    }
    for (int r = 0; r < rows; ++r) {
      if (r == rank) continue;
      int32_t f = ((m[static_cast<size_t>(r)][static_cast<size_t>(col)] % p) + p) % p;
      if (!f) continue;
      for (int cc = col; cc < cols; ++cc) {
        auto& x = m[static_cast<size_t>(r)][static_cast<size_t>(cc)];
        x = (Fp(x, p) - Fp(f, p) * Fp(m[static_cast<size_t>(rank)][static_cast<size_t>(cc)], p)).v;
      }
    }
    ++rank;
  }
  return rank;
}

inline std::vector<std::vector<int32_t>> b_matrix(const GroupContext& c,
                                                  const LinForm& l) {
  const int N = c.rt.N;
  std::vector<std::vector<int32_t>> B(static_cast<size_t>(N),
                                      std::vector<int32_t>(static_cast<size_t>(N), 0));
  for (int a = 0; a < N; ++a)
    for (int b = 0; b < N; ++b) {
      const Root &ra = c.rt.roots[static_cast<size_t>(a)],
                 &rb = c.rt.roots[static_cast<size_t>(b)];
      long long val = 0;
      if (auto s = root_sum(ra, rb)) val += l.at(c.rt, *s);
      if (auto s = root_sum(rb, ra)) val -= l.at(c.rt, *s);
      B[static_cast<size_t>(a)][static_cast<size_t>(b)] =
          static_cast<int32_t>(((val % c.q) + c.q) % c.q);
    }
  return B;
}

inline int stabilizer_dim(const GroupContext& c, const LinForm& l) {
  return c.rt.N - rank_fp(b_matrix(c, l), c.q);
}

// Predicted orbit size q^{rank B_lambda}, as an exact integer.
inline mpz_class orbit_size_formula(const GroupContext& c, const LinForm& l) {
  mpz_class r;
  mpz_ui_pow_ui(r.get_mpz_t(), static_cast<unsigned>(c.q),
                static_cast<unsigned>(rank_fp(b_matrix(c, l), c.q)));
  return r;
}

// ---------------------------------------------------------------------------
// Subspace — an F_p subspace of coordinate space, kept in reduced row
// echelon form so that equality, membership and dimension are immediate.
// ---------------------------------------------------------------------------
class Subspace {
 public:
  Subspace(int ambient, int p) : ambient_(ambient), p_(p) {
    UTGG_REQUIRE(is_small_prime(p), "Subspace: p must be prime");
  }

  int ambient() const { return ambient_; }
  int dim() const { return static_cast<int>(rows_.size()); }
  const std::vector<std::vector<int32_t>>& basis() const { return rows_; }

  // Reduce v against the current rows; returns the residue.
  std::vector<int32_t> residue(std::vector<int32_t> v) const {
    UTGG_REQUIRE(static_cast<int>(v.size()) == ambient_, "Subspace: wrong size");
    for (size_t r = 0; r < rows_.size(); ++r) {
      int32_t coef = v[static_cast<size_t>(pivots_[r])] % p_;
      if (coef == 0) continue;
      for (int t = 0; t < ambient_; ++t)
        v[static_cast<size_t>(t)] = (Fp(v[static_cast<size_t>(t)], p_) -
                                     Fp(coef, p_) * Fp(rows_[r][static_cast<size_t>(t)], p_)).v;
    }
    return v;
  }

  bool contains(const std::vector<int32_t>& v) const {
    for (int32_t x : residue(v))
      if (x % p_ != 0) return false;
    return true;
  }

  // Insert a vector; returns true when the dimension grew.
  bool insert(std::vector<int32_t> v) {
    v = residue(std::move(v));
    int pivot = -1;
    for (int t = 0; t < ambient_; ++t)
      if (v[static_cast<size_t>(t)] % p_ != 0) {
        pivot = t;
        break;
      }
    if (pivot < 0) return false;
    Fp inv = Fp(v[static_cast<size_t>(pivot)], p_).inv();
    for (int t = 0; t < ambient_; ++t)
      v[static_cast<size_t>(t)] = (Fp(v[static_cast<size_t>(t)], p_) * inv).v;
    // Eliminate the new pivot from existing rows, keep rows sorted by pivot.
    for (size_t r = 0; r < rows_.size(); ++r) {
      int32_t coef = rows_[r][static_cast<size_t>(pivot)];
      if (coef == 0) continue;
      for (int t = 0; t < ambient_; ++t)
        rows_[r][static_cast<size_t>(t)] =
            (Fp(rows_[r][static_cast<size_t>(t)], p_) -
             Fp(coef, p_) * Fp(v[static_cast<size_t>(t)], p_)).v;
    }
    size_t at = 0;
    while (at < pivots_.size() && pivots_[at] < pivot) ++at;
    rows_.insert(rows_.begin() + static_cast<long>(at), std::move(v));
    pivots_.insert(pivots_.begin() + static_cast<long>(at), pivot);
    return true;
  }

  // All q^dim member vectors, in lexicographic coefficient order.
  std::vector<std::vector<int32_t>> elements() const {
    std::vector<std::vector<int32_t>> out;
    std::vector<int32_t> coef(rows_.size(), 0);
    while (true) {
      std::vector<int32_t> v(static_cast<size_t>(ambient_), 0);
      for (size_t r = 0; r < rows_.size(); ++r)
        for (int t = 0; t < ambient_; ++t)
          v[static_cast<size_t>(t)] =
              (Fp(v[static_cast<size_t>(t)], p_) +
               Fp(coef[r], p_) * Fp(rows_[r][static_cast<size_t>(t)], p_)).v;
      out.push_back(std::move(v));
      size_t r = 0;
      while (r < coef.size() && ++coef[r] == p_) coef[r++] = 0;
      if (r == coef.size()) break;
    }
    return out;
  }

  friend bool operator==(const Subspace& a, const Subspace& b) {
    return a.ambient_ == b.ambient_ && a.p_ == b.p_ && a.rows_ == b.rows_;
  }

 private:
  int ambient_;
  int p_;
  std::vector<std::vector<int32_t>> rows_;  // RREF, pivots strictly increasing
  std::vector<int> pivots_;
};

// ---------------------------------------------------------------------------
// FiniteAlgebra — a nilpotent associative algebra over F_p presented by a
// basis multiplication table; the common ground between ut(n) and the small
// hand-built counterexample algebras.
// ---------------------------------------------------------------------------
struct FiniteAlgebra {
  int dim = 0;
  int p = 0;
  // prod[a][b] = coordinates of e_a * e_b
  std::vector<std::vector<std::vector<int32_t>>> prod;

  std::vector<int32_t> mul(const std::vector<int32_t>& x,
                           const std::vector<int32_t>& y) const {
    std::vector<int32_t> out(static_cast<size_t>(dim), 0);
    for (int a = 0; a < dim; ++a) {
      if (x[static_cast<size_t>(a)] % p == 0) continue;
      for (int b = 0; b < dim; ++b) {
        if (y[static_cast<size_t>(b)] % p == 0) continue;
        long long c = static_cast<long long>(x[static_cast<size_t>(a)]) *
                      y[static_cast<size_t>(b)];
        for (int t = 0; t < dim; ++t) {
          long long add = c * prod[static_cast<size_t>(a)][static_cast<size_t>(b)]
                                  [static_cast<size_t>(t)];
          out[static_cast<size_t>(t)] = static_cast<int32_t>(
              (((out[static_cast<size_t>(t)] + add) % p) + p) % p);
        }
      }
    }
    return out;
  }

  // ut(n) in the root basis: E_a E_b = E_{a+b} when the sum is defined.
  static FiniteAlgebra strictly_upper(int n, int p) {
    RootTables rt = build_tables(n);
    FiniteAlgebra alg;
    alg.dim = rt.N;
    alg.p = p;
    alg.prod.assign(static_cast<size_t>(rt.N),
                    std::vector<std::vector<int32_t>>(
                        static_cast<size_t>(rt.N),
                        std::vector<int32_t>(static_cast<size_t>(rt.N), 0)));
    for (int a = 0; a < rt.N; ++a)
      for (int b = 0; b < rt.N; ++b)
        if (auto s = root_sum(rt.roots[static_cast<size_t>(a)],
                              rt.roots[static_cast<size_t>(b)]))
          alg.prod[static_cast<size_t>(a)][static_cast<size_t>(b)]
                  [static_cast<size_t>(rt.index_of(*s))] = 1;
    return alg;
  }

  // The subalgebra spanned by the given (independent, multiplicatively
  // closed) vectors of an ambient algebra, re-expressed in its own basis.
  static FiniteAlgebra subalgebra(const FiniteAlgebra& amb,
                                  const std::vector<std::vector<int32_t>>& basis) {
    Subspace span(amb.dim, amb.p);
    for (const auto& v : basis)
      UTGG_REQUIRE(span.insert(v), "subalgebra: basis not independent");
    const int d = static_cast<int>(basis.size());
    // Express w in the given basis by solving the linear system exactly.
    auto express = [&](const std::vector<int32_t>& w) {
      std::vector<std::vector<int32_t>> m(
          static_cast<size_t>(amb.dim),
          std::vector<int32_t>(static_cast<size_t>(d + 1), 0));
      for (int r = 0; r < amb.dim; ++r) {
        for (int cidx = 0; cidx < d; ++cidx)
          m[static_cast<size_t>(r)][static_cast<size_t>(cidx)] =
              basis[static_cast<size_t>(cidx)][static_cast<size_t>(r)];
        m[static_cast<size_t>(r)][static_cast<size_t>(d)] =
            w[static_cast<size_t>(r)];
      }
      // Gaussian elimination with the augmented column.
      std::vector<int32_t> sol(static_cast<size_t>(d), 0);
      int row = 0;
      std::vector<int> pivot_of_col(static_cast<size_t>(d), -1);
      for (int col = 0; col < d && row < amb.dim; ++col) {
        int pr = -1;
        for (int r = row; r < amb.dim; ++r)
          if (m[static_cast<size_t>(r)][static_cast<size_t>(col)] % amb.p != 0) {
            pr = r;
            break;
          }
        if (pr < 0) continue;
        std::swap(m[static_cast<size_t>(pr)], m[static_cast<size_t>(row)]);
        Fp inv = Fp(m[static_cast<size_t>(row)][static_cast<size_t>(col)], amb.p).inv();
        for (int cc = 0; cc <= d; ++cc)
          m[static_cast<size_t>(row)][static_cast<size_t>(cc)] =
              (Fp(m[static_cast<size_t>(row)][static_cast<size_t>(cc)], amb.p) * inv).v;
        for (int r = 0; r < amb.dim; ++r) {
          if (r == row) continue;
          int32_t f = m[static_cast<size_t>(r)][static_cast<size_t>(col)];
          if (f % amb.p == 0) continue;
          for (int cc = 0; cc <= d; ++cc)
            m[static_cast<size_t>(r)][static_cast<size_t>(cc)] =
                (Fp(m[static_cast<size_t>(r)][static_cast<size_t>(cc)], amb.p) -
                 Fp(f, amb.p) *
                     Fp(m[static_cast<size_t>(row)][static_cast<size_t>(cc)], amb.p)).v;
        }
        pivot_of_col[static_cast<size_t>(col)] = row;
        ++row;
      }
      for (int r = row; r < amb.dim; ++r)
        UTGG_REQUIRE(m[static_cast<size_t>(r)][static_cast<size_t>(d)] % amb.p == 0,
                     "subalgebra: product leaves the span");
      for (int col = 0; col < d; ++col)
        if (pivot_of_col[static_cast<size_t>(col)] >= 0)
          sol[static_cast<size_t>(col)] =
              m[static_cast<size_t>(pivot_of_col[static_cast<size_t>(col)])]
               [static_cast<size_t>(d)];
      return sol;
    };
    FiniteAlgebra alg;
    alg.dim = d;
    alg.p = amb.p;
    alg.prod.assign(static_cast<size_t>(d),
                    std::vector<std::vector<int32_t>>(
                        static_cast<size_t>(d),
                        std::vector<int32_t>(static_cast<size_t>(d), 0)));
    for (int a = 0; a < d; ++a)
      for (int b = 0; b < d; ++b)
        alg.prod[static_cast<size_t>(a)][static_cast<size_t>(b)] = express(
            amb.mul(basis[static_cast<size_t>(a)], basis[static_cast<size_t>(b)]));
    return alg;
  }

  // The radical t F_p[t] / (t^m): basis t, t^2, ..., t^{m-1}.  m = 3 is the
  // two-dimensional commutative algebra isomorphic to
  // span{E_12 + E_23, E_13} inside ut(3).
  static FiniteAlgebra truncated_poly_radical(int p, int m) {
    UTGG_REQUIRE(m >= 2, "truncated_poly_radical: m must be at least 2");
    FiniteAlgebra alg;
    alg.dim = m - 1;
    alg.p = p;
    alg.prod.assign(static_cast<size_t>(m - 1),
                    std::vector<std::vector<int32_t>>(
                        static_cast<size_t>(m - 1),
                        std::vector<int32_t>(static_cast<size_t>(m - 1), 0)));
    for (int a = 1; a <= m - 1; ++a)
      for (int b = 1; b <= m - 1; ++b)
        if (a + b <= m - 1)
          alg.prod[static_cast<size_t>(a - 1)][static_cast<size_t>(b - 1)]
                  [static_cast<size_t>(a + b - 1)] = 1;
    return alg;
  }
};

// Skew form and stabilizer dimension for a linear form on a FiniteAlgebra.
inline std::vector<std::vector<int32_t>> alg_b_matrix(
    const FiniteAlgebra& alg, const std::vector<int32_t>& lam) {
  std::vector<std::vector<int32_t>> B(
      static_cast<size_t>(alg.dim),
      std::vector<int32_t>(static_cast<size_t>(alg.dim), 0));
  for (int a = 0; a < alg.dim; ++a)
    for (int b = 0; b < alg.dim; ++b) {
      long long val = 0;
      for (int t = 0; t < alg.dim; ++t)
        val += static_cast<long long>(
                   alg.prod[static_cast<size_t>(a)][static_cast<size_t>(b)]
                           [static_cast<size_t>(t)] -
                   alg.prod[static_cast<size_t>(b)][static_cast<size_t>(a)]
                           [static_cast<size_t>(t)]) *
               lam[static_cast<size_t>(t)];
      B[static_cast<size_t>(a)][static_cast<size_t>(b)] =
          static_cast<int32_t>(((val % alg.p) + alg.p) % alg.p);
    }
  return B;
}

inline int alg_stabilizer_dim(const FiniteAlgebra& alg,
                              const std::vector<int32_t>& lam) {
  return alg.dim - rank_fp(alg_b_matrix(alg, lam), alg.p);
}

// ---------------------------------------------------------------------------
// Associative polarizations.
// ---------------------------------------------------------------------------

// True iff the subspace is (a) closed under the product, (b) annihilated by
// lambda on all products, (c) isotropic for the bracket, and (d) of the
// maximal dimension (dim algebra + dim stabilizer) / 2.
inline bool is_associative_polarization(const FiniteAlgebra& alg,
                                        const Subspace& pspace,
                                        const std::vector<int32_t>& lam) {
  UTGG_REQUIRE(pspace.ambient() == alg.dim,
               "is_associative_polarization: ambient mismatch");
  auto eval = [&](const std::vector<int32_t>& x) {
    long long acc = 0;
    for (int t = 0; t < alg.dim; ++t)
      acc += static_cast<long long>(lam[static_cast<size_t>(t)]) *
             x[static_cast<size_t>(t)];
    return ((acc % alg.p) + alg.p) % alg.p;
  };
  const auto& rows = pspace.basis();
  for (const auto& x : rows)
    for (const auto& y : rows) {
      auto xy = alg.mul(x, y);
      if (!pspace.contains(xy)) return false;       // (a)
      if (eval(xy) != 0) return false;              // (b)
      auto yx = alg.mul(y, x);
      long long br = eval(xy) - eval(yx);
      if (((br % alg.p) + alg.p) % alg.p != 0) return false;  // (c)
    }
  int stab = alg_stabilizer_dim(alg, lam);
  if ((alg.dim + stab) % 2 != 0) return false;
  return pspace.dim() == (alg.dim + stab) / 2;      // (d)
}

// Visit every d-dimensional subspace of F_p^ambient exactly once (reduced
// row echelon enumeration).  Returns false when the visitor stops early.
inline bool for_each_subspace(int ambient, int p, int d,
                              const std::function<bool(const Subspace&)>& fn) {
  UTGG_REQUIRE(d >= 0 && d <= ambient, "for_each_subspace: bad dimension");
  std::vector<int> pivots(static_cast<size_t>(d));
  std::function<bool(int, int)> choose = [&](int at, int from) -> bool {
    if (at == d) {
      // Free positions: col > pivot[r], col not a later pivot.
      std::vector<std::pair<int, int>> free_pos;
      for (int r = 0; r < d; ++r)
        for (int col = pivots[static_cast<size_t>(r)] + 1; col < ambient; ++col) {
          bool is_pivot = false;
          for (int rr = 0; rr < d; ++rr)
            if (pivots[static_cast<size_t>(rr)] == col) is_pivot = true;
          if (!is_pivot) free_pos.push_back({r, col});
        }
      std::vector<int32_t> fill(free_pos.size(), 0);
      while (true) {
        Subspace sp(ambient, p);
        std::vector<std::vector<int32_t>> rows(
            static_cast<size_t>(d),
            std::vector<int32_t>(static_cast<size_t>(ambient), 0));
        for (int r = 0; r < d; ++r)
          rows[static_cast<size_t>(r)][static_cast<size_t>(pivots[static_cast<size_t>(r)])] = 1;
        for (size_t u = 0; u < free_pos.size(); ++u)
          rows[static_cast<size_t>(free_pos[u].first)]
              [static_cast<size_t>(free_pos[u].second)] = fill[u];
        for (auto& row : rows) sp.insert(std::move(row));
        if (!fn(sp)) return false;
        size_t u = 0;
        while (u < fill.size() && ++fill[u] == p) fill[u++] = 0;
        if (u == fill.size()) break;
      }
      return true;
    }
    for (int col = from; col <= ambient - (d - at); ++col) {
      pivots[static_cast<size_t>(at)] = col;
      if (!choose(at + 1, col + 1)) return false;
    }
    return true;
  };
  return choose(0, 0);
}

// Exhaustive search for an associative polarization of lambda.  Only the
// forced dimension (dim + stab)/2 is scanned; absent when the parity is off
// or no subspace passes.
inline std::optional<Subspace> search_associative_polarization(
    const FiniteAlgebra& alg, const std::vector<int32_t>& lam) {
  UTGG_REQUIRE(alg.dim <= 6 && alg.p <= 3,
               "search_associative_polarization: exhaustive cap exceeded");
  int stab = alg_stabilizer_dim(alg, lam);
  if ((alg.dim + stab) % 2 != 0) return std::nullopt;
  int d = (alg.dim + stab) / 2;
  std::optional<Subspace> found;
  for_each_subspace(alg.dim, alg.p, d, [&](const Subspace& sp) {
    if (is_associative_polarization(alg, sp, lam)) {
      found = sp;
      return false;
    }
    return true;
  });
  return found;
}

// ---------------------------------------------------------------------------
// The canonical subalgebra p_S and canonical forms lambda_{S,a}.
// ---------------------------------------------------------------------------

// Roots spanning p_S = g_+ (+) l_S.
inline std::vector<Root> build_p_S(const RootTables& t, const LSets& ls) {
  return support_R_S(t, ls);
}

inline Subspace root_span(const GroupContext& c, const std::vector<Root>& roots) {
  Subspace sp(c.rt.N, c.q);
  for (const Root& r : roots) {
    std::vector<int32_t> v(static_cast<size_t>(c.rt.N), 0);
    v[static_cast<size_t>(c.rt.index_of(r))] = 1;
    sp.insert(std::move(v));
  }
  return sp;
}

// Convenience overload for ut(n) with a root-spanned subspace.
inline bool is_associative_polarization(const GroupContext& c,
                                        const std::vector<Root>& roots,
                                        const LinForm& lam) {
  FiniteAlgebra alg = FiniteAlgebra::strictly_upper(c.n, c.q);
  std::vector<int32_t> lv(lam.v.begin(), lam.v.end());
  return is_associative_polarization(alg, root_span(c, roots), lv);
}

// A character form of the over-diagonal subgroup: supported on the simple
// roots Pi0 | Pi, nonzero on every mirror root outside Pi0 (nondegeneracy).
inline void validate_character_form(const RootTables& t, const LinForm& lam) {
  UTGG_REQUIRE(static_cast<int>(lam.v.size()) == t.N,
               "character form: wrong length");
  for (const Root& r : t.roots) {
    int32_t val = lam.at(t, r);
    if (val != 0)
      UTGG_REQUIRE(t.in_pi0(r) || t.in_pi(r),
                   "character form: supported outside the simple roots at " +
                       root_str(r));
  }
  for (const Root& r : t.pi)
    if (!t.in_pi0(r))
      UTGG_REQUIRE(lam.at(t, r) != 0,
                   "character form: degenerate (zero) at mirror root " +
                       root_str(r));
}

// The canonical form lambda_{S,a}: equal to the character form on
// Pi0 \ Pi and on S, equal to a on the ladder roots L^0 | L^00 | L^-, zero
// elsewhere (in particular on Pi \ S and on L^+).
inline LinForm build_canonical_form(const RootTables& t, const SubsetS& S,
                                    const LSets& ls, const LinForm& lamchar,
                                    const AVector& a, int q) {
  validate_character_form(t, lamchar);
  validate_a_vector(ls, a, q);
  LinForm out(q, t.N);
  for (const Root& r : t.pi0)
    if (!t.in_pi(r)) out.set(t, r, lamchar.at(t, r));
  for (const Root& r : S.roots) out.set(t, r, lamchar.at(t, r));
  for (size_t u = 0; u < a.domain.size(); ++u)
    out.set(t, a.domain[u], a.vals[u]);
  // Ladder consequences baked into the construction.
  for (const Root& r : ls.zero)
    UTGG_REQUIRE(out.at(t, r) != 0, "canonical form: zero on an L^0 root");
  for (const Root& r : ls.plus)
    UTGG_REQUIRE(out.at(t, r) == 0, "canonical form: nonzero on an L^+ root");
  return out;
}

}  // namespace utgg
