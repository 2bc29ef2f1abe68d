#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "utgg/hecke.hpp"

using namespace utgg;

namespace {

LinForm ones_char(const RootTables& rt, int q) {
  LinForm l(q, rt.N);
  for (const Root& r : rt.pi0) l.set(rt, r, 1);
  for (const Root& r : rt.pi) l.set(rt, r, 1);
  return l;
}

CycInt ci(int p, long v) { return CycInt::from_int(p, mpz_class(v)); }

// |support| of the subgroup mask behind xi.
uint64_t subgroup_size(const GroupFunction& xi) { return xi.mask.size(); }

bool proportional(const GroupAlgebraElem& a, const GroupAlgebraElem& b) {
  if (a.is_zero() || b.is_zero()) return a.is_zero() && b.is_zero();
  if (a.support.size() != b.support.size()) return false;
  auto ita = a.support.begin();
  auto itb = b.support.find(ita->first);
  if (itb == b.support.end()) return false;
  CycRat r = CycRat::of(itb->second) / CycRat::of(ita->second);
  for (const auto& [g, ca] : a.support) {
    auto it = b.support.find(g);
    if (it == b.support.end()) return false;
    if (!(CycRat::of(it->second) == r * CycRat::of(ca))) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("group algebra: delta elements and convolution", "[hecke]") {
  GroupContext c = make_context(3, 3);
  std::mt19937_64 rng(4242);
  auto rand_idx = [&] { return rng() % c.size(); };

  // delta_g * delta_h = delta_{gh}; delta_e is the identity.
  for (int rep = 0; rep < 20; ++rep) {
    uint64_t g = rand_idx(), h = rand_idx();
    uint64_t gh = elem_index(c, elem_at(c, g) * elem_at(c, h));
    CHECK(convolve(c, delta_elem(3, g), delta_elem(3, h)) == delta_elem(3, gh));
    CHECK(convolve(c, delta_elem(3, g), delta_elem(3, 0)) == delta_elem(3, g));
    CHECK(convolve(c, delta_elem(3, 0), delta_elem(3, g)) == delta_elem(3, g));
  }

  // Associativity on random small elements.
  auto rand_elem = [&] {
    GroupAlgebraElem e;
    e.p = 3;
    for (int t = 0; t < 4; ++t)
      e.add_term(rand_idx(), ci(3, static_cast<long>(rng() % 5) - 2));
    return e;
  };
  for (int rep = 0; rep < 10; ++rep) {
    GroupAlgebraElem u = rand_elem(), v = rand_elem(), w = rand_elem();
    CHECK(convolve(c, convolve(c, u, v), w) == convolve(c, u, convolve(c, v, w)));
  }

  // Zero coefficients are never stored.
  GroupAlgebraElem z;
  z.p = 3;
  z.add_term(5, ci(3, 2));
  z.add_term(5, ci(3, -2));
  CHECK(z.is_zero());
}

TEST_CASE("p_xi: support and idempotent-like law", "[hecke]") {
  // Trivial subgroup: P_xi is the identity element.
  {
    GroupContext c = make_context(3, 2);
    LinForm zero(2, c.rt.N);
    GroupFunction xi = xi_from_form(c, std::vector<Root>{}, zero);
    CHECK(p_xi(c, xi) == delta_elem(2, 0));
  }
  for (auto [n, q] : std::vector<std::pair<int, int>>{{3, 2}, {3, 3}, {4, 2}}) {
    GroupContext c = make_context(n, q);
    GroupFunction xi = hecke_xi(c, ones_char(c.rt, q));
    GroupAlgebraElem p = p_xi(c, xi);
    // Support is all of G>=, one term per element.
    mpz_class expect = 1;
    for (int u = 0; u < c.rt.r_plus; ++u) expect *= q;
    CHECK(mpz_class(static_cast<unsigned long>(p.support.size())) == expect);
    CHECK(subgroup_size(xi) == p.support.size());
    // P_xi * P_xi = |H| * P_xi.
    CHECK(convolve(c, p, p) ==
          scale_elem(p, ci(q, static_cast<long>(xi.mask.size()))));
  }
}

TEST_CASE("sandwich equals the two-step convolution", "[hecke]") {
  for (auto [n, q] : std::vector<std::pair<int, int>>{{3, 3}, {4, 2}}) {
    GroupContext c = make_context(n, q);
    GroupFunction xi = hecke_xi(c, ones_char(c.rt, q));
    GroupAlgebraElem p = p_xi(c, xi);
    std::mt19937_64 rng(7);
    for (int rep = 0; rep < 8; ++rep) {
      uint64_t x = rng() % c.size();
      GroupAlgebraElem two =
          convolve(c, convolve(c, p, delta_elem(q, x)), p);
      CHECK(sandwich(c, xi, x) == two);
    }
  }
}

TEST_CASE("sandwich support lies in the double coset", "[hecke]") {
  GroupContext c = make_context(3, 3);
  GroupFunction xi = hecke_xi(c, ones_char(c.rt, 3));
  std::mt19937_64 rng(11);
  for (int rep = 0; rep < 6; ++rep) {
    uint64_t x = rng() % c.size();
    // Collect H x H.
    std::vector<uint64_t> coset;
    for (uint64_t h1 : xi.mask) {
      GrpElem left = elem_at(c, h1) * elem_at(c, x);
      for (uint64_t h2 : xi.mask)
        coset.push_back(elem_index(c, left * elem_at(c, h2)));
    }
    std::sort(coset.begin(), coset.end());
    coset.erase(std::unique(coset.begin(), coset.end()), coset.end());
    GroupAlgebraElem s = sandwich(c, xi, x);
    for (const auto& [g, coef] : s.support)
      CHECK(std::binary_search(coset.begin(), coset.end(), g));
    CHECK(double_coset_id(c, xi.mask, x) == coset.front());
  }
}

TEST_CASE("compatibility criterion equals nonvanishing, exhaustively n=3",
          "[hecke]") {
  for (int q : {2, 3}) {
    GroupContext c = make_context(3, q);
    GroupFunction xi = hecke_xi(c, ones_char(c.rt, q));
    CHECK(xi_compatible(c, xi, 0));  // identity
    size_t compatible = 0;
    for (uint64_t x = 0; x < c.size(); ++x) {
      bool compat = xi_compatible(c, xi, x);
      bool nonzero = !sandwich(c, xi, x).is_zero();
      CHECK(compat == nonzero);
      compatible += compat;
    }
    CHECK(compatible > 0);
  }
  // The named off-basis point: x = x_{(2,3)}(1) * x_{(1,3)}(1) at n=3, q=2.
  {
    GroupContext c = make_context(3, 2);
    GroupFunction xi = hecke_xi(c, ones_char(c.rt, 2));
    GrpElem x = GrpElem::root_elem(3, 2, Root{2, 3}, 1) *
                GrpElem::root_elem(3, 2, Root{1, 3}, 1);
    uint64_t xi_idx = elem_index(c, x);
    CHECK(xi_compatible(c, xi, xi_idx) == !sandwich(c, xi, xi_idx).is_zero());
  }
}

TEST_CASE("X_{S,b} fill rule on the worked matrices", "[hecke]") {
  // n=3, S=Pi, b=(2), q=3: both final-column entries above the corner carry b.
  {
    RootTables t = build_tables(3);
    SubsetS S{{Root{1, 2}}};
    GrpElem x = build_X_Sb(t, 3, S, BVector{{2}});
    CHECK(x.x.at(1, 3) == 2);
    CHECK(x.x.at(2, 3) == 2);
    CHECK(x.x.at(1, 2) == 0);
  }
  // n=4, S={}, b=(1,2), q=3: x14=1, x24=2, x23=1*2, x34=0.
  {
    RootTables t = build_tables(4);
    SubsetS S{};
    GrpElem x = build_X_Sb(t, 3, S, BVector{{1, 2}});
    CHECK(x.x.at(1, 4) == 1);
    CHECK(x.x.at(2, 4) == 2);
    CHECK(x.x.at(2, 3) == 2);
    CHECK(x.x.at(3, 4) == 0);
    CHECK(x.x.at(1, 2) == 0);
    CHECK(x.x.at(1, 3) == 0);
  }
  // n=5, S={(2,3)}, b=(1,2), q=3: x15=1, x25=2, x35=2, x45=0, x24=2.
  // Row 3 is the mirror row of the S-root (2,3), so its last-column entry
  // x35=2 is nonzero and the product column picks it up: x34 = 1*2 = 2.
  {
    RootTables t = build_tables(5);
    SubsetS S{{Root{2, 3}}};
    GrpElem x = build_X_Sb(t, 3, S, BVector{{1, 2}});
    CHECK(x.x.at(1, 5) == 1);
    CHECK(x.x.at(2, 5) == 2);
    CHECK(x.x.at(3, 5) == 2);
    CHECK(x.x.at(4, 5) == 0);
    CHECK(x.x.at(2, 4) == 2);
    CHECK(x.x.at(3, 4) == 2);
    CHECK(x.x.at(1, 2) == 0);
    CHECK(x.x.at(2, 3) == 0);
  }
  // Identity slot: S={}, b=0 gives the identity.
  {
    RootTables t = build_tables(4);
    GrpElem x = build_X_Sb(t, 2, SubsetS{}, BVector{{0, 0}});
    CHECK(x.x.is_zero());
  }
  // Lambda'_S violations are rejected.
  {
    RootTables t = build_tables(4);
    SubsetS S{{Root{1, 3}}};
    CHECK_THROWS(build_X_Sb(t, 2, S, BVector{{0, 1}}));   // zero on S slot
    CHECK_THROWS(build_X_Sb(t, 2, S, BVector{{1}}));      // wrong length
    CHECK_THROWS(build_X_Sb(t, 2, S, BVector{{1, 2}}));   // out of range
  }
  // All representatives lie in E + g_0 + g_-.
  for (int n = 3; n <= 5; ++n)
    for (int q : {2, 3}) {
      RootTables t = build_tables(n);
      for (const SubsetS& S : all_subsets(t))
        for (const BVector& b : enumerate_b_vectors(t, S, q)) {
          GrpElem x = build_X_Sb(t, q, S, b);
          for (const Root& r : t.roots)
            if (t.zone(r) > 0) CHECK(x.x.at(r.i, r.j) == 0);
        }
    }
}

TEST_CASE("basis construction: counts, checks, distinct cosets", "[hecke]") {
  auto expect_count = [](int n, int q) {
    RootTables t = build_tables(n);
    return expected_component_count(t, q);
  };
  CHECK(expect_count(3, 2) == 3);
  CHECK(expect_count(4, 2) == 6);
  CHECK(expect_count(5, 2) == 9);
  CHECK(expect_count(3, 3) == 5);
  CHECK(expect_count(4, 3) == 15);

  for (auto [n, q] : std::vector<std::pair<int, int>>{
           {3, 2}, {3, 3}, {4, 2}, {4, 3}, {5, 2}}) {
    GroupContext c = make_context(n, q);
    HeckeBasisReport rep = hecke_basis(c, ones_char(c.rt, q));
    INFO("n=" << n << " q=" << q);
    CHECK(mpz_class(static_cast<unsigned long>(rep.elems.size())) ==
          rep.expected_count);
    CHECK(rep.all_compatible);
    CHECK(rep.all_nonzero);
    CHECK(rep.cosets_distinct);
    CHECK(!rep.fallback_used);
    CHECK(rep.failures.empty());
    // coset ids pairwise distinct even after any fallback.
    std::vector<uint64_t> ids;
    for (const auto& el : rep.elems) ids.push_back(el.coset_id);
    std::sort(ids.begin(), ids.end());
    CHECK(std::adjacent_find(ids.begin(), ids.end()) == ids.end());
  }
}

TEST_CASE("same coset, same element up to scalar", "[hecke]") {
  GroupContext c = make_context(3, 3);
  GroupFunction xi = hecke_xi(c, ones_char(c.rt, 3));
  HeckeBasisReport rep = hecke_basis(c, ones_char(c.rt, 3));
  std::mt19937_64 rng(133);
  for (const HeckeBasisElem& el : rep.elems) {
    // Random translate within the double coset.
    uint64_t h1 = xi.mask[rng() % xi.mask.size()];
    uint64_t h2 = xi.mask[rng() % xi.mask.size()];
    uint64_t x2 = elem_index(
        c, elem_at(c, h1) * elem_at(c, el.x) * elem_at(c, h2));
    REQUIRE(xi_compatible(c, xi, x2));
    GroupAlgebraElem other = sandwich(c, xi, x2);
    CHECK(proportional(el.element, other));
    CHECK(double_coset_id(c, xi.mask, x2) == el.coset_id);
  }
}

TEST_CASE("dimension by double cosets matches the component count", "[hecke]") {
  for (auto [n, q, expect] : std::vector<std::tuple<int, int, int>>{
           {3, 2, 3}, {3, 3, 5}, {4, 2, 6}, {4, 3, 15}, {5, 2, 9}}) {
    GroupContext c = make_context(n, q);
    INFO("n=" << n << " q=" << q);
    CHECK(hecke_dim_by_cosets(c, ones_char(c.rt, q)) == expect);
  }
  // Triangulation with the decomposition and the induced-norm oracle.
  {
    GroupContext c = make_context(3, 3);
    DecompositionReport dec = decompose(c, ones_char(c.rt, 3), true);
    CHECK(dec.component_count == 5);
    REQUIRE(dec.vnorm.has_value());
    CHECK(*dec.vnorm == 5);
    CHECK(hecke_dim_by_cosets(c, ones_char(c.rt, 3)) == 5);
  }
  {
    GroupContext c = make_context(4, 2);
    DecompositionReport dec = decompose(c, ones_char(c.rt, 2), true);
    CHECK(dec.component_count == 6);
    REQUIRE(dec.vnorm.has_value());
    CHECK(*dec.vnorm == 6);
    CHECK(hecke_dim_by_cosets(c, ones_char(c.rt, 2)) == 6);
  }
}

TEST_CASE("commutativity, closure, structure constants", "[hecke]") {
  for (auto [n, q] : std::vector<std::pair<int, int>>{
           {3, 2}, {3, 3}, {4, 2}, {4, 3}, {5, 2}}) {
    GroupContext c = make_context(n, q);
    GroupFunction xi = hecke_xi(c, ones_char(c.rt, q));
    HeckeBasisReport basis = hecke_basis(c, ones_char(c.rt, q));
    CommutativityReport rep = verify_commutativity(c, basis.elems);
    INFO("n=" << n << " q=" << q);
    CHECK(rep.all_commute);
    CHECK(rep.closure_ok);
    CHECK(!rep.partial);
    CHECK(rep.pairs_checked == basis.elems.size() * basis.elems.size());
    CHECK(rep.table.size() == rep.pairs_checked);

    // Identity slot: element is |H| * P_xi, and since P_xi^2 = |H| P_xi the
    // product u_0 * u_j equals |H|^2 u_j, i.e. row-0 coefficients are
    // |H|^2 delta_{jm}.
    GroupAlgebraElem p = p_xi(c, xi);
    long hsz = static_cast<long>(xi.mask.size());
    CHECK(basis.elems[0].x == 0);
    CHECK(basis.elems[0].element == scale_elem(p, ci(q, hsz)));
    auto zero = CycRat(CycInt::from_int(q, 0), 1);
    for (const StructureEntry& se : rep.table) {
      if (se.i != 0) continue;
      for (size_t m = 0; m < se.coeffs.size(); ++m) {
        if (m == se.j)
          CHECK(se.coeffs[m] == CycRat::of(ci(q, hsz * hsz)));
        else
          CHECK(se.coeffs[m] == zero);
      }
    }
  }
  // Partial mode under a pair cap.
  {
    GroupContext c = make_context(3, 2);
    HeckeBasisReport basis = hecke_basis(c, ones_char(c.rt, 2));
    CommutativityReport rep = verify_commutativity(c, basis.elems, 4);
    CHECK(rep.partial);
    CHECK(rep.pairs_checked == 4);
  }
}
