// Acceptance gate: twelve end-to-end checks of the library, one line each.
//
// Every check recomputes its claim from scratch against an independent
// witness (full enumeration, induced characters, exhaustive subspace
// search, or a second tool run), so a PASS here certifies behaviour, not
// bookkeeping.  The process exit status is 0 exactly when all twelve pass.

#include <sys/wait.h>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "utgg/hecke.hpp"
#include "utgg/ideal.hpp"

using namespace utgg;
using nlohmann::json;

#ifndef UTGG_FIXTURE_DIR
#error "UTGG_FIXTURE_DIR must point at the fixtures directory"
#endif
#ifndef UTGG_CLI_PATH
#error "UTGG_CLI_PATH must point at the command-line tool"
#endif

namespace {

// ---------------------------------------------------------------------------
// Shared helpers.
// ---------------------------------------------------------------------------

// The reference character: 1 on every simple and mirror root.
LinForm ones_char(const RootTables& t, int q) {
  LinForm l(q, t.N);
  for (const Root& r : t.pi0) l.set(t, r, 1);
  for (const Root& r : t.pi) l.set(t, r, 1);
  return l;
}

struct Case {
  int n, q;
};

// The six decomposition cases with their closed-form component counts.
const std::vector<std::pair<Case, int>> kCountCases = {
    {{3, 2}, 3}, {{3, 3}, 5}, {{4, 2}, 6},
    {{4, 3}, 15}, {{5, 2}, 9}, {{5, 3}, 25}};

// Full-enumeration cases: n <= 4 with q <= 3, plus n = 5 with q = 2.
const std::vector<Case> kEnumCases = {{3, 2}, {3, 3}, {4, 2}, {4, 3}, {5, 2}};

// All (n, q) with 3 <= n <= 6, q in {2, 3, 5}, and q^N <= 10^6.
std::vector<Case> ideal_cases() {
  std::vector<Case> out;
  for (int n = 3; n <= 6; ++n) {
    RootTables t = build_tables(n);
    for (int q : {2, 3, 5}) {
      mpz_class sz;
      mpz_ui_pow_ui(sz.get_mpz_t(), static_cast<unsigned>(q),
                    static_cast<unsigned>(t.N));
      if (sz <= 1000000) out.push_back({n, q});
    }
  }
  return out;
}

// Decomposition reports are computed once and shared between checks.
std::map<std::pair<int, int>, DecompositionReport> g_decomp;

const DecompositionReport& decomp_of(int n, int q) {
  auto key = std::make_pair(n, q);
  auto it = g_decomp.find(key);
  if (it == g_decomp.end()) {
    GroupContext c = make_context(n, q);
    it = g_decomp.emplace(key, decompose(c, ones_char(c.rt, q))).first;
  }
  return it->second;
}

json load_fixture(const std::string& name) {
  std::string path = std::string(UTGG_FIXTURE_DIR) + "/" + name + ".json";
  std::ifstream in(path);
  UTGG_REQUIRE(in.good(), "cannot open fixture " + path);
  return json::parse(in);
}

Root root_from_json(const json& j) {
  return Root{j.at(0).get<int>(), j.at(1).get<int>()};
}

std::vector<Root> roots_from_json(const json& j) {
  std::vector<Root> out;
  for (const auto& e : j) out.push_back(root_from_json(e));
  return out;
}

LinForm lambda_from_json(const RootTables& t, const json& j, int q) {
  LinForm l(q, t.N);
  for (auto it = j.begin(); it != j.end(); ++it) {
    const std::string& key = it.key();
    auto comma = key.find(',');
    UTGG_REQUIRE(comma != std::string::npos, "bad lambda key " + key);
    Root r{std::stoi(key.substr(0, comma)), std::stoi(key.substr(comma + 1))};
    l.set(t, r, it.value().get<int>());
  }
  return l;
}

// One criterion = description + body returning (pass, detail).
struct Outcome {
  bool pass = false;
  std::string detail;
};

int g_failures = 0;

void run(int id, const std::string& what, double limit_s,
         const std::function<Outcome()>& body) {
  auto t0 = std::chrono::steady_clock::now();
  Outcome out;
  try {
    out = body();
  } catch (const std::exception& e) {
    out.pass = false;
    out.detail = std::string("exception: ") + e.what();
  }
  double secs = std::chrono::duration<double>(
                    std::chrono::steady_clock::now() - t0).count();
  if (limit_s > 0 && secs > limit_s) {
    out.pass = false;
    out.detail += (out.detail.empty() ? "" : "; ");
    out.detail += "time limit exceeded";
  }
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.1f s", secs);
  std::cout << "criterion " << (id < 10 ? " " : "") << id << ": "
            << (out.pass ? "PASS" : "FAIL") << " - " << what
            << (out.detail.empty() ? "" : " (" + out.detail + ")")
            << " [" << buf << "]" << std::endl;
  if (!out.pass) ++g_failures;
}

std::string case_str(int n, int q) {
  return "(" + std::to_string(n) + "," + std::to_string(q) + ")";
}

}  // namespace

int main() {
  // 1. Component counts: the induced module decomposes into exactly
  //    q^eps (2q-1)^k components, each of multiplicity one.
  run(1, "component counts 3/5/6/15/9/25 with every multiplicity 1", 0,
      [] {
        Outcome out;
        out.pass = true;
        auto quick0 = std::chrono::steady_clock::now();
        for (const auto& [cs, want] : kCountCases) {
          bool big = (cs.n == 5 && cs.q == 3);
          auto t0 = std::chrono::steady_clock::now();
          const DecompositionReport& rep = decomp_of(cs.n, cs.q);
          double secs = std::chrono::duration<double>(
                            std::chrono::steady_clock::now() - t0).count();
          if (big && secs > 600) out.pass = false;
          if (rep.component_count != want) out.pass = false;
          if (rep.expected_count != want) out.pass = false;
          if (!rep.multiplicity_free) out.pass = false;
          for (const ComponentEntry& e : rep.entries)
            if (e.multiplicity != 1) out.pass = false;
          if (!out.pass) {
            out.detail = "first failure at " + case_str(cs.n, cs.q);
            return out;
          }
          if (!big) {
            double qsecs = std::chrono::duration<double>(
                               std::chrono::steady_clock::now() - quick0)
                               .count();
            if (qsecs > 10) {
              out.pass = false;
              out.detail = "quick cases over 10 s";
              return out;
            }
          }
        }
        out.detail = "6 cases";
        return out;
      });

  // 2. Dimension identity: component dimensions sum to q^{r+ + r0}, and the
  //    closed-form counting identity holds for all 3 <= n <= 8, q in {2,3,5}.
  run(2, "dimension identity and counting identity (n = 3..8, q = 2,3,5)", 0,
      [] {
        Outcome out;
        out.pass = true;
        for (const auto& [cs, want] : kCountCases) {
          (void)want;
          const DecompositionReport& rep = decomp_of(cs.n, cs.q);
          if (rep.total_dim != rep.expected_dim) {
            out.pass = false;
            out.detail = "dimension sum off at " + case_str(cs.n, cs.q);
            return out;
          }
        }
        auto t0 = std::chrono::steady_clock::now();
        for (int n = 3; n <= 8; ++n) {
          RootTables t = build_tables(n);
          for (int q : {2, 3, 5}) {
            mpz_class total = 0, count = 0;
            for (const SubsetS& S : all_subsets(t)) {
              int s = S.size();
              mpz_class cnt = 1;
              for (int u = 0; u < t.k - s; ++u) cnt *= (q - 1);
              for (int u = 0; u < s + t.eps; ++u) cnt *= q;
              mpz_class dim;
              mpz_ui_pow_ui(dim.get_mpz_t(), static_cast<unsigned>(q),
                            static_cast<unsigned>(t.r_plus - s));
              total += cnt * dim;
              count += cnt;
            }
            mpz_class expect;
            mpz_ui_pow_ui(expect.get_mpz_t(), static_cast<unsigned>(q),
                          static_cast<unsigned>(t.r_plus + t.r_zero));
            if (total != expect || count != expected_component_count(t, q))
              out.pass = false;
          }
        }
        double secs = std::chrono::duration<double>(
                          std::chrono::steady_clock::now() - t0).count();
        if (secs > 1) {
          out.pass = false;
          out.detail = "counting identity over 1 s";
        } else if (out.pass) {
          out.detail = "18 counting cases";
        }
        return out;
      });

  // 3. Irreducibility: every component character has norm one.
  run(3, "every component character has inner product 1 with itself", 120,
      [] {
        Outcome out;
        out.pass = true;
        int comps = 0;
        for (const Case& cs : kEnumCases) {
          GroupContext c = make_context(cs.n, cs.q);
          LinForm lch = ones_char(c.rt, cs.q);
          for (const SubsetS& S : all_subsets(c.rt)) {
            LSets ls = compute_lsets(c.rt, S);
            for (const AVector& a : enumerate_a_vectors(ls, cs.q)) {
              LinForm lam = build_canonical_form(c.rt, S, ls, lch, a, cs.q);
              GroupFunction chi = orbit_character(c, orbit_of(c, lam));
              auto [num, den] = inner_product(c, chi, chi);
              ++comps;
              if (num != 1 || den != 1) {
                out.pass = false;
                out.detail = "norm != 1 at " + case_str(cs.n, cs.q) +
                             " S=" + S.str() + " a=" + a.str();
                return out;
              }
            }
          }
        }
        out.detail = std::to_string(comps) + " characters";
        return out;
      });

  // 4. Polarizations: p_S is an associative polarization of every canonical
  //    form, with dim p_S = N - (r+ - s) and orbit size q^{2(r+ - s)}.
  run(4, "p_S polarizes every canonical form; dimensions and orbit sizes",
      60, [] {
        Outcome out;
        out.pass = true;
        int comps = 0;
        for (const Case& cs : ideal_cases()) {
          GroupContext c = make_context(cs.n, cs.q);
          LinForm lch = ones_char(c.rt, cs.q);
          for (const SubsetS& S : all_subsets(c.rt)) {
            LSets ls = compute_lsets(c.rt, S);
            std::vector<Root> pol = build_p_S(c.rt, ls);
            int want_dim = c.rt.N - (c.rt.r_plus - S.size());
            for (const AVector& a : enumerate_a_vectors(ls, cs.q)) {
              LinForm lam = build_canonical_form(c.rt, S, ls, lch, a, cs.q);
              ++comps;
              bool ok = static_cast<int>(pol.size()) == want_dim &&
                        is_associative_polarization(c, pol, lam);
              if (ok) {
                mpz_class want_orb;
                mpz_ui_pow_ui(
                    want_orb.get_mpz_t(), static_cast<unsigned>(cs.q),
                    static_cast<unsigned>(2 * (c.rt.r_plus - S.size())));
                auto orbit = orbit_of(c, lam);
                ok = mpz_class(static_cast<unsigned long>(orbit.size())) ==
                         want_orb &&
                     orbit_size_formula(c, lam) == want_orb;
              }
              if (!ok) {
                out.pass = false;
                out.detail = "failure at " + case_str(cs.n, cs.q) +
                             " S=" + S.str() + " a=" + a.str();
                return out;
              }
            }
          }
        }
        out.detail = std::to_string(comps) + " components over 9 (n,q) cases";
        return out;
      });

  // 5. Character formula: the orbit sum and induction through 1 + p_S give
  //    the same class function, component by component.
  run(5, "orbit character equals the character induced through p_S", 300,
      [] {
        Outcome out;
        out.pass = true;
        int comps = 0;
        for (const Case& cs : kEnumCases) {
          if (cs.n > 4) continue;
          GroupContext c = make_context(cs.n, cs.q);
          LinForm lch = ones_char(c.rt, cs.q);
          for (const SubsetS& S : all_subsets(c.rt)) {
            LSets ls = compute_lsets(c.rt, S);
            std::vector<Root> pol = build_p_S(c.rt, ls);
            for (const AVector& a : enumerate_a_vectors(ls, cs.q)) {
              LinForm lam = build_canonical_form(c.rt, S, ls, lch, a, cs.q);
              GroupFunction ind =
                  induce_character(c, xi_from_form(c, pol, lam));
              GroupFunction orb = orbit_character(c, orbit_of(c, lam));
              ++comps;
              if (!(ind == orb)) {
                out.pass = false;
                out.detail = "mismatch at " + case_str(cs.n, cs.q) +
                             " S=" + S.str() + " a=" + a.str();
                return out;
              }
            }
          }
        }
        out.detail = std::to_string(comps) + " components";
        return out;
      });

  // 6. Defining ideal: the generator equations cut out exactly the orbit,
  //    the point count is q^{2(r+ - s)}, the variety is stable under all
  //    one-parameter coadjoint generators, and the frozen equation files
  //    are reproduced token for token.
  run(6, "orbit = variety with the expected point count; frozen equations",
      0, [] {
        Outcome out;
        out.pass = true;
        int comps = 0;
        for (const Case& cs : ideal_cases()) {
          GroupContext c = make_context(cs.n, cs.q);
          LinForm lch = ones_char(c.rt, cs.q);
          for (const SubsetS& S : all_subsets(c.rt)) {
            LSets ls = compute_lsets(c.rt, S);
            for (const AVector& a : enumerate_a_vectors(ls, cs.q)) {
              OrbitIdealReport rep = verify_orbit_ideal(c, S, ls, a, lch);
              ++comps;
              if (rep.partial || !rep.orbit_satisfies || !rep.counts_match ||
                  !rep.variety_equals_orbit || !rep.variety_stable) {
                out.pass = false;
                out.detail = "ideal failure at " + case_str(cs.n, cs.q) +
                             " S=" + S.str() + " a=" + a.str();
                return out;
              }
            }
          }
        }
        int insts = 0;
        for (const std::string& name :
             {"n3_empty", "n3_pi", "n4_empty", "n4_pi", "n5_empty", "n5_s14",
              "n5_s23", "n5_pi"}) {
          json fx = load_fixture(name);
          RootTables t = build_tables(fx.at("n").get<int>());
          SubsetS S{roots_from_json(fx.at("S"))};
          LSets ls = compute_lsets(t, S);
          for (const json& inst : fx.at("instances")) {
            int q = inst.at("q").get<int>();
            LinForm lch = lambda_from_json(t, inst.at("lambda"), q);
            AVector a{ls.a_domain, inst.at("a").get<std::vector<int>>()};
            GeneratorSet gs = build_generators(t, S, ls, a, lch, q);
            ++insts;
            if (render_equations(t, gs) !=
                inst.at("equations").get<std::vector<std::string>>()) {
              out.pass = false;
              out.detail = "frozen equations differ in " + name;
              return out;
            }
          }
        }
        out.detail = std::to_string(comps) + " components, " +
                     std::to_string(insts) + " frozen instances";
        return out;
      });

  // 7. Orbit separation: distinct canonical forms have disjoint orbits.
  run(7, "coadjoint orbits of distinct canonical forms are disjoint", 0,
      [] {
        Outcome out;
        out.pass = true;
        int pairs = 0;
        for (const Case& cs : kEnumCases) {
          GroupContext c = make_context(cs.n, cs.q);
          SeparationReport rep =
              verify_orbit_separation(c, ones_char(c.rt, cs.q));
          pairs += static_cast<int>(rep.pairs.size());
          if (!rep.all_disjoint || !rep.all_witnessed) {
            out.pass = false;
            out.detail = "overlap at " + case_str(cs.n, cs.q);
            return out;
          }
        }
        out.detail = std::to_string(pairs) + " orbit pairs";
        return out;
      });

  // 8. Endomorphism algebra: the projected representatives form a basis of
  //    the expected size, sit in distinct double cosets, commute pairwise,
  //    and nonvanishing is equivalent to the compatibility criterion.
  run(8, "double-coset basis: size, compatibility, commutativity", 600,
      [] {
        Outcome out;
        out.pass = true;
        int elems = 0, pairs = 0, pts = 0;
        for (const auto& [cs, want] : kCountCases) {
          GroupContext c = make_context(cs.n, cs.q);
          LinForm lch = ones_char(c.rt, cs.q);
          HeckeBasisReport basis = hecke_basis(c, lch);
          elems += static_cast<int>(basis.elems.size());
          if (static_cast<int>(basis.elems.size()) != want ||
              !basis.all_compatible || !basis.all_nonzero ||
              !basis.cosets_distinct) {
            out.pass = false;
            out.detail = "basis failure at " + case_str(cs.n, cs.q);
            return out;
          }
          if (cs.n == 3) {
            GroupFunction xi = hecke_xi(c, lch);
            for (uint64_t x = 0; x < c.size(); ++x) {
              ++pts;
              if (xi_compatible(c, xi, x) !=
                  !sandwich(c, xi, x).is_zero()) {
                out.pass = false;
                out.detail = "equivalence fails at " + case_str(cs.n, cs.q);
                return out;
              }
            }
          }
          bool full_comm = !(cs.n == 5 && cs.q == 3);
          if (full_comm) {
            CommutativityReport comm = verify_commutativity(c, basis.elems);
            pairs += static_cast<int>(comm.pairs_checked);
            if (!comm.all_commute || !comm.closure_ok || comm.partial) {
              out.pass = false;
              out.detail = "commutativity failure at " + case_str(cs.n, cs.q);
              return out;
            }
          }
        }
        out.detail = std::to_string(elems) + " elements, " +
                     std::to_string(pairs) + " products, " +
                     std::to_string(pts) + " equivalence points";
        return out;
      });

  // 9. Induction depends only on the mirror values: sampled pairs of
  //    characters agreeing on the mirror roots induce equal characters.
  run(9, "characters agreeing on mirror roots induce equal modules", 0,
      [] {
        Outcome out;
        out.pass = true;
        int pairs = 0;
        for (const Case& cs : kEnumCases) {
          if (cs.n > 4) continue;
          GroupContext c = make_context(cs.n, cs.q);
          std::mt19937_64 rng(20240 + 100 * cs.n + cs.q);
          std::vector<Root> free_roots;
          for (const Root& r : c.rt.pi0)
            if (!c.rt.in_pi(r)) free_roots.push_back(r);
          for (int rep_i = 0; rep_i < 5; ++rep_i) {
            LinForm l1(cs.q, c.rt.N), l2(cs.q, c.rt.N);
            for (const Root& r : c.rt.pi) {
              // Mirror values are shared; off the superdiagonal they must be
              // nonzero for nondegeneracy.
              bool superdiag = r.j == r.i + 1;
              unsigned span = static_cast<unsigned>(superdiag ? cs.q
                                                              : cs.q - 1);
              int v = static_cast<int>(rng() % span) + (superdiag ? 0 : 1);
              l1.set(c.rt, r, v);
              l2.set(c.rt, r, v);
            }
            for (const Root& r : free_roots) {
              l1.set(c.rt, r,
                     static_cast<int>(rng() % static_cast<unsigned>(cs.q)));
              l2.set(c.rt, r,
                     static_cast<int>(rng() % static_cast<unsigned>(cs.q)));
            }
            ++pairs;
            if (!check_induced_isomorphism(c, l1, l2)) {
              out.pass = false;
              out.detail = "induced characters differ at " +
                           case_str(cs.n, cs.q);
              return out;
            }
          }
        }
        out.detail = std::to_string(pairs) + " sampled pairs";
        return out;
      });

  // 10. Negative control: on the two-dimensional algebra with u*u = v, a
  //     form with a nonzero value on v admits no associative polarization;
  //     a form vanishing on v admits one.
  run(10, "polarization search: absent iff the form hits the square", 0,
      [] {
        Outcome out;
        out.pass = true;
        int searched = 0;
        for (int p : {2, 3}) {
          FiniteAlgebra alg = FiniteAlgebra::truncated_poly_radical(p, 3);
          for (int lu = 0; lu < p; ++lu) {
            for (int lv = 1; lv < p; ++lv) {
              ++searched;
              if (search_associative_polarization(alg, {lu, lv})) {
                out.pass = false;
                out.detail = "unexpected polarization for p=" +
                             std::to_string(p);
                return out;
              }
            }
            ++searched;
            if (!search_associative_polarization(alg, {lu, 0})) {
              out.pass = false;
              out.detail = "missing polarization for p=" + std::to_string(p);
              return out;
            }
          }
        }
        out.detail = std::to_string(searched) + " exhaustive searches";
        return out;
      });

  // 11. Multiplicity oracle: the subgroup-only evaluation agrees with the
  //     full inner product against the materialized component character.
  run(11, "fast and slow multiplicity computations agree", 0, [] {
    Outcome out;
    out.pass = true;
    int comps = 0;
    for (const Case& cs : {Case{4, 2}, Case{3, 3}}) {
      GroupContext c = make_context(cs.n, cs.q);
      LinForm lch = ones_char(c.rt, cs.q);
      GroupFunction xi = xi_from_form(c, c.rt.r_pos, lch);
      for (const SubsetS& S : all_subsets(c.rt)) {
        LSets ls = compute_lsets(c.rt, S);
        for (const AVector& a : enumerate_a_vectors(ls, cs.q)) {
          LinForm lam = build_canonical_form(c.rt, S, ls, lch, a, cs.q);
          auto orbit = orbit_of(c, lam);
          mpz_class fast = multiplicity_frobenius_orbit(c, orbit, xi);
          mpz_class slow =
              multiplicity_frobenius(c, orbit_character(c, orbit), xi);
          ++comps;
          if (fast != slow) {
            out.pass = false;
            out.detail = "paths disagree at " + case_str(cs.n, cs.q) +
                         " S=" + S.str() + " a=" + a.str();
            return out;
          }
        }
      }
    }
    out.detail = std::to_string(comps) + " components";
    return out;
  });

  // 12. Determinism: two verification runs of the command-line tool emit
  //     byte-identical JSON.
  run(12, "two quick verification runs are byte-identical", 0, [] {
    Outcome out;
    auto run_once = [](const std::string& path) {
      std::string cmd = std::string("\"") + UTGG_CLI_PATH +
                        "\" verify --level quick --format json > " + path +
                        " 2>/dev/null";
      int st = std::system(cmd.c_str());
      return WIFEXITED(st) && WEXITSTATUS(st) == 0;
    };
    std::string p1 = "acceptance_run1.json";
    std::string p2 = "acceptance_run2.json";
    if (!run_once(p1) || !run_once(p2)) {
      out.pass = false;
      out.detail = "verification run failed";
      return out;
    }
    std::ifstream f1(p1), f2(p2);
    std::stringstream s1, s2;
    s1 << f1.rdbuf();
    s2 << f2.rdbuf();
    out.pass = !s1.str().empty() && s1.str() == s2.str();
    out.detail = out.pass ? std::to_string(s1.str().size()) + " bytes"
                          : "outputs differ";
    return out;
  });

  if (g_failures == 0) {
    std::cout << "acceptance: all 12 criteria passed" << std::endl;
    return 0;
  }
  std::cout << "acceptance: " << g_failures << " criteria FAILED" << std::endl;
  return 1;
}
