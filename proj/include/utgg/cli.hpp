#pragma once

// Command-line front end: parses a run configuration, executes the
// construction and verification commands, and emits machine-readable JSON
// (stable key order, byte-identical across runs with the same
// configuration) or human-readable markdown.
//
// Exit-code contract: 0 = every check passed, 1 = at least one check
// failed, 2 = usage or validation error.  "partial" check statuses (work
// skipped under a resource cap) do not fail the run.

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "utgg/chars.hpp"
#include "utgg/exactnum.hpp"
#include "utgg/hecke.hpp"
#include "utgg/ideal.hpp"
#include "utgg/roots.hpp"
#include "utgg/unitri.hpp"

#ifndef UTGG_FIXTURE_DIR
#define UTGG_FIXTURE_DIR "fixtures"
#endif

namespace utgg::cli {

using nlohmann::json;

// ---------------------------------------------------------------------------
// Run configuration and report assembly
// ---------------------------------------------------------------------------

struct RunConfig {
  std::string command;
  int n = 0;
  int q = 0;
  std::string lambda_spec;
  std::string s_spec;
  std::string a_spec;
  std::string format = "json";
  std::string level = "quick";
  std::string caps_spec;
  ResourceCaps caps;
  int workers = 1;
  std::uint64_t seed = 0;
  bool timing = false;
  std::string out_path;
  std::string fixtures_dir = UTGG_FIXTURE_DIR;
};

struct Check {
  std::string name;
  std::string status;  // pass | fail | partial
  std::string details;
};

struct ReportCtx {
  json params = json::object();
  json results = json::object();
  std::vector<Check> checks;
  bool timing = false;
  std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();

  void check(const std::string& name, bool ok, std::string details = "") {
    checks.push_back({name, ok ? "pass" : "fail", std::move(details)});
  }
  void partial(const std::string& name, std::string details) {
    checks.push_back({name, "partial", std::move(details)});
  }
  bool all_pass() const {
    for (const Check& c : checks)
      if (c.status == "fail") return false;
    return true;
  }
  json to_json(const std::string& command) const {
    json carr = json::array();
    for (const Check& c : checks)
      carr.push_back(json{
          {"name", c.name}, {"status", c.status}, {"details", c.details}});
    json rep;
    rep["command"] = command;
    rep["params"] = params;
    rep["results"] = results;
    rep["checks"] = carr;
    if (timing) {
      auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                    std::chrono::steady_clock::now() - t0)
                    .count();
      rep["timing"] = json{{"total_ms", ms}};
    } else {
      rep["timing"] = nullptr;  // fixed placeholder keeps reports byte-stable
    }
    rep["versions"] = json{{"schema", 1}, {"tool", "utgg 1.0.0"}};
    return rep;
  }
};

// ---------------------------------------------------------------------------
// Input parsing: roots "i,j", subsets "i,j;i,j", characters "i,j=v;...",
// a-vectors "v,v,...", caps "group=N,orbit=N".
// ---------------------------------------------------------------------------

inline std::string strip(const std::string& s) {
  size_t b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return "";
  size_t e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

inline std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : s) {
    if (ch == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  out.push_back(cur);
  return out;
}

inline long parse_long(const std::string& tok, const std::string& what) {
  size_t pos = 0;
  long v = 0;
  try {
    v = std::stol(strip(tok), &pos);
  } catch (const std::exception&) {
    fail(what + ": cannot parse integer from '" + tok + "'");
  }
  UTGG_REQUIRE(pos == strip(tok).size(),
               what + ": trailing characters in '" + tok + "'");
  return v;
}

inline Root parse_root_token(const std::string& tok) {
  auto parts = split(tok, ',');
  UTGG_REQUIRE(parts.size() == 2, "root must look like 'i,j': '" + tok + "'");
  return Root{static_cast<int>(parse_long(parts[0], "root")),
              static_cast<int>(parse_long(parts[1], "root"))};
}

inline SubsetS parse_subset(const RootTables& t, const std::string& spec) {
  SubsetS S;
  if (strip(spec).empty()) return S;
  for (const std::string& tok : split(spec, ';')) {
    Root r = parse_root_token(tok);
    UTGG_REQUIRE(t.in_pi(r), "S entry " + root_str(r) +
                                 " is not a mirror root (i, n-i) with i <= " +
                                 std::to_string(t.k));
    UTGG_REQUIRE(!S.contains(r), "S entry " + root_str(r) + " repeated");
    S.roots.push_back(r);
  }
  std::sort(S.roots.begin(), S.roots.end());
  return S;
}

// Character entries live on the superdiagonal roots (i,i+1), i <= k, and the
// mirror roots (i,n-i), i <= k.  Unspecified entries default to 0; mirror
// roots off the superdiagonal must be assigned a nonzero value, otherwise the
// character is degenerate and the canonical constructions below do not apply.
inline LinForm parse_lambda(const RootTables& t, int q,
                            const std::string& spec) {
  LinForm lam(q, t.N);
  if (!strip(spec).empty()) {
    for (const std::string& tok : split(spec, ';')) {
      auto kv = split(tok, '=');
      UTGG_REQUIRE(kv.size() == 2,
                   "lambda entry must look like 'i,j=v': '" + tok + "'");
      Root r = parse_root_token(kv[0]);
      bool on_superdiag = r.i >= 1 && r.i <= t.k && r.j == r.i + 1;
      bool on_mirror = t.in_pi(r);
      UTGG_REQUIRE(on_superdiag || on_mirror,
                   "lambda entry at " + root_str(r) +
                       " is outside the allowed support (superdiagonal (i,i+1) "
                       "and mirror (i,n-i) roots with i <= " +
                       std::to_string(t.k) + ")");
      long v = parse_long(kv[1], "lambda value");
      lam.set(t, r, ((v % q) + q) % q);
    }
  }
  for (const Root& r : t.pi) {
    if (r.j == r.i + 1) continue;  // mirror root on the superdiagonal is free
    UTGG_REQUIRE(lam.at(t, r) != 0,
                 "lambda must be nonzero at the mirror root " + root_str(r) +
                     "; otherwise the character is degenerate");
  }
  validate_character_form(t, lam);
  return lam;
}

inline AVector parse_a(const LSets& ls, int q, const std::string& spec) {
  AVector a;
  a.domain = ls.a_domain;
  if (!strip(spec).empty())
    for (const std::string& tok : split(spec, ','))
      a.vals.push_back(
          static_cast<int>(((parse_long(tok, "a value") % q) + q) % q));
  UTGG_REQUIRE(a.vals.size() == a.domain.size(),
               "a must list " + std::to_string(a.domain.size()) +
                   " values (one per root of L0 | L00 | L-, ascending)");
  validate_a_vector(ls, a, q);
  return a;
}

inline ResourceCaps parse_caps(const std::string& spec) {
  ResourceCaps caps;
  if (strip(spec).empty()) return caps;
  for (const std::string& tok : split(spec, ',')) {
    auto kv = split(tok, '=');
    UTGG_REQUIRE(kv.size() == 2, "cap must look like 'name=N': '" + tok + "'");
    std::string key = strip(kv[0]);
    long v = parse_long(kv[1], "cap value");
    UTGG_REQUIRE(v > 0, "cap value must be positive: '" + tok + "'");
    if (key == "group")
      caps.group_enum = static_cast<uint64_t>(v);
    else if (key == "orbit")
      caps.orbit = static_cast<uint64_t>(v);
    else
      fail("unknown cap '" + key + "' (known: group, orbit)");
  }
  return caps;
}

// The default verification character: 1 at every mirror root, 0 elsewhere.
inline LinForm standard_character(const RootTables& t, int q) {
  LinForm lam(q, t.N);
  for (const Root& r : t.pi) lam.set(t, r, 1);
  validate_character_form(t, lam);
  return lam;
}

// ---------------------------------------------------------------------------
// JSON helpers
// ---------------------------------------------------------------------------

inline json root_json(const Root& r) { return json::array({r.i, r.j}); }

inline json roots_json(const std::vector<Root>& v) {
  json arr = json::array();
  for (const Root& r : v) arr.push_back(root_json(r));
  return arr;
}

inline std::string root_key(const Root& r) {
  return std::to_string(r.i) + "," + std::to_string(r.j);
}

// Nonzero entries of a linear form, keyed "i,j".
inline json form_json(const RootTables& t, const LinForm& lam) {
  json obj = json::object();
  for (const Root& r : t.roots) {
    int32_t v = lam.at(t, r);
    if (v != 0) obj[root_key(r)] = v;
  }
  return obj;
}

inline void embed_root_order(const RootTables& t, ReportCtx& rep) {
  json order = json::array();
  for (const Root& r : t.roots) order.push_back(root_json(r));
  rep.results["root_order"] = order;
}

inline std::string fmt_roots(const std::vector<Root>& v) {
  std::string s;
  for (size_t u = 0; u < v.size(); ++u) s += (u ? " " : "") + root_str(v[u]);
  return s.empty() ? "-" : s;
}

inline std::string fmt_ints(const std::vector<int>& v) {
  std::string s = "(";
  for (size_t u = 0; u < v.size(); ++u)
    s += (u ? ", " : "") + std::to_string(v[u]);
  return s + ")";
}

// Lower-triangular display of a form: row j lists the values at the roots
// (1,j) ... (j-1,j) followed by a '.' diagonal marker.
inline std::vector<std::string> form_triangle(const RootTables& t,
                                              const LinForm& lam) {
  std::vector<std::string> rows;
  for (int j = 1; j <= t.n; ++j) {
    std::string row;
    for (int i = 1; i < j; ++i)
      row += std::to_string(lam.at(t, Root{i, j})) + " ";
    row += ".";
    rows.push_back(row);
  }
  return rows;
}

// ---------------------------------------------------------------------------
// roots: zone tables and the canonical root order
// ---------------------------------------------------------------------------

inline void cmd_roots(const RunConfig& cfg, ReportCtx& rep) {
  RootTables t = build_tables(cfg.n);
  embed_root_order(t, rep);
  json zones = json::array();
  for (const Root& r : t.roots) zones.push_back(t.zone(r));
  rep.results["zones"] = zones;
  rep.results["n"] = t.n;
  rep.results["k"] = t.k;
  rep.results["eps"] = t.eps;
  rep.results["root_count"] = t.N;
  rep.results["r_plus"] = t.r_plus;
  rep.results["r_zero"] = t.r_zero;
  rep.results["r_minus"] = t.N - t.r_plus - t.r_zero;
  rep.results["superdiagonal_simple_roots"] = roots_json(t.pi0);
  rep.results["mirror_simple_roots"] = roots_json(t.pi);
  rep.results["subset_count"] = (1u << t.k);
  if (cfg.q) {
    mpz_class order;
    mpz_ui_pow_ui(order.get_mpz_t(), static_cast<unsigned>(cfg.q),
                  static_cast<unsigned>(t.N));
    rep.results["group_order"] = order.get_str();
    rep.results["expected_components"] =
        expected_component_count(t, cfg.q).get_str();
  }

  bool zone_ok = static_cast<int>(t.r_pos.size()) == t.r_plus &&
                 static_cast<int>(t.r_mid.size()) == t.r_zero &&
                 t.r_zero == t.k + t.eps &&
                 t.r_pos.size() == t.r_neg.size() &&
                 t.r_plus + t.r_zero + static_cast<int>(t.r_neg.size()) == t.N;
  rep.check("zone_partition", zone_ok,
            "sizes " + std::to_string(t.r_plus) + "/" +
                std::to_string(t.r_zero) + "/" +
                std::to_string(t.N - t.r_plus - t.r_zero));

  bool ord_ok = true;
  for (size_t u = 1; u < t.roots.size(); ++u) {
    const Root &a = t.roots[u - 1], &b = t.roots[u];
    if (!(a.i < b.i || (a.i == b.i && a.j > b.j))) ord_ok = false;
  }
  rep.check("global_order", ord_ok,
            "rows ascending, columns descending within each row");

  bool simple_ok = true;
  for (const Root& r : t.pi)
    if (t.zone(r) != 1) simple_ok = false;
  for (const Root& r : t.pi0)
    if (t.zone(r) != 1) simple_ok = false;
  rep.check("simple_roots_in_upper_zone", simple_ok, "");
}

inline std::string md_checks(const ReportCtx& rep) {
  std::string md = "## Checks\n\n| check | status | details |\n|---|---|---|\n";
  for (const Check& c : rep.checks)
    md += "| " + c.name + " | " + c.status + " | " + c.details + " |\n";
  return md;
}

inline std::string md_roots(const RunConfig& cfg, const ReportCtx& rep) {
  RootTables t = build_tables(cfg.n);
  std::string md = "# Root tables (n=" + std::to_string(cfg.n) + ")\n\n";
  md += "- roots: " + std::to_string(t.N) + ", k = " + std::to_string(t.k) +
        ", eps = " + std::to_string(t.eps) + "\n";
  md += "- zone sizes: " + std::to_string(t.r_plus) + " / " +
        std::to_string(t.r_zero) + " / " +
        std::to_string(t.N - t.r_plus - t.r_zero) + "\n";
  md += "- order: " + fmt_roots(t.roots) + "\n";
  md += "- superdiagonal simple roots: " + fmt_roots(t.pi0) + "\n";
  md += "- mirror simple roots: " + fmt_roots(t.pi) + "\n\n";
  return md + md_checks(rep);
}

// ---------------------------------------------------------------------------
// lsets: the per-subset partition of the mirror complement
// ---------------------------------------------------------------------------

inline void cmd_lsets(const RunConfig& cfg, ReportCtx& rep) {
  RootTables t = build_tables(cfg.n);
  embed_root_order(t, rep);
  std::vector<SubsetS> subsets;
  if (!cfg.s_spec.empty())
    subsets.push_back(parse_subset(t, cfg.s_spec));
  else
    subsets = all_subsets(t);

  bool sizes_ok = true, counts_ok = true;
  json rows = json::array();
  for (const SubsetS& S : subsets) {
    LSets ls = compute_lsets(t, S);
    int s = S.size();
    if (!(static_cast<int>(ls.plus.size()) == s &&
          static_cast<int>(ls.minus.size()) == s &&
          static_cast<int>(ls.zero.size()) == t.k - s &&
          static_cast<int>(ls.zerozero.size()) == t.eps))
      sizes_ok = false;
    json row;
    row["S"] = roots_json(S.roots);
    row["plus"] = roots_json(ls.plus);
    row["zero"] = roots_json(ls.zero);
    row["zerozero"] = roots_json(ls.zerozero);
    row["minus"] = roots_json(ls.minus);
    row["a_domain"] = roots_json(ls.a_domain);
    if (cfg.q) {
      auto avs = enumerate_a_vectors(ls, cfg.q);
      mpz_class expect = 1;
      for (int u = 0; u < t.k - s; ++u) expect *= (cfg.q - 1);
      for (int u = 0; u < s + t.eps; ++u) expect *= cfg.q;
      if (mpz_class(static_cast<unsigned long>(avs.size())) != expect)
        counts_ok = false;
      row["a_count"] = avs.size();
      mpz_class dim;
      mpz_ui_pow_ui(dim.get_mpz_t(), static_cast<unsigned>(cfg.q),
                    static_cast<unsigned>(t.r_plus - s));
      row["component_dim"] = dim.get_str();
    }
    rows.push_back(std::move(row));
  }
  rep.results["subsets"] = rows;
  rep.check("lset_sizes", sizes_ok,
            "|L+| = |L-| = |S|, |L0| = k - |S|, |L00| = eps");
  if (cfg.q)
    rep.check("a_count_formula", counts_ok,
              "(q-1)^(k-s) q^(s+eps) vectors per subset");
}

inline std::string md_lsets(const RunConfig& cfg, const ReportCtx& rep) {
  std::string md = "# Mirror-column partition (n=" + std::to_string(cfg.n);
  if (cfg.q) md += ", q=" + std::to_string(cfg.q);
  md += ")\n\n| S | L+ | L0 | L00 | L- |\n|---|---|---|---|---|\n";
  RootTables t = build_tables(cfg.n);
  std::vector<SubsetS> subsets;
  if (!cfg.s_spec.empty())
    subsets.push_back(parse_subset(t, cfg.s_spec));
  else
    subsets = all_subsets(t);
  for (const SubsetS& S : subsets) {
    LSets ls = compute_lsets(t, S);
    md += "| " + S.str() + " | " + fmt_roots(ls.plus) + " | " +
          fmt_roots(ls.zero) + " | " + fmt_roots(ls.zerozero) + " | " +
          fmt_roots(ls.minus) + " |\n";
  }
  return md + "\n" + md_checks(rep);
}

// ---------------------------------------------------------------------------
// decompose: the multiplicity-free decomposition of the big induced module
// ---------------------------------------------------------------------------

inline void cmd_decompose(const RunConfig& cfg, ReportCtx& rep) {
  GroupContext c = make_context(cfg.n, cfg.q, cfg.caps);
  LinForm lam = parse_lambda(c.rt, c.q, cfg.lambda_spec);
  bool crosscheck = c.enumerable();
  DecompositionReport d = decompose(c, lam, crosscheck);
  embed_root_order(c.rt, rep);

  json entries = json::array();
  for (const ComponentEntry& e : d.entries) {
    json row;
    row["S"] = roots_json(e.S.roots);
    row["a"] = e.a.vals;
    row["dim"] = e.dim.get_str();
    row["orbit_size"] = e.orbit_size;
    row["multiplicity"] = e.multiplicity.get_str();
    entries.push_back(std::move(row));
  }
  rep.results["components"] = entries;
  rep.results["component_count"] = d.component_count.get_str();
  rep.results["expected_count"] = d.expected_count.get_str();
  rep.results["total_dim"] = d.total_dim.get_str();
  rep.results["expected_dim"] = d.expected_dim.get_str();
  rep.results["module_norm"] = d.vnorm ? json(d.vnorm->get_str()) : json();

  rep.check("component_count", d.component_count == d.expected_count,
            d.component_count.get_str() + " of " + d.expected_count.get_str());
  rep.check("multiplicity_free", d.multiplicity_free, "");
  rep.check("total_dimension", d.total_dim == d.expected_dim,
            d.total_dim.get_str() + " of " + d.expected_dim.get_str());
  if (crosscheck)
    rep.check("module_norm_equals_component_count",
              d.vnorm && *d.vnorm == d.component_count,
              "norm " + (d.vnorm ? d.vnorm->get_str() : "-"));
  else
    rep.partial("module_norm_equals_component_count",
                "skipped: group order exceeds the enumeration cap");
}

inline std::string md_decompose(const RunConfig& cfg, const ReportCtx& rep) {
  std::string md = "# Decomposition (n=" + std::to_string(cfg.n) +
                   ", q=" + std::to_string(cfg.q) + ")\n\n";
  md += "- character: " + cfg.lambda_spec + "\n";
  md += "- components: " + rep.results["component_count"].get<std::string>() +
        " (expected " + rep.results["expected_count"].get<std::string>() +
        ")\n";
  md += "- total dimension: " + rep.results["total_dim"].get<std::string>() +
        " (expected " + rep.results["expected_dim"].get<std::string>() +
        ")\n\n";
  md += "| S | a | dim | orbit | multiplicity |\n|---|---|---|---|---|\n";
  for (const auto& row : rep.results["components"]) {
    std::string sstr = "{";
    bool first = true;
    for (const auto& r : row["S"]) {
      if (!first) sstr += ",";
      first = false;
      sstr += "(" + std::to_string(r[0].get<int>()) + "," +
              std::to_string(r[1].get<int>()) + ")";
    }
    sstr += "}";
    std::string astr = "(";
    first = true;
    for (const auto& v : row["a"]) {
      if (!first) astr += ", ";
      first = false;
      astr += std::to_string(v.get<int>());
    }
    astr += ")";
    md += "| " + sstr + " | " + astr + " | " +
          row["dim"].get<std::string>() + " | " +
          std::to_string(row["orbit_size"].get<uint64_t>()) + " | " +
          row["multiplicity"].get<std::string>() + " |\n";
  }
  return md + "\n" + md_checks(rep);
}

// ---------------------------------------------------------------------------
// orbit: canonical form, polarization, defining equations, orbit checks
// ---------------------------------------------------------------------------

struct OrbitData {
  SubsetS S;
  LSets ls;
  AVector a;
  GeneratorSet gs;
  std::vector<Root> proots;
  mpz_class expected_orbit;
};

inline OrbitData orbit_data(const GroupContext& c, const LinForm& lamchar,
                            const std::string& s_spec,
                            const std::string& a_spec) {
  OrbitData od;
  od.S = parse_subset(c.rt, s_spec);
  od.ls = compute_lsets(c.rt, od.S);
  od.a = parse_a(od.ls, c.q, a_spec);
  od.gs = build_generators(c.rt, od.S, od.ls, od.a, lamchar, c.q);
  od.proots = build_p_S(c.rt, od.ls);
  mpz_ui_pow_ui(od.expected_orbit.get_mpz_t(), static_cast<unsigned>(c.q),
                static_cast<unsigned>(2 * (c.rt.r_plus - od.S.size())));
  return od;
}

inline json generators_json(const RootTables& t, const GeneratorSet& gs) {
  json arr = json::array();
  for (const OrbitGenerator& g : gs.gens) {
    json row;
    row["gamma"] = root_json(g.gamma);
    row["kind"] = g.kind == GenKind::minor ? "minor" : "char_coeff";
    if (g.kind == GenKind::minor) {
      row["rows"] = g.shape.rows;
      row["cols"] = g.shape.cols;
    } else {
      row["cut"] = g.cut;
    }
    row["equation"] = render_generator(t, g);
    row["value"] = g.value.v;
    arr.push_back(std::move(row));
  }
  return arr;
}

inline void cmd_orbit(const RunConfig& cfg, ReportCtx& rep) {
  GroupContext c = make_context(cfg.n, cfg.q, cfg.caps);
  LinForm lamchar = parse_lambda(c.rt, c.q, cfg.lambda_spec);
  OrbitData od = orbit_data(c, lamchar, cfg.s_spec, cfg.a_spec);
  const LinForm& lamSa = od.gs.lambda;
  embed_root_order(c.rt, rep);

  rep.results["S"] = roots_json(od.S.roots);
  rep.results["a"] = od.a.vals;
  rep.results["a_domain"] = roots_json(od.ls.a_domain);
  rep.results["canonical_form"] = form_json(c.rt, lamSa);
  rep.results["canonical_form_display"] = form_triangle(c.rt, lamSa);
  rep.results["polarization"] =
      json{{"roots", roots_json(od.proots)},
           {"dimension", od.proots.size()},
           {"expected_dimension", c.rt.N - (c.rt.r_plus - od.S.size())}};
  rep.results["expected_orbit_size"] = od.expected_orbit.get_str();
  json eqs = json::array();
  for (const std::string& e : render_equations(c.rt, od.gs)) eqs.push_back(e);
  rep.results["equations"] = eqs;
  rep.results["generators"] = generators_json(c.rt, od.gs);

  bool pol_ok = is_associative_polarization(c, od.proots, lamSa);
  rep.check("polarization_associative", pol_ok, "");
  rep.check("polarization_dimension",
            static_cast<int>(od.proots.size()) ==
                c.rt.N - (c.rt.r_plus - od.S.size()),
            std::to_string(od.proots.size()) + " of " +
                std::to_string(c.rt.N - (c.rt.r_plus - od.S.size())));
  rep.check("orbit_size_formula",
            orbit_size_formula(c, lamSa) == od.expected_orbit,
            "rank-based size " + orbit_size_formula(c, lamSa).get_str());

  OrbitIdealReport oir = verify_orbit_ideal(c, od.S, od.ls, od.a, lamchar);
  rep.results["orbit_size"] = oir.orbit_size;
  rep.check("orbit_enumerated_size",
            mpz_class(static_cast<unsigned long>(oir.orbit_size)) ==
                od.expected_orbit,
            std::to_string(oir.orbit_size) + " points");
  rep.check("orbit_satisfies_equations", oir.orbit_satisfies, "");
  if (!oir.partial) {
    rep.check("variety_point_count", oir.counts_match,
              oir.variety_count.get_str() + " of " +
                  oir.expected_count.get_str());
    rep.check("variety_equals_orbit", oir.variety_equals_orbit, "");
  } else {
    rep.partial("variety_point_count",
                "full scan skipped: group order exceeds the enumeration cap");
    rep.partial("variety_equals_orbit",
                "full scan skipped: group order exceeds the enumeration cap");
  }
  rep.check("variety_stable_under_action", oir.variety_stable,
            oir.partial ? "checked on the orbit" : "checked on the variety");
}

inline std::string md_orbit(const RunConfig& cfg, const ReportCtx& rep) {
  std::string md = "# Orbit report (n=" + std::to_string(cfg.n) +
                   ", q=" + std::to_string(cfg.q) + ")\n\n";
  std::string sstr = "{";
  {
    bool first = true;
    for (const auto& r : rep.results["S"]) {
      if (!first) sstr += ",";
      first = false;
      sstr += "(" + std::to_string(r[0].get<int>()) + "," +
              std::to_string(r[1].get<int>()) + ")";
    }
    sstr += "}";
  }
  md += "- S = " + sstr + "\n";
  std::string astr = "(";
  {
    bool first = true;
    for (const auto& v : rep.results["a"]) {
      if (!first) astr += ", ";
      first = false;
      astr += std::to_string(v.get<int>());
    }
    astr += ")";
  }
  md += "- a = " + astr + "\n";
  md += "- character: " + cfg.lambda_spec + "\n";
  md += "- orbit size = " +
        std::to_string(rep.results["orbit_size"].get<uint64_t>()) +
        " (expected " + rep.results["expected_orbit_size"].get<std::string>() +
        ")\n\n";
  md += "## Canonical form\n\n```\n";
  for (const auto& row : rep.results["canonical_form_display"])
    md += row.get<std::string>() + "\n";
  md += "```\n\n";
  md += "## Polarization\n\n";
  md += "- dimension " +
        std::to_string(rep.results["polarization"]["dimension"].get<size_t>()) +
        " of ambient " + std::to_string(build_tables(cfg.n).N) + "\n";
  std::string proots;
  for (const auto& r : rep.results["polarization"]["roots"])
    proots += "(" + std::to_string(r[0].get<int>()) + "," +
              std::to_string(r[1].get<int>()) + ") ";
  md += "- basis roots: " + strip(proots) + "\n\n";
  md += "## Defining equations\n\n```\n";
  for (const auto& e : rep.results["equations"])
    md += e.get<std::string>() + "\n";
  md += "```\n\n";
  return md + md_checks(rep);
}

// ---------------------------------------------------------------------------
// ideal: the symbolic side of the defining equations
// ---------------------------------------------------------------------------

inline void cmd_ideal(const RunConfig& cfg, ReportCtx& rep) {
  GroupContext c = make_context(cfg.n, cfg.q, cfg.caps);
  LinForm lamchar = parse_lambda(c.rt, c.q, cfg.lambda_spec);
  OrbitData od = orbit_data(c, lamchar, cfg.s_spec, cfg.a_spec);
  embed_root_order(c.rt, rep);

  rep.results["S"] = roots_json(od.S.roots);
  rep.results["a"] = od.a.vals;
  rep.results["lsets"] = json{{"plus", roots_json(od.ls.plus)},
                              {"zero", roots_json(od.ls.zero)},
                              {"zerozero", roots_json(od.ls.zerozero)},
                              {"minus", roots_json(od.ls.minus)}};
  rep.results["canonical_form"] = form_json(c.rt, od.gs.lambda);
  json eqs = json::array();
  for (const std::string& e : render_equations(c.rt, od.gs)) eqs.push_back(e);
  rep.results["equations"] = eqs;
  rep.results["generators"] = generators_json(c.rt, od.gs);
  auto viols = remark_pattern_violations(c.rt, od.gs);
  rep.results["vanishing_pattern_exceptions"] = roots_json(viols);

  int expect_count = c.rt.r_zero + 2 * od.S.size();
  rep.check("generator_count",
            static_cast<int>(od.gs.gens.size()) == expect_count,
            std::to_string(od.gs.gens.size()) + " of " +
                std::to_string(expect_count));
  bool plus_zero = true, zero_nonzero = true;
  for (const OrbitGenerator& g : od.gs.gens) {
    if (od.ls.in_plus(g.gamma) && g.value.v != 0) plus_zero = false;
    if (od.ls.in_zero(g.gamma) && g.value.v == 0) zero_nonzero = false;
  }
  rep.check("short_mirror_values_zero", plus_zero,
            "minors at L+ roots evaluate to 0 on the canonical form");
  rep.check("long_mirror_values_nonzero", zero_nonzero,
            "minors at L0 roots evaluate to nonzero on the canonical form");
}

inline std::string md_ideal(const RunConfig& cfg, const ReportCtx& rep) {
  std::string md = "# Defining ideal (n=" + std::to_string(cfg.n) +
                   ", q=" + std::to_string(cfg.q) + ")\n\n";
  md += "- character: " + cfg.lambda_spec + "\n\n";
  md += "## Equations\n\n```\n";
  for (const auto& e : rep.results["equations"])
    md += e.get<std::string>() + "\n";
  md += "```\n\n";
  return md + md_checks(rep);
}

// ---------------------------------------------------------------------------
// hecke: spherical-function basis, double cosets, structure constants
// ---------------------------------------------------------------------------

// Pair cap for the commutativity products: each product costs up to
// (|H|^2)^2 fused multiply-adds, so the number of checked pairs is limited
// by a fixed operation budget to keep large parameter sets responsive.
inline size_t commutativity_pair_cap(size_t hsize, size_t basis_count) {
  const unsigned long long budget = 20000000ULL;
  unsigned long long h2 = static_cast<unsigned long long>(hsize) * hsize;
  unsigned long long per_pair = h2 * h2;
  if (per_pair == 0 || per_pair > budget) return 0;
  unsigned long long cap = budget / per_pair;
  unsigned long long want =
      static_cast<unsigned long long>(basis_count) * basis_count;
  return static_cast<size_t>(std::min(cap, want));
}

inline void cmd_hecke(const RunConfig& cfg, ReportCtx& rep) {
  GroupContext c = make_context(cfg.n, cfg.q, cfg.caps);
  LinForm lamchar = parse_lambda(c.rt, c.q, cfg.lambda_spec);
  GroupFunction xi = hecke_xi(c, lamchar);
  HeckeBasisReport basis = hecke_basis(c, lamchar);
  embed_root_order(c.rt, rep);

  json rows = json::array();
  for (const HeckeBasisElem& el : basis.elems) {
    json row;
    row["S"] = roots_json(el.S.roots);
    row["b"] = el.b.b;
    GrpElem x = elem_at(c, el.x);
    json entries = json::object();
    for (const Root& r : c.rt.roots) {
      int32_t v = x.x.at(r.i, r.j);
      if (v != 0) entries[root_key(r)] = v;
    }
    row["representative"] = entries;
    row["coset_id"] = el.coset_id;
    row["support_size"] = el.element.support.size();
    rows.push_back(std::move(row));
  }
  rep.results["basis"] = rows;
  rep.results["expected_count"] = basis.expected_count.get_str();
  rep.results["subgroup_size"] = xi.mask.size();

  rep.check("basis_count",
            mpz_class(static_cast<unsigned long>(basis.elems.size())) ==
                basis.expected_count,
            std::to_string(basis.elems.size()) + " of " +
                basis.expected_count.get_str());
  rep.check("representatives_compatible", basis.all_compatible, "");
  rep.check("projections_nonzero", basis.all_nonzero, "");
  rep.check("cosets_distinct", basis.cosets_distinct, "");
  rep.check("construction_direct", !basis.fallback_used,
            basis.fallback_used ? "fallback representative search used" : "");

  if (c.enumerable()) {
    int dim = hecke_dim_by_cosets(c, lamchar);
    rep.results["dimension_by_cosets"] = dim;
    rep.check("dimension_by_cosets",
              mpz_class(static_cast<long>(dim)) == basis.expected_count,
              std::to_string(dim) + " compatible double cosets");
  } else {
    rep.results["dimension_by_cosets"] = nullptr;
    rep.partial("dimension_by_cosets",
                "skipped: group order exceeds the enumeration cap");
  }

  size_t cap = commutativity_pair_cap(xi.mask.size(), basis.elems.size());
  CommutativityReport comm = verify_commutativity(c, basis.elems, cap);
  json table = json::array();
  for (const StructureEntry& se : comm.table) {
    json row;
    row["i"] = se.i;
    row["j"] = se.j;
    json coeffs = json::array();
    for (const CycRat& cr : se.coeffs) coeffs.push_back(cr.to_string());
    row["coeffs"] = coeffs;
    table.push_back(std::move(row));
  }
  rep.results["structure_constants"] = table;
  rep.results["pairs_checked"] = comm.pairs_checked;
  std::string pair_note =
      std::to_string(comm.pairs_checked) + " of " +
      std::to_string(basis.elems.size() * basis.elems.size()) +
      " ordered pairs";
  if (!comm.partial) {
    rep.check("products_commute", comm.all_commute, pair_note);
    rep.check("products_lie_in_span", comm.closure_ok, pair_note);
  } else if (comm.pairs_checked == 0) {
    rep.partial("products_commute", "skipped under the operation budget");
    rep.partial("products_lie_in_span", "skipped under the operation budget");
  } else {
    rep.check("products_commute", comm.all_commute, pair_note);
    rep.check("products_lie_in_span", comm.closure_ok, pair_note);
    rep.partial("products_complete", pair_note + " under the operation budget");
  }
}

inline std::string md_hecke(const RunConfig& cfg, const ReportCtx& rep) {
  std::string md = "# Spherical basis (n=" + std::to_string(cfg.n) +
                   ", q=" + std::to_string(cfg.q) + ")\n\n";
  md += "- character: " + cfg.lambda_spec + "\n";
  md += "- basis size: " + std::to_string(rep.results["basis"].size()) +
        " (expected " + rep.results["expected_count"].get<std::string>() +
        ")\n\n";
  md += "| S | b | representative | support |\n|---|---|---|---|\n";
  for (const auto& row : rep.results["basis"]) {
    std::string sstr = "{";
    bool first = true;
    for (const auto& r : row["S"]) {
      if (!first) sstr += ",";
      first = false;
      sstr += "(" + std::to_string(r[0].get<int>()) + "," +
              std::to_string(r[1].get<int>()) + ")";
    }
    sstr += "}";
    std::string bstr = "(";
    first = true;
    for (const auto& v : row["b"]) {
      if (!first) bstr += ",";
      first = false;
      bstr += std::to_string(v.get<int>());
    }
    bstr += ")";
    std::string ent;
    for (auto it = row["representative"].begin();
         it != row["representative"].end(); ++it) {
      if (!ent.empty()) ent += " ";
      ent += "x" + it.key() + "=" + std::to_string(it.value().get<int>());
    }
    if (ent.empty()) ent = "identity";
    md += "| " + sstr + " | " + bstr + " | " + ent + " | " +
          std::to_string(row["support_size"].get<size_t>()) + " |\n";
  }
  return md + "\n" + md_checks(rep);
}

// ---------------------------------------------------------------------------
// verify: the ordered battery of module verifiers
// ---------------------------------------------------------------------------

struct VerifyCase {
  int n = 0;
  int q = 0;
  bool counting_only = false;
  std::string label() const {
    return "n=" + std::to_string(n) + " q=" + std::to_string(q) +
           (counting_only ? " (counting only)" : "");
  }
};

inline std::vector<VerifyCase> verify_grid(const RunConfig& cfg) {
  std::vector<VerifyCase> grid;
  auto add = [&](int n, int q, bool co) {
    if (cfg.n && cfg.n != n) return;
    if (cfg.q && cfg.q != q) return;
    grid.push_back({n, q, co});
  };
  add(3, 2, false);
  add(3, 3, false);
  add(4, 2, false);
  add(4, 3, false);
  add(5, 2, false);
  if (cfg.level == "full") {
    add(5, 3, true);
    add(6, 2, true);
  }
  return grid;
}

inline std::string case_tag(const VerifyCase& vc) {
  return "n" + std::to_string(vc.n) + "q" + std::to_string(vc.q);
}

inline void verify_root_tables(const std::vector<VerifyCase>& grid,
                               ReportCtx& rep) {
  bool ok = true;
  std::vector<int> seen;
  for (const VerifyCase& vc : grid) {
    if (std::find(seen.begin(), seen.end(), vc.n) != seen.end()) continue;
    seen.push_back(vc.n);
    RootTables t = build_tables(vc.n);
    if (!(t.r_zero == t.k + t.eps && t.r_pos.size() == t.r_neg.size() &&
          t.r_plus + t.r_zero + static_cast<int>(t.r_neg.size()) == t.N))
      ok = false;
    for (size_t u = 1; u < t.roots.size(); ++u) {
      const Root &a = t.roots[u - 1], &b = t.roots[u];
      if (!(a.i < b.i || (a.i == b.i && a.j > b.j))) ok = false;
    }
    for (const Root& r : t.pi)
      if (t.zone(r) != 1) ok = false;
  }
  rep.check("root_tables", ok,
            std::to_string(seen.size()) + " table sizes checked");
}

inline void verify_lsets(const std::vector<VerifyCase>& grid, ReportCtx& rep) {
  bool ok = true;
  int subsets = 0;
  std::vector<int> seen;
  for (const VerifyCase& vc : grid) {
    if (std::find(seen.begin(), seen.end(), vc.n) != seen.end()) continue;
    seen.push_back(vc.n);
    RootTables t = build_tables(vc.n);
    for (const SubsetS& S : all_subsets(t)) {
      ++subsets;
      LSets ls = compute_lsets(t, S);
      int s = S.size();
      if (!(static_cast<int>(ls.plus.size()) == s &&
            static_cast<int>(ls.minus.size()) == s &&
            static_cast<int>(ls.zero.size()) == t.k - s &&
            static_cast<int>(ls.zerozero.size()) == t.eps))
        ok = false;
      if (!std::is_sorted(ls.a_domain.begin(), ls.a_domain.end())) ok = false;
      size_t total = ls.plus.size() + ls.zero.size() + ls.zerozero.size() +
                     ls.minus.size();
      if (total != ls.all.size()) ok = false;
    }
  }
  rep.check("lset_partition", ok, std::to_string(subsets) + " subsets checked");
}

inline void verify_polarizations(const std::vector<VerifyCase>& grid,
                                 ReportCtx& rep) {
  bool ok = true;
  int count = 0;
  for (const VerifyCase& vc : grid) {
    if (vc.counting_only) continue;
    GroupContext c = make_context(vc.n, vc.q);
    LinForm lamchar = standard_character(c.rt, c.q);
    for (const SubsetS& S : all_subsets(c.rt)) {
      LSets ls = compute_lsets(c.rt, S);
      auto proots = build_p_S(c.rt, ls);
      for (const AVector& a : enumerate_a_vectors(ls, c.q)) {
        ++count;
        LinForm lam = build_canonical_form(c.rt, S, ls, lamchar, a, c.q);
        if (!is_associative_polarization(c, proots, lam)) ok = false;
        if (static_cast<int>(proots.size()) !=
            c.rt.N - (c.rt.r_plus - S.size()))
          ok = false;
        mpz_class expect;
        mpz_ui_pow_ui(expect.get_mpz_t(), static_cast<unsigned>(c.q),
                      static_cast<unsigned>(2 * (c.rt.r_plus - S.size())));
        if (orbit_size_formula(c, lam) != expect) ok = false;
      }
    }
  }
  rep.check("polarizations", ok,
            std::to_string(count) + " canonical forms checked");
}

inline void verify_characters(const std::vector<VerifyCase>& grid,
                              ReportCtx& rep) {
  bool norm_ok = true, agree_ok = true;
  int comps = 0, agreed = 0;
  for (const VerifyCase& vc : grid) {
    if (vc.counting_only) continue;
    GroupContext c = make_context(vc.n, vc.q);
    LinForm lamchar = standard_character(c.rt, c.q);
    for (const SubsetS& S : all_subsets(c.rt)) {
      LSets ls = compute_lsets(c.rt, S);
      auto proots = build_p_S(c.rt, ls);
      for (const AVector& a : enumerate_a_vectors(ls, c.q)) {
        ++comps;
        LinForm lam = build_canonical_form(c.rt, S, ls, lamchar, a, c.q);
        auto orbit = orbit_of(c, lam);
        GroupFunction chi = orbit_character(c, orbit);
        auto norm = inner_product(c, chi, chi);
        if (!(norm.first == 1 && norm.second == 1)) norm_ok = false;
        GroupFunction xi = xi_from_form(c, proots, lam);
        GroupFunction ind = induce_character(c, xi);
        ++agreed;
        if (!(ind == chi)) agree_ok = false;
      }
    }
  }
  rep.check("character_norms", norm_ok,
            std::to_string(comps) + " components have norm 1");
  rep.check("character_formula_agreement", agree_ok,
            std::to_string(agreed) +
                " induced characters equal the orbit-sum characters");
}

inline void verify_ideals(const std::vector<VerifyCase>& grid,
                          ReportCtx& rep) {
  bool ok = true;
  int full = 0, partial = 0;
  for (const VerifyCase& vc : grid) {
    if (vc.counting_only) continue;
    GroupContext c = make_context(vc.n, vc.q);
    LinForm lamchar = standard_character(c.rt, c.q);
    for (const SubsetS& S : all_subsets(c.rt)) {
      LSets ls = compute_lsets(c.rt, S);
      for (const AVector& a : enumerate_a_vectors(ls, c.q)) {
        OrbitIdealReport r = verify_orbit_ideal(c, S, ls, a, lamchar);
        if (!r.orbit_satisfies || !r.variety_stable) ok = false;
        if (r.partial) {
          ++partial;
        } else {
          ++full;
          if (!r.counts_match || !r.variety_equals_orbit) ok = false;
        }
      }
    }
  }
  std::string det = std::to_string(full) + " full scans";
  if (partial) det += ", " + std::to_string(partial) + " orbit-only (capped)";
  rep.check("orbit_ideals", ok, det);
}

inline void verify_fixtures(const std::vector<VerifyCase>& grid,
                            const std::string& dir, ReportCtx& rep) {
  namespace fs = std::filesystem;
  std::vector<int> ns;
  for (const VerifyCase& vc : grid)
    if (std::find(ns.begin(), ns.end(), vc.n) == ns.end()) ns.push_back(vc.n);
  if (!fs::exists(dir)) {
    rep.check("fixture_equations", false, "fixtures directory not found: " + dir);
    return;
  }
  std::vector<std::string> files;
  for (const auto& e : fs::directory_iterator(dir))
    if (e.path().extension() == ".json") files.push_back(e.path().string());
  std::sort(files.begin(), files.end());

  bool ok = true;
  int instances = 0;
  std::string detail;
  for (const std::string& f : files) {
    std::ifstream in(f);
    json fx = json::parse(in);
    int n = fx["n"].get<int>();
    if (std::find(ns.begin(), ns.end(), n) == ns.end()) continue;
    RootTables t = build_tables(n);
    SubsetS S;
    for (const auto& r : fx["S"])
      S.roots.push_back(Root{r[0].get<int>(), r[1].get<int>()});
    LSets ls = compute_lsets(t, S);
    for (const auto& inst : fx["instances"]) {
      ++instances;
      int q = inst["q"].get<int>();
      LinForm lamchar(q, t.N);
      for (auto it = inst["lambda"].begin(); it != inst["lambda"].end(); ++it) {
        Root r = parse_root_token(it.key());
        lamchar.set(t, r, it.value().get<int>());
      }
      AVector a;
      a.domain = ls.a_domain;
      for (const auto& v : inst["a"]) a.vals.push_back(v.get<int>());
      GeneratorSet gs = build_generators(t, S, ls, a, lamchar, q);
      auto rendered = render_equations(t, gs);
      std::vector<std::string> expected;
      for (const auto& e : inst["equations"])
        expected.push_back(e.get<std::string>());
      if (rendered != expected) {
        ok = false;
        if (detail.empty())
          detail = fs::path(f).filename().string() + " q=" +
                   std::to_string(q) + " differs";
      }
      if (inst.contains("canonical_form")) {
        for (const Root& r : t.roots) {
          std::string key = root_key(r);
          int expect = inst["canonical_form"].contains(key)
                           ? inst["canonical_form"][key].get<int>()
                           : 0;
          if (gs.lambda.at(t, r) != expect) {
            ok = false;
            if (detail.empty())
              detail = fs::path(f).filename().string() + " canonical form";
          }
        }
      }
    }
  }
  if (detail.empty())
    detail = std::to_string(instances) + " fixture instances reproduced";
  rep.check("fixture_equations", ok, detail);
}

inline void verify_separation(const std::vector<VerifyCase>& grid,
                              ReportCtx& rep) {
  bool ok = true;
  int pairs = 0;
  for (const VerifyCase& vc : grid) {
    if (vc.counting_only) continue;
    GroupContext c = make_context(vc.n, vc.q);
    SeparationReport r =
        verify_orbit_separation(c, standard_character(c.rt, c.q));
    if (!r.all_disjoint || !r.all_witnessed) ok = false;
    pairs += static_cast<int>(r.pairs.size());
  }
  rep.check("orbit_separation", ok,
            std::to_string(pairs) + " component pairs separated");
}

inline void verify_decompositions(const std::vector<VerifyCase>& grid,
                                  ReportCtx& rep, json& results) {
  bool ok = true;
  json rows = json::array();
  for (const VerifyCase& vc : grid) {
    if (vc.counting_only) continue;
    GroupContext c = make_context(vc.n, vc.q);
    DecompositionReport d =
        decompose(c, standard_character(c.rt, c.q), c.enumerable());
    if (!(d.component_count == d.expected_count && d.multiplicity_free &&
          d.total_dim == d.expected_dim))
      ok = false;
    if (d.vnorm && *d.vnorm != d.component_count) ok = false;
    json row;
    row["case"] = case_tag(vc);
    row["components"] = d.component_count.get_str();
    row["total_dim"] = d.total_dim.get_str();
    row["module_norm"] = d.vnorm ? json(d.vnorm->get_str()) : json();
    rows.push_back(std::move(row));
  }
  results["decompositions"] = rows;
  rep.check("decomposition", ok,
            std::to_string(rows.size()) + " cases decomposed");
}

inline void verify_counting(const std::vector<VerifyCase>& grid,
                            ReportCtx& rep) {
  // Component-count and dimension identities as pure arithmetic, including
  // the counting-only grid entries and the full range 3 <= n <= 8.
  bool ok = true;
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
      mpz_class expect_dim;
      mpz_ui_pow_ui(expect_dim.get_mpz_t(), static_cast<unsigned>(q),
                    static_cast<unsigned>(t.r_plus + t.r_zero));
      if (total != expect_dim) ok = false;
      if (count != expected_component_count(t, q)) ok = false;
    }
  }
  // Enumerative cross-check on the grid cases (including counting-only):
  // a-vector and b-vector enumerations agree with the closed-form count.
  for (const VerifyCase& vc : grid) {
    RootTables t = build_tables(vc.n);
    mpz_class acount = 0, bcount = 0;
    for (const SubsetS& S : all_subsets(t)) {
      LSets ls = compute_lsets(t, S);
      acount += static_cast<unsigned long>(enumerate_a_vectors(ls, vc.q).size());
      bcount +=
          static_cast<unsigned long>(enumerate_b_vectors(t, S, vc.q).size());
    }
    if (acount != expected_component_count(t, vc.q)) ok = false;
    if (bcount != expected_component_count(t, vc.q)) ok = false;
  }
  rep.check("counting_identities", ok,
            "dimension and component-count formulas, n = 3..8, q in {2,3,5}");
}

inline void verify_restriction(const std::vector<VerifyCase>& grid,
                               std::uint64_t seed, ReportCtx& rep) {
  // Characters agreeing on the mirror roots induce equal module characters;
  // sampled over seeded random values on the remaining superdiagonal roots.
  bool ok = true;
  int pairs = 0;
  for (const VerifyCase& vc : grid) {
    if (vc.counting_only || vc.n > 4) continue;
    GroupContext c = make_context(vc.n, vc.q);
    std::mt19937_64 rng(seed * 1000003ULL +
                        static_cast<std::uint64_t>(vc.n) * 101 +
                        static_cast<std::uint64_t>(vc.q));
    std::vector<Root> free_roots;
    for (const Root& r : c.rt.pi0)
      if (!c.rt.in_pi(r)) free_roots.push_back(r);
    for (int rep_i = 0; rep_i < 5; ++rep_i) {
      LinForm l1(c.q, c.rt.N), l2(c.q, c.rt.N);
      for (const Root& r : c.rt.pi) {
        bool on_superdiag = r.j == r.i + 1;
        int v = on_superdiag
                    ? static_cast<int>(rng() % static_cast<unsigned>(c.q))
                    : 1 + static_cast<int>(rng() %
                                           static_cast<unsigned>(c.q - 1));
        l1.set(c.rt, r, v);
        l2.set(c.rt, r, v);
      }
      for (const Root& r : free_roots) {
        l1.set(c.rt, r, static_cast<int>(rng() % static_cast<unsigned>(c.q)));
        l2.set(c.rt, r, static_cast<int>(rng() % static_cast<unsigned>(c.q)));
      }
      GroupFunction i1 = induce_character(c, xi_from_form(c, c.rt.r_pos, l1));
      GroupFunction i2 = induce_character(c, xi_from_form(c, c.rt.r_pos, l2));
      ++pairs;
      if (!(i1 == i2)) ok = false;
    }
  }
  rep.check("restriction_equality", ok,
            std::to_string(pairs) + " sampled character pairs");
}

inline void verify_counterexample(ReportCtx& rep) {
  // On the two-dimensional commutative algebra u*u = v, forms with a nonzero
  // value on v admit no associative polarization; forms vanishing on v do.
  bool ok = true;
  for (int p : {2, 3}) {
    FiniteAlgebra alg = FiniteAlgebra::truncated_poly_radical(p, 3);
    for (int lu = 0; lu < p; ++lu) {
      for (int lv = 1; lv < p; ++lv)
        if (search_associative_polarization(alg, {lu, lv}).has_value())
          ok = false;
      if (!search_associative_polarization(alg, {lu, 0}).has_value())
        ok = false;
    }
  }
  rep.check("polarization_counterexample", ok,
            "nonvanishing forms on the square algebra admit no polarization");
}

inline void verify_hecke(const std::vector<VerifyCase>& grid, ReportCtx& rep) {
  bool compat_ok = true, equiv_ok = true, basis_ok = true, comm_ok = true;
  int elems = 0, pairs = 0, equiv_pts = 0;
  for (const VerifyCase& vc : grid) {
    if (vc.counting_only) continue;
    GroupContext c = make_context(vc.n, vc.q);
    LinForm lamchar = standard_character(c.rt, c.q);
    GroupFunction xi = hecke_xi(c, lamchar);
    HeckeBasisReport basis = hecke_basis(c, lamchar);
    elems += static_cast<int>(basis.elems.size());
    if (!basis.all_compatible) compat_ok = false;
    if (!(basis.all_nonzero && basis.cosets_distinct &&
          mpz_class(static_cast<unsigned long>(basis.elems.size())) ==
              basis.expected_count))
      basis_ok = false;
    if (c.enumerable() &&
        mpz_class(static_cast<long>(hecke_dim_by_cosets(c, lamchar))) !=
            basis.expected_count)
      basis_ok = false;
    if (vc.n == 3) {
      // Exhaustive: the projected element is nonzero exactly on the
      // conjugation-compatible points.
      for (uint64_t x = 0; x < c.size(); ++x) {
        ++equiv_pts;
        bool compat = xi_compatible(c, xi, x);
        bool nonzero = !sandwich(c, xi, x).is_zero();
        if (compat != nonzero) equiv_ok = false;
      }
    }
    size_t cap = commutativity_pair_cap(xi.mask.size(), basis.elems.size());
    CommutativityReport comm = verify_commutativity(c, basis.elems, cap);
    pairs += static_cast<int>(comm.pairs_checked);
    if (!comm.all_commute || !comm.closure_ok) comm_ok = false;
  }
  rep.check("hecke_compatibility", compat_ok,
            std::to_string(elems) + " representatives compatible");
  rep.check("hecke_compatibility_equivalence", equiv_ok,
            std::to_string(equiv_pts) +
                " points: nonvanishing iff conjugation-compatible");
  rep.check("hecke_basis", basis_ok,
            std::to_string(elems) + " elements in distinct double cosets");
  rep.check("hecke_commutativity", comm_ok,
            std::to_string(pairs) + " ordered products in the span");
}

inline void cmd_verify(const RunConfig& cfg, ReportCtx& rep) {
  std::vector<VerifyCase> grid = verify_grid(cfg);
  UTGG_REQUIRE(!grid.empty(),
               "requested case is outside the " + cfg.level + " grid");
  json cases = json::array();
  for (const VerifyCase& vc : grid)
    cases.push_back(json{
        {"n", vc.n}, {"q", vc.q}, {"counting_only", vc.counting_only}});
  rep.results["grid"] = cases;
  rep.results["level"] = cfg.level;
  json orders = json::object();
  for (const VerifyCase& vc : grid) {
    std::string key = std::to_string(vc.n);
    if (orders.contains(key)) continue;
    RootTables t = build_tables(vc.n);
    json order = json::array();
    for (const Root& r : t.roots) order.push_back(root_json(r));
    orders[key] = order;
  }
  rep.results["root_order"] = orders;

  verify_root_tables(grid, rep);
  verify_lsets(grid, rep);
  verify_polarizations(grid, rep);
  verify_characters(grid, rep);
  verify_ideals(grid, rep);
  verify_fixtures(grid, cfg.fixtures_dir, rep);
  verify_separation(grid, rep);
  verify_decompositions(grid, rep, rep.results);
  verify_counting(grid, rep);
  verify_restriction(grid, cfg.seed, rep);
  verify_counterexample(rep);
  verify_hecke(grid, rep);
}

inline std::string md_verify(const RunConfig& cfg, const ReportCtx& rep) {
  std::string md = "# Verification suite (" + cfg.level + ")\n\n";
  md += "Cases: ";
  bool first = true;
  for (const auto& vc : rep.results["grid"]) {
    if (!first) md += ", ";
    first = false;
    md += "n=" + std::to_string(vc["n"].get<int>()) +
          " q=" + std::to_string(vc["q"].get<int>());
    if (vc["counting_only"].get<bool>()) md += " (counting only)";
  }
  md += "\n\n";
  return md + md_checks(rep);
}

// ---------------------------------------------------------------------------
// Entry point
// ---------------------------------------------------------------------------

inline void echo_params(const RunConfig& cfg, ReportCtx& rep) {
  rep.params["n"] = cfg.n ? json(cfg.n) : json();
  rep.params["q"] = cfg.q ? json(cfg.q) : json();
  rep.params["lambda"] = cfg.lambda_spec.empty() ? json() : json(cfg.lambda_spec);
  rep.params["S"] = cfg.s_spec.empty() ? json() : json(cfg.s_spec);
  rep.params["a"] = cfg.a_spec.empty() ? json() : json(cfg.a_spec);
  rep.params["format"] = cfg.format;
  rep.params["level"] = cfg.level;
  rep.params["caps"] = json{{"group", cfg.caps.group_enum},
                            {"orbit", cfg.caps.orbit}};
  rep.params["workers"] = cfg.workers;
  rep.params["seed"] = cfg.seed;
}

inline int execute(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  ReportCtx rep;
  rep.timing = cfg.timing;
  echo_params(cfg, rep);
  std::string md;
  try {
    if (cfg.command == "roots") {
      cmd_roots(cfg, rep);
      md = md_roots(cfg, rep);
    } else if (cfg.command == "lsets") {
      cmd_lsets(cfg, rep);
      md = md_lsets(cfg, rep);
    } else if (cfg.command == "decompose") {
      cmd_decompose(cfg, rep);
      md = md_decompose(cfg, rep);
    } else if (cfg.command == "orbit") {
      cmd_orbit(cfg, rep);
      md = md_orbit(cfg, rep);
    } else if (cfg.command == "ideal") {
      cmd_ideal(cfg, rep);
      md = md_ideal(cfg, rep);
    } else if (cfg.command == "hecke") {
      cmd_hecke(cfg, rep);
      md = md_hecke(cfg, rep);
    } else if (cfg.command == "verify") {
      cmd_verify(cfg, rep);
      md = md_verify(cfg, rep);
    } else {
      err << "error: unknown command '" << cfg.command << "'\n";
      return 2;
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }

  std::string text =
      cfg.format == "md" ? md : rep.to_json(cfg.command).dump(2) + "\n";
  if (cfg.out_path.empty()) {
    out << text;
  } else {
    std::ofstream f(cfg.out_path, std::ios::binary);
    if (!f) {
      err << "error: cannot write " << cfg.out_path << "\n";
      return 2;
    }
    f << text;
  }
  return rep.all_pass() ? 0 : 1;
}

inline int run_cli(std::vector<std::string> args, std::ostream& out,
                   std::ostream& err) {
  CLI::App app{"Exact constructions and verifications for the coadjoint "
               "orbit decomposition of unitriangular matrix groups"};
  app.require_subcommand(1);
  RunConfig cfg;

  auto add_common = [&](CLI::App* sub, bool need_n, bool need_q,
                        bool has_lambda, bool has_sa) {
    auto* n_opt = sub->add_option("--n", cfg.n, "matrix size (n >= 3)");
    if (need_n) n_opt->required();
    auto* q_opt = sub->add_option("--q", cfg.q, "field size (prime)");
    if (need_q) q_opt->required();
    if (has_lambda)
      sub->add_option("--lambda", cfg.lambda_spec,
                      "character entries 'i,j=v;i,j=v' on the superdiagonal "
                      "and mirror roots");
    if (has_sa) {
      sub->add_option("--S", cfg.s_spec, "mirror-root subset 'i,j;i,j'");
      sub->add_option("--a", cfg.a_spec,
                      "orbit parameters 'v,v,...' over L0|L00|L- ascending");
    }
    sub->add_option("--format", cfg.format, "output format")
        ->check(CLI::IsMember({"json", "md"}));
    sub->add_option("--caps", cfg.caps_spec,
                    "resource caps 'group=N,orbit=N'");
    sub->add_option("--workers", cfg.workers, "worker pool size")
        ->check(CLI::PositiveNumber);
    sub->add_option("--seed", cfg.seed, "seed for sampled spot checks");
    sub->add_flag("--timing", cfg.timing,
                  "include wall-clock timing in the report");
    sub->add_option("--out", cfg.out_path, "write the report to a file");
  };

  CLI::App* roots = app.add_subcommand("roots", "root tables and zones");
  add_common(roots, true, false, false, false);
  CLI::App* lsets =
      app.add_subcommand("lsets", "mirror-column partition per subset");
  add_common(lsets, true, false, false, false);
  lsets->add_option("--S", cfg.s_spec, "restrict to one subset 'i,j;i,j'");
  CLI::App* dec = app.add_subcommand(
      "decompose", "decompose the big induced module into components");
  add_common(dec, true, true, true, false);
  CLI::App* orb = app.add_subcommand(
      "orbit", "canonical form, polarization and defining equations");
  add_common(orb, true, true, true, true);
  CLI::App* idl =
      app.add_subcommand("ideal", "symbolic generators of the orbit ideal");
  add_common(idl, true, true, true, true);
  CLI::App* hk = app.add_subcommand(
      "hecke", "spherical-function basis and structure constants");
  add_common(hk, true, true, true, false);
  CLI::App* ver =
      app.add_subcommand("verify", "run the ordered verification battery");
  add_common(ver, false, false, false, false);
  ver->add_option("--level", cfg.level, "verification depth")
      ->check(CLI::IsMember({"quick", "full"}));
  ver->add_option("--fixtures", cfg.fixtures_dir,
                  "directory with frozen example files");

  std::reverse(args.begin(), args.end());
  try {
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  cfg.command = app.get_subcommands().front()->get_name();
  try {
    cfg.caps = parse_caps(cfg.caps_spec);
    if (cfg.n) UTGG_REQUIRE(cfg.n >= 3, "n must be at least 3");
    if (cfg.q) UTGG_REQUIRE(is_small_prime(cfg.q), "q must be prime");
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
  return execute(cfg, out, err);
}

}  // namespace utgg::cli
