// Front-end tests: configuration parsing, report schema and determinism,
// exit codes, and the markdown orbit reports matching the frozen example
// files token for token.

#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "utgg/cli.hpp"

using namespace utgg;
using cli::json;

namespace {

struct RunResult {
  int code = 0;
  std::string out;
  std::string err;
};

RunResult run(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = cli::run_cli(std::move(args), out, err);
  return {code, out.str(), err.str()};
}

json parse_report(const RunResult& r) {
  REQUIRE_FALSE(r.out.empty());
  return json::parse(r.out);
}

std::string check_status(const json& rep, const std::string& name) {
  for (const auto& c : rep["checks"])
    if (c["name"].get<std::string>() == name)
      return c["status"].get<std::string>();
  FAIL("check not found: " + name);
  return "";
}

// Lines of the fenced code block following the given heading.
std::vector<std::string> fenced_block(const std::string& md,
                                      const std::string& heading) {
  size_t h = md.find(heading);
  REQUIRE(h != std::string::npos);
  size_t open = md.find("```\n", h);
  REQUIRE(open != std::string::npos);
  size_t start = open + 4;
  size_t close = md.find("```", start);
  REQUIRE(close != std::string::npos);
  std::vector<std::string> lines;
  std::string cur;
  for (size_t u = start; u < close; ++u) {
    if (md[u] == '\n') {
      lines.push_back(cur);
      cur.clear();
    } else {
      cur += md[u];
    }
  }
  if (!cur.empty()) lines.push_back(cur);
  return lines;
}

std::vector<std::string> fixture_files() {
  std::vector<std::string> files;
  for (const auto& e : std::filesystem::directory_iterator(UTGG_FIXTURE_DIR))
    if (e.path().extension() == ".json") files.push_back(e.path().string());
  std::sort(files.begin(), files.end());
  return files;
}

std::string lambda_spec_of(const json& inst) {
  std::string spec;
  for (auto it = inst["lambda"].begin(); it != inst["lambda"].end(); ++it) {
    if (!spec.empty()) spec += ";";
    spec += it.key() + "=" + std::to_string(it.value().get<int>());
  }
  return spec;
}

std::string s_spec_of(const json& fx) {
  std::string spec;
  for (const auto& r : fx["S"]) {
    if (!spec.empty()) spec += ";";
    spec += std::to_string(r[0].get<int>()) + "," +
            std::to_string(r[1].get<int>());
  }
  return spec;
}

std::string a_spec_of(const json& inst) {
  std::string spec;
  for (const auto& v : inst["a"]) {
    if (!spec.empty()) spec += ",";
    spec += std::to_string(v.get<int>());
  }
  return spec;
}

}  // namespace

TEST_CASE("report schema is stable and runs are byte-identical", "[cli]") {
  std::vector<std::vector<std::string>> cases = {
      {"roots", "--n", "4", "--q", "3"},
      {"lsets", "--n", "5", "--q", "2"},
      {"decompose", "--n", "3", "--q", "3", "--lambda", "1,2=1"},
      {"orbit", "--n", "4", "--q", "2", "--lambda", "1,3=1", "--S", "1,3",
       "--a", "1,1"},
      {"ideal", "--n", "4", "--q", "2", "--lambda", "1,3=1", "--S", "",
       "--a", "1,1"},
      {"hecke", "--n", "3", "--q", "3", "--lambda", "1,2=2"},
      {"verify", "--n", "3", "--q", "2", "--level", "quick"},
  };
  for (const auto& args : cases) {
    CAPTURE(args[0]);
    RunResult r1 = run(args);
    RunResult r2 = run(args);
    CHECK(r1.code == 0);
    CHECK(r1.out == r2.out);  // byte-identical reports
    json rep = parse_report(r1);
    CHECK(rep["command"] == args[0]);
    REQUIRE(rep.contains("params"));
    REQUIRE(rep.contains("results"));
    REQUIRE(rep.contains("checks"));
    REQUIRE(rep.contains("timing"));
    REQUIRE(rep.contains("versions"));
    CHECK(rep["timing"].is_null());
    CHECK(rep["results"].contains("root_order"));
    for (const auto& c : rep["checks"]) {
      CHECK(c.contains("name"));
      CHECK((c["status"] == "pass" || c["status"] == "fail" ||
             c["status"] == "partial"));
    }
    // Round-trip: parse + dump reproduces the exact output.
    CHECK(rep.dump(2) + "\n" == r1.out);
  }
}

TEST_CASE("timing is a placeholder unless requested", "[cli]") {
  RunResult off = run({"roots", "--n", "3"});
  RunResult on = run({"roots", "--n", "3", "--timing"});
  CHECK(parse_report(off)["timing"].is_null());
  json t = parse_report(on)["timing"];
  REQUIRE(t.is_object());
  CHECK(t.contains("total_ms"));
}

TEST_CASE("seed changes sampled inputs but never outcomes", "[cli]") {
  RunResult a = run({"verify", "--n", "3", "--q", "3", "--seed", "1"});
  RunResult b = run({"verify", "--n", "3", "--q", "3", "--seed", "99"});
  CHECK(a.code == 0);
  CHECK(b.code == 0);
  json ra = parse_report(a), rb = parse_report(b);
  REQUIRE(ra["checks"].size() == rb["checks"].size());
  for (size_t u = 0; u < ra["checks"].size(); ++u) {
    CHECK(ra["checks"][u]["name"] == rb["checks"][u]["name"]);
    CHECK(ra["checks"][u]["status"] == rb["checks"][u]["status"]);
  }
}

TEST_CASE("usage errors exit with code 2 and a named cause", "[cli]") {
  // Degenerate character: zero at a mirror root off the superdiagonal.
  RunResult r = run({"decompose", "--n", "4", "--q", "2", "--lambda", "1,3=0"});
  CHECK(r.code == 2);
  CHECK(r.err.find("(1,3)") != std::string::npos);
  CHECK(r.err.find("degenerate") != std::string::npos);

  // Character entry off the allowed support.
  r = run({"decompose", "--n", "4", "--q", "2", "--lambda", "1,4=1"});
  CHECK(r.code == 2);
  CHECK(r.err.find("(1,4)") != std::string::npos);

  // S entry that is not a mirror root.
  r = run({"orbit", "--n", "4", "--q", "2", "--lambda", "1,3=1", "--S", "1,2",
           "--a", "1,1"});
  CHECK(r.code == 2);

  // Wrong a length.
  r = run({"orbit", "--n", "4", "--q", "2", "--lambda", "1,3=1", "--S", "",
           "--a", "1"});
  CHECK(r.code == 2);
  CHECK(r.err.find("2 values") != std::string::npos);

  // Zero at a root where a must be nonzero.
  r = run({"orbit", "--n", "4", "--q", "2", "--lambda", "1,3=1", "--S", "",
           "--a", "0,1"});
  CHECK(r.code == 2);

  // Bad caps.
  r = run({"roots", "--n", "4", "--caps", "bogus=3"});
  CHECK(r.code == 2);

  // Composite q.
  r = run({"decompose", "--n", "3", "--q", "4", "--lambda", "1,2=1"});
  CHECK(r.code == 2);

  // Unknown subcommand is rejected by the parser.
  r = run({"explode", "--n", "3"});
  CHECK(r.code != 0);
}

TEST_CASE("reports can be written to a file", "[cli]") {
  std::string path =
      (std::filesystem::temp_directory_path() / "utgg_report.json").string();
  RunResult r = run({"roots", "--n", "4", "--out", path});
  CHECK(r.code == 0);
  CHECK(r.out.empty());
  std::ifstream in(path);
  REQUIRE(in.good());
  json rep = json::parse(in);
  CHECK(rep["command"] == "roots");
  std::remove(path.c_str());
}

TEST_CASE("markdown orbit reports match the frozen examples token for token",
          "[cli]") {
  for (const std::string& file : fixture_files()) {
    std::ifstream in(file);
    json fx = json::parse(in);
    CAPTURE(file);
    int n = fx["n"].get<int>();
    for (const auto& inst : fx["instances"]) {
      int q = inst["q"].get<int>();
      CAPTURE(q);
      RunResult r = run({"orbit", "--n", std::to_string(n), "--q",
                         std::to_string(q), "--lambda", lambda_spec_of(inst),
                         "--S", s_spec_of(fx), "--a", a_spec_of(inst),
                         "--format", "md"});
      REQUIRE(r.code == 0);

      // Equation block: exact line-for-line match with the frozen strings.
      std::vector<std::string> got =
          fenced_block(r.out, "## Defining equations");
      std::vector<std::string> want;
      for (const auto& e : inst["equations"])
        want.push_back(e.get<std::string>());
      CHECK(got == want);

      // Canonical form block: rebuild the triangle from the frozen values.
      RootTables t = build_tables(n);
      std::vector<std::string> triangle;
      for (int j = 1; j <= n; ++j) {
        std::string row;
        for (int i = 1; i < j; ++i) {
          std::string key =
              std::to_string(i) + "," + std::to_string(j);
          int v = inst["canonical_form"].contains(key)
                      ? inst["canonical_form"][key].get<int>()
                      : 0;
          row += std::to_string(v) + " ";
        }
        row += ".";
        triangle.push_back(row);
      }
      CHECK(fenced_block(r.out, "## Canonical form") == triangle);
    }
  }
}

TEST_CASE("frozen polarization and representative matrices are reproduced",
          "[cli]") {
  for (const std::string& file : fixture_files()) {
    std::ifstream in(file);
    json fx = json::parse(in);
    CAPTURE(file);
    int n = fx["n"].get<int>();
    RootTables t = build_tables(n);
    SubsetS S;
    for (const auto& r : fx["S"])
      S.roots.push_back(Root{r[0].get<int>(), r[1].get<int>()});
    LSets ls = compute_lsets(t, S);

    // Polarization basis: matches the construction and is one.
    std::vector<Root> want_p;
    for (const auto& r : fx["polarization_roots"])
      want_p.push_back(Root{r[0].get<int>(), r[1].get<int>()});
    CHECK(build_p_S(t, ls) == want_p);

    for (const auto& inst : fx["instances"]) {
      int q = inst["q"].get<int>();
      CAPTURE(q);
      GroupContext c = make_context(n, q);
      LinForm lamchar(q, t.N);
      for (auto it = inst["lambda"].begin(); it != inst["lambda"].end(); ++it)
        lamchar.set(t, cli::parse_root_token(it.key()),
                    it.value().get<int>());
      AVector a;
      a.domain = ls.a_domain;
      for (const auto& v : inst["a"]) a.vals.push_back(v.get<int>());
      LinForm lam = build_canonical_form(t, S, ls, lamchar, a, q);
      CHECK(is_associative_polarization(c, want_p, lam));

      // Representative matrices: stored entries equal the construction and
      // independently pass the conjugation-compatibility criterion.
      GroupFunction xi = hecke_xi(c, lamchar);
      auto bvs = enumerate_b_vectors(t, S, q);
      REQUIRE(inst["x_matrices"].size() == bvs.size());
      std::vector<uint64_t> xs;
      for (size_t u = 0; u < bvs.size(); ++u) {
        const json& row = inst["x_matrices"][u];
        std::vector<int> bb;
        for (const auto& v : row["b"]) bb.push_back(v.get<int>());
        REQUIRE(bb == bvs[u].b);
        GrpElem x = build_X_Sb(t, q, S, bvs[u]);
        GrpElem frozen = GrpElem::identity(n, q);
        for (auto it = row["entries"].begin(); it != row["entries"].end();
             ++it) {
          Root rt = cli::parse_root_token(it.key());
          frozen.x.set(rt.i, rt.j, it.value().get<int>());
        }
        CHECK(elem_index(c, x) == elem_index(c, frozen));
        CHECK(xi_compatible(c, xi, elem_index(c, frozen)));
        xs.push_back(elem_index(c, frozen));
      }
      // Pairwise distinct double cosets, by direct membership scan.
      for (size_t u = 0; u < xs.size(); ++u) {
        GrpElem xu_inv = elem_at(c, xs[u]).inv();
        for (size_t v = u + 1; v < xs.size(); ++v) {
          bool same_coset = false;
          GrpElem xv = elem_at(c, xs[v]);
          for (uint64_t h : xi.mask) {
            GrpElem probe = xu_inv * elem_at(c, h).inv() * xv;
            if (std::binary_search(xi.mask.begin(), xi.mask.end(),
                                   elem_index(c, probe))) {
              same_coset = true;
              break;
            }
          }
          CHECK_FALSE(same_coset);
        }
      }
    }
  }
}

TEST_CASE("tampering with a frozen equation fails the named check", "[cli]") {
  namespace fs = std::filesystem;
  fs::path tmp = fs::temp_directory_path() / "utgg_tampered_fixtures";
  fs::remove_all(tmp);
  fs::create_directories(tmp);
  for (const std::string& file : fixture_files())
    fs::copy_file(file, tmp / fs::path(file).filename());

  // Flip the right-hand side of one n=3 equation.
  fs::path victim = tmp / "n3_pi.json";
  std::ifstream in(victim);
  json fx = json::parse(in);
  in.close();
  std::string eq = fx["instances"][0]["equations"][1].get<std::string>();
  eq.back() = eq.back() == '1' ? '2' : '1';
  fx["instances"][0]["equations"][1] = eq;
  std::ofstream out(victim);
  out << fx.dump(2) << "\n";
  out.close();

  RunResult r = run({"verify", "--n", "3", "--q", "2", "--fixtures",
                     tmp.string()});
  CHECK(r.code == 1);
  json rep = parse_report(r);
  CHECK(check_status(rep, "fixture_equations") == "fail");
  // Everything else still passes.
  CHECK(check_status(rep, "orbit_ideals") == "pass");
  CHECK(check_status(rep, "decomposition") == "pass");
  fs::remove_all(tmp);
}

TEST_CASE("verify covers the requested grid and passes", "[cli]") {
  RunResult r = run({"verify", "--n", "4", "--q", "3"});
  CHECK(r.code == 0);
  json rep = parse_report(r);
  REQUIRE(rep["results"]["grid"].size() == 1);
  CHECK(rep["results"]["grid"][0]["n"] == 4);
  CHECK(rep["results"]["grid"][0]["q"] == 3);
  for (const auto& c : rep["checks"]) CHECK(c["status"] != "fail");

  // A case outside the quick grid is a usage error.
  RunResult bad = run({"verify", "--n", "6", "--q", "5"});
  CHECK(bad.code == 2);
}

TEST_CASE("decompose results match the closed-form counts", "[cli]") {
  struct Case {
    int n, q;
    std::string lambda;
    std::string count;
    std::string dim;
  };
  std::vector<Case> cases = {{3, 2, "1,2=1", "3", "4"},
                             {4, 2, "1,3=1", "6", "16"},
                             {5, 2, "1,4=1;2,3=0", "9", "64"}};
  for (const Case& cs : cases) {
    CAPTURE(cs.n, cs.q);
    RunResult r = run({"decompose", "--n", std::to_string(cs.n), "--q",
                       std::to_string(cs.q), "--lambda", cs.lambda});
    CHECK(r.code == 0);
    json rep = parse_report(r);
    CHECK(rep["results"]["component_count"] == cs.count);
    CHECK(rep["results"]["total_dim"] == cs.dim);
    for (const auto& e : rep["results"]["components"])
      CHECK(e["multiplicity"] == "1");
  }
}

TEST_CASE("orbit command reproduces the documented small cases", "[cli]") {
  // n=3, S = {}, a = 1, q = 2: one equation y31 = 1, orbit of size 4.
  RunResult r = run({"orbit", "--n", "3", "--q", "2", "--lambda", "1,2=1",
                     "--S", "", "--a", "1"});
  CHECK(r.code == 0);
  json rep = parse_report(r);
  REQUIRE(rep["results"]["equations"].size() == 1);
  CHECK(rep["results"]["equations"][0] == "y31 = 1");
  CHECK(rep["results"]["orbit_size"] == 4);

  // n=4, S = {(1,3)}, q=3, a=(1,2).  The last right-hand side is the
  // invariant value c*a1 + lambda_13*a2 at the canonical form, so the
  // documented display (= 2) corresponds to superdiagonal value c = 0.
  r = run({"orbit", "--n", "4", "--q", "3", "--lambda", "1,3=1", "--S",
           "1,3", "--a", "1,2"});
  CHECK(r.code == 0);
  rep = parse_report(r);
  std::vector<std::string> eqs;
  for (const auto& e : rep["results"]["equations"])
    eqs.push_back(e.get<std::string>());
  std::vector<std::string> want = {"y41 = 0", "y31 = 1", "y42 = 1",
                                   "y21*y42 + y31*y43 = 2"};
  CHECK(eqs == want);
}

TEST_CASE("hecke structure constants are exported when closure holds",
          "[cli]") {
  RunResult r = run({"hecke", "--n", "3", "--q", "2", "--lambda", "1,2=1"});
  CHECK(r.code == 0);
  json rep = parse_report(r);
  REQUIRE(rep["results"]["basis"].size() == 3);
  CHECK(check_status(rep, "products_commute") == "pass");
  CHECK(check_status(rep, "products_lie_in_span") == "pass");
  // 9 ordered pairs, each with 3 exact coefficients.
  REQUIRE(rep["results"]["structure_constants"].size() == 9);
  for (const auto& row : rep["results"]["structure_constants"])
    CHECK(row["coeffs"].size() == 3);
  // Identity slot: u_0 u_j = |H|^2 u_j with |H| = q = 2.
  for (const auto& row : rep["results"]["structure_constants"]) {
    if (row["i"] != 0) continue;
    size_t j = row["j"].get<size_t>();
    for (size_t m = 0; m < 3; ++m) {
      std::string c = row["coeffs"][m].get<std::string>();
      if (m == j)
        CHECK(c == "4");
      else
        CHECK(c == "0");
    }
  }
}
