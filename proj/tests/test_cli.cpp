// The C interface and the command-line tool, driven through the shared library and std::system.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "cartankit.h"

using json = nlohmann::json;

namespace {

const std::string kProblems = CK_PROBLEMS_DIR;
const std::string kCli = CK_CLI_PATH;

std::string problem(const std::string& name) { return kProblems + "/" + name + ".json"; }

struct Loaded {
  ck_problem* p = nullptr;
  explicit Loaded(const std::string& name) { REQUIRE(ck_problem_load_file(problem(name).c_str(), &p) == CK_OK); }
  ~Loaded() { ck_problem_free(p); }
};

struct Result {
  ck_report* r = nullptr;
  ~Result() { ck_report_free(r); }
  json doc() const {
    const char* text = nullptr;
    REQUIRE(ck_report_json(r, &text) == CK_OK);
    return json::parse(text);
  }
  /// Residual of the first check with this name.
  double residual(const std::string& name) const {
    const json d = doc();
    for (auto& c : d["checks"])
      if (c["check"] == name) return c["residual"].is_null() ? 1e300 : c["residual"].get<double>();
    FAIL("no check named " << name);
    return 0;
  }
};

struct Run {
  int code = -1;
  std::string out;
};

Run cli(const std::string& args, const std::string& env = "") {
  const auto tmp = std::filesystem::temp_directory_path() / ("cartankit_cli_" + std::to_string(::getpid()) + ".txt");
  const std::string cmd = env + " '" + kCli + "' " + args + " > '" + tmp.string() + "' 2>&1";
  const int status = std::system(cmd.c_str());
  Run r;
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  std::ifstream in(tmp);
  std::stringstream ss;
  ss << in.rdbuf();
  r.out = ss.str();
  std::filesystem::remove(tmp);
  return r;
}

}  // namespace

TEST_CASE("library metadata") {
  CHECK(std::string(ck_version()) == "1.0.0");
  CHECK(std::string(ck_status_string(CK_OK)) == "ok");
  CHECK(std::string(ck_status_string(CK_ERR_USAGE)).size() > 0);
  std::vector<std::string> names;
  for (size_t i = 0; i < ck_command_count(); ++i) names.push_back(ck_command_name(i));
  CHECK(names == std::vector<std::string>{"check-lie", "verify-cartan", "ce", "integrate", "verify-module", "roundtrip",
                                          "adjunction", "cubical"});
  CHECK(ck_command_name(ck_command_count()) == nullptr);
}

TEST_CASE("loading errors map to status codes") {
  ck_problem* p = nullptr;
  CHECK(ck_problem_load_file(nullptr, &p) == CK_ERR_ARGUMENT);
  CHECK(ck_problem_load_file("/nonexistent/problem.json", &p) == CK_ERR_IO);
  CHECK(std::string(ck_last_error()).size() > 0);
  CHECK(ck_problem_load_json("{not json", &p) == CK_ERR_PARSE);
  CHECK(ck_problem_load_json(R"({"schema":"other/1"})", &p) == CK_ERR_PARSE);
  CHECK(p == nullptr);
  // Content is resolved when a command runs, so a bad index surfaces there.
  REQUIRE(ck_problem_load_json(R"({"schema":"cartankit/1","lieAlgebra":{"dim":2,"brackets":[{"i":0,"j":5,"coeffs":{"0":1}}]}})",
                               &p) == CK_OK);
  ck_report* early = nullptr;
  CHECK(ck_check_lie(p, &early) == CK_ERR_PROBLEM);
  CHECK(early == nullptr);
  ck_problem_free(p);
  REQUIRE(ck_problem_load_json(R"({"schema":"cartankit/1","lieAlgebra":{"fixture":"sl2"}})", &p) == CK_OK);
  CHECK(ck_problem_set(p, "tol", "-1") == CK_ERR_PROBLEM);
  CHECK(ck_problem_set(p, "mode", "approximate") == CK_ERR_PROBLEM);
  CHECK(ck_problem_set(p, "nonsense", "1") == CK_ERR_PROBLEM);
  CHECK(ck_problem_set(p, "order", "12x") == CK_ERR_PROBLEM);
  CHECK(ck_problem_set(p, "order", "12") == CK_OK);
  ck_report* r = nullptr;
  CHECK(ck_run(p, "no-such-command", nullptr, 0, &r) == CK_ERR_USAGE);
  CHECK(ck_verify_cartan(p, "missing", &r) == CK_ERR_PROBLEM);
  CHECK(ck_run(nullptr, "check-lie", nullptr, 0, &r) == CK_ERR_ARGUMENT);
  CHECK(r == nullptr);
  REQUIRE(ck_check_lie(p, &r) == CK_OK);
  CHECK(ck_report_passed(r));
  ck_report_free(r);
  ck_problem_free(p);
}

TEST_CASE("commands through the C interface") {
  SUBCASE("check-lie") {
    Loaded good("sl2"), bad("broken_antisymmetry");
    Result a, b;
    REQUIRE(ck_check_lie(good.p, &a.r) == CK_OK);
    CHECK(ck_report_passed(a.r));
    REQUIRE(ck_check_lie(bad.p, &b.r) == CK_OK);
    CHECK_FALSE(ck_report_passed(b.r));
    CHECK(b.residual("lie.antisymmetry") == 2.0);
  }
  SUBCASE("verify-cartan") {
    Loaded l("perturbed");
    Result a, b;
    REQUIRE(ck_verify_cartan(l.p, "good", &a.r) == CK_OK);
    CHECK(ck_report_passed(a.r));
    REQUIRE(ck_verify_cartan(l.p, "perturbed_B", &b.r) == CK_OK);
    CHECK_FALSE(ck_report_passed(b.r));
    CHECK(b.residual("cartan.d_i") == doctest::Approx(0.1));
  }
  SUBCASE("ce") {
    Loaded l("sl2");
    Result a, b;
    REQUIRE(ck_ce(l.p, "triv", "cochain", "1,0,0,1", &a.r) == CK_OK);
    CHECK(ck_report_passed(a.r));
    auto betti = a.doc()["data"]["betti"];
    REQUIRE(betti.size() == 4);
    CHECK(betti[3]["dim"] == 1);
    REQUIRE(ck_ce(l.p, "triv", "cochain", "1,1,0,1", &b.r) == CK_OK);
    CHECK_FALSE(ck_report_passed(b.r));
    Result c;
    CHECK(ck_ce(l.p, "triv", "sideways", nullptr, &c.r) == CK_ERR_USAGE);
  }
  SUBCASE("integrate") {
    Loaded l("heisenberg");
    Result a;
    REQUIRE(ck_integrate(l.p, "U_adj", "xyw", "both", &a.r) == CK_OK);
    CHECK(ck_report_passed(a.r));
    CHECK(a.residual("integrate.cross") == 0.0);
    CHECK(a.doc()["data"]["degree"] == -3);
  }
  SUBCASE("verify-module, roundtrip, adjunction, cubical") {
    Loaded h("heisenberg"), s("sl2");
    Result a, b, c, d;
    const char* words[] = {"x", "xy"};
    REQUIRE(ck_verify_module(h.p, "U_adj", words, 2, &a.r) == CK_OK);
    CHECK(ck_report_passed(a.r));
    REQUIRE(ck_roundtrip(s.p, "U_triv", &b.r) == CK_OK);
    CHECK(ck_report_passed(b.r));
    REQUIRE(ck_adjunction(h.p, "triv", "E_triv", &c.r) == CK_OK);
    CHECK(ck_report_passed(c.r));
    REQUIRE(ck_cubical(h.p, "U_adj", "xy", &d.r) == CK_OK);
    CHECK(ck_report_passed(d.r));
  }
  SUBCASE("renderings") {
    Loaded l("abelian");
    Result a;
    REQUIRE(ck_ce(l.p, "triv", nullptr, "1,3,3,1", &a.r) == CK_OK);
    const char* table = nullptr;
    const char* lines = nullptr;
    REQUIRE(ck_report_table(a.r, &table) == CK_OK);
    REQUIRE(ck_report_jsonl(a.r, &lines) == CK_OK);
    CHECK(std::string(table).find("checks passed: PASS") != std::string::npos);
    std::istringstream in(lines);
    std::string line;
    size_t n = 0;
    json last;
    while (std::getline(in, line)) {
      last = json::parse(line);
      ++n;
    }
    CHECK(n == ck_report_check_count(a.r) + 1);
    CHECK(last["summary"]["pass"] == true);
  }
}

TEST_CASE("command-line tool") {
  SUBCASE("exit codes") {
    CHECK(cli("check-lie " + problem("sl2")).code == 0);
    CHECK(cli("check-lie " + problem("broken_antisymmetry")).code == 1);
    CHECK(cli("verify-cartan " + problem("sl2") + " nowhere").code == 2);
    CHECK(cli("verify-cartan /nonexistent.json U_adj").code == 2);
    CHECK(cli("--tol -3 check-lie " + problem("sl2")).code == 2);
    CHECK(cli("frobnicate " + problem("sl2")).code == 2);
    const auto help = cli("--help");
    CHECK(help.code == 0);
    CHECK(help.out.find("verify-module") != std::string::npos);
    CHECK(cli("--version").out.find("1.0.0") != std::string::npos);
  }
  SUBCASE("table output") {
    const auto r = cli("ce " + problem("abelian") + " triv cochain 1,3,3,1");
    CHECK(r.code == 0);
    CHECK(r.out.find("ce.betti") != std::string::npos);
    CHECK(r.out.find("checks passed: PASS") != std::string::npos);
  }
  SUBCASE("json output and settings precedence") {
    const auto r = cli("--format json --tol 1e-7 verify-cartan " + problem("sl2") + " U_adj");
    REQUIRE(r.code == 0);
    const auto doc = json::parse(r.out);
    CHECK(doc["schema"] == "cartankit/1");
    CHECK(doc["command"] == "verify-cartan");
    CHECK(doc["settings"]["tol"] == 1e-7);
    CHECK(doc["settings"]["mode"] == "float");
    // Environment overrides the file, the flag overrides the environment.
    const auto env = json::parse(cli("--format json verify-cartan " + problem("sl2") + " U_triv", "CARTANKIT_MODE=exact").out);
    CHECK(env["settings"]["mode"] == "exact");
    const auto flag =
        json::parse(cli("--format json --mode float verify-cartan " + problem("sl2") + " U_triv", "CARTANKIT_MODE=exact").out);
    CHECK(flag["settings"]["mode"] == "float");
    CHECK(cli("check-lie " + problem("sl2"), "CARTANKIT_MODE=fuzzy").code == 2);
  }
  SUBCASE("test mode is bit-identical across runs") {
    const std::string args = "--format json --test-mode verify-module " + problem("heisenberg") + " U_adj x xy";
    const auto a = cli(args), b = cli(args);
    CHECK(a.code == 0);
    CHECK(a.out == b.out);
    const auto doc = json::parse(a.out);
    for (auto& c : doc["checks"]) CHECK(c["wallTime"] == 0.0);
  }
  SUBCASE("jsonl") {
    const auto r = cli("--format jsonl --test-mode check-lie " + problem("broken_antisymmetry"));
    CHECK(r.code == 1);
    std::istringstream in(r.out);
    std::string line;
    bool summary = false;
    while (std::getline(in, line)) summary = json::parse(line).contains("summary");
    CHECK(summary);
  }
}
