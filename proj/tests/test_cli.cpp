#include "doctest.h"

#include <cstdio>
#include <filesystem>
#include <sstream>

#include "united/cli.hpp"
#include "united/config.hpp"

#include "helpers.hpp"

using namespace united;
using namespace testutil;

namespace {

struct CliResult {
  int exit_code;
  std::string out;
  std::string err;
};

CliResult run_cli(std::vector<std::string> args) {
  std::vector<const char*> argv{"united"};
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  int code = cli_main(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) out.push_back(line);
  return out;
}

std::vector<std::string> words_of(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream in(line);
  std::string w;
  while (in >> w) out.push_back(w);
  return out;
}

}  // namespace

TEST_CASE("prove emits parseable verdict lines and exit 0") {
  CliResult r = run_cli({"prove", data_path("listrev.thy"), "--goal", "app_nil"});
  CHECK(r.exit_code == 0);
  auto lines = lines_of(r.out);
  REQUIRE_FALSE(lines.empty());
  auto words = words_of(lines[0]);
  REQUIRE(words.size() == 4);
  CHECK(words[0] == "PROVED");
  CHECK(words[1] == "app_nil");
  CHECK(std::stoll(words[2]) >= 1);   // nodes
  CHECK(std::stoll(words[3]) >= 0);   // millis
}

TEST_CASE("syntax errors exit 3 with a position") {
  CliResult r = run_cli({"prove", data_path("bad.thy")});
  CHECK(r.exit_code == 3);
  CHECK(r.err.find("2:") != std::string::npos);  // line of the bad datatype
}

TEST_CASE("unknown goals exit 3") {
  CliResult r =
      run_cli({"prove", data_path("listrev.thy"), "--goal", "missing"});
  CHECK(r.exit_code == 3);
}

TEST_CASE("refuted goals exit 1 and dominate gave-ups") {
  CliResult r = run_cli({"prove", data_path("rev_id.thy")});
  CHECK(r.exit_code == 1);
  CHECK(r.out.find("REFUTED rev_id") != std::string::npos);
  CHECK(r.out.find("xs = Cons Zero (Cons (Suc Zero) Nil)") !=
        std::string::npos);
}

TEST_CASE("strategy mode gives up on rev_rev with exit 2") {
  CliResult r = run_cli({"prove", data_path("listrev.thy"), "--goal",
                         "rev_rev", "--strategy", "DInd"});
  CHECK(r.exit_code == 2);
  CHECK(r.out.find("GAVEUP rev_rev") != std::string::npos);
}

TEST_CASE("strategy expressions parse on the command line") {
  CliResult r = run_cli({"prove", data_path("listrev.thy"), "--goal",
                         "app_nil", "--strategy",
                         "Thens [Dynamic(Induct), Auto, IsSolved]"});
  CHECK(r.exit_code == 0);
}

TEST_CASE("emitted proofs replay through the check command") {
  namespace fs = std::filesystem;
  fs::path dir = fs::temp_directory_path() / "united_cli_test_proofs";
  fs::remove_all(dir);
  CliResult proved = run_cli({"prove", data_path("listrev.thy"),
                              "--emit-proof", dir.string()});
  CHECK(proved.exit_code == 0);
  std::vector<std::string> scripts;
  for (const auto& e : fs::directory_iterator(dir))
    scripts.push_back(e.path().string());
  REQUIRE(scripts.size() == 4);
  std::vector<std::string> args{"check", data_path("listrev.thy")};
  for (const auto& s : scripts) args.push_back(s);
  CliResult checked = run_cli(args);
  CHECK(checked.exit_code == 0);
  CHECK(lines_of(checked.out).size() == 4);
  fs::remove_all(dir);
}

TEST_CASE("check rejects a broken script with exit 1") {
  namespace fs = std::filesystem;
  fs::path broken = fs::temp_directory_path() / "united_broken.prf";
  {
    std::ofstream f(broken);
    f << "proof app_assoc\ninduct xs\nqed\n";  // auto removed
  }
  CliResult r =
      run_cli({"check", data_path("listrev.thy"), broken.string()});
  CHECK(r.exit_code == 1);
  CHECK(r.out.find("REPLAY FAILED") != std::string::npos);
  fs::remove(broken);
}

TEST_CASE("refute exits 1 with the witness, 2 when none exists") {
  CliResult found = run_cli({"refute", data_path("rev_id.thy"), "--goal",
                             "rev_id", "--size", "8"});
  CHECK(found.exit_code == 1);
  CHECK(found.out.find("xs = Cons Zero (Cons (Suc Zero) Nil)") !=
        std::string::npos);
  CliResult none = run_cli({"refute", data_path("listrev.thy"), "--goal",
                            "app_nil", "--size", "6"});
  CHECK(none.exit_code == 2);
  CHECK(none.out.find("NO COUNTEREXAMPLE") != std::string::npos);
}

TEST_CASE("rank lists candidates with bit vectors and scores") {
  CliResult r =
      run_cli({"rank", data_path("corpus.thy"), "--goal", "itrev_gen"});
  CHECK(r.exit_code == 0);
  auto lines = lines_of(r.out);
  REQUIRE(lines.size() == 7);
  CHECK(lines[0].find("induct xs arbitrary: ys rule: rev") !=
        std::string::npos);
  CHECK(lines[0].find("[1111111001]") != std::string::npos);
  CHECK(lines[0].find("7.75") != std::string::npos);
}

TEST_CASE("conjecture lists verdicts per candidate") {
  CliResult r = run_cli(
      {"conjecture", data_path("listrev.thy"), "--goal", "itrev_rev"});
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("VALUABLE itrev l l1 = app (rev l) l1") !=
        std::string::npos);
  CHECK(r.out.find("REFUTED itrev l l1 = rev l (l = Nil, l1 = Cons Zero Nil)") !=
        std::string::npos);
}

TEST_CASE("fit writes a weights file compatible with rank") {
  namespace fs = std::filesystem;
  fs::path weights = fs::temp_directory_path() / "united_fit.weights";
  CliResult fit = run_cli({"fit", data_path("fit_corpus.txt"), "--out",
                           weights.string()});
  CHECK(fit.exit_code == 0);
  CliResult rank = run_cli({"rank", data_path("corpus.thy"), "--goal",
                            "itrev_gen", "--weights", weights.string()});
  CHECK(rank.exit_code == 0);
  fs::remove(weights);
}

TEST_CASE("json output is one object per goal and byte-stable") {
  CliResult a = run_cli({"prove", data_path("listrev.thy"), "--json"});
  CliResult b = run_cli({"prove", data_path("listrev.thy"), "--json"});
  CHECK(a.exit_code == 0);
  CHECK(a.out == b.out);
  auto lines = lines_of(a.out);
  REQUIRE(lines.size() == 4);
  CHECK(lines[0].find("\"goal\":\"app_nil\"") != std::string::npos);
  CHECK(lines[0].find("\"verdict\":\"PROVED\"") != std::string::npos);
  CHECK(lines[0].find("millis") == std::string::npos);
}

TEST_CASE("parallel jobs need lemma reuse disabled") {
  CliResult bad = run_cli({"prove", data_path("listrev.thy"), "--jobs", "2"});
  CHECK(bad.exit_code == 3);
  CliResult ok = run_cli({"prove", data_path("listrev.thy"), "--goal",
                          "app_nil", "--jobs", "2", "--no-lemma-reuse"});
  CHECK(ok.exit_code == 0);
}

TEST_CASE("config file values apply and flags win") {
  namespace fs = std::filesystem;
  fs::path cfg = fs::temp_directory_path() / "united_test.cfg";
  {
    std::ofstream f(cfg);
    f << "# tiny budget\nmax_nodes = 1\nmax_conjectures = 0\n";
  }
  CliResult limited = run_cli({"prove", data_path("listrev.thy"), "--goal",
                               "rev_rev", "--config", cfg.string()});
  CHECK(limited.exit_code == 2);  // starved by the config file
  // the flag overrides the starved node budget; app_assoc needs no conjectures
  CliResult overridden =
      run_cli({"prove", data_path("listrev.thy"), "--goal", "app_assoc",
               "--config", cfg.string(), "--nodes", "5000"});
  CHECK(overridden.exit_code == 0);
  fs::remove(cfg);
}

TEST_CASE("usage errors exit 3") {
  CHECK(run_cli({"prove"}).exit_code == 3);
  CHECK(run_cli({"frobnicate", "x"}).exit_code == 3);
  CHECK(run_cli({"prove", data_path("listrev.thy"), "--united", "--strategy",
                 "DInd"})
            .exit_code == 3);
}
