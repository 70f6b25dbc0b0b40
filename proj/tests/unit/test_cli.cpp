#include <doctest.h>

#include <json.hpp>
#include <sstream>
#include <string>
#include <vector>

#include "qeqlog/cli.hpp"

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
  nlohmann::ordered_json json() const { return nlohmann::ordered_json::parse(out); }
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "qeqlog");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  int code = qeq::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string data(const char* file) { return std::string(QEQLOG_DATA_DIR) + "/" + file; }

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("check-model") {
    Run ok = run({"check-model", "--workspace", data("swap.json"), "--algebra", "swap"});
    CHECK(ok.code == 0);
    CHECK(ok.json()["model"] == true);
    CHECK(ok.json()["grid"] == 24);

    Run bad = run({"check-model", "--workspace", data("swap.json"), "--algebra", "swap", "--theory", "fixed"});
    CHECK(bad.code == 1);
    CHECK(bad.json()["counterexample"]["interpretation"]["p"] == "a");

    Run missing = run({"check-model", "--workspace", data("swap.json"), "--algebra", "nope"});
    CHECK(missing.code == 2);
    CHECK(missing.out.empty());
    CHECK(missing.err.find("UnresolvedName") != std::string::npos);
  }

  TEST_CASE("distance and derive on the collapse fixture") {
    Run d = run({"distance", "--workspace", data("phi1.json"), "--theory", "collapse", "--space", "A", "--lhs", "a",
                 "--rhs", "b"});
    CHECK(d.code == 0);
    CHECK(d.json()["distance"] == "0");

    Run yes = run({"derive", "--workspace", data("phi1.json"), "--theory", "collapse", "--judgment", "ab_equal"});
    CHECK(yes.code == 0);
    CHECK(yes.json()["derivable"] == true);
    CHECK(yes.json()["trace"].size() == 2);

    Run no = run({"derive", "--workspace", data("phi1.json"), "--judgment", "ab_equal"});
    CHECK(no.code == 1);
    CHECK(no.json()["derivable"] == false);
    CHECK(no.json()["distance"] == "1/2");
  }

  TEST_CASE("free") {
    Run f = run({"free", "--workspace", data("swap.json"), "--space", "A", "--depth", "2"});
    CHECK(f.code == 0);
    auto j = f.json();
    CHECK(j["classes"] == nlohmann::ordered_json::array({"a", "b", "u(a)", "u(b)"}));
    CHECK(j["ops"]["u"]["u(a)"] == "overflow");
    CHECK(j["skipped_overflow"] == 2);
    CHECK(j["depth"] == 2);
  }

  TEST_CASE("monad laws, universal property, structure maps") {
    Run laws = run({"monad-laws", "--workspace", data("empty_sig.json"), "--space", "A"});
    CHECK(laws.code == 0);
    for (const auto& l : laws.json()["laws"]) {
      CHECK(l["failed"] == 0);
      CHECK(l["skipped_overflow"] == 0);
    }

    Run ump = run({"ump", "--workspace", data("swap.json"), "--space", "A", "--algebra", "swap", "--depth", "2"});
    CHECK(ump.code == 0);
    CHECK(ump.json()["exists"] == true);
    CHECK(ump.json()["unique"] == true);

    Run em = run({"em-check", "--workspace", data("swap.json"), "--algebra", "swap", "--theory", "involution"});
    CHECK(em.code == 0);
    CHECK(em.json()["round_trip"] == true);

    Run not_model = run({"em-check", "--workspace", data("swap.json"), "--algebra", "swap", "--theory", "fixed"});
    CHECK(not_model.code == 2);
  }

  TEST_CASE("entail") {
    Run yes = run({"entail", "--workspace", data("swap.json"), "--theory", "involution", "--judgment", "uua"});
    CHECK(yes.code == 0);
    Run no = run({"entail", "--workspace", data("swap.json"), "--judgment", "ua", "--catalog", "swap"});
    CHECK(no.code == 1);
  }

  TEST_CASE("flags and errors") {
    Run grid = run({"distance", "--workspace", data("phi1.json"), "--grid", "5", "--space", "A", "--lhs", "a",
                    "--rhs", "b"});
    CHECK(grid.code == 2);
    CHECK(grid.err.find("GridMismatch") != std::string::npos);

    Run budget = run({"free", "--workspace", data("swap.json"), "--space", "A", "--budget-instances", "3"});
    CHECK(budget.code == 2);
    CHECK(budget.err.find("BudgetExceeded") != std::string::npos);

    CHECK(run({"free", "--workspace", data("nope.json"), "--space", "A"}).code == 2);
    CHECK(run({"frobnicate"}).code == 2);
    CHECK(run({"free", "--space", "A"}).code == 2);
  }

  TEST_CASE("output is reproducible") {
    std::vector<std::string> args{"monad-laws", "--workspace", data("swap.json"), "--space", "A"};
    CHECK(run(args).out == run(args).out);
    std::vector<std::string> d{"derive", "--workspace", data("swap.json"), "--theory", "involution", "--judgment", "uua"};
    Run a = run(d), b = run(d);
    CHECK(a.code == 0);
    CHECK(a.out == b.out);
  }
}
