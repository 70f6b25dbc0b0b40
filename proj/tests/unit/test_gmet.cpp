#include <doctest.h>

#include "qeqlog/error.hpp"
#include "qeqlog/gmet.hpp"
#include "support/fixtures.hpp"

using namespace qeq;
using qeq::testing::pair_space;
using qeq::testing::r;

namespace {

FuzzySpace table(std::vector<std::string> carrier, std::vector<const char*> values) {
  std::vector<Rational> d;
  for (const char* v : values) d.push_back(r(v));
  return FuzzySpace(std::move(carrier), std::move(d));
}

// Every clause instance with every parameter vector on the grid, checked directly.
std::size_t exhaustive_violations(const GMetSpec& spec, const FuzzySpace& sp, const Grid& grid) {
  std::size_t bad = 0;
  const auto d = sp.steps(grid);
  const std::size_t n = sp.size();
  for (const auto& c : spec.clauses) {
    std::vector<std::size_t> a(c.vars.size(), 0);
    do {
      std::vector<std::size_t> pv(c.params.size(), 0);
      do {
        std::vector<int> params(pv.begin(), pv.end());
        auto holds = [&](const Atom& at) {
          if (at.kind == Atom::Kind::Eq) return a[at.lhs] == a[at.rhs];
          return d[a[at.lhs] * n + a[at.rhs]] <= at.bound.eval(grid, params);
        };
        bool premises = true;
        for (const auto& p : c.premises) premises = premises && holds(p);
        if (premises && !holds(c.conclusion)) ++bad;
      } while (!pv.empty() && advance(pv, static_cast<std::size_t>(grid.top()) + 1));
    } while (!a.empty() && n > 0 && advance(a, n));
  }
  return bad;
}

}  // namespace

TEST_SUITE("gmet") {
  TEST_CASE("metric examples") {
    Grid g;
    GMetSpec met = GMetSpec::met();
    CHECK(check_space(met, pair_space(), g).empty());

    auto zero = check_space(met, table({"a", "b"}, {"0", "0", "0", "0"}), g);
    REQUIRE_FALSE(zero.empty());
    bool named = false;
    for (const auto& v : zero) named = named || v.clause == "distance zero implies equality";
    CHECK(named);

    auto asym = check_space(met, table({"a", "b"}, {"0", "1/4", "1/2", "0"}), g);
    REQUIRE_FALSE(asym.empty());
    CHECK(asym.front().clause == "symmetry");
  }

  TEST_CASE("tightest instances agree with exhaustive enumeration") {
    Grid g(4);
    const std::vector<const char*> vals{"0", "1/4", "1/2", "3/4", "1"};
    for (auto preset : {Preset::FRel, Preset::PMet, Preset::Met}) {
      GMetSpec spec = GMetSpec::of(preset);
      std::vector<std::size_t> cell(4, 0);
      do {
        FuzzySpace sp = table({"a", "b"}, {vals[cell[0]], vals[cell[1]], vals[cell[2]], vals[cell[3]]});
        CHECK((check_space(spec, sp, g).empty()) == (exhaustive_violations(spec, sp, g) == 0));
      } while (advance(cell, vals.size()));
    }
  }

  TEST_CASE("custom clauses with compound bounds") {
    Grid g(4);
    GMetSpec ultra;
    ultra.name = "ultrametric-ish";
    ultra.clauses.push_back(make_clause("halved triangle", {"x", "y", "z"},
                                        {parse_atom("d(x,y) <= e1"), parse_atom("d(y,z) <= e2")},
                                        parse_atom("d(x,z) <= min(1, e1 + e2 + 1/4)")));
    const std::vector<const char*> vals{"0", "1/4", "1/2", "3/4", "1"};
    std::vector<std::size_t> cell(9, 0);
    std::size_t count = 0;
    do {
      if (++count % 7 != 0) continue;  // a deterministic sample of the 5^9 tables
      std::vector<const char*> t;
      for (auto c : cell) t.push_back(vals[c]);
      FuzzySpace sp = table({"a", "b", "c"}, t);
      CHECK((check_space(ultra, sp, g).empty()) == (exhaustive_violations(ultra, sp, g) == 0));
    } while (advance(cell, vals.size()));
  }

  TEST_CASE("spec violations surface as errors") {
    try {
      require_space(GMetSpec::met(), table({"a", "b"}, {"0", "1/4", "1/2", "0"}), Grid{}, "test space");
      FAIL("expected SpecViolation");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::SpecViolation);
    }
    CHECK_THROWS_AS(table({"a"}, {"1/7"}).steps(Grid(4)), Error);
  }

  TEST_CASE("nonexpansive maps") {
    FuzzySpace half = pair_space("1/2", "p", "q");
    FuzzySpace zero = FuzzySpace::uniform({"a", "b"}, Rational(0));
    CHECK(is_nonexpansive({0, 1}, half, half));
    CHECK(is_nonexpansive({0, 0}, half, half));
    CHECK_FALSE(is_nonexpansive({0, 1}, zero, half));

    CHECK(enumerate_nonexpansive(FuzzySpace::uniform({"x"}, Rational(1)), half).size() == 2);
    CHECK(enumerate_nonexpansive(pair_space(), half).size() == 4);
    auto consts = enumerate_nonexpansive(zero, half);
    CHECK(consts == std::vector<Map>{{0, 0}, {1, 1}});
    CHECK_THROWS_AS(enumerate_nonexpansive(FuzzySpace::uniform(qeq::testing::names_for(12), Rational(1)), half, 100),
                    Error);
  }

  TEST_CASE("nonexpansive enumeration equals the filtered full power") {
    Grid g(4);
    FuzzySpace src = table({"a", "b", "c"}, {"0", "1/4", "1/2", "1/4", "0", "1/4", "1/2", "1/4", "0"});
    FuzzySpace dst = table({"p", "q", "s"}, {"0", "1/2", "1", "1/2", "0", "1/2", "1", "1/2", "0"});
    std::vector<Map> brute;
    Map f(3, 0);
    do {
      if (is_nonexpansive(f, src, dst)) brute.push_back(f);
    } while (qeq::advance(f, std::size_t{3}));
    CHECK(enumerate_nonexpansive(src, dst) == brute);
  }

  TEST_CASE("discrete lifting") {
    FuzzySpace sp = pair_space();
    FuzzySpace frel = discrete_lift(GMetSpec::frel(), sp, 2);
    REQUIRE(frel.size() == 4);
    for (std::size_t i = 0; i < 4; ++i) {
      for (std::size_t j = 0; j < 4; ++j) CHECK(frel.d(i, j) == Rational(1));
    }
    FuzzySpace met = discrete_lift(GMetSpec::met(), sp, 2);
    auto ab = met.index_of("(a,b)");
    auto ba = met.index_of("(b,a)");
    REQUIRE(ab);
    REQUIRE(ba);
    CHECK(met.d(*ab, *ab) == Rational(0));
    CHECK(met.d(*ab, *ba) == Rational(1));
    GMetSpec custom;
    custom.name = "custom";
    CHECK_THROWS_AS(discrete_lift(custom, sp, 2), Error);
  }
}
