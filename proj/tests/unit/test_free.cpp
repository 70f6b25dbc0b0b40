#include <doctest.h>

#include "qeqlog/error.hpp"
#include "qeqlog/free.hpp"
#include "support/fixtures.hpp"
#include "support/gen.hpp"
#include "support/oracle.hpp"

using namespace qeq;
using namespace qeq::testing;

namespace {

std::vector<std::string> reps(const FreeAlgebra& f) {
  std::vector<std::string> out;
  for (const auto& t : f.representatives()) out.push_back(to_string(t));
  return out;
}

// Homomorphisms from the classes to B extending the generators, counted by
// evaluating each candidate on every op entry directly.
std::size_t brute_witnesses(const FreeAlgebra& f, const QuantAlgebra& b, const Map& gens) {
  std::size_t count = 0;
  Map g(f.size(), 0);
  do {
    bool ok = true;
    for (std::size_t i = 0; i < gens.size() && ok; ++i) ok = g[f.unit()[i]] == gens[i];
    for (std::size_t x = 0; x < f.size() && ok; ++x) {
      for (std::size_t y = 0; y < f.size() && ok; ++y) ok = !(b.space().d(g[x], g[y]) > f.delta(x, y));
    }
    for (std::size_t c = 0; c < f.size() && ok; ++c) {
      const Term& t = f.representative(c);
      if (t.is_var()) continue;
      // g must send op(reps of args) to the image of op applied to the images.
      std::vector<std::size_t> image;
      for (const auto& a : t.args()) image.push_back(g[*f.class_of(a)]);
      ok = g[c] == b.apply(t.head(), image);
    }
    for (const auto& [op, table] : f.optables()) {
      const std::size_t arity = static_cast<std::size_t>(*f.signature().arity(op));
      std::vector<std::size_t> args(arity, 0);
      std::size_t slot = 0;
      do {
        const ClassRef& e = table[slot++];
        if (!e || !ok) continue;
        std::vector<std::size_t> image;
        for (auto a : args) image.push_back(g[a]);
        ok = g[*e] == b.apply(op, image);
      } while (qeq::advance(args, f.size()));
    }
    if (ok) ++count;
  } while (qeq::advance(g, b.size()));
  return count;
}

}  // namespace

TEST_SUITE("free") {
  TEST_CASE("collapse gives a single class") {
    FreeAlgebra f = build_free(Signature{}, collapse_theory(), GMetSpec::met(), pair_space());
    CHECK(f.size() == 1);
    CHECK(f.unit() == Map{0, 0});
    CHECK(f.space().name(0) == "[a]");
  }

  TEST_CASE("generators and a constant") {
    Signature sig = sig_of({{"u", 1}, {"c", 0}});
    FreeAlgebra f = build_free(sig, Theory{}, GMetSpec::met(), FuzzySpace::uniform({"a"}, Rational(1)), {2, Grid{}});
    CHECK(reps(f) == std::vector<std::string>{"a", "c", "u(a)", "u(c)"});
    CHECK(f.delta(0, 1) == Rational(1));
    CHECK(f.delta(0, 0) == Rational(0));
    std::vector<std::size_t> a{0};
    CHECK(f.apply("u", a) == ClassRef{2});
    std::vector<std::size_t> ua{2};
    CHECK_FALSE(f.apply("u", ua).has_value());
  }

  TEST_CASE("two generators keep their distance") {
    FreeAlgebra f = build_free(Signature{}, Theory{}, GMetSpec::met(), pair_space());
    CHECK(f.size() == 2);
    CHECK(f.delta(0, 1) == r("1/2"));
    CHECK(f.space() == FuzzySpace({"[a]", "[b]"}, {Rational(0), r("1/2"), r("1/2"), Rational(0)}));
  }

  TEST_CASE("delta is the oracle distance between representatives") {
    Grid g(4);
    Signature sig = sig_of({{"u", 1}});
    for (const auto& phi : {Theory{}, drift_theory(), involution_theory()}) {
      FreeAlgebra f = build_free(sig, phi, GMetSpec::met(), pair_space(), {3, g});
      SaturationOracle oracle(sig, phi, GMetSpec::met(), pair_space(), 3, g);
      for (std::size_t x = 0; x < f.size(); ++x) {
        for (std::size_t y = 0; y < f.size(); ++y) {
          auto i = oracle.index(f.representative(x)), j = oracle.index(f.representative(y));
          CHECK(f.delta_steps(x, y) == oracle.dist(i, j));
          CHECK((x == y) == oracle.equal(i, j));
        }
      }
    }
  }

  TEST_CASE("interpretation into the free algebra") {
    Signature sig = sig_of({{"u", 1}});
    FreeAlgebra f = build_free(sig, Theory{}, GMetSpec::met(), pair_space(), {2, Grid{}});
    auto ua = f.class_of(parse_term("u(a)", sig));
    auto a = f.class_of(Term::var("a"));
    REQUIRE(ua);
    REQUIRE(a);
    CHECK(free_eval(f, {{"x", *ua}}, Term::var("x")) == ua);
    CHECK(free_eval(f, {{"x", *a}}, parse_term("u(x)", sig)) == ua);
    CHECK_FALSE(free_eval(f, {{"x", *ua}}, parse_term("u(x)", sig)).has_value());
  }

  TEST_CASE("the free algebra is a model") {
    Grid g(4);
    Signature sig = sig_of({{"u", 1}});
    FreeAlgebra empty = build_free(sig, Theory{}, GMetSpec::met(), pair_space(), {3, g});
    CHECK(check_free_is_model(empty).failed == 0);

    FreeAlgebra f = build_free(sig, drift_theory(), GMetSpec::met(), pair_space(), {3, g});
    ModelCheckReport rep = check_free_is_model(f);
    CHECK(rep.failed == 0);
    CHECK(rep.checked > 0);
    CHECK(rep.skipped_overflow > 0);
    MESSAGE("drift at depth 3: checked " << rep.checked << ", skipped " << rep.skipped_overflow);

    // Negative control: claim u(a) and a are far apart.
    auto ua = *f.class_of(parse_term("u(a)", sig));
    auto a = *f.class_of(Term::var("a"));
    f.corrupt_delta(ua, a, g.top());
    ModelCheckReport bad = check_free_is_model(f);
    CHECK(bad.failed > 0);
    CHECK(bad.first_failure.has_value());
  }

  TEST_CASE("homomorphic extension") {
    Signature sig = sig_of({{"u", 1}});
    FreeAlgebra f = build_free(sig, Theory{}, GMetSpec::met(), pair_space(), {2, Grid{}});
    QuantAlgebra swap = swap_algebra();
    Map ext = extend_hom(f, swap, {0, 1});
    CHECK(swap.space().name(ext[*f.class_of(parse_term("u(a)", sig))]) == "q");
    try {
      extend_hom(f, QuantAlgebra(sig, pair_space("3/4", "p", "q"), {{"u", {1, 0}}}), {0, 1});
      FAIL("expected NotNonexpansive");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::NotNonexpansive);
    }
    FreeAlgebra collapsed = build_free(Signature{}, collapse_theory(), GMetSpec::met(), pair_space());
    QuantAlgebra two(Signature{}, pair_space("1/2", "p", "q"), {});
    try {
      extend_hom(collapsed, two, {0, 1});
      FAIL("expected NotAModel");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::NotAModel);
    }
  }

  TEST_CASE("universal property on the swap algebra") {
    Signature sig = sig_of({{"u", 1}});
    FreeAlgebra f = build_free(sig, Theory{}, GMetSpec::met(), pair_space(), {2, Grid{}});
    QuantAlgebra swap = swap_algebra();
    UmpReport rep = check_ump(f, swap, {0, 1});
    CHECK(rep.exists);
    CHECK(rep.unique);
    CHECK(rep.candidates == 16);
    CHECK(rep.witnesses == brute_witnesses(f, swap, {0, 1}));
    CHECK_THROWS_AS(check_ump(f, swap, {0, 1}, 10), Error);
  }

  TEST_CASE("universal property on random models") {
    Rng rng(31);
    Grid g(4);
    Signature sig = sig_of({{"u", 1}});
    int tried = 0;
    for (int run = 0; run < 40 && tried < 12; ++run) {
      QuantAlgebra b = random_algebra(rng, sig, 2 + static_cast<std::size_t>(run % 2), g);
      Theory phi = random_theory_for(rng, b, GMetSpec::met(), g, 2);
      FuzzySpace base = random_met_space(rng, 2, g);
      FreeAlgebra f = build_free(sig, phi, GMetSpec::met(), base, {2, g});
      if (f.size() > 6) continue;
      for (Map gens : enumerate_nonexpansive(base, b.space())) {
        UmpReport rep = check_ump(f, b, gens);
        CHECK(rep.exists);
        CHECK(rep.unique);
        CHECK(rep.witnesses == brute_witnesses(f, b, gens));
      }
      ++tried;
    }
    CHECK(tried >= 10);
  }
}
