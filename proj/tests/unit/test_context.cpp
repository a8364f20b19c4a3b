#include <doctest.h>

#include <random>

#include "focal/context.hpp"
#include "focal/diagnostic.hpp"
#include "focal/kernel.hpp"
#include "focal/signature.hpp"

using namespace focal;

namespace {

const FocusLattice kFree = FocusLattice::declare({"s", "d"}, {});
const Focus kS = *kFree.generator("s");
const Focus kD = *kFree.generator("d");

Signature sig_with_a() {
  Signature sig(kFree);
  REQUIRE_FALSE(check_declaration(sig, {"A", mk::universe(0), nullptr, {}, ""}));
  return sig;
}

// Contexts of constant-typed entries with random annotations; the context
// equations are structural, so the types do not matter.
Context random_context(const FocusLattice& lat, std::mt19937& rng, std::size_t n) {
  auto els = lat.elements();
  std::vector<ContextEntry> es;
  for (std::size_t i = 0; i < n; ++i) {
    Focus f = els[std::uniform_int_distribution<std::size_t>(0, els.size() - 1)(rng)];
    es.push_back({"x" + std::to_string(i), f, mk::constant(i % 2 ? "A" : "B")});
  }
  return Context(std::move(es));
}

}  // namespace

TEST_CASE("extend examples") {
  Signature sig = sig_with_a();
  Context one = extend(sig, Context{}, "x", kFree.top(), mk::constant("A"));
  CHECK(one == Context({{"x", kFree.top(), mk::constant("A")}}));

  Context top_y({{"y", kFree.top(), mk::universe(0)}});
  try {
    extend(sig, top_y, "z", kS, mk::var("y"));
    FAIL("expected a TypeError");
  } catch (const TypeError& e) {
    CHECK(e.diagnostic().code == "E001");
  }

  Context crisp_y({{"y", kS, mk::universe(0)}});
  Context ok = extend(sig, crisp_y, "z", kS, mk::var("y"));
  CHECK(ok.size() == 2);
  CHECK(ok.lookup("z")->annotation == kS);

  CHECK_THROWS_AS(extend(sig, crisp_y, "y", kS, mk::constant("A")), std::invalid_argument);
  // A term that is not a type.
  Context with_a = extend(sig, Context{}, "a", kFree.top(), mk::constant("A"));
  CHECK_THROWS_AS(extend(sig, with_a, "b", kFree.top(), mk::var("a")), TypeError);
}

TEST_CASE("promote examples") {
  Context g({{"x", kFree.top(), mk::constant("A")}});
  CHECK(promote(kS, g) == Context({{"x", kS, mk::constant("A")}}));
  std::mt19937 rng(3);
  for (int i = 0; i < 20; ++i) {
    Context r = random_context(kFree, rng, 4);
    CHECK(promote(kFree.top(), r) == r);
  }
}

TEST_CASE("divide examples") {
  Context g({{"x", kS, mk::constant("A")}, {"y", kFree.top(), mk::constant("B")}});
  Context d = divide(kFree, kS, g);
  CHECK(d == Context({{"x", kS, mk::constant("A")}}));
  CHECK(d.was_divided_away("y"));
  CHECK_FALSE(d.was_divided_away("x"));
  CHECK(d.name_in_use("y"));
  CHECK(divide(kFree, kFree.top(), g) == g);
}

TEST_CASE("is_crisp examples") {
  Context g({{"h", kS, mk::constant("A")},
             {"t", kFree.top(), mk::constant("A")},
             {"b", kFree.meet(kS, kD), mk::constant("A")}});
  CHECK(is_crisp(kFree, g, "h", kS));
  CHECK_FALSE(is_crisp(kFree, g, "t", kS));
  CHECK(is_crisp(kFree, g, "b", kS));
  CHECK_THROWS_AS(is_crisp(kFree, g, "nope", kS), std::out_of_range);
}

TEST_CASE("context equations on every small lattice") {
  const std::vector<FocusLattice> lattices = {
      FocusLattice::declare({"s"}, {}), kFree,
      FocusLattice::declare({"diff", "super"}, {{"diff", "super"}}),
      FocusLattice::declare({"a", "b", "c"}, {{"a", "b"}})};
  std::mt19937 rng(17);
  for (const auto& lat : lattices) {
    auto els = lat.elements();
    for (int trial = 0; trial < 25; ++trial) {
      Context g = random_context(lat, rng, 1 + trial % 6);
      for (Focus f : els) {
        CHECK(promote(f, g).size() == g.size());
        CHECK(is_subsequence(divide(lat, f, g), g));
        for (Focus h : els) {
          CHECK(promote(f, promote(h, g)) == promote(lat.meet(f, h), g));
          CHECK(divide(lat, f, divide(lat, h, g)) == divide(lat, lat.meet(h, f), g));
          CHECK(is_subsequence(promote(f, divide(lat, h, g)), divide(lat, h, promote(f, g))));
        }
        for (const auto& e : g.entries()) {
          if (!is_crisp(lat, g, e.name, f)) continue;
          for (Focus f2 : els) {
            if (lat.leq(f, f2)) CHECK(is_crisp(lat, g, e.name, f2));
          }
        }
      }
    }
  }
}

TEST_CASE("promote keeps order and types") {
  Context g({{"x", kS, mk::constant("A")}, {"y", kD, mk::constant("B")}});
  Context p = promote(kD, g);
  REQUIRE(p.size() == 2);
  CHECK(p.entries()[0].name == "x");
  CHECK(p.entries()[0].annotation == kFree.meet(kS, kD));
  CHECK(p.entries()[1].annotation == kD);
  CHECK(alpha_equal(p.entries()[1].type, mk::constant("B")));
}

TEST_CASE("is_subsequence") {
  Context a({{"x", kS, mk::constant("A")}});
  Context b({{"w", kS, mk::constant("A")}, {"x", kS, mk::constant("A")}});
  CHECK(is_subsequence(a, b));
  CHECK_FALSE(is_subsequence(b, a));
  CHECK_FALSE(is_subsequence(Context({{"x", kD, mk::constant("A")}}), b));
  CHECK(is_subsequence(Context{}, a));
}

TEST_CASE("render shows annotations") {
  Context g({{"x", kS, mk::constant("A")}});
  CHECK(g.render(kFree).find("{s}") != std::string::npos);
}
