#include <doctest.h>

#include <algorithm>
#include <functional>
#include <set>

#include "focal/diagnostic.hpp"
#include "focal/proplab.hpp"
#include "focal/surface.hpp"

using namespace focal;

namespace {

GenConfig config(std::string_view spec, std::uint64_t seed = 1) {
  GenConfig cfg;
  cfg.seed = seed;
  cfg.lattice = lattice_from_spec(spec);
  return cfg;
}

bool rechecks(const Signature& sig, const Generated& g, std::string& why) {
  try {
    check_context(sig, g.context);
    CheckState st{&sig, g.context, {}};
    check_type(st, g.type);
    check(st, g.term, g.type);
    return true;
  } catch (const TypeError& e) {
    why = e.what();
    return false;
  }
}

void all_foci(const TermPtr& t, std::vector<Focus>& out) {
  for (Focus f : foci_of(t)) out.push_back(f);
}

}  // namespace

TEST_CASE("lattice specs") {
  CHECK(lattice_from_spec("").size() == 0);
  CHECK(lattice_from_spec("s").elements().size() == 2);
  CHECK(lattice_from_spec("s,d").elements().size() == 4);
  FocusLattice ord = lattice_from_spec("diff<=super");
  CHECK(ord.elements().size() == 3);
  CHECK(ord.generator_leq(*ord.index_of("diff"), *ord.index_of("super")));
  CHECK_THROWS_AS(lattice_from_spec("<=x"), LatticeError);
}

TEST_CASE("size 1 yields a variable lookup") {
  GenConfig cfg = config("s,d");
  cfg.max_term_size = 1;
  Signature sig = prelude_signature(cfg.lattice);
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    cfg.seed = seed;
    Generated g = gen_wellformed(sig, cfg);
    REQUIRE(g.term->kind == Kind::Var);
    const ContextEntry* e = g.context.lookup(g.term->name);
    REQUIRE(e);
    CHECK(alpha_equal(e->type, g.type));
  }
}

TEST_CASE("generated triples re-check for 1000 seeds") {
  for (const char* spec : {"s", "s,d", "diff<=super"}) {
    GenConfig cfg = config(spec);
    Signature sig = prelude_signature(cfg.lattice);
    std::size_t failures = 0, total_size = 0;
    for (std::uint64_t seed = 1; seed <= 1000; ++seed) {
      cfg.seed = seed;
      Generated g = gen_wellformed(sig, cfg);
      std::string why;
      if (!rechecks(sig, g, why)) {
        ++failures;
        MESSAGE(spec << " seed " << seed << ": " << why << "\n  " << pretty(g.term, cfg.lattice));
      }
      total_size += g.term->size();
    }
    CHECK(failures == 0);
    // Not just variables and constants.
    CHECK(total_size > 2 * 1000);
  }
}

TEST_CASE("generation is deterministic per seed") {
  GenConfig cfg = config("s,d", 42);
  Signature sig = prelude_signature(cfg.lattice);
  Generated a = gen_wellformed(sig, cfg);
  Generated b = gen_wellformed(sig, cfg);
  CHECK(a.context == b.context);
  CHECK(alpha_equal(a.term, b.term));
  CHECK(alpha_equal(a.type, b.type));
}

TEST_CASE("a one-generator lattice only produces its two foci") {
  GenConfig cfg = config("s");
  Signature sig = prelude_signature(cfg.lattice);
  const Focus s = *cfg.lattice.generator("s");
  bool saw_s = false;
  for (std::uint64_t seed = 1; seed <= 300; ++seed) {
    cfg.seed = seed;
    Generated g = gen_wellformed(sig, cfg);
    std::vector<Focus> fs;
    for (const auto& e : g.context.entries()) {
      fs.push_back(e.annotation);
      all_foci(e.type, fs);
    }
    all_foci(g.term, fs);
    all_foci(g.type, fs);
    for (Focus f : fs) {
      CHECK((f == Focus{} || f == s));
      saw_s = saw_s || f == s;
    }
  }
  CHECK(saw_s);
}

TEST_CASE("modal constructs are generated") {
  GenConfig cfg = config("s,d");
  Signature sig = prelude_signature(cfg.lattice);
  std::set<Kind> kinds;
  std::function<void(const TermPtr&)> walk = [&](const TermPtr& t) {
    if (!t) return;
    kinds.insert(t->kind);
    for (const auto& a : t->args) walk(a);
  };
  for (std::uint64_t seed = 1; seed <= 500; ++seed) {
    cfg.seed = seed;
    Generated g = gen_wellformed(sig, cfg);
    walk(g.term);
    walk(g.type);
  }
  for (Kind k : {Kind::Lam, Kind::App, Kind::Pair, Kind::Flat, Kind::FlatIntro, Kind::FlatElim,
                 Kind::Sharp, Kind::SharpIntro, Kind::SharpElim, Kind::Id, Kind::Refl}) {
    CHECK_MESSAGE(kinds.count(k) == 1, kind_name(k));
  }
}

TEST_CASE("n = 0 gives an empty passing report") {
  GenConfig cfg = config("s,d");
  for (const auto& r : {run_admissibility(cfg, 0), run_sharp_eta(cfg, 0),
                        run_conversion_laws(cfg, 0), run_round_trip(cfg, 0)}) {
    CHECK(r.cases == 0);
    CHECK(r.ok());
    CHECK(r.failures.empty());
    CHECK(r.counts.empty());
  }
}

TEST_CASE("property suites pass on each lattice") {
  for (const char* spec : {"s", "s,d", "diff<=super"}) {
    GenConfig cfg = config(spec, 1000);
    for (const auto& r : {run_admissibility(cfg, 100), run_sharp_eta(cfg, 100),
                          run_conversion_laws(cfg, 100), run_round_trip(cfg, 100)}) {
      CHECK(r.cases == 100);
      CHECK_MESSAGE(r.ok(), spec << "\n" << r.render(cfg.lattice));
    }
  }
}

TEST_CASE("admissibility covers every property") {
  PropertyReport r = run_admissibility(config("s,d"), 50);
  for (const char* p : {"weakening", "promotion", "divide-weakening", "crisp-substitution",
                        "promote-promote", "divide-divide", "pro-divide-wk"}) {
    REQUIRE_MESSAGE(r.counts.count(p) == 1, p);
    CHECK(r.counts.at(p).first > 0);
  }
}

TEST_CASE("shrinking keeps the failure code") {
  Context ctx({{"a", Focus{}, mk::constant("A")},
               {"b", Focus{}, mk::constant("A")},
               {"c", Focus{}, mk::constant("A")},
               {"d", Focus{}, mk::constant("A")}});
  // Fails with E002 while c is present; removing everything else but one
  // entry changes the code, so that removal is refused.
  Replay replay = [](const Context& g) -> std::optional<std::string> {
    if (!g.contains("c")) return std::nullopt;
    if (g.size() == 1) return std::string("E001");
    return std::string("E002");
  };
  Context shrunk = shrink_context(ctx, "E002", replay);
  CHECK(shrunk.size() == 2);
  CHECK(shrunk.contains("c"));
  CHECK(replay(shrunk) == std::optional<std::string>("E002"));
  CHECK(is_subsequence(shrunk, ctx));

  Replay always = [](const Context&) -> std::optional<std::string> { return "E003"; };
  CHECK(shrink_context(ctx, "E003", always).empty());
}

TEST_CASE("reports render seeds and counts") {
  PropertyReport r;
  r.cases = 2;
  r.record("weakening", true);
  r.record("weakening", false);
  PropertyFailure f;
  f.property = "weakening";
  f.seed = 77;
  f.code = "E001";
  f.term = mk::constant("a0");
  f.type = mk::constant("A");
  r.failures.push_back(f);
  CHECK_FALSE(r.ok());
  std::string text = r.render(FocusLattice{});
  CHECK(text.find("FAIL weakening: 1 passed, 1 failed") != std::string::npos);
  CHECK(text.find("seed 77") != std::string::npos);
}
