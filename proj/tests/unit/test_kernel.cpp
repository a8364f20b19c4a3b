#include <doctest.h>

#include "focal/diagnostic.hpp"
#include "focal/kernel.hpp"
#include "focal/substitution.hpp"

using namespace focal;

namespace {

const FocusLattice kOne = FocusLattice::declare({"s"}, {});
const Focus kS = *kOne.generator("s");
const Focus kTop{};

TermPtr A() { return mk::var("A"); }
TermPtr type0() { return mk::universe(0); }

// Runs `f` and returns the code of the TypeError it throws, or "" if none.
template <class F>
std::string code_of(F&& f) {
  try {
    f();
  } catch (const TypeError& e) {
    return e.diagnostic().code;
  }
  return "";
}

struct Fixture {
  Signature sig{kOne};
  Fixture() {
    add("B", type0());
    add("b0", mk::constant("B"));
    add("k", mk::constant("B"));
    add("f", mk::arrow(mk::constant("B"), mk::constant("B")));
  }
  void add(const std::string& name, TermPtr type, TermPtr body = nullptr) {
    auto d = check_declaration(sig, {name, std::move(type), std::move(body), {}, ""});
    REQUIRE_MESSAGE(!d, name << ": " << (d ? d->message : ""));
  }
  CheckState st(Context ctx = {}, KernelOptions opts = {}) const { return {&sig, std::move(ctx), opts}; }
};

}  // namespace

TEST_CASE("modal formation") {
  Fixture fx;
  CHECK(check_type(fx.st(Context({{"A", kS, type0()}})), mk::flat(kS, A())) == 0);
  CHECK(code_of([&] { check_type(fx.st(Context({{"A", kTop, type0()}})), mk::flat(kS, A())); }) ==
        "E001");
  CHECK(check_type(fx.st(Context({{"A", kTop, type0()}})), mk::sharp(kS, A())) == 0);
}

TEST_CASE("infer examples") {
  Fixture fx;
  Context counit_ctx({{"A", kS, type0()}, {"x", kTop, mk::flat(kS, A())}});
  auto counit = mk::flat_elim(kS, kTop, "", nullptr, mk::var("x"), "u", mk::var("u"));
  CHECK(alpha_equal(infer(fx.st(counit_ctx), counit), A()));

  Context loose({{"A", kS, type0()}, {"x", kTop, A()}});
  CHECK(code_of([&] { infer(fx.st(loose), mk::flat_intro(kS, mk::var("x"))); }) == "E001");

  Context sharp_ctx({{"A", kTop, type0()}, {"x", kTop, mk::sharp(kS, A())}});
  CHECK(code_of([&] { infer(fx.st(sharp_ctx), mk::sharp_elim(kS, mk::var("x"))); }) == "E001");

  // Variables are usable whatever their annotation.
  Context ann({{"A", kS, type0()}, {"y", kS, A()}});
  CHECK(alpha_equal(infer(fx.st(ann), mk::var("y")), A()));
  CHECK(alpha_equal(infer(fx.st(ann), mk::flat_intro(kS, mk::var("y"))), mk::flat(kS, A())));
}

TEST_CASE("check examples") {
  Fixture fx;
  Context g({{"A", kS, type0()}});
  auto flat_a = mk::flat(kS, A());
  auto id_flat = mk::lam("x", flat_a,
                         mk::flat_elim(kS, kTop, "", nullptr, mk::var("x"), "u",
                                       mk::flat_intro(kS, mk::var("u"))));
  CHECK_NOTHROW(check(fx.st(g), id_flat, mk::arrow(flat_a, flat_a)));

  Context h({{"A", kTop, type0()}});
  auto unit = mk::lam("x", A(), mk::sharp_intro(kS, mk::var("x")));
  CHECK_NOTHROW(check(fx.st(h), unit, mk::arrow(A(), mk::sharp(kS, A()))));

  Context n({{"A", kTop, type0()}, {"n", kS, mk::sharp(kS, A())}});
  auto eta = mk::sharp_intro(kS, mk::sharp_elim(kS, mk::var("n")));
  CHECK_NOTHROW(check(fx.st(n), mk::refl(mk::var("n")), mk::id(mk::sharp(kS, A()), mk::var("n"), eta)));
}

TEST_CASE("reduction examples") {
  Fixture fx;
  auto k = mk::constant("k");
  auto n = mk::app(mk::constant("f"), mk::var("u"));
  auto flat_beta = mk::flat_elim(kS, kTop, "", nullptr, mk::flat_intro(kS, k), "u", n);
  ReductionTrace tr;
  CHECK(alpha_equal(whnf(fx.sig, flat_beta, &tr), mk::app(mk::constant("f"), k)));
  CHECK(tr.count(kBetaFlat) == 1);

  ReductionTrace tr2;
  CHECK(alpha_equal(whnf(fx.sig, mk::sharp_elim(kS, mk::sharp_intro(kS, k)), &tr2), k));
  CHECK(tr2.count(kBetaSharp) == 1);

  ReductionTrace tr3;
  CHECK(alpha_equal(whnf(fx.sig, mk::app(mk::lam("x", mk::var("x")), k), &tr3), k));
  CHECK(tr3.count(kBetaPi) == 1);

  CHECK(alpha_equal(whnf(fx.sig, mk::fst(mk::pair(k, mk::constant("b0")))), k));
  auto j = mk::j("x", "y", "p", mk::constant("B"), mk::lam("z", mk::var("z")), mk::refl(k));
  ReductionTrace tr4;
  CHECK(alpha_equal(whnf(fx.sig, j, &tr4), k));
  CHECK(tr4.count(kBetaJ) == 1);
}

TEST_CASE("definitions unfold lazily") {
  Fixture fx;
  fx.add("kk", mk::constant("B"), mk::constant("k"));
  ReductionTrace tr;
  CHECK(alpha_equal(whnf_no_delta(fx.sig, mk::constant("kk"), &tr), mk::constant("kk")));
  CHECK(tr.count(kDelta) == 0);
  CHECK(alpha_equal(whnf(fx.sig, mk::constant("kk"), &tr), mk::constant("k")));
  CHECK(tr.count(kDelta) == 1);
  CHECK(convertible(fx.st(), mk::constant("kk"), mk::constant("k"), mk::constant("B")));
  CHECK_FALSE(convertible(fx.st(), mk::constant("kk"), mk::constant("b0"), mk::constant("B")));
}

TEST_CASE("whnf is idempotent") {
  Fixture fx;
  std::vector<TermPtr> ts = {
      mk::app(mk::lam("x", mk::app(mk::constant("f"), mk::var("x"))), mk::constant("k")),
      mk::sharp_elim(kS, mk::sharp_intro(kS, mk::constant("k"))),
      mk::lam("x", mk::app(mk::lam("y", mk::var("y")), mk::var("x"))),
      mk::snd(mk::pair(mk::constant("k"), mk::app(mk::lam("y", mk::var("y")), mk::constant("b0"))))};
  for (const auto& t : ts) {
    TermPtr w = whnf(fx.sig, t);
    CHECK(alpha_equal(whnf(fx.sig, w), w));
    CHECK(alpha_equal(normalize(fx.sig, normalize(fx.sig, t)), normalize(fx.sig, t)));
  }
}

TEST_CASE("conversion examples") {
  Fixture fx;
  auto B = mk::constant("B");
  auto k = mk::constant("k");
  auto flat_beta = mk::flat_elim(kS, kTop, "", nullptr, mk::flat_intro(kS, k), "u",
                                 mk::app(mk::constant("f"), mk::var("u")));
  CHECK(convertible(fx.st(), flat_beta, mk::app(mk::constant("f"), k), B));

  auto fn = mk::arrow(B, B);
  auto eta = mk::lam("x", mk::app(mk::constant("f"), mk::var("x")));
  CHECK(convertible(fx.st(), eta, mk::constant("f"), fn));
  CHECK(convertible(fx.st(), mk::constant("f"), eta, fn));
  CHECK_FALSE(convertible(fx.st({}, KernelOptions{false}), eta, mk::constant("f"), fn));

  auto prod = mk::sigma("_", B, B);
  Context p({{"p", kTop, prod}});
  CHECK(convertible(fx.st(p), mk::pair(mk::fst(mk::var("p")), mk::snd(mk::var("p"))), mk::var("p"),
                    prod));

  // Commuting sharps: the round trip through sharp{s} of sharp{s} is the
  // identity by the computation rules.
  auto ssB = mk::sharp(kS, mk::sharp(kS, B));
  Context x({{"x", kTop, ssB}});
  auto there = mk::sharp_intro(kS, mk::sharp_elim(kS, mk::sharp_elim(kS, mk::var("x"))));
  auto back = mk::sharp_intro(kS, mk::sharp_intro(kS, mk::sharp_elim(kS, there)));
  CHECK(convertible(fx.st(x), back, mk::var("x"), ssB));

  CHECK_FALSE(convertible(fx.st(), k, mk::constant("b0"), B));
  CHECK(convertible_types(fx.st(), mk::flat(kS, B), mk::flat(kS, B)));
  CHECK_FALSE(convertible_types(fx.st(), mk::flat(kS, B), mk::sharp(kS, B)));
}

TEST_CASE("no flat eta") {
  Fixture fx;
  Context g({{"z", kS, mk::flat(kS, mk::constant("B"))}});
  auto rebuilt = mk::flat_elim(kS, kTop, "", nullptr, mk::var("z"), "u",
                               mk::flat_intro(kS, mk::var("u")));
  CHECK_FALSE(convertible(fx.st(g), rebuilt, mk::var("z"), mk::flat(kS, mk::constant("B"))));
}

TEST_CASE("universes") {
  Fixture fx;
  CHECK(alpha_equal(infer(fx.st(), type0()), mk::universe(1)));
  CHECK(check_type(fx.st(), mk::arrow(type0(), type0())) == 1);
  CHECK(check_type(fx.st(), mk::arrow(mk::constant("B"), type0())) == 1);
  CHECK(check_type(fx.st(), mk::flat(kS, type0())) == 1);
  CHECK(check_type(fx.st(), mk::id(mk::constant("B"), mk::constant("k"), mk::constant("k"))) == 0);
  CHECK(code_of([&] { check(fx.st(), type0(), type0()); }) == "E002");
  CHECK(code_of([&] { check_type(fx.st(), mk::constant("k")); }) == "E004");
}

TEST_CASE("error codes") {
  Fixture fx;
  auto k = mk::constant("k");
  CHECK(code_of([&] { infer(fx.st(), mk::app(k, k)); }) == "E003");
  CHECK(code_of([&] { infer(fx.st(), mk::fst(k)); }) == "E003");
  CHECK(code_of([&] { infer(fx.st(), mk::sharp_elim(kS, k)); }) == "E003");
  CHECK(code_of([&] { infer(fx.st(), mk::lam("x", mk::var("x"))); }) == "E007");
  CHECK(code_of([&] {
          check(fx.st(), mk::lam("x", type0(), mk::var("x")),
                mk::arrow(mk::constant("B"), mk::constant("B")));
        }) == "E007");
  CHECK(code_of([&] { check(fx.st(), k, type0()); }) == "E002");
  CHECK(code_of([&] { check(fx.st(), mk::refl(k), mk::id(mk::constant("B"), k, mk::constant("b0"))); }) ==
        "E002");
  CHECK(code_of([&] { infer(fx.st(), mk::var("nope")); }) == "E001");
  CHECK(code_of([&] { infer(fx.st(), mk::constant("nope")); }) == "E001");

  Signature ord(FocusLattice::declare({"diff", "super"}, {{"diff", "super"}}));
  CHECK(code_of([&] {
          check_type(CheckState{&ord, {}, {}}, mk::flat(Focus{0b01}, type0()));
        }) == "E005");
}

TEST_CASE("a divided-away variable is reported as not crisp") {
  Fixture fx;
  Context g({{"A", kS, type0()}, {"x", kTop, A()}});
  try {
    infer(fx.st(g), mk::flat_intro(kS, mk::var("x")));
    FAIL("expected E001");
  } catch (const TypeError& e) {
    CHECK(e.diagnostic().message.find("crisp") != std::string::npos);
    CHECK(e.diagnostic().context.has_value());
  }
}

TEST_CASE("crisp flat induction") {
  Fixture fx;
  // With the crisp focus equal to the modality's focus, the branch may
  // use u under another flat.
  Context g({{"z", kS, mk::flat(kS, mk::constant("B"))}});
  auto t = mk::flat_elim(kS, kS, "", nullptr, mk::var("z"), "u",
                         mk::flat_intro(kS, mk::flat_intro(kS, mk::var("u"))));
  CHECK_NOTHROW(check(fx.st(g), t, mk::flat(kS, mk::flat(kS, mk::constant("B")))));
  Context loose({{"z", kTop, mk::flat(kS, mk::constant("B"))}});
  CHECK(code_of([&] { check(fx.st(loose), t, mk::flat(kS, mk::flat(kS, mk::constant("B")))); }) ==
        "E001");
}

TEST_CASE("dependent motive") {
  Fixture fx;
  auto B = mk::constant("B");
  auto flatB = mk::flat(kS, B);
  auto body = mk::flat_elim(kS, kTop, "x", mk::id(flatB, mk::var("x"), mk::var("x")), mk::var("z"),
                            "u", mk::refl(mk::flat_intro(kS, mk::var("u"))));
  Context g({{"z", kTop, flatB}});
  TermPtr ty = infer(fx.st(g), body);
  CHECK(alpha_equal(ty, mk::id(flatB, mk::var("z"), mk::var("z"))));
}

TEST_CASE("check_context") {
  Fixture fx;
  CHECK_NOTHROW(check_context(fx.sig, Context({{"A", kS, type0()}, {"x", kTop, mk::flat(kS, A())}})));
  CHECK(code_of([&] {
          check_context(fx.sig, Context({{"A", kTop, type0()}, {"x", kTop, mk::flat(kS, A())}}));
        }) == "E001");
  CHECK(code_of([&] {
          check_context(fx.sig, Context({{"A", kTop, type0()}, {"A", kTop, type0()}}));
        }) == "E001");
}

TEST_CASE("crisp_substitute") {
  Fixture fx;
  auto B = mk::constant("B");
  Context g({{"a", kTop, B}, {"x", kS, B}, {"p", kTop, mk::id(B, mk::var("x"), mk::var("x"))}});
  Context ok = crisp_substitute(fx.sig, g, "x", mk::constant("k"));
  REQUIRE(ok.size() == 2);
  CHECK(alpha_equal(ok.lookup("p")->type, mk::id(B, mk::constant("k"), mk::constant("k"))));
  CHECK(code_of([&] { crisp_substitute(fx.sig, g, "x", mk::var("a")); }) == "E006");
  CHECK(code_of([&] { crisp_substitute(fx.sig, g, "x", type0()); }) == "E002");
}

TEST_CASE("signatures") {
  SignatureResult empty = check_signature(kOne, {});
  CHECK(empty.signature.entries().empty());
  CHECK(empty.diagnostics.empty());

  SignatureResult bad = check_signature(kOne, {{"P", mk::constant("Missing"), nullptr, {}, "x.fcl"}});
  REQUIRE(bad.diagnostics.size() == 1);
  CHECK(bad.diagnostics[0].code == "E001");
  CHECK(bad.diagnostics[0].file == "x.fcl");

  SignatureResult dup = check_signature(
      kOne, {{"B", type0(), nullptr, {}, ""}, {"B", type0(), nullptr, {}, ""}});
  REQUIRE(dup.diagnostics.size() == 1);
  CHECK(dup.diagnostics[0].code == "E102");

  SignatureResult self = check_signature(
      kOne, {{"B", type0(), nullptr, {}, ""}, {"c", mk::constant("B"), mk::constant("c"), {}, ""}});
  REQUIRE(self.diagnostics.size() == 1);
  CHECK(self.diagnostics[0].code == "E001");

  // A failed entry is skipped and later ones still check.
  SignatureResult skip = check_signature(
      kOne, {{"B", type0(), nullptr, {}, ""},
             {"c", mk::constant("B"), type0(), {}, ""},
             {"d", mk::constant("B"), nullptr, {}, ""}});
  CHECK(skip.diagnostics.size() == 1);
  CHECK(skip.signature.contains("d"));
  CHECK_FALSE(skip.signature.contains("c"));
}

TEST_CASE("a redex with an unannotated lambda head infers from its argument") {
  Fixture fx;
  auto redex = mk::app(mk::lam("y", mk::constant("k")), mk::constant("b0"));
  CHECK(alpha_equal(infer(fx.st(), redex), mk::constant("B")));
  CHECK_NOTHROW(check(fx.st(), mk::refl(redex), mk::id(mk::constant("B"), mk::constant("k"), redex)));
  auto bad = mk::app(mk::lam("y", mk::app(mk::var("y"), mk::var("y"))), mk::constant("b0"));
  CHECK(code_of([&] { infer(fx.st(), bad); }) == "E003");
}
