#include "focal/proplab.hpp"

#include <algorithm>
#include <functional>
#include <optional>
#include <sstream>

#include "focal/substitution.hpp"
#include "focal/surface.hpp"

namespace focal {

FocusLattice lattice_from_spec(std::string_view spec) {
  std::vector<std::string> gens;
  std::vector<std::pair<std::string, std::string>> rels;
  auto add = [&](const std::string& g) {
    if (std::find(gens.begin(), gens.end(), g) == gens.end()) gens.push_back(g);
  };
  std::string item;
  std::istringstream in{std::string(spec)};
  while (std::getline(in, item, ',')) {
    item.erase(std::remove_if(item.begin(), item.end(), ::isspace), item.end());
    if (item.empty()) continue;
    auto le = item.find("<=");
    if (le == std::string::npos) {
      add(item);
      continue;
    }
    std::string lo = item.substr(0, le);
    std::string hi = item.substr(le + 2);
    if (lo.empty() || hi.empty()) throw LatticeError("malformed relation '" + item + "'");
    add(lo);
    add(hi);
    rels.emplace_back(lo, hi);
  }
  return FocusLattice::declare(gens, rels);
}

Signature prelude_signature(const FocusLattice& lattice) {
  using namespace mk;
  Signature sig(lattice);
  auto post = [&](const char* name, TermPtr type) {
    if (auto d = check_declaration(sig, Declaration{name, type, nullptr, {}, "<prelude>"})) {
      throw std::logic_error("prelude: " + d->message);
    }
  };
  post("A", universe(0));
  post("B", universe(0));
  post("a0", constant("A"));
  post("b0", constant("B"));
  post("P", arrow(constant("A"), universe(0)));
  post("p0", app(constant("P"), constant("a0")));
  post("g", arrow(constant("A"), constant("B")));
  return sig;
}

// ---------------------------------------------------------------------------
// Generation

Generator::Generator(const Signature& sig, const GenConfig& cfg)
    : sig_(&sig), cfg_(cfg), rng_(cfg.seed), elements_(sig.lattice().elements()) {}

bool Generator::coin(double p) { return std::bernoulli_distribution(p)(rng_); }

std::size_t Generator::below(std::size_t n) {
  return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng_);
}

Focus Generator::focus() { return elements_[below(elements_.size())]; }

std::string Generator::fresh(const Context& ctx, std::string_view base) {
  return fresh_name(base, [&](std::string_view n) {
    return ctx.name_in_use(n) || sig_->contains(n);
  });
}

bool Generator::same_type(const Context& ctx, const TermPtr& a, const TermPtr& b) const {
  return convertible_types(state(ctx), a, b);
}

Context Generator::context() {
  Context ctx;
  std::size_t depth = below(cfg_.max_context_depth + 1);
  for (std::size_t i = 0; i < depth; ++i) {
    Focus f = focus();
    Context visible = divide(sig_->lattice(), f, ctx);
    if (coin(0.2)) {
      ctx = ctx.pushed(fresh(ctx, "X"), f, mk::universe(0));
    } else {
      ctx = ctx.pushed(fresh(ctx, "x"), f, type(visible, 2));
    }
  }
  return ctx;
}

TermPtr Generator::type(const Context& ctx, int size) {
  const FocusLattice& lat = sig_->lattice();
  std::vector<std::string> type_vars;
  for (const auto& e : ctx.entries()) {
    if (e.type->kind == Kind::Universe && e.type->level == 0) type_vars.push_back(e.name);
  }
  if (size <= 1 || coin(0.15)) {
    std::size_t pick = below(3 + type_vars.size());
    if (pick == 0) return mk::constant("A");
    if (pick == 1) return mk::constant("B");
    if (pick == 2) return mk::app(mk::constant("P"), term(ctx, mk::constant("A"), 2));
    return mk::var(type_vars[pick - 3]);
  }
  switch (below(6)) {
    case 0: {
      Focus h = focus();
      return mk::flat(h, type(divide(lat, h, ctx), size - 1));
    }
    case 1: {
      Focus h = focus();
      return mk::sharp(h, type(promote(h, ctx), size - 1));
    }
    case 2:
    case 3: {
      TermPtr dom = type(ctx, size / 2);
      std::string x = fresh(ctx, "y");
      TermPtr cod;
      if (coin(0.3) && dom->kind == Kind::Const && dom->name == "A") {
        cod = mk::app(mk::constant("P"), mk::var(x));
      } else {
        cod = type(ctx.pushed(x, lat.top(), dom), size / 2);
      }
      return below(2) ? mk::pi(x, dom, cod) : mk::sigma(x, dom, cod);
    }
    case 4: {
      TermPtr base = type(ctx, 1);
      TermPtr a = term(ctx, base, 2);
      if (!a) return base;
      return mk::id(base, a, a);
    }
    default:
      return mk::app(mk::constant("P"), term(ctx, mk::constant("A"), size - 1));
  }
}

TermPtr Generator::intro(const Context& ctx, const TermPtr& goal, int size) {
  const FocusLattice& lat = sig_->lattice();
  TermPtr w = whnf(*sig_, goal);
  switch (w->kind) {
    case Kind::Pi: {
      std::string x = fresh(ctx, w->binders[0] == "_" ? "x" : w->binders[0]);
      TermPtr cod = substitute(w->arg(1), w->binders[0], mk::var(x));
      TermPtr body = term(ctx.pushed(x, lat.top(), w->arg(0)), cod, size - 1);
      if (!body) return nullptr;
      return annotate_ || coin(0.3) ? mk::lam(x, w->arg(0), body) : mk::lam(x, body);
    }
    case Kind::Sigma: {
      TermPtr a = term(ctx, w->arg(0), size / 2);
      if (!a) return nullptr;
      TermPtr b = term(ctx, substitute(w->arg(1), w->binders[0], a), size / 2);
      if (!b) return nullptr;
      return mk::pair(a, b);
    }
    case Kind::Id:
      if (!convertible(state(ctx), w->arg(1), w->arg(2), w->arg(0))) return nullptr;
      return mk::refl(w->arg(1));
    case Kind::Flat: {
      TermPtr m = term(divide(lat, w->focus, ctx), w->arg(0), size - 1);
      return m ? mk::flat_intro(w->focus, m) : nullptr;
    }
    case Kind::Sharp: {
      TermPtr m = term(promote(w->focus, ctx), w->arg(0), size - 1);
      return m ? mk::sharp_intro(w->focus, m) : nullptr;
    }
    case Kind::Universe:
      if (w->level != 0) return nullptr;
      return type(ctx, size - 1);
    default:
      return nullptr;
  }
}

TermPtr Generator::term(const Context& ctx, const TermPtr& goal, int size) {
  const FocusLattice& lat = sig_->lattice();
  using Attempt = std::function<TermPtr()>;
  std::vector<Attempt> atoms;
  std::vector<Attempt> compound;

  for (const auto& e : ctx.entries()) {
    TermPtr v = mk::var(e.name);
    if (same_type(ctx, e.type, goal)) atoms.push_back([v] { return v; });
    TermPtr t = whnf(*sig_, e.type);
    switch (t->kind) {
      case Kind::Sharp:
        if (lat.leq(e.annotation, t->focus) && same_type(ctx, t->arg(0), goal)) {
          Focus h = t->focus;
          atoms.push_back([v, h] { return mk::sharp_elim(h, v); });
        }
        break;
      case Kind::Pi:
        if (!t->arg(1)->has_free(t->binders[0]) && same_type(ctx, t->arg(1), goal)) {
          TermPtr dom = t->arg(0);
          compound.push_back([this, ctx, v, dom, size]() -> TermPtr {
            TermPtr a = term(ctx, dom, size - 1);
            return a ? mk::app(v, a) : nullptr;
          });
        }
        break;
      case Kind::Sigma:
        if (same_type(ctx, t->arg(0), goal)) atoms.push_back([v] { return mk::fst(v); });
        if (!t->arg(1)->has_free(t->binders[0]) && same_type(ctx, t->arg(1), goal)) {
          atoms.push_back([v] { return mk::snd(v); });
        }
        break;
      case Kind::Flat: {
        std::vector<Focus> crisp;
        for (Focus c : elements_) {
          if (lat.leq(e.annotation, c)) crisp.push_back(c);
        }
        Focus h = t->focus;
        TermPtr inner = t->arg(0);
        compound.push_back([this, ctx, v, h, inner, crisp, goal, size]() -> TermPtr {
          Focus c = crisp[below(crisp.size())];
          std::string u = fresh(ctx, "u");
          TermPtr branch =
              term(ctx.pushed(u, sig_->lattice().meet(c, h), inner), goal, size - 1);
          if (!branch) return nullptr;
          return mk::flat_elim(h, c, "", nullptr, v, u, branch);
        });
        break;
      }
      default:
        break;
    }
  }
  std::vector<Attempt> constants;
  for (const char* c : {"a0", "b0", "p0"}) {
    if (same_type(ctx, sig_->lookup(c)->type, goal)) {
      constants.push_back([c] { return mk::constant(c); });
    }
  }
  if (same_type(ctx, mk::constant("B"), goal)) {
    compound.push_back([this, ctx, size]() -> TermPtr {
      TermPtr a = term(ctx, mk::constant("A"), size - 1);
      return a ? mk::app(mk::constant("g"), a) : nullptr;
    });
  }
  if (size > 1) {
    compound.push_back([this, ctx, goal, size] { return intro(ctx, goal, size); });
  } else {
    // Nullary intro forms stay available at size 1.
    TermPtr w = whnf(*sig_, goal);
    if (w->kind == Kind::Id || w->kind == Kind::Universe) {
      atoms.push_back([this, ctx, goal] { return intro(ctx, goal, 1); });
    }
  }

  // Compound rules first (mostly), then variables; postulated constants are
  // the fallback so that terms exercise the context.
  std::shuffle(atoms.begin(), atoms.end(), rng_);
  std::shuffle(compound.begin(), compound.end(), rng_);
  std::vector<Attempt> order;
  auto append = [&](const std::vector<Attempt>& v) { order.insert(order.end(), v.begin(), v.end()); };
  if (size > 1 && coin(0.85)) {
    append(compound);
    append(atoms);
  } else {
    append(atoms);
    if (size > 1) append(compound);
  }
  append(constants);
  for (auto& attempt : order) {
    if (TermPtr t = attempt()) return t;
  }
  return nullptr;
}

Generated Generator::triple() {
  constexpr int kAttempts = 200;
  int size = static_cast<int>(std::max<std::size_t>(cfg_.max_term_size, 1));
  for (int i = 0; i < kAttempts; ++i) {
    Context ctx = context();
    if (size <= 1) {
      if (ctx.empty()) continue;
      const ContextEntry& e = ctx.entries()[below(ctx.size())];
      return {ctx, mk::var(e.name), e.type};
    }
    TermPtr goal = type(ctx, static_cast<int>(2 + below(3)));
    if (TermPtr t = term(ctx, goal, size)) return {ctx, t, goal};
  }
  throw GenerationError("no well-typed term found after " + std::to_string(kAttempts) +
                        " attempts (seed " + std::to_string(cfg_.seed) + ")");
}

Generated gen_wellformed(const Signature& sig, const GenConfig& cfg) {
  Generator gen(sig, cfg);
  return gen.triple();
}

// ---------------------------------------------------------------------------
// Properties

void PropertyReport::record(const std::string& property, bool passed) {
  auto& c = counts[property];
  (passed ? c.first : c.second) += 1;
}

std::string PropertyReport::render(const FocusLattice& lattice) const {
  std::ostringstream os;
  for (const auto& [name, c] : counts) {
    os << (c.second == 0 ? "ok   " : "FAIL ") << name << ": " << c.first << " passed, "
       << c.second << " failed\n";
  }
  if (generation_failures) os << "generation retries exhausted: " << generation_failures << '\n';
  for (const auto& f : failures) {
    os << "counterexample [" << f.property << "] seed " << f.seed << " " << f.code << ": "
       << f.message << "\n  context: " << f.context.render(lattice)
       << "\n  term: " << pretty(f.term, lattice) << "\n  type: " << pretty(f.type, lattice)
       << '\n';
  }
  os << cases << " cases, " << failures.size() << " failures\n";
  return os.str();
}

namespace {

// nullopt when the judgment holds; otherwise the diagnostic code.
using Outcome = std::optional<std::pair<std::string, std::string>>;

template <class F>
Outcome outcome(F&& f) {
  try {
    if (!f()) return std::make_pair(std::string("FALSE"), std::string("property is false"));
    return std::nullopt;
  } catch (const TypeError& err) {
    return std::make_pair(err.diagnostic().code, err.diagnostic().message);
  } catch (const std::exception& err) {
    return std::make_pair(std::string("EXCEPTION"), std::string(err.what()));
  }
}

bool checks(const Signature& sig, const Context& ctx, const TermPtr& t, const TermPtr& A) {
  check_context(sig, ctx);
  check(CheckState{&sig, ctx, {}}, t, A);
  return true;
}

struct Case {
  const Signature& sig;
  PropertyReport& report;
  std::uint64_t seed;
  const Generated& g;

  void property(const std::string& name, const std::function<Outcome(const Context&)>& run) {
    Outcome o = run(g.context);
    report.record(name, !o);
    if (!o) return;
    PropertyFailure f;
    f.property = name;
    f.seed = seed;
    f.code = o->first;
    f.message = o->second;
    f.context = shrink_context(g.context, o->first, [&](const Context& ctx) -> std::optional<std::string> {
      // Only contexts in which the statement is still well-formed count.
      try {
        check_context(sig, ctx);
        check_type(CheckState{&sig, ctx, {}}, g.type);
      } catch (const std::exception&) {
        return std::nullopt;
      }
      Outcome o = run(ctx);
      if (!o) return std::nullopt;
      return o->first;
    });
    f.term = g.term;
    f.type = g.type;
    report.failures.push_back(std::move(f));
  }
};

template <class Body>
PropertyReport run_cases(const GenConfig& cfg, std::size_t n, Body&& body) {
  Signature sig = prelude_signature(cfg.lattice);
  PropertyReport report;
  for (std::size_t i = 0; i < n; ++i) {
    GenConfig c = cfg;
    c.seed = cfg.seed + i;
    Generator gen(sig, c);
    Generated g;
    try {
      g = gen.triple();
    } catch (const GenerationError&) {
      ++report.generation_failures;
      continue;
    }
    ++report.cases;
    Case kase{sig, report, c.seed, g};
    body(sig, gen, kase);
  }
  return report;
}

std::vector<ContextEntry> prefix(const Context& ctx, std::size_t n) {
  return {ctx.entries().begin(), ctx.entries().begin() + static_cast<std::ptrdiff_t>(n)};
}

}  // namespace

Context shrink_context(const Context& ctx, const std::string& code, const Replay& replay) {
  Context cur = ctx;
  bool progress = true;
  while (progress) {
    progress = false;
    for (std::size_t i = cur.size(); i-- > 0;) {
      std::vector<ContextEntry> es = cur.entries();
      es.erase(es.begin() + static_cast<std::ptrdiff_t>(i));
      Context smaller(std::move(es));
      std::optional<std::string> o = replay(smaller);
      if (o && *o == code) {
        cur = smaller;
        progress = true;
        break;
      }
    }
  }
  return cur;
}

PropertyReport run_admissibility(const GenConfig& cfg, std::size_t n) {
  return run_cases(cfg, n, [&](const Signature& sig, Generator& gen, Case& kase) {
    const FocusLattice& lat = sig.lattice();
    const Generated& g = kase.g;

    kase.property("generator", [&](const Context& ctx) {
      return outcome([&] { return checks(sig, ctx, g.term, g.type); });
    });

    // Weakening: insert a fresh legal entry anywhere.
    {
      std::size_t at = gen.rng()() % (g.context.size() + 1);
      Focus f = gen.focus();
      Context before(prefix(g.context, at));
      TermPtr w_type = gen.type(divide(lat, f, before), 2);
      std::string w = fresh_name("w", [&](std::string_view nm) {
        return g.context.name_in_use(nm) || g.term->has_free(nm) || g.type->has_free(nm) ||
               sig.contains(nm);
      });
      kase.property("weakening", [&](const Context& ctx) {
        std::size_t pos = std::min(at, ctx.size());
        std::vector<ContextEntry> es = ctx.entries();
        es.insert(es.begin() + static_cast<std::ptrdiff_t>(pos), ContextEntry{w, f, w_type});
        return outcome([&] {
          if (!checks(sig, ctx, g.term, g.type)) return true;
          return checks(sig, Context(es), g.term, g.type);
        });
      });
    }

    // Promotion.
    {
      Focus f = gen.focus();
      kase.property("promotion", [&](const Context& ctx) {
        return outcome([&] { return checks(sig, promote(f, ctx), g.term, g.type); });
      });
    }

    // Divide-weakening: a derivation in f\G also holds in G.
    {
      Focus f = gen.focus();
      Context divided = divide(lat, f, g.context);
      TermPtr S = gen.type(divided, 2);
      TermPtr s = gen.term(divided, S, 4);
      if (s) {
        kase.property("divide-weakening", [&](const Context& ctx) {
          return outcome([&] {
            check(CheckState{&sig, divide(lat, f, ctx), {}}, s, S);
            return checks(sig, ctx, s, S);
          });
        });
      }
    }

    // Crisp substitution at a random entry.
    if (!g.context.empty()) {
      std::size_t at = gen.rng()() % g.context.size();
      const ContextEntry x = g.context.entries()[at];
      Context before(prefix(g.context, at));
      Context crisp_prefix = divide(lat, x.annotation, before);
      // Substituting into a head position must leave an inferable redex.
      gen.set_annotate_lambdas(true);
      TermPtr s = gen.term(crisp_prefix, x.type, 3);
      gen.set_annotate_lambdas(false);
      if (s) {
        kase.property("crisp-substitution", [&](const Context& ctx) {
          return outcome([&] {
            if (!ctx.contains(x.name)) return true;
            Context result = crisp_substitute(sig, ctx, x.name, s);
            return checks(sig, result, substitute(g.term, x.name, s),
                          substitute(g.type, x.name, s));
          });
        });
      }
      // A variable of the right type that is not crisp enough must be refused.
      for (const auto& y : before.entries()) {
        if (lat.leq(y.annotation, x.annotation)) continue;
        if (!convertible_types(CheckState{&sig, before, {}}, y.type, x.type)) continue;
        kase.property("crisp-substitution-rejects", [&](const Context& ctx) {
          try {
            crisp_substitute(sig, ctx, x.name, mk::var(y.name));
          } catch (const TypeError& err) {
            if (err.diagnostic().code == code::kCrispSubstitution) return Outcome{};
            return Outcome{std::make_pair(err.diagnostic().code, err.diagnostic().message)};
          } catch (const std::out_of_range&) {
            return Outcome{};
          }
          return Outcome{std::make_pair(std::string("ACCEPTED"),
                                        "non-crisp substitution for '" + x.name + "' accepted")};
        });
        break;
      }
    }

    // The two context equations and pro-divide-wk.
    {
      Focus f = gen.focus();
      Focus h = gen.focus();
      kase.property("promote-promote", [&](const Context& ctx) {
        return outcome([&] { return promote(f, promote(h, ctx)) == promote(lat.meet(f, h), ctx); });
      });
      kase.property("divide-divide", [&](const Context& ctx) {
        return outcome([&] {
          return divide(lat, f, divide(lat, h, ctx)) == divide(lat, lat.meet(h, f), ctx);
        });
      });
      kase.property("pro-divide-wk", [&](const Context& ctx) {
        return outcome([&] {
          return is_subsequence(promote(f, divide(lat, h, ctx)), divide(lat, h, promote(f, ctx)));
        });
      });
    }
  });
}

PropertyReport run_sharp_eta(const GenConfig& cfg, std::size_t n) {
  Signature sig = prelude_signature(cfg.lattice);
  PropertyReport report;
  for (std::size_t i = 0; i < n; ++i) {
    GenConfig c = cfg;
    c.seed = cfg.seed + i;
    Generator gen(sig, c);
    std::optional<Generated> g;
    for (int attempt = 0; attempt < 200 && !g; ++attempt) {
      Context ctx = gen.context();
      Focus h = gen.focus();
      TermPtr goal = mk::sharp(h, gen.type(promote(h, ctx), 2));
      if (TermPtr t = gen.term(ctx, goal, static_cast<int>(c.max_term_size))) {
        g = Generated{ctx, t, goal};
      }
    }
    if (!g) {
      ++report.generation_failures;
      continue;
    }
    ++report.cases;
    Case kase{sig, report, c.seed, *g};
    Focus h = g->type->focus;
    kase.property("sharp-eta", [&](const Context& ctx) {
      return outcome([&] {
        TermPtr eta = mk::sharp_intro(h, mk::sharp_elim(h, g->term));
        CheckState st{&sig, ctx, {}};
        check(st, g->term, g->type);
        return convertible(st, g->term, eta, g->type) && convertible(st, eta, g->term, g->type);
      });
    });
  }
  return report;
}

PropertyReport run_conversion_laws(const GenConfig& cfg, std::size_t n) {
  return run_cases(cfg, n, [&](const Signature& sig, Generator&, Case& kase) {
    const Generated& g = kase.g;
    kase.property("conversion-laws", [&](const Context& ctx) {
      return outcome([&] {
        CheckState st{&sig, ctx, {}};
        const TermPtr& t = g.term;
        const TermPtr& T = g.type;
        std::string x = fresh_name("v", [&](std::string_view nm) {
          return ctx.name_in_use(nm) || T->has_free(nm);
        });
        TermPtr id_T = mk::lam(x, T, mk::var(x));
        TermPtr normal = normalize(sig, t);
        TermPtr expanded = mk::app(id_T, t);
        check(st, expanded, T);
        bool ok = convertible(st, t, t, T) &&
                  convertible(st, t, normal, T) && convertible(st, normal, t, T) &&
                  convertible(st, expanded, t, T) && convertible(st, t, expanded, T) &&
                  convertible(st, expanded, normal, T);
        ok = ok && convertible(st, mk::app(id_T, normal), mk::app(id_T, expanded), T);
        ok = ok && convertible(st, mk::pair(t, expanded), mk::pair(normal, t),
                               mk::sigma("_", T, T));
        TermPtr w = whnf(sig, t);
        ok = ok && alpha_equal(whnf(sig, w), w);
        return ok;
      });
    });
  });
}

PropertyReport run_round_trip(const GenConfig& cfg, std::size_t n) {
  return run_cases(cfg, n, [&](const Signature& sig, Generator&, Case& kase) {
    const Generated& g = kase.g;
    kase.property("round-trip", [&](const Context& ctx) {
      return outcome([&] {
        std::vector<std::string> locals;
        for (const auto& e : ctx.entries()) locals.push_back(e.name);
        for (const TermPtr& t : {g.term, g.type}) {
          TermPtr back = elaborate_term(pretty(t, sig.lattice()), sig, locals);
          if (!alpha_equal(t, back)) return false;
        }
        return true;
      });
    });
  });
}

}  // namespace focal
