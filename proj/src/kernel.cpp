#include "focal/kernel.hpp"

#include <algorithm>
#include <sstream>

#include "focal/substitution.hpp"
#include "focal/surface.hpp"

namespace focal {

std::size_t ReductionTrace::count(std::string_view rule) const {
  return static_cast<std::size_t>(std::count(steps.begin(), steps.end(), rule));
}

// ---------------------------------------------------------------------------
// Reduction

namespace {

void note(ReductionTrace* trace, std::string_view rule) {
  if (trace) trace->steps.emplace_back(rule);
}

TermPtr whnf_impl(const Signature& sig, TermPtr t, bool delta, ReductionTrace* trace) {
  for (;;) {
    switch (t->kind) {
      case Kind::App: {
        TermPtr f = whnf_impl(sig, t->arg(0), delta, trace);
        if (f->kind == Kind::Lam) {
          note(trace, kBetaPi);
          t = substitute(f->arg(1), f->binders[0], t->arg(1));
          continue;
        }
        return f == t->arg(0) ? t : rebuild(*t, {f, t->arg(1)});
      }
      case Kind::Fst:
      case Kind::Snd: {
        TermPtr p = whnf_impl(sig, t->arg(0), delta, trace);
        if (p->kind == Kind::Pair) {
          note(trace, kBetaSigma);
          t = p->arg(t->kind == Kind::Fst ? 0 : 1);
          continue;
        }
        return p == t->arg(0) ? t : rebuild(*t, {p});
      }
      case Kind::J: {
        TermPtr q = whnf_impl(sig, t->arg(2), delta, trace);
        if (q->kind == Kind::Refl) {
          note(trace, kBetaJ);
          t = mk::app(t->arg(1), q->arg(0));
          continue;
        }
        return q == t->arg(2) ? t : rebuild(*t, {t->arg(0), t->arg(1), q});
      }
      case Kind::FlatElim: {
        TermPtr m = whnf_impl(sig, t->arg(1), delta, trace);
        if (m->kind == Kind::FlatIntro) {
          note(trace, kBetaFlat);
          t = substitute(t->arg(2), t->binders[1], m->arg(0));
          continue;
        }
        return m == t->arg(1) ? t : rebuild(*t, {t->arg(0), m, t->arg(2)});
      }
      case Kind::SharpElim: {
        TermPtr n = whnf_impl(sig, t->arg(0), delta, trace);
        if (n->kind == Kind::SharpIntro) {
          note(trace, kBetaSharp);
          t = n->arg(0);
          continue;
        }
        return n == t->arg(0) ? t : rebuild(*t, {n});
      }
      case Kind::Const: {
        if (!delta) return t;
        const SignatureEntry* e = sig.lookup(t->name);
        if (!e || e->is_postulate()) return t;
        note(trace, kDelta);
        t = e->body;
        continue;
      }
      default:
        return t;
    }
  }
}

TermPtr normalize_impl(const Signature& sig, const TermPtr& t, ReductionTrace* trace) {
  if (!t) return t;
  TermPtr w = whnf_impl(sig, t, true, trace);
  if (w->args.empty()) return w;
  std::vector<TermPtr> args;
  args.reserve(w->args.size());
  bool changed = false;
  for (const auto& a : w->args) {
    args.push_back(normalize_impl(sig, a, trace));
    changed = changed || args.back() != a;
  }
  return changed ? rebuild(*w, std::move(args)) : w;
}

}  // namespace

TermPtr whnf(const Signature& sig, const TermPtr& t, ReductionTrace* trace) {
  return whnf_impl(sig, t, true, trace);
}

TermPtr whnf_no_delta(const Signature& sig, const TermPtr& t, ReductionTrace* trace) {
  return whnf_impl(sig, t, false, trace);
}

TermPtr normalize(const Signature& sig, const TermPtr& t, ReductionTrace* trace) {
  return normalize_impl(sig, t, trace);
}

// ---------------------------------------------------------------------------
// Conversion

namespace {

class Converter {
 public:
  Converter(const Signature& sig, KernelOptions opts) : sig_(sig), opts_(opts) {}

  bool typed(const Context& ctx, const TermPtr& a, const TermPtr& b, const TermPtr& type) {
    if (alpha_equal(a, b)) return true;
    TermPtr t = whnf(sig_, type);
    switch (t->kind) {
      case Kind::Pi:
        if (opts_.eta_pi_sigma) {
          std::string z = fresh(ctx, {a, b, t});
          TermPtr zv = mk::var(z);
          return typed(ctx.pushed(z, Focus{}, t->arg(0)), mk::app(a, zv), mk::app(b, zv),
                       substitute(t->arg(1), t->binders[0], zv));
        }
        break;
      case Kind::Sigma:
        if (opts_.eta_pi_sigma) {
          TermPtr fa = mk::fst(a);
          return typed(ctx, fa, mk::fst(b), t->arg(0)) &&
                 typed(ctx, mk::snd(a), mk::snd(b), substitute(t->arg(1), t->binders[0], fa));
        }
        break;
      case Kind::Sharp:
        return typed(promote(t->focus, ctx), force_sharp(t->focus, a),
                     force_sharp(t->focus, b), t->arg(0));
      default:
        break;
    }
    return structural(ctx, a, b);
  }

  bool structural(const Context& ctx, const TermPtr& a, const TermPtr& b) {
    if (alpha_equal(a, b)) return true;
    TermPtr wa = whnf_no_delta(sig_, a);
    TermPtr wb = whnf_no_delta(sig_, b);
    if (same_shape(ctx, wa, wb)) return true;
    ReductionTrace ta, tb;
    TermPtr da = whnf(sig_, wa, &ta);
    TermPtr db = whnf(sig_, wb, &tb);
    if (ta.count(kDelta) == 0 && tb.count(kDelta) == 0) return false;
    return same_shape(ctx, da, db);
  }

 private:
  // The component of a sharp-typed term: M for M^#, otherwise N_#.
  TermPtr force_sharp(Focus f, const TermPtr& t) {
    TermPtr w = whnf(sig_, t);
    if (w->kind == Kind::SharpIntro) return w->arg(0);
    return mk::sharp_elim(f, w);
  }

  std::string fresh(const Context& ctx, std::initializer_list<TermPtr> avoid,
                    std::string_view base = "z") {
    return fresh_name(base, [&](std::string_view n) {
      if (ctx.name_in_use(n)) return true;
      return std::any_of(avoid.begin(), avoid.end(),
                         [&](const TermPtr& t) { return t && t->has_free(n); });
    });
  }

  // Opens the binders scoping child `i` of both terms with shared fresh
  // variables, then compares the children structurally.
  bool under_binders(const Context& ctx, const TermPtr& a, const TermPtr& b, std::size_t i) {
    auto bound = a->scope(i);
    if (bound.empty()) return structural(ctx, a->arg(i), b->arg(i));
    Substitution sa, sb;
    Context inner = ctx;
    for (std::size_t k : bound) {
      std::string z = fresh(inner, {a->arg(i), b->arg(i)}, a->binders[k]);
      TermPtr zv = mk::var(z);
      sa[a->binders[k]] = zv;
      sb[b->binders[k]] = zv;
      inner = inner.pushed(z, Focus{}, mk::universe(0));
    }
    return structural(inner, substitute(a->arg(i), sa), substitute(b->arg(i), sb));
  }

  bool same_shape(const Context& ctx, const TermPtr& a, const TermPtr& b) {
    if (alpha_equal(a, b)) return true;
    if (opts_.eta_pi_sigma) {
      if (a->kind == Kind::Lam && b->kind != Kind::Lam) return eta_lam(ctx, a, b);
      if (b->kind == Kind::Lam && a->kind != Kind::Lam) return eta_lam(ctx, b, a);
      if (a->kind == Kind::Pair && b->kind != Kind::Pair) return eta_pair(ctx, a, b);
      if (b->kind == Kind::Pair && a->kind != Kind::Pair) return eta_pair(ctx, b, a);
    }
    if (a->kind == Kind::SharpIntro && b->kind != Kind::SharpIntro) {
      return structural(ctx, a->arg(0), mk::sharp_elim(a->focus, b));
    }
    if (b->kind == Kind::SharpIntro && a->kind != Kind::SharpIntro) {
      return structural(ctx, mk::sharp_elim(b->focus, a), b->arg(0));
    }
    if (a->kind != b->kind) return false;
    if (a->focus != b->focus || a->crisp != b->crisp) return false;
    switch (a->kind) {
      case Kind::Var:
      case Kind::Const:
        return a->name == b->name;
      case Kind::Universe:
        return a->level == b->level;
      case Kind::Lam:
        return under_binders(ctx, a, b, 1);
      case Kind::FlatElim:
        return under_binders(ctx, a, b, 1) && under_binders(ctx, a, b, 2);
      default:
        break;
    }
    for (std::size_t i = 0; i < a->args.size(); ++i) {
      if (!a->arg(i) || !b->arg(i)) {
        if (a->arg(i) != b->arg(i)) return false;
        continue;
      }
      if (!under_binders(ctx, a, b, i)) return false;
    }
    return true;
  }

  bool eta_lam(const Context& ctx, const TermPtr& lam, const TermPtr& other) {
    std::string z = fresh(ctx, {lam, other}, lam->binders[0]);
    TermPtr zv = mk::var(z);
    return structural(ctx.pushed(z, Focus{}, mk::universe(0)),
                      substitute(lam->arg(1), lam->binders[0], zv), mk::app(other, zv));
  }

  bool eta_pair(const Context& ctx, const TermPtr& pair, const TermPtr& other) {
    return structural(ctx, pair->arg(0), mk::fst(other)) &&
           structural(ctx, pair->arg(1), mk::snd(other));
  }

  const Signature& sig_;
  KernelOptions opts_;
};

}  // namespace

bool convertible(const CheckState& st, const TermPtr& a, const TermPtr& b,
                 const TermPtr& A) {
  Converter conv(*st.signature, st.options);
  return conv.typed(st.context, a, b, A);
}

bool convertible_types(const CheckState& st, const TermPtr& A, const TermPtr& B) {
  Converter conv(*st.signature, st.options);
  return conv.structural(st.context, A, B);
}

// ---------------------------------------------------------------------------
// Type checking

namespace {

std::string show(const CheckState& st, const TermPtr& t) {
  return pretty(t, st.lattice());
}

[[noreturn]] void fail(std::string_view code, std::string message, const CheckState& st,
                       const TermPtr& at) {
  Diagnostic d;
  d.code = std::string(code);
  d.message = std::move(message);
  if (at) d.span = at->span;
  d.context = st.context.render(st.lattice());
  throw TypeError(std::move(d));
}

void require_focus(const CheckState& st, Focus f, const TermPtr& at) {
  if (!st.lattice().is_canonical(f)) {
    fail(code::kBadFocus, "focus is not a canonical element of the declared lattice", st, at);
  }
}

// A name for binder `x` that does not clash with the context.
std::string open_binder(const CheckState& st, const std::string& x,
                        std::initializer_list<TermPtr> avoid) {
  if (!x.empty() && x != "_" && !st.context.name_in_use(x)) return x;
  return fresh_name(x, [&](std::string_view n) {
    if (st.context.name_in_use(n)) return true;
    return std::any_of(avoid.begin(), avoid.end(),
                       [&](const TermPtr& t) { return t && t->has_free(n); });
  });
}

TermPtr rename(const TermPtr& t, const std::string& from, const std::string& to) {
  if (from == to || !t) return t;
  return substitute(t, from, mk::var(to));
}

TermPtr infer_impl(const CheckState& st, const TermPtr& t);
void check_impl(const CheckState& st, const TermPtr& t, const TermPtr& goal);

// Adds the term's own span to errors raised by sub-derivations without one.
template <class F>
auto with_span_of(const TermPtr& t, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (TypeError& err) {
    if (!err.diagnostic().span.valid() && t && t->span.valid()) {
      err.diagnostic().span = t->span;
    }
    throw;
  }
}

struct FlatScrutinee {
  TermPtr inner_type;  // A in Flat(f, A)
};

FlatScrutinee infer_flat_scrutinee(const CheckState& st, const TermPtr& t) {
  require_focus(st, t->focus, t);
  require_focus(st, t->crisp, t);
  CheckState scrut = st.with_context(divide(st.lattice(), t->crisp, st.context));
  TermPtr m_type = whnf(*st.signature, infer(scrut, t->arg(1)));
  if (m_type->kind != Kind::Flat) {
    fail(code::kNotEliminable,
         "flat elimination on a term of type " + show(st, m_type) + ", which is not a flat type",
         st, t->arg(1));
  }
  if (m_type->focus != t->focus) {
    fail(code::kTypeMismatch,
         "scrutinee has type " + show(st, m_type) + " but the eliminator is for flat" +
             st.lattice().render(t->focus),
         st, t->arg(1));
  }
  return {m_type->arg(0)};
}

TermPtr infer_impl(const CheckState& st, const TermPtr& t) {
  const Signature& sig = *st.signature;
  const FocusLattice& lat = st.lattice();
  switch (t->kind) {
    case Kind::Var: {
      const ContextEntry* e = st.context.lookup(t->name);
      if (!e) {
        if (st.context.was_divided_away(t->name)) {
          fail(code::kUnboundOrNotCrisp,
               "variable '" + t->name + "' is not crisp enough to be used here", st, t);
        }
        fail(code::kUnboundOrNotCrisp, "unbound variable '" + t->name + "'", st, t);
      }
      return e->type;
    }
    case Kind::Const: {
      const SignatureEntry* e = sig.lookup(t->name);
      if (!e) fail(code::kUnboundOrNotCrisp, "unknown constant '" + t->name + "'", st, t);
      return e->type;
    }
    case Kind::Universe:
      return mk::universe(t->level + 1);
    case Kind::Pi:
    case Kind::Sigma: {
      unsigned i = check_type(st, t->arg(0));
      std::string x = open_binder(st, t->binders[0], {t->arg(1)});
      CheckState inner = st.with_context(st.context.pushed(x, lat.top(), t->arg(0)));
      unsigned j = check_type(inner, rename(t->arg(1), t->binders[0], x));
      return mk::universe(std::max(i, j));
    }
    case Kind::Lam: {
      if (!t->arg(0)) {
        fail(code::kAnnotation,
             "cannot infer the type of an unannotated lambda; write `fun (x : A) => ...`", st, t);
      }
      check_type(st, t->arg(0));
      std::string x = open_binder(st, t->binders[0], {t->arg(1)});
      CheckState inner = st.with_context(st.context.pushed(x, lat.top(), t->arg(0)));
      TermPtr body_type = infer(inner, rename(t->arg(1), t->binders[0], x));
      return mk::pi(x, t->arg(0), body_type);
    }
    case Kind::App: {
      // A redex with an unannotated lambda head (typically left behind by
      // substitution) takes its domain from the argument.
      const TermPtr& head = t->arg(0);
      if (head->kind == Kind::Lam && !head->arg(0)) {
        TermPtr annotated = rebuild(*head, {infer(st, t->arg(1)), head->arg(1)});
        return infer(st, mk::app(annotated, t->arg(1), t->span));
      }
      TermPtr f_type = whnf(sig, infer(st, t->arg(0)));
      if (f_type->kind != Kind::Pi) {
        fail(code::kNotEliminable,
             "applying a term of type " + show(st, f_type) + ", which is not a function type",
             st, t->arg(0));
      }
      check(st, t->arg(1), f_type->arg(0));
      return substitute(f_type->arg(1), f_type->binders[0], t->arg(1));
    }
    case Kind::Pair: {
      TermPtr a = infer(st, t->arg(0));
      TermPtr b = infer(st, t->arg(1));
      return mk::sigma("_", a, b);
    }
    case Kind::Fst:
    case Kind::Snd: {
      TermPtr p_type = whnf(sig, infer(st, t->arg(0)));
      if (p_type->kind != Kind::Sigma) {
        fail(code::kNotEliminable,
             "projecting from a term of type " + show(st, p_type) + ", which is not a pair type",
             st, t->arg(0));
      }
      if (t->kind == Kind::Fst) return p_type->arg(0);
      return substitute(p_type->arg(1), p_type->binders[0], mk::fst(t->arg(0)));
    }
    case Kind::Id: {
      unsigned level = check_type(st, t->arg(0));
      check(st, t->arg(1), t->arg(0));
      check(st, t->arg(2), t->arg(0));
      return mk::universe(level);
    }
    case Kind::Refl: {
      TermPtr a = infer(st, t->arg(0));
      return mk::id(a, t->arg(0), t->arg(0));
    }
    case Kind::J: {
      TermPtr q_type = whnf(sig, infer(st, t->arg(2)));
      if (q_type->kind != Kind::Id) {
        fail(code::kNotEliminable,
             "path induction on a term of type " + show(st, q_type) + ", which is not an identity type",
             st, t->arg(2));
      }
      const TermPtr& A = q_type->arg(0);
      const TermPtr& motive = t->arg(0);
      std::string x = open_binder(st, t->binders[0], {motive, A});
      CheckState sx = st.with_context(st.context.pushed(x, lat.top(), A));
      std::string y = open_binder(sx, t->binders[1], {motive, A});
      CheckState sy = sx.with_context(sx.context.pushed(y, lat.top(), A));
      std::string p = open_binder(sy, t->binders[2], {motive, A});
      CheckState sp = sy.with_context(
          sy.context.pushed(p, lat.top(), mk::id(A, mk::var(x), mk::var(y))));
      Substitution open{{t->binders[0], mk::var(x)}, {t->binders[1], mk::var(y)},
                        {t->binders[2], mk::var(p)}};
      with_span_of(motive, [&] { check_type(sp, substitute(motive, open)); });

      std::string z = open_binder(st, "z", {motive, A});
      TermPtr zv = mk::var(z);
      TermPtr refl_case_type =
          mk::pi(z, A,
                 substitute(motive, Substitution{{t->binders[0], zv},
                                                 {t->binders[1], zv},
                                                 {t->binders[2], mk::refl(zv)}}));
      check(st, t->arg(1), refl_case_type);
      return substitute(motive, Substitution{{t->binders[0], q_type->arg(1)},
                                             {t->binders[1], q_type->arg(2)},
                                             {t->binders[2], t->arg(2)}});
    }
    case Kind::Flat: {
      require_focus(st, t->focus, t);
      unsigned level =
          check_type(st.with_context(divide(lat, t->focus, st.context)), t->arg(0));
      return mk::universe(level);
    }
    case Kind::Sharp: {
      require_focus(st, t->focus, t);
      unsigned level = check_type(st.with_context(promote(t->focus, st.context)), t->arg(0));
      return mk::universe(level);
    }
    case Kind::FlatIntro: {
      require_focus(st, t->focus, t);
      TermPtr a = infer(st.with_context(divide(lat, t->focus, st.context)), t->arg(0));
      return mk::flat(t->focus, a);
    }
    case Kind::SharpIntro: {
      require_focus(st, t->focus, t);
      TermPtr a = infer(st.with_context(promote(t->focus, st.context)), t->arg(0));
      return mk::sharp(t->focus, a);
    }
    case Kind::SharpElim: {
      require_focus(st, t->focus, t);
      TermPtr n_type =
          whnf(sig, infer(st.with_context(divide(lat, t->focus, st.context)), t->arg(0)));
      if (n_type->kind != Kind::Sharp) {
        fail(code::kNotEliminable,
             "sharp elimination on a term of type " + show(st, n_type) + ", which is not a sharp type",
             st, t->arg(0));
      }
      if (n_type->focus != t->focus) {
        fail(code::kTypeMismatch,
             "term has type " + show(st, n_type) + " but is eliminated with .unsharp" +
                 lat.render(t->focus),
             st, t->arg(0));
      }
      return n_type->arg(0);
    }
    case Kind::FlatElim: {
      FlatScrutinee scrut = infer_flat_scrutinee(st, t);
      TermPtr flat_type = mk::flat(t->focus, scrut.inner_type);
      const TermPtr& motive = t->arg(0);
      const TermPtr& branch = t->arg(2);
      std::string u = open_binder(st, t->binders[1], {branch, motive});
      CheckState sb = st.with_context(
          st.context.pushed(u, lat.meet(t->crisp, t->focus), scrut.inner_type));
      TermPtr opened_branch = rename(branch, t->binders[1], u);
      if (motive) {
        std::string x = open_binder(st, t->binders[0], {motive});
        CheckState sm = st.with_context(st.context.pushed(x, t->crisp, flat_type));
        with_span_of(motive, [&] { check_type(sm, rename(motive, t->binders[0], x)); });
        TermPtr branch_goal =
            substitute(motive, t->binders[0], mk::flat_intro(t->focus, mk::var(u)));
        check(sb, opened_branch, branch_goal);
        return substitute(motive, t->binders[0], t->arg(1));
      }
      TermPtr result = infer(sb, opened_branch);
      if (result->has_free(u)) {
        fail(code::kAnnotation,
             "the result type " + show(sb, result) + " depends on '" + u +
                 "'; give a motive with `as x => C`",
             st, t);
      }
      return result;
    }
  }
  fail(code::kNotEliminable, "unsupported term", st, t);
}

void check_impl(const CheckState& st, const TermPtr& t, const TermPtr& goal) {
  const Signature& sig = *st.signature;
  const FocusLattice& lat = st.lattice();
  switch (t->kind) {
    case Kind::Lam: {
      TermPtr g = whnf(sig, goal);
      if (g->kind != Kind::Pi) {
        fail(code::kTypeMismatch, "a function was given where " + show(st, goal) + " was expected",
             st, t);
      }
      if (t->arg(0)) {
        check_type(st, t->arg(0));
        if (!convertible_types(st, t->arg(0), g->arg(0))) {
          fail(code::kAnnotation,
               "lambda annotation " + show(st, t->arg(0)) + " does not match the expected domain " +
                   show(st, g->arg(0)),
               st, t->arg(0));
        }
      }
      std::string x = open_binder(st, t->binders[0], {t->arg(1), g->arg(1)});
      CheckState inner = st.with_context(st.context.pushed(x, lat.top(), g->arg(0)));
      check(inner, rename(t->arg(1), t->binders[0], x), rename(g->arg(1), g->binders[0], x));
      return;
    }
    case Kind::Pair: {
      TermPtr g = whnf(sig, goal);
      if (g->kind != Kind::Sigma) break;
      check(st, t->arg(0), g->arg(0));
      check(st, t->arg(1), substitute(g->arg(1), g->binders[0], t->arg(0)));
      return;
    }
    case Kind::Refl: {
      TermPtr g = whnf(sig, goal);
      if (g->kind != Kind::Id) break;
      check(st, t->arg(0), g->arg(0));
      if (!convertible(st, t->arg(0), g->arg(1), g->arg(0)) ||
          !convertible(st, t->arg(0), g->arg(2), g->arg(0))) {
        fail(code::kTypeMismatch,
             "refl " + show(st, t->arg(0)) + " does not prove " + show(st, g) +
                 ": the sides are not definitionally equal",
             st, t);
      }
      return;
    }
    case Kind::FlatIntro: {
      require_focus(st, t->focus, t);
      TermPtr g = whnf(sig, goal);
      if (g->kind != Kind::Flat) break;
      if (g->focus != t->focus) {
        fail(code::kTypeMismatch,
             "introduces flat" + lat.render(t->focus) + " but " + show(st, goal) + " was expected",
             st, t);
      }
      check(st.with_context(divide(lat, t->focus, st.context)), t->arg(0), g->arg(0));
      return;
    }
    case Kind::SharpIntro: {
      require_focus(st, t->focus, t);
      TermPtr g = whnf(sig, goal);
      if (g->kind != Kind::Sharp) break;
      if (g->focus != t->focus) {
        fail(code::kTypeMismatch,
             "introduces sharp" + lat.render(t->focus) + " but " + show(st, goal) + " was expected",
             st, t);
      }
      check(st.with_context(promote(t->focus, st.context)), t->arg(0), g->arg(0));
      return;
    }
    case Kind::FlatElim: {
      if (t->arg(0)) break;
      FlatScrutinee scrut = infer_flat_scrutinee(st, t);
      const TermPtr& branch = t->arg(2);
      std::string u = open_binder(st, t->binders[1], {branch, goal});
      CheckState sb = st.with_context(
          st.context.pushed(u, lat.meet(t->crisp, t->focus), scrut.inner_type));
      check(sb, rename(branch, t->binders[1], u), goal);
      return;
    }
    default:
      break;
  }
  TermPtr actual = infer(st, t);
  if (!convertible_types(st, actual, goal)) {
    fail(code::kTypeMismatch,
         "expected type " + show(st, goal) + " but " + show(st, t) + " has type " + show(st, actual),
         st, t);
  }
}

}  // namespace

unsigned check_type(const CheckState& st, const TermPtr& A) {
  return with_span_of(A, [&] {
    TermPtr T = whnf(*st.signature, infer(st, A));
    if (T->kind != Kind::Universe) {
      fail(code::kUniverse,
           show(st, A) + " is not a type (it has type " + show(st, T) + ")", st, A);
    }
    return T->level;
  });
}

TermPtr infer(const CheckState& st, const TermPtr& t) {
  return with_span_of(t, [&] { return infer_impl(st, t); });
}

void check(const CheckState& st, const TermPtr& t, const TermPtr& A) {
  with_span_of(t, [&] { check_impl(st, t, A); });
}

void check_context(const Signature& sig, const Context& ctx, KernelOptions opts) {
  Context prefix;
  for (const auto& e : ctx.entries()) {
    CheckState st{&sig, prefix, opts};
    if (prefix.contains(e.name)) {
      fail(code::kUnboundOrNotCrisp, "context binds '" + e.name + "' twice", st, e.type);
    }
    check_type(st.with_context(divide(sig.lattice(), e.annotation, prefix)), e.type);
    prefix = prefix.pushed(e.name, e.annotation, e.type);
  }
}

Context crisp_substitute(const Signature& sig, const Context& ctx, std::string_view x,
                         const TermPtr& s, KernelOptions opts) {
  const auto& entries = ctx.entries();
  auto it = std::find_if(entries.begin(), entries.end(),
                         [&](const ContextEntry& e) { return e.name == x; });
  if (it == entries.end()) {
    throw std::out_of_range("crisp_substitute: unbound variable '" + std::string(x) + "'");
  }
  Context prefix(std::vector<ContextEntry>(entries.begin(), it));
  CheckState divided{&sig, divide(sig.lattice(), it->annotation, prefix), opts};
  try {
    check(divided, s, it->type);
  } catch (TypeError& err) {
    bool checks_undivided = true;
    try {
      check(CheckState{&sig, prefix, opts}, s, it->type);
    } catch (const TypeError&) {
      checks_undivided = false;
    }
    if (!checks_undivided) throw;
    auto& d = err.diagnostic();
    d.code = std::string(code::kCrispSubstitution);
    d.message = "cannot substitute " + pretty(s, sig.lattice()) + " for the " +
                sig.lattice().render(it->annotation) + "-crisp variable '" + std::string(x) +
                "': " + d.message;
    throw;
  }
  std::vector<ContextEntry> out(entries.begin(), it);
  for (auto rest = std::next(it); rest != entries.end(); ++rest) {
    out.push_back({rest->name, rest->annotation, substitute(rest->type, std::string(x), s)});
  }
  return Context(std::move(out));
}

std::optional<Diagnostic> check_declaration(Signature& sig, const Declaration& d,
                                            KernelOptions opts) {
  CheckState st{&sig, Context{}, opts};
  auto located = [&](TypeError& err) {
    Diagnostic diag = err.diagnostic();
    if (!diag.span.valid()) diag.span = d.span;
    diag.file = d.file;
    if (diag.context && diag.context->empty()) diag.context.reset();
    return diag;
  };
  if (sig.contains(d.name)) {
    Diagnostic diag{std::string(code::kDuplicate), "'" + d.name + "' is already declared",
                    d.file, d.span, std::nullopt};
    return diag;
  }
  try {
    check_type(st, d.type);
    if (d.body) check(st, d.body, d.type);
  } catch (TypeError& err) {
    return located(err);
  }
  sig.append_unchecked({d.name, d.type, d.body, d.span});
  return std::nullopt;
}

SignatureResult check_signature(FocusLattice lattice, const std::vector<Declaration>& decls,
                                KernelOptions opts) {
  SignatureResult out{Signature(std::move(lattice)), {}};
  for (const auto& d : decls) {
    if (auto diag = check_declaration(out.signature, d, opts)) {
      out.diagnostics.push_back(std::move(*diag));
    }
  }
  return out;
}

}  // namespace focal
