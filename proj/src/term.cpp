#include "focal/term.hpp"

#include <algorithm>
#include <iterator>
#include <utility>

namespace focal {

namespace {

constexpr std::array<std::size_t, 0> kNoScope{};
constexpr std::array<std::size_t, 1> kScope0{0};
constexpr std::array<std::size_t, 1> kScope1{1};
constexpr std::array<std::size_t, 3> kScope012{0, 1, 2};

}  // namespace

std::string_view kind_name(Kind k) {
  switch (k) {
    case Kind::Var: return "Var";
    case Kind::Const: return "Const";
    case Kind::Universe: return "Universe";
    case Kind::Pi: return "Pi";
    case Kind::Lam: return "Lam";
    case Kind::App: return "App";
    case Kind::Sigma: return "Sigma";
    case Kind::Pair: return "Pair";
    case Kind::Fst: return "Fst";
    case Kind::Snd: return "Snd";
    case Kind::Id: return "Id";
    case Kind::Refl: return "Refl";
    case Kind::J: return "J";
    case Kind::Flat: return "Flat";
    case Kind::FlatIntro: return "FlatIntro";
    case Kind::FlatElim: return "FlatElim";
    case Kind::Sharp: return "Sharp";
    case Kind::SharpIntro: return "SharpIntro";
    case Kind::SharpElim: return "SharpElim";
  }
  return "?";
}

std::span<const std::size_t> Term::scope(std::size_t child) const {
  switch (kind) {
    case Kind::Pi:
    case Kind::Sigma:
    case Kind::Lam:
      if (child == 1) return kScope0;
      break;
    case Kind::J:
      if (child == 0) return kScope012;
      break;
    case Kind::FlatElim:
      if (child == 0) return kScope0;
      if (child == 2) return kScope1;
      break;
    default:
      break;
  }
  return kNoScope;
}

Term::Term(Kind k, std::string nm, unsigned lvl, Focus f, Focus c,
           std::vector<std::string> bs, std::vector<TermPtr> as, Span sp)
    : kind(k),
      name(std::move(nm)),
      level(lvl),
      focus(f),
      crisp(c),
      binders(std::move(bs)),
      args(std::move(as)),
      span(sp) {
  if (kind == Kind::Var) {
    free_vars_.push_back(name);
    return;
  }
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (!args[i]) continue;
    size_ += args[i]->size_;
    const auto& child = args[i]->free_vars_;
    auto bound = scope(i);
    std::vector<std::string> kept;
    kept.reserve(child.size());
    for (const auto& v : child) {
      bool is_bound = std::any_of(bound.begin(), bound.end(), [&](std::size_t b) {
        return binders[b] == v;
      });
      if (!is_bound) kept.push_back(v);
    }
    std::vector<std::string> merged;
    merged.reserve(free_vars_.size() + kept.size());
    std::set_union(free_vars_.begin(), free_vars_.end(), kept.begin(), kept.end(),
                   std::back_inserter(merged));
    free_vars_ = std::move(merged);
  }
}

bool Term::has_free(std::string_view x) const {
  return std::binary_search(free_vars_.begin(), free_vars_.end(), x,
                            [](const auto& a, const auto& b) {
                              return std::string_view(a) < std::string_view(b);
                            });
}

TermPtr rebuild(const Term& t, std::vector<TermPtr> args) {
  return std::make_shared<const Term>(t.kind, t.name, t.level, t.focus, t.crisp,
                                      t.binders, std::move(args), t.span);
}

TermPtr rebuild(const Term& t, std::vector<std::string> binders,
                std::vector<TermPtr> args) {
  return std::make_shared<const Term>(t.kind, t.name, t.level, t.focus, t.crisp,
                                      std::move(binders), std::move(args), t.span);
}

TermPtr with_span(const TermPtr& t, Span span) {
  return std::make_shared<const Term>(t->kind, t->name, t->level, t->focus,
                                      t->crisp, t->binders, t->args, span);
}

namespace mk {

namespace {
TermPtr make(Kind k, std::vector<std::string> bs, std::vector<TermPtr> as,
             Span sp, Focus f = {}, Focus c = {}) {
  return std::make_shared<const Term>(k, std::string{}, 0, f, c, std::move(bs),
                                      std::move(as), sp);
}
}  // namespace

TermPtr var(std::string x, Span sp) {
  return std::make_shared<const Term>(Kind::Var, std::move(x), 0, Focus{}, Focus{},
                                      std::vector<std::string>{},
                                      std::vector<TermPtr>{}, sp);
}
TermPtr constant(std::string c, Span sp) {
  return std::make_shared<const Term>(Kind::Const, std::move(c), 0, Focus{},
                                      Focus{}, std::vector<std::string>{},
                                      std::vector<TermPtr>{}, sp);
}
TermPtr universe(unsigned level, Span sp) {
  return std::make_shared<const Term>(Kind::Universe, std::string{}, level,
                                      Focus{}, Focus{}, std::vector<std::string>{},
                                      std::vector<TermPtr>{}, sp);
}
TermPtr pi(std::string x, TermPtr dom, TermPtr cod, Span sp) {
  return make(Kind::Pi, {std::move(x)}, {std::move(dom), std::move(cod)}, sp);
}
TermPtr arrow(TermPtr dom, TermPtr cod, Span sp) {
  return pi("_", std::move(dom), std::move(cod), sp);
}
TermPtr lam(std::string x, TermPtr body, Span sp) {
  return make(Kind::Lam, {std::move(x)}, {nullptr, std::move(body)}, sp);
}
TermPtr lam(std::string x, TermPtr dom, TermPtr body, Span sp) {
  return make(Kind::Lam, {std::move(x)}, {std::move(dom), std::move(body)}, sp);
}
TermPtr app(TermPtr f, TermPtr a, Span sp) {
  return make(Kind::App, {}, {std::move(f), std::move(a)}, sp);
}
TermPtr app(TermPtr f, std::initializer_list<TermPtr> as) {
  for (const auto& a : as) f = app(std::move(f), a);
  return f;
}
TermPtr sigma(std::string x, TermPtr a, TermPtr b, Span sp) {
  return make(Kind::Sigma, {std::move(x)}, {std::move(a), std::move(b)}, sp);
}
TermPtr pair(TermPtr a, TermPtr b, Span sp) {
  return make(Kind::Pair, {}, {std::move(a), std::move(b)}, sp);
}
TermPtr fst(TermPtr p, Span sp) { return make(Kind::Fst, {}, {std::move(p)}, sp); }
TermPtr snd(TermPtr p, Span sp) { return make(Kind::Snd, {}, {std::move(p)}, sp); }
TermPtr id(TermPtr type, TermPtr lhs, TermPtr rhs, Span sp) {
  return make(Kind::Id, {}, {std::move(type), std::move(lhs), std::move(rhs)}, sp);
}
TermPtr refl(TermPtr a, Span sp) { return make(Kind::Refl, {}, {std::move(a)}, sp); }
TermPtr j(std::string x, std::string y, std::string p, TermPtr motive,
          TermPtr refl_case, TermPtr path, Span sp) {
  return make(Kind::J, {std::move(x), std::move(y), std::move(p)},
              {std::move(motive), std::move(refl_case), std::move(path)}, sp);
}
TermPtr flat(Focus f, TermPtr a, Span sp) {
  return make(Kind::Flat, {}, {std::move(a)}, sp, f);
}
TermPtr flat_intro(Focus f, TermPtr m, Span sp) {
  return make(Kind::FlatIntro, {}, {std::move(m)}, sp, f);
}
TermPtr flat_elim(Focus f, Focus crisp, std::string motive_binder, TermPtr motive,
                  TermPtr scrutinee, std::string u, TermPtr branch, Span sp) {
  if (!motive) motive_binder.clear();
  return make(Kind::FlatElim, {std::move(motive_binder), std::move(u)},
              {std::move(motive), std::move(scrutinee), std::move(branch)}, sp, f,
              crisp);
}
TermPtr sharp(Focus f, TermPtr a, Span sp) {
  return make(Kind::Sharp, {}, {std::move(a)}, sp, f);
}
TermPtr sharp_intro(Focus f, TermPtr m, Span sp) {
  return make(Kind::SharpIntro, {}, {std::move(m)}, sp, f);
}
TermPtr sharp_elim(Focus f, TermPtr n, Span sp) {
  return make(Kind::SharpElim, {}, {std::move(n)}, sp, f);
}

}  // namespace mk

namespace {

// Pairs of binder names currently in scope, innermost last.
using AlphaScope = std::vector<std::pair<std::string_view, std::string_view>>;

bool alpha_rec(const TermPtr& a, const TermPtr& b, AlphaScope& scope) {
  if (!a || !b) return !a && !b;
  if (a->kind != b->kind) return false;
  switch (a->kind) {
    case Kind::Var: {
      for (auto it = scope.rbegin(); it != scope.rend(); ++it) {
        bool left = it->first == a->name;
        bool right = it->second == b->name;
        if (left || right) return left && right;
      }
      return a->name == b->name;
    }
    case Kind::Const:
      return a->name == b->name;
    case Kind::Universe:
      return a->level == b->level;
    default:
      break;
  }
  if (a->focus != b->focus || a->crisp != b->crisp) return false;
  if (a->args.size() != b->args.size()) return false;
  for (std::size_t i = 0; i < a->args.size(); ++i) {
    auto bound = a->scope(i);
    for (std::size_t k : bound) scope.emplace_back(a->binders[k], b->binders[k]);
    bool ok = alpha_rec(a->args[i], b->args[i], scope);
    scope.resize(scope.size() - bound.size());
    if (!ok) return false;
  }
  return true;
}

void collect_foci(const TermPtr& t, std::vector<Focus>& out) {
  if (!t) return;
  switch (t->kind) {
    case Kind::FlatElim:
      out.push_back(t->crisp);
      [[fallthrough]];
    case Kind::Flat:
    case Kind::FlatIntro:
    case Kind::Sharp:
    case Kind::SharpIntro:
    case Kind::SharpElim:
      out.push_back(t->focus);
      break;
    default:
      break;
  }
  for (const auto& a : t->args) collect_foci(a, out);
}

}  // namespace

bool alpha_equal(const TermPtr& a, const TermPtr& b) {
  if (a == b) return true;
  AlphaScope scope;
  return alpha_rec(a, b, scope);
}

std::vector<std::string> free_variables(const TermPtr& t) {
  return t ? t->free_vars() : std::vector<std::string>{};
}

std::vector<Focus> foci_of(const TermPtr& t) {
  std::vector<Focus> out;
  collect_foci(t, out);
  return out;
}

}  // namespace focal
