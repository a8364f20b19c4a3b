#include "focal/substitution.hpp"

#include <algorithm>
#include <set>

namespace focal {

std::string fresh_name(std::string_view base,
                       const std::function<bool(std::string_view)>& taken) {
  if (base.empty() || base == "_") base = "x";
  if (!taken(base)) return std::string(base);
  std::string_view stem = base;
  while (!stem.empty() && stem.back() >= '0' && stem.back() <= '9') {
    stem.remove_suffix(1);
  }
  if (stem.empty()) stem = "x";
  for (unsigned i = 1;; ++i) {
    std::string candidate = std::string(stem) + std::to_string(i);
    if (!taken(candidate)) return candidate;
  }
}

namespace {

struct SubstState {
  Substitution env;
  // Free variables of every replacement; a binder in this set must be renamed.
  std::set<std::string, std::less<>> replacement_fv;
};

TermPtr subst_rec(const TermPtr& t, const SubstState& st) {
  if (!t) return t;
  if (t->kind == Kind::Var) {
    auto it = st.env.find(t->name);
    return it == st.env.end() ? t : it->second;
  }
  bool touched = std::any_of(st.env.begin(), st.env.end(),
                             [&](const auto& kv) { return t->has_free(kv.first); });
  if (!touched) return t;

  std::vector<std::string> binders = t->binders;
  std::vector<TermPtr> args(t->args.size());
  for (std::size_t i = 0; i < t->args.size(); ++i) {
    const TermPtr& child = t->args[i];
    if (!child) continue;
    auto bound = t->scope(i);
    if (bound.empty()) {
      args[i] = subst_rec(child, st);
      continue;
    }
    SubstState inner = st;
    for (std::size_t b : bound) inner.env.erase(t->binders[b]);
    bool child_touched = std::any_of(inner.env.begin(), inner.env.end(),
                                     [&](const auto& kv) { return child->has_free(kv.first); });
    if (!child_touched) {
      args[i] = child;
      continue;
    }
    // Rename any binder a replacement could be captured by, whether or not
    // the binder itself occurs in the child.
    for (std::size_t b : bound) {
      const std::string& y = t->binders[b];
      if (y.empty() || !inner.replacement_fv.contains(y)) continue;
      std::string fresh = fresh_name(y, [&](std::string_view n) {
        return inner.replacement_fv.contains(n) || child->has_free(n) ||
               inner.env.contains(n) ||
               std::find(binders.begin(), binders.end(), n) != binders.end();
      });
      inner.env[y] = mk::var(fresh);
      inner.replacement_fv.insert(fresh);
      binders[b] = fresh;
    }
    args[i] = subst_rec(child, inner);
  }
  return rebuild(*t, std::move(binders), std::move(args));
}

}  // namespace

TermPtr substitute(const TermPtr& t, const Substitution& env) {
  SubstState st;
  for (const auto& [x, s] : env) {
    if (s->kind == Kind::Var && s->name == x) continue;
    st.env.emplace(x, s);
    for (const auto& v : s->free_vars()) st.replacement_fv.insert(v);
  }
  if (st.env.empty()) return t;
  return subst_rec(t, st);
}

TermPtr substitute(const TermPtr& t, const std::string& x, const TermPtr& s) {
  return substitute(t, Substitution{{x, s}});
}

}  // namespace focal
