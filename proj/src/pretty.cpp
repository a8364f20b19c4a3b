#include <sstream>

#include "focal/substitution.hpp"
#include "focal/surface.hpp"

namespace focal {

namespace {

bool mentions_const(const TermPtr& t, std::string_view c) {
  if (!t) return false;
  if (t->kind == Kind::Const) return t->name == c;
  for (const auto& a : t->args) {
    if (mentions_const(a, c)) return true;
  }
  return false;
}

// Precedence: 0 binders and arrows, 1 products, 2 applications and keyword
// forms, 3 atoms and postfix operators.
class Printer {
 public:
  explicit Printer(const FocusLattice& lattice) : lat_(lattice) {}

  void print(const TermPtr& t, int prec) {
    int own = precedence(*t);
    if (own < prec) os_ << '(';
    body(t);
    if (own < prec) os_ << ')';
  }

  std::string str() const { return os_.str(); }

 private:
  static int precedence(const Term& t) {
    switch (t.kind) {
      case Kind::Var:
      case Kind::Const:
      case Kind::Pair:
      case Kind::Fst:
      case Kind::Snd:
      case Kind::FlatIntro:
      case Kind::SharpIntro:
      case Kind::SharpElim:
        return 3;
      case Kind::Universe:
      case Kind::App:
      case Kind::Id:
      case Kind::Refl:
      case Kind::J:
      case Kind::Flat:
      case Kind::Sharp:
        return 2;
      case Kind::Sigma:
        return 1;
      default:
        return 0;
    }
  }

  // A binder that would capture a constant of the same name in `scope` is
  // renamed, so that the name resolves back to the bound variable.
  std::string safe_binder(const std::string& x, std::initializer_list<TermPtr*> scopes) {
    bool clash = false;
    for (TermPtr* s : scopes) clash = clash || mentions_const(*s, x);
    if (!clash) return x;
    std::string fresh = fresh_name(x, [&](std::string_view n) {
      for (TermPtr* s : scopes) {
        if (*s && ((*s)->has_free(n) || mentions_const(*s, n))) return true;
      }
      return false;
    });
    for (TermPtr* s : scopes) {
      if (*s) *s = substitute(*s, x, mk::var(fresh));
    }
    return fresh;
  }

  std::string binder_text(const std::string& x) { return x.empty() ? "_" : x; }

  void body(const TermPtr& t) {
    switch (t->kind) {
      case Kind::Var:
      case Kind::Const:
        os_ << t->name;
        return;
      case Kind::Universe:
        os_ << "Type " << t->level;
        return;
      case Kind::Pi:
      case Kind::Sigma: {
        bool pi = t->kind == Kind::Pi;
        TermPtr cod = t->arg(1);
        const std::string& x = t->binders[0];
        if (x.empty() || x == "_" || !cod->has_free(x)) {
          print(t->arg(0), pi ? 1 : 2);
          os_ << (pi ? " -> " : " * ");
          print(cod, pi ? 0 : 1);
          return;
        }
        std::string name = safe_binder(x, {&cod});
        os_ << '(' << name << " : ";
        print(t->arg(0), 0);
        os_ << (pi ? ") -> " : ") * ");
        print(cod, pi ? 0 : 1);
        return;
      }
      case Kind::Lam: {
        os_ << "fun";
        TermPtr cur = t;
        while (cur->kind == Kind::Lam) {
          TermPtr b = cur->arg(1);
          std::string name = binder_text(safe_binder(cur->binders[0], {&b}));
          if (cur->arg(0)) {
            os_ << " (" << name << " : ";
            print(cur->arg(0), 0);
            os_ << ')';
          } else {
            os_ << ' ' << name;
          }
          cur = b;
        }
        os_ << " => ";
        print(cur, 0);
        return;
      }
      case Kind::App:
        print(t->arg(0), 2);
        os_ << ' ';
        print(t->arg(1), 3);
        return;
      case Kind::Pair:
        os_ << '(';
        print(t->arg(0), 0);
        os_ << " , ";
        print(t->arg(1), 0);
        os_ << ')';
        return;
      case Kind::Fst:
      case Kind::Snd:
        print(t->arg(0), 3);
        os_ << (t->kind == Kind::Fst ? " .1" : " .2");
        return;
      case Kind::Id:
        os_ << "Id ";
        print(t->arg(0), 3);
        os_ << ' ';
        print(t->arg(1), 3);
        os_ << ' ';
        print(t->arg(2), 3);
        return;
      case Kind::Refl:
        os_ << "refl ";
        print(t->arg(0), 3);
        return;
      case Kind::J: {
        TermPtr motive = t->arg(0);
        std::string x = safe_binder(t->binders[0], {&motive});
        std::string y = safe_binder(t->binders[1], {&motive});
        std::string p = safe_binder(t->binders[2], {&motive});
        os_ << "J (" << binder_text(x) << ' ' << binder_text(y) << ' ' << binder_text(p) << " => ";
        print(motive, 0);
        os_ << ") ";
        print(t->arg(1), 3);
        os_ << ' ';
        print(t->arg(2), 3);
        return;
      }
      case Kind::Flat:
      case Kind::Sharp:
        os_ << (t->kind == Kind::Flat ? "flat" : "sharp") << lat_.render(t->focus) << ' ';
        print(t->arg(0), 3);
        return;
      case Kind::FlatIntro:
      case Kind::SharpIntro:
      case Kind::SharpElim:
        print(t->arg(0), 3);
        os_ << (t->kind == Kind::FlatIntro    ? " .flat"
                : t->kind == Kind::SharpIntro ? " .sharp"
                                              : " .unsharp")
            << lat_.render(t->focus);
        return;
      case Kind::FlatElim: {
        TermPtr motive = t->arg(0);
        TermPtr branch = t->arg(2);
        std::string u = binder_text(safe_binder(t->binders[1], {&branch}));
        os_ << "let flat" << lat_.render(t->focus) << ' ' << u << " := ";
        print(t->arg(1), 1);
        if (!t->crisp.is_top()) os_ << " @" << lat_.render(t->crisp);
        if (motive) {
          std::string x = binder_text(safe_binder(t->binders[0], {&motive}));
          os_ << " as " << x << " => ";
          print(motive, 0);
        }
        os_ << " in ";
        print(branch, 0);
        return;
      }
    }
  }

  const FocusLattice& lat_;
  std::ostringstream os_;
};

}  // namespace

std::string pretty(const TermPtr& t, const FocusLattice& lattice) {
  if (!t) return "<none>";
  Printer p(lattice);
  p.print(t, 0);
  return p.str();
}

}  // namespace focal
