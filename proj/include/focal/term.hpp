#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "focal/focus.hpp"

namespace focal {

/// Source range, 1-based lines and columns; end is exclusive. A default
/// constructed span (line 0) means "no source position".
struct Span {
  int start_line = 0;
  int start_col = 0;
  int end_line = 0;
  int end_col = 0;

  bool valid() const { return start_line > 0; }
  friend bool operator==(const Span&, const Span&) = default;
};

enum class Kind : std::uint8_t {
  Var,
  Const,
  Universe,
  Pi,
  Lam,
  App,
  Sigma,
  Pair,
  Fst,
  Snd,
  Id,
  Refl,
  J,
  Flat,
  FlatIntro,
  FlatElim,
  Sharp,
  SharpIntro,
  SharpElim,
};

std::string_view kind_name(Kind k);

class Term;
using TermPtr = std::shared_ptr<const Term>;

/// Core syntax. Terms are immutable and shared; binders are named and
/// compared up to renaming.
///
/// Layout of `binders` and `args` per kind (a null arg is an absent
/// optional):
///
///   Pi, Sigma   binders {x}        args {domain, codomain}    codomain under x
///   Lam         binders {x}        args {domain?, body}       body under x
///   App         args {fun, arg}
///   Pair        args {first, second};  Fst, Snd  args {pair}
///   Id          args {type, lhs, rhs}; Refl      args {term}
///   J           binders {x, y, p}  args {motive, refl_case, path}
///                                  motive under x, y, p
///   Flat, Sharp args {type};  FlatIntro, SharpIntro, SharpElim  args {term}
///   FlatElim    binders {x, u}     args {motive?, scrutinee, branch}
///                                  motive under x, branch under u
///
/// `focus` is the modality's focus; `crisp` is the crispness focus of a
/// FlatElim. The cached free-variable list is sorted and unique.
class Term {
 public:
  Kind kind;
  std::string name;  // Var, Const
  unsigned level = 0;  // Universe
  Focus focus;
  Focus crisp;
  std::vector<std::string> binders;
  std::vector<TermPtr> args;
  Span span;

  const std::vector<std::string>& free_vars() const { return free_vars_; }
  bool has_free(std::string_view x) const;
  std::size_t size() const { return size_; }

  /// Which binders scope over args[child].
  std::span<const std::size_t> scope(std::size_t child) const;

  const TermPtr& arg(std::size_t i) const { return args[i]; }

  Term(Kind k, std::string nm, unsigned lvl, Focus f, Focus c,
       std::vector<std::string> bs, std::vector<TermPtr> as, Span sp);

 private:
  std::vector<std::string> free_vars_;
  std::size_t size_ = 1;
};

/// Copy of `t` with new children (same kind, foci, binder names, span).
TermPtr rebuild(const Term& t, std::vector<TermPtr> args);
TermPtr rebuild(const Term& t, std::vector<std::string> binders,
                std::vector<TermPtr> args);
TermPtr with_span(const TermPtr& t, Span span);

namespace mk {
TermPtr var(std::string x, Span sp = {});
TermPtr constant(std::string c, Span sp = {});
TermPtr universe(unsigned level, Span sp = {});
TermPtr pi(std::string x, TermPtr dom, TermPtr cod, Span sp = {});
TermPtr arrow(TermPtr dom, TermPtr cod, Span sp = {});
TermPtr lam(std::string x, TermPtr body, Span sp = {});
TermPtr lam(std::string x, TermPtr dom, TermPtr body, Span sp = {});
TermPtr app(TermPtr f, TermPtr a, Span sp = {});
TermPtr app(TermPtr f, std::initializer_list<TermPtr> as);
TermPtr sigma(std::string x, TermPtr a, TermPtr b, Span sp = {});
TermPtr pair(TermPtr a, TermPtr b, Span sp = {});
TermPtr fst(TermPtr p, Span sp = {});
TermPtr snd(TermPtr p, Span sp = {});
TermPtr id(TermPtr type, TermPtr lhs, TermPtr rhs, Span sp = {});
TermPtr refl(TermPtr a, Span sp = {});
TermPtr j(std::string x, std::string y, std::string p, TermPtr motive,
          TermPtr refl_case, TermPtr path, Span sp = {});
TermPtr flat(Focus f, TermPtr a, Span sp = {});
TermPtr flat_intro(Focus f, TermPtr m, Span sp = {});
/// `motive` may be null, in which case `motive_binder` is ignored.
TermPtr flat_elim(Focus f, Focus crisp, std::string motive_binder,
                  TermPtr motive, TermPtr scrutinee, std::string u,
                  TermPtr branch, Span sp = {});
TermPtr sharp(Focus f, TermPtr a, Span sp = {});
TermPtr sharp_intro(Focus f, TermPtr m, Span sp = {});
TermPtr sharp_elim(Focus f, TermPtr n, Span sp = {});
}  // namespace mk

/// Equality up to consistent renaming of bound variables. Lambda domain
/// annotations and FlatElim motives are compared too.
bool alpha_equal(const TermPtr& a, const TermPtr& b);

std::vector<std::string> free_variables(const TermPtr& t);

/// Every focus that occurs anywhere in `t`.
std::vector<Focus> foci_of(const TermPtr& t);

}  // namespace focal
