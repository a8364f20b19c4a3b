#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "focal/focus.hpp"
#include "focal/term.hpp"

namespace focal {

class Signature;

/// One telescope entry `x :_f A`.
struct ContextEntry {
  std::string name;
  Focus annotation;
  TermPtr type;
};

bool operator==(const ContextEntry& a, const ContextEntry& b);

/// A focus-annotated telescope. Values are immutable snapshots: promotion,
/// division and extension return new contexts.
///
/// Division also records the names it deleted, so that a lookup failure can
/// tell "not crisp here" apart from "unbound".
class Context {
 public:
  Context() = default;
  explicit Context(std::vector<ContextEntry> entries);

  const std::vector<ContextEntry>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }

  const ContextEntry* lookup(std::string_view x) const;
  bool contains(std::string_view x) const { return lookup(x) != nullptr; }
  /// True when `x` was deleted by a division on the way to this context.
  bool was_divided_away(std::string_view x) const;
  /// True for names of entries and of divided-away entries.
  bool name_in_use(std::string_view x) const;

  /// Appends without any well-formedness check (see `extend`).
  Context pushed(std::string x, Focus f, TermPtr type) const;

  /// Structural equality of the entry lists (names, annotations, and
  /// alpha-equal types).
  friend bool operator==(const Context& a, const Context& b) {
    return a.entries_ == b.entries_;
  }

  std::string render(const FocusLattice& lattice) const;

 private:
  friend Context promote(Focus f, const Context& ctx);
  friend Context divide(const FocusLattice& lattice, Focus f, const Context& ctx);

  std::vector<ContextEntry> entries_;
  std::vector<std::string> divided_away_;
};

/// Meets every annotation with `f`; types are unchanged.
Context promote(Focus f, const Context& ctx);

/// Keeps exactly the entries whose annotation is <= `f`, in order.
Context divide(const FocusLattice& lattice, Focus f, const Context& ctx);

/// Whether `x` survives `divide(f, ctx)`. Throws std::out_of_range when `x`
/// is not bound in `ctx`.
bool is_crisp(const FocusLattice& lattice, const Context& ctx, std::string_view x,
              Focus f);

/// The meet of the annotations of the free variables of `t`: the least
/// focus for which `t` is crisp. Top for closed terms. Throws
/// std::out_of_range for a free variable not bound in `ctx`.
Focus crispness_of(const FocusLattice& lattice, const Context& ctx, const TermPtr& t);

/// Checked extension (rule ctx-ext): `type` must be a type in
/// `divide(f, ctx)`. Throws TypeError (E001 when `type` mentions a variable
/// that is not f-crisp) and std::invalid_argument on a name clash.
Context extend(const Signature& sig, const Context& ctx, std::string x, Focus f,
               const TermPtr& type);

/// Whether `sub` is a subsequence of `super` with identical entries.
bool is_subsequence(const Context& sub, const Context& super);

}  // namespace focal
