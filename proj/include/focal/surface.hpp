#pragma once

#include <memory>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "focal/diagnostic.hpp"
#include "focal/kernel.hpp"
#include "focal/signature.hpp"
#include "focal/term.hpp"

namespace focal {

/// A written focus set `{a b}`; names are resolved during elaboration.
struct RawFocus {
  std::vector<std::string> names;
  Span span;
};

class RawTerm;
using RawPtr = std::shared_ptr<const RawTerm>;

/// Surface syntax. Same kinds and child layout as Term, except that names
/// are unresolved (Kind::Var covers both locals and constants) and foci are
/// written sets. Multi-binder sugar is already expanded by the parser.
class RawTerm {
 public:
  Kind kind = Kind::Var;
  std::string name;
  unsigned level = 0;
  RawFocus focus;
  RawFocus crisp;  // FlatElim only; empty names means top
  std::vector<std::string> binders;
  std::vector<RawPtr> args;
  Span span;
};

struct RawDecl {
  enum class Tag { Focus, Postulate, Definition };
  Tag tag = Tag::Postulate;
  // Focus
  std::vector<std::string> generators;
  std::vector<std::pair<std::string, std::string>> relations;
  // Postulate / Definition
  std::string name;
  RawPtr type;
  RawPtr body;
  Span span;
};

struct ParseResult {
  std::vector<RawDecl> decls;
  std::vector<Diagnostic> diagnostics;
};

/// Parses a whole `.fcl` file. A syntax error skips to the next `;`.
ParseResult parse_file(std::string_view text, const std::string& file = "");

/// Parses a single term; the whole input must be consumed. Throws TypeError
/// (E100/E101).
RawPtr parse_term(std::string_view text);

struct ElabResult {
  Signature signature;
  std::vector<Diagnostic> diagnostics;
};

/// Builds the lattice from the focus declarations, then resolves and checks
/// each postulate and definition in order. Files are tagged per declaration
/// through `files`, which is parallel to `decls` (or empty).
ElabResult elaborate(const std::vector<RawDecl>& decls, KernelOptions opts = {},
                     const std::vector<std::string>& files = {});

/// Resolves one raw term: `locals` (innermost last) shadow constants of
/// `sig`. Throws TypeError (E001 unknown name, E005 unknown focus).
TermPtr resolve(const RawPtr& raw, const Signature& sig,
                const std::vector<std::string>& locals = {});

/// Parses and resolves a single term. Throws TypeError (E100/E101 on syntax).
TermPtr elaborate_term(std::string_view text, const Signature& sig,
                       const std::vector<std::string>& locals = {});

struct Source {
  std::string name;
  std::string text;
};

/// Parses every source and elaborates the concatenation in order.
ElabResult check_sources(const std::vector<Source>& sources, KernelOptions opts = {});

/// Concrete syntax that parses back (with the same constants and locals in
/// scope) to an alpha-equal term.
std::string pretty(const TermPtr& t, const FocusLattice& lattice);

}  // namespace focal
