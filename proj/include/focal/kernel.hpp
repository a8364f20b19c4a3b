#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "focal/context.hpp"
#include "focal/diagnostic.hpp"
#include "focal/signature.hpp"
#include "focal/term.hpp"

namespace focal {

struct KernelOptions {
  /// Eta for Pi and Sigma in conversion. Sharp eta is part of the theory and
  /// is always on.
  bool eta_pi_sigma = true;
};

/// The ambient state of every judgment: a signature and a context that is
/// well-formed over it.
struct CheckState {
  const Signature* signature = nullptr;
  Context context;
  KernelOptions options;

  const FocusLattice& lattice() const { return signature->lattice(); }
  CheckState with_context(Context c) const { return {signature, std::move(c), options}; }
};

/// Records the reduction rules fired by whnf / normalize.
struct ReductionTrace {
  std::vector<std::string> steps;
  std::size_t count(std::string_view rule) const;
};

inline constexpr std::string_view kBetaPi = "beta-pi";
inline constexpr std::string_view kBetaSigma = "beta-sigma";
inline constexpr std::string_view kBetaJ = "beta-J";
inline constexpr std::string_view kBetaFlat = "beta-flat";
inline constexpr std::string_view kBetaSharp = "beta-sharp";
inline constexpr std::string_view kDelta = "delta";

/// Weak-head normal form: beta for Pi, Sigma, J, flat and sharp, and
/// unfolding of definitions in head position.
TermPtr whnf(const Signature& sig, const TermPtr& t, ReductionTrace* trace = nullptr);
/// As whnf, but never unfolds definitions.
TermPtr whnf_no_delta(const Signature& sig, const TermPtr& t,
                      ReductionTrace* trace = nullptr);
/// Full normal form (whnf iterated under binders). Terminates on well-typed
/// input.
TermPtr normalize(const Signature& sig, const TermPtr& t, ReductionTrace* trace = nullptr);

/// Returns the universe level of the type `A`.
unsigned check_type(const CheckState& st, const TermPtr& A);
TermPtr infer(const CheckState& st, const TermPtr& t);
void check(const CheckState& st, const TermPtr& t, const TermPtr& A);

/// Type-directed definitional equality of `a` and `b` at type `A`.
bool convertible(const CheckState& st, const TermPtr& a, const TermPtr& b,
                 const TermPtr& A);
bool convertible_types(const CheckState& st, const TermPtr& A, const TermPtr& B);

/// Checks every entry against rule ctx-ext. Throws TypeError.
void check_context(const Signature& sig, const Context& ctx, KernelOptions opts = {});

/// Rule subst with its crispness premise enforced. For ctx = G1, x :_f S, G2,
/// checks `s : S` in divide(f, G1) and returns G1, G2[s/x]. A term that is
/// well-typed in G1 but not f-crisp is rejected with E006.
Context crisp_substitute(const Signature& sig, const Context& ctx, std::string_view x,
                         const TermPtr& s, KernelOptions opts = {});

struct Declaration {
  std::string name;
  TermPtr type;
  TermPtr body;  // null for a postulate
  Span span;
  std::string file;
};

/// Checks one declaration in the empty context and appends it on success.
std::optional<Diagnostic> check_declaration(Signature& sig, const Declaration& d,
                                            KernelOptions opts = {});

struct SignatureResult {
  Signature signature;
  std::vector<Diagnostic> diagnostics;
};

/// Checks declarations in order; failed entries are reported and skipped.
SignatureResult check_signature(FocusLattice lattice,
                                const std::vector<Declaration>& decls,
                                KernelOptions opts = {});

}  // namespace focal
