#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <map>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "focal/context.hpp"
#include "focal/kernel.hpp"
#include "focal/signature.hpp"

namespace focal {

/// Builds a lattice from a compact description: generator names separated by
/// commas, where an item `a<=b` also declares a relation. "" is trivial.
/// Throws LatticeError.
FocusLattice lattice_from_spec(std::string_view spec);

struct GenConfig {
  std::uint64_t seed = 1;
  std::size_t max_context_depth = 5;
  std::size_t max_term_size = 8;
  FocusLattice lattice;
};

/// The postulates every generated term may use:
///   A B : Type 0, a0 : A, b0 : B, P : A -> Type 0, p0 : P a0, g : A -> B.
Signature prelude_signature(const FocusLattice& lattice);

struct Generated {
  Context context;
  TermPtr term;
  TermPtr type;
};

class GenerationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Rule-directed generation: each step applies a typing rule whose side
/// conditions hold by construction, so the result checks.
class Generator {
 public:
  Generator(const Signature& sig, const GenConfig& cfg);

  /// A well-formed context with at most max_context_depth entries.
  Context context();
  /// A type of level 0 that is well-formed in `ctx`.
  TermPtr type(const Context& ctx, int size);
  /// A term of type `goal`, or nullptr when this attempt found none.
  TermPtr term(const Context& ctx, const TermPtr& goal, int size);
  /// Context, term and type; throws GenerationError after repeated failure.
  Generated triple();

  Focus focus();
  std::mt19937_64& rng() { return rng_; }
  /// When set, every lambda carries its domain, so the term also infers.
  void set_annotate_lambdas(bool on) { annotate_ = on; }

 private:
  std::string fresh(const Context& ctx, std::string_view base);
  bool coin(double p);
  std::size_t below(std::size_t n);
  CheckState state(const Context& ctx) const { return {sig_, ctx, {}}; }
  bool same_type(const Context& ctx, const TermPtr& a, const TermPtr& b) const;
  TermPtr intro(const Context& ctx, const TermPtr& goal, int size);

  const Signature* sig_;
  GenConfig cfg_;
  std::mt19937_64 rng_;
  std::vector<Focus> elements_;
  bool annotate_ = false;
};

/// One-shot form of Generator::triple.
Generated gen_wellformed(const Signature& sig, const GenConfig& cfg);

struct PropertyFailure {
  std::string property;
  std::uint64_t seed = 0;
  std::string code;
  std::string message;
  Context context;  // shrunk
  TermPtr term;
  TermPtr type;
};

struct PropertyReport {
  std::size_t cases = 0;
  std::map<std::string, std::pair<std::size_t, std::size_t>> counts;  // passed, failed
  std::vector<PropertyFailure> failures;
  std::size_t generation_failures = 0;

  bool ok() const { return failures.empty() && generation_failures == 0; }
  void record(const std::string& property, bool passed);
  std::string render(const FocusLattice& lattice) const;
};

/// The failure code of a replayed property on a context, or nullopt when it
/// holds.
using Replay = std::function<std::optional<std::string>(const Context&)>;

/// Drops context entries one at a time, keeping a removal only when the
/// replay still fails with `code`.
Context shrink_context(const Context& ctx, const std::string& code, const Replay& replay);

/// Weakening, promotion, divide-weakening, crisp substitution (and its E006
/// rejection), both context equations and pro-divide-wk, over `n` generated
/// derivations. Case i uses seed cfg.seed + i.
PropertyReport run_admissibility(const GenConfig& cfg, std::size_t n);

/// convertible(N, (N .unsharp) .sharp) for generated inhabitants of sharp
/// types.
PropertyReport run_sharp_eta(const GenConfig& cfg, std::size_t n);

/// Reflexivity, symmetry, transitivity and App/Pair congruence of conversion
/// and idempotence of whnf.
PropertyReport run_conversion_laws(const GenConfig& cfg, std::size_t n);

/// parse(pretty(t)) is alpha-equal to t for generated terms and types.
PropertyReport run_round_trip(const GenConfig& cfg, std::size_t n);

}  // namespace focal
