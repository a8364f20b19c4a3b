#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace focal {

/// An element of a focus lattice: the set of basic focuses it contains,
/// stored as a bitmask over the lattice's generators. The empty set is the
/// top focus, and the monoid product is set union.
///
/// A Focus is only meaningful relative to the FocusLattice that produced it;
/// the lattice keeps every value it hands out upward-closed.
class Focus {
 public:
  constexpr Focus() = default;
  constexpr explicit Focus(std::uint64_t members) : members_(members) {}

  constexpr std::uint64_t members() const { return members_; }
  constexpr bool is_top() const { return members_ == 0; }
  constexpr bool contains(std::size_t generator) const {
    return (members_ >> generator) & 1U;
  }

  friend constexpr bool operator==(Focus, Focus) = default;
  friend constexpr auto operator<=>(Focus, Focus) = default;

 private:
  std::uint64_t members_ = 0;
};

class LatticeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A finitely presented commutative idempotent monoid of focuses.
///
/// Generators are the basic focuses; each relation `g <= h` asserts
/// g·h = g. Elements are represented by their largest representative, the
/// upward closure of a generator set under the declared order, so equality
/// of elements is equality of bitmasks.
class FocusLattice {
 public:
  static constexpr std::size_t kMaxGenerators = 64;

  FocusLattice() = default;

  /// Throws LatticeError on duplicate generators, unknown relation endpoints,
  /// or more than kMaxGenerators generators.
  static FocusLattice declare(
      std::vector<std::string> generators,
      const std::vector<std::pair<std::string, std::string>>& relations);

  const std::vector<std::string>& generators() const { return generators_; }
  std::size_t size() const { return generators_.size(); }
  std::optional<std::size_t> index_of(std::string_view name) const;

  /// Reflexive-transitive closure of the declared relations.
  bool generator_leq(std::size_t g, std::size_t h) const {
    return (up_[g] >> h) & 1U;
  }
  const std::vector<std::pair<std::string, std::string>>& relations() const {
    return relations_;
  }

  Focus top() const { return Focus{}; }
  Focus generator(std::size_t i) const { return Focus{up_.at(i)}; }
  std::optional<Focus> generator(std::string_view name) const;

  /// Upward closure of an arbitrary generator set.
  Focus canonicalize(std::uint64_t members) const;
  bool is_canonical(Focus f) const;

  Focus meet(Focus f, Focus g) const {
    return Focus{f.members() | g.members()};
  }
  /// f <= g iff f·g = f, i.e. g's members are a subset of f's.
  bool leq(Focus f, Focus g) const {
    return (g.members() & ~f.members()) == 0;
  }

  /// All canonical elements, ordered by bitmask (top first).
  std::vector<Focus> elements() const;

  /// `{g1 g2}` listing a minimal set of generators whose meet is f; `{}` is
  /// top. The result reparses to f.
  std::string render(Focus f) const;

 private:
  std::vector<std::string> generators_;
  std::vector<std::pair<std::string, std::string>> relations_;
  // up_[g]: bitmask of every h with g <= h (including g itself).
  std::vector<std::uint64_t> up_;
  std::uint64_t all_ = 0;
};

}  // namespace focal
