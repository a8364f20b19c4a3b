#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "focal/focus.hpp"
#include "focal/term.hpp"

namespace focal {

/// A postulate (body == nullptr) or a checked definition.
struct SignatureEntry {
  std::string name;
  TermPtr type;
  TermPtr body;
  Span span;

  bool is_postulate() const { return body == nullptr; }
};

/// The focus lattice plus the ordered list of checked global entries.
/// Only the kernel appends (after checking), so every entry's type and body
/// are well-formed over the entries before it.
class Signature {
 public:
  Signature() = default;
  explicit Signature(FocusLattice lattice) : lattice_(std::move(lattice)) {}

  const FocusLattice& lattice() const { return lattice_; }
  const std::vector<SignatureEntry>& entries() const { return entries_; }

  const SignatureEntry* lookup(std::string_view name) const;
  bool contains(std::string_view name) const { return lookup(name) != nullptr; }

  /// Unchecked append; callers go through kernel::check_declaration.
  void append_unchecked(SignatureEntry e);

 private:
  FocusLattice lattice_;
  std::vector<SignatureEntry> entries_;
  std::unordered_map<std::string, std::size_t> index_;
};

}  // namespace focal
