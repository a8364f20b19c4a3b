#include "focal/signature.hpp"

#include <stdexcept>

namespace focal {

const SignatureEntry* Signature::lookup(std::string_view name) const {
  auto it = index_.find(std::string(name));
  return it == index_.end() ? nullptr : &entries_[it->second];
}

void Signature::append_unchecked(SignatureEntry e) {
  if (index_.contains(e.name)) {
    throw std::invalid_argument("duplicate signature entry '" + e.name + "'");
  }
  index_.emplace(e.name, entries_.size());
  entries_.push_back(std::move(e));
}

}  // namespace focal
