#include "focal/context.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

#include "focal/kernel.hpp"
#include "focal/surface.hpp"

namespace focal {

bool operator==(const ContextEntry& a, const ContextEntry& b) {
  return a.name == b.name && a.annotation == b.annotation &&
         alpha_equal(a.type, b.type);
}

Context::Context(std::vector<ContextEntry> entries) : entries_(std::move(entries)) {}

const ContextEntry* Context::lookup(std::string_view x) const {
  for (auto it = entries_.rbegin(); it != entries_.rend(); ++it) {
    if (it->name == x) return &*it;
  }
  return nullptr;
}

bool Context::was_divided_away(std::string_view x) const {
  return std::find(divided_away_.begin(), divided_away_.end(), x) !=
         divided_away_.end();
}

bool Context::name_in_use(std::string_view x) const {
  return contains(x) || was_divided_away(x);
}

Context Context::pushed(std::string x, Focus f, TermPtr type) const {
  Context out = *this;
  out.entries_.push_back({std::move(x), f, std::move(type)});
  return out;
}

std::string Context::render(const FocusLattice& lattice) const {
  std::ostringstream os;
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    const auto& e = entries_[i];
    if (i) os << ", ";
    os << e.name << " :";
    if (!e.annotation.is_top()) os << '_' << lattice.render(e.annotation);
    os << ' ' << pretty(e.type, lattice);
  }
  return os.str();
}

Context promote(Focus f, const Context& ctx) {
  Context out = ctx;
  for (auto& e : out.entries_) e.annotation = Focus{e.annotation.members() | f.members()};
  return out;
}

Context divide(const FocusLattice& lattice, Focus f, const Context& ctx) {
  Context out;
  out.divided_away_ = ctx.divided_away_;
  for (const auto& e : ctx.entries_) {
    if (lattice.leq(e.annotation, f)) {
      out.entries_.push_back(e);
    } else {
      out.divided_away_.push_back(e.name);
    }
  }
  return out;
}

bool is_crisp(const FocusLattice& lattice, const Context& ctx, std::string_view x,
              Focus f) {
  const ContextEntry* e = ctx.lookup(x);
  if (!e) throw std::out_of_range("unbound variable '" + std::string(x) + "'");
  return lattice.leq(e->annotation, f);
}

Focus crispness_of(const FocusLattice& lattice, const Context& ctx, const TermPtr& t) {
  Focus out = lattice.top();
  for (const auto& v : t->free_vars()) {
    const ContextEntry* e = ctx.lookup(v);
    if (!e) throw std::out_of_range("unbound variable '" + v + "'");
    out = lattice.meet(out, e->annotation);
  }
  return out;
}

Context extend(const Signature& sig, const Context& ctx, std::string x, Focus f,
               const TermPtr& type) {
  if (ctx.contains(x)) {
    throw std::invalid_argument("name clash: '" + x + "' is already bound");
  }
  CheckState divided{&sig, divide(sig.lattice(), f, ctx), {}};
  try {
    check_type(divided, type);
  } catch (TypeError& err) {
    bool well_formed_undivided = true;
    try {
      check_type(CheckState{&sig, ctx, {}}, type);
    } catch (const TypeError&) {
      well_formed_undivided = false;
    }
    if (!well_formed_undivided) throw;
    auto& d = err.diagnostic();
    d.code = std::string(code::kUnboundOrNotCrisp);
    d.message = "type not " + sig.lattice().render(f) + "-crisp: " + d.message;
    throw;
  }
  return ctx.pushed(std::move(x), f, type);
}

bool is_subsequence(const Context& sub, const Context& super) {
  const auto& small = sub.entries();
  const auto& big = super.entries();
  std::size_t j = 0;
  for (const auto& e : small) {
    while (j < big.size() && !(big[j] == e)) ++j;
    if (j == big.size()) return false;
    ++j;
  }
  return true;
}

}  // namespace focal
