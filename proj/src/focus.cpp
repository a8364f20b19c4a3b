#include "focal/focus.hpp"

#include <algorithm>
#include <bit>
#include <sstream>

namespace focal {

FocusLattice FocusLattice::declare(
    std::vector<std::string> generators,
    const std::vector<std::pair<std::string, std::string>>& relations) {
  if (generators.size() > kMaxGenerators) {
    throw LatticeError("too many basic focuses (at most 64 are supported)");
  }
  FocusLattice lattice;
  for (std::size_t i = 0; i < generators.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      if (generators[i] == generators[j]) {
        throw LatticeError("duplicate basic focus '" + generators[i] + "'");
      }
    }
  }
  lattice.generators_ = std::move(generators);
  const std::size_t n = lattice.generators_.size();
  lattice.up_.assign(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    lattice.up_[i] = std::uint64_t{1} << i;
  }
  lattice.all_ = n == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1;

  for (const auto& [lo, hi] : relations) {
    auto g = lattice.index_of(lo);
    auto h = lattice.index_of(hi);
    if (!g) throw LatticeError("unknown basic focus '" + lo + "' in relation");
    if (!h) throw LatticeError("unknown basic focus '" + hi + "' in relation");
    lattice.up_[*g] |= std::uint64_t{1} << *h;
    lattice.relations_.emplace_back(lo, hi);
  }

  // Warshall on the bitmask rows.
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t i = 0; i < n; ++i) {
      if ((lattice.up_[i] >> k) & 1U) lattice.up_[i] |= lattice.up_[k];
    }
  }
  return lattice;
}

std::optional<std::size_t> FocusLattice::index_of(std::string_view name) const {
  for (std::size_t i = 0; i < generators_.size(); ++i) {
    if (generators_[i] == name) return i;
  }
  return std::nullopt;
}

std::optional<Focus> FocusLattice::generator(std::string_view name) const {
  if (auto i = index_of(name)) return generator(*i);
  return std::nullopt;
}

Focus FocusLattice::canonicalize(std::uint64_t members) const {
  std::uint64_t closed = members & all_;
  for (std::size_t i = 0; i < up_.size(); ++i) {
    if ((members >> i) & 1U) closed |= up_[i];
  }
  return Focus{closed};
}

bool FocusLattice::is_canonical(Focus f) const {
  if ((f.members() & ~all_) != 0) return false;
  return canonicalize(f.members()) == f;
}

std::vector<Focus> FocusLattice::elements() const {
  if (size() > 20) {
    throw LatticeError("refusing to enumerate a lattice with more than 20 basic focuses");
  }
  std::vector<Focus> out;
  const std::uint64_t count = std::uint64_t{1} << size();
  for (std::uint64_t mask = 0; mask < count; ++mask) {
    if (canonicalize(mask).members() == mask) out.emplace_back(mask);
  }
  return out;
}

std::string FocusLattice::render(Focus f) const {
  std::vector<std::size_t> chosen;
  std::uint64_t remaining = f.members() & all_;
  while (remaining != 0) {
    std::size_t best = 0;
    int best_cover = -1;
    for (std::size_t g = 0; g < size(); ++g) {
      if (!((remaining >> g) & 1U)) continue;
      int cover = std::popcount(up_[g] & f.members());
      if (cover > best_cover) {
        best = g;
        best_cover = cover;
      }
    }
    chosen.push_back(best);
    remaining &= ~up_[best];
  }
  std::sort(chosen.begin(), chosen.end());
  std::ostringstream os;
  os << '{';
  for (std::size_t i = 0; i < chosen.size(); ++i) {
    if (i) os << ' ';
    os << generators_[chosen[i]];
  }
  os << '}';
  return os.str();
}

}  // namespace focal
