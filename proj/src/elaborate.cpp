#include <algorithm>

#include "focal/surface.hpp"

namespace focal {

namespace {

[[noreturn]] void resolve_error(std::string_view code, std::string message, Span span) {
  throw TypeError(Diagnostic{std::string(code), std::move(message), "", span, std::nullopt});
}

Focus resolve_focus(const RawFocus& f, const FocusLattice& lattice) {
  std::uint64_t mask = 0;
  for (const auto& n : f.names) {
    auto g = lattice.generator(n);
    if (!g) resolve_error(code::kBadFocus, "unknown focus '" + n + "'", f.span);
    mask |= g->members();
  }
  return lattice.canonicalize(mask);
}

// Binder indices scoping each child, mirroring Term::scope.
std::vector<std::size_t> raw_scope(Kind k, std::size_t child) {
  switch (k) {
    case Kind::Pi:
    case Kind::Sigma:
    case Kind::Lam:
      if (child == 1) return {0};
      break;
    case Kind::J:
      if (child == 0) return {0, 1, 2};
      break;
    case Kind::FlatElim:
      if (child == 0) return {0};
      if (child == 2) return {1};
      break;
    default:
      break;
  }
  return {};
}

class Resolver {
 public:
  Resolver(const Signature& sig, std::vector<std::string> locals)
      : sig_(sig), locals_(std::move(locals)) {}

  TermPtr run(const RawPtr& r) {
    if (!r) return nullptr;
    const FocusLattice& lat = sig_.lattice();
    if (r->kind == Kind::Var) {
      if (std::find(locals_.rbegin(), locals_.rend(), r->name) != locals_.rend()) {
        return mk::var(r->name, r->span);
      }
      if (sig_.contains(r->name)) return mk::constant(r->name, r->span);
      resolve_error(code::kUnboundOrNotCrisp, "unknown name '" + r->name + "'", r->span);
    }
    std::vector<TermPtr> args;
    for (std::size_t i = 0; i < r->args.size(); ++i) {
      auto bound = raw_scope(r->kind, i);
      for (std::size_t b : bound) locals_.push_back(r->binders[b]);
      args.push_back(run(r->args[i]));
      locals_.resize(locals_.size() - bound.size());
    }
    Focus focus = r->focus.names.empty() ? Focus{} : resolve_focus(r->focus, lat);
    Focus crisp = r->crisp.names.empty() ? Focus{} : resolve_focus(r->crisp, lat);
    return std::make_shared<const Term>(r->kind, r->name, r->level, focus, crisp, r->binders,
                                        std::move(args), r->span);
  }

 private:
  const Signature& sig_;
  std::vector<std::string> locals_;
};

}  // namespace

TermPtr resolve(const RawPtr& raw, const Signature& sig, const std::vector<std::string>& locals) {
  return Resolver(sig, locals).run(raw);
}

TermPtr elaborate_term(std::string_view text, const Signature& sig,
                       const std::vector<std::string>& locals) {
  return resolve(parse_term(text), sig, locals);
}

ElabResult elaborate(const std::vector<RawDecl>& decls, KernelOptions opts,
                     const std::vector<std::string>& files) {
  auto file_of = [&](std::size_t i) { return i < files.size() ? files[i] : std::string(); };
  std::vector<Diagnostic> diags;

  // Focus declarations come first; collect them up to the first term decl.
  std::vector<std::string> generators;
  std::vector<std::pair<std::string, std::string>> relations;
  std::size_t first_term = decls.size();
  for (std::size_t i = 0; i < decls.size(); ++i) {
    const RawDecl& d = decls[i];
    if (d.tag != RawDecl::Tag::Focus) {
      first_term = i;
      break;
    }
    for (const auto& g : d.generators) {
      if (std::find(generators.begin(), generators.end(), g) != generators.end()) {
        diags.push_back({std::string(code::kBadFocus), "focus '" + g + "' is declared twice",
                         file_of(i), d.span, std::nullopt});
        continue;
      }
      generators.push_back(g);
    }
    for (const auto& [lo, hi] : d.relations) {
      for (const auto& g : {lo, hi}) {
        if (std::find(generators.begin(), generators.end(), g) == generators.end()) {
          generators.push_back(g);
        }
      }
      relations.emplace_back(lo, hi);
    }
  }

  FocusLattice lattice;
  try {
    lattice = FocusLattice::declare(generators, relations);
  } catch (const LatticeError& err) {
    diags.push_back({std::string(code::kBadFocus), err.what(), file_of(0), Span{}, std::nullopt});
  }

  ElabResult out{Signature(std::move(lattice)), std::move(diags)};
  for (std::size_t i = first_term; i < decls.size(); ++i) {
    const RawDecl& d = decls[i];
    if (d.tag == RawDecl::Tag::Focus) {
      out.diagnostics.push_back({std::string(code::kLateFocus),
                                 "focus declarations must precede all postulates and definitions",
                                 file_of(i), d.span, std::nullopt});
      continue;
    }
    if (out.signature.contains(d.name)) {
      out.diagnostics.push_back({std::string(code::kDuplicate),
                                 "'" + d.name + "' is already declared", file_of(i), d.span,
                                 std::nullopt});
      continue;
    }
    Declaration decl{d.name, nullptr, nullptr, d.span, file_of(i)};
    try {
      decl.type = resolve(d.type, out.signature);
      if (d.body) decl.body = resolve(d.body, out.signature);
    } catch (TypeError& err) {
      Diagnostic diag = err.diagnostic();
      diag.file = decl.file;
      if (!diag.span.valid()) diag.span = d.span;
      out.diagnostics.push_back(std::move(diag));
      continue;
    }
    if (auto diag = check_declaration(out.signature, decl, opts)) {
      out.diagnostics.push_back(std::move(*diag));
    }
  }
  return out;
}

ElabResult check_sources(const std::vector<Source>& sources, KernelOptions opts) {
  std::vector<RawDecl> decls;
  std::vector<std::string> files;
  std::vector<Diagnostic> parse_diags;
  for (const auto& src : sources) {
    ParseResult pr = parse_file(src.text, src.name);
    for (auto& d : pr.decls) {
      decls.push_back(std::move(d));
      files.push_back(src.name);
    }
    for (auto& d : pr.diagnostics) parse_diags.push_back(std::move(d));
  }
  ElabResult out = elaborate(decls, opts, files);
  out.diagnostics.insert(out.diagnostics.begin(), parse_diags.begin(), parse_diags.end());
  return out;
}

}  // namespace focal
