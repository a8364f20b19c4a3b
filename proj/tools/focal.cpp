// focal: check, evaluate and inspect .fcl proof files.

#include <cstdlib>
#include <iostream>
#include <sstream>

#include <unistd.h>

#include <CLI11.hpp>

#include "focal/corpus.hpp"
#include "focal/kernel.hpp"
#include "focal/proplab.hpp"
#include "focal/surface.hpp"

namespace {

using namespace focal;

constexpr int kClean = 0;
constexpr int kDiagnostics = 1;
constexpr int kUsage = 2;

bool use_color() {
  const char* env = std::getenv("FOCAL_COLOR");
  if (env && std::string_view(env) == "0") return false;
  return isatty(2);
}

// Reads every path; on failure prints to stderr and returns nullopt.
std::optional<std::vector<Source>> load(const std::vector<std::string>& paths) {
  std::vector<Source> out;
  for (const auto& p : paths) {
    try {
      out.push_back({p, read_file(p)});
    } catch (const std::exception& err) {
      std::cerr << "focal: " << err.what() << '\n';
      return std::nullopt;
    }
  }
  return out;
}

void report(const std::vector<Diagnostic>& diags, bool json, std::size_t max_errors) {
  bool color = !json && use_color();
  std::size_t shown = 0;
  for (const auto& d : diags) {
    if (max_errors && shown == max_errors) break;
    std::cerr << (json ? format_json(d) : format_human(d, color)) << '\n';
    ++shown;
  }
  if (!json && shown < diags.size()) {
    std::cerr << "(" << diags.size() - shown << " more diagnostics not shown)\n";
  }
}

int cmd_check(const std::vector<std::string>& paths, bool json, bool no_eta,
              std::size_t max_errors) {
  auto sources = load(paths);
  if (!sources) return kUsage;
  ElabResult res = check_sources(*sources, KernelOptions{!no_eta});
  report(res.diagnostics, json, max_errors);
  if (!json) {
    std::cout << res.signature.entries().size() << " declarations checked, "
              << res.diagnostics.size() << " errors\n";
  }
  return res.diagnostics.empty() ? kClean : kDiagnostics;
}

int cmd_eval(const std::string& path, const std::string& name) {
  auto sources = load({path});
  if (!sources) return kUsage;
  ElabResult res = check_sources(*sources);
  report(res.diagnostics, false, 0);
  const SignatureEntry* e = res.signature.lookup(name);
  if (!e) {
    std::cerr << "focal: '" << name << "' is not a checked declaration of " << path << '\n';
    return kDiagnostics;
  }
  TermPtr value = e->is_postulate() ? mk::constant(name) : e->body;
  std::cout << pretty(normalize(res.signature, value), res.signature.lattice()) << '\n';
  return kClean;
}

int cmd_lattice(const std::string& path) {
  auto sources = load({path});
  if (!sources) return kUsage;
  std::vector<RawDecl> decls;
  ParseResult pr = parse_file((*sources)[0].text, path);
  for (auto& d : pr.decls) {
    if (d.tag == RawDecl::Tag::Focus) decls.push_back(std::move(d));
  }
  ElabResult res = elaborate(decls);
  pr.diagnostics.insert(pr.diagnostics.end(), res.diagnostics.begin(), res.diagnostics.end());
  if (!pr.diagnostics.empty()) {
    report(pr.diagnostics, false, 0);
    return kDiagnostics;
  }
  const FocusLattice& lat = res.signature.lattice();
  std::vector<Focus> els = lat.elements();
  std::cout << "elements (" << els.size() << "):\n";
  for (Focus f : els) std::cout << "  " << lat.render(f) << '\n';
  std::cout << "meet table (" << els.size() * els.size() << " entries):\n";
  for (Focus f : els) {
    for (Focus g : els) {
      std::cout << "  " << lat.render(f) << " . " << lat.render(g) << " = "
                << lat.render(lat.meet(f, g)) << '\n';
    }
  }
  std::cout << "order:\n";
  for (Focus f : els) {
    for (Focus g : els) {
      if (lat.leq(f, g)) std::cout << "  " << lat.render(f) << " <= " << lat.render(g) << '\n';
    }
  }
  return kClean;
}

int cmd_corpus(const std::string& manifest) {
  CorpusManifest m;
  try {
    m = load_manifest(manifest);
  } catch (const std::exception& err) {
    std::cerr << "focal: " << err.what() << '\n';
    return kUsage;
  }
  CorpusReport r = verify_corpus(m);
  std::cout << r.render();
  return r.failures() == 0 ? kClean : kDiagnostics;
}

int cmd_proptest(std::uint64_t seed, std::size_t cases, const std::string& spec) {
  GenConfig cfg;
  cfg.seed = seed;
  try {
    cfg.lattice = lattice_from_spec(spec);
  } catch (const std::exception& err) {
    std::cerr << "focal: bad lattice spec: " << err.what() << '\n';
    return kUsage;
  }
  bool ok = true;
  auto section = [&](const char* title, const PropertyReport& r) {
    std::cout << "== " << title << " (seed " << seed << ", lattice '" << spec << "')\n"
              << r.render(cfg.lattice);
    ok = ok && r.ok();
  };
  section("admissibility", run_admissibility(cfg, cases));
  section("sharp eta", run_sharp_eta(cfg, cases));
  section("conversion", run_conversion_laws(cfg, cases));
  section("round trip", run_round_trip(cfg, cases));
  return ok ? kClean : kDiagnostics;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"focal: a proof checker for type theory with commuting focuses"};
  app.require_subcommand(1);

  std::vector<std::string> paths;
  bool json = false;
  bool no_eta = false;
  std::size_t max_errors = 0;
  auto* check = app.add_subcommand("check", "check .fcl files (concatenated in order)");
  check->add_option("paths", paths, "input files")->required();
  check->add_flag("--json", json, "one JSON object per diagnostic");
  check->add_flag("--no-eta-pi", no_eta, "disable eta for Pi and Sigma");
  check->add_option("--max-errors", max_errors, "stop reporting after N diagnostics");

  std::string path;
  std::string name;
  auto* eval = app.add_subcommand("eval", "print the normal form of a declaration");
  eval->add_option("path", path)->required();
  eval->add_option("name", name)->required();

  auto* lattice = app.add_subcommand("lattice", "dump the focus lattice of a file");
  lattice->add_option("path", path)->required();

  std::string manifest;
  auto* corpus = app.add_subcommand("corpus", "verify a corpus manifest");
  corpus->add_option("manifest", manifest)->required();

  std::uint64_t seed = 1;
  std::size_t cases = 100;
  std::string spec = "s,d";
  auto* prop = app.add_subcommand("proptest", "run the property suites");
  prop->add_option("--seed", seed);
  prop->add_option("--cases", cases);
  prop->add_option("--lattice", spec, "e.g. s | s,d | diff<=super");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& err) {
    int code = app.exit(err);
    return code == 0 ? kClean : kUsage;
  }

  if (*check) return cmd_check(paths, json, no_eta, max_errors);
  if (*eval) return cmd_eval(path, name);
  if (*lattice) return cmd_lattice(path);
  if (*corpus) return cmd_corpus(manifest);
  if (*prop) return cmd_proptest(seed, cases, spec);
  return kUsage;
}
