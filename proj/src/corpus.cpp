#include "focal/corpus.hpp"

#include <chrono>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "focal/surface.hpp"

namespace focal {

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

CorpusManifest load_manifest(const std::filesystem::path& manifest) {
  std::istringstream in(read_file(manifest));
  CorpusManifest out;
  auto base = manifest.parent_path();
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream words(line);
    std::string head;
    if (!(words >> head) || head[0] == '#') continue;
    auto bad = [&](const std::string& why) {
      return std::runtime_error(manifest.string() + ":" + std::to_string(lineno) + ": " + why);
    };
    if (head == "VERSION") {
      words >> out.version;
      continue;
    }
    CorpusEntry e;
    e.line = lineno;
    std::string path;
    if (head == "ACCEPT") {
      words >> path;
    } else if (head == "REJECT") {
      std::string code;
      words >> code >> path;
      if (code.size() != 4 || code[0] != 'E') throw bad("REJECT needs a code like E001");
      e.expected_code = code;
    } else {
      throw bad("expected ACCEPT, REJECT or VERSION");
    }
    if (path.empty()) throw bad("missing path");
    if (std::string extra; words >> extra) throw bad("unexpected '" + extra + "'");
    e.path = base / path;
    if (!std::filesystem::exists(e.path)) throw bad("no such file: " + e.path.string());
    out.entries.push_back(std::move(e));
  }
  return out;
}

std::size_t CorpusReport::failures() const {
  std::size_t n = 0;
  for (const auto& r : results) n += r.passed ? 0 : 1;
  return n;
}

std::string CorpusReport::render() const {
  std::ostringstream os;
  os << "corpus " << (version.empty() ? "(unversioned)" : version) << '\n';
  for (const auto& r : results) {
    os << (r.passed ? "ok   " : "FAIL ")
       << (r.entry.expected_code ? "REJECT " + *r.entry.expected_code : std::string("ACCEPT"))
       << ' ' << r.entry.path.filename().string();
    if (!r.passed) os << "  (" << r.reason << ")";
    os << '\n';
  }
  os << results.size() - failures() << '/' << results.size() << " passed in " << seconds
     << " s\n";
  return os.str();
}

CorpusReport verify_corpus(const CorpusManifest& manifest, KernelOptions opts) {
  auto start = std::chrono::steady_clock::now();
  CorpusReport report;
  report.version = manifest.version;
  for (const auto& e : manifest.entries) {
    CorpusResult r;
    r.entry = e;
    ElabResult res = check_sources({{e.path.string(), read_file(e.path)}}, opts);
    r.diagnostics = std::move(res.diagnostics);
    r.declarations = res.signature.entries().size();
    if (!e.expected_code) {
      r.passed = r.diagnostics.empty();
      if (!r.passed) r.reason = format_human(r.diagnostics.front());
    } else if (r.diagnostics.empty()) {
      r.reason = "expected " + *e.expected_code + " but the file checks";
    } else {
      r.passed = true;
      for (const auto& d : r.diagnostics) {
        if (d.code != *e.expected_code) {
          r.passed = false;
          r.reason = "expected " + *e.expected_code + ", got " + format_human(d);
          break;
        }
      }
    }
    report.results.push_back(std::move(r));
  }
  report.seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

}  // namespace focal
