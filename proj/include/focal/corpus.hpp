#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "focal/diagnostic.hpp"
#include "focal/kernel.hpp"

namespace focal {

struct CorpusEntry {
  std::filesystem::path path;  // resolved against the manifest's directory
  std::optional<std::string> expected_code;  // nullopt means ACCEPT
  int line = 0;
};

struct CorpusManifest {
  std::string version;
  std::vector<CorpusEntry> entries;
};

/// Reads a manifest: `VERSION <tag>`, `ACCEPT <path>`, `REJECT <code> <path>`
/// and `#` comments. Throws std::runtime_error on unreadable or malformed
/// input or a listed path that does not exist.
CorpusManifest load_manifest(const std::filesystem::path& manifest);

struct CorpusResult {
  CorpusEntry entry;
  std::vector<Diagnostic> diagnostics;
  std::size_t declarations = 0;
  bool passed = false;
  std::string reason;  // empty when passed
};

struct CorpusReport {
  std::string version;
  std::vector<CorpusResult> results;
  double seconds = 0;

  std::size_t failures() const;
  std::string render() const;
};

/// An ACCEPT file passes with zero diagnostics; a REJECT file passes when it
/// has at least one diagnostic and every diagnostic carries the named code.
CorpusReport verify_corpus(const CorpusManifest& manifest, KernelOptions opts = {});

std::string read_file(const std::filesystem::path& path);

}  // namespace focal
