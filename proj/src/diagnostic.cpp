#include "focal/diagnostic.hpp"

#include <sstream>

#include <json.hpp>

namespace focal {

std::string format_human(const Diagnostic& d, bool color) {
  std::ostringstream os;
  os << (d.file.empty() ? "<input>" : d.file);
  if (d.span.valid()) os << ':' << d.span.start_line << ':' << d.span.start_col;
  os << ": ";
  if (color) os << "\x1b[1;31m";
  os << "error[" << d.code << "]";
  if (color) os << "\x1b[0m";
  os << ": " << d.message;
  if (d.context && !d.context->empty()) os << "\n  in context: " << *d.context;
  return os.str();
}

std::string format_json(const Diagnostic& d) {
  nlohmann::json j;
  j["file"] = d.file;
  j["code"] = d.code;
  j["message"] = d.message;
  j["start"] = {{"line", d.span.start_line}, {"col", d.span.start_col}};
  j["end"] = {{"line", d.span.end_line}, {"col", d.span.end_col}};
  if (d.context) j["context"] = *d.context;
  return j.dump();
}

}  // namespace focal
