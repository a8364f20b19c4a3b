#pragma once

#include <functional>
#include <map>
#include <string>
#include <string_view>

#include "focal/term.hpp"

namespace focal {

/// Simultaneous substitution environment: variable name -> replacement.
using Substitution = std::map<std::string, TermPtr, std::less<>>;

/// Capture-avoiding simultaneous substitution. Binders that would capture a
/// free variable of a replacement are renamed.
TermPtr substitute(const TermPtr& t, const Substitution& env);
TermPtr substitute(const TermPtr& t, const std::string& x, const TermPtr& s);

/// `base` with its trailing digits replaced by the smallest numeric suffix
/// for which `taken` is false. Returns `base` itself when it is free.
std::string fresh_name(std::string_view base,
                       const std::function<bool(std::string_view)>& taken);

}  // namespace focal
