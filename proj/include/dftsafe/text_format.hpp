#pragma once

#include <string>
#include <string_view>

#include "dftsafe/dft.hpp"

namespace dftsafe {

/// Parses the line-oriented, ';'-terminated fault-tree grammar:
///   toplevel <id>;
///   <id> and|or|pand|seq <child>+;      <id> <k>of<n> <child>{n};
///   <id> wsp <primary> <spare>+;
///   <id> fdep <trigger> <dep>+;         <id> adep <source> <dest>+;
///   <id> lambda=<rate-expr> [dorm=<float>] [transient] [dummy];
///   param <name>=<float>;               label <name> when <bool-expr>;
/// Comments run from `//` to end of line; ids may be double-quoted.
/// Throws ParseError with position info; the result is not yet validated.
Dft parseDft(std::string_view text);

/// Deterministic textual form; parse(serialize(d)) reproduces d.
std::string serializeDft(Dft const& dft);

}  // namespace dftsafe
