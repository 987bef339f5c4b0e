#pragma once

// Line-oriented TGS text format:
//
//   tgs <n> <T>
//   t <slot>
//   e <u> <v>
//   ...
//
// Node ids are 0..n-1 and every slot holds all n nodes. Slots with no `t`
// line are empty graphlets. Blank lines and lines starting with '#' are
// ignored.

#include <iosfwd>
#include <stdexcept>
#include <string>

#include "tvg/tgraph.hpp"

namespace tvg {

class ParseError : public std::runtime_error {
 public:
  ParseError(int line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  int line() const noexcept { return line_; }

 private:
  int line_;
};

Tgs read_tgs(std::istream& in);
Tgs read_tgs_file(const std::string& path);
/// Throws std::invalid_argument unless every slot holds nodes 0..n-1.
void write_tgs(std::ostream& out, const Tgs& tgs);

}  // namespace tvg
