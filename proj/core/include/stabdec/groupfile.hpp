// Text format for stabilizer groups: one directive per line, '#' comments.
//
//   d = <int>                      qudit dimension (required before any gen)
//   party <label> = <i>[,<i>...]   ordered partition block, 0-based sites
//   gen = [w^<k>[/2]] <factor>...  factor = X<i>[^<e>] or Z<i>[^<e>]
//
// Factors multiply left to right; "I" alone is the identity.  Party lines,
// when present, must jointly name every site exactly once and fix the site
// count; otherwise the count is one past the largest index a generator uses.
// print_group renders the same format and parse_group inverts it exactly.
#pragma once

#include <stdexcept>
#include <string>

#include "stabdec/stabilizer.hpp"

namespace stabdec {

// Parse failure at a 1-based source position; what() carries the position,
// e.g. "line 3, column 7: expected a site index".
class ParseError : public std::invalid_argument {
 public:
  ParseError(i64 line, i64 col, const std::string& message);

  i64 line() const { return line_; }
  i64 col() const { return col_; }

 private:
  i64 line_ = 0;
  i64 col_ = 0;
};

StabilizerGroup parse_group(const std::string& text);

std::string print_group(const StabilizerGroup& s);

}  // namespace stabdec
