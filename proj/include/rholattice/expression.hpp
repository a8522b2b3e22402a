#pragma once

#include <string>

#include "rholattice/cyclic_ring.hpp"

namespace rholattice {

// Parses an expression in chi over the given ring.
//
//   expr   := term (("+" | "-") term)*
//   term   := unary (("*" | "/") unary | juxtaposed power)*
//   unary  := ("+" | "-") unary | power
//   power  := atom ("^" ["+" | "-"] integer)?
//   atom   := integer | "x" | "chi" | "f" | "g" | "f_k(" integer ")" | "(" expr ")"
//
// Division and negative exponents use the ring inverse. The named constants
// f, g and f_k(k) need the truncated ring.
RingElement parse_expression(const std::string& text, const RingModulus& m);

}  // namespace rholattice
