#pragma once

#include <string>

#include "speclint/formula.hpp"

namespace speclint {

/* Parses the textual dialect:
 *
 *   formula := iff
 *   iff     := imp ("<->" imp)*
 *   imp     := or ("->" or)*              (right-associative)
 *   or      := and (("or"|"\/") and)*
 *   and     := unary (("and"|"/\") unary)*
 *   unary   := ("not"|"!") unary
 *            | ("G"|"always"|"F"|"eventually") "[" rat "," rat "]" unary
 *            | primary
 *   primary := "(" formula ")" | "true" | "false" | atom
 *            | primary "U" "[" rat "," rat "]" primary
 *   atom    := ident (("<"|"<="|">"|">=") rat)?
 *   rat     := decimal | int "/" int
 *
 * Whitespace-insensitive. "a <-> b" is sugar for "(a -> b) /\ (b -> a)".
 * Throws ParseError with line/column on bad syntax, reversed or negative
 * interval bounds, and equality comparators (== is unsupported because its
 * robustness is never positive). */
Formula parse_formula(const std::string &text);

} // namespace speclint
