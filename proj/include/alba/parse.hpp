#ifndef ALBA_PARSE_HPP
#define ALBA_PARSE_HPP

#include <string>
#include <variant>

#include "alba/syntax.hpp"

namespace alba {

struct ParseError : std::runtime_error {
  int position;  // byte offset into the input
  ParseError(const std::string& msg, int pos)
      : std::runtime_error(msg + " (at offset " + std::to_string(pos) + ")"),
        position(pos) {}
};

Term parse_term(const std::string& text, const Signature& sig);
Inequality parse_inequality(const std::string& text, const Signature& sig);
QuasiInequality parse_quasi(const std::string& text, const Signature& sig);

using Parsed = std::variant<Term, Inequality, QuasiInequality>;
/// Parses a term, inequality or quasi-inequality, whichever the input is.
Parsed parse_any(const std::string& text, const Signature& sig);

std::string to_string(const Term& t);
std::string to_string(const Inequality& i);
std::string to_string(const QuasiInequality& q);

/// Line-oriented signature file:
///   connective <name> : <F|G> / <arity> / (<1|d>...);
Signature parse_signature_file(const std::string& text);
std::string signature_to_string(const Signature& sig);

}  // namespace alba

#endif
