#pragma once

#include <cstddef>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>

#include "quadode/poly.hpp"
#include "quadode/radical.hpp"

namespace quadode {

/// Thrown on any malformed input; position is the character offset into src.
class ParseError : public std::runtime_error {
public:
    ParseError(std::size_t position, const std::string& what)
        : std::runtime_error(what + " (at offset " + std::to_string(position) + ")"),
          position_(position) {}
    std::size_t position() const { return position_; }

private:
    std::size_t position_;
};

/// Expansion exceeded the degree-64 cap.
class DegreeOverflow : public ParseError {
public:
    explicit DegreeOverflow(std::size_t position)
        : ParseError(position, "expansion exceeds degree 64") {}
};

/// sqrt(...) radicand parsed to the zero polynomial.
class ZeroRadicand : public ParseError {
public:
    explicit ZeroRadicand(std::size_t position)
        : ParseError(position, "radicand is the zero polynomial") {}
};

struct Token {
    enum class Kind { Number, Identifier, Operator, Paren, Caret, End };
    Kind kind;
    std::string lexeme;
    std::size_t position;
};

/// Named rational values substituted for identifiers while parsing.
using SubstMap = std::map<std::string, Rational>;

constexpr int kMaxParsedDegree = 64;

/// Parse a polynomial in x. Grammar: rational literals ("3", "3/2", "0.25"),
/// variable "x", operators + - * ^ with the usual precedence, parentheses.
/// Identifiers other than "x" must be supplied through subst.
Poly parse_poly(std::string_view src, const SubstMap* subst = nullptr);

/// Parse "(<poly>)*sqrt(<poly>)" or "sqrt(<poly>)" (A defaults to 1).
RadicalProduct parse_radical(std::string_view src, const SubstMap* subst = nullptr);

/// Descending-degree canonical form; parse_poly(print_canonical(p)) == p.
std::string print_canonical(const Poly& p);

}  // namespace quadode
