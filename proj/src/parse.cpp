#include "quadode/parse.hpp"

#include <cctype>
#include <vector>

namespace quadode {

namespace {

std::vector<Token> lex(std::string_view src) {
    std::vector<Token> out;
    std::size_t i = 0;
    while (i < src.size()) {
        char c = src[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            ++i;
            continue;
        }
        std::size_t start = i;
        if (std::isdigit(static_cast<unsigned char>(c))) {
            while (i < src.size() && std::isdigit(static_cast<unsigned char>(src[i]))) ++i;
            if (i < src.size() && src[i] == '.') {
                ++i;
                if (i >= src.size() || !std::isdigit(static_cast<unsigned char>(src[i])))
                    throw ParseError(i, "expected digits after decimal point");
                while (i < src.size() && std::isdigit(static_cast<unsigned char>(src[i]))) ++i;
            }
            out.push_back({Token::Kind::Number, std::string(src.substr(start, i - start)), start});
            continue;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            while (i < src.size() &&
                   (std::isalnum(static_cast<unsigned char>(src[i])) || src[i] == '_'))
                ++i;
            out.push_back({Token::Kind::Identifier, std::string(src.substr(start, i - start)), start});
            continue;
        }
        switch (c) {
            case '+':
            case '-':
            case '*':
            case '/':
                out.push_back({Token::Kind::Operator, std::string(1, c), start});
                break;
            case '(':
            case ')':
                out.push_back({Token::Kind::Paren, std::string(1, c), start});
                break;
            case '^':
                out.push_back({Token::Kind::Caret, "^", start});
                break;
            default:
                throw ParseError(start, std::string("unexpected character '") + c + "'");
        }
        ++i;
    }
    out.push_back({Token::Kind::End, "", src.size()});
    return out;
}

class Parser {
public:
    Parser(std::string_view src, const SubstMap* subst)
        : tokens_(lex(src)), subst_(subst) {}

    Poly parse_full() {
        Poly p = expr();
        expect_end();
        return p;
    }

    RadicalProduct parse_radical_full() {
        RadicalProduct rp;
        if (at_identifier("sqrt")) {
            rp.A = Poly::one();
            rp.B = sqrt_factor();
        } else {
            expect_paren("(");
            rp.A = expr();
            expect_paren(")");
            if (!(cur().kind == Token::Kind::Operator && cur().lexeme == "*"))
                throw ParseError(cur().position, "expected '*' before sqrt(...)");
            advance();
            rp.B = sqrt_factor();
        }
        expect_end();
        return rp;
    }

private:
    const Token& cur() const { return tokens_[pos_]; }
    const Token& peek() const {
        return tokens_[pos_ + 1 < tokens_.size() ? pos_ + 1 : tokens_.size() - 1];
    }
    void advance() {
        if (pos_ + 1 < tokens_.size()) ++pos_;
    }

    bool at_identifier(const char* name) const {
        return cur().kind == Token::Kind::Identifier && cur().lexeme == name;
    }

    void expect_end() const {
        if (cur().kind != Token::Kind::End)
            throw ParseError(cur().position, "expected end of input, got '" + cur().lexeme + "'");
    }

    void expect_paren(const char* p) {
        if (!(cur().kind == Token::Kind::Paren && cur().lexeme == p))
            throw ParseError(cur().position, std::string("expected '") + p + "'");
        advance();
    }

    Poly sqrt_factor() {
        if (!at_identifier("sqrt")) throw ParseError(cur().position, "expected sqrt(...)");
        std::size_t sqrt_pos = cur().position;
        advance();
        expect_paren("(");
        Poly b = expr();
        expect_paren(")");
        if (b.is_zero()) throw ZeroRadicand(sqrt_pos);
        return b;
    }

    void check_degree(const Poly& p, std::size_t position) const {
        if (p.degree() > kMaxParsedDegree) throw DegreeOverflow(position);
    }

    Poly expr() {
        bool neg = false;
        if (cur().kind == Token::Kind::Operator && cur().lexeme == "-") {
            neg = true;
            advance();
        }
        Poly acc = term();
        if (neg) acc = -acc;
        while (cur().kind == Token::Kind::Operator &&
               (cur().lexeme == "+" || cur().lexeme == "-")) {
            bool minus = cur().lexeme == "-";
            advance();
            Poly rhs = term();
            acc = minus ? acc - rhs : acc + rhs;
        }
        return acc;
    }

    Poly term() {
        Poly acc = factor();
        while (cur().kind == Token::Kind::Operator && cur().lexeme == "*") {
            std::size_t star = cur().position;
            advance();
            acc = acc * factor();
            check_degree(acc, star);
        }
        return acc;
    }

    Poly factor() {
        Poly base = atom();
        if (cur().kind == Token::Kind::Caret) {
            std::size_t caret = cur().position;
            advance();
            if (cur().kind != Token::Kind::Number)
                throw ParseError(cur().position, "expected integer exponent after '^'");
            Rational e = Rational::from_string(cur().lexeme);
            if (!e.is_integer() || e.sign() < 0)
                throw ParseError(cur().position, "exponent must be a nonnegative integer");
            unsigned long ev = e.num().get_ui();
            if (e.num() > kMaxParsedDegree ||
                (base.degree() > 0 && ev * static_cast<unsigned long>(base.degree()) >
                                          static_cast<unsigned long>(kMaxParsedDegree)))
                throw DegreeOverflow(caret);
            advance();
            base = base.pow(static_cast<unsigned>(ev));
            check_degree(base, caret);
        }
        return base;
    }

    Poly atom() {
        const Token& t = cur();
        switch (t.kind) {
            case Token::Kind::Number: {
                Rational v = Rational::from_string(t.lexeme);
                advance();
                // rational literal "p/q"
                if (cur().kind == Token::Kind::Operator && cur().lexeme == "/" &&
                    peek().kind == Token::Kind::Number) {
                    std::size_t slash = cur().position;
                    advance();
                    Rational d = Rational::from_string(cur().lexeme);
                    if (d.is_zero()) throw ParseError(slash, "zero denominator");
                    advance();
                    v /= d;
                }
                return Poly(v);
            }
            case Token::Kind::Identifier: {
                if (t.lexeme == "x") {
                    advance();
                    return Poly::x();
                }
                if (subst_) {
                    auto it = subst_->find(t.lexeme);
                    if (it != subst_->end()) {
                        advance();
                        return Poly(it->second);
                    }
                }
                throw ParseError(t.position, "unknown identifier '" + t.lexeme + "'");
            }
            case Token::Kind::Paren:
                if (t.lexeme == "(") {
                    advance();
                    Poly inner = expr();
                    expect_paren(")");
                    return inner;
                }
                throw ParseError(t.position, "unexpected ')'");
            default:
                throw ParseError(t.position, "expected a number, 'x' or '('");
        }
    }

    std::vector<Token> tokens_;
    const SubstMap* subst_;
    std::size_t pos_ = 0;
};

std::string coeff_abs_str(const Rational& c) { return c.abs().str(); }

}  // namespace

Poly parse_poly(std::string_view src, const SubstMap* subst) {
    return Parser(src, subst).parse_full();
}

RadicalProduct parse_radical(std::string_view src, const SubstMap* subst) {
    return Parser(src, subst).parse_radical_full();
}

std::string print_canonical(const Poly& p) {
    if (p.is_zero()) return "0";
    std::string out;
    for (int k = p.degree(); k >= 0; --k) {
        Rational c = p.coeff(static_cast<std::size_t>(k));
        if (c.is_zero()) continue;
        if (out.empty()) {
            if (c.sign() < 0) out += "-";
        } else {
            out += c.sign() < 0 ? " - " : " + ";
        }
        bool unit = c.abs() == Rational(1);
        if (k == 0) {
            out += coeff_abs_str(c);
        } else {
            if (!unit) {
                out += coeff_abs_str(c);
                out += "*";
            }
            out += "x";
            if (k > 1) out += "^" + std::to_string(k);
        }
    }
    return out;
}

}  // namespace quadode
