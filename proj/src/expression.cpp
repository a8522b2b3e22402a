#include "rholattice/expression.hpp"

#include <cctype>
#include <optional>

#include "rholattice/errors.hpp"
#include "rholattice/special_elements.hpp"

namespace rholattice {

namespace {

class Parser {
public:
    Parser(const std::string& text, const RingModulus& m) : s_(text), m_(m) {}

    RingElement run() {
        RingElement v = expr();
        skip();
        if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
        return v;
    }

private:
    [[noreturn]] void fail(const std::string& what) const { throw ParseError(what, pos_); }

    void skip() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }

    bool eat(char c) {
        skip();
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    bool eat_word(const std::string& w) {
        skip();
        if (s_.compare(pos_, w.size(), w) != 0) return false;
        const std::size_t end = pos_ + w.size();
        if (end < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[end])) || s_[end] == '_')) return false;
        pos_ = end;
        return true;
    }

    bool at_atom_start() {
        skip();
        if (pos_ >= s_.size()) return false;
        const char c = s_[pos_];
        return c == '(' || std::isalpha(static_cast<unsigned char>(c)) || static_cast<unsigned char>(c) >= 0x80;
    }

    Integer integer() {
        skip();
        const std::size_t start = pos_;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        if (start == pos_) fail("expected an integer");
        return Integer(s_.substr(start, pos_ - start));
    }

    long small_integer() {
        const std::size_t at = pos_;
        const Integer v = integer();
        if (!v.fits_slong_p() || v > 1000000) {
            pos_ = at;
            fail("exponent too large");
        }
        return v.get_si();
    }

    RingElement expr() {
        RingElement v = term();
        for (;;) {
            if (eat('+'))
                v += term();
            else if (eat('-'))
                v -= term();
            else
                return v;
        }
    }

    RingElement term() {
        RingElement v = unary();
        for (;;) {
            if (eat('*')) {
                v = v * unary();
            } else if (eat('/')) {
                const std::size_t at = pos_;
                RingElement d = unary();
                v = v * invert(d, at);
            } else if (at_atom_start()) {
                v = v * power();
            } else {
                return v;
            }
        }
    }

    RingElement unary() {
        if (eat('-')) return -unary();
        if (eat('+')) return unary();
        return power();
    }

    RingElement power() {
        const std::size_t at = pos_;
        std::optional<long> monomial_exp;
        RingElement base = atom(monomial_exp);
        if (!eat('^')) return base;
        bool negative = false;
        if (eat('-'))
            negative = true;
        else
            eat('+');
        const long e = small_integer();
        if (monomial_exp) return RingElement::monomial(m_, negative ? -e * *monomial_exp : e * *monomial_exp);
        RingElement b = negative ? invert(base, at) : base;
        return b.pow(static_cast<unsigned>(e));
    }

    RingElement invert(const RingElement& a, std::size_t at) {
        try {
            return inverse(a);
        } catch (const NotInvertible&) {
            pos_ = at;
            throw;
        }
    }

    void require_truncated(const char* name) {
        if (m_.kind() != RingKind::Truncated)
            fail(std::string(name) + " is only defined in the truncated ring");
    }

    RingElement atom(std::optional<long>& monomial_exp) {
        skip();
        if (pos_ >= s_.size()) fail("unexpected end of input");
        if (eat('(')) {
            RingElement v = expr();
            if (!eat(')')) fail("expected ')'");
            return v;
        }
        if (std::isdigit(static_cast<unsigned char>(s_[pos_]))) return RingElement::constant(m_, Rational(integer()));
        if (eat_word("x") || eat_word("chi") || eat_word("\xCF\x87")) {
            monomial_exp = 1;
            return RingElement::monomial(m_, 1);
        }
        if (eat_word("f_k")) {
            if (!eat('(')) fail("expected '(' after f_k");
            const long k = small_integer();
            if (!eat(')')) fail("expected ')'");
            require_truncated("f_k");
            try {
                return elem_f_k(m_.n(), static_cast<int>(k));
            } catch (const InvalidArgument& e) {
                fail(e.what());
            }
        }
        if (eat_word("f")) {
            require_truncated("f");
            return elem_f(m_.n());
        }
        if (eat_word("g")) {
            require_truncated("g");
            return elem_g(m_.n());
        }
        fail("unknown symbol");
    }

    const std::string& s_;
    RingModulus m_;
    std::size_t pos_ = 0;
};

}  // namespace

RingElement parse_expression(const std::string& text, const RingModulus& m) { return Parser(text, m).run(); }

}  // namespace rholattice
