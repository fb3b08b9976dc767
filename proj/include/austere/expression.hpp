#pragma once

// Real-valued expressions in the chart parameters u1..uk, used for inline
// charts in run configurations.
//
//   expr    := term (('+' | '-') term)*
//   term    := unary (('*' | '/') unary)*
//   unary   := ('+' | '-') unary | power
//   power   := primary ('^' unary)?
//   primary := number | 'u' digits | name '(' expr ')' | '(' expr ')'
//
// with name one of sin, cos, exp, sqrt. Evaluation is in long double.

#include <cctype>
#include <functional>
#include <string>

#include "austere/errors.hpp"
#include "austere/linalg.hpp"

namespace austere {

class Expression {
public:
    using Fn = std::function<ext(const XRVec&)>;

    /// Parses `text` with `params` admissible variables u1..u<params>.
    static Expression parse(const std::string& text, int params) {
        Parser p{text, params};
        Fn f = p.expr();
        p.skip();
        if (p.pos != text.size()) p.error("unexpected '" + std::string(1, text[p.pos]) + "'");
        return Expression(text, std::move(f));
    }

    [[nodiscard]] ext operator()(const XRVec& u) const { return fn_(u); }
    [[nodiscard]] const std::string& text() const noexcept { return text_; }

private:
    Expression(std::string text, Fn fn) : text_(std::move(text)), fn_(std::move(fn)) {}

    struct Parser {
        const std::string& s;
        int params;
        std::size_t pos = 0;

        [[noreturn]] void error(const std::string& what) const {
            fail(Errc::config, "expression '" + s + "', column " + std::to_string(pos + 1) + ": " + what);
        }
        void skip() {
            while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
        }
        bool eat(char c) {
            skip();
            if (pos < s.size() && s[pos] == c) {
                ++pos;
                return true;
            }
            return false;
        }

        Fn expr() {
            Fn lhs = term();
            for (;;) {
                if (eat('+')) {
                    lhs = [a = lhs, b = term()](const XRVec& u) { return a(u) + b(u); };
                } else if (eat('-')) {
                    lhs = [a = lhs, b = term()](const XRVec& u) { return a(u) - b(u); };
                } else {
                    return lhs;
                }
            }
        }
        Fn term() {
            Fn lhs = unary();
            for (;;) {
                if (eat('*')) {
                    lhs = [a = lhs, b = unary()](const XRVec& u) { return a(u) * b(u); };
                } else if (eat('/')) {
                    lhs = [a = lhs, b = unary()](const XRVec& u) { return a(u) / b(u); };
                } else {
                    return lhs;
                }
            }
        }
        Fn unary() {
            if (eat('-')) return [a = unary()](const XRVec& u) { return -a(u); };
            if (eat('+')) return unary();
            return power();
        }
        Fn power() {
            Fn base = primary();
            if (!eat('^')) return base;
            Fn exponent = unary();
            return [base, exponent](const XRVec& u) {
                const ext e = exponent(u);
                const ext r = std::round(e);
                if (r == e && std::abs(r) <= 64) {
                    ext out = 1, b = base(u);
                    for (int i = 0; i < std::abs(static_cast<int>(r)); ++i) out *= b;
                    return r < 0 ? 1 / out : out;
                }
                return std::pow(base(u), e);
            };
        }
        Fn primary() {
            skip();
            if (pos >= s.size()) error("unexpected end of expression");
            const char c = s[pos];
            if (eat('(')) {
                Fn inner = expr();
                if (!eat(')')) error("expected ')'");
                return inner;
            }
            if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
                std::size_t used = 0;
                ext value = 0;
                try {
                    value = std::stold(s.substr(pos), &used);
                } catch (const std::exception&) {
                    error("malformed number");
                }
                pos += used;
                return [value](const XRVec&) { return value; };
            }
            if (std::isalpha(static_cast<unsigned char>(c))) {
                std::size_t end = pos;
                while (end < s.size() && std::isalnum(static_cast<unsigned char>(s[end]))) ++end;
                const std::string word = s.substr(pos, end - pos);
                if (word.size() > 1 && word[0] == 'u' &&
                    word.find_first_not_of("0123456789", 1) == std::string::npos) {
                    const int index = std::stoi(word.substr(1));
                    if (index < 1 || index > params)
                        error("variable " + word + " outside u1..u" + std::to_string(params));
                    pos = end;
                    return [i = index - 1](const XRVec& u) { return u(i); };
                }
                using Unary = ext (*)(ext);
                Unary f = nullptr;
                if (word == "sin") f = [](ext x) { return std::sin(x); };
                if (word == "cos") f = [](ext x) { return std::cos(x); };
                if (word == "exp") f = [](ext x) { return std::exp(x); };
                if (word == "sqrt") f = [](ext x) { return std::sqrt(x); };
                if (!f) error("unknown name '" + word + "'");
                pos = end;
                if (!eat('(')) error("expected '(' after " + word);
                Fn arg = expr();
                if (!eat(')')) error("expected ')'");
                return [f, arg](const XRVec& u) { return f(arg(u)); };
            }
            error("unexpected '" + std::string(1, c) + "'");
        }
    };

    std::string text_;
    Fn fn_;
};

}  // namespace austere
