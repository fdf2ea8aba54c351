#include "rlc/expr/parse.hpp"

#include <algorithm>
#include <cctype>

namespace rlc {

namespace {

class Parser {
public:
    Parser(const std::string& text, const ParseContext& ctx) : s_(text), ctx_(ctx) {}

    Expr run() {
        Expr e = sum();
        skip();
        if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
        return e;
    }

private:
    [[noreturn]] void fail(const std::string& what) const {
        throw ParseError(what + " at position " + std::to_string(pos_) + " in \"" + s_ + "\"");
    }

    void skip() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }

    bool accept(char c) {
        skip();
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    void expect(char c) {
        if (!accept(c)) fail(std::string("expected '") + c + "'");
    }

    Expr sum() {
        Expr acc;
        if (accept('-')) acc = -product();
        else {
            accept('+');
            acc = product();
        }
        for (;;) {
            if (accept('+')) acc += product();
            else if (accept('-')) acc -= product();
            else return acc;
        }
    }

    Expr product() {
        Expr acc = power();
        for (;;) {
            if (accept('*')) acc *= power();
            else if (accept('/')) {
                const Expr d = power();
                if (d.is_zero()) fail("division by zero");
                acc /= d;
            } else return acc;
        }
    }

    Expr power() {
        Expr base = primary();
        if (!accept('^')) return base;
        bool neg = accept('-');
        bool paren = false;
        if (!neg && accept('(')) {
            paren = true;
            neg = accept('-');
        }
        skip();
        const std::string digits = take_digits();
        if (digits.empty()) fail("expected an integer exponent");
        if (paren) expect(')');
        const int e = std::stoi(digits);
        if (neg && base.is_zero()) fail("division by zero");
        return base.pow(neg ? -e : e);
    }

    std::string take_digits() {
        const std::size_t start = pos_;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        return s_.substr(start, pos_ - start);
    }

    std::string take_identifier() {
        const std::size_t start = pos_;
        while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
        return s_.substr(start, pos_ - start);
    }

    bool is_coordinate(const std::string& n) const {
        return std::find(ctx_.coordinates.begin(), ctx_.coordinates.end(), n) != ctx_.coordinates.end();
    }

    Expr primary() {
        skip();
        if (pos_ >= s_.size()) fail("unexpected end of expression");
        const char c = s_[pos_];
        if (c == '(') {
            ++pos_;
            Expr e = sum();
            expect(')');
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            const std::string digits = take_digits();
            if (pos_ < s_.size() && s_[pos_] == '.') fail("decimal literals are not supported; use fractions");
            return Expr(mpq_class(mpz_class(digits)));
        }
        if (!std::isalpha(static_cast<unsigned char>(c)) && c != '_') fail("unexpected '" + std::string(1, c) + "'");
        const std::string name = take_identifier();
        unsigned order = 0;
        while (pos_ < s_.size() && s_[pos_] == '\'') {
            ++pos_;
            ++order;
        }
        skip();
        const bool call = pos_ < s_.size() && s_[pos_] == '(';
        if (!call) {
            if (order) fail("derivative marks on a non-function");
            if (!is_coordinate(name)) fail("unknown coordinate '" + name + "'");
            return coordinate(name);
        }
        if (order == 0 && (name == "sqrt" || name == "cbrt" || name == "exp" || name == "root")) {
            ++pos_;
            const Expr arg = sum();
            unsigned n = name == "cbrt" ? 3 : 2;
            if (name == "root") {
                expect(',');
                skip();
                const std::string digits = take_digits();
                if (digits.empty()) fail("expected root index");
                n = static_cast<unsigned>(std::stoul(digits));
            }
            expect(')');
            if (name == "exp") return exp(arg);
            try {
                return root(arg, n);
            } catch (const ExprError& e) {
                fail(e.what());
            }
        }
        if (!ctx_.functions.count(name)) fail("unknown function '" + name + "'");
        ++pos_;
        skip();
        if (pos_ < s_.size() && s_[pos_] == '0') {
            ++pos_;
            expect(')');
            if (auto it = ctx_.declared.find(name); it != ctx_.declared.end() && order < it->second.size())
                return Expr(it->second[order]);
            return function_at_zero(name, order);
        }
        const std::string arg = take_identifier();
        if (!is_coordinate(arg)) fail("function argument must be a coordinate");
        expect(')');
        return function(name, coordinate_id(arg), order);
    }

    const std::string& s_;
    const ParseContext& ctx_;
    std::size_t pos_ = 0;
};

}  // namespace

Expr parse_expr(const std::string& text, const ParseContext& ctx) { return Parser(text, ctx).run(); }

}  // namespace rlc
