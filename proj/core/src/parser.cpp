#include "mises/parser.hpp"

#include <cctype>
#include <cstdint>

namespace mises {

namespace {

class Parser {
public:
    Parser(const std::string& text, const Context& ctx) : text_(text), ctx_(ctx) {}

    Expr parse_expression() {
        Expr e = parse_sum();
        skip_ws();
        if (pos_ != text_.size()) fail("unexpected trailing input");
        return simplify(e);
    }

    ParsedEquation parse_eq() {
        Expr lhs = parse_sum();
        skip_ws();
        if (pos_ >= text_.size() || text_[pos_] != '=') fail("expected '=' in equation");
        ++pos_;
        Expr rhs = parse_sum();
        skip_ws();
        if (pos_ != text_.size()) fail("unexpected trailing input");
        return {simplify(lhs), simplify(rhs)};
    }

private:
    [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, pos_); }

    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    bool peek(char c) {
        skip_ws();
        return pos_ < text_.size() && text_[pos_] == c;
    }

    bool accept(char c) {
        if (peek(c)) {
            ++pos_;
            return true;
        }
        return false;
    }

    void expect(char c, const char* what) {
        if (!accept(c)) fail(std::string("expected '") + c + "' " + what);
    }

    Expr parse_sum() {
        Expr e = parse_term();
        for (;;) {
            if (accept('+')) e = e + parse_term();
            else if (accept('-')) e = e - parse_term();
            else return e;
        }
    }

    Expr parse_term() {
        Expr e = parse_unary();
        for (;;) {
            if (accept('*')) e = e * parse_unary();
            else if (accept('/')) e = e / parse_unary();
            else return e;
        }
    }

    Expr parse_unary() {
        if (accept('-')) return -parse_unary();
        if (accept('+')) return parse_unary();
        return parse_power();
    }

    Expr parse_power() {
        Expr base = parse_primary();
        if (accept('^')) {
            Expr exp = parse_exponent();
            return power(base, exp);
        }
        return base;
    }

    // exponent binds tighter than unary minus in -x^2, but -2 must parse in x^-2
    Expr parse_exponent() {
        if (accept('-')) return -parse_exponent();
        return parse_power();
    }

    Expr parse_primary() {
        skip_ws();
        if (pos_ >= text_.size()) fail("unexpected end of input");
        char c = text_[pos_];
        if (c == '(') {
            ++pos_;
            Expr e = parse_sum();
            expect(')', "to close parenthesis");
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) return parse_number();
        if (std::isalpha(static_cast<unsigned char>(c))) return parse_identifier();
        fail(std::string("unexpected character '") + c + "'");
    }

    Expr parse_number() {
        size_t start = pos_;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
        std::int64_t intpart = std::stoll(text_.substr(start, pos_ - start));
        if (pos_ < text_.size() && text_[pos_] == '.') {
            ++pos_;
            size_t fstart = pos_;
            while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
            if (fstart == pos_) fail("malformed decimal literal");
            std::string frac = text_.substr(fstart, pos_ - fstart);
            if (frac.size() > 15) fail("decimal literal too long");
            std::int64_t den = 1;
            for (size_t i = 0; i < frac.size(); ++i) den *= 10;
            return rational(Rational(intpart) + Rational(std::stoll(frac), den));
        }
        return rational(intpart);
    }

    std::string read_ident() {
        size_t start = pos_;
        while (pos_ < text_.size() &&
               (std::isalnum(static_cast<unsigned char>(text_[pos_])))) ++pos_;
        return text_.substr(start, pos_ - start);
    }

    Expr parse_identifier() {
        size_t start = pos_;
        std::string name = read_ident();

        // jet derivative suffix on a declared dependent
        if (pos_ < text_.size() && text_[pos_] == '_') {
            const auto* indeps = ctx_.independents_of(name);
            if (indeps == nullptr) {
                pos_ = start;
                fail("underscore suffix on '" + name + "', which is not a declared jet variable");
            }
            ++pos_;
            return parse_jet(name, *indeps);
        }

        if (name == "int" && peek('(')) return parse_integral();
        if (name == "D" && peek('(')) return parse_total_derivative();

        // opaque function application, possibly with derivative marks
        int ticks = 0;
        while (pos_ < text_.size() && text_[pos_] == '\'') {
            ++ticks;
            ++pos_;
        }
        std::vector<int> dindex;
        if (ticks == 0 && peek('[')) {
            ++pos_;
            dindex = parse_index_list();
        }
        if (ticks > 0 || !dindex.empty() || peek('(')) {
            auto it = ctx_.functions().find(name);
            if (it == ctx_.functions().end()) {
                pos_ = start;
                fail("undeclared function '" + name + "'");
            }
            expect('(', "to open argument list");
            std::vector<Expr> args;
            if (!peek(')')) {
                args.push_back(parse_sum());
                while (accept(',')) args.push_back(parse_sum());
            }
            expect(')', "to close argument list");
            if (static_cast<int>(args.size()) != it->second)
                fail("function '" + name + "' expects " + std::to_string(it->second) + " argument(s)");
            if (ticks > 0) {
                if (args.size() != 1) fail("derivative marks need a unary function");
                dindex = {ticks};
            }
            if (dindex.empty()) dindex.assign(args.size(), 0);
            if (dindex.size() != args.size()) fail("derivative index arity mismatch for '" + name + "'");
            return funcapp(name, std::move(args), std::move(dindex));
        }

        if (ctx_.has_symbol(name) || ctx_.independents_of(name) != nullptr) return symbol(name);
        pos_ = start;
        fail("undeclared identifier '" + name + "'");
    }

    std::vector<int> parse_index_list() {
        std::vector<int> idx;
        for (;;) {
            skip_ws();
            size_t s = pos_;
            while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
            if (s == pos_) fail("malformed derivative index");
            idx.push_back(std::stoi(text_.substr(s, pos_ - s)));
            if (accept(']')) return idx;
            expect(',', "in derivative index");
        }
    }

    Expr parse_jet(const std::string& dep, const std::vector<std::string>& indeps) {
        size_t sufstart = pos_;
        while (pos_ < text_.size() && std::isalnum(static_cast<unsigned char>(text_[pos_]))) ++pos_;
        std::string suffix = text_.substr(sufstart, pos_ - sufstart);
        if (suffix.empty()) fail("missing derivative suffix after '_'");

        auto counts = match_jet(dep + "_" + suffix, dep, indeps);
        if (!counts) {
            // accept directions in any order, normalize to canonical
            std::vector<int> cs(indeps.size(), 0);
            size_t p = 0;
            while (p < suffix.size()) {
                bool ok = false;
                for (size_t i = 0; i < indeps.size(); ++i) {
                    if (suffix.compare(p, indeps[i].size(), indeps[i]) == 0) {
                        cs[i] += 1;
                        p += indeps[i].size();
                        ok = true;
                        break;
                    }
                }
                if (!ok) {
                    pos_ = sufstart;
                    fail("malformed derivative suffix '" + suffix + "' for jet variable '" + dep + "'");
                }
            }
            counts = cs;
        }

        // u_x^(k): repeat the final direction to total order k
        if (pos_ + 1 < text_.size() && text_[pos_] == '^' && text_[pos_ + 1] == '(') {
            size_t save = pos_;
            pos_ += 2;
            size_t ds = pos_;
            while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
            if (ds != pos_ && pos_ < text_.size() && text_[pos_] == ')') {
                int k = std::stoi(text_.substr(ds, pos_ - ds));
                ++pos_;
                int last = -1;
                for (size_t i = 0; i < counts->size(); ++i)
                    if ((*counts)[i] > 0) last = static_cast<int>(i);
                if (last < 0 || k < 1) fail("malformed derivative index");
                (*counts)[last] += k - 1;
            } else {
                pos_ = save; // a genuine power such as u_x^(n/2)
            }
        }
        return symbol(jet_name(dep, indeps, *counts));
    }

    Expr parse_integral() {
        expect('(', "after int");
        // the dummy variable is declared only inside the integrand
        size_t body_start = pos_;
        int depth = 0;
        size_t p = pos_;
        size_t comma = std::string::npos;
        for (; p < text_.size(); ++p) {
            if (text_[p] == '(') ++depth;
            else if (text_[p] == ')') {
                if (depth == 0) break;
                --depth;
            } else if (text_[p] == ',' && depth == 0) {
                comma = p;
                break;
            }
        }
        if (comma == std::string::npos) fail("int(...) needs integrand, dummy, lower, upper");
        std::string body = text_.substr(body_start, comma - body_start);
        pos_ = comma + 1;
        skip_ws();
        std::string dummy = read_ident();
        if (dummy.empty()) fail("missing dummy variable in int(...)");
        expect(',', "after dummy variable");
        Expr lo = parse_sum();
        expect(',', "after lower bound");
        Expr hi = parse_sum();
        expect(')', "to close int(...)");

        Context inner = ctx_;
        inner.symbol(dummy);
        Parser sub(body, inner);
        Expr integrand = sub.parse_expression();
        return integral(integrand, dummy, lo, hi);
    }

    Expr parse_total_derivative() {
        expect('(', "after D");
        size_t depth = 0;
        size_t p = pos_;
        size_t comma = std::string::npos;
        for (; p < text_.size(); ++p) {
            if (text_[p] == '(') ++depth;
            else if (text_[p] == ')') {
                if (depth == 0) break;
                --depth;
            } else if (text_[p] == ',' && depth == 0) {
                comma = p;
                break;
            }
        }
        if (comma == std::string::npos) fail("D(...) needs an expression and a variable");
        std::string body = text_.substr(pos_, comma - pos_);
        pos_ = comma + 1;
        skip_ws();
        std::string var = read_ident();
        if (var.empty()) fail("missing variable in D(...)");
        expect(')', "to close D(...)");

        Parser sub(body, ctx_);
        Expr inner = sub.parse_expression();
        return total_derivative_multi(inner, var, ctx_.jet_contexts());
    }

    const std::string& text_;
    Context ctx_;
    size_t pos_ = 0;
};

} // namespace

Expr parse(const std::string& text, const Context& ctx) {
    Parser p(text, ctx);
    return p.parse_expression();
}

ParsedEquation parse_equation(const std::string& text, const Context& ctx) {
    Parser p(text, ctx);
    return p.parse_eq();
}

} // namespace mises
