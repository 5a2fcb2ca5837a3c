#pragma once

#include <cctype>
#include <cstdlib>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "qes/quad_extension.hpp"

namespace qes::dsl {

// Syntax tree.

enum class Kind { sum, product, power, neg, comm, call, symbol, number };

/// One node of an operator expression. Products are ordered: in A*B the
/// factor B acts first.
struct Expr {
    Kind kind = Kind::number;
    /// Symbol or callee name.
    std::string name;
    Rational number;
    /// sum: terms; product: factors; power: base, exponent; neg: operand;
    /// comm: both operands; call: arguments.
    std::vector<Expr> children;
    /// sum: '+'/'-' per term; product: '*'/'/' per factor. The first entry is '+' or '*'.
    std::string ops;
    /// call: keyword per argument, empty for positional ones.
    std::vector<std::string> keys;
    /// Offset of the node's first character in the source.
    std::size_t position = 0;

    /// Structural equality; positions are ignored.
    friend bool operator==(const Expr &l, const Expr &r) {
        return l.kind == r.kind && l.name == r.name && l.number == r.number && l.ops == r.ops && l.keys == r.keys &&
               l.children == r.children;
    }
};

inline Expr number(Rational v) {
    Expr e;
    e.number = std::move(v);
    return e;
}
inline Expr symbol(std::string name) {
    Expr e;
    e.kind = Kind::symbol;
    e.name = std::move(name);
    return e;
}
inline Expr unary(Kind k, Expr c) {
    Expr e;
    e.kind = k;
    e.children.push_back(std::move(c));
    return e;
}
inline Expr binary(Kind k, Expr a, Expr b) {
    Expr e;
    e.kind = k;
    e.children = {std::move(a), std::move(b)};
    return e;
}
inline Expr call(std::string name, std::vector<Expr> args, std::vector<std::string> keys = {}) {
    Expr e;
    e.kind = Kind::call;
    e.name = std::move(name);
    keys.resize(args.size());
    e.children = std::move(args);
    e.keys = std::move(keys);
    return e;
}

/// Symbols understood without arguments. lambda and k2 are aliases of a.
inline bool is_symbol(std::string_view s) {
    return s == "x" || s == "d" || s == "D" || s == "f" || s == "a" || s == "lambda" || s == "k2";
}

// Parser.

namespace detail {

struct Token {
    enum Type { ident, integer, punct, end } type;
    std::string text;
    std::size_t pos;
};

inline std::vector<Token> tokenize(std::string_view src) {
    std::vector<Token> out;
    std::size_t i = 0;
    while (i < src.size()) {
        const char c = src[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            ++i;
            continue;
        }
        const std::size_t start = i;
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            while (i < src.size() && (std::isalnum(static_cast<unsigned char>(src[i])) || src[i] == '_')) ++i;
            out.push_back({Token::ident, std::string(src.substr(start, i - start)), start});
        } else if (std::isdigit(static_cast<unsigned char>(c))) {
            while (i < src.size() && std::isdigit(static_cast<unsigned char>(src[i]))) ++i;
            out.push_back({Token::integer, std::string(src.substr(start, i - start)), start});
        } else if (std::string_view("+-*/^(),=").find(c) != std::string_view::npos) {
            out.push_back({Token::punct, std::string(1, c), start});
            ++i;
        } else {
            throw ParseError(std::string("unexpected character '") + c + "'", start);
        }
    }
    out.push_back({Token::end, "", src.size()});
    return out;
}

class Parser {
public:
    explicit Parser(std::string_view src) : toks_(tokenize(src)) {}

    Expr parse_all() {
        Expr e = expr();
        if (peek().type != Token::end) fail("unexpected '" + peek().text + "'");
        return e;
    }

private:
    std::vector<Token> toks_;
    std::size_t at_ = 0;

    const Token &peek(std::size_t k = 0) const { return toks_[std::min(at_ + k, toks_.size() - 1)]; }
    bool is(const char *p, std::size_t k = 0) const { return peek(k).type == Token::punct && peek(k).text == p; }
    [[noreturn]] void fail(const std::string &what) const {
        throw ParseError(peek().type == Token::end ? what + " (end of input)" : what, peek().pos);
    }
    void expect(const char *p) {
        if (!is(p)) fail(std::string("expected '") + p + "'");
        ++at_;
    }

    Expr expr() {
        const std::size_t pos = peek().pos;
        Expr first = term();
        if (!is("+") && !is("-")) return first;
        Expr s;
        s.kind = Kind::sum;
        s.position = pos;
        s.ops = "+";
        s.children.push_back(std::move(first));
        while (is("+") || is("-")) {
            s.ops += peek().text;
            ++at_;
            s.children.push_back(term());
        }
        return s;
    }

    Expr term() {
        const std::size_t pos = peek().pos;
        if (is("-")) {
            ++at_;
            Expr e = unary(Kind::neg, term());
            e.position = pos;
            return e;
        }
        Expr first = factor(true);
        if (!is("*") && !is("/")) return first;
        Expr p;
        p.kind = Kind::product;
        p.position = pos;
        p.ops = "*";
        p.children.push_back(std::move(first));
        while (is("*") || is("/")) {
            const bool div = is("/");
            p.ops += peek().text;
            ++at_;
            p.children.push_back(factor(!div));
        }
        return p;
    }

    Expr factor(bool fold) {
        const std::size_t pos = peek().pos;
        Expr base = atom(fold);
        if (!is("^")) return base;
        ++at_;
        Expr ex;
        if (is("(")) {
            ++at_;
            ex = expr();
            expect(")");
        } else {
            const std::size_t epos = peek().pos;
            const bool negative = is("-");
            if (negative) ++at_;
            if (peek().type != Token::integer) fail("expected an integer exponent");
            ex = number(Rational::parse(peek().text));
            ex.position = peek().pos;
            ++at_;
            if (negative) {
                ex = unary(Kind::neg, std::move(ex));
                ex.position = epos;
            }
        }
        Expr e = binary(Kind::power, std::move(base), std::move(ex));
        e.position = pos;
        return e;
    }

    Expr atom(bool fold) {
        const Token t = peek();
        if (t.type == Token::integer) {
            ++at_;
            Rational v = Rational::parse(t.text);
            // p/q is a single literal unless q carries an exponent
            if (fold && is("/") && peek(1).type == Token::integer && !(peek(2).type == Token::punct && peek(2).text == "^")) {
                Rational q = Rational::parse(peek(1).text);
                if (q.is_zero()) {
                    at_ += 1;
                    fail("zero denominator");
                }
                v = v / q;
                at_ += 2;
            }
            Expr e = number(std::move(v));
            e.position = t.pos;
            return e;
        }
        if (t.type == Token::ident) {
            ++at_;
            if (!is("(")) {
                if (!is_symbol(t.text)) {
                    --at_;
                    fail("unknown symbol '" + t.text + "'");
                }
                Expr e = symbol(t.text);
                e.position = t.pos;
                return e;
            }
            ++at_;
            std::vector<Expr> args;
            std::vector<std::string> keys;
            if (!is(")")) {
                while (true) {
                    std::string key;
                    if (peek().type == Token::ident && is("=", 1)) {
                        key = peek().text;
                        at_ += 2;
                    }
                    keys.push_back(std::move(key));
                    args.push_back(expr());
                    if (!is(",")) break;
                    ++at_;
                }
            }
            expect(")");
            Expr e;
            if (t.text == "comm") {
                if (args.size() != 2) {
                    --at_;
                    fail("comm takes two arguments");
                }
                for (const auto &k : keys)
                    if (!k.empty()) throw ParseError("comm takes no keyword arguments", t.pos);
                e = binary(Kind::comm, std::move(args[0]), std::move(args[1]));
            } else {
                e = call(t.text, std::move(args), std::move(keys));
            }
            e.position = t.pos;
            return e;
        }
        if (is("(")) {
            ++at_;
            Expr e = expr();
            expect(")");
            return e;
        }
        if (t.type == Token::end) fail("unexpected end of input");
        fail("unexpected '" + t.text + "'");
    }
};

} // namespace detail

inline Expr parse(std::string_view src) { return detail::Parser(src).parse_all(); }

// Printer.

namespace detail {

inline bool integer_literal(const Expr &e) { return e.kind == Kind::number && e.number.is_integer(); }

inline std::string print(const Expr &e);

/// Printed so that it parses back as a single factor base.
inline std::string print_atom(const Expr &e) {
    switch (e.kind) {
    case Kind::symbol:
    case Kind::call:
    case Kind::comm: return print(e);
    case Kind::number:
        if (e.number.is_integer() && e.number.sign() >= 0) return print(e);
        [[fallthrough]];
    default: return "(" + print(e) + ")";
    }
}

inline std::string print_factor(const Expr &e) { return e.kind == Kind::power ? print(e) : print_atom(e); }

inline std::string print_term(const Expr &e) {
    return e.kind == Kind::sum ? "(" + print(e) + ")" : print(e);
}

inline std::string print(const Expr &e) {
    switch (e.kind) {
    case Kind::number: {
        if (e.number.sign() < 0) return "-" + print_atom(number(-e.number));
        return e.number.to_string();
    }
    case Kind::symbol: return e.name;
    case Kind::call: {
        std::string out = e.name + "(";
        for (std::size_t i = 0; i < e.children.size(); ++i) {
            if (i) out += ", ";
            if (!e.keys[i].empty()) out += e.keys[i] + "=";
            out += print(e.children[i]);
        }
        return out + ")";
    }
    case Kind::comm: return "comm(" + print(e.children[0]) + ", " + print(e.children[1]) + ")";
    case Kind::power: {
        const Expr &ex = e.children[1];
        std::string exp;
        if (integer_literal(ex) && ex.number.sign() >= 0) exp = ex.number.to_string();
        else if (ex.kind == Kind::neg && integer_literal(ex.children[0]) && ex.children[0].number.sign() >= 0)
            exp = "-" + ex.children[0].number.to_string();
        else exp = "(" + print(ex) + ")";
        return print_atom(e.children[0]) + "^" + exp;
    }
    case Kind::neg: return "-" + print_term(e.children[0]);
    case Kind::product: {
        std::string out;
        for (std::size_t i = 0; i < e.children.size(); ++i) {
            const Expr &c = e.children[i];
            if (i) out += e.ops[i];
            // keep 2/3 from folding into one literal
            const bool next_div = i + 1 < e.children.size() && e.ops[i + 1] == '/' && integer_literal(e.children[i + 1]);
            if (next_div && integer_literal(c) && e.ops[i] != '/') out += "(" + print(c) + ")";
            else out += print_factor(c);
        }
        return out;
    }
    case Kind::sum: {
        std::string out = print_term(e.children[0]);
        for (std::size_t i = 1; i < e.children.size(); ++i) out += std::string(" ") + e.ops[i] + " " + print_term(e.children[i]);
        return out;
    }
    }
    return "";
}

} // namespace detail

inline std::string print(const Expr &e) { return detail::print(e); }

// Spaces.

using Space = std::variant<V1Space, QuadSpace>;

inline std::string to_string(const Space &s) {
    return std::visit([](const auto &v) { return v.to_string(); }, s);
}

// Evaluation.

class EvalError : public Error {
public:
    EvalError(const std::string &what, std::size_t position)
        : Error("evaluation error at " + std::to_string(position) + ": " + what), position_(position) {}
    std::size_t position() const { return position_; }

private:
    std::size_t position_;
};

/// Name, argument list and meaning of each named generator.
struct GeneratorInfo {
    std::string name;
    std::string args;
    std::string meaning;
};

inline const std::vector<GeneratorInfo> &generator_table() {
    static const std::vector<GeneratorInfo> t{
        {"Jp", "n,m,a", "x(D-n)(D-(m+a))"},
        {"J0", "n,m,a", "D-(m+n+1)/2"},
        {"Jm", "n,m,a", "(D+1-a)d"},
        {"jp", "n", "x^2 d - n x"},
        {"j0", "n", "x d - n/2"},
        {"jm", "n", "d"},
        {"kp", "n,a", "x^a jp x^-a"},
        {"k0", "n,a", "x^a j0 x^-a"},
        {"km", "n,a", "x^a jm x^-a"},
        {"K", "n,m,a", "(D-n)...(D-1)D"},
        {"Kp", "n,m,a", "(D-m-a)...(D-a)"},
        {"Q", "n,m,alpha", "mixing operator into P_n"},
        {"Qbar", "n,m,alpha", "mixing operator into x^a P_m"},
        {"Wp", "n,m,k", "upward jump at a = k"},
        {"Wm", "n,m,k", "downward jump at a = k"},
        {"acomm", "A,B", "A*B + B*A"},
        {"S1", "n,lambda", "n x + p2 d"},
        {"S2", "n,lambda", "f(n x - x d)"},
        {"S3", "", "f d"},
        {"LameH", "n,k2", "Lame operator on (p, q) ~ p + cn dn q, x = sn^2"},
    };
    return t;
}

namespace detail {

/// Operations the evaluator needs from its value type.
template <class Op> struct OpTraits;

template <> struct OpTraits<DiffOp> {
    using context = std::monostate;
    static DiffOp from(const DiffOp &d, const context &) { return d; }
    static std::optional<DiffOp> f(const context &) { return std::nullopt; }
    static std::optional<RatFunc> multiplier(const DiffOp &d) {
        if (!d.is_multiplication()) return std::nullopt;
        return d.coefficient(0);
    }
    static DiffOp identity() { return DiffOp::identity(); }
};

template <> struct OpTraits<MatOp> {
    using context = QuadSpace;
    static MatOp from(const DiffOp &d, const context &s) { return lift(d, s); }
    static std::optional<MatOp> f(const context &s) { return lift_f(s); }
    static std::optional<RatFunc> multiplier(const MatOp &m) {
        if (!m.at(0, 1).is_zero() || !m.at(1, 0).is_zero() || !(m.at(0, 0) == m.at(1, 1))) return std::nullopt;
        if (!m.at(0, 0).is_multiplication()) return std::nullopt;
        return m.at(0, 0).coefficient(0);
    }
    static MatOp identity() { return MatOp::identity(); }
};

inline DiffOp compose_op(const DiffOp &a, const DiffOp &b) { return compose(a, b); }
inline MatOp compose_op(const MatOp &a, const MatOp &b) { return a * b; }

template <class Op> class Evaluator {
    using T = OpTraits<Op>;

public:
    explicit Evaluator(typename T::context ctx = {}) : ctx_(std::move(ctx)) {}

    Op eval(const Expr &e) const {
        switch (e.kind) {
        case Kind::number: return T::from(DiffOp::scalar(ParamScalar(e.number)), ctx_);
        case Kind::symbol: return symbol_value(e);
        case Kind::neg: return -eval(e.children[0]);
        case Kind::sum: {
            Op acc = eval(e.children[0]);
            for (std::size_t i = 1; i < e.children.size(); ++i) {
                Op t = eval(e.children[i]);
                try {
                    acc = e.ops[i] == '-' ? acc - t : acc + t;
                } catch (const ShiftMismatch &err) {
                    throw EvalError(err.what(), e.children[i].position);
                }
            }
            return acc;
        }
        case Kind::product: {
            Op acc = eval(e.children[0]);
            for (std::size_t i = 1; i < e.children.size(); ++i) {
                Op t = eval(e.children[i]);
                if (e.ops[i] == '/') t = T::from(DiffOp::multiplication(inverse(t, e.children[i])), ctx_);
                acc = compose_op(acc, t);
            }
            return acc;
        }
        case Kind::power: return power_value(e);
        case Kind::comm: {
            Op l = eval(e.children[0]), r = eval(e.children[1]);
            try {
                return compose_op(l, r) - compose_op(r, l);
            } catch (const ShiftMismatch &err) {
                throw EvalError(err.what(), e.position);
            }
        }
        case Kind::call: return call_value(e);
        }
        throw EvalError("bad node", e.position);
    }

private:
    typename T::context ctx_;

    RatFunc inverse(const Op &v, const Expr &at) const {
        auto m = T::multiplier(v);
        if (!m) throw EvalError("only multiplication operators can divide", at.position);
        if (m->is_zero()) throw EvalError("division by zero", at.position);
        return m->inverse();
    }

    Op symbol_value(const Expr &e) const {
        const std::string &n = e.name;
        if (n == "x") return T::from(DiffOp::multiplication(var_x()), ctx_);
        if (n == "d") return T::from(DiffOp::d(), ctx_);
        if (n == "D") return T::from(DiffOp::euler(), ctx_);
        if (n == "f") {
            if (auto v = T::f(ctx_)) return *v;
            throw EvalError("f needs a quadratic-extension space", e.position);
        }
        return T::from(DiffOp::scalar(param_a()), ctx_);
    }

    Op power_value(const Expr &e) const {
        const Expr &base = e.children[0], &ex = e.children[1];
        const ParamScalar k = scalar(ex);
        if (base.kind == Kind::symbol && base.name == "x") {
            // x^(c0 + c1 a)
            const auto &num = k.numerator();
            if (!k.denominator().is_constant() || num.degree() > Degree(1))
                throw EvalError("exponent of x must be linear in a", ex.position);
            const Rational c0 = num.constant_term() / k.denominator().constant_term();
            const Rational c1 = num.coefficient(1) / k.denominator().constant_term();
            if (!c0.is_integer()) throw EvalError("exponent of x must have an integer part", ex.position);
            if (!c1.is_zero() && !std::is_same_v<Op, DiffOp>)
                throw EvalError("x^(s*a) has no quadratic-extension lift", ex.position);
            DiffOp p = DiffOp::x_power(static_cast<int>(c0.to_long()));
            if (!c1.is_zero()) p = compose(DiffOp::a_power(c1), p);
            return T::from(p, ctx_);
        }
        if (!k.is_constant() || !k.constant_value().is_integer()) throw EvalError("exponent must be an integer", ex.position);
        const long n = k.constant_value().to_long();
        Op b = eval(base);
        if (n < 0) b = T::from(DiffOp::multiplication(inverse(b, base)), ctx_);
        Op r = T::identity();
        for (long i = 0; i < std::abs(n); ++i) r = compose_op(r, b);
        return r;
    }

    Op call_value(const Expr &e) const {
        const std::string &n = e.name;
        auto want = [&](std::size_t k) {
            if (e.children.size() != k)
                throw EvalError(n + " takes " + std::to_string(k) + " argument" + (k == 1 ? "" : "s"), e.position);
        };
        auto integer = [&](std::size_t i) { return integer_arg(e.children[i]); };
        auto sc = [&](std::size_t i) { return scalar(e.children[i]); };
        auto lifted = [&](const DiffOp &d) { return T::from(d, ctx_); };
        try {
            if (n == "Jp" || n == "J0" || n == "Jm") {
                want(3);
                Triple t = make_bosonic(integer(0), integer(1), sc(2));
                return lifted(n == "Jp" ? t.plus : n == "J0" ? t.zero : t.minus);
            }
            if (n == "jp" || n == "j0" || n == "jm") {
                want(1);
                Triple t = make_sl2(integer(0));
                return lifted(n == "jp" ? t.plus : n == "j0" ? t.zero : t.minus);
            }
            if (n == "kp" || n == "k0" || n == "km") {
                want(2);
                Triple t = make_k(integer(0), sc(1));
                return lifted(n == "kp" ? t.plus : n == "k0" ? t.zero : t.minus);
            }
            if (n == "K" || n == "Kp") {
                want(3);
                Kernels k = make_kernels(integer(0), integer(1), sc(2));
                return lifted(n == "K" ? k.K : k.Kp);
            }
            if (n == "Q" || n == "Qbar") {
                want(3);
                Mixing m = make_mixing(integer(0), integer(1), integer(2));
                return lifted(n == "Q" ? m.Q : m.Qbar);
            }
            if (n == "Wp" || n == "Wm") {
                want(3);
                Jumps w = make_jumps(integer(0), integer(1), integer(2));
                return lifted(n == "Wp" ? w.Wp : w.Wm);
            }
            if (n == "acomm") {
                want(2);
                Op l = eval(e.children[0]), r = eval(e.children[1]);
                return compose_op(l, r) + compose_op(r, l);
            }
            if constexpr (std::is_same_v<Op, MatOp>) {
                if (n == "S1" || n == "S2") {
                    want(2);
                    const RatFunc nn(ParamScalar(integer(0))), x = var_x();
                    const RatFunc p2 = qes::detail::linear_factor(ParamScalar(1)) * qes::detail::linear_factor(sc(1));
                    if (n == "S1") return QuadOperator::make(ctx_, nn * x, p2, RatFunc(), RatFunc()).mat;
                    return QuadOperator::make(ctx_, RatFunc(), RatFunc(), nn * x, -x).mat;
                }
                if (n == "S3") {
                    want(0);
                    return QuadOperator::make(ctx_, RatFunc(), RatFunc(), RatFunc(), RatFunc(1)).mat;
                }
                if (n == "LameH") {
                    want(2);
                    const int deg = integer(0);
                    const QuadSpace own = lame_space(deg, sc(1));
                    if (!(own.r() == ctx_.r()) || own.dimension() != ctx_.dimension()) throw EvalError("LameH needs its own Lame space", e.position);
                    return lame_pullback(deg, sc(1));
                }
            } else {
                if (n == "S1" || n == "S2" || n == "S3" || n == "LameH")
                    throw EvalError(n + " needs a quadratic-extension space", e.position);
            }
        } catch (const EvalError &) {
            throw;
        } catch (const Error &err) {
            throw EvalError(err.what(), e.position);
        }
        throw EvalError("unknown generator '" + n + "'", e.position);
    }

    static ParamScalar scalar(const Expr &e) {
        DiffOp v = Evaluator<DiffOp>().eval(e);
        if (!v.is_scalar()) throw EvalError("expected a constant", e.position);
        return v.is_zero() ? ParamScalar(0) : v.coefficient(0).constant_value();
    }

    static int integer_arg(const Expr &e) {
        ParamScalar v = scalar(e);
        if (!v.is_constant() || !v.constant_value().is_integer()) throw EvalError("expected an integer", e.position);
        return static_cast<int>(v.constant_value().to_long());
    }

};

} // namespace detail

/// Evaluates an expression as an operator on monomial spaces.
inline DiffOp evaluate(const Expr &e) { return detail::Evaluator<DiffOp>().eval(e); }
inline DiffOp evaluate(std::string_view src) { return evaluate(parse(src)); }

/// Evaluates an expression as a 2x2 operator on p + f q.
inline MatOp evaluate(const Expr &e, const QuadSpace &s) { return detail::Evaluator<MatOp>(s).eval(e); }
inline MatOp evaluate(std::string_view src, const QuadSpace &s) { return evaluate(parse(src), s); }

/// Constant value of an expression in Q(a).
inline ParamScalar evaluate_scalar(const Expr &e) {
    DiffOp v = evaluate(e);
    if (!v.is_scalar()) throw EvalError("expected a constant", e.position);
    return v.is_zero() ? ParamScalar(0) : v.coefficient(0).constant_value();
}

namespace detail {

inline int space_int(const Expr &e) {
    ParamScalar v = evaluate_scalar(e);
    if (!v.is_constant() || !v.constant_value().is_integer()) throw EvalError("expected an integer", e.position);
    return static_cast<int>(v.constant_value().to_long());
}

} // namespace detail

/// V1(n,m,a), P(n), Quad(r=..., n, m), SqrtP2(n,lambda), RatioSqrt(n,lambda), Lame(n,k2).
inline Space evaluate_space(const Expr &e) {
    if (e.kind != Kind::call) throw EvalError("expected a space literal", e.position);
    const std::string &n = e.name;
    auto want = [&](std::size_t k) {
        if (e.children.size() != k) throw EvalError(n + " takes " + std::to_string(k) + " arguments", e.position);
    };
    auto arg = [&](std::size_t i) -> const Expr & { return e.children[i]; };
    try {
        if (n == "V1") {
            want(3);
            ParamScalar a = evaluate_scalar(arg(2));
            std::optional<Rational> a0;
            if (a.is_constant()) a0 = a.constant_value();
            else if (!(a == param_a())) throw EvalError("a must be the symbol a or a rational", arg(2).position);
            return V1Space(detail::space_int(arg(0)), detail::space_int(arg(1)), a0);
        }
        if (n == "P") {
            want(1);
            return V1Space::polynomial(detail::space_int(arg(0)));
        }
        if (n == "Quad") {
            want(3);
            std::optional<std::size_t> ri;
            std::vector<std::size_t> rest;
            for (std::size_t i = 0; i < 3; ++i) {
                if (e.keys[i] == "r") ri = i;
                else if (!e.keys[i].empty()) throw EvalError("unknown keyword '" + e.keys[i] + "'", arg(i).position);
                else rest.push_back(i);
            }
            if (!ri) {
                ri = rest.front();
                rest.erase(rest.begin());
            }
            DiffOp r = evaluate(arg(*ri));
            if (!r.is_multiplication()) throw EvalError("r must be a function of x", arg(*ri).position);
            return QuadSpace(r.coefficient(0), detail::space_int(arg(rest[0])), detail::space_int(arg(rest[1])));
        }
        if (n == "SqrtP2" || n == "RatioSqrt" || n == "Lame") {
            want(2);
            const int deg = detail::space_int(arg(0));
            const ParamScalar p = evaluate_scalar(arg(1));
            if (n == "SqrtP2") return sqrt_p2(deg, p);
            if (n == "RatioSqrt") return ratio_sqrt(deg, p);
            return lame_space(deg, p);
        }
    } catch (const EvalError &) {
        throw;
    } catch (const ParseError &) {
        throw;
    } catch (const Error &err) {
        throw EvalError(err.what(), e.position);
    }
    throw EvalError("unknown space '" + n + "'", e.position);
}

inline Space parse_space(std::string_view src) { return evaluate_space(parse(src)); }

} // namespace qes::dsl
