#pragma once

#include <algorithm>
#include <cctype>
#include <numeric>
#include <optional>
#include <unordered_map>
#include <fstream>
#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "qsym/partlin.hpp"
#include "qsym/sparse_tensor.hpp"

namespace qsym::dsl {

struct SourcePos {
    int line = 1, col = 1;
    std::string str() const { return std::to_string(line) + ":" + std::to_string(col); }
};

struct syntax_error : invalid_input {
    SourcePos pos;
    syntax_error(const SourcePos& p, const std::string& msg) : invalid_input("at " + p.str() + ": " + msg), pos(p) {}
};

struct arity_error : invalid_input {
    SourcePos pos;
    arity_error(const SourcePos& p, const std::string& msg) : invalid_input("arity error at " + p.str() + ": " + msg), pos(p) {}
};

enum class Kind { literal, builtin, ref, unary, swap, scale, neg, binary };
enum class BinOp { compose, tensor, add, sub };
enum class UnOp { adj, rotl, rotr, asym };

struct Node;
using NodePtr = std::shared_ptr<const Node>;

struct Node {
    Kind kind;
    SourcePos pos;
    Partition lit;               // literal
    std::string name;            // builtin or ref name
    std::vector<int> args;       // builtin integer args; swap position
    UnOp un{};
    BinOp bin{};
    PolyQ poly;                  // scale
    NodePtr a, b;
};

/// Structural equality (positions ignored).
inline bool same(const NodePtr& x, const NodePtr& y) {
    if (!x || !y) return !x && !y;
    if (x->kind != y->kind) return false;
    switch (x->kind) {
        case Kind::literal: return x->lit == y->lit;
        case Kind::builtin: return x->name == y->name && x->args == y->args;
        case Kind::ref: return x->name == y->name;
        case Kind::unary: return x->un == y->un && same(x->a, y->a);
        case Kind::swap: return x->args == y->args && same(x->a, y->a);
        case Kind::scale: return x->poly == y->poly && same(x->a, y->a);
        case Kind::neg: return same(x->a, y->a);
        case Kind::binary: return x->bin == y->bin && same(x->a, y->a) && same(x->b, y->b);
    }
    return false;
}

/// Fully parenthesized text that parses back to the same tree.
inline std::string print(const NodePtr& n) {
    switch (n->kind) {
        case Kind::literal: return n->lit.str();
        case Kind::builtin: {
            if (n->args.empty()) return n->name;
            std::string s = n->name + "(";
            for (std::size_t i = 0; i < n->args.size(); ++i) s += (i ? "," : "") + std::to_string(n->args[i]);
            return s + ")";
        }
        case Kind::ref: return n->name;
        case Kind::unary: {
            const char* names[] = {"adj", "rotl", "rotr", "asym"};
            return std::string(names[static_cast<int>(n->un)]) + "(" + print(n->a) + ")";
        }
        case Kind::swap: return "swap(" + print(n->a) + ", " + std::to_string(n->args[0]) + ")";
        case Kind::scale: return "scale(poly(" + n->poly.str() + "), " + print(n->a) + ")";
        case Kind::neg: return "-(" + print(n->a) + ")";
        case Kind::binary: {
            const char* ops[] = {" * ", " ox ", " + ", " - "};
            return "(" + print(n->a) + ops[static_cast<int>(n->bin)] + print(n->b) + ")";
        }
    }
    return "";
}

namespace detail {

enum class Tok { ident, number, lparen, rparen, comma, star, plus, minus, other, end };

struct Token {
    Tok t;
    std::string text;
    SourcePos pos;
    std::size_t offset;
};

inline bool is_builtin_word(const std::string& w) {
    static const char* words[] = {"id",   "cap",  "cup",  "cross", "sing",  "merge", "fork", "block", "pk",   "swap",
                                  "compose", "tensor", "adj", "rotl", "rotr", "asym", "scale", "poly",  "ox", "P"};
    for (const char* x : words)
        if (w == x) return true;
    if (w.size() > 2 && w.compare(0, 2, "id") == 0 &&
        std::all_of(w.begin() + 2, w.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }))
        return true;
    return false;
}

class Parser {
public:
    Parser(const std::string& src, SourcePos base) : s_(src), base_(base) { lex(); }

    NodePtr parse_all() {
        NodePtr e = sum();
        if (cur().t != Tok::end) throw syntax_error(cur().pos, "unexpected '" + cur().text + "'");
        return e;
    }

private:
    const std::string& s_;
    SourcePos base_;
    std::vector<Token> toks_;
    std::size_t i_ = 0;

    SourcePos pos_at(std::size_t off) const {
        SourcePos p = base_;
        for (std::size_t k = 0; k < off && k < s_.size(); ++k) {
            if (s_[k] == '\n') {
                ++p.line;
                p.col = 1;
            } else {
                ++p.col;
            }
        }
        return p;
    }

    void lex() {
        std::size_t k = 0;
        while (k < s_.size()) {
            char c = s_[k];
            if (std::isspace(static_cast<unsigned char>(c))) {
                ++k;
                continue;
            }
            Token t{Tok::end, std::string(1, c), pos_at(k), k};
            if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
                std::size_t st = k;
                while (k < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[k])) || s_[k] == '_')) ++k;
                t.t = Tok::ident;
                t.text = s_.substr(st, k - st);
                toks_.push_back(t);
                continue;
            }
            if (std::isdigit(static_cast<unsigned char>(c))) {
                std::size_t st = k;
                while (k < s_.size() && std::isdigit(static_cast<unsigned char>(s_[k]))) ++k;
                t.t = Tok::number;
                t.text = s_.substr(st, k - st);
                toks_.push_back(t);
                continue;
            }
            switch (c) {
                case '(': t.t = Tok::lparen; break;
                case ')': t.t = Tok::rparen; break;
                case ',': t.t = Tok::comma; break;
                case '*': t.t = Tok::star; break;
                case '+': t.t = Tok::plus; break;
                case '-': t.t = Tok::minus; break;
                default:
                    // characters inside partition literals and polynomials are re-read from the source
                    t.t = Tok::other;
                    break;
            }
            toks_.push_back(t);
            ++k;
        }
        toks_.push_back({Tok::end, "end of input", pos_at(s_.size()), s_.size()});
    }

    const Token& cur() const { return toks_[i_]; }
    bool at(Tok t) const { return cur().t == t; }
    bool at_word(const char* w) const { return cur().t == Tok::ident && cur().text == w; }
    const Token& expect(Tok t, const char* what) {
        if (!at(t)) throw syntax_error(cur().pos, std::string("expected ") + what + ", found '" + cur().text + "'");
        return toks_[i_++];
    }
    // moves the token cursor to the first token at or after a source offset
    void resync(std::size_t off) {
        while (i_ < toks_.size() && toks_[i_].offset < off) ++i_;
    }

    static NodePtr make(Node n) { return std::make_shared<const Node>(std::move(n)); }

    NodePtr sum() {
        NodePtr acc = tens();
        for (;;) {
            if (at(Tok::plus) || at(Tok::minus)) {
                Node n;
                n.kind = Kind::binary;
                n.bin = at(Tok::plus) ? BinOp::add : BinOp::sub;
                n.pos = cur().pos;
                ++i_;
                n.a = acc;
                n.b = tens();
                acc = make(std::move(n));
            } else {
                return acc;
            }
        }
    }
    NodePtr tens() {
        NodePtr acc = prod();
        while (at_word("ox")) {
            Node n;
            n.kind = Kind::binary;
            n.bin = BinOp::tensor;
            n.pos = cur().pos;
            ++i_;
            n.a = acc;
            n.b = prod();
            acc = make(std::move(n));
        }
        return acc;
    }
    NodePtr prod() {
        NodePtr acc = unary();
        while (at(Tok::star)) {
            Node n;
            n.kind = Kind::binary;
            n.bin = BinOp::compose;
            n.pos = cur().pos;
            ++i_;
            n.a = acc;
            n.b = unary();
            acc = make(std::move(n));
        }
        return acc;
    }

    int integer_arg() {
        const Token& t = expect(Tok::number, "an integer");
        if (t.text.size() > 4) throw syntax_error(t.pos, "integer argument too large");
        return std::stoi(t.text);
    }

    // Reads a balanced parenthesized span starting at the current '(' and returns the inner text.
    std::string balanced_text(std::size_t& end_off) {
        const Token& open = expect(Tok::lparen, "'('");
        std::size_t k = open.offset + 1;
        int depth = 1;
        std::size_t st = k;
        while (k < s_.size() && depth > 0) {
            if (s_[k] == '(') ++depth;
            if (s_[k] == ')') --depth;
            ++k;
        }
        if (depth != 0) throw syntax_error(open.pos, "unbalanced parentheses");
        end_off = k;
        return s_.substr(st, k - 1 - st);
    }

    PolyQ poly_arg() {
        SourcePos p = cur().pos;
        std::string text;
        std::size_t end_off = 0;
        if (at_word("poly")) {
            ++i_;
            text = balanced_text(end_off);
        } else {
            // bare polynomial up to the top-level comma
            std::size_t st = cur().offset, k = st;
            int depth = 0;
            while (k < s_.size() && !(depth == 0 && s_[k] == ',')) {
                if (s_[k] == '(') ++depth;
                if (s_[k] == ')') {
                    if (depth == 0) break;
                    --depth;
                }
                ++k;
            }
            text = s_.substr(st, k - st);
            end_off = k;
        }
        resync(end_off);
        try {
            return parse_poly(text);
        } catch (const invalid_input& e) {
            throw syntax_error(p, e.what());
        }
    }

    NodePtr unary() {
        const Token& t = cur();
        if (at(Tok::minus)) {
            ++i_;
            Node n;
            n.kind = Kind::neg;
            n.pos = t.pos;
            n.a = unary();
            return make(std::move(n));
        }
        if (at(Tok::lparen)) {
            ++i_;
            NodePtr e = sum();
            expect(Tok::rparen, "')'");
            return e;
        }
        if (!at(Tok::ident)) throw syntax_error(t.pos, "expected an expression, found '" + t.text + "'");
        const std::string w = t.text;
        const SourcePos p = t.pos;
        const std::size_t off = t.offset;
        ++i_;
        Node n;
        n.pos = p;
        if (w == "P" && at(Tok::lparen)) {
            std::size_t k = off;
            try {
                n.lit = parse_partition_at(s_, k);
            } catch (const invalid_input& e) {
                throw syntax_error(p, e.what());
            }
            n.kind = Kind::literal;
            resync(k);
            return make(std::move(n));
        }
        if (w == "adj" || w == "rotl" || w == "rotr" || w == "asym") {
            n.kind = Kind::unary;
            n.un = w == "adj" ? UnOp::adj : w == "rotl" ? UnOp::rotl : w == "rotr" ? UnOp::rotr : UnOp::asym;
            expect(Tok::lparen, "'('");
            n.a = sum();
            expect(Tok::rparen, "')'");
            return make(std::move(n));
        }
        if (w == "compose" || w == "tensor") {
            n.kind = Kind::binary;
            n.bin = w == "compose" ? BinOp::compose : BinOp::tensor;
            expect(Tok::lparen, "'('");
            n.a = sum();
            expect(Tok::comma, "','");
            n.b = sum();
            expect(Tok::rparen, "')'");
            return make(std::move(n));
        }
        if (w == "scale") {
            n.kind = Kind::scale;
            expect(Tok::lparen, "'('");
            n.poly = poly_arg();
            expect(Tok::comma, "','");
            n.a = sum();
            expect(Tok::rparen, "')'");
            return make(std::move(n));
        }
        if (w == "swap") {
            n.kind = Kind::swap;
            expect(Tok::lparen, "'('");
            n.a = sum();
            expect(Tok::comma, "','");
            n.args.push_back(integer_arg());
            expect(Tok::rparen, "')'");
            return make(std::move(n));
        }
        n.kind = Kind::builtin;
        if (w == "cap" || w == "cup" || w == "cross" || w == "sing" || w == "merge" || w == "fork") {
            n.name = w;
            return make(std::move(n));
        }
        if (w.size() > 2 && w.compare(0, 2, "id") == 0 && is_builtin_word(w)) {
            if (w.size() > 6) throw syntax_error(p, "identity size too large");
            n.name = "id";
            n.args.push_back(std::stoi(w.substr(2)));
            return make(std::move(n));
        }
        if (w == "id" || w == "pk") {
            n.name = w;
            expect(Tok::lparen, "'('");
            n.args.push_back(integer_arg());
            expect(Tok::rparen, "')'");
            return make(std::move(n));
        }
        if (w == "block") {
            n.name = w;
            expect(Tok::lparen, "'('");
            n.args.push_back(integer_arg());
            expect(Tok::comma, "','");
            n.args.push_back(integer_arg());
            expect(Tok::rparen, "')'");
            return make(std::move(n));
        }
        if (is_builtin_word(w)) throw syntax_error(p, "'" + w + "' cannot be used here");
        n.kind = Kind::ref;
        n.name = w;
        return make(std::move(n));
    }
};

}  // namespace detail

inline NodePtr parse(const std::string& text, SourcePos base = {}) { return detail::Parser(text, base).parse_all(); }

struct Arity {
    int k = 0, l = 0;
};

/// Named bindings; each name maps to a parsed expression.
class Env {
public:
    void bind(const std::string& name, NodePtr e, const SourcePos& p = {}) {
        if (detail::is_builtin_word(name)) throw syntax_error(p, "'" + name + "' is a reserved word");
        if (defs_.count(name)) throw syntax_error(p, "'" + name + "' is already defined");
        defs_[name] = std::move(e);
    }
    const NodePtr* find(const std::string& name) const {
        auto it = defs_.find(name);
        return it == defs_.end() ? nullptr : &it->second;
    }

    mutable std::map<std::string, Arity> arity_cache;
    mutable std::map<std::string, PartLin> value_cache;

private:
    std::map<std::string, NodePtr> defs_;
};

inline Arity builtin_arity(const Node& n) {
    const auto& w = n.name;
    if (w == "cap") return {2, 0};
    if (w == "cup") return {0, 2};
    if (w == "cross") return {2, 2};
    if (w == "sing") return {0, 1};
    if (w == "merge") return {2, 1};
    if (w == "fork") return {1, 2};
    if (w == "id") {
        if (n.args[0] < 0) throw arity_error(n.pos, "id needs k >= 0");
        return {n.args[0], n.args[0]};
    }
    if (w == "pk") {
        if (n.args[0] < 1) throw arity_error(n.pos, "pk needs k >= 1");
        return {0, 2 * n.args[0]};
    }
    if (w == "block") {
        if (n.args[0] + n.args[1] < 1) throw arity_error(n.pos, "block needs at least one point");
        return {n.args[0], n.args[1]};
    }
    throw arity_error(n.pos, "unknown builtin '" + w + "'");
}

inline Partition builtin_partition(const Node& n) {
    const auto& w = n.name;
    if (w == "cap") return cap_partition();
    if (w == "cup") return cup_partition();
    if (w == "cross") return cross_partition();
    if (w == "sing") return singleton_partition();
    if (w == "merge") return merge_partition();
    if (w == "fork") return fork_partition();
    if (w == "id") return identity_partition(n.args[0]);
    if (w == "pk") return pk_partition(n.args[0]);
    return block_partition(n.args[0], n.args[1]);
}

/// Arity inference; every mismatch is reported with the offending node's position.
inline Arity check(const NodePtr& n, const Env& env, std::vector<std::string>* stack = nullptr) {
    std::vector<std::string> local;
    if (!stack) stack = &local;
    switch (n->kind) {
        case Kind::literal: return {n->lit.k(), n->lit.l()};
        case Kind::builtin: return builtin_arity(*n);
        case Kind::ref: {
            if (auto it = env.arity_cache.find(n->name); it != env.arity_cache.end()) return it->second;
            const NodePtr* d = env.find(n->name);
            if (!d) throw syntax_error(n->pos, "unknown identifier '" + n->name + "'");
            if (std::find(stack->begin(), stack->end(), n->name) != stack->end())
                throw syntax_error(n->pos, "recursive definition of '" + n->name + "'");
            stack->push_back(n->name);
            Arity a = check(*d, env, stack);
            stack->pop_back();
            env.arity_cache[n->name] = a;
            return a;
        }
        case Kind::unary: {
            Arity a = check(n->a, env, stack);
            switch (n->un) {
                case UnOp::adj: return {a.l, a.k};
                case UnOp::rotl:
                case UnOp::rotr:
                    if (a.k == 0) throw arity_error(n->pos, "rotation needs an upper point");
                    return {a.k - 1, a.l + 1};
                case UnOp::asym:
                    if (a.k % 2 || a.l % 2)
                        throw arity_error(n->pos, "asym needs even point counts, got (" + std::to_string(a.k) + "," +
                                                      std::to_string(a.l) + ")");
                    return a;
            }
            return a;
        }
        case Kind::swap: {
            Arity a = check(n->a, env, stack);
            if (a.l % 2) throw arity_error(n->pos, "swap needs a lower row of two-points");
            int i = n->args[0];
            if (i < 1 || i + 1 > a.l / 2)
                throw arity_error(n->pos, "swap position " + std::to_string(i) + " out of range");
            return a;
        }
        case Kind::scale:
        case Kind::neg: return check(n->a, env, stack);
        case Kind::binary: {
            Arity x = check(n->a, env, stack), y = check(n->b, env, stack);
            switch (n->bin) {
                case BinOp::compose:
                    if (x.k != y.l)
                        throw arity_error(n->pos, "composition of (" + std::to_string(x.k) + "," + std::to_string(x.l) +
                                                      ") after (" + std::to_string(y.k) + "," + std::to_string(y.l) + ")");
                    return {y.k, x.l};
                case BinOp::tensor: return {x.k + y.k, x.l + y.l};
                case BinOp::add:
                case BinOp::sub:
                    if (x.k != y.k || x.l != y.l)
                        throw arity_error(n->pos, "sum of (" + std::to_string(x.k) + "," + std::to_string(x.l) + ") and (" +
                                                      std::to_string(y.k) + "," + std::to_string(y.l) + ")");
                    return x;
            }
        }
    }
    return {};
}

/// Formal evaluation in the partition span.
inline PartLin eval(const NodePtr& n, const Env& env) {
    switch (n->kind) {
        case Kind::literal: return PartLin(n->lit);
        case Kind::builtin: return PartLin(builtin_partition(*n));
        case Kind::ref: {
            if (auto it = env.value_cache.find(n->name); it != env.value_cache.end()) return it->second;
            const NodePtr* d = env.find(n->name);
            if (!d) throw syntax_error(n->pos, "unknown identifier '" + n->name + "'");
            check(*d, env);
            PartLin v = eval(*d, env);
            env.value_cache[n->name] = v;
            return v;
        }
        case Kind::unary: {
            PartLin a = eval(n->a, env);
            switch (n->un) {
                case UnOp::adj: return adjoint(a);
                case UnOp::rotl: return rotate(a, Side::left, Direction::down);
                case UnOp::rotr: return rotate(a, Side::right, Direction::down);
                case UnOp::asym: return antisymmetrize(a);
            }
            return a;
        }
        case Kind::swap: return two_point_swap(eval(n->a, env), n->args[0]);
        case Kind::scale: return eval(n->a, env) * n->poly;
        case Kind::neg: return -eval(n->a, env);
        case Kind::binary: {
            PartLin x = eval(n->a, env), y = eval(n->b, env);
            switch (n->bin) {
                case BinOp::compose: return compose(x, y);
                case BinOp::tensor: return tensor(x, y);
                case BinOp::add: return x + y;
                case BinOp::sub: return x - y;
            }
        }
    }
    return {};
}

/// Parses, checks and evaluates one expression.
inline PartLin eval_text(const std::string& text, const Env& env = Env{}) {
    NodePtr n = parse(text);
    check(n, env);
    return eval(n, env);
}

// ---------------------------------------------------------------------------------------------
// Tensor-state evaluation at n := N. Operators act on windows of a sparse integer state with a
// common denominator; nothing here goes through partition composition.

/// Sparse integer tensor with a common denominator. A two-point (a, a+1) listed in alt is known to
/// be antisymmetric and only its entries with index a < index a+1 are stored.
struct State {
    std::uint32_t N = 1;
    std::size_t axes = 0;
    std::unordered_map<std::uint64_t, long long> v;
    long long den = 1;
    std::vector<std::size_t> alt;
};

namespace detail {

inline long long checked_mul(long long a, long long b) {
    long long r;
    if (__builtin_mul_overflow(a, b, &r)) throw guard_error("tensor oracle: integer overflow");
    return r;
}
inline long long checked_add(long long a, long long b) {
    long long r;
    if (__builtin_add_overflow(a, b, &r)) throw guard_error("tensor oracle: integer overflow");
    return r;
}

inline void accumulate(std::unordered_map<std::uint64_t, long long>& m, std::uint64_t k, long long x) {
    if (!x) return;
    auto [it, fresh] = m.try_emplace(k, x);
    if (!fresh) {
        it->second = checked_add(it->second, x);
        if (!it->second) m.erase(it);
    }
}

inline std::uint64_t ipow(std::uint64_t b, std::size_t e) {
    std::uint64_t r = 1;
    for (std::size_t i = 0; i < e; ++i) {
        if (r > (std::uint64_t(1) << 62) / (b ? b : 1)) throw guard_error("tensor oracle: index space too large");
        r *= b;
    }
    return r;
}

inline bool has_alt(const State& s, std::size_t a) { return std::find(s.alt.begin(), s.alt.end(), a) != s.alt.end(); }

// Stores both orderings of the two-point at a again.
inline void expand_pair(State& s, std::size_t a) {
    auto it = std::find(s.alt.begin(), s.alt.end(), a);
    if (it == s.alt.end()) return;
    s.alt.erase(it);
    const std::uint64_t Pa = ipow(s.N, s.axes - 1 - a), Pb = Pa / s.N;
    std::unordered_map<std::uint64_t, long long> r;
    r.reserve(s.v.size() * 2);
    for (const auto& [k, x] : s.v) {
        std::uint64_t d1 = (k / Pa) % s.N, d2 = (k / Pb) % s.N;
        r.emplace(k, x);
        r.emplace(k - d1 * Pa - d2 * Pb + d2 * Pa + d1 * Pb, -x);
    }
    s.v.swap(r);
}

// Expands every reduced two-point meeting the axis window [lo, hi), or split by an insertion at lo.
inline void expand_window(State& s, std::size_t lo, std::size_t hi) {
    auto alt = s.alt;
    for (auto a : alt)
        if (a < hi && a + 1 >= lo) expand_pair(s, a);
}

inline void expand_all(State& s) {
    auto alt = s.alt;
    for (auto a : alt) expand_pair(s, a);
}

// Brings both states to the same set of reduced two-points.
inline void align(State& x, State& y) {
    for (auto a : std::vector<std::size_t>(x.alt))
        if (!has_alt(y, a)) expand_pair(x, a);
    for (auto a : std::vector<std::size_t>(y.alt))
        if (!has_alt(x, a)) expand_pair(y, a);
}

class Oracle {
public:
    Oracle(const Env& env, std::uint32_t N) : env_(env), N_(N) {}

    State scalar() const {
        State s;
        s.N = N_;
        s.v[0] = 1;
        return s;
    }
    /// Identity on k window axes with k spectator axes behind them.
    State identity(int k) const {
        State s;
        s.N = N_;
        s.axes = static_cast<std::size_t>(2 * k);
        const std::uint64_t V = ipow(N_, static_cast<std::size_t>(k));
        config::require_sparse(V, "tensor oracle identity state");
        for (std::uint64_t x = 0; x < V; ++x) s.v[x * V + x] = 1;
        return s;
    }

    State apply(const NodePtr& n, const State& s, std::size_t off) {
        switch (n->kind) {
            case Kind::literal: return apply_partition(n->lit, s, off);
            case Kind::builtin: return apply_partition(builtin_partition(*n), s, off);
            case Kind::ref: {
                const NodePtr* d = env_.find(n->name);
                if (!d) throw syntax_error(n->pos, "unknown identifier '" + n->name + "'");
                return apply(*d, s, off);
            }
            case Kind::unary: {
                Arity a = check(n->a, env_);
                if (n->un == UnOp::asym) {
                    State t = s;
                    for (int p = 0; p < a.k / 2; ++p) t = antisym_pair(t, off + 2 * static_cast<std::size_t>(p));
                    t = apply(n->a, t, off);
                    for (int p = 0; p < a.l / 2; ++p) t = antisym_pair(t, off + 2 * static_cast<std::size_t>(p));
                    return t;
                }
                // materialize, transform the operator axes, then apply
                State op = apply(n->a, identity(a.k), 0);  // axes: l outputs, k inputs
                expand_all(op);
                std::vector<std::size_t> perm;
                int nk = a.k, nl = a.l;
                const auto L = static_cast<std::size_t>(a.l), K = static_cast<std::size_t>(a.k);
                if (n->un == UnOp::adj) {
                    for (std::size_t i = 0; i < K; ++i) perm.push_back(L + i);
                    for (std::size_t i = 0; i < L; ++i) perm.push_back(i);
                    std::swap(nk, nl);
                } else if (n->un == UnOp::rotl) {
                    perm.push_back(L);
                    for (std::size_t i = 0; i < L; ++i) perm.push_back(i);
                    for (std::size_t i = 1; i < K; ++i) perm.push_back(L + i);
                    --nk, ++nl;
                } else {
                    for (std::size_t i = 0; i < L; ++i) perm.push_back(i);
                    perm.push_back(L + K - 1);
                    for (std::size_t i = 0; i + 1 < K; ++i) perm.push_back(L + i);
                    --nk, ++nl;
                }
                return apply_operator(permute_axes(op, perm), nk, nl, s, off);
            }
            case Kind::swap: {
                State t = apply(n->a, s, off);
                std::size_t w = off + 2 * static_cast<std::size_t>(n->args[0] - 1);
                t = antisym_pair(antisym_pair(t, w), w + 2);
                t = apply_partition(Partition::from_labels(4, 4, {0, 1, 2, 3, 2, 3, 0, 1}), t, w);
                return antisym_pair(antisym_pair(t, w), w + 2);
            }
            case Kind::scale: {
                State t = apply(n->a, s, off);
                Q c = n->poly(Q(N_));
                return scaled(t, c);
            }
            case Kind::neg: return scaled(apply(n->a, s, off), Q(-1));
            case Kind::binary: {
                Arity x = check(n->a, env_);
                switch (n->bin) {
                    case BinOp::compose: return apply(n->a, apply(n->b, s, off), off);
                    case BinOp::tensor: {
                        State t = apply(n->b, s, off + static_cast<std::size_t>(x.k));
                        return apply(n->a, t, off);
                    }
                    case BinOp::add:
                    case BinOp::sub: return combine(apply(n->a, s, off), apply(n->b, s, off), n->bin == BinOp::sub);
                }
            }
        }
        return s;
    }

    static State combine(State x, State y, bool subtract) {
        if (x.axes != y.axes) throw invalid_input("tensor oracle: shape mismatch");
        align(x, y);
        State r;
        r.N = x.N;
        r.axes = x.axes;
        r.alt = x.alt;
        long long g = std::gcd(x.den, y.den);
        long long fx = y.den / g, fy = x.den / g;
        r.den = checked_mul(x.den, fx);
        r.v.reserve(x.v.size() + y.v.size());
        for (const auto& [k, a] : x.v) accumulate(r.v, k, checked_mul(a, fx));
        for (const auto& [k, a] : y.v) accumulate(r.v, k, checked_mul(subtract ? -a : a, fy));
        return r;
    }

    static bool equal(State x, State y) {
        if (x.axes != y.axes) return false;
        align(x, y);
        if (x.v.size() != y.v.size()) return false;
        for (const auto& [k, a] : x.v) {
            auto it = y.v.find(k);
            if (it == y.v.end()) return false;
            if (static_cast<__int128>(a) * y.den != static_cast<__int128>(it->second) * x.den) return false;
        }
        return true;
    }

private:
    const Env& env_;
    std::uint32_t N_;

    static State scaled(State t, const Q& c) {
        long long p = static_cast<long long>(boost::multiprecision::numerator(c));
        long long q = static_cast<long long>(boost::multiprecision::denominator(c));
        if (p == 0) {
            t.v.clear();
            return t;
        }
        for (auto& kv : t.v) kv.second = checked_mul(kv.second, p);
        t.den = checked_mul(t.den, q);
        return t;
    }

    // (x (x) y - y (x) x) / 2 on axes (a, a+1), stored reduced.
    State antisym_pair(State s, std::size_t a) const {
        if (has_alt(s, a)) return s;
        if (a > 0) expand_pair(s, a - 1);
        expand_pair(s, a + 1);
        const std::uint64_t Pa = ipow(N_, s.axes - 1 - a), Pb = Pa / N_;
        State r;
        r.N = N_;
        r.axes = s.axes;
        r.alt = s.alt;
        r.alt.push_back(a);
        r.den = checked_mul(s.den, 2);
        r.v.reserve(s.v.size());
        for (const auto& [k, x] : s.v) {
            std::uint64_t d1 = (k / Pa) % N_, d2 = (k / Pb) % N_;
            if (d1 < d2)
                accumulate(r.v, k, x);
            else if (d1 > d2)
                accumulate(r.v, k - d1 * Pa - d2 * Pb + d2 * Pa + d1 * Pb, -x);
        }
        return r;
    }

    // Window [off, off+K) of s replaced by L new axes; reduced two-points behind it move along.
    static void prepare_window(State& s, State& r, std::size_t off, std::size_t K, std::size_t L) {
        expand_window(s, off, off + K);
        for (auto a : s.alt) r.alt.push_back(a < off ? a : a + L - K);
    }

    State apply_partition(const Partition& p, State s, std::size_t off) const {
        const auto K = static_cast<std::size_t>(p.k()), L = static_cast<std::size_t>(p.l());
        if (off + K > s.axes) throw invalid_input("tensor oracle: window exceeds state");
        if (p == identity_partition(p.k())) return s;
        State r;
        r.N = N_;
        r.axes = s.axes - K + L;
        ipow(N_, r.axes);
        r.den = s.den;
        prepare_window(s, r, off, K, L);
        const std::size_t rest = s.axes - off - K;
        const std::uint64_t Prest = ipow(N_, rest), PK = ipow(N_, K), PL = ipow(N_, L);
        const int B = p.block_count();
        std::vector<long long> val(static_cast<std::size_t>(B));
        std::vector<int> free_blocks;
        {
            std::vector<char> has_upper(static_cast<std::size_t>(B), 0);
            for (int i = 0; i < p.k(); ++i) has_upper[static_cast<std::size_t>(p.upper(i))] = 1;
            std::vector<char> seen(static_cast<std::size_t>(B), 0);
            for (int j = 0; j < p.l(); ++j) {
                int b = p.lower(j);
                if (!has_upper[static_cast<std::size_t>(b)] && !seen[static_cast<std::size_t>(b)]) {
                    seen[static_cast<std::size_t>(b)] = 1;
                    free_blocks.push_back(b);
                }
            }
        }
        const std::uint64_t nfree = ipow(N_, free_blocks.size());
        r.v.reserve(s.v.size());
        std::vector<std::uint32_t> digits(K);
        for (const auto& [key, x] : s.v) {
            const std::uint64_t post = key % Prest;
            const std::uint64_t win = (key / Prest) % PK;
            const std::uint64_t pre = key / Prest / PK;
            std::uint64_t t = win;
            for (std::size_t i = K; i-- > 0;) {
                digits[i] = static_cast<std::uint32_t>(t % N_);
                t /= N_;
            }
            std::fill(val.begin(), val.end(), -1);
            bool ok = true;
            for (std::size_t i = 0; i < K && ok; ++i) {
                auto& b = val[static_cast<std::size_t>(p.upper(static_cast<int>(i)))];
                if (b == -1)
                    b = digits[i];
                else if (b != digits[i])
                    ok = false;
            }
            if (!ok) continue;
            for (std::uint64_t f = 0; f < nfree; ++f) {
                std::uint64_t ff = f;
                for (std::size_t q = free_blocks.size(); q-- > 0;) {
                    val[static_cast<std::size_t>(free_blocks[q])] = static_cast<long long>(ff % N_);
                    ff /= N_;
                }
                std::uint64_t out = 0;
                for (std::size_t j = 0; j < L; ++j) out = out * N_ + static_cast<std::uint64_t>(val[static_cast<std::size_t>(p.lower(static_cast<int>(j)))]);
                accumulate(r.v, (pre * PL + out) * Prest + post, x);
            }
        }
        return r;
    }

    State permute_axes(State s, const std::vector<std::size_t>& perm) const {
        expand_all(s);
        State r;
        r.N = N_;
        r.axes = s.axes;
        r.den = s.den;
        std::vector<std::uint64_t> P(s.axes);
        for (std::size_t i = 0; i < s.axes; ++i) P[i] = ipow(N_, s.axes - 1 - i);
        for (const auto& [k, x] : s.v) {
            std::uint64_t nk = 0;
            for (std::size_t i = 0; i < s.axes; ++i) nk += ((k / P[perm[i]]) % N_) * P[i];
            r.v[nk] = x;
        }
        return r;
    }

    // op: axes (nl outputs, nk inputs) with its own denominator, fully expanded.
    State apply_operator(const State& op, int nk, int nl, State s, std::size_t off) const {
        const auto K = static_cast<std::size_t>(nk), L = static_cast<std::size_t>(nl);
        if (off + K > s.axes) throw invalid_input("tensor oracle: window exceeds state");
        State r;
        r.N = N_;
        r.axes = s.axes - K + L;
        r.den = checked_mul(s.den, op.den);
        prepare_window(s, r, off, K, L);
        const std::size_t rest = s.axes - off - K;
        const std::uint64_t Prest = ipow(N_, rest), PK = ipow(N_, K), PL = ipow(N_, L);
        std::unordered_map<std::uint64_t, std::vector<std::pair<std::uint64_t, long long>>> by_in;
        for (const auto& [k, x] : op.v) by_in[k % PK].push_back({k / PK, x});
        for (const auto& [key, x] : s.v) {
            const std::uint64_t post = key % Prest, win = (key / Prest) % PK, pre = key / Prest / PK;
            auto it = by_in.find(win);
            if (it == by_in.end()) continue;
            for (const auto& [o, y] : it->second) accumulate(r.v, (pre * PL + o) * Prest + post, checked_mul(x, y));
        }
        return r;
    }
};

}  // namespace detail

/// Evaluates an expression at n := N by acting on tensors directly.
inline State evaluate_state(const NodePtr& n, const Env& env, std::uint32_t N) {
    Arity a = check(n, env);
    detail::Oracle o(env, N);
    State start = a.k == 0 ? o.scalar() : o.identity(a.k);
    return o.apply(n, start, 0);
}

/// Builds the state of a formal combination at n := N through the blockwise-delta functor, in the
/// same layout as evaluate_state (outputs first, then inputs).
inline State state_of(const PartLin& e, std::uint32_t N) {
    State s;
    s.N = N;
    s.axes = static_cast<std::size_t>(e.k() + e.l());
    long long den = 1;
    std::vector<std::pair<long long, long long>> coeffs;
    for (const auto& [p, c] : e.terms()) {
        Q v = c(Q(N));
        coeffs.push_back({static_cast<long long>(boost::multiprecision::numerator(v)),
                          static_cast<long long>(boost::multiprecision::denominator(v))});
        den = std::lcm(den, coeffs.back().second);
    }
    s.den = den;
    std::size_t t = 0;
    for (const auto& [p, c] : e.terms()) {
        auto [num, dd] = coeffs[t++];
        long long w = detail::checked_mul(num, den / dd);
        const int B = p.block_count();
        std::vector<std::uint32_t> val(static_cast<std::size_t>(B), 0);
        const std::uint64_t count = detail::ipow(N, static_cast<std::size_t>(B));
        config::require_sparse(count, "state_of");
        for (std::uint64_t c2 = 0; c2 < count; ++c2) {
            std::uint64_t key = 0;
            for (int j = 0; j < p.l(); ++j) key = key * N + val[static_cast<std::size_t>(p.lower(j))];
            for (int i = 0; i < p.k(); ++i) key = key * N + val[static_cast<std::size_t>(p.upper(i))];
            detail::accumulate(s.v, key, w);
            for (std::size_t q = val.size(); q-- > 0;) {
                if (++val[q] < N) break;
                val[q] = 0;
            }
        }
    }
    return s;
}

// ---------------------------------------------------------------------------------------------
// Fixture files.

struct Statement {
    enum class Type { let, check, coeff } type;
    std::string name;
    SourcePos pos;
    NodePtr lhs, rhs;  // check: lhs == rhs; coeff: lhs on rhs
    PolyQ expected;    // coeff
    std::string text;
};

struct Fixture {
    std::string path;
    Env env;
    std::vector<Statement> statements;
};

namespace detail {

inline std::size_t find_top_level(const std::string& s, const std::string& needle, std::size_t from = 0) {
    int depth = 0, brace = 0;
    for (std::size_t k = from; k + needle.size() <= s.size(); ++k) {
        char c = s[k];
        if (c == '(') ++depth;
        if (c == ')') --depth;
        if (c == '{') ++brace;
        if (c == '}') --brace;
        if (depth == 0 && brace == 0 && s.compare(k, needle.size(), needle) == 0) {
            if (std::isalpha(static_cast<unsigned char>(needle[0]))) {
                bool lb = k == 0 || !std::isalnum(static_cast<unsigned char>(s[k - 1]));
                bool rb = k + needle.size() == s.size() || !std::isalnum(static_cast<unsigned char>(s[k + needle.size()]));
                if (!lb || !rb) continue;
            }
            return k;
        }
    }
    return std::string::npos;
}

inline SourcePos advance(SourcePos p, const std::string& s, std::size_t n) {
    for (std::size_t k = 0; k < n && k < s.size(); ++k) {
        if (s[k] == '\n') {
            ++p.line;
            p.col = 1;
        } else {
            ++p.col;
        }
    }
    return p;
}

inline std::string trim(const std::string& s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

}  // namespace detail

/// Statements start at column 1 with "let", "check" or "coeff"; indented lines continue the previous one.
inline Fixture parse_fixture(const std::string& text, const std::string& path = "<input>") {
    Fixture fx;
    fx.path = path;
    struct Raw {
        std::string body;
        int line;
    };
    std::vector<Raw> raws;
    std::istringstream in(text);
    std::string line;
    int ln = 0;
    while (std::getline(in, line)) {
        ++ln;
        if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
        if (detail::trim(line).empty()) {
            if (!raws.empty()) raws.back().body += "\n";
            continue;
        }
        if (std::isspace(static_cast<unsigned char>(line[0]))) {
            if (raws.empty()) throw syntax_error({ln, 1}, "continuation line without a statement");
            raws.back().body += "\n" + line;
        } else {
            raws.push_back({line, ln});
        }
    }
    for (const auto& r : raws) {
        SourcePos p{r.line, 1};
        const std::string& b = r.body;
        Statement st;
        st.pos = p;
        st.text = b;
        auto kw_end = b.find_first_of(" \t");
        std::string kw = b.substr(0, kw_end);
        if (kw == "let") {
            auto eq = b.find('=');
            if (eq == std::string::npos) throw syntax_error(p, "let needs '='");
            st.type = Statement::Type::let;
            st.name = detail::trim(b.substr(3, eq - 3));
            if (st.name.empty() || !(std::isalpha(static_cast<unsigned char>(st.name[0])) || st.name[0] == '_') ||
                !std::all_of(st.name.begin(), st.name.end(),
                             [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }))
                throw syntax_error(p, "invalid name '" + st.name + "'");
            std::string rhs = b.substr(eq + 1);
            st.lhs = parse(rhs, detail::advance(p, b, eq + 1));
            fx.env.bind(st.name, st.lhs, p);
        } else if (kw == "check" || kw == "coeff") {
            auto colon = b.find(':');
            if (colon == std::string::npos) throw syntax_error(p, kw + " needs 'name:'");
            st.name = detail::trim(b.substr(kw.size(), colon - kw.size()));
            if (st.name.empty()) throw syntax_error(p, "missing statement name");
            std::string body = b.substr(colon + 1);
            SourcePos bp = detail::advance(p, b, colon + 1);
            auto eq = detail::find_top_level(body, "==");
            if (eq == std::string::npos) throw syntax_error(bp, "expected '=='");
            if (kw == "check") {
                st.type = Statement::Type::check;
                st.lhs = parse(body.substr(0, eq), bp);
                st.rhs = parse(body.substr(eq + 2), detail::advance(bp, body, eq + 2));
            } else {
                st.type = Statement::Type::coeff;
                std::string left = body.substr(0, eq);
                auto on = detail::find_top_level(left, "on");
                if (on == std::string::npos) throw syntax_error(bp, "coeff needs 'EXPR on BASIS == POLY'");
                st.lhs = parse(left.substr(0, on), bp);
                st.rhs = parse(left.substr(on + 2), detail::advance(bp, left, on + 2));
                try {
                    st.expected = parse_poly(detail::trim(body.substr(eq + 2)));
                } catch (const invalid_input& e) {
                    throw syntax_error(detail::advance(bp, body, eq + 2), e.what());
                }
            }
        } else {
            throw syntax_error(p, "expected 'let', 'check' or 'coeff', found '" + kw + "'");
        }
        fx.statements.push_back(std::move(st));
    }
    // arity-check everything up front
    for (const auto& st : fx.statements) {
        Arity a = check(st.lhs, fx.env);
        if (st.type == Statement::Type::check || st.type == Statement::Type::coeff) {
            Arity b = check(st.rhs, fx.env);
            if (a.k != b.k || a.l != b.l)
                throw arity_error(st.pos, "'" + st.name + "': sides have arities (" + std::to_string(a.k) + "," +
                                              std::to_string(a.l) + ") and (" + std::to_string(b.k) + "," + std::to_string(b.l) + ")");
        }
    }
    return fx;
}

/// Reads a fixture file; a missing ".pd" extension is added when the bare path does not exist.
inline Fixture load_fixture(const std::string& path) {
    std::string p = path;
    std::ifstream f(p);
    if (!f) {
        p = path + ".pd";
        f.open(p);
    }
    if (!f) throw invalid_input("cannot open fixture '" + path + "'");
    std::stringstream ss;
    ss << f.rdbuf();
    return parse_fixture(ss.str(), p);
}

struct StatementResult {
    std::string name;
    SourcePos pos;
    bool formal_ok = false;
    PartLin difference;           // check: lhs - rhs
    std::optional<PolyQ> found;   // coeff: coefficient found, if lhs is a multiple of the basis
    std::vector<std::pair<std::uint32_t, bool>> oracle;  // (N, agrees)
};

/// For "coeff": returns c with e == c * basis when the basis has a constant coefficient somewhere.
inline std::optional<PolyQ> coefficient_on(const PartLin& e, const PartLin& basis) {
    if (basis.is_zero()) return std::nullopt;
    const Partition* pivot = nullptr;
    Q bc;
    for (const auto& [p, c] : basis.terms())
        if (c.is_constant()) {
            pivot = &p;
            bc = c.constant();
            break;
        }
    if (!pivot) return std::nullopt;
    PolyQ c = e.coeff(*pivot) * PolyQ(Q(1) / bc);
    if (e == basis * c) return c;
    return std::nullopt;
}

/// Runs one statement formally and, for each N given, through the tensor-state oracle.
inline StatementResult run_statement(const Statement& st, const Env& env, const std::vector<std::uint32_t>& oracle_ns) {
    StatementResult r;
    r.name = st.name;
    r.pos = st.pos;
    PartLin lhs = eval(st.lhs, env), rhs = eval(st.rhs, env);
    if (st.type == Statement::Type::check) {
        r.difference = lhs - rhs;
        r.formal_ok = r.difference.is_zero();
    } else {
        r.found = coefficient_on(lhs, rhs);
        r.formal_ok = r.found && *r.found == st.expected;
        r.difference = lhs - rhs * st.expected;
    }
    for (auto N : oracle_ns) {
        State a = evaluate_state(st.lhs, env, N);
        State b = evaluate_state(st.rhs, env, N);
        if (st.type == Statement::Type::coeff) {
            Node sc;
            sc.kind = Kind::scale;
            sc.poly = st.expected;
            sc.a = st.rhs;
            b = evaluate_state(std::make_shared<const Node>(sc), env, N);
        }
        r.oracle.push_back({N, detail::Oracle::equal(a, b)});
    }
    return r;
}

}  // namespace qsym::dsl
