#include "hybcore/frontend.hpp"

#include <cctype>
#include <charconv>
#include <cstdlib>
#include <map>
#include <optional>
#include <set>

#include "hybcore/prim.hpp"

namespace hybcore {

namespace {

// ---------------------------------------------------------------------------
// Lexer
// ---------------------------------------------------------------------------

enum class Tok {
    Ident, Number, NatNumber,
    KwRet, KwIf, KwThen, KwElse, KwWhile, KwEvolve, KwFor, KwLet, KwIn, KwWait,
    KwTrue, KwFalse,
    LParen, RParen, LBrace, RBrace, Comma, Semi, Dot, Amp, AndAnd, OrOr,
    Plus, Minus, Star, Slash, Lt, Leq, Gt, Geq, EqEq, Neq, Bang, Assign, Eq,
    End,
};

struct Token {
    Tok kind;
    std::string text;
    double num = 0.0;
    int line = 1, col = 1;
};

const std::map<std::string, Tok> kKeywords = {
    {"ret", Tok::KwRet},   {"if", Tok::KwIf},         {"then", Tok::KwThen},
    {"else", Tok::KwElse}, {"while", Tok::KwWhile},   {"evolve", Tok::KwEvolve},
    {"for", Tok::KwFor},   {"let", Tok::KwLet},       {"in", Tok::KwIn},
    {"wait", Tok::KwWait}, {"true", Tok::KwTrue},     {"false", Tok::KwFalse},
};

std::vector<Token> lex(const std::string& text) {
    std::vector<Token> out;
    int line = 1, col = 1;
    std::size_t i = 0;
    auto push = [&](Tok k, std::string s) {
        out.push_back({k, std::move(s), 0.0, line, col});
    };
    while (i < text.size()) {
        char c = text[i];
        if (c == '\n') { ++line; col = 1; ++i; continue; }
        if (std::isspace(static_cast<unsigned char>(c))) { ++col; ++i; continue; }
        if (c == '/' && i + 1 < text.size() && text[i + 1] == '/') {
            while (i < text.size() && text[i] != '\n') ++i;
            continue;
        }
        int start_col = col;
        auto two = [&](char a, char b) {
            return c == a && i + 1 < text.size() && text[i + 1] == b;
        };
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t j = i;
            while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
            if (j < text.size() && text[j] == '.' && j + 1 < text.size() &&
                std::isdigit(static_cast<unsigned char>(text[j + 1]))) {
                ++j;
                while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
            }
            if (j < text.size() && (text[j] == 'e' || text[j] == 'E')) {
                std::size_t k = j + 1;
                if (k < text.size() && (text[k] == '+' || text[k] == '-')) ++k;
                if (k < text.size() && std::isdigit(static_cast<unsigned char>(text[k]))) {
                    ++k;
                    while (k < text.size() && std::isdigit(static_cast<unsigned char>(text[k])))
                        ++k;
                    j = k;
                }
            }
            std::string s = text.substr(i, j - i);
            Token t{Tok::Number, s, std::strtod(s.c_str(), nullptr), line, start_col};
            if (j < text.size() && text[j] == 'n') {  // natural literal
                t.kind = Tok::NatNumber;
                ++j;
            }
            out.push_back(t);
            col += static_cast<int>(j - i);
            i = j;
            continue;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t j = i;
            while (j < text.size() &&
                   (std::isalnum(static_cast<unsigned char>(text[j])) || text[j] == '_' ||
                    text[j] == '\''))
                ++j;
            std::string s = text.substr(i, j - i);
            auto kw = kKeywords.find(s);
            out.push_back({kw == kKeywords.end() ? Tok::Ident : kw->second, s, 0.0, line,
                           start_col});
            col += static_cast<int>(j - i);
            i = j;
            continue;
        }
        if (two(':', '=')) { push(Tok::Assign, ":="); i += 2; col += 2; continue; }
        if (two('&', '&')) { push(Tok::AndAnd, "&&"); i += 2; col += 2; continue; }
        if (two('|', '|')) { push(Tok::OrOr, "||"); i += 2; col += 2; continue; }
        if (two('<', '=')) { push(Tok::Leq, "<="); i += 2; col += 2; continue; }
        if (two('>', '=')) { push(Tok::Geq, ">="); i += 2; col += 2; continue; }
        if (two('=', '=')) { push(Tok::EqEq, "=="); i += 2; col += 2; continue; }
        if (two('!', '=')) { push(Tok::Neq, "!="); i += 2; col += 2; continue; }
        Tok k;
        switch (c) {
            case '(': k = Tok::LParen; break;
            case ')': k = Tok::RParen; break;
            case '{': k = Tok::LBrace; break;
            case '}': k = Tok::RBrace; break;
            case ',': k = Tok::Comma; break;
            case ';': k = Tok::Semi; break;
            case '.': k = Tok::Dot; break;
            case '&': k = Tok::Amp; break;
            case '+': k = Tok::Plus; break;
            case '-': k = Tok::Minus; break;
            case '*': k = Tok::Star; break;
            case '/': k = Tok::Slash; break;
            case '<': k = Tok::Lt; break;
            case '>': k = Tok::Gt; break;
            case '!': k = Tok::Bang; break;
            case '=': k = Tok::Eq; break;
            default:
                throw ParseError(std::string("unexpected character '") + c + "'", line, col);
        }
        push(k, std::string(1, c));
        ++i;
        ++col;
    }
    out.push_back({Tok::End, "<end>", 0.0, line, col});
    return out;
}

// ---------------------------------------------------------------------------
// Parser
// ---------------------------------------------------------------------------

struct Pattern {
    bool is_pair = false;
    std::string a, b;  // simple binder in a; pair components in a, b
};

class Parser {
public:
    explicit Parser(const std::string& text) : toks_(lex(text)) {}

    CompPtr parse_program() {
        CompPtr p = parse_computation();
        expect(Tok::End, "end of input");
        return p;
    }

private:
    std::vector<Token> toks_;
    std::size_t pos_ = 0;
    int fresh_counter_ = 0;
    // Deepest failure seen, for error reporting after backtracking.
    std::optional<ParseError> best_error_;
    std::size_t best_error_pos_ = 0;

    const Token& peek(std::size_t off = 0) const {
        std::size_t i = pos_ + off;
        return i < toks_.size() ? toks_[i] : toks_.back();
    }
    bool at(Tok k) const { return peek().kind == k; }
    Token advance() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }
    bool eat(Tok k) {
        if (at(k)) { advance(); return true; }
        return false;
    }

    [[noreturn]] void fail(const std::string& wanted) {
        const Token& t = peek();
        ParseError err("expected " + wanted + ", found '" + t.text + "'", t.line, t.col,
                       {wanted});
        if (!best_error_ || pos_ >= best_error_pos_) {
            best_error_ = err;
            best_error_pos_ = pos_;
        }
        throw *best_error_;
    }
    void expect(Tok k, const std::string& wanted) {
        if (!eat(k)) fail(wanted);
    }

    std::string fresh(const std::string& base, const std::set<std::string>& avoid) {
        if (!avoid.count(base)) return base;
        while (true) {
            std::string cand = "_" + base + std::to_string(fresh_counter_++);
            if (!avoid.count(cand)) return cand;
        }
    }

    // ---- values ----

    ValuePtr parse_value() { return parse_or(); }

    ValuePtr parse_or() {
        ValuePtr v = parse_and();
        while (eat(Tok::OrOr)) v = v_sig("or", v_pair(v, parse_and()));
        return v;
    }
    ValuePtr parse_and() {
        ValuePtr v = parse_cmp();
        while (eat(Tok::AndAnd)) v = v_sig("and", v_pair(v, parse_cmp()));
        return v;
    }
    ValuePtr parse_cmp() {
        ValuePtr v = parse_add();
        static const std::map<Tok, std::string> ops = {
            {Tok::Lt, "lt"},   {Tok::Leq, "leq"}, {Tok::Gt, "gt"},
            {Tok::Geq, "geq"}, {Tok::EqEq, "eq"}, {Tok::Neq, "neq"},
        };
        auto it = ops.find(peek().kind);
        if (it != ops.end()) {
            advance();
            v = v_sig(it->second, v_pair(v, parse_add()));
        }
        return v;
    }
    ValuePtr parse_add() {
        ValuePtr v = parse_mul();
        while (at(Tok::Plus) || at(Tok::Minus)) {
            bool plus = advance().kind == Tok::Plus;
            v = v_sig(plus ? "add" : "sub", v_pair(v, parse_mul()));
        }
        return v;
    }
    ValuePtr parse_mul() {
        ValuePtr v = parse_unary();
        while (at(Tok::Star) || at(Tok::Slash)) {
            bool times = advance().kind == Tok::Star;
            v = v_sig(times ? "mul" : "div", v_pair(v, parse_unary()));
        }
        return v;
    }
    ValuePtr parse_unary() {
        if (eat(Tok::Bang)) return v_sig("not", parse_unary());
        if (eat(Tok::Minus)) {
            ValuePtr v = parse_unary();
            if (v->kind == ValueKind::RealLit) return v_real(-v->real_val);
            return v_sig("neg", v);
        }
        return parse_value_atom();
    }
    ValuePtr parse_value_atom() {
        const Token& t = peek();
        switch (t.kind) {
            case Tok::Number: advance(); return v_real(t.num);
            case Tok::NatNumber: advance(); return v_nat(static_cast<std::uint64_t>(t.num));
            case Tok::KwTrue: advance(); return v_true();
            case Tok::KwFalse: advance(); return v_false();
            case Tok::Star: advance(); return v_star();
            case Tok::Ident: {
                advance();
                if (eat(Tok::LParen)) {
                    std::vector<ValuePtr> args;
                    args.push_back(parse_value());
                    while (eat(Tok::Comma)) args.push_back(parse_value());
                    expect(Tok::RParen, "')'");
                    // Uncurried application: f(a, b, c) takes <a, <b, c>>.
                    ValuePtr arg = args.back();
                    for (std::size_t i = args.size() - 1; i-- > 0;)
                        arg = v_pair(args[i], arg);
                    return v_sig(t.text, arg);
                }
                return v_var(t.text);
            }
            case Tok::LParen: {
                advance();
                ValuePtr v = parse_value();
                if (eat(Tok::Comma)) {
                    ValuePtr w = parse_value();
                    expect(Tok::RParen, "')'");
                    return v_pair(v, w);
                }
                expect(Tok::RParen, "')'");
                return v;
            }
            default:
                fail("a value");
        }
    }

    // ---- patterns ----

    std::optional<Pattern> try_pattern() {
        std::size_t save = pos_;
        if (at(Tok::Ident)) {
            Pattern p;
            p.a = advance().text;
            return p;
        }
        if (eat(Tok::LParen)) {
            if (at(Tok::Ident) && peek(1).kind == Tok::Comma && peek(2).kind == Tok::Ident &&
                peek(3).kind == Tok::RParen) {
                Pattern p;
                p.is_pair = true;
                p.a = advance().text;
                advance();
                p.b = advance().text;
                advance();
                return p;
            }
            pos_ = save;
            return std::nullopt;
        }
        return std::nullopt;
    }

    // ---- computations ----

    CompPtr parse_computation() {
        // Statement forms: pattern := compAtom [; ...]
        std::size_t save = pos_;
        if (auto pat = try_pattern(); pat && eat(Tok::Assign)) {
            CompPtr init = parse_comp_atom();
            CompPtr rest;
            if (eat(Tok::Semi)) {
                rest = parse_computation();
            } else if (!pat->is_pair) {
                rest = c_now(v_var(pat->a));  // tail form: x := p; ret x
            } else {
                rest = c_now(v_pair(v_var(pat->a), v_var(pat->b)));
            }
            if (!pat->is_pair) return c_seq(pat->a, init, rest);
            auto avoid = free_vars(rest);
            avoid.insert(pat->a);
            avoid.insert(pat->b);
            std::string z = fresh("z", avoid);
            return c_seq(z, init, c_pairmatch(pat->a, pat->b, v_var(z), rest));
        }
        pos_ = save;
        CompPtr p = parse_comp_atom();
        if (eat(Tok::Semi)) return c_seq("_", p, parse_computation());
        return p;
    }

    CompPtr parse_comp_atom() {
        switch (peek().kind) {
            case Tok::KwRet: {
                advance();
                return c_now(parse_value());
            }
            case Tok::KwIf: {
                advance();
                ValuePtr b = parse_value();
                expect(Tok::KwThen, "'then'");
                CompPtr p = parse_computation();
                expect(Tok::KwElse, "'else'");
                CompPtr q = parse_computation();
                return c_if(b, p, q);
            }
            case Tok::KwWhile: {
                advance();
                auto pat = try_pattern();
                if (!pat) fail("loop binder");
                expect(Tok::Assign, "':='");
                CompPtr init = parse_comp_atom();
                expect(Tok::Amp, "'&'");
                ValuePtr guard = parse_value();
                expect(Tok::LBrace, "'{'");
                CompPtr body = parse_computation();
                expect(Tok::RBrace, "'}'");
                if (!pat->is_pair) return c_while(pat->a, init, guard, body);
                auto avoid = free_vars(guard);
                for (const auto& n : free_vars(body)) avoid.insert(n);
                avoid.insert(pat->a);
                avoid.insert(pat->b);
                std::string z = fresh("z", avoid);
                Subst s{{pat->a, v_sig("fst", v_var(z))}, {pat->b, v_sig("snd", v_var(z))}};
                return c_while(z, init, substitute(guard, s),
                               c_pairmatch(pat->a, pat->b, v_var(z), body));
            }
            case Tok::KwEvolve:
                return parse_evolve();
            case Tok::KwLet: {
                advance();
                expect(Tok::LParen, "'('");
                std::string x = expect_ident();
                expect(Tok::Comma, "','");
                std::string y = expect_ident();
                expect(Tok::RParen, "')'");
                expect(Tok::Eq, "'='");
                ValuePtr v = parse_value();
                expect(Tok::KwIn, "'in'");
                CompPtr body = parse_computation();
                return c_pairmatch(x, y, v, body);
            }
            case Tok::KwWait: {
                advance();
                ValuePtr s = parse_value_atom();
                auto avoid = free_vars(s);
                std::string tb = fresh("t", avoid);
                avoid.insert(tb);
                std::string wb = fresh("w", avoid);
                return c_traj(tb, v_var(tb), wb, v_sig("leq", v_pair(v_var(wb), s)));
            }
            case Tok::LBrace: {
                advance();
                CompPtr p = parse_computation();
                expect(Tok::RBrace, "'}'");
                return p;
            }
            default: {
                // A value (implicit ret), or a parenthesized computation.
                std::size_t save = pos_;
                try {
                    return c_now(parse_value());
                } catch (const ParseError&) {
                    pos_ = save;
                }
                if (eat(Tok::LParen)) {
                    CompPtr p = parse_computation();
                    expect(Tok::RParen, "')'");
                    return p;
                }
                fail("a computation");
            }
        }
    }

    CompPtr parse_evolve() {
        advance();  // 'evolve'
        auto pat = try_pattern();
        if (!pat) fail("trajectory binder");
        expect(Tok::Eq, "'='");
        std::string tb = expect_ident();
        expect(Tok::Dot, "'.'");
        ValuePtr v = parse_value();
        if (eat(Tok::Amp)) {
            ValuePtr guard = parse_value();
            if (!pat->is_pair) return c_traj(tb, v, pat->a, guard);
            auto avoid = free_vars(guard);
            avoid.insert(pat->a);
            avoid.insert(pat->b);
            std::string z = fresh("z", avoid);
            Subst s{{pat->a, v_sig("fst", v_var(z))}, {pat->b, v_sig("snd", v_var(z))}};
            return c_traj(tb, v, z, substitute(guard, s));
        }
        expect(Tok::KwFor, "'&' or 'for'");
        ValuePtr bound = parse_value();
        // Bounded form: track time in a second component and stop when it
        // reaches the bound, then project the payload back out.
        auto avoid = free_vars(v);
        for (const auto& n : free_vars(bound)) avoid.insert(n);
        avoid.insert(tb);
        std::string zg = fresh("zg", avoid);
        std::string z = fresh("z", avoid);
        std::string y = fresh("y", avoid);
        std::string w = fresh("w", avoid);
        CompPtr core = c_traj(tb, v_pair(v, v_var(tb)), zg,
                              v_sig("leq", v_pair(v_sig("snd", v_var(zg)), bound)));
        return c_seq(z, core, c_pairmatch(y, w, v_var(z), c_now(v_var(y))));
    }

    std::string expect_ident() {
        if (!at(Tok::Ident)) fail("an identifier");
        return advance().text;
    }
};

// ---------------------------------------------------------------------------
// Pretty-printer
// ---------------------------------------------------------------------------

struct OpInfo {
    const char* sym;
    int level;  // higher binds tighter
};

const std::map<std::string, OpInfo> kBinOps = {
    {"or", {"||", 1}},  {"and", {"&&", 2}}, {"lt", {"<", 3}},  {"leq", {"<=", 3}},
    {"gt", {">", 3}},   {"geq", {">=", 3}}, {"eq", {"==", 3}}, {"neq", {"!=", 3}},
    {"add", {"+", 4}},  {"sub", {"-", 4}},  {"mul", {"*", 5}}, {"div", {"/", 5}},
};

void print_value(const ValuePtr& v, int level, std::string& out);

void print_args(const ValuePtr& arg, std::string& out) {
    // Unfold the right-nested pair spine into an argument list.
    std::vector<ValuePtr> args;
    ValuePtr cur = arg;
    while (cur->kind == ValueKind::Pair) {
        args.push_back(cur->a);
        cur = cur->b;
    }
    args.push_back(cur);
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (i) out += ", ";
        print_value(args[i], 0, out);
    }
}

void print_value(const ValuePtr& v, int level, std::string& out) {
    switch (v->kind) {
        case ValueKind::Var: out += v->name; return;
        case ValueKind::Star: out += "*"; return;
        case ValueKind::True: out += "true"; return;
        case ValueKind::False: out += "false"; return;
        case ValueKind::RealLit: {
            if (v->real_val < 0 && level > 6) {
                out += "(" + format_real(v->real_val) + ")";
            } else {
                out += format_real(v->real_val);
            }
            return;
        }
        case ValueKind::NatLit: out += std::to_string(v->nat_val) + "n"; return;
        case ValueKind::Pair:
            out += "(";
            print_value(v->a, 0, out);
            out += ", ";
            print_value(v->b, 0, out);
            out += ")";
            return;
        case ValueKind::SigApp: {
            auto it = kBinOps.find(v->name);
            if (it != kBinOps.end() && v->a->kind == ValueKind::Pair) {
                int lv = it->second.level;
                bool parens = lv < level || (lv == level && lv == 3);
                if (parens) out += "(";
                print_value(v->a->a, lv, out);
                out += " ";
                out += it->second.sym;
                out += " ";
                print_value(v->a->b, lv + 1, out);
                if (parens) out += ")";
                return;
            }
            if (v->name == "not") {
                if (level > 6) out += "(";
                out += "!";
                print_value(v->a, 6, out);
                if (level > 6) out += ")";
                return;
            }
            if (v->name == "neg") {
                if (level > 6) out += "(";
                out += "-";
                print_value(v->a, 6, out);
                if (level > 6) out += ")";
                return;
            }
            out += v->name + "(";
            print_args(v->a, out);
            out += ")";
            return;
        }
    }
}

bool init_needs_parens(const CompPtr& p) {
    return p->kind == CompKind::Seq || p->kind == CompKind::If ||
           p->kind == CompKind::PairMatch;
}

void print_comp(const CompPtr& p, std::string& out);

void print_init(const CompPtr& p, std::string& out) {
    if (init_needs_parens(p)) {
        out += "(";
        print_comp(p, out);
        out += ")";
    } else {
        print_comp(p, out);
    }
}

void print_comp(const CompPtr& p, std::string& out) {
    switch (p->kind) {
        case CompKind::Now:
            out += "ret ";
            print_value(p->val, 0, out);
            return;
        case CompKind::Seq: {
            if (p->binder != "_") {
                out += p->binder + " := ";
                print_init(p->p, out);
                // Tail form: x := p stands for x := p; ret x.
                if (p->q->kind == CompKind::Now && p->q->val->kind == ValueKind::Var &&
                    p->q->val->name == p->binder)
                    return;
            } else {
                print_init(p->p, out);
            }
            out += "; ";
            print_comp(p->q, out);
            return;
        }
        case CompKind::PairMatch:
            out += "let (" + p->binder + ", " + p->binder2 + ") = ";
            print_value(p->val, 0, out);
            out += " in ";
            print_comp(p->p, out);
            return;
        case CompKind::If:
            out += "if ";
            print_value(p->val, 0, out);
            out += " then ";
            print_comp(p->p, out);
            out += " else ";
            print_comp(p->q, out);
            return;
        case CompKind::While:
            out += "while " + p->binder + " := ";
            print_init(p->p, out);
            out += " & ";
            print_value(p->val, 0, out);
            out += " { ";
            print_comp(p->q, out);
            out += " }";
            return;
        case CompKind::Traj:
            out += "evolve " + p->binder2 + " = " + p->binder + ". ";
            print_value(p->val, 0, out);
            out += " & ";
            print_value(p->val2, 0, out);
            return;
    }
}

}  // namespace

CompPtr parse(const std::string& text) { return Parser(text).parse_program(); }

std::string pretty(const CompPtr& p) {
    std::string out;
    print_comp(p, out);
    return out;
}

std::string pretty(const ValuePtr& v) {
    std::string out;
    print_value(v, 0, out);
    return out;
}

}  // namespace hybcore
