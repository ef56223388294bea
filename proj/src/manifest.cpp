#include "manifest.hpp"

#include <charconv>
#include <cstring>
#include <regex>

namespace cdg::app {

std::string ManifestError::str() const {
    std::string k;
    switch (kind) {
        case Kind::syntax: k = "SyntaxError"; break;
        case Kind::unknown_name: k = "UnknownName"; break;
        case Kind::dimension_mismatch: k = "DimensionMismatch"; break;
        case Kind::invalid: k = "InvalidManifest"; break;
    }
    return k + "(" + std::to_string(pos.line) + "," + std::to_string(pos.col) + "): " + message;
}

namespace {

constexpr const char* kReserved = "=:;[]|*+-@#\"";

bool reserved(char c) { return std::strchr(kReserved, c) != nullptr && c != '\0'; }
bool space(char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '\v' || c == '\f'; }

struct Token {
    enum class Type { word, string, punct, newline, eof };
    Type type = Type::eof;
    std::string text;
    Pos pos;
};

struct Failure {
    Pos pos;
    std::string message;
};

// Splits text into tokens; unterminated strings are reported and skipped.
std::vector<Token> lex(const std::string& text, std::vector<ManifestError>& errors) {
    std::vector<Token> out;
    int line = 1, col = 1;
    std::size_t i = 0;
    auto advance = [&]() {
        const unsigned char c = static_cast<unsigned char>(text[i]);
        if (c == '\n') {
            ++line;
            col = 1;
        } else if ((c & 0xC0) != 0x80) {
            ++col;
        }
        ++i;
    };
    // continuation bytes do not start a column
    auto here = [&]() { return Pos{line, col}; };
    while (i < text.size()) {
        const char c = text[i];
        if (c == '\n') {
            out.push_back({Token::Type::newline, "", here()});
            advance();
        } else if (space(c)) {
            advance();
        } else if (c == '#') {
            while (i < text.size() && text[i] != '\n') advance();
        } else if (c == '"') {
            Pos p = here();
            advance();
            std::string s;
            bool closed = false;
            while (i < text.size() && text[i] != '\n') {
                if (text[i] == '\\' && i + 1 < text.size() && text[i + 1] != '\n') {
                    advance();
                    s += text[i] == 'n' ? '\n' : text[i];
                    advance();
                } else if (text[i] == '"') {
                    advance();
                    closed = true;
                    break;
                } else {
                    s += text[i];
                    advance();
                }
            }
            if (!closed) errors.push_back({ManifestError::Kind::syntax, p, "unterminated string"});
            else out.push_back({Token::Type::string, s, p});
        } else if (c == '-' && i + 1 < text.size() && text[i + 1] == '>') {
            out.push_back({Token::Type::punct, "->", here()});
            advance();
            advance();
        } else if (reserved(c)) {
            out.push_back({Token::Type::punct, std::string(1, c), here()});
            advance();
        } else {
            Pos p = here();
            std::string s;
            while (i < text.size() && !space(text[i]) && !reserved(text[i])) {
                s += text[i];
                advance();
            }
            out.push_back({Token::Type::word, s, p});
        }
    }
    out.push_back({Token::Type::newline, "", here()});
    out.push_back({Token::Type::eof, "", here()});
    return out;
}

bool is_natural(const std::string& s) { return !s.empty() && s.find_first_not_of("0123456789") == std::string::npos; }

bool is_coefficient(const std::string& s) {
    static const std::regex re("[0-9]+(/[0-9]+)?");
    return std::regex_match(s, re);
}

bool is_prime(std::uint64_t p) {
    if (p < 2) return false;
    for (std::uint64_t q = 2; q * q <= p; ++q)
        if (p % q == 0) return false;
    return true;
}

class Cursor {
public:
    Cursor(const std::vector<Token>& toks, Pos end) : t_(toks), end_(end) {}

    bool done() const { return i_ >= t_.size(); }
    Pos pos() const { return done() ? end_ : t_[i_].pos; }
    std::size_t mark() const { return i_; }
    void reset(std::size_t m) { i_ = m; }

    const Token* peek(std::size_t k = 0) const { return i_ + k < t_.size() ? &t_[i_ + k] : nullptr; }

    bool at_punct(const char* p, std::size_t k = 0) const {
        const Token* t = peek(k);
        return t && t->type == Token::Type::punct && t->text == p;
    }
    bool at_word(const char* w, std::size_t k = 0) const {
        const Token* t = peek(k);
        return t && t->type == Token::Type::word && t->text == w;
    }
    bool accept(const char* p) {
        if (!at_punct(p)) return false;
        ++i_;
        return true;
    }
    bool accept_word(const char* w) {
        if (!at_word(w)) return false;
        ++i_;
        return true;
    }
    void expect(const char* p) {
        if (!accept(p)) fail(std::string("expected '") + p + "'");
    }
    void expect_word(const char* w) {
        if (!accept_word(w)) fail(std::string("expected '") + w + "'");
    }
    void expect_end() {
        if (!done()) fail("unexpected '" + t_[i_].text + "'");
    }

    std::string word() {
        const Token* t = peek();
        if (!t || t->type != Token::Type::word) fail("expected a word");
        ++i_;
        return t->text;
    }

    std::string name() {
        const Token* t = peek();
        if (!t || (t->type != Token::Type::word && t->type != Token::Type::string)) fail("expected a name");
        ++i_;
        return t->text;
    }

    long integer() {
        Pos p = pos();
        bool neg = accept("-");
        const Token* t = peek();
        if (!t || t->type != Token::Type::word || !is_natural(t->text)) throw Failure{p, "expected an integer"};
        long v = 0;
        auto [ptr, ec] = std::from_chars(t->text.data(), t->text.data() + t->text.size(), v);
        if (ec != std::errc() || v > (1L << 40)) throw Failure{p, "integer out of range"};
        ++i_;
        return neg ? -v : v;
    }

    std::uint64_t unsigned_integer() {
        Pos p = pos();
        const Token* t = peek();
        if (!t || t->type != Token::Type::word || !is_natural(t->text)) throw Failure{p, "expected a non-negative integer"};
        std::uint64_t v = 0;
        auto [ptr, ec] = std::from_chars(t->text.data(), t->text.data() + t->text.size(), v);
        if (ec != std::errc()) throw Failure{p, "integer out of range"};
        ++i_;
        return v;
    }

    std::string signed_coefficient() {
        Pos p = pos();
        bool neg = accept("-");
        const Token* t = peek();
        if (!t || t->type != Token::Type::word || !is_coefficient(t->text)) throw Failure{p, "expected a coefficient"};
        ++i_;
        return (neg ? "-" : "") + t->text;
    }

    Ref ref() {
        Ref r;
        r.pos = pos();
        r.label = name();
        if (accept("@")) r.degree = static_cast<int>(integer());
        return r;
    }

    Expr expr() {
        Expr e;
        e.pos = pos();
        if (at_word("0") && peek(1) == nullptr) {
            ++i_;
            return e;
        }
        if (done()) fail("expected an expression");
        bool first = true;
        while (!done()) {
            Term term;
            term.pos = pos();
            if (accept("-")) term.negative = true;
            else if (!accept("+") && !first) fail("expected '+' or '-'");
            const Token* t = peek();
            if (t && t->type == Token::Type::word && at_punct("*", 1)) {
                if (!is_coefficient(t->text)) fail("bad coefficient '" + t->text + "'");
                term.coef = t->text;
                i_ += 2;
            }
            term.factors.push_back(ref());
            while (accept("|")) term.factors.push_back(ref());
            e.terms.push_back(std::move(term));
            first = false;
        }
        return e;
    }

    [[noreturn]] void fail(const std::string& msg) const { throw Failure{pos(), msg}; }

private:
    const std::vector<Token>& t_;
    Pos end_;
    std::size_t i_ = 0;
};

BodyLine parse_body(Cursor& c) {
    BodyLine b;
    b.pos = c.pos();
    b.keyword = c.word();
    const std::string& k = b.keyword;
    if (k == "basis" || k == "generators") {
        b.degree = static_cast<int>(c.integer());
        c.expect(":");
        while (!c.done()) b.labels.push_back(c.name());
    } else if (k == "weight") {
        b.refs.push_back(c.ref());
        b.number = c.integer();
    } else if (k == "window") {
        if (c.accept_word("total")) {
            b.total = true;
        } else {
            auto bound = [&](bool upper) -> std::optional<long> {
                if (c.at_punct("-") && c.at_word("inf", 1)) {
                    if (upper) c.fail("upper bound cannot be -inf");
                    c.accept("-");
                    c.accept_word("inf");
                    return std::nullopt;
                }
                if (c.accept_word("inf")) {
                    if (!upper) c.fail("lower bound cannot be inf");
                    return std::nullopt;
                }
                return c.integer();
            };
            b.lo = bound(false);
            b.hi = bound(true);
        }
    } else if (k == "truncation") {
        b.mode = c.word();
        if (b.mode != "input" && b.mode != "output") c.fail("truncation is input or output");
        b.number = c.integer();
    } else if (k == "mul" || k == "act" || k == "alpha" || k == "contra") {
        b.refs.push_back(c.ref());
        b.refs.push_back(c.ref());
        c.expect("=");
        b.expr = c.expr();
    } else if (k == "d") {
        const std::size_t m = c.mark();
        bool block = false;
        try {
            long deg = c.integer();
            if (c.accept("=") && c.at_punct("[")) {
                block = true;
                b.degree = static_cast<int>(deg);
            }
        } catch (const Failure&) {
        }
        if (block) {
            b.block = true;
            c.expect("[");
            if (!c.accept("]")) {
                b.matrix.emplace_back();
                while (true) {
                    if (c.accept("]")) break;
                    if (c.accept(";")) {
                        b.matrix.emplace_back();
                        continue;
                    }
                    b.matrix.back().push_back(c.signed_coefficient());
                }
            }
        } else {
            c.reset(m);
            b.refs.push_back(c.ref());
            c.expect("=");
            b.expr = c.expr();
        }
    } else if (k == "comul" || k == "coact" || k == "image") {
        b.refs.push_back(c.ref());
        c.expect("=");
        b.expr = c.expr();
    } else if (k == "h" || k == "counit") {
        c.expect("=");
        b.expr = c.expr();
    } else {
        throw Failure{b.pos, "unknown statement '" + k + "'"};
    }
    c.expect_end();
    return b;
}

// Returns true when the declaration opens a block.
bool parse_object(Cursor& c, ObjectDecl& o) {
    o.pos = c.pos();
    o.kind = c.word();
    o.name = c.name();
    if (o.kind == "map") {
        c.expect(":");
        o.source = c.name();
        c.expect("->");
        o.target = c.name();
        if (c.accept_word("degree")) o.degree = static_cast<int>(c.integer());
        c.expect_end();
        return true;
    }
    if (o.kind == "module" || o.kind == "comodule" || o.kind == "contramodule") {
        if (c.accept_word("over")) {
            o.over = c.name();
            c.expect_end();
            return true;
        }
        if (o.kind != "module") c.fail("expected 'over'");
        c.expect("=");
        o.form = c.word();
        if (o.form != "twisted" && o.form != "trivial") throw Failure{o.pos, "unknown module form '" + o.form + "'"};
        c.expect_word("over");
        o.over = c.name();
        if (o.form == "trivial") {
            if (c.accept_word("degree")) o.degree = static_cast<int>(c.integer());
            c.expect_end();
            return false;
        }
        c.expect_end();
        return true;
    }
    if (o.kind == "algebra" || o.kind == "coalgebra") {
        if (c.done()) return true;
        c.expect("=");
        Pos fp = c.pos();
        o.form = c.word();
        if (o.kind == "algebra" && o.form == "polynomial") {
            o.args.push_back(c.name());
            o.degree = static_cast<int>(c.integer());
            while (!c.done()) {
                if (c.accept_word("d")) o.options["d"] = c.signed_coefficient();
                else if (c.accept_word("top")) o.options["top"] = std::to_string(c.integer());
                else c.fail("expected 'd' or 'top'");
            }
        } else if (o.kind == "algebra" && o.form == "exterior") {
            o.args.push_back(c.name());
            o.degree = static_cast<int>(c.integer());
        } else if (o.kind == "algebra" && o.form == "ground") {
        } else if (o.form == "dual") {
            o.over = c.name();
        } else if (o.kind == "coalgebra" && o.form == "bar") {
            o.over = c.name();
            c.expect_word("truncate");
            o.degree = static_cast<int>(c.integer());
            if (o.degree < 0) throw Failure{fp, "truncation must be non-negative"};
        } else {
            throw Failure{fp, "unknown " + o.kind + " form '" + o.form + "'"};
        }
        c.expect_end();
        return false;
    }
    throw Failure{o.pos, "unknown declaration '" + o.kind + "'"};
}

}  // namespace

ParseResult parse_manifest(const std::string& text) {
    ParseResult res;
    Manifest m;
    std::vector<Token> toks = lex(text, res.errors);
    std::vector<std::vector<Token>> lines(1);
    std::vector<Pos> line_end;
    for (const auto& t : toks) {
        if (t.type == Token::Type::newline) {
            line_end.push_back(t.pos);
            lines.emplace_back();
        } else if (t.type != Token::Type::eof) {
            lines.back().push_back(t);
        }
    }
    ObjectDecl* open = nullptr;
    std::size_t open_index = 0;
    for (std::size_t li = 0; li < lines.size(); ++li) {
        const auto& line = lines[li];
        if (line.empty()) continue;
        Cursor c(line, li < line_end.size() ? line_end[li] : line.back().pos);
        try {
            if (open) {
                if (c.at_word("end")) {
                    c.accept_word("end");
                    c.expect_end();
                    open = nullptr;
                    continue;
                }
                // "window" is also a body statement, so it does not close a block
                static const char* decls[] = {"algebra", "coalgebra", "module", "comodule", "contramodule", "map", "family", "task", "field", "seed"};
                for (const char* d : decls)
                    if (c.at_word(d)) throw Failure{c.pos(), "missing 'end' for " + m.objects[open_index].kind + " " + m.objects[open_index].name};
                m.objects[open_index].body.push_back(parse_body(c));
                continue;
            }
            if (c.accept_word("field")) {
                Pos p = c.pos();
                if (c.accept_word("rational")) {
                    m.field = "rational";
                } else if (c.accept_word("prime")) {
                    std::uint64_t p64 = c.unsigned_integer();
                    if (p64 > 0xFFFFFFFFu || !is_prime(p64)) throw Failure{p, "field prime must be a prime below 2^32"};
                    m.field = "prime";
                    m.prime = static_cast<std::uint32_t>(p64);
                } else {
                    c.fail("expected 'rational' or 'prime'");
                }
                c.expect_end();
            } else if (c.accept_word("window")) {
                Pos p = c.pos();
                long w = c.integer();
                if (w < 0) throw Failure{p, "window must be non-negative"};
                m.window = static_cast<int>(w);
                c.expect_end();
            } else if (c.accept_word("seed")) {
                m.seed = c.unsigned_integer();
                c.expect_end();
            } else if (c.at_word("family")) {
                FamilyDecl f;
                f.pos = c.pos();
                c.accept_word("family");
                f.name = c.name();
                c.expect("=");
                while (!c.done()) f.members.push_back(c.name());
                m.families.push_back(std::move(f));
            } else if (c.at_word("task")) {
                TaskDecl t;
                t.pos = c.pos();
                c.accept_word("task");
                t.command = c.word();
                while (!c.done()) {
                    if (c.at_punct("-")) t.args.push_back(std::to_string(c.integer()));
                    else t.args.push_back(c.name());
                }
                m.tasks.push_back(std::move(t));
            } else if (c.at_word("end")) {
                c.fail("'end' without an open block");
            } else {
                ObjectDecl o;
                bool block = parse_object(c, o);
                m.objects.push_back(std::move(o));
                if (block) {
                    open_index = m.objects.size() - 1;
                    open = &m.objects[open_index];
                }
            }
        } catch (const Failure& f) {
            res.errors.push_back({ManifestError::Kind::syntax, f.pos, f.message});
        }
    }
    if (open) res.errors.push_back({ManifestError::Kind::syntax, open->pos, "missing 'end' for " + open->kind + " " + open->name});
    for (std::size_t i = 0; i < m.objects.size(); ++i)
        for (std::size_t j = 0; j < i; ++j)
            if (m.objects[i].name == m.objects[j].name)
                res.errors.push_back({ManifestError::Kind::invalid, m.objects[i].pos, "'" + m.objects[i].name + "' is already defined"});
    if (res.errors.empty()) res.manifest = std::move(m);
    return res;
}

std::string quote_name(const std::string& s) {
    bool plain = !s.empty() && s != "0" && s != "end";
    for (char ch : s)
        if (space(ch) || reserved(ch) || ch == '\\' || ch == '>' || static_cast<unsigned char>(ch) < 0x20) plain = false;
    if (plain) return s;
    std::string out = "\"";
    for (char ch : s) {
        if (ch == '"' || ch == '\\') out += '\\';
        if (ch == '\n') {
            out += "\\n";
            continue;
        }
        out += ch;
    }
    return out + "\"";
}

std::string signed_coefficient(const std::string& c, bool first) {
    const bool neg = !c.empty() && c[0] == '-';
    const std::string mag = neg ? c.substr(1) : c;
    if (first) return (neg ? "- " : "") + mag;
    return (neg ? " - " : " + ") + mag;
}

}  // namespace cdg::app
