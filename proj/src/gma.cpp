#include "wgr/gma.hpp"

#include <cctype>
#include <sstream>

namespace wgr {

// ---------------------------------------------------------------------------
// Lexer

void BodyLexer::fail(const std::string& msg) const { throw LexError(i_, msg); }

void BodyLexer::skip_ws() {
    while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
}

bool BodyLexer::at_end() {
    skip_ws();
    return i_ >= s_.size();
}

char BodyLexer::peek() {
    skip_ws();
    return i_ < s_.size() ? s_[i_] : '\0';
}

static bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

bool BodyLexer::accept(const std::string& tok) {
    skip_ws();
    if (s_.compare(i_, tok.size(), tok) != 0) return false;
    // A word token must not run into a longer identifier.
    if (ident_char(tok.back()) && i_ + tok.size() < s_.size() && ident_char(s_[i_ + tok.size()])) return false;
    i_ += tok.size();
    return true;
}

void BodyLexer::expect(const std::string& tok) {
    if (!accept(tok)) fail("expected '" + tok + "'");
}

bool BodyLexer::peek_word(const std::string& w) {
    size_t save = i_;
    bool ok = accept(w);
    i_ = save;
    return ok;
}

std::string BodyLexer::ident() {
    skip_ws();
    if (i_ >= s_.size() || !(std::isalpha(static_cast<unsigned char>(s_[i_])) || s_[i_] == '_'))
        fail("expected an identifier");
    size_t st = i_;
    while (i_ < s_.size() && ident_char(s_[i_])) ++i_;
    return s_.substr(st, i_ - st);
}

std::string BodyLexer::word() {
    skip_ws();
    size_t st = i_;
    while (i_ < s_.size() && (ident_char(s_[i_]) || s_[i_] == '-' || s_[i_] == '.')) ++i_;
    if (st == i_) fail("expected a name");
    return s_.substr(st, i_ - st);
}

std::string BodyLexer::quoted() {
    skip_ws();
    if (i_ >= s_.size() || s_[i_] != '"') fail("expected a quoted string");
    ++i_;
    std::string out;
    while (i_ < s_.size() && s_[i_] != '"') {
        if (s_[i_] == '\\' && i_ + 1 < s_.size()) ++i_;
        out += s_[i_++];
    }
    if (i_ >= s_.size()) fail("unterminated string");
    ++i_;
    return out;
}

int64_t BodyLexer::integer() {
    skip_ws();
    size_t st = i_;
    if (i_ < s_.size() && (s_[i_] == '-' || s_[i_] == '+')) ++i_;
    size_t digits = i_;
    while (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_]))) ++i_;
    if (digits == i_) {
        i_ = st;
        fail("expected an integer");
    }
    if (i_ - digits > 15) fail("integer too large");
    return std::stoll(s_.substr(st, i_ - st));
}

std::string BodyLexer::rest() {
    skip_ws();
    std::string r = s_.substr(i_);
    i_ = s_.size();
    return r;
}

Expr BodyLexer::expr() { return sum(); }

Expr BodyLexer::sum() {
    Expr a = product();
    for (;;) {
        if (accept("+")) {
            a = Expr{Expr::Kind::Add, "", {a, product()}};
        } else if (peek() == '-' && !(i_ + 1 < s_.size() && s_[i_ + 1] == '>')) {
            ++i_;
            a = Expr{Expr::Kind::Sub, "", {a, product()}};
        } else {
            return a;
        }
    }
}

Expr BodyLexer::product() {
    Expr a = unary();
    while (accept("*")) a = Expr{Expr::Kind::Mul, "", {a, unary()}};
    return a;
}

Expr BodyLexer::unary() {
    if (peek() == '-' && !(i_ + 1 < s_.size() && s_[i_ + 1] == '>')) {
        ++i_;
        return Expr{Expr::Kind::Neg, "", {unary()}};
    }
    return power();
}

Expr BodyLexer::power() {
    Expr a = atom();
    if (accept("^")) {
        skip_ws();
        size_t st = i_;
        while (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_]))) ++i_;
        if (st == i_) fail("expected an exponent");
        std::string digits = s_.substr(st, i_ - st);
        if (digits.size() > 4 || std::stoi(digits) > 65535) fail("exponent too large");
        a = Expr{Expr::Kind::Pow, std::to_string(std::stoi(digits)), {a}};
    }
    return a;
}

Expr BodyLexer::atom() {
    char c = peek();
    if (c == '(') {
        ++i_;
        Expr e = sum();
        expect(")");
        return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
        size_t st = i_;
        while (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_]))) ++i_;
        std::string d = s_.substr(st, i_ - st);
        size_t nz = d.find_first_not_of('0');
        return Expr{Expr::Kind::Num, nz == std::string::npos ? "0" : d.substr(nz), {}};
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        std::string name = ident();
        if (peek() == '(') {
            ++i_;
            Expr call{Expr::Kind::Call, name, {}};
            if (!accept(")")) {
                call.args.push_back(sum());
                while (accept(",")) call.args.push_back(sum());
                expect(")");
            }
            return call;
        }
        return Expr{Expr::Kind::Name, name, {}};
    }
    fail(c ? std::string("unexpected '") + c + "'" : "unexpected end of input");
}

Expr parse_expr(const std::string& text) {
    BodyLexer lx(text);
    Expr e = lx.expr();
    if (!lx.at_end()) lx.fail("trailing input in expression");
    return e;
}

// ---------------------------------------------------------------------------
// Expression printing with minimal parentheses

static int prec(const Expr& e) {
    switch (e.kind) {
        case Expr::Kind::Add:
        case Expr::Kind::Sub: return 1;
        case Expr::Kind::Mul: return 2;
        case Expr::Kind::Neg: return 3;
        case Expr::Kind::Pow: return 4;
        default: return 5;
    }
}

static std::string wrap(const Expr& e, bool paren) { return paren ? "(" + expr_str(e) + ")" : expr_str(e); }

std::string expr_str(const Expr& e) {
    switch (e.kind) {
        case Expr::Kind::Num:
        case Expr::Kind::Name: return e.text;
        case Expr::Kind::Neg: return "-" + wrap(e.args[0], prec(e.args[0]) < 3);
        case Expr::Kind::Add: return expr_str(e.args[0]) + " + " + wrap(e.args[1], prec(e.args[1]) <= 1);
        case Expr::Kind::Sub: return expr_str(e.args[0]) + " - " + wrap(e.args[1], prec(e.args[1]) <= 1);
        case Expr::Kind::Mul:
            return wrap(e.args[0], prec(e.args[0]) < 2) + "*" + wrap(e.args[1], prec(e.args[1]) <= 3);
        case Expr::Kind::Pow: return wrap(e.args[0], prec(e.args[0]) < 5) + "^" + e.text;
        case Expr::Kind::Call: {
            std::string s = e.text + "(";
            for (size_t i = 0; i < e.args.size(); ++i) s += (i ? ", " : "") + expr_str(e.args[i]);
            return s + ")";
        }
    }
    return "";
}

// ---------------------------------------------------------------------------
// Document parser

namespace {

struct Logical {
    std::string text;
    std::vector<std::pair<int, int>> where;  // per character: line, column
};

// Joins physical lines into statements and strips comments.
std::vector<Logical> split_statements(const std::string& src) {
    std::vector<Logical> out;
    std::istringstream in(src);
    std::string line;
    int lineno = 0, depth = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        bool inq = false;
        size_t cut = line.size();
        for (size_t i = 0; i < line.size(); ++i) {
            if (line[i] == '"' && (i == 0 || line[i - 1] != '\\')) inq = !inq;
            if (line[i] == '#' && !inq) {
                cut = i;
                break;
            }
        }
        line.resize(cut);
        if (line.find_first_not_of(" \t") == std::string::npos) continue;
        bool cont = !out.empty() && (depth > 0 || line[0] == ' ' || line[0] == '\t');
        if (!cont) {
            if (line[0] == ' ' || line[0] == '\t')
                throw ParseError(lineno, 1, "continuation line without a statement");
            out.emplace_back();
        } else {
            out.back().text += ' ';
            out.back().where.push_back({lineno, 1});
        }
        inq = false;
        for (size_t i = 0; i < line.size(); ++i) {
            char c = line[i];
            if (c == '"') inq = !inq;
            if (!inq) {
                if (c == '(' || c == '[') ++depth;
                if (c == ')' || c == ']') depth = depth > 0 ? depth - 1 : 0;
            }
            out.back().text += c;
            out.back().where.push_back({lineno, int(i) + 1});
        }
    }
    return out;
}

class StatementParser {
public:
    explicit StatementParser(const Logical& L) : L_(L), lx_(L.text) {}

    [[noreturn]] void error(size_t off, const std::string& msg) const {
        if (L_.where.empty()) throw ParseError(1, 1, msg);
        if (off >= L_.where.size()) {
            auto w = L_.where.back();
            throw ParseError(w.first, w.second + 1, msg);
        }
        auto w = L_.where[off];
        throw ParseError(w.first, w.second, msg);
    }

    SrcPos pos_at(size_t off) const {
        if (L_.where.empty()) return {};
        auto w = L_.where[std::min(off, L_.where.size() - 1)];
        return {w.first, w.second};
    }

    void parse(Document& doc) {
        try {
            run(doc);
        } catch (const LexError& e) {
            error(e.offset, e.what());
        }
    }

private:
    const Logical& L_;
    BodyLexer lx_;

    void finish() {
        if (!lx_.at_end()) lx_.fail("unexpected trailing input");
    }

    std::string coeff_name() {
        std::string c = lx_.ident();
        if (c == "GF") {
            lx_.expect("(");
            int64_t p = lx_.integer();
            lx_.expect(")");
            c += "(" + std::to_string(p) + ")";
        } else if (c != "ZZ" && c != "QQ") {
            lx_.fail("unknown coefficient domain " + c);
        }
        return c;
    }

    std::vector<Expr> expr_list_parens() {
        std::vector<Expr> out;
        lx_.expect("(");
        if (lx_.accept(")")) return out;
        out.push_back(lx_.expr());
        while (lx_.accept(";")) out.push_back(lx_.expr());
        lx_.expect(")");
        return out;
    }

    void run(Document& doc) {
        SrcPos pos = pos_at(0);
        std::string kw = lx_.word();
        if (kw == "ring") {
            RingStmt r;
            r.pos = pos;
            r.name = lx_.ident();
            lx_.expect("=");
            if (lx_.accept("invert")) {
                r.invert_base = lx_.ident();
                r.inverted = expr_list_parens();
                if (r.inverted.empty()) lx_.fail("invert needs at least one element");
            } else {
                r.coeff = coeff_name();
                lx_.expect("[");
                r.vars.push_back(lx_.ident());
                while (lx_.accept(",")) r.vars.push_back(lx_.ident());
                while (lx_.accept("|")) {
                    if (lx_.accept("weights")) {
                        r.weights.push_back(lx_.integer());
                        while (lx_.accept(",")) r.weights.push_back(lx_.integer());
                    } else if (lx_.accept("order")) {
                        r.order = lx_.ident();
                        if (r.order != "lex" && r.order != "degrevlex") lx_.fail("unknown monomial order " + r.order);
                    } else {
                        lx_.fail("expected 'weights' or 'order'");
                    }
                }
                lx_.expect("]");
                if (lx_.accept("/")) r.relations = expr_list_parens();
            }
            finish();
            doc.stmts.push_back(r);
        } else if (kw == "free") {
            FreeStmt f;
            f.pos = pos;
            f.name = lx_.ident();
            lx_.expect("=");
            do {
                FreeSummand s;
                s.ring = lx_.ident();
                if (lx_.accept("(")) {
                    s.has_twist = true;
                    s.twist = lx_.integer();
                    lx_.expect(")");
                }
                if (lx_.accept("^")) {
                    s.has_power = true;
                    s.power = lx_.integer();
                    if (s.power < 0) lx_.fail("negative rank");
                }
                f.parts.push_back(s);
            } while (lx_.accept("++"));
            finish();
            doc.stmts.push_back(f);
        } else if (kw == "map") {
            MapStmt m;
            m.pos = pos;
            m.name = lx_.ident();
            lx_.expect(":");
            m.src = lx_.ident();
            lx_.expect("->");
            m.tgt = lx_.ident();
            lx_.expect("=");
            m.block = lx_.accept("block");
            lx_.expect("[");
            if (!lx_.accept("]")) {
                do {
                    lx_.expect("[");
                    std::vector<Expr> row;
                    if (!lx_.accept("]")) {
                        row.push_back(lx_.expr());
                        while (lx_.accept(",")) row.push_back(lx_.expr());
                        lx_.expect("]");
                    }
                    m.rows.push_back(row);
                } while (lx_.accept(","));
                lx_.expect("]");
            }
            finish();
            doc.stmts.push_back(m);
        } else if (kw == "transpose-of") {
            TransposeStmt t;
            t.pos = pos;
            t.name = lx_.ident();
            finish();
            doc.stmts.push_back(t);
        } else if (kw == "module") {
            ModuleStmt m;
            m.pos = pos;
            m.name = lx_.ident();
            lx_.expect("=");
            m.kind = lx_.ident();
            size_t nargs = 0;
            if (m.kind == "coker" || m.kind == "kernel" || m.kind == "image") nargs = 1;
            else if (m.kind == "hom") nargs = 2;
            else if (m.kind != "sum") lx_.fail("unknown module constructor " + m.kind);
            if (nargs) {
                for (size_t k = 0; k < nargs; ++k) m.args.push_back(lx_.ident());
            } else {
                while (!lx_.at_end() && !lx_.peek_word("over")) m.args.push_back(lx_.ident());
                if (m.args.empty()) lx_.fail("sum needs at least one module");
            }
            if (lx_.accept("over")) m.over = lx_.ident();
            finish();
            doc.stmts.push_back(m);
        } else if (kw == "complex") {
            ComplexStmt c;
            c.pos = pos;
            c.name = lx_.ident();
            lx_.expect("=");
            if (lx_.accept("hom")) {
                c.is_hom = true;
                c.hom_of = lx_.ident();
                c.hom_into = lx_.ident();
            } else {
                c.maps.push_back(lx_.ident());
                while (lx_.accept(";")) c.maps.push_back(lx_.ident());
            }
            finish();
            doc.stmts.push_back(c);
        } else if (kw == "term") {
            TermStmt t;
            t.pos = pos;
            t.complex = lx_.ident();
            t.index = int(lx_.integer());
            lx_.expect("=");
            t.module = lx_.ident();
            finish();
            doc.stmts.push_back(t);
        } else if (kw == "scenario") {
            ScenarioStmt s;
            s.pos = pos;
            s.id = lx_.word();
            lx_.expect("@");
            s.label = lx_.quoted();
            finish();
            doc.stmts.push_back(s);
        } else if (kw == "coeff") {
            ScenarioStmt* s = current(doc, "coeff");
            if (!s->coeff.empty()) lx_.fail("scenario " + s->id + " already has a coefficient domain");
            s->coeff = coeff_name();
            finish();
        } else if (kw == "claim") {
            ScenarioStmt* s = current(doc, "claim");
            s->claims.push_back(claim(pos));
        } else {
            error(0, "unknown statement '" + kw + "'");
        }
    }

    ScenarioStmt* current(Document& doc, const std::string& what) {
        if (doc.stmts.empty() || !std::holds_alternative<ScenarioStmt>(doc.stmts.back()))
            lx_.fail(what + " must follow a scenario header");
        return &std::get<ScenarioStmt>(doc.stmts.back());
    }

    static std::string collapse(const std::string& s) {
        std::string out;
        bool sp = false;
        for (char c : s) {
            if (std::isspace(static_cast<unsigned char>(c))) {
                sp = true;
                continue;
            }
            if (sp && !out.empty()) out += ' ';
            sp = false;
            out += c;
        }
        return out;
    }

    ClaimStmt claim(SrcPos pos) {
        ClaimStmt c;
        c.pos = pos;
        c.kind = lx_.word();
        c.id = lx_.word();
        const std::string& t = lx_.text();
        lx_.skip_ws();
        size_t i = lx_.offset(), body_start = i, body_end = std::string::npos, at = std::string::npos;
        size_t with_at = std::string::npos;
        int depth = 0;
        for (; i < t.size(); ++i) {
            char ch = t[i];
            if (ch == '(' || ch == '[') ++depth;
            else if (ch == ')' || ch == ']') --depth;
            else if (depth == 0 && ch == '@') {
                at = i;
                break;
            } else if (depth == 0 && with_at == std::string::npos && t.compare(i, 4, "with") == 0 &&
                       i > 0 && std::isspace(static_cast<unsigned char>(t[i - 1])) && i + 4 < t.size() &&
                       std::isspace(static_cast<unsigned char>(t[i + 4]))) {
                with_at = i;
            }
        }
        if (at == std::string::npos) {
            lx_.seek(t.size());
            lx_.fail("claim needs a label after '@'");
        }
        body_end = with_at != std::string::npos ? with_at : at;
        c.body = collapse(t.substr(body_start, body_end - body_start));
        if (c.body.empty()) {
            lx_.seek(body_start);
            lx_.fail("empty claim body");
        }
        if (with_at != std::string::npos) {
            std::string opts = t.substr(with_at + 4, at - with_at - 4);
            size_t st = 0;
            int d = 0;
            for (size_t k = 0; k <= opts.size(); ++k) {
                if (k < opts.size() && (opts[k] == '(' || opts[k] == '[')) ++d;
                if (k < opts.size() && (opts[k] == ')' || opts[k] == ']')) --d;
                if (k == opts.size() || (opts[k] == ',' && d == 0)) {
                    std::string item = collapse(opts.substr(st, k - st));
                    size_t eq = item.find('=');
                    if (eq == std::string::npos || eq == 0) {
                        lx_.seek(with_at + 4 + st);
                        lx_.fail("option must have the form key=value");
                    }
                    auto trim = [](std::string s) {
                        while (!s.empty() && s.back() == ' ') s.pop_back();
                        while (!s.empty() && s.front() == ' ') s.erase(s.begin());
                        return s;
                    };
                    c.options.push_back({trim(item.substr(0, eq)), trim(item.substr(eq + 1))});
                    st = k + 1;
                }
            }
        }
        lx_.seek(at + 1);
        c.label = lx_.quoted();
        finish();
        return c;
    }
};

std::string quote(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        if (c == '"' || c == '\\') out += '\\';
        out += c;
    }
    return out + "\"";
}

}  // namespace

std::vector<const ScenarioStmt*> Document::scenarios() const {
    std::vector<const ScenarioStmt*> out;
    for (auto& s : stmts)
        if (auto* sc = std::get_if<ScenarioStmt>(&s)) out.push_back(sc);
    return out;
}

Document parse_gma(const std::string& text) {
    Document doc;
    for (auto& L : split_statements(text)) StatementParser(L).parse(doc);
    return doc;
}

// ---------------------------------------------------------------------------
// Serializer

namespace {

struct Writer {
    std::string out;

    void operator()(const RingStmt& r) {
        out += "ring " + r.name + " = ";
        if (!r.invert_base.empty()) {
            out += "invert " + r.invert_base + " (";
            for (size_t i = 0; i < r.inverted.size(); ++i) out += (i ? "; " : "") + expr_str(r.inverted[i]);
            out += ")\n";
            return;
        }
        out += r.coeff + "[";
        for (size_t i = 0; i < r.vars.size(); ++i) out += (i ? ", " : "") + r.vars[i];
        if (!r.weights.empty()) {
            out += " | weights ";
            for (size_t i = 0; i < r.weights.size(); ++i) out += (i ? ", " : "") + std::to_string(r.weights[i]);
        }
        if (!r.order.empty()) out += " | order " + r.order;
        out += "]";
        if (!r.relations.empty()) {
            out += " /\n    (";
            for (size_t i = 0; i < r.relations.size(); ++i) out += (i ? ";\n     " : "") + expr_str(r.relations[i]);
            out += ")";
        }
        out += "\n";
    }
    void operator()(const FreeStmt& f) {
        out += "free " + f.name + " = ";
        for (size_t i = 0; i < f.parts.size(); ++i) {
            const auto& s = f.parts[i];
            out += (i ? " ++ " : "") + s.ring;
            if (s.has_twist) out += "(" + std::to_string(s.twist) + ")";
            if (s.has_power) out += "^" + std::to_string(s.power);
        }
        out += "\n";
    }
    void operator()(const MapStmt& m) {
        out += "map " + m.name + " : " + m.src + " -> " + m.tgt + " = " + (m.block ? "block " : "") + "[";
        for (size_t i = 0; i < m.rows.size(); ++i) {
            out += i ? ",\n    [" : "[";
            for (size_t j = 0; j < m.rows[i].size(); ++j) out += (j ? ", " : "") + expr_str(m.rows[i][j]);
            out += "]";
        }
        out += "]\n";
    }
    void operator()(const TransposeStmt& t) { out += "transpose-of " + t.name + "\n"; }
    void operator()(const ModuleStmt& m) {
        out += "module " + m.name + " = " + m.kind;
        for (auto& a : m.args) out += " " + a;
        if (!m.over.empty()) out += " over " + m.over;
        out += "\n";
    }
    void operator()(const ComplexStmt& c) {
        out += "complex " + c.name + " = ";
        if (c.is_hom) out += "hom " + c.hom_of + " " + c.hom_into;
        else
            for (size_t i = 0; i < c.maps.size(); ++i) out += (i ? " ; " : "") + c.maps[i];
        out += "\n";
    }
    void operator()(const TermStmt& t) {
        out += "term " + t.complex + " " + std::to_string(t.index) + " = " + t.module + "\n";
    }
    void operator()(const ScenarioStmt& s) {
        out += "\nscenario " + s.id + " @ " + quote(s.label) + "\n";
        if (!s.coeff.empty()) out += "coeff " + s.coeff + "\n";
        for (auto& c : s.claims) {
            out += "claim " + c.kind + " " + c.id + " " + c.body;
            if (!c.options.empty()) {
                out += " with ";
                for (size_t i = 0; i < c.options.size(); ++i)
                    out += (i ? ", " : "") + c.options[i].first + "=" + c.options[i].second;
            }
            out += "\n    @ " + quote(c.label) + "\n";
        }
    }
};

}  // namespace

std::string serialize_gma(const Document& doc) {
    Writer w;
    for (auto& s : doc.stmts) std::visit(w, s);
    return w.out;
}

}  // namespace wgr
