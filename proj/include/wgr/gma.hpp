#pragma once

// The .gma scenario format: syntax tree, parser and canonical serializer.
//
// A document is a sequence of statements. A statement starts at column 1
// and continues over indented lines, or over any lines while a bracket is
// open. '#' starts a comment. Names are resolved later by a Model, so the
// parser checks syntax only.

#include <cstdint>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "wgr/errors.hpp"

namespace wgr {

// Failure inside a single-line lexer, at a character offset.
struct LexError : InputError {
    size_t offset;
    LexError(size_t off, const std::string& msg) : InputError(msg), offset(off) {}
};

// Source positions never take part in equality, so that parse(serialize(d))
// compares equal to d.
struct SrcPos {
    int line = 0, col = 0;
    bool operator==(const SrcPos&) const { return true; }
};

struct Expr {
    enum class Kind { Num, Name, Neg, Add, Sub, Mul, Pow, Call };
    Kind kind = Kind::Num;
    std::string text;  // digits, identifier, call name, or exponent digits for Pow
    std::vector<Expr> args;
    bool operator==(const Expr&) const = default;
};

std::string expr_str(const Expr& e);
Expr parse_expr(const std::string& text);

struct RingStmt {
    SrcPos pos;
    std::string name;
    std::string coeff;  // ZZ | QQ | GF(p); empty for invert rings
    std::vector<std::string> vars;
    std::vector<int64_t> weights;  // empty: all zero
    std::string order;              // "" or "lex" or "degrevlex"
    std::vector<Expr> relations;
    std::string invert_base;  // non-empty: ring = invert base (inverted...)
    std::vector<Expr> inverted;
    bool operator==(const RingStmt&) const = default;
};

struct FreeSummand {
    std::string ring;
    bool has_twist = false;
    int64_t twist = 0;
    bool has_power = false;
    int64_t power = 1;
    bool operator==(const FreeSummand&) const = default;
};

struct FreeStmt {
    SrcPos pos;
    std::string name;
    std::vector<FreeSummand> parts;
    bool operator==(const FreeStmt&) const = default;
};

// rows[i][j] is the entry in target component i, source component j, or
// for transposed maps the entry in source component i, target component j.
struct MapStmt {
    SrcPos pos;
    std::string name, src, tgt;
    bool block = false;
    std::vector<std::vector<Expr>> rows;
    bool operator==(const MapStmt&) const = default;
};

struct TransposeStmt {
    SrcPos pos;
    std::string name;
    bool operator==(const TransposeStmt&) const = default;
};

struct ModuleStmt {
    SrcPos pos;
    std::string name;
    std::string kind;  // coker | kernel | image | hom | sum
    std::vector<std::string> args;
    std::string over;
    bool operator==(const ModuleStmt&) const = default;
};

struct ComplexStmt {
    SrcPos pos;
    std::string name;
    bool is_hom = false;
    std::vector<std::string> maps;  // d1, d2, ... for chain complexes
    std::string hom_of, hom_into;   // complex = hom hom_of hom_into
    bool operator==(const ComplexStmt&) const = default;
};

struct TermStmt {
    SrcPos pos;
    std::string complex;
    int index = 0;
    std::string module;
    bool operator==(const TermStmt&) const = default;
};

struct ClaimStmt {
    SrcPos pos;
    std::string kind, id, body;
    std::vector<std::pair<std::string, std::string>> options;
    std::string label;
    bool operator==(const ClaimStmt&) const = default;

    const std::string* option(const std::string& key) const {
        for (auto& kv : options)
            if (kv.first == key) return &kv.second;
        return nullptr;
    }
};

struct ScenarioStmt {
    SrcPos pos;
    std::string id, label;
    std::string coeff;  // default domain, GMA spelling
    std::vector<ClaimStmt> claims;
    bool operator==(const ScenarioStmt&) const = default;
};

using Statement = std::variant<RingStmt, FreeStmt, MapStmt, TransposeStmt, ModuleStmt, ComplexStmt, TermStmt,
                               ScenarioStmt>;

struct Document {
    std::vector<Statement> stmts;
    bool operator==(const Document&) const = default;

    std::vector<const ScenarioStmt*> scenarios() const;
};

// Syntax only; throws ParseError with a 1-based line and column.
Document parse_gma(const std::string& text);
std::string serialize_gma(const Document& doc);

// Body grammar used by claims: a cursor over a single string.
class BodyLexer {
public:
    explicit BodyLexer(std::string s) : s_(std::move(s)) {}
    void skip_ws();
    bool at_end();
    char peek();
    bool accept(const std::string& tok);  // punctuation or a whole word
    void expect(const std::string& tok);
    bool peek_word(const std::string& w);
    std::string ident();
    std::string word();    // identifier-like token that may contain '-' and '.'
    std::string quoted();  // "..." with \" and \\ escapes
    int64_t integer();
    Expr expr();
    std::string rest();
    size_t offset() const { return i_; }
    void seek(size_t i) { i_ = i; }
    const std::string& text() const { return s_; }
    [[noreturn]] void fail(const std::string& msg) const;

private:
    std::string s_;
    size_t i_ = 0;
    Expr sum();
    Expr product();
    Expr unary();
    Expr power();
    Expr atom();
};

// Syntax check plus a full build over the document's natural domain, so
// that homogeneity and naming errors surface at load time. Defined with
// the model.
Document load_gma(const std::string& text);

}  // namespace wgr
