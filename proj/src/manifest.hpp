#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace cdg::app {

struct Pos {
    int line = 0;
    int col = 0;
};

struct ManifestError {
    enum class Kind { syntax, unknown_name, dimension_mismatch, invalid };
    Kind kind = Kind::syntax;
    Pos pos;
    std::string message;

    std::string str() const;
};

/// Basis vector reference: a label, optionally pinned to a degree with @.
struct Ref {
    std::string label;
    std::optional<int> degree;
    Pos pos;
};

/// c * r1 | r2 | ...; the coefficient text is unsigned, the sign separate.
struct Term {
    bool negative = false;
    std::string coef = "1";
    std::vector<Ref> factors;
    Pos pos;
};

struct Expr {
    std::vector<Term> terms;  // empty for the literal 0
    Pos pos;
};

/// One statement inside an object block.
struct BodyLine {
    std::string keyword;
    Pos pos;
    std::vector<Ref> refs;                             // left-hand references
    std::optional<Expr> expr;                          // right-hand side
    int degree = 0;                                    // basis, generators, d blocks
    std::vector<std::string> labels;                   // basis, generators
    std::vector<std::vector<std::string>> matrix;      // d blocks, signed coefficient text
    bool block = false;                                // d DEG = [..]
    std::optional<long> lo, hi;                        // window; nullopt = infinite
    bool total = false;                                // window total
    std::string mode;                                  // truncation input|output
    long number = 0;                                   // weight, truncation limit
};

/// An object declaration.  Constructed forms ("= polynomial ...") have no
/// body; `args` holds their words in order.
struct ObjectDecl {
    std::string kind;  // algebra, coalgebra, module, comodule, contramodule, map
    std::string name;
    Pos pos;
    std::string form;  // empty for explicit blocks, else polynomial, exterior, dual, bar, ground, twisted, trivial
    std::string over;  // base object for modules and comodules
    std::string source, target;
    int degree = 0;
    std::vector<std::string> args;
    std::map<std::string, std::string> options;  // keyword arguments of constructed forms
    std::vector<BodyLine> body;
};

struct FamilyDecl {
    std::string name;
    std::vector<std::string> members;
    Pos pos;
};

struct TaskDecl {
    std::string command;
    std::vector<std::string> args;
    Pos pos;
};

struct Manifest {
    std::string field = "rational";
    std::uint32_t prime = 0;
    std::optional<int> window;
    std::optional<std::uint64_t> seed;
    std::vector<ObjectDecl> objects;
    std::vector<FamilyDecl> families;
    std::vector<TaskDecl> tasks;
};

struct ParseResult {
    std::optional<Manifest> manifest;
    std::vector<ManifestError> errors;
    bool ok() const { return manifest.has_value() && errors.empty(); }
};

/// Never throws on malformed input; every problem becomes a positioned error.
ParseResult parse_manifest(const std::string& text);

/// Quotes a name or label when it is not a plain word.
std::string quote_name(const std::string& s);

/// Writes a signed coefficient as "+ c" / "- c" pieces for expressions.
std::string signed_coefficient(const std::string& c, bool first);

}  // namespace cdg::app
