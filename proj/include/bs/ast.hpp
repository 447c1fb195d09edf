#pragma once

#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace bs {

struct Expr;
struct Stmt;
struct FunctionProto;

using ExprPtr = std::unique_ptr<Expr>;
using StmtPtr = std::unique_ptr<Stmt>;
using Block = std::vector<StmtPtr>;

enum class BinOp { Add, Sub, Mul, Div, Mod, Concat, Eq, Ne, Lt, Le, Gt, Ge, And, Or };
enum class UnOp { Neg, Not };

// Variables are resolved while parsing: locals and upvalues index into the
// running frame or closure, everything else is a global looked up by name.
struct VarRef {
    enum class Scope { Local, Upvalue, Global };
    Scope scope = Scope::Global;
    int index = -1;
    std::string name;
};

struct NilLit {};
struct BoolLit { bool value; };
struct NumberLit { double value; };
struct StringLit { std::string value; };
struct VarExpr { VarRef ref; };
struct IndexExpr { ExprPtr object; ExprPtr key; };
struct CallExpr { ExprPtr callee; std::vector<ExprPtr> args; };
struct FunctionExpr { std::shared_ptr<const FunctionProto> proto; };
struct ParenExpr { ExprPtr inner; };
struct BinaryExpr { BinOp op; ExprPtr lhs; ExprPtr rhs; };
struct UnaryExpr { UnOp op; ExprPtr operand; };

struct TableField {
    enum class Kind { Named, Keyed, Positional };
    Kind kind;
    ExprPtr key;  // StringLit for Named, null for Positional
    ExprPtr value;
};
struct TableExpr { std::vector<TableField> fields; };

// Evaluates `init` once into a hidden local slot, then evaluates `body`.
// Only produced by colon-call desugaring of a non-trivial receiver.
struct BindExpr { int slot; ExprPtr init; ExprPtr body; };

struct Expr {
    int line = 0;
    std::variant<NilLit, BoolLit, NumberLit, StringLit, VarExpr, IndexExpr, CallExpr, FunctionExpr,
                 ParenExpr, BinaryExpr, UnaryExpr, TableExpr, BindExpr>
        node;
};

struct AssignStmt { std::vector<ExprPtr> targets; std::vector<ExprPtr> values; };
struct LocalStmt {
    std::vector<std::string> names;
    std::vector<int> slots;
    std::vector<ExprPtr> values;
    bool is_function = false;  // `local function f`: f is in scope inside its own body
};
struct CallStmt { ExprPtr call; };
struct IfBranch { ExprPtr cond; Block body; };
struct IfStmt { std::vector<IfBranch> branches; std::optional<Block> otherwise; };
struct WhileStmt { ExprPtr cond; Block body; };
struct ForStmt {
    std::string var;
    int slot;
    ExprPtr start;
    ExprPtr stop;
    ExprPtr step;  // may be null
    Block body;
};
struct DoStmt { Block body; };
struct ReturnStmt { std::vector<ExprPtr> values; };
struct BreakStmt {};

struct Stmt {
    int line = 0;
    std::variant<AssignStmt, LocalStmt, CallStmt, IfStmt, WhileStmt, ForStmt, DoStmt, ReturnStmt,
                 BreakStmt>
        node;
};

struct UpvalueDesc {
    std::string name;
    bool from_parent_local;  // else: the parent's own upvalue
    int index;
};

struct FunctionProto {
    std::string name;
    std::vector<std::string> params;  // occupy slots 0..params.size()-1
    Block body;
    int slot_count = 0;
    std::vector<UpvalueDesc> upvalues;
    int line = 0;
};

// A parsed, fully desugared source unit. Executed as a parameterless function.
struct Chunk {
    std::shared_ptr<const FunctionProto> main;

    const Block& statements() const { return main->body; }
};

}  // namespace bs
