#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "bs/ast.hpp"
#include "bs/value.hpp"

namespace bs {

enum class FallbackKind { Index, NewIndex };

// The root of every variable lookup. Locals and upvalues are resolved to
// frame slots at parse time; whatever is left lands here.
class Environment {
public:
    const Value* find(std::string_view name) const;
    Value get(std::string_view name) const;
    void set(std::string_view name, Value v);

private:
    struct Hash {
        using is_transparent = void;
        size_t operator()(std::string_view s) const { return std::hash<std::string_view>{}(s); }
    };
    std::unordered_map<std::string, Value, Hash, std::equal_to<>> globals_;
};

// Tree-walking evaluator. One instance is single-threaded; independent
// instances share nothing.
class Interpreter {
public:
    explicit Interpreter(std::ostream& out);
    Interpreter();

    Interpreter(const Interpreter&) = delete;
    Interpreter& operator=(const Interpreter&) = delete;

    Environment& globals() { return globals_; }
    std::ostream& out() { return *out_; }

    // Runs a parsed chunk; returns the values of a top-level `return`.
    std::vector<Value> eval(const Chunk& chunk);
    // tokenize + parse + eval in the global environment.
    std::vector<Value> dostring(std::string_view source, std::string chunk_name = "dostring");

    // Missing arguments become nil, extra ones are dropped. Throws NotCallable.
    std::vector<Value> call(const Value& f, std::span<const Value> args);
    Value call1(const Value& f, std::span<const Value> args);

    // Reads through the index fallback when the key is absent.
    Value table_get(const TableRef& t, const Value& key);
    // A script-level write: goes to the newindex fallback whenever one is installed.
    void table_set(const TableRef& t, const Value& key, Value v);
    void set_fallback(const TableRef& t, FallbackKind kind, FunctionRef handler);

    void register_native(std::string name, NativeFn fn);

    // print()'s rendering of a value.
    static std::string to_display(const Value& v);

    static constexpr int kMaxCallDepth = 200;

private:
    struct Frame;
    enum class Flow { Normal, Break, Return };

    std::vector<Value> run_function(const Function& fn, std::span<const Value> args);

    Flow exec_block(const Block& block, Frame& frame);
    Flow exec(const Stmt& stmt, Frame& frame);
    void exec_assign(const AssignStmt& s, Frame& frame, int line);
    void exec_local(const LocalStmt& s, Frame& frame);
    Flow exec_for(const ForStmt& s, Frame& frame, int line);

    Value eval(const Expr& e, Frame& frame);
    // Appends every value the expression produces (calls may yield several).
    void eval_multi(const Expr& e, Frame& frame, std::vector<Value>& out);
    void eval_list(const std::vector<ExprPtr>& exprs, Frame& frame, std::vector<Value>& out);
    std::vector<Value> eval_call(const CallExpr& c, Frame& frame, int line);
    Value eval_index(const IndexExpr& ix, Frame& frame, int line);
    Value eval_binary(const BinaryExpr& b, Frame& frame, int line);
    Value make_closure(const FunctionExpr& fe, Frame& frame);
    Value eval_table(const TableExpr& t, Frame& frame);

    Value index_value(const Value& object, const Value& key, int line);
    void assign_index(const Value& object, const Value& key, Value v, int line);

    void install_builtins();

    Environment globals_;
    std::ostream* out_;
    int depth_ = 0;
};

}  // namespace bs
