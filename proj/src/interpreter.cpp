#include "bs/interpreter.hpp"

#include <cmath>
#include <cstdio>
#include <iostream>

#include "bs/error.hpp"
#include "bs/parser.hpp"

namespace bs {

// ---------------------------------------------------------------------------
// Environment

const Value* Environment::find(std::string_view name) const {
    auto it = globals_.find(name);
    return it == globals_.end() ? nullptr : &it->second;
}

Value Environment::get(std::string_view name) const {
    const Value* v = find(name);
    return v ? *v : Value();
}

void Environment::set(std::string_view name, Value v) {
    auto it = globals_.find(name);
    if (v.is_nil()) {
        if (it != globals_.end())
            globals_.erase(it);
        return;
    }
    if (it != globals_.end())
        it->second = std::move(v);
    else
        globals_.emplace(std::string(name), std::move(v));
}

// ---------------------------------------------------------------------------
// Frames

struct Interpreter::Frame {
    const Function* fn = nullptr;
    std::vector<CellRef> slots;
    std::vector<Value> returns;

    // A cell nobody captured can be reused; a captured one must stay with its closure.
    void bind(int slot, Value v) {
        CellRef& cell = slots[slot];
        if (cell && cell.use_count() == 1)
            cell->value = std::move(v);
        else
            cell = std::make_shared<Cell>(Cell{std::move(v)});
    }
};

namespace {

class DepthGuard {
public:
    explicit DepthGuard(int& depth) : depth_(depth) {
        if (++depth_ > Interpreter::kMaxCallDepth) {
            --depth_;
            throw Error(ErrorKind::RuntimeError, "stack overflow");
        }
    }
    ~DepthGuard() { --depth_; }
    DepthGuard(const DepthGuard&) = delete;
    DepthGuard& operator=(const DepthGuard&) = delete;

private:
    int& depth_;
};

std::string describe_callee(const Expr& e) {
    if (const auto* v = std::get_if<VarExpr>(&e.node)) {
        const char* scope = v->ref.scope == VarRef::Scope::Global ? "global" : "local";
        return std::string(scope) + " '" + v->ref.name + "'";
    }
    if (const auto* ix = std::get_if<IndexExpr>(&e.node)) {
        if (const auto* s = std::get_if<StringLit>(&ix->key->node))
            return "field '" + s->value + "'";
    }
    return {};
}

[[noreturn]] void arith_error(const Value& a, const Value& b, int line) {
    const Value& bad = a.is_number() ? b : a;
    throw Error(ErrorKind::RuntimeError,
                "attempt to perform arithmetic on a " + std::string(type_name(bad.type())) +
                    " value",
                line);
}

bool concat_operand(const Value& v, std::string& out) {
    if (const std::string* s = v.text_if()) {
        out += *s;
        return true;
    }
    if (const double* n = v.number_if()) {
        out += number_to_text(*n);
        return true;
    }
    return false;
}

}  // namespace

// ---------------------------------------------------------------------------
// Public API

Interpreter::Interpreter(std::ostream& out) : out_(&out) { install_builtins(); }

Interpreter::Interpreter() : Interpreter(std::cout) {}

std::vector<Value> Interpreter::eval(const Chunk& chunk) {
    Function main;
    main.name = chunk.main->name;
    main.proto = chunk.main;
    return run_function(main, {});
}

std::vector<Value> Interpreter::dostring(std::string_view source, std::string chunk_name) {
    Chunk chunk = parse_source(source, std::move(chunk_name));
    return eval(chunk);
}

std::vector<Value> Interpreter::call(const Value& f, std::span<const Value> args) {
    if (!f.is_function())
        throw Error(ErrorKind::NotCallable,
                    "attempt to call a " + std::string(type_name(f.type())) + " value");
    const Function& fn = *f.as_function();
    if (fn.is_native()) {
        DepthGuard guard(depth_);
        return fn.native(*this, args);
    }
    return run_function(fn, args);
}

Value Interpreter::call1(const Value& f, std::span<const Value> args) {
    std::vector<Value> r = call(f, args);
    return r.empty() ? Value() : std::move(r.front());
}

Value Interpreter::table_get(const TableRef& t, const Value& key) {
    if (const Value* v = t->find(key))
        return *v;
    if (const FunctionRef& h = t->index_handler()) {
        const Value args[] = {Value(t), key};
        return call1(Value(h), args);
    }
    return {};
}

void Interpreter::table_set(const TableRef& t, const Value& key, Value v) {
    if (const FunctionRef& h = t->newindex_handler()) {
        if (key.is_nil())
            throw Error(ErrorKind::KeyIsNil, "table index is nil");
        const Value args[] = {Value(t), key, std::move(v)};
        call(Value(h), args);
        return;
    }
    t->raw_set(key, std::move(v));
}

void Interpreter::set_fallback(const TableRef& t, FallbackKind kind, FunctionRef handler) {
    if (kind == FallbackKind::Index)
        t->set_index_handler(std::move(handler));
    else
        t->set_newindex_handler(std::move(handler));
}

void Interpreter::register_native(std::string name, NativeFn fn) {
    std::string key = name;
    globals_.set(key, Value(make_native(std::move(name), std::move(fn))));
}

std::string Interpreter::to_display(const Value& v) {
    char buf[64];
    switch (v.type()) {
    case Value::Type::Nil: return "nil";
    case Value::Type::Boolean: return v.as_bool() ? "true" : "false";
    case Value::Type::Number: return number_to_text(v.as_number());
    case Value::Type::Text: return v.as_text();
    case Value::Type::Table:
        if (v.as_table()->is_host_proxy())
            return v.as_table()->proxy_label();
        std::snprintf(buf, sizeof buf, "table: 0x%08llx",
                      static_cast<unsigned long long>(v.as_table()->id()));
        return buf;
    case Value::Type::Function:
        std::snprintf(buf, sizeof buf, "function: %p", static_cast<void*>(v.as_function().get()));
        return buf;
    case Value::Type::HostClass: return "hostclass: " + v.as_host_class().name;
    case Value::Type::HostObject:
        std::snprintf(buf, sizeof buf, "hostref: %p", static_cast<void*>(v.as_host_object().get()));
        return buf;
    case Value::Type::HostArray:
        std::snprintf(buf, sizeof buf, "hostref: %p", static_cast<void*>(v.as_host_array().get()));
        return buf;
    }
    return "?";
}

// ---------------------------------------------------------------------------
// Execution

std::vector<Value> Interpreter::run_function(const Function& fn, std::span<const Value> args) {
    DepthGuard guard(depth_);
    const FunctionProto& proto = *fn.proto;
    Frame frame;
    frame.fn = &fn;
    frame.slots.resize(proto.slot_count);
    const size_t nparams = proto.params.size();
    for (size_t i = 0; i < nparams; ++i)
        frame.slots[i] = std::make_shared<Cell>(Cell{i < args.size() ? args[i] : Value()});
    if (exec_block(proto.body, frame) == Flow::Return)
        return std::move(frame.returns);
    return {};
}

Interpreter::Flow Interpreter::exec_block(const Block& block, Frame& frame) {
    for (const auto& s : block) {
        Flow flow;
        try {
            flow = exec(*s, frame);
        } catch (Error& e) {
            e.set_line(s->line);
            throw;
        }
        if (flow != Flow::Normal)
            return flow;
    }
    return Flow::Normal;
}

Interpreter::Flow Interpreter::exec(const Stmt& stmt, Frame& frame) {
    switch (stmt.node.index()) {
    case 0:
        exec_assign(std::get<AssignStmt>(stmt.node), frame, stmt.line);
        return Flow::Normal;
    case 1:
        exec_local(std::get<LocalStmt>(stmt.node), frame);
        return Flow::Normal;
    case 2: {
        const Expr& call = *std::get<CallStmt>(stmt.node).call;
        if (const auto* c = std::get_if<CallExpr>(&call.node)) {
            eval_call(*c, frame, call.line);
        } else {
            std::vector<Value> discard;
            eval_multi(call, frame, discard);
        }
        return Flow::Normal;
    }
    case 3: {
        const auto& s = std::get<IfStmt>(stmt.node);
        for (const auto& branch : s.branches) {
            if (eval(*branch.cond, frame).truthy())
                return exec_block(branch.body, frame);
        }
        if (s.otherwise)
            return exec_block(*s.otherwise, frame);
        return Flow::Normal;
    }
    case 4: {
        const auto& s = std::get<WhileStmt>(stmt.node);
        while (eval(*s.cond, frame).truthy()) {
            Flow flow = exec_block(s.body, frame);
            if (flow == Flow::Break)
                break;
            if (flow == Flow::Return)
                return flow;
        }
        return Flow::Normal;
    }
    case 5:
        return exec_for(std::get<ForStmt>(stmt.node), frame, stmt.line);
    case 6:
        return exec_block(std::get<DoStmt>(stmt.node).body, frame);
    case 7: {
        const auto& s = std::get<ReturnStmt>(stmt.node);
        std::vector<Value> values;
        eval_list(s.values, frame, values);
        frame.returns = std::move(values);
        return Flow::Return;
    }
    case 8:
        return Flow::Break;
    }
    return Flow::Normal;
}

void Interpreter::exec_assign(const AssignStmt& s, Frame& frame, int line) {
    // Single target: the hot path for `x = e` and `t.k = e`.
    if (s.targets.size() == 1 && s.values.size() == 1) {
        const Expr& target = *s.targets[0];
        if (const auto* var = std::get_if<VarExpr>(&target.node)) {
            Value v = eval(*s.values[0], frame);
            switch (var->ref.scope) {
            case VarRef::Scope::Local: frame.slots[var->ref.index]->value = std::move(v); break;
            case VarRef::Scope::Upvalue:
                frame.fn->upvalues[var->ref.index]->value = std::move(v);
                break;
            case VarRef::Scope::Global: globals_.set(var->ref.name, std::move(v)); break;
            }
            return;
        }
        const auto& ix = std::get<IndexExpr>(target.node);
        Value object = eval(*ix.object, frame);
        Value key = eval(*ix.key, frame);
        Value v = eval(*s.values[0], frame);
        assign_index(object, key, std::move(v), line);
        return;
    }

    struct Place {
        const VarExpr* var = nullptr;
        Value object;
        Value key;
    };
    std::vector<Place> places;
    places.reserve(s.targets.size());
    for (const auto& t : s.targets) {
        Place p;
        if (const auto* var = std::get_if<VarExpr>(&t->node)) {
            p.var = var;
        } else {
            const auto& ix = std::get<IndexExpr>(t->node);
            p.object = eval(*ix.object, frame);
            p.key = eval(*ix.key, frame);
        }
        places.push_back(std::move(p));
    }
    std::vector<Value> values;
    eval_list(s.values, frame, values);
    values.resize(places.size());
    for (size_t i = 0; i < places.size(); ++i) {
        Place& p = places[i];
        if (!p.var) {
            assign_index(p.object, p.key, std::move(values[i]), line);
            continue;
        }
        switch (p.var->ref.scope) {
        case VarRef::Scope::Local: frame.slots[p.var->ref.index]->value = std::move(values[i]); break;
        case VarRef::Scope::Upvalue:
            frame.fn->upvalues[p.var->ref.index]->value = std::move(values[i]);
            break;
        case VarRef::Scope::Global: globals_.set(p.var->ref.name, std::move(values[i])); break;
        }
    }
}

void Interpreter::exec_local(const LocalStmt& s, Frame& frame) {
    if (s.is_function) {
        // the function must see its own (fresh) cell
        frame.slots[s.slots[0]] = std::make_shared<Cell>();
        frame.slots[s.slots[0]]->value = eval(*s.values[0], frame);
        return;
    }
    if (s.slots.size() == 1 && s.values.size() <= 1) {
        frame.bind(s.slots[0], s.values.empty() ? Value() : eval(*s.values[0], frame));
        return;
    }
    std::vector<Value> values;
    eval_list(s.values, frame, values);
    values.resize(s.slots.size());
    for (size_t i = 0; i < s.slots.size(); ++i)
        frame.bind(s.slots[i], std::move(values[i]));
}

Interpreter::Flow Interpreter::exec_for(const ForStmt& s, Frame& frame, int line) {
    auto number = [&](const Expr& e, const char* what) {
        Value v = eval(e, frame);
        if (!v.is_number())
            throw Error(ErrorKind::RuntimeError,
                        std::string("'for' ") + what + " must be a number", line);
        return v.as_number();
    };
    double start = number(*s.start, "initial value");
    double stop = number(*s.stop, "limit");
    double step = s.step ? number(*s.step, "step") : 1.0;
    if (step == 0.0)
        throw Error(ErrorKind::RuntimeError, "'for' step is zero", line);
    for (double i = start; step > 0 ? i <= stop : i >= stop; i += step) {
        frame.bind(s.slot, Value(i));
        Flow flow = exec_block(s.body, frame);
        if (flow == Flow::Break)
            break;
        if (flow == Flow::Return)
            return flow;
    }
    return Flow::Normal;
}

// ---------------------------------------------------------------------------
// Expressions

Value Interpreter::eval(const Expr& e, Frame& frame) {
    switch (e.node.index()) {
    case 0: return {};
    case 1: return Value(std::get<BoolLit>(e.node).value);
    case 2: return Value(std::get<NumberLit>(e.node).value);
    case 3: return Value(std::get<StringLit>(e.node).value);
    case 4: {
        const VarRef& ref = std::get<VarExpr>(e.node).ref;
        switch (ref.scope) {
        case VarRef::Scope::Local: return frame.slots[ref.index]->value;
        case VarRef::Scope::Upvalue: return frame.fn->upvalues[ref.index]->value;
        case VarRef::Scope::Global: {
            const Value* v = globals_.find(ref.name);
            return v ? *v : Value();
        }
        }
        return {};
    }
    case 5: return eval_index(std::get<IndexExpr>(e.node), frame, e.line);
    case 6: {
        std::vector<Value> r = eval_call(std::get<CallExpr>(e.node), frame, e.line);
        return r.empty() ? Value() : std::move(r.front());
    }
    case 7: return make_closure(std::get<FunctionExpr>(e.node), frame);
    case 8: return eval(*std::get<ParenExpr>(e.node).inner, frame);
    case 9: return eval_binary(std::get<BinaryExpr>(e.node), frame, e.line);
    case 10: {
        const auto& u = std::get<UnaryExpr>(e.node);
        Value v = eval(*u.operand, frame);
        if (u.op == UnOp::Not)
            return Value(!v.truthy());
        if (!v.is_number())
            throw Error(ErrorKind::RuntimeError,
                        "attempt to perform arithmetic on a " + std::string(type_name(v.type())) +
                            " value",
                        e.line);
        return Value(-v.as_number());
    }
    case 11: return eval_table(std::get<TableExpr>(e.node), frame);
    case 12: {
        std::vector<Value> r;
        eval_multi(e, frame, r);
        return r.empty() ? Value() : std::move(r.front());
    }
    }
    return {};
}

void Interpreter::eval_multi(const Expr& e, Frame& frame, std::vector<Value>& out) {
    if (const auto* c = std::get_if<CallExpr>(&e.node)) {
        std::vector<Value> r = eval_call(*c, frame, e.line);
        for (auto& v : r)
            out.push_back(std::move(v));
        return;
    }
    if (const auto* b = std::get_if<BindExpr>(&e.node)) {
        frame.bind(b->slot, eval(*b->init, frame));
        eval_multi(*b->body, frame, out);
        return;
    }
    out.push_back(eval(e, frame));
}

void Interpreter::eval_list(const std::vector<ExprPtr>& exprs, Frame& frame,
                            std::vector<Value>& out) {
    for (size_t i = 0; i < exprs.size(); ++i) {
        if (i + 1 == exprs.size())
            eval_multi(*exprs[i], frame, out);
        else
            out.push_back(eval(*exprs[i], frame));
    }
}

std::vector<Value> Interpreter::eval_call(const CallExpr& c, Frame& frame, int line) {
    Value callee = eval(*c.callee, frame);
    std::vector<Value> args;
    args.reserve(c.args.size());
    eval_list(c.args, frame, args);
    if (!callee.is_function()) {
        std::string what = describe_callee(*c.callee);
        std::string type(type_name(callee.type()));
        throw Error(ErrorKind::NotCallable,
                    what.empty() ? "attempt to call a " + type + " value"
                                 : "attempt to call " + what + " (a " + type + " value)",
                    line);
    }
    try {
        return call(callee, args);
    } catch (Error& err) {
        err.set_line(line);
        throw;
    }
}

Value Interpreter::eval_index(const IndexExpr& ix, Frame& frame, int line) {
    Value object = eval(*ix.object, frame);
    if (const auto* s = std::get_if<StringLit>(&ix.key->node)) {
        if (const TableRef* t = object.table_if()) {
            if (const Value* v = (*t)->find(std::string_view(s->value)))
                return *v;
            if (const FunctionRef& h = (*t)->index_handler()) {
                const Value args[] = {object, Value(s->value)};
                try {
                    return call1(Value(h), args);
                } catch (Error& err) {
                    err.set_line(line);
                    throw;
                }
            }
            return {};
        }
    }
    return index_value(object, eval(*ix.key, frame), line);
}

Value Interpreter::index_value(const Value& object, const Value& key, int line) {
    if (const TableRef* t = object.table_if()) {
        try {
            return table_get(*t, key);
        } catch (Error& err) {
            err.set_line(line);
            throw;
        }
    }
    throw Error(ErrorKind::RuntimeError,
                "attempt to index a " + std::string(type_name(object.type())) + " value", line);
}

void Interpreter::assign_index(const Value& object, const Value& key, Value v, int line) {
    if (const TableRef* t = object.table_if()) {
        try {
            table_set(*t, key, std::move(v));
        } catch (Error& err) {
            err.set_line(line);
            throw;
        }
        return;
    }
    throw Error(ErrorKind::RuntimeError,
                "attempt to index a " + std::string(type_name(object.type())) + " value", line);
}

Value Interpreter::eval_binary(const BinaryExpr& b, Frame& frame, int line) {
    if (b.op == BinOp::And) {
        Value l = eval(*b.lhs, frame);
        return l.truthy() ? eval(*b.rhs, frame) : l;
    }
    if (b.op == BinOp::Or) {
        Value l = eval(*b.lhs, frame);
        return l.truthy() ? l : eval(*b.rhs, frame);
    }
    Value l = eval(*b.lhs, frame);
    Value r = eval(*b.rhs, frame);
    switch (b.op) {
    case BinOp::Add:
    case BinOp::Sub:
    case BinOp::Mul:
    case BinOp::Div:
    case BinOp::Mod: {
        const double* x = l.number_if();
        const double* y = r.number_if();
        if (!x || !y)
            arith_error(l, r, line);
        switch (b.op) {
        case BinOp::Add: return Value(*x + *y);
        case BinOp::Sub: return Value(*x - *y);
        case BinOp::Mul: return Value(*x * *y);
        case BinOp::Div: return Value(*x / *y);
        default: return Value(*x - std::floor(*x / *y) * *y);
        }
    }
    case BinOp::Concat: {
        std::string out;
        if (!concat_operand(l, out) || !concat_operand(r, out)) {
            const Value& bad = (l.is_text() || l.is_number()) ? r : l;
            throw Error(ErrorKind::RuntimeError,
                        "attempt to concatenate a " + std::string(type_name(bad.type())) +
                            " value",
                        line);
        }
        return Value(std::move(out));
    }
    case BinOp::Eq: return Value(l == r);
    case BinOp::Ne: return Value(!(l == r));
    case BinOp::Lt:
    case BinOp::Le:
    case BinOp::Gt:
    case BinOp::Ge: {
        int cmp;
        if (l.is_number() && r.is_number()) {
            double x = l.as_number(), y = r.as_number();
            switch (b.op) {
            case BinOp::Lt: return Value(x < y);
            case BinOp::Le: return Value(x <= y);
            case BinOp::Gt: return Value(x > y);
            default: return Value(x >= y);
            }
        }
        if (l.is_text() && r.is_text()) {
            cmp = l.as_text().compare(r.as_text());
            switch (b.op) {
            case BinOp::Lt: return Value(cmp < 0);
            case BinOp::Le: return Value(cmp <= 0);
            case BinOp::Gt: return Value(cmp > 0);
            default: return Value(cmp >= 0);
            }
        }
        throw Error(ErrorKind::RuntimeError,
                    "attempt to compare " + std::string(type_name(l.type())) + " with " +
                        std::string(type_name(r.type())),
                    line);
    }
    default: break;
    }
    return {};
}

Value Interpreter::make_closure(const FunctionExpr& fe, Frame& frame) {
    auto fn = std::make_shared<Function>();
    fn->name = fe.proto->name;
    fn->proto = fe.proto;
    fn->upvalues.reserve(fe.proto->upvalues.size());
    for (const UpvalueDesc& up : fe.proto->upvalues) {
        if (up.from_parent_local) {
            CellRef& cell = frame.slots[up.index];
            if (!cell)
                cell = std::make_shared<Cell>();
            fn->upvalues.push_back(cell);
        } else {
            fn->upvalues.push_back(frame.fn->upvalues[up.index]);
        }
    }
    return Value(std::move(fn));
}

Value Interpreter::eval_table(const TableExpr& t, Frame& frame) {
    TableRef table = make_table();
    double next = 1;
    for (size_t i = 0; i < t.fields.size(); ++i) {
        const TableField& f = t.fields[i];
        switch (f.kind) {
        case TableField::Kind::Named:
        case TableField::Kind::Keyed: {
            Value key = eval(*f.key, frame);
            table->raw_set(key, eval(*f.value, frame));
            break;
        }
        case TableField::Kind::Positional:
            if (i + 1 == t.fields.size()) {
                std::vector<Value> rest;
                eval_multi(*f.value, frame, rest);
                for (auto& v : rest)
                    table->raw_set(Value(next++), std::move(v));
            } else {
                table->raw_set(Value(next++), eval(*f.value, frame));
            }
            break;
        }
    }
    return Value(std::move(table));
}

// ---------------------------------------------------------------------------
// Builtins

namespace {

const TableRef& table_arg(std::span<const Value> args, size_t i, const char* fn) {
    if (i >= args.size() || !args[i].is_table())
        throw Error(ErrorKind::RuntimeError,
                    std::string("bad argument #") + std::to_string(i + 1) + " to '" + fn +
                        "' (table expected)");
    return args[i].as_table();
}

Value arg(std::span<const Value> args, size_t i) { return i < args.size() ? args[i] : Value(); }

}  // namespace

void Interpreter::install_builtins() {
    register_native("print", [](Interpreter& in, std::span<const Value> args) {
        std::string line;
        for (size_t i = 0; i < args.size(); ++i) {
            if (i)
                line += '\t';
            line += to_display(args[i]);
        }
        line += '\n';
        in.out() << line;
        in.out().flush();
        return std::vector<Value>{};
    });
    register_native("type", [](Interpreter&, std::span<const Value> args) {
        Value v = arg(args, 0);
        if (v.is_table() && v.as_table()->is_host_proxy())
            return std::vector<Value>{Value("hostobject")};
        return std::vector<Value>{Value(type_name(v.type()))};
    });
    register_native("tostring", [](Interpreter&, std::span<const Value> args) {
        return std::vector<Value>{Value(to_display(arg(args, 0)))};
    });
    register_native("dostring", [](Interpreter& in, std::span<const Value> args) {
        Value src = arg(args, 0);
        if (!src.is_text())
            throw Error(ErrorKind::RuntimeError, "bad argument #1 to 'dostring' (string expected)");
        return in.dostring(src.as_text());
    });
    register_native("rawget", [](Interpreter&, std::span<const Value> args) {
        return std::vector<Value>{table_arg(args, 0, "rawget")->raw_get(arg(args, 1))};
    });
    register_native("rawset", [](Interpreter&, std::span<const Value> args) {
        const TableRef& t = table_arg(args, 0, "rawset");
        if (t->is_host_proxy() && arg(args, 1) == Value("__hostref"))
            throw Error(ErrorKind::ReservedField, "'__hostref' of a host proxy is read-only");
        t->raw_set(arg(args, 1), arg(args, 2));
        return std::vector<Value>{arg(args, 0)};
    });
    register_native("setfallback", [](Interpreter& in, std::span<const Value> args) {
        const TableRef& t = table_arg(args, 0, "setfallback");
        if (t->is_host_proxy())
            throw Error(ErrorKind::RuntimeError, "cannot replace the fallbacks of a host proxy");
        Value kind = arg(args, 1);
        Value handler = arg(args, 2);
        if (!handler.is_nil() && !handler.is_function())
            throw Error(ErrorKind::RuntimeError,
                        "bad argument #3 to 'setfallback' (function or nil expected)");
        FunctionRef fn = handler.is_nil() ? nullptr : handler.as_function();
        if (kind == Value("index"))
            in.set_fallback(t, FallbackKind::Index, std::move(fn));
        else if (kind == Value("newindex"))
            in.set_fallback(t, FallbackKind::NewIndex, std::move(fn));
        else
            throw Error(ErrorKind::RuntimeError,
                        "bad argument #2 to 'setfallback' (\"index\" or \"newindex\" expected)");
        return std::vector<Value>{};
    });
    register_native("error", [](Interpreter&, std::span<const Value> args) -> std::vector<Value> {
        throw Error(ErrorKind::RuntimeError, to_display(arg(args, 0)));
    });
}

}  // namespace bs
