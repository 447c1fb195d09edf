#include <cctype>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "bs/error.hpp"
#include "bs/parser.hpp"

namespace bs {

namespace {

std::string_view op_text(BinOp op) {
    switch (op) {
    case BinOp::Add: return "+";
    case BinOp::Sub: return "-";
    case BinOp::Mul: return "*";
    case BinOp::Div: return "/";
    case BinOp::Mod: return "%";
    case BinOp::Concat: return "..";
    case BinOp::Eq: return "==";
    case BinOp::Ne: return "~=";
    case BinOp::Lt: return "<";
    case BinOp::Le: return "<=";
    case BinOp::Gt: return ">";
    case BinOp::Ge: return ">=";
    case BinOp::And: return "and";
    case BinOp::Or: return "or";
    }
    return "?";
}

std::string number_text(double v) {
    if (std::isinf(v))
        return v > 0 ? "1e999" : "-1e999";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string quote(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        switch (c) {
        case '\n': out += "\\n"; break;
        case '\t': out += "\\t"; break;
        case '\r': out += "\\r"; break;
        case '\0': out += "\\0"; break;
        case '"': out += "\\\""; break;
        case '\\': out += "\\\\"; break;
        default: out.push_back(c);
        }
    }
    return out + "\"";
}

bool is_identifier(const std::string& s) {
    if (s.empty() || is_keyword(s))
        return false;
    if (!(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_'))
        return false;
    for (char c : s) {
        if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_'))
            return false;
    }
    return true;
}

class SourcePrinter {
public:
    std::string chunk(const Chunk& c) {
        block(c.statements(), 0);
        return out_.str();
    }

private:
    void indent(int depth) {
        for (int i = 0; i < depth; ++i)
            out_ << "  ";
    }

    void block(const Block& b, int depth) {
        for (const auto& s : b) {
            indent(depth);
            stmt(*s, depth);
            out_ << '\n';
        }
    }

    void list(const std::vector<ExprPtr>& xs) {
        for (size_t i = 0; i < xs.size(); ++i) {
            if (i)
                out_ << ", ";
            expr(*xs[i]);
        }
    }

    void function_tail(const FunctionProto& p, int depth) {
        out_ << '(';
        for (size_t i = 0; i < p.params.size(); ++i)
            out_ << (i ? ", " : "") << p.params[i];
        out_ << ")\n";
        block(p.body, depth + 1);
        indent(depth);
        out_ << "end";
    }

    void stmt(const Stmt& s, int depth) {
        depth_ = depth;
        std::visit(
            [&](const auto& n) {
                using T = std::decay_t<decltype(n)>;
                if constexpr (std::is_same_v<T, AssignStmt>) {
                    list(n.targets);
                    out_ << " = ";
                    list(n.values);
                } else if constexpr (std::is_same_v<T, LocalStmt>) {
                    if (n.is_function) {
                        out_ << "local function " << n.names[0];
                        const auto& fn = std::get<FunctionExpr>(n.values[0]->node);
                        function_tail(*fn.proto, depth);
                        return;
                    }
                    out_ << "local ";
                    for (size_t i = 0; i < n.names.size(); ++i)
                        out_ << (i ? ", " : "") << n.names[i];
                    if (!n.values.empty()) {
                        out_ << " = ";
                        list(n.values);
                    }
                } else if constexpr (std::is_same_v<T, CallStmt>) {
                    expr(*n.call);
                } else if constexpr (std::is_same_v<T, IfStmt>) {
                    for (size_t i = 0; i < n.branches.size(); ++i) {
                        if (i) {
                            indent(depth);
                            out_ << "else";
                        }
                        out_ << "if ";
                        expr(*n.branches[i].cond);
                        out_ << " then\n";
                        block(n.branches[i].body, depth + 1);
                    }
                    if (n.otherwise) {
                        indent(depth);
                        out_ << "else\n";
                        block(*n.otherwise, depth + 1);
                    }
                    indent(depth);
                    out_ << "end";
                } else if constexpr (std::is_same_v<T, WhileStmt>) {
                    out_ << "while ";
                    expr(*n.cond);
                    out_ << " do\n";
                    block(n.body, depth + 1);
                    indent(depth);
                    out_ << "end";
                } else if constexpr (std::is_same_v<T, ForStmt>) {
                    out_ << "for " << n.var << " = ";
                    expr(*n.start);
                    out_ << ", ";
                    expr(*n.stop);
                    if (n.step) {
                        out_ << ", ";
                        expr(*n.step);
                    }
                    out_ << " do\n";
                    block(n.body, depth + 1);
                    indent(depth);
                    out_ << "end";
                } else if constexpr (std::is_same_v<T, DoStmt>) {
                    out_ << "do\n";
                    block(n.body, depth + 1);
                    indent(depth);
                    out_ << "end";
                } else if constexpr (std::is_same_v<T, ReturnStmt>) {
                    out_ << "return";
                    if (!n.values.empty()) {
                        out_ << ' ';
                        list(n.values);
                    }
                } else if constexpr (std::is_same_v<T, BreakStmt>) {
                    out_ << "break";
                }
            },
            s.node);
    }

    void expr(const Expr& e) {
        std::visit(
            [&](const auto& n) {
                using T = std::decay_t<decltype(n)>;
                if constexpr (std::is_same_v<T, NilLit>) {
                    out_ << "nil";
                } else if constexpr (std::is_same_v<T, BoolLit>) {
                    out_ << (n.value ? "true" : "false");
                } else if constexpr (std::is_same_v<T, NumberLit>) {
                    out_ << number_text(n.value);
                } else if constexpr (std::is_same_v<T, StringLit>) {
                    out_ << quote(n.value);
                } else if constexpr (std::is_same_v<T, VarExpr>) {
                    out_ << n.ref.name;
                } else if constexpr (std::is_same_v<T, IndexExpr>) {
                    expr(*n.object);
                    index_key(*n.key);
                } else if constexpr (std::is_same_v<T, CallExpr>) {
                    expr(*n.callee);
                    out_ << '(';
                    list(n.args);
                    out_ << ')';
                } else if constexpr (std::is_same_v<T, FunctionExpr>) {
                    out_ << "function";
                    function_tail(*n.proto, depth_);
                } else if constexpr (std::is_same_v<T, ParenExpr>) {
                    out_ << '(';
                    expr(*n.inner);
                    out_ << ')';
                } else if constexpr (std::is_same_v<T, BinaryExpr>) {
                    expr(*n.lhs);
                    out_ << ' ' << op_text(n.op) << ' ';
                    expr(*n.rhs);
                } else if constexpr (std::is_same_v<T, UnaryExpr>) {
                    out_ << (n.op == UnOp::Neg ? "- " : "not ");
                    expr(*n.operand);
                } else if constexpr (std::is_same_v<T, TableExpr>) {
                    out_ << '{';
                    for (size_t i = 0; i < n.fields.size(); ++i) {
                        const auto& f = n.fields[i];
                        if (i)
                            out_ << ", ";
                        if (f.kind == TableField::Kind::Named) {
                            out_ << std::get<StringLit>(f.key->node).value << " = ";
                        } else if (f.kind == TableField::Kind::Keyed) {
                            out_ << '[';
                            expr(*f.key);
                            out_ << "] = ";
                        }
                        expr(*f.value);
                    }
                    out_ << '}';
                } else if constexpr (std::is_same_v<T, BindExpr>) {
                    // always the shape built by desugar_colon_call
                    const auto& call = std::get<CallExpr>(n.body->node);
                    const auto& callee = std::get<IndexExpr>(call.callee->node);
                    expr(*n.init);
                    out_ << ':' << std::get<StringLit>(callee.key->node).value << '(';
                    for (size_t i = 1; i < call.args.size(); ++i) {
                        if (i > 1)
                            out_ << ", ";
                        expr(*call.args[i]);
                    }
                    out_ << ')';
                }
            },
            e.node);
    }

    void index_key(const Expr& key) {
        if (const auto* s = std::get_if<StringLit>(&key.node); s && is_identifier(s->value)) {
            out_ << '.' << s->value;
            return;
        }
        out_ << '[';
        expr(key);
        out_ << ']';
    }

    std::ostringstream out_;
    int depth_ = 0;
};

class Dumper {
public:
    std::string chunk(const Chunk& c) {
        proto(*c.main);
        return out_.str();
    }

private:
    void proto(const FunctionProto& p) {
        out_ << "(fn [";
        for (const auto& n : p.params)
            out_ << n << ' ';
        out_ << "] slots=" << p.slot_count << " up=[";
        for (const auto& u : p.upvalues)
            out_ << u.name << (u.from_parent_local ? ":L" : ":U") << u.index << ' ';
        out_ << ']';
        block(p.body);
        out_ << ')';
    }

    void block(const Block& b) {
        out_ << " (block";
        for (const auto& s : b) {
            out_ << ' ';
            stmt(*s);
        }
        out_ << ')';
    }

    void list(const std::vector<ExprPtr>& xs) {
        out_ << '[';
        for (const auto& x : xs) {
            expr(*x);
            out_ << ' ';
        }
        out_ << ']';
    }

    void stmt(const Stmt& s) {
        std::visit(
            [&](const auto& n) {
                using T = std::decay_t<decltype(n)>;
                if constexpr (std::is_same_v<T, AssignStmt>) {
                    out_ << "(assign ";
                    list(n.targets);
                    list(n.values);
                } else if constexpr (std::is_same_v<T, LocalStmt>) {
                    out_ << "(local" << (n.is_function ? "-fn" : "");
                    for (size_t i = 0; i < n.names.size(); ++i)
                        out_ << ' ' << n.names[i] << '@' << n.slots[i];
                    list(n.values);
                } else if constexpr (std::is_same_v<T, CallStmt>) {
                    out_ << "(call-stmt ";
                    expr(*n.call);
                } else if constexpr (std::is_same_v<T, IfStmt>) {
                    out_ << "(if";
                    for (const auto& b : n.branches) {
                        out_ << ' ';
                        expr(*b.cond);
                        block(b.body);
                    }
                    if (n.otherwise) {
                        out_ << " else";
                        block(*n.otherwise);
                    }
                } else if constexpr (std::is_same_v<T, WhileStmt>) {
                    out_ << "(while ";
                    expr(*n.cond);
                    block(n.body);
                } else if constexpr (std::is_same_v<T, ForStmt>) {
                    out_ << "(for " << n.var << '@' << n.slot << ' ';
                    expr(*n.start);
                    out_ << ' ';
                    expr(*n.stop);
                    out_ << ' ';
                    if (n.step)
                        expr(*n.step);
                    else
                        out_ << '_';
                    block(n.body);
                } else if constexpr (std::is_same_v<T, DoStmt>) {
                    out_ << "(do";
                    block(n.body);
                } else if constexpr (std::is_same_v<T, ReturnStmt>) {
                    out_ << "(return ";
                    list(n.values);
                } else if constexpr (std::is_same_v<T, BreakStmt>) {
                    out_ << "(break";
                }
                out_ << ')';
            },
            s.node);
    }

    void expr(const Expr& e) {
        std::visit(
            [&](const auto& n) {
                using T = std::decay_t<decltype(n)>;
                if constexpr (std::is_same_v<T, NilLit>) {
                    out_ << "nil";
                } else if constexpr (std::is_same_v<T, BoolLit>) {
                    out_ << (n.value ? "true" : "false");
                } else if constexpr (std::is_same_v<T, NumberLit>) {
                    out_ << number_text(n.value);
                } else if constexpr (std::is_same_v<T, StringLit>) {
                    out_ << quote(n.value);
                } else if constexpr (std::is_same_v<T, VarExpr>) {
                    static constexpr const char* scope[] = {"local", "upval", "global"};
                    out_ << '(' << scope[static_cast<int>(n.ref.scope)] << ' ' << n.ref.name;
                    if (n.ref.scope != VarRef::Scope::Global)
                        out_ << '@' << n.ref.index;
                    out_ << ')';
                } else if constexpr (std::is_same_v<T, IndexExpr>) {
                    out_ << "(index ";
                    expr(*n.object);
                    out_ << ' ';
                    expr(*n.key);
                    out_ << ')';
                } else if constexpr (std::is_same_v<T, CallExpr>) {
                    out_ << "(call ";
                    expr(*n.callee);
                    out_ << ' ';
                    list(n.args);
                    out_ << ')';
                } else if constexpr (std::is_same_v<T, FunctionExpr>) {
                    proto(*n.proto);
                } else if constexpr (std::is_same_v<T, ParenExpr>) {
                    out_ << "(paren ";
                    expr(*n.inner);
                    out_ << ')';
                } else if constexpr (std::is_same_v<T, BinaryExpr>) {
                    out_ << '(' << op_text(n.op) << ' ';
                    expr(*n.lhs);
                    out_ << ' ';
                    expr(*n.rhs);
                    out_ << ')';
                } else if constexpr (std::is_same_v<T, UnaryExpr>) {
                    out_ << '(' << (n.op == UnOp::Neg ? "neg" : "not") << ' ';
                    expr(*n.operand);
                    out_ << ')';
                } else if constexpr (std::is_same_v<T, TableExpr>) {
                    out_ << "(table";
                    for (const auto& f : n.fields) {
                        static constexpr const char* kind[] = {"named", "keyed", "pos"};
                        out_ << " (" << kind[static_cast<int>(f.kind)] << ' ';
                        if (f.key) {
                            expr(*f.key);
                            out_ << ' ';
                        }
                        expr(*f.value);
                        out_ << ')';
                    }
                    out_ << ')';
                } else if constexpr (std::is_same_v<T, BindExpr>) {
                    out_ << "(bind @" << n.slot << ' ';
                    expr(*n.init);
                    out_ << ' ';
                    expr(*n.body);
                    out_ << ')';
                }
            },
            e.node);
    }

    std::ostringstream out_;
};

}  // namespace

std::string to_source(const Chunk& chunk) { return SourcePrinter().chunk(chunk); }

std::string dump(const Chunk& chunk) { return Dumper().chunk(chunk); }

}  // namespace bs
