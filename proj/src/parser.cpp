#include "bs/parser.hpp"

#include <cstdlib>
#include <utility>

#include "bs/error.hpp"

namespace bs {

namespace {

ExprPtr make_expr(int line, auto node) {
    auto e = std::make_unique<Expr>();
    e->line = line;
    e->node = std::move(node);
    return e;
}

StmtPtr make_stmt(int line, auto node) {
    auto s = std::make_unique<Stmt>();
    s->line = line;
    s->node = std::move(node);
    return s;
}

struct Scope {
    std::vector<std::pair<std::string, int>> locals;
};

struct FuncState {
    FuncState* parent = nullptr;
    std::shared_ptr<FunctionProto> proto;
    std::vector<Scope> scopes;
};

class Parser {
public:
    Parser(std::span<const Token> tokens, std::string name) : tokens_(tokens) {
        root_.proto = std::make_shared<FunctionProto>();
        root_.proto->name = std::move(name);
        root_.proto->line = tokens.empty() ? 0 : tokens.front().line;
        fs_ = &root_;
    }

    Chunk run() {
        open_scope();
        fs_->proto->body = block();
        close_scope();
        if (!at_end())
            fail("<eof>");
        return Chunk{root_.proto};
    }

private:
    // ---- token helpers ----------------------------------------------------

    bool at_end() const { return pos_ >= tokens_.size(); }

    const Token* peek(size_t ahead = 0) const {
        return pos_ + ahead < tokens_.size() ? &tokens_[pos_ + ahead] : nullptr;
    }

    int line() const {
        if (const Token* t = peek())
            return t->line;
        return tokens_.empty() ? 1 : tokens_.back().line;
    }

    bool check(TokenKind kind, std::string_view text) const {
        const Token* t = peek();
        return t && t->is(kind, text);
    }
    bool check_kw(std::string_view kw) const { return check(TokenKind::Keyword, kw); }
    bool check_op(std::string_view op) const { return check(TokenKind::Operator, op); }
    bool check_punct(std::string_view p) const { return check(TokenKind::Punctuation, p); }

    bool accept(TokenKind kind, std::string_view text) {
        if (!check(kind, text))
            return false;
        ++pos_;
        return true;
    }

    [[noreturn]] void fail(std::string_view expected) const {
        const Token* t = peek();
        std::string found = t ? t->lexeme : "<eof>";
        throw Error(ErrorKind::ParseError,
                    "expected " + std::string(expected) + " near '" + found + "'", line());
    }

    void expect(TokenKind kind, std::string_view text) {
        if (!accept(kind, text))
            fail("'" + std::string(text) + "'");
    }

    std::string expect_name() {
        const Token* t = peek();
        if (!t || t->kind != TokenKind::Identifier)
            fail("<name>");
        ++pos_;
        return t->lexeme;
    }

    // ---- scopes -----------------------------------------------------------

    void open_scope() { fs_->scopes.emplace_back(); }
    void close_scope() { fs_->scopes.pop_back(); }

    int new_slot() { return fs_->proto->slot_count++; }

    int declare_local(const std::string& name) {
        int slot = new_slot();
        fs_->scopes.back().locals.emplace_back(name, slot);
        return slot;
    }

    static VarRef resolve_in(FuncState* fs, const std::string& name) {
        for (auto s = fs->scopes.rbegin(); s != fs->scopes.rend(); ++s) {
            for (auto l = s->locals.rbegin(); l != s->locals.rend(); ++l) {
                if (l->first == name)
                    return VarRef{VarRef::Scope::Local, l->second, name};
            }
        }
        if (!fs->parent)
            return VarRef{VarRef::Scope::Global, -1, name};
        auto& ups = fs->proto->upvalues;
        for (size_t i = 0; i < ups.size(); ++i) {
            if (ups[i].name == name)
                return VarRef{VarRef::Scope::Upvalue, static_cast<int>(i), name};
        }
        VarRef outer = resolve_in(fs->parent, name);
        if (outer.scope == VarRef::Scope::Global)
            return outer;
        ups.push_back(UpvalueDesc{name, outer.scope == VarRef::Scope::Local, outer.index});
        return VarRef{VarRef::Scope::Upvalue, static_cast<int>(ups.size() - 1), name};
    }

    // ---- statements -------------------------------------------------------

    bool block_follows() const {
        return at_end() || check_kw("end") || check_kw("else") || check_kw("elseif");
    }

    Block block() {
        Block out;
        while (!block_follows()) {
            if (accept(TokenKind::Punctuation, ";"))
                continue;
            bool last = check_kw("return") || check_kw("break");
            out.push_back(statement());
            if (last) {
                accept(TokenKind::Punctuation, ";");
                if (!block_follows())
                    fail("'end'");
                break;
            }
        }
        return out;
    }

    Block scoped_block() {
        open_scope();
        Block b = block();
        close_scope();
        return b;
    }

    StmtPtr statement() {
        int ln = line();
        if (accept(TokenKind::Keyword, "if"))
            return if_stmt(ln);
        if (accept(TokenKind::Keyword, "while")) {
            ExprPtr cond = expression();
            expect(TokenKind::Keyword, "do");
            Block body = scoped_block();
            expect(TokenKind::Keyword, "end");
            return make_stmt(ln, WhileStmt{std::move(cond), std::move(body)});
        }
        if (accept(TokenKind::Keyword, "do")) {
            Block body = scoped_block();
            expect(TokenKind::Keyword, "end");
            return make_stmt(ln, DoStmt{std::move(body)});
        }
        if (accept(TokenKind::Keyword, "for"))
            return for_stmt(ln);
        if (accept(TokenKind::Keyword, "function"))
            return function_stmt(ln);
        if (accept(TokenKind::Keyword, "local")) {
            if (accept(TokenKind::Keyword, "function"))
                return local_function(ln);
            return local_stmt(ln);
        }
        if (accept(TokenKind::Keyword, "return")) {
            ReturnStmt r;
            if (!block_follows() && !check_punct(";"))
                r.values = expr_list();
            return make_stmt(ln, std::move(r));
        }
        if (accept(TokenKind::Keyword, "break"))
            return make_stmt(ln, BreakStmt{});
        return expr_stmt(ln);
    }

    StmtPtr if_stmt(int ln) {
        IfStmt s;
        do {
            ExprPtr cond = expression();
            expect(TokenKind::Keyword, "then");
            s.branches.push_back(IfBranch{std::move(cond), scoped_block()});
        } while (accept(TokenKind::Keyword, "elseif"));
        if (accept(TokenKind::Keyword, "else"))
            s.otherwise = scoped_block();
        expect(TokenKind::Keyword, "end");
        return make_stmt(ln, std::move(s));
    }

    StmtPtr for_stmt(int ln) {
        std::string var = expect_name();
        expect(TokenKind::Operator, "=");
        ExprPtr start = expression();
        expect(TokenKind::Punctuation, ",");
        ExprPtr stop = expression();
        ExprPtr step;
        if (accept(TokenKind::Punctuation, ","))
            step = expression();
        expect(TokenKind::Keyword, "do");
        open_scope();
        int slot = declare_local(var);
        Block body = block();
        close_scope();
        expect(TokenKind::Keyword, "end");
        return make_stmt(ln, ForStmt{std::move(var), slot, std::move(start), std::move(stop),
                                     std::move(step), std::move(body)});
    }

    // function a.b.c(...) / function a.b:m(...)
    StmtPtr function_stmt(int ln) {
        std::string first = expect_name();
        std::string full = first;
        ExprPtr target = make_expr(ln, VarExpr{resolve_in(fs_, first)});
        bool method = false;
        while (check_punct(".") || check_punct(":")) {
            method = check_punct(":");
            ++pos_;
            std::string field = expect_name();
            full += (method ? ":" : ".") + field;
            target = make_expr(ln, IndexExpr{std::move(target), make_expr(ln, StringLit{field})});
            if (method)
                break;
        }
        ExprPtr fn = function_body(ln, full, method);
        std::vector<ExprPtr> targets, values;
        targets.push_back(std::move(target));
        values.push_back(std::move(fn));
        return make_stmt(ln, AssignStmt{std::move(targets), std::move(values)});
    }

    StmtPtr local_function(int ln) {
        std::string name = expect_name();
        LocalStmt s;
        s.is_function = true;
        s.slots.push_back(declare_local(name));
        s.names.push_back(name);
        s.values.push_back(function_body(ln, name, false));
        return make_stmt(ln, std::move(s));
    }

    StmtPtr local_stmt(int ln) {
        LocalStmt s;
        do {
            s.names.push_back(expect_name());
        } while (accept(TokenKind::Punctuation, ","));
        if (accept(TokenKind::Operator, "="))
            s.values = expr_list();
        // declared after the initializers so `local x = x` reads the outer x
        for (const auto& n : s.names)
            s.slots.push_back(declare_local(n));
        return make_stmt(ln, std::move(s));
    }

    StmtPtr expr_stmt(int ln) {
        ExprPtr first = suffixed_expr();
        if (check_op("=") || check_punct(",")) {
            AssignStmt a;
            a.targets.push_back(std::move(first));
            while (accept(TokenKind::Punctuation, ","))
                a.targets.push_back(suffixed_expr());
            expect(TokenKind::Operator, "=");
            a.values = expr_list();
            for (const auto& t : a.targets) {
                if (!std::holds_alternative<VarExpr>(t->node) &&
                    !std::holds_alternative<IndexExpr>(t->node))
                    throw Error(ErrorKind::ParseError, "cannot assign to this expression", t->line);
            }
            return make_stmt(ln, std::move(a));
        }
        if (!std::holds_alternative<CallExpr>(first->node) &&
            !std::holds_alternative<BindExpr>(first->node))
            fail("'='");
        return make_stmt(ln, CallStmt{std::move(first)});
    }

    // ---- functions --------------------------------------------------------

    ExprPtr function_body(int ln, std::string name, bool method) {
        FuncState child;
        child.parent = fs_;
        child.proto = std::make_shared<FunctionProto>();
        child.proto->name = std::move(name);
        child.proto->line = ln;
        fs_ = &child;
        open_scope();
        if (method) {
            child.proto->params.push_back("self");
            declare_local("self");
        }
        expect(TokenKind::Punctuation, "(");
        if (!check_punct(")")) {
            do {
                std::string p = expect_name();
                child.proto->params.push_back(p);
                declare_local(p);
            } while (accept(TokenKind::Punctuation, ","));
        }
        expect(TokenKind::Punctuation, ")");
        child.proto->body = block();
        expect(TokenKind::Keyword, "end");
        close_scope();
        fs_ = child.parent;
        return make_expr(ln, FunctionExpr{std::move(child.proto)});
    }

    // ---- expressions ------------------------------------------------------

    std::vector<ExprPtr> expr_list() {
        std::vector<ExprPtr> out;
        out.push_back(expression());
        while (accept(TokenKind::Punctuation, ","))
            out.push_back(expression());
        return out;
    }

    ExprPtr expression() { return or_expr(); }

    ExprPtr binary(int ln, BinOp op, ExprPtr l, ExprPtr r) {
        return make_expr(ln, BinaryExpr{op, std::move(l), std::move(r)});
    }

    ExprPtr or_expr() {
        ExprPtr l = and_expr();
        while (check_kw("or")) {
            int ln = line();
            ++pos_;
            l = binary(ln, BinOp::Or, std::move(l), and_expr());
        }
        return l;
    }

    ExprPtr and_expr() {
        ExprPtr l = comparison();
        while (check_kw("and")) {
            int ln = line();
            ++pos_;
            l = binary(ln, BinOp::And, std::move(l), comparison());
        }
        return l;
    }

    ExprPtr comparison() {
        ExprPtr l = concat();
        while (true) {
            static constexpr std::pair<std::string_view, BinOp> ops[] = {
                {"==", BinOp::Eq}, {"~=", BinOp::Ne}, {"<", BinOp::Lt},
                {"<=", BinOp::Le}, {">", BinOp::Gt},  {">=", BinOp::Ge},
            };
            const BinOp* found = nullptr;
            for (const auto& [text, op] : ops) {
                if (check_op(text))
                    found = &op;
            }
            if (!found)
                return l;
            int ln = line();
            ++pos_;
            l = binary(ln, *found, std::move(l), concat());
        }
    }

    // right associative
    ExprPtr concat() {
        ExprPtr l = additive();
        if (check_op("..")) {
            int ln = line();
            ++pos_;
            return binary(ln, BinOp::Concat, std::move(l), concat());
        }
        return l;
    }

    ExprPtr additive() {
        ExprPtr l = multiplicative();
        while (check_op("+") || check_op("-")) {
            BinOp op = check_op("+") ? BinOp::Add : BinOp::Sub;
            int ln = line();
            ++pos_;
            l = binary(ln, op, std::move(l), multiplicative());
        }
        return l;
    }

    ExprPtr multiplicative() {
        ExprPtr l = unary();
        while (check_op("*") || check_op("/") || check_op("%")) {
            BinOp op = check_op("*") ? BinOp::Mul : check_op("/") ? BinOp::Div : BinOp::Mod;
            int ln = line();
            ++pos_;
            l = binary(ln, op, std::move(l), unary());
        }
        return l;
    }

    ExprPtr unary() {
        int ln = line();
        if (accept(TokenKind::Keyword, "not"))
            return make_expr(ln, UnaryExpr{UnOp::Not, unary()});
        if (accept(TokenKind::Operator, "-"))
            return make_expr(ln, UnaryExpr{UnOp::Neg, unary()});
        return simple();
    }

    ExprPtr simple() {
        int ln = line();
        const Token* t = peek();
        if (!t)
            fail("<expression>");
        switch (t->kind) {
        case TokenKind::Number:
            ++pos_;
            return make_expr(ln, NumberLit{number_value(t->lexeme)});
        case TokenKind::String:
            ++pos_;
            return make_expr(ln, StringLit{unquote(t->lexeme)});
        case TokenKind::Keyword:
            if (accept(TokenKind::Keyword, "nil"))
                return make_expr(ln, NilLit{});
            if (accept(TokenKind::Keyword, "true"))
                return make_expr(ln, BoolLit{true});
            if (accept(TokenKind::Keyword, "false"))
                return make_expr(ln, BoolLit{false});
            if (accept(TokenKind::Keyword, "function"))
                return function_body(ln, "anonymous", false);
            break;
        case TokenKind::Punctuation:
            if (check_punct("{"))
                return table();
            break;
        default:
            break;
        }
        return suffixed_expr();
    }

    static double number_value(const std::string& lexeme) {
        if (lexeme.size() > 2 && lexeme[0] == '0' && (lexeme[1] == 'x' || lexeme[1] == 'X'))
            return static_cast<double>(std::strtoull(lexeme.c_str() + 2, nullptr, 16));
        return std::strtod(lexeme.c_str(), nullptr);
    }

    ExprPtr primary() {
        int ln = line();
        const Token* t = peek();
        if (t && t->kind == TokenKind::Identifier) {
            ++pos_;
            return make_expr(ln, VarExpr{resolve_in(fs_, t->lexeme)});
        }
        if (accept(TokenKind::Punctuation, "(")) {
            ExprPtr inner = expression();
            expect(TokenKind::Punctuation, ")");
            return make_expr(ln, ParenExpr{std::move(inner)});
        }
        fail("<expression>");
    }

    ExprPtr suffixed_expr() {
        ExprPtr e = primary();
        while (true) {
            int ln = line();
            if (accept(TokenKind::Punctuation, ".")) {
                std::string name = expect_name();
                e = make_expr(ln, IndexExpr{std::move(e), make_expr(ln, StringLit{name})});
            } else if (accept(TokenKind::Punctuation, "[")) {
                ExprPtr key = expression();
                expect(TokenKind::Punctuation, "]");
                e = make_expr(ln, IndexExpr{std::move(e), std::move(key)});
            } else if (accept(TokenKind::Punctuation, ":")) {
                std::string name = expect_name();
                std::vector<ExprPtr> args = call_args();
                bool trivial = std::holds_alternative<VarExpr>(e->node);
                int slot = trivial ? -1 : new_slot();
                e = desugar_colon_call(std::move(e), std::move(name), std::move(args), ln, slot);
            } else if (check_punct("(") || check_punct("{") ||
                       (peek() && peek()->kind == TokenKind::String)) {
                std::vector<ExprPtr> args = call_args();
                e = make_expr(ln, CallExpr{std::move(e), std::move(args)});
            } else {
                return e;
            }
        }
    }

    std::vector<ExprPtr> call_args() {
        std::vector<ExprPtr> args;
        int ln = line();
        if (const Token* t = peek(); t && t->kind == TokenKind::String) {
            ++pos_;
            args.push_back(make_expr(ln, StringLit{unquote(t->lexeme)}));
            return args;
        }
        if (check_punct("{")) {
            args.push_back(table());
            return args;
        }
        expect(TokenKind::Punctuation, "(");
        if (!check_punct(")"))
            args = expr_list();
        expect(TokenKind::Punctuation, ")");
        return args;
    }

    ExprPtr table() {
        int ln = line();
        expect(TokenKind::Punctuation, "{");
        TableExpr t;
        while (!check_punct("}")) {
            int fl = line();
            if (accept(TokenKind::Punctuation, "[")) {
                ExprPtr key = expression();
                expect(TokenKind::Punctuation, "]");
                expect(TokenKind::Operator, "=");
                t.fields.push_back({TableField::Kind::Keyed, std::move(key), expression()});
            } else if (peek() && peek()->kind == TokenKind::Identifier && peek(1) &&
                       peek(1)->is(TokenKind::Operator, "=")) {
                std::string name = expect_name();
                ++pos_;
                t.fields.push_back({TableField::Kind::Named, make_expr(fl, StringLit{name}),
                                    expression()});
            } else {
                t.fields.push_back({TableField::Kind::Positional, nullptr, expression()});
            }
            if (!accept(TokenKind::Punctuation, ",") && !accept(TokenKind::Punctuation, ";"))
                break;
        }
        expect(TokenKind::Punctuation, "}");
        return make_expr(ln, std::move(t));
    }

    std::span<const Token> tokens_;
    size_t pos_ = 0;
    FuncState root_;
    FuncState* fs_ = nullptr;
};

}  // namespace

ExprPtr desugar_colon_call(ExprPtr receiver, std::string method, std::vector<ExprPtr> args,
                           int line, int temp_slot) {
    auto key = make_expr(line, StringLit{std::move(method)});
    if (auto* var = std::get_if<VarExpr>(&receiver->node); var && temp_slot < 0) {
        auto self_arg = make_expr(line, VarExpr{var->ref});
        auto callee = make_expr(line, IndexExpr{std::move(receiver), std::move(key)});
        args.insert(args.begin(), std::move(self_arg));
        return make_expr(line, CallExpr{std::move(callee), std::move(args)});
    }
    VarRef temp{VarRef::Scope::Local, temp_slot, "(receiver)"};
    auto callee = make_expr(line, IndexExpr{make_expr(line, VarExpr{temp}), std::move(key)});
    args.insert(args.begin(), make_expr(line, VarExpr{temp}));
    auto call = make_expr(line, CallExpr{std::move(callee), std::move(args)});
    return make_expr(line, BindExpr{temp_slot, std::move(receiver), std::move(call)});
}

Chunk parse(std::span<const Token> tokens, std::string chunk_name) {
    return Parser(tokens, std::move(chunk_name)).run();
}

Chunk parse_source(std::string_view source, std::string chunk_name) {
    std::vector<Token> tokens = tokenize(source);
    return parse(tokens, std::move(chunk_name));
}

}  // namespace bs
