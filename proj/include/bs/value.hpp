#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <variant>
#include <vector>

#include "bs/ast.hpp"

namespace bs {

class Interpreter;
class Table;
struct Function;
struct HostObject;
struct HostArray;

using TableRef = std::shared_ptr<Table>;
using FunctionRef = std::shared_ptr<Function>;
using HostObjectRef = std::shared_ptr<HostObject>;
using HostArrayRef = std::shared_ptr<HostArray>;

// Names a host class, as stored in a class proxy's reserved field.
struct HostClassRef {
    std::string name;
    friend bool operator==(const HostClassRef&, const HostClassRef&) = default;
};

class Value {
public:
    enum class Type { Nil, Boolean, Number, Text, Table, Function, HostClass, HostObject, HostArray };

    Value() = default;
    Value(std::nullptr_t) {}
    Value(bool b) : v_(b) {}
    Value(double n) : v_(n) {}
    Value(int n) : v_(static_cast<double>(n)) {}
    Value(std::string s) : v_(std::move(s)) {}
    Value(std::string_view s) : v_(std::string(s)) {}
    Value(const char* s) : v_(std::string(s)) {}
    Value(TableRef t) : v_(std::move(t)) {}
    Value(FunctionRef f) : v_(std::move(f)) {}
    Value(HostClassRef c) : v_(std::move(c)) {}
    Value(HostObjectRef o) : v_(std::move(o)) {}
    Value(HostArrayRef a) : v_(std::move(a)) {}

    Type type() const { return static_cast<Type>(v_.index()); }
    bool is_nil() const { return v_.index() == 0; }
    bool is_bool() const { return type() == Type::Boolean; }
    bool is_number() const { return type() == Type::Number; }
    bool is_text() const { return type() == Type::Text; }
    bool is_table() const { return type() == Type::Table; }
    bool is_function() const { return type() == Type::Function; }

    bool truthy() const {
        if (is_nil())
            return false;
        if (const bool* b = std::get_if<bool>(&v_))
            return *b;
        return true;
    }

    bool as_bool() const { return std::get<bool>(v_); }
    double as_number() const { return std::get<double>(v_); }
    const std::string& as_text() const { return std::get<std::string>(v_); }
    const TableRef& as_table() const { return std::get<TableRef>(v_); }
    const FunctionRef& as_function() const { return std::get<FunctionRef>(v_); }
    const HostClassRef& as_host_class() const { return std::get<HostClassRef>(v_); }
    const HostObjectRef& as_host_object() const { return std::get<HostObjectRef>(v_); }
    const HostArrayRef& as_host_array() const { return std::get<HostArrayRef>(v_); }

    const double* number_if() const { return std::get_if<double>(&v_); }
    const std::string* text_if() const { return std::get_if<std::string>(&v_); }
    const TableRef* table_if() const { return std::get_if<TableRef>(&v_); }

    // Raw equality: reference types compare by identity.
    friend bool operator==(const Value& a, const Value& b) { return a.v_ == b.v_; }

private:
    std::variant<std::monostate, bool, double, std::string, TableRef, FunctionRef, HostClassRef,
                 HostObjectRef, HostArrayRef>
        v_;
};

std::string_view type_name(Value::Type type);

// Renders a number the way print/tostring/.. do ("%.14g").
std::string number_to_text(double n);

struct Cell {
    Value value;
};
using CellRef = std::shared_ptr<Cell>;

using NativeFn = std::function<std::vector<Value>(Interpreter&, std::span<const Value>)>;

// Either a script closure (proto + captured cells) or a native callable.
struct Function {
    std::string name;
    std::shared_ptr<const FunctionProto> proto;
    std::vector<CellRef> upvalues;
    NativeFn native;

    bool is_native() const { return static_cast<bool>(native); }
};

FunctionRef make_native(std::string name, NativeFn fn);

// Identity-bearing associative object. Keys are Text or Number.
class Table {
public:
    Table();

    std::uint64_t id() const { return id_; }

    const Value* find(const Value& key) const;
    const Value* find(std::string_view key) const;
    Value raw_get(const Value& key) const;
    // Stores v under key; storing nil removes the entry. Throws KeyIsNil.
    void raw_set(const Value& key, Value v);
    size_t size() const { return entries_.size(); }

    // Keys in unspecified order.
    std::vector<Value> keys() const;

    const FunctionRef& index_handler() const { return index_handler_; }
    const FunctionRef& newindex_handler() const { return newindex_handler_; }
    void set_index_handler(FunctionRef f) { index_handler_ = std::move(f); }
    void set_newindex_handler(FunctionRef f) { newindex_handler_ = std::move(f); }

    bool is_host_proxy() const { return !proxy_label_.empty(); }
    const std::string& proxy_label() const { return proxy_label_; }
    void mark_host_proxy(std::string label) { proxy_label_ = std::move(label); }

private:
    struct Key {
        bool is_number;
        double number;
        std::string text;
    };
    struct KeyView {
        bool is_number;
        double number;
        std::string_view text;
    };
    struct KeyHash {
        using is_transparent = void;
        size_t operator()(const KeyView& k) const;
        size_t operator()(const Key& k) const { return (*this)(view(k)); }
    };
    struct KeyEq {
        using is_transparent = void;
        bool operator()(const KeyView& a, const KeyView& b) const {
            return a.is_number == b.is_number &&
                   (a.is_number ? a.number == b.number : a.text == b.text);
        }
        bool operator()(const Key& a, const KeyView& b) const { return (*this)(view(a), b); }
        bool operator()(const KeyView& a, const Key& b) const { return (*this)(a, view(b)); }
        bool operator()(const Key& a, const Key& b) const { return (*this)(view(a), view(b)); }
    };
    static KeyView view(const Key& k) { return {k.is_number, k.number, k.text}; }
    static KeyView key_view(const Value& key);

    std::unordered_map<Key, Value, KeyHash, KeyEq> entries_;
    FunctionRef index_handler_;
    FunctionRef newindex_handler_;
    std::string proxy_label_;
    std::uint64_t id_;
};

TableRef make_table();

}  // namespace bs
