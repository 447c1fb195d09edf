#include "bs/value.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>

#include "bs/error.hpp"

namespace bs {

namespace {
std::atomic<std::uint64_t> next_table_id{1};
}

std::string_view type_name(Value::Type type) {
    switch (type) {
    case Value::Type::Nil: return "nil";
    case Value::Type::Boolean: return "boolean";
    case Value::Type::Number: return "number";
    case Value::Type::Text: return "string";
    case Value::Type::Table: return "table";
    case Value::Type::Function: return "function";
    case Value::Type::HostClass: return "hostclass";
    case Value::Type::HostObject: return "hostref";
    case Value::Type::HostArray: return "hostref";
    }
    return "?";
}

std::string number_to_text(double n) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.14g", n);
    return buf;
}

FunctionRef make_native(std::string name, NativeFn fn) {
    auto f = std::make_shared<Function>();
    f->name = std::move(name);
    f->native = std::move(fn);
    return f;
}

Table::Table() : id_(next_table_id.fetch_add(1, std::memory_order_relaxed)) {}

TableRef make_table() { return std::make_shared<Table>(); }

size_t Table::KeyHash::operator()(const KeyView& k) const {
    if (k.is_number)
        return std::hash<double>{}(k.number) ^ 0x9e3779b97f4a7c15ULL;
    return std::hash<std::string_view>{}(k.text);
}

Table::KeyView Table::key_view(const Value& key) {
    if (const double* n = key.number_if()) {
        if (std::isnan(*n))
            throw Error(ErrorKind::RuntimeError, "table index is NaN");
        return {true, *n == 0.0 ? 0.0 : *n, {}};
    }
    if (const std::string* s = key.text_if())
        return {false, 0.0, *s};
    if (key.is_nil())
        throw Error(ErrorKind::KeyIsNil, "table index is nil");
    throw Error(ErrorKind::RuntimeError,
                "invalid table key type '" + std::string(type_name(key.type())) + "'");
}

const Value* Table::find(const Value& key) const {
    auto it = entries_.find(key_view(key));
    return it == entries_.end() ? nullptr : &it->second;
}

const Value* Table::find(std::string_view key) const {
    auto it = entries_.find(KeyView{false, 0.0, key});
    return it == entries_.end() ? nullptr : &it->second;
}

Value Table::raw_get(const Value& key) const {
    const Value* v = find(key);
    return v ? *v : Value();
}

void Table::raw_set(const Value& key, Value v) {
    KeyView kv = key_view(key);
    auto it = entries_.find(kv);
    if (v.is_nil()) {
        if (it != entries_.end())
            entries_.erase(it);
        return;
    }
    if (it != entries_.end()) {
        it->second = std::move(v);
        return;
    }
    entries_.emplace(Key{kv.is_number, kv.number, std::string(kv.text)}, std::move(v));
}

std::vector<Value> Table::keys() const {
    std::vector<Value> out;
    out.reserve(entries_.size());
    for (const auto& [k, v] : entries_) {
        if (k.is_number)
            out.emplace_back(k.number);
        else
            out.emplace_back(k.text);
    }
    return out;
}

}  // namespace bs
