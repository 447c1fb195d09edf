#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <variant>
#include <vector>

namespace bs {

struct HostObject;
struct HostArray;
class HostRuntime;

using HostObjectRef = std::shared_ptr<HostObject>;
using HostArrayRef = std::shared_ptr<HostArray>;

// Host-side static type vocabulary.
struct TypeTag {
    enum class Kind { Boolean, Integer, Float, Text, Class, Interface, Array, Void };

    Kind kind = Kind::Void;
    std::string name;                      // Class / Interface
    std::shared_ptr<const TypeTag> element;  // Array

    static TypeTag boolean() { return {Kind::Boolean, {}, nullptr}; }
    static TypeTag integer() { return {Kind::Integer, {}, nullptr}; }
    static TypeTag floating() { return {Kind::Float, {}, nullptr}; }
    static TypeTag text() { return {Kind::Text, {}, nullptr}; }
    static TypeTag void_() { return {Kind::Void, {}, nullptr}; }
    // A class or interface name; the registry settles which at freeze time.
    static TypeTag object(std::string name) { return {Kind::Class, std::move(name), nullptr}; }
    static TypeTag interface(std::string name) {
        return {Kind::Interface, std::move(name), nullptr};
    }
    static TypeTag array(TypeTag element) {
        return {Kind::Array, {}, std::make_shared<const TypeTag>(std::move(element))};
    }

    // "boolean", "int", "float", "text", "void", "T[]", or a class name.
    static TypeTag parse(std::string_view spelling);
    std::string to_string() const;

    bool is_reference() const {
        return kind == Kind::Class || kind == Kind::Interface || kind == Kind::Array;
    }

    friend bool operator==(const TypeTag& a, const TypeTag& b);
};

// null references and void results are both monostate.
using HostValue =
    std::variant<std::monostate, bool, std::int64_t, double, std::string, HostObjectRef, HostArrayRef>;

// Native method/constructor body. `self` is null for static methods.
using MethodBody =
    std::function<HostValue(HostRuntime&, const HostObjectRef& self, std::span<const HostValue>)>;

struct MethodDescriptor {
    std::string name;
    std::vector<TypeTag> params;
    TypeTag returns = TypeTag::void_();
    bool is_static = false;
    MethodBody body;  // empty for interface methods
    std::string declaring_class;  // filled in by register_class

    std::string signature() const;
};

struct FieldSpec {
    TypeTag type;
    bool is_static = false;
    std::optional<HostValue> initial;  // zero value of `type` when absent
    std::string declaring_class;
};

struct HostClassDescriptor {
    enum class Kind { Class, Interface };

    std::string name;
    Kind kind = Kind::Class;
    std::optional<std::string> base;
    std::map<std::string, FieldSpec> fields;
    std::map<std::string, std::vector<MethodDescriptor>> methods;
    std::vector<MethodDescriptor> constructors;

    bool is_interface() const { return kind == Kind::Interface; }
    const FieldSpec* find_field(std::string_view field) const;
    const std::vector<MethodDescriptor>* find_methods(std::string_view method) const;
};

// Merges `derived` over an already flattened `base`: fields by name, methods
// by signature, derived entries winning. Constructors are not inherited.
HostClassDescriptor overlay(const HostClassDescriptor& derived, const HostClassDescriptor& base);

// Canonical text of a descriptor's members, for comparing flattenings.
std::string describe_members(const HostClassDescriptor& d);

HostValue zero_value(const TypeTag& tag);

// Implemented by the inbound bridge. A wrapper object carries one of these;
// invoke() routes every call on the wrapper through dispatch().
class ScriptBinding {
public:
    virtual ~ScriptBinding() = default;
    // Returns the result, or nullopt to fall through to the base implementation.
    virtual std::optional<HostValue> dispatch(HostRuntime& rt, HostObject& wrapper,
                                              const MethodDescriptor& m,
                                              std::span<const HostValue> args) = 0;
};

struct HostObject {
    std::string class_name;
    std::unordered_map<std::string, HostValue> fields;
    std::uint64_t id = 0;
    // Set on wrappers only.
    std::shared_ptr<ScriptBinding> binding;
    // Class wrappers: the plain instance that owns the fields and base methods.
    HostObjectRef backing;

    bool is_wrapper() const { return static_cast<bool>(binding); }
};

struct HostArray {
    TypeTag element;
    std::vector<HostValue> elements;
    std::uint64_t id = 0;
};

// Catalog of class descriptors; mutable until freeze(), read-only afterwards.
class Registry {
public:
    void register_class(HostClassDescriptor d);
    // Validates type references, settles Class/Interface tags and flattens
    // every class over its base chain. Idempotent.
    void freeze();
    bool frozen() const { return frozen_; }

    // The flattened descriptor. Throws NotFrozen / ClassNotFound.
    const HostClassDescriptor& lookup_class(std::string_view name) const;
    bool has_class(std::string_view name) const;
    std::vector<std::string> class_names() const;

    // Reflexive: a class is a subclass of itself.
    bool is_subclass_of(std::string_view derived, std::string_view base) const;
    bool conforms(const HostValue& v, const TypeTag& tag) const;

private:
    void normalize(TypeTag& tag) const;
    void check_type(const TypeTag& tag, const std::string& owner) const;

    std::map<std::string, HostClassDescriptor, std::less<>> declared_;
    std::map<std::string, HostClassDescriptor, std::less<>> flattened_;
    bool frozen_ = false;
};

std::string host_value_to_string(const HostValue& v);

}  // namespace bs
