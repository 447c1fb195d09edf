#include "bs/host/runtime.hpp"

#include <atomic>
#include <cassert>
#include <exception>
#include <iostream>

#include "bs/error.hpp"

namespace bs {

namespace {

std::string arg_types(std::span<const HostValue> args) {
    static const char* names[] = {"null", "boolean", "int", "float", "text", "object", "array"};
    std::string s = "(";
    for (size_t i = 0; i < args.size(); ++i) {
        if (i)
            s += ",";
        s += names[args[i].index()];
    }
    return s + ")";
}

}  // namespace

HostRuntime::HostRuntime(std::shared_ptr<const Registry> registry)
    : HostRuntime(std::move(registry), std::cout) {}

HostRuntime::HostRuntime(std::shared_ptr<const Registry> registry, std::ostream& out)
    : registry_(std::move(registry)), out_(&out) {
    if (!registry_ || !registry_->frozen())
        throw Error(ErrorKind::NotFrozen, "host runtime needs a frozen registry");
}

std::uint64_t HostRuntime::next_id() {
    static std::atomic<std::uint64_t> counter{0};
    return ++counter;
}

const MethodDescriptor* HostRuntime::pick(const std::vector<MethodDescriptor>& cands,
                                          std::span<const HostValue> args,
                                          const std::string& what) const {
    const MethodDescriptor* found = nullptr;
    int matches = 0;
    for (const auto& m : cands) {
        if (m.params.size() != args.size())
            continue;
        bool ok = true;
        for (size_t i = 0; i < args.size() && ok; ++i)
            ok = registry_->conforms(args[i], m.params[i]);
        if (ok) {
            found = &m;
            ++matches;
        }
    }
    if (matches == 0)
        throw Error(ErrorKind::NoMatch, "no overload of " + what + " accepts " + arg_types(args));
    if (matches > 1)
        throw Error(ErrorKind::Ambiguous, "call to " + what + arg_types(args) + " is ambiguous");
    return found;
}

HostObjectRef HostRuntime::new_object(const HostClassDescriptor& cls) {
    auto obj = std::make_shared<HostObject>();
    obj->class_name = cls.name;
    obj->id = next_id();
    for (const auto& [name, f] : cls.fields) {
        if (!f.is_static)
            obj->fields.emplace(name, f.initial ? *f.initial : zero_value(f.type));
    }
    return obj;
}

HostObjectRef HostRuntime::construct(const HostClassDescriptor& cls, const MethodDescriptor* ctor,
                                     std::span<const HostValue> args) {
    if (cls.is_interface())
        throw Error(ErrorKind::InterfaceNotInstantiable,
                    "cannot instantiate interface '" + cls.name + "'");
    HostObjectRef obj = new_object(cls);
    if (ctor && ctor->body) {
        try {
            ctor->body(*this, obj, args);
        } catch (const Error&) {
            throw;
        } catch (const std::exception& e) {
            throw Error(ErrorKind::HostException, cls.name + " constructor: " + e.what());
        }
    }
    assert(fields_conform(*obj));
    return obj;
}

HostObjectRef HostRuntime::instantiate(std::string_view class_name,
                                       std::span<const HostValue> args) {
    const HostClassDescriptor& cls = registry_->lookup_class(class_name);
    if (cls.is_interface())
        throw Error(ErrorKind::InterfaceNotInstantiable,
                    "cannot instantiate interface '" + cls.name + "'");
    if (cls.constructors.empty()) {
        if (!args.empty())
            throw Error(ErrorKind::NoMatch,
                        "no constructor of " + cls.name + " accepts " + arg_types(args));
        return construct(cls, nullptr, args);
    }
    return construct(cls, pick(cls.constructors, args, cls.name + " constructor"), args);
}

HostValue HostRuntime::invoke(const MethodDescriptor& m, const HostObjectRef& receiver,
                              std::span<const HostValue> args) {
    if (receiver && receiver->binding) {
        if (auto r = receiver->binding->dispatch(*this, *receiver, m, args)) {
            if (!registry_->conforms(*r, m.returns))
                throw Error(ErrorKind::ReturnTypeMismatch,
                            m.declaring_class + "." + m.signature() + " must return " +
                                m.returns.to_string());
            return std::move(*r);
        }
        if (!receiver->backing)
            throw Error(ErrorKind::UnimplementedMethod,
                        m.declaring_class + "." + m.signature() + " is not implemented");
        return invoke_direct(m, receiver->backing, args);
    }
    return invoke_direct(m, receiver, args);
}

HostValue HostRuntime::invoke_direct(const MethodDescriptor& m, const HostObjectRef& receiver,
                                     std::span<const HostValue> args) {
    if (!m.body)
        throw Error(ErrorKind::UnimplementedMethod,
                    m.declaring_class + "." + m.signature() + " has no implementation");
    if (!m.is_static && !receiver)
        throw Error(ErrorKind::ReceiverMismatch, m.signature() + " needs a receiver");
    if (args.size() != m.params.size())
        throw Error(ErrorKind::NoMatch, m.declaring_class + "." + m.signature() + " called with " +
                                            std::to_string(args.size()) + " arguments");
    HostValue result;
    try {
        result = m.body(*this, m.is_static ? nullptr : receiver, args);
    } catch (const Error&) {
        throw;
    } catch (const std::exception& e) {
        throw Error(ErrorKind::HostException, m.declaring_class + "." + m.name + ": " + e.what());
    }
    if (!registry_->conforms(result, m.returns))
        throw Error(ErrorKind::HostException, m.declaring_class + "." + m.signature() +
                                                  " returned a value that is not " +
                                                  m.returns.to_string());
    assert(!receiver || fields_conform(*receiver));
    return result;
}

HostValue HostRuntime::call_method(const HostObjectRef& receiver, std::string_view name,
                                   std::span<const HostValue> args) {
    if (!receiver)
        throw Error(ErrorKind::ReceiverMismatch, "method '" + std::string(name) + "' called on null");
    const HostClassDescriptor& cls = registry_->lookup_class(receiver->class_name);
    const auto* cands = cls.find_methods(name);
    if (!cands || cands->front().is_static)
        throw Error(ErrorKind::NoSuchMember,
                    cls.name + " has no instance method '" + std::string(name) + "'");
    return invoke(*pick(*cands, args, cls.name + "." + std::string(name)), receiver, args);
}

HostValue HostRuntime::call_static(std::string_view class_name, std::string_view name,
                                   std::span<const HostValue> args) {
    const HostClassDescriptor& cls = registry_->lookup_class(class_name);
    const auto* cands = cls.find_methods(name);
    if (!cands || !cands->front().is_static)
        throw Error(ErrorKind::NoSuchMember,
                    cls.name + " has no static method '" + std::string(name) + "'");
    return invoke_direct(*pick(*cands, args, cls.name + "." + std::string(name)), nullptr, args);
}

// ---------------------------------------------------------------------------
// Fields

HostValue HostRuntime::get_field(const HostObjectRef& owner, std::string_view field) {
    const HostObject& target = owner->backing ? *owner->backing : *owner;
    auto it = target.fields.find(std::string(field));
    if (it == target.fields.end())
        throw Error(ErrorKind::NoSuchField,
                    owner->class_name + " has no field '" + std::string(field) + "'");
    return it->second;
}

void HostRuntime::set_field(const HostObjectRef& owner, std::string_view field, HostValue v) {
    HostObject& target = owner->backing ? *owner->backing : *owner;
    const HostClassDescriptor& cls = registry_->lookup_class(target.class_name);
    const FieldSpec* spec = cls.find_field(field);
    if (!spec || spec->is_static)
        throw Error(ErrorKind::NoSuchField,
                    owner->class_name + " has no field '" + std::string(field) + "'");
    if (!registry_->conforms(v, spec->type))
        throw Error(ErrorKind::TypeMismatch, "field " + owner->class_name + "." +
                                                 std::string(field) + " is " +
                                                 spec->type.to_string());
    target.fields[std::string(field)] = std::move(v);
}

HostValue& HostRuntime::static_slot(const HostClassDescriptor& cls, std::string_view field) {
    const FieldSpec* spec = cls.find_field(field);
    if (!spec || !spec->is_static)
        throw Error(ErrorKind::NoSuchField,
                    cls.name + " has no static field '" + std::string(field) + "'");
    auto key = std::make_pair(spec->declaring_class, std::string(field));
    auto it = statics_.find(key);
    if (it == statics_.end())
        it = statics_.emplace(key, spec->initial ? *spec->initial : zero_value(spec->type)).first;
    return it->second;
}

HostValue HostRuntime::get_static_field(std::string_view class_name, std::string_view field) {
    return static_slot(registry_->lookup_class(class_name), field);
}

void HostRuntime::set_static_field(std::string_view class_name, std::string_view field,
                                   HostValue v) {
    const HostClassDescriptor& cls = registry_->lookup_class(class_name);
    HostValue& slot = static_slot(cls, field);
    const TypeTag& tag = cls.find_field(field)->type;
    if (!registry_->conforms(v, tag))
        throw Error(ErrorKind::TypeMismatch, "static field " + cls.name + "." +
                                                 std::string(field) + " is " + tag.to_string());
    slot = std::move(v);
}

bool HostRuntime::fields_conform(const HostObject& obj) const {
    const HostClassDescriptor& cls = registry_->lookup_class(obj.class_name);
    size_t expected = 0;
    for (const auto& [name, f] : cls.fields) {
        if (f.is_static)
            continue;
        ++expected;
        auto it = obj.fields.find(name);
        if (it == obj.fields.end() || !registry_->conforms(it->second, f.type))
            return false;
    }
    return obj.fields.size() == expected;
}

// ---------------------------------------------------------------------------
// Arrays

HostArrayRef HostRuntime::array_new(const TypeTag& element, std::int64_t length) {
    if (length < 0)
        throw Error(ErrorKind::IndexOutOfBounds, "negative array length " + std::to_string(length));
    if (element.kind == TypeTag::Kind::Void)
        throw Error(ErrorKind::TypeMismatch, "arrays of void are not allowed");
    TypeTag tag = element;
    if (tag.kind == TypeTag::Kind::Class || tag.kind == TypeTag::Kind::Interface) {
        const HostClassDescriptor& cls = registry_->lookup_class(tag.name);
        tag.kind = cls.is_interface() ? TypeTag::Kind::Interface : TypeTag::Kind::Class;
    }
    auto a = std::make_shared<HostArray>();
    a->element = tag;
    a->id = next_id();
    a->elements.assign(static_cast<size_t>(length), zero_value(tag));
    return a;
}

HostValue HostRuntime::array_get(const HostArrayRef& a, std::int64_t index) {
    if (index < 0 || index >= array_length(a))
        throw Error(ErrorKind::IndexOutOfBounds,
                    "index " + std::to_string(index) + " outside [0, " +
                        std::to_string(array_length(a)) + ")");
    return a->elements[static_cast<size_t>(index)];
}

void HostRuntime::array_set(const HostArrayRef& a, std::int64_t index, HostValue v) {
    if (index < 0 || index >= array_length(a))
        throw Error(ErrorKind::IndexOutOfBounds,
                    "index " + std::to_string(index) + " outside [0, " +
                        std::to_string(array_length(a)) + ")");
    if (!registry_->conforms(v, a->element))
        throw Error(ErrorKind::TypeMismatch, "array element is " + a->element.to_string());
    a->elements[static_cast<size_t>(index)] = std::move(v);
}

std::int64_t HostRuntime::array_length(const HostArrayRef& a) const {
    return static_cast<std::int64_t>(a->elements.size());
}

}  // namespace bs
